//! Verification pipelines: fixed step lists that rebuild the liaison
//! constructions on explicit curves and record every open-condition check.

use std::fmt;
use std::path::Path;
use std::str::FromStr;
use std::time::Duration;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::deficiency::{self, DeficiencyModule};
use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::geometry::{self, PointSet};
use crate::groebner::Ideal;
use crate::hilbert::{curve_invariants, hilbert_function, hilbert_polynomial, CurveInvariants};
use crate::io;
use crate::liaison::{self, LinkageSpec};
use crate::numerology;
use crate::report::{Recorder, Report};
use crate::resolution::{self, FreeResolution};
use crate::ring::{random_form, Ambient, MultiDegree, Ring};

/// Default compute budget for one pipeline run.
pub const DEFAULT_TIMEOUT_SECS: u64 = 20 * 60;

/// The budget, overridable through `LLAB_TIMEOUT_SECS`.
pub fn timeout_from_env() -> Duration {
    let secs = std::env::var("LLAB_TIMEOUT_SECS").ok().and_then(|s| s.trim().parse().ok()).unwrap_or(DEFAULT_TIMEOUT_SECS);
    Duration::from_secs(secs)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PipelineName {
    M124,
    M123,
    M123Sernesi,
    M133,
    M125u,
    MgnuRow(i64, i64),
    GeissRoundtrip,
}

impl PipelineName {
    pub const ALL: [PipelineName; 10] = [
        PipelineName::M124,
        PipelineName::M123,
        PipelineName::M123Sernesi,
        PipelineName::M133,
        PipelineName::M125u,
        PipelineName::MgnuRow(11, 6),
        PipelineName::MgnuRow(12, 5),
        PipelineName::MgnuRow(10, 5),
        PipelineName::MgnuRow(10, 6),
        PipelineName::GeissRoundtrip,
    ];

    /// Whether the starting curve is built in-process; otherwise it must be ingested.
    pub fn generates_fixture(&self) -> bool {
        matches!(
            self,
            PipelineName::M124 | PipelineName::M133 | PipelineName::MgnuRow(10, 6) | PipelineName::MgnuRow(10, 5) | PipelineName::GeissRoundtrip
        )
    }

    /// What an ingested fixture must contain.
    pub fn fixture_description(&self) -> &'static str {
        match self {
            PipelineName::M124 | PipelineName::GeissRoundtrip => "a genus-12 curve of bidegree (7,10) in P^1 x P^2",
            PipelineName::M123 | PipelineName::M123Sernesi => "a genus-12 curve of degree 12 in P^3",
            PipelineName::M133 | PipelineName::MgnuRow(10, 6) => "a genus-10 curve of degree 12 in P^3",
            PipelineName::M125u => "a genus-9 curve of degree 15 in P^6",
            PipelineName::MgnuRow(11, 6) => "a genus-11 curve of degree 14 in P^4",
            PipelineName::MgnuRow(12, 5) => "a genus-12 curve of degree 17 in P^6",
            PipelineName::MgnuRow(10, 5) => "a genus-10 curve of degree 13 in P^4",
            PipelineName::MgnuRow(..) => "a curve matching the plan row",
        }
    }
}

impl fmt::Display for PipelineName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PipelineName::M124 => f.write_str("m124"),
            PipelineName::M123 => f.write_str("m123"),
            PipelineName::M123Sernesi => f.write_str("m123-sernesi"),
            PipelineName::M133 => f.write_str("m133"),
            PipelineName::M125u => f.write_str("m125u"),
            PipelineName::MgnuRow(g, m) => write!(f, "mgnu-row({g},{m})"),
            PipelineName::GeissRoundtrip => f.write_str("geiss-roundtrip"),
        }
    }
}

impl FromStr for PipelineName {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let name = match s {
            "m124" => PipelineName::M124,
            "m123" => PipelineName::M123,
            "m123-sernesi" => PipelineName::M123Sernesi,
            "m133" => PipelineName::M133,
            "m125u" => PipelineName::M125u,
            "geiss-roundtrip" => PipelineName::GeissRoundtrip,
            _ => {
                let inner = s
                    .strip_prefix("mgnu-row(")
                    .and_then(|r| r.strip_suffix(')'))
                    .or_else(|| s.strip_prefix("mgnu-row-"))
                    .ok_or_else(|| Error::Precondition(format!("unknown pipeline `{s}`")))?;
                let (g, m) = inner
                    .split_once(',')
                    .or_else(|| inner.split_once('-'))
                    .and_then(|(g, m)| Some((g.trim().parse().ok()?, m.trim().parse().ok()?)))
                    .ok_or_else(|| Error::Precondition(format!("bad plan row `{s}`")))?;
                let row = PipelineName::MgnuRow(g, m);
                if plan_row(g, m).is_none() {
                    return Err(Error::Precondition(format!("no plan row for g={g}, m={m}")));
                }
                row
            }
        };
        Ok(name)
    }
}

fn plan_row(g: i64, m: i64) -> Option<numerology::LiaisonPlan> {
    numerology::liaison_plan_table().ok()?.into_iter().find(|r| r.g == g && r.m == m)
}

/// Where the starting curve comes from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FixtureSource {
    Generated,
    File(std::path::PathBuf),
}

#[derive(Clone, Debug)]
pub struct PipelineSpec {
    pub name: PipelineName,
    pub prime: u32,
    pub seed: u64,
    pub fixture: FixtureSource,
}

impl PipelineSpec {
    pub fn new(name: PipelineName, prime: u32, seed: u64) -> Self {
        PipelineSpec { name, prime, seed, fixture: FixtureSource::Generated }
    }

    pub fn with_fixture(mut self, path: impl Into<std::path::PathBuf>) -> Self {
        self.fixture = FixtureSource::File(path.into());
        self
    }
}

/// Independent RNG stream for a named step, derived from the master seed.
pub fn sub_seed(seed: u64, tag: &str) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in tag.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x100_0000_01b3);
    }
    h ^ seed.wrapping_mul(0x9e37_79b9_7f4a_7c15)
}

/// `dim I_d`
pub fn hypersurface_count(ideal: &Ideal, deg: &MultiDegree) -> i64 {
    ideal.ring().monomial_count(deg) as i64 - hilbert_function(ideal, deg)
}

fn short(inv: &CurveInvariants) -> String {
    format!("({}, g{})", inv.degree_display(), inv.genus)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FixtureKind {
    Rational { d: i64, r: usize },
    RationalBi { d1: i64, d2: i64 },
    Ci { a: i64, b: i64 },
    Genus10Deg12P3,
    Genus10Deg13P4,
    Genus10Octic,
    Genus12Geiss,
}

impl fmt::Display for FixtureKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FixtureKind::Rational { d, r } => write!(f, "rational({d},{r})"),
            FixtureKind::RationalBi { d1, d2 } => write!(f, "rational-bi({d1},{d2})"),
            FixtureKind::Ci { a, b } => write!(f, "ci({a},{b})"),
            FixtureKind::Genus10Deg12P3 => f.write_str("genus10-deg12-P3"),
            FixtureKind::Genus10Deg13P4 => f.write_str("genus10-deg13-P4"),
            FixtureKind::Genus10Octic => f.write_str("genus10-deg12-P3-octic"),
            FixtureKind::Genus12Geiss => f.write_str("genus12-geiss"),
        }
    }
}

impl FromStr for FixtureKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Precondition(format!("unknown fixture kind `{s}`"));
        let args = |prefix: &str| -> Option<(i64, i64)> {
            let inner = s.strip_prefix(prefix)?.strip_prefix('(')?.strip_suffix(')')?;
            let (a, b) = inner.split_once(',')?;
            Some((a.trim().parse().ok()?, b.trim().parse().ok()?))
        };
        match s.trim() {
            "genus10-deg12-P3" => Ok(FixtureKind::Genus10Deg12P3),
            "genus10-deg13-P4" => Ok(FixtureKind::Genus10Deg13P4),
            "genus10-deg12-P3-octic" => Ok(FixtureKind::Genus10Octic),
            "genus12-geiss" => Ok(FixtureKind::Genus12Geiss),
            _ => {
                if let Some((d1, d2)) = args("rational-bi") {
                    Ok(FixtureKind::RationalBi { d1, d2 })
                } else if let Some((d, r)) = args("rational") {
                    if r < 1 {
                        return Err(bad());
                    }
                    Ok(FixtureKind::Rational { d, r: r as usize })
                } else if let Some((a, b)) = args("ci") {
                    Ok(FixtureKind::Ci { a, b })
                } else {
                    Err(bad())
                }
            }
        }
    }
}

/// A constructed curve and how it was obtained.
#[derive(Clone, Debug)]
pub struct Fixture {
    pub kind: FixtureKind,
    pub seed: u64,
    pub ideal: Ideal,
    pub invariants: CurveInvariants,
    pub provenance: Vec<String>,
}

/// Builds a fixture. The genus-10 and genus-12 kinds are certified (smooth,
/// expected invariants) and resampled up to 5 times.
pub fn fixture_build(kind: FixtureKind, prime: u32, seed: u64) -> Result<Fixture> {
    let field = PrimeField::new(prime)?;
    let mut provenance = vec![format!("kind {kind}, prime {prime}, seed {seed}")];
    let ideal = match kind {
        FixtureKind::Rational { d, r } => geometry::random_rational_curve_pr(field, d, r, seed)?,
        FixtureKind::RationalBi { d1, d2 } => geometry::random_rational_curve_bip(field, d1, d2, seed)?,
        FixtureKind::Ci { a, b } => {
            let ring = Ring::projective(field, 3);
            let f = random_form(&ring, &MultiDegree::single(a), sub_seed(seed, "ci-a"))?;
            let g = random_form(&ring, &MultiDegree::single(b), sub_seed(seed, "ci-b"))?;
            Ideal::new(&ring, vec![f, g])?
        }
        FixtureKind::Genus10Deg12P3 => genus10_plane_model(field, seed, 6, &mut provenance)?,
        FixtureKind::Genus10Deg13P4 => genus10_plane_model(field, seed, 5, &mut provenance)?,
        FixtureKind::Genus10Octic => genus10_octic(field, seed, &mut provenance)?,
        FixtureKind::Genus12Geiss => genus12_geiss(field, seed, &mut provenance)?.0,
    };
    let invariants = curve_invariants(&ideal)?;
    provenance.push(format!("invariants {invariants}"));
    Ok(Fixture { kind, seed, ideal, invariants, provenance })
}

/// A general genus-10 curve as a plane nonic with 18 general nodes, embedded
/// by `K - D` for `D` a sum of `points` points: sextics through the nodes and
/// `D`. Six points give degree 12 in `P^3`, five give degree 13 in `P^4`.
fn genus10_plane_model(field: PrimeField, seed: u64, points: usize, provenance: &mut Vec<String>) -> Result<Ideal> {
    let degree = 54 - 36 - points as i64;
    let mut last = String::new();
    for attempt in 0..5u64 {
        let s = sub_seed(seed.wrapping_add(attempt), "genus10-plane");
        let c = match geometry::nodal_plane_model(field, 9, 18, 6, points, s) {
            Ok(c) => c,
            Err(e) => {
                last = e.to_string();
                continue;
            }
        };
        let inv = curve_invariants(&c)?;
        if inv.degree == [degree] && inv.genus == 10 && geometry::is_smooth_curve(&c)?.smooth {
            provenance.push(format!("18-nodal plane nonic (seed {s}) embedded by sextics through the nodes and {points} points"));
            return Ok(c);
        }
        last = format!("image {inv}");
    }
    Err(Error::ResampleExhausted(5, last))
}

/// Genus 10 degree 12 as the residual of a rational octic in a (4,5) complete
/// intersection. Such curves lie on the quartic of the link.
fn genus10_octic(field: PrimeField, seed: u64, provenance: &mut Vec<String>) -> Result<Ideal> {
    let mut last = String::new();
    for attempt in 0..5u64 {
        let s = sub_seed(seed.wrapping_add(attempt), "genus10");
        let octic = geometry::random_rational_curve_pr(field, 8, 3, s)?;
        let spec = LinkageSpec::projective(3, &[4, 5], s)?;
        let link = match liaison::link_imposing_points(&octic, &spec) {
            Ok(l) => l.result,
            Err(e) => {
                last = e.to_string();
                continue;
            }
        };
        let v = liaison::verify_linkage(&link);
        if v.pass() && link.computed.degree == [12] && link.computed.genus == 10 {
            provenance.push(format!("rational octic (seed {s}) linked by a (4,5) complete intersection"));
            if attempt > 0 {
                provenance.push(format!("{attempt} earlier seeds rejected: {last}"));
            }
            return Ok(link.residual);
        }
        last = format!("link {} transversal {} smooth {}", link.computed, v.transversal, v.residual_smooth);
    }
    Err(Error::ResampleExhausted(5, last))
}

/// The genus-12 curve of bidegree (7,10) from a generated deficiency module,
/// with the module and the recovered truncated ideal.
fn genus12_geiss(field: PrimeField, seed: u64, provenance: &mut Vec<String>) -> Result<(Ideal, DeficiencyModule, Ideal)> {
    let ring = Ring::cox_p1p2(field);
    let mut last = String::new();
    for attempt in 0..5u64 {
        let s = sub_seed(seed.wrapping_add(attempt), "geiss");
        let k = match deficiency::generate_k_family(&ring, s) {
            Ok(k) => k,
            Err(e) => {
                last = e.to_string();
                continue;
            }
        };
        let rec = match deficiency::recover_ideal_from_k(&k, &deficiency::geiss_f1_dual(), s) {
            Ok(r) => r,
            Err(e) => {
                last = e.to_string();
                continue;
            }
        };
        let inv = curve_invariants(&rec.ideal)?;
        if inv.degree == [7, 10] && inv.genus == 12 && geometry::is_smooth_curve(&rec.ideal)?.smooth {
            provenance.push(format!("deficiency module from inverse systems (seed {s}), ideal recovered from it"));
            return Ok((rec.ideal, k, rec.truncated));
        }
        last = format!("recovered {inv}");
    }
    Err(Error::ResampleExhausted(5, last))
}

/// Reads a fixture file; the result is saturated.
pub fn ingest_ideal(path: &Path, prime: u32) -> Result<io::Ingested> {
    io::ingest_ideal(path, Some(prime))
}

/// Step recording for one run. Every helper returns `None` (or `false`) once
/// a mandatory check fails, which aborts the pipeline.
struct Run {
    rec: Recorder,
    prime: u32,
    seed: u64,
}

macro_rules! need {
    ($e:expr) => {
        match $e {
            Some(v) => v,
            None => return None,
        }
    };
}

impl Run {
    fn check(&self, name: &str, predicted: impl ToString, computed: impl ToString, pass: bool) -> Option<()> {
        self.rec.record(name, predicted, computed, pass).then_some(())
    }

    fn eq<T: PartialEq + ToString>(&self, name: &str, predicted: T, computed: T) -> Option<()> {
        let pass = predicted == computed;
        self.check(name, predicted, computed, pass)
    }

    fn ok<T>(&self, name: &str, r: Result<T>) -> Option<T> {
        match r {
            Ok(v) => Some(v),
            Err(e) => {
                self.rec.record(name, "-", format!("error: {e}"), false);
                None
            }
        }
    }

    fn rng(&self, tag: &str) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(sub_seed(self.seed, tag))
    }

    /// Invariants and smoothness of a curve.
    fn curve(&self, label: &str, ideal: &Ideal, degree: &[i64], genus: i64) -> Option<CurveInvariants> {
        let name = format!("{label}: invariants");
        let inv = need!(self.ok(&name, curve_invariants(ideal)));
        let want = format!("({}, g{genus})", fmt_degree(degree));
        need!(self.check(&name, want, short(&inv), inv.degree == degree && inv.genus == genus));
        let name = format!("{label}: smooth");
        let sm = need!(self.ok(&name, geometry::is_smooth_curve(ideal)));
        need!(self.check(&name, true, sm.smooth, sm.smooth));
        Some(inv)
    }

    /// `dim I_deg` against the Riemann–Roch count; `exact` demands equality.
    fn forms(&self, label: &str, ideal: &Ideal, inv: &CurveInvariants, deg: &MultiDegree, exact: bool) -> Option<i64> {
        let name = format!("{label}: forms of degree {deg}");
        let want = need!(self.ok(&name, numerology::expected_hypersurfaces(inv, deg)));
        let got = hypersurface_count(ideal, deg);
        let pass = if exact { got == want } else { got >= want };
        need!(self.check(&name, if exact { want.to_string() } else { format!(">= {want}") }, got, pass));
        Some(got)
    }

    /// A link through general members of `spec` (and its imposed points).
    fn link(&self, label: &str, ideal: &Ideal, inv: &CurveInvariants, spec: &LinkageSpec) -> Option<liaison::PointLinkage> {
        let name = format!("{label}: residual");
        let predicted = need!(self.ok(&name, liaison::predicted_link(inv, spec)));
        let pl = need!(self.ok(&name, liaison::link_imposing_points(ideal, spec)));
        let r = &pl.result;
        need!(self.eq(&name, short(&predicted), short(&r.computed)));
        let v = liaison::verify_linkage(r);
        let meet = if r.transversal { format!("{} reduced points", r.intersection_degree) } else { "not reduced".into() };
        need!(self.check(&format!("{label}: transversal"), "reduced", meet, v.transversal));
        need!(self.eq(&format!("{label}: intersection length"), ci_meet(r), r.intersection_degree));
        need!(self.check(&format!("{label}: residual smooth"), true, r.residual_smooth, r.residual_smooth));
        if !pl.points.is_empty() {
            need!(self.check(&format!("{label}: imposed points on residual"), pl.points.len(), if pl.on_residual { pl.points.len() } else { 0 }, pl.on_residual));
        }
        Some(pl)
    }

    fn petri(&self, label: &str, ideal: &Ideal, inv: &CurveInvariants, r: i64) -> Option<()> {
        let name = format!("{label}: Petri map injective");
        let (h0, _) = need!(self.ok(&name, numerology::serre_dual_counts(inv.genus, inv.degree[0], r)));
        let omega = need!(self.ok(&name, resolution::canonical_module(ideal)));
        let p = resolution::petri_check(&omega);
        let want = h0 * (r + 1);
        self.check(&name, format!("rank {want}"), format!("rank {}", p.rank), p.injective && p.rank as i64 == want)
    }

    fn points(&self, tag: &str, ring: &Ring, n: usize) -> Option<PointSet> {
        let mut rng = self.rng(tag);
        self.ok("random points", PointSet::random(ring, n, &mut rng))
    }
}

fn fmt_degree(d: &[i64]) -> String {
    match d {
        [x] => x.to_string(),
        xs => format!("({})", xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")),
    }
}

/// Length of `C ∩ C'` forced by `p_a(Y) - 1 = p_a(C) + p_a(C') - 2 + #(C ∩ C')`.
fn ci_meet(r: &liaison::LinkageResult) -> i64 {
    r.ci.genus - r.original.genus - r.computed.genus + 1
}

/// Length of a zero-dimensional scheme.
fn scheme_length(ideal: &Ideal) -> Result<i64> {
    let hp = hilbert_polynomial(ideal)?;
    if hp.polynomial.total_degree() > 0 {
        return Err(Error::UnexpectedShape("not zero-dimensional".into()));
    }
    hp.polynomial.eval(&vec![0; ideal.ring().grading_rank()]).ok_or_else(|| Error::UnexpectedShape("non-constant Hilbert polynomial".into()))
}

/// Genus 10, degree 12 in `P^3`: link through 3 points by two quintics to a
/// genus-13 degree-13 curve on exactly 3 quintics with injective Petri map.
fn m133(run: &Run, c: &Ideal) -> Option<()> {
    let inv = need!(run.curve("C", c, &[12], 10));
    let quintic = MultiDegree::single(5);
    need!(run.forms("C", c, &inv, &quintic, true));
    let pts = need!(run.points("m133-points", c.ring(), 3));
    let spec = need!(run.ok("C -> C'", LinkageSpec::projective(3, &[5, 5], sub_seed(run.seed, "m133-link")).and_then(|s| s.with_points(pts))));
    let pl = need!(run.link("C -> C'", c, &inv, &spec));
    let c2 = &pl.result.residual;
    let inv2 = pl.result.computed.clone();
    need!(run.forms("C'", c2, &inv2, &quintic, true));
    run.petri("C'", c2, &inv2, 3)
}

/// A row of the liaison plan: the Serre-dual divisor gives `m` points, the
/// link and its reversal through `n - m` further points give the rest.
fn mgnu_row(run: &Run, c: &Ideal, row: &numerology::LiaisonPlan) -> Option<()> {
    let inv = need!(run.curve("C", c, &[row.d], row.g));
    let (h0, dual) = need!(run.ok("Serre dual", numerology::serre_dual_counts(row.g, row.d, row.r)));
    need!(run.check("Serre dual: h0 and degree", format!("h0 >= 1, degree {}", row.m), format!("h0 {h0}, degree {dual}"), h0 >= 1 && dual == row.m));
    let h = MultiDegree::single(row.h);
    let count = need!(run.forms("C", c, &inv, &h, false));
    need!(run.check("C: enough forms for the link", format!(">= {}", row.count), count, count >= row.count as i64));
    let spec = need!(run.ok("C -> C'", row.spec(sub_seed(run.seed, "row-link"))));
    let pl = need!(run.link("C -> C'", c, &inv, &spec));
    let link = &pl.result;
    need!(run.eq("C': plan row", format!("({}, g{})", row.d_prime, row.g_prime), short(&link.computed)));
    let back = need!(run.ok("C' -> C", liaison::link_residual(&link.residual, &pl.forms)));
    need!(run.check("C' -> C: returns C", true, back.residual.equals(c), back.residual.equals(c)));
    let sections = need!(run.ok("C: Serre-dual sections", resolution::serre_dual_sections(&back)));
    need!(run.eq("C: Serre-dual sections", h0, sections.len() as i64));
    let div = need!(run.ok("C: dual divisor", resolution::divisor_of_dual_section(&back, 0).and_then(|d| scheme_length(&d))));
    need!(run.eq("C: dual divisor length", row.m, div));
    let inv2 = link.computed.clone();
    let count2 = need!(run.forms("C'", &link.residual, &inv2, &h, true));
    let extra = count2 - row.count as i64;
    need!(run.eq("marked points n = m + extra", row.n, row.m + extra));
    if extra < 1 {
        return Some(());
    }
    let pts = need!(run.points("row-points", c.ring(), extra as usize));
    let spec = need!(run.ok("C' -> C''", row.spec(sub_seed(run.seed, "row-relink")).and_then(|s| s.with_points(pts))));
    let pl2 = need!(run.link("C' -> C''", &link.residual, &inv2, &spec));
    need!(run.eq("C'': invariants of C", short(&inv), short(&pl2.result.computed)));
    Some(())
}

/// Genus 12 bidegree (7,10): link by two (2,4)-forms to genus 4 bidegree
/// (9,6), then back through 4 general points.
fn m124(run: &Run, c: &Ideal) -> Option<()> {
    let inv = need!(run.curve("C", c, &[7, 10], 12));
    let d24 = MultiDegree::bi(2, 4);
    need!(run.forms("C", c, &inv, &d24, true));
    let spec = need!(run.ok("C -> C'", LinkageSpec::p1p2([(2, 4), (2, 4)], sub_seed(run.seed, "m124-link"))));
    let pl = need!(run.link("C -> C'", c, &inv, &spec));
    let c2 = pl.result.residual.clone();
    let inv2 = pl.result.computed.clone();
    need!(run.curve("C'", &c2, &[9, 6], 4));
    need!(run.forms("C'", &c2, &inv2, &d24, true));
    let pts = need!(run.points("m124-points", c.ring(), 4));
    let spec = need!(run.ok("C' -> C''", LinkageSpec::p1p2([(2, 4), (2, 4)], sub_seed(run.seed, "m124-relink")).and_then(|s| s.with_points(pts))));
    let pl2 = need!(run.link("C' -> C''", &c2, &inv2, &spec));
    need!(run.curve("C''", &pl2.result.residual, &[7, 10], 12));
    Some(())
}

/// Genus 9 degree 15 in `P^6`: link by five quadrics through one point to a
/// non-degenerate genus-12 degree-17 curve.
fn m125u(run: &Run, c: &Ideal) -> Option<()> {
    let inv = need!(run.curve("C'", c, &[15], 9));
    let q = MultiDegree::single(2);
    need!(run.forms("C'", c, &inv, &q, true));
    let pts = need!(run.points("m125u-points", c.ring(), 1));
    let spec = need!(run.ok("C' -> C", LinkageSpec::projective(6, &[2; 5], sub_seed(run.seed, "m125u-link")).and_then(|s| s.with_points(pts))));
    let pl = need!(run.link("C' -> C", c, &inv, &spec));
    let c2 = &pl.result.residual;
    let lin = hypersurface_count(c2, &MultiDegree::single(1));
    need!(run.eq("C: non-degenerate (hyperplanes)", 0, lin));
    need!(run.forms("C", c2, &pl.result.computed, &q, true));
    let (h0, dual) = need!(run.ok("C: Serre dual", numerology::serre_dual_counts(12, 17, 6)));
    need!(run.check("C: Serre dual divisor", "h0 1, degree 5", format!("h0 {h0}, degree {dual}"), h0 == 1 && dual == 5));
    Some(())
}

fn geiss_betti() -> Vec<Vec<MultiDegree>> {
    let rep = |v: &[((i64, i64), usize)]| -> Vec<MultiDegree> {
        let mut out: Vec<MultiDegree> = v.iter().flat_map(|&((a, b), n)| vec![MultiDegree::bi(a, b); n]).collect();
        out.sort();
        out
    };
    vec![rep(&[((4, 4), 9), ((4, 3), 3)]), rep(&[((5, 4), 10), ((4, 5), 7)]), rep(&[((5, 5), 6)])]
}

/// Truncation, deficiency module, resolution shape and recovery for the
/// genus-12 curve of bidegree (7,10).
fn geiss_roundtrip(run: &Run, c: &Ideal, generated: Option<&DeficiencyModule>) -> Option<()> {
    let want = deficiency::geiss_table();
    if let Some(k) = generated {
        need!(run.eq("generated K: Hilbert table", fmt_table(&want), fmt_table(&k.table)));
    }
    let inv = need!(run.curve("C", c, &[7, 10], 12));
    let tr = need!(run.ok("truncation at (4,3)", deficiency::truncate_ideal(c, &MultiDegree::bi(4, 3))));
    let res = need!(run.ok("resolution of I'", FreeResolution::of_ideal(&tr, 4)));
    let mut shape: Vec<Vec<MultiDegree>> = res.modules.iter().skip(1).cloned().collect();
    for m in &mut shape {
        m.sort();
    }
    let got = (1..res.modules.len()).map(|i| res.module_string(i)).collect::<Vec<_>>().join(" <- ");
    need!(run.check("resolution of I': Betti shape", "R(-4,-4)^9+R(-4,-3)^3 <- R(-5,-4)^10+R(-4,-5)^7 <- R(-5,-5)^6", got, shape == geiss_betti()));
    let k = need!(run.ok("deficiency module", deficiency::deficiency_module(&tr)));
    need!(run.eq("deficiency module: Hilbert table", fmt_table(&want), fmt_table(&k.table)));
    let rec = need!(run.ok("recovery from K", deficiency::recover_ideal_from_k(&k, &deficiency::geiss_f1_dual(), sub_seed(run.seed, "geiss-recover"))));
    need!(run.check("recovery from K: truncated ideal", true, rec.truncated.equals(&tr), rec.truncated.equals(&tr)));
    need!(run.check("recovery from K: saturation", true, rec.ideal.equals(c), rec.ideal.equals(c)));
    need!(run.forms("C", c, &inv, &MultiDegree::bi(2, 4), true));
    Some(())
}

fn fmt_table(t: &std::collections::BTreeMap<MultiDegree, i64>) -> String {
    t.iter().map(|(d, n)| format!("{d}:{n}")).collect::<Vec<_>>().join(" ")
}

/// Genus 12 degree 12 in `P^3` linked by quintics to genus 15 degree 13;
/// relinking through 3 general points marks them on a new genus-12 curve.
fn quintic_relink(run: &Run, c: &Ideal) -> Option<(liaison::PointLinkage, CurveInvariants)> {
    let inv = need!(run.curve("C", c, &[12], 12));
    let quintic = MultiDegree::single(5);
    need!(run.forms("C", c, &inv, &quintic, true));
    need!(run.petri("C", c, &inv, 3));
    let spec = need!(run.ok("C -> C'", LinkageSpec::projective(3, &[5, 5], sub_seed(run.seed, "m123-link"))));
    let pl = need!(run.link("C -> C'", c, &inv, &spec));
    need!(run.forms("C'", &pl.result.residual, &pl.result.computed, &quintic, true));
    Some((pl, inv))
}

fn mark_three(run: &Run, link: &liaison::LinkageResult) -> Option<()> {
    let pts = need!(run.points("m123-points", link.residual.ring(), 3));
    let spec = need!(run.ok("C' -> C''", LinkageSpec::projective(3, &[5, 5], sub_seed(run.seed, "m123-relink")).and_then(|s| s.with_points(pts))));
    let pl = need!(run.link("C' -> C''", &link.residual, &link.computed, &spec));
    need!(run.curve("C''", &pl.result.residual, &[12], 12));
    Some(())
}

fn m123_sernesi(run: &Run, c: &Ideal) -> Option<()> {
    let (pl, _) = need!(quintic_relink(run, c));
    mark_three(run, &pl.result)
}

/// The full chain: quintic link, Serre-dual model in `P^4`, link by three
/// cubics to genus 9 degree 12 whose Serre-dual divisor has degree 4.
fn m123(run: &Run, c: &Ideal) -> Option<()> {
    let (pl, _) = need!(quintic_relink(run, c));
    let link = &pl.result;
    let (h0, dual) = need!(run.ok("C': Serre dual", numerology::serre_dual_counts(15, 13, 3)));
    let sections = need!(run.ok("C': Serre-dual sections", resolution::serre_dual_sections(link)));
    need!(run.eq("C': Serre-dual sections", h0, sections.len() as i64));
    let d = need!(run.ok("C': Serre-dual model", resolution::serre_dual_embed(link)));
    let inv_d = need!(run.curve("C' in P^4", &d, &[dual], 15));
    let cubic = MultiDegree::single(3);
    need!(run.forms("C' in P^4", &d, &inv_d, &cubic, false));
    let spec = need!(run.ok("C' -> C'''", LinkageSpec::projective(4, &[3, 3, 3], sub_seed(run.seed, "m123-cubics"))));
    let pl3 = need!(run.link("C' -> C'''", &d, &inv_d, &spec));
    let (h0, dual) = need!(run.ok("C''': Serre dual", numerology::serre_dual_counts(9, 12, 4)));
    let s3 = need!(run.ok("C''': Serre-dual sections", resolution::serre_dual_sections(&pl3.result)));
    need!(run.eq("C''': Serre-dual sections", h0, s3.len() as i64));
    let div = need!(run.ok("C''': dual divisor", resolution::divisor_of_dual_section(&pl3.result, 0).and_then(|d| scheme_length(&d))));
    need!(run.eq("C''': dual divisor length", dual, div));
    mark_three(run, link)
}

/// Runs a pipeline within the budget from `LLAB_TIMEOUT_SECS`.
pub fn run_pipeline(spec: &PipelineSpec) -> Result<Report> {
    run_pipeline_with_budget(spec, timeout_from_env())
}

/// Runs a pipeline on a worker thread. When the budget runs out the partial
/// record is returned with an inconclusive final step.
pub fn run_pipeline_with_budget(spec: &PipelineSpec, budget: Duration) -> Result<Report> {
    PrimeField::new(spec.prime)?;
    if spec.fixture == FixtureSource::Generated && !spec.name.generates_fixture() {
        return Err(Error::MissingFixture(format!(
            "{} runs on an ingested fixture: pass --fixture FILE with {}",
            spec.name,
            spec.name.fixture_description()
        )));
    }
    let rec = Recorder::new();
    let (tx, rx) = std::sync::mpsc::channel();
    let (worker_spec, worker_rec) = (spec.clone(), rec.clone());
    std::thread::Builder::new().name(format!("pipeline-{}", spec.name)).stack_size(256 << 20).spawn(move || {
        execute(&worker_spec, worker_rec);
        let _ = tx.send(());
    })?;
    match rx.recv_timeout(budget) {
        Ok(()) => {}
        Err(std::sync::mpsc::RecvTimeoutError::Timeout) => rec.timeout("compute budget"),
        Err(std::sync::mpsc::RecvTimeoutError::Disconnected) => {
            rec.record("worker", "-", "panicked", false);
        }
    }
    Ok(Report::new(&spec.name.to_string(), spec.prime, spec.seed, rec.steps()))
}

fn execute(spec: &PipelineSpec, rec: Recorder) {
    let run = Run { rec, prime: spec.prime, seed: spec.seed };
    let _ = execute_steps(spec, &run);
}

fn execute_steps(spec: &PipelineSpec, run: &Run) -> Option<()> {
    let field = need!(run.ok("prime", PrimeField::new(run.prime)));
    let want = spec.name.fixture_description();
    let fseed = sub_seed(run.seed, "fixture");
    let mut generated_k = None;
    let c = match &spec.fixture {
        FixtureSource::File(path) => {
            let got = need!(run.ok("fixture", ingest_ideal(path, run.prime)));
            let note = if got.saturated_on_ingest { "ingested, saturated on ingest" } else { "ingested, saturated" };
            need!(run.check("fixture", want, note, true));
            got.ideal
        }
        FixtureSource::Generated => {
            let mut prov = Vec::new();
            let ideal = match spec.name {
                PipelineName::M124 | PipelineName::GeissRoundtrip => {
                    let (ideal, k, _) = need!(run.ok("fixture", genus12_geiss(field, fseed, &mut prov)));
                    generated_k = Some(k);
                    ideal
                }
                PipelineName::MgnuRow(10, 5) => need!(run.ok("fixture", genus10_plane_model(field, fseed, 5, &mut prov))),
                _ => need!(run.ok("fixture", genus10_plane_model(field, fseed, 6, &mut prov))),
            };
            need!(run.check("fixture", want, prov.join("; "), true));
            ideal
        }
    };
    let expected_ring = match spec.name {
        PipelineName::M124 | PipelineName::GeissRoundtrip => Some(Ambient::P1xP2),
        PipelineName::M123 | PipelineName::M123Sernesi | PipelineName::M133 => Some(Ambient::Projective(3)),
        PipelineName::M125u => Some(Ambient::Projective(6)),
        PipelineName::MgnuRow(g, m) => plan_row(g, m).map(|r| Ambient::Projective(r.r as usize)),
    };
    let amb = c.ring().ambient();
    need!(run.check("fixture: ambient", fmt_ambient(expected_ring), fmt_ambient(amb), amb == expected_ring));
    match spec.name {
        PipelineName::M133 => m133(run, &c),
        PipelineName::M124 => m124(run, &c),
        PipelineName::M123 => m123(run, &c),
        PipelineName::M123Sernesi => m123_sernesi(run, &c),
        PipelineName::M125u => m125u(run, &c),
        PipelineName::GeissRoundtrip => geiss_roundtrip(run, &c, generated_k.as_ref()),
        PipelineName::MgnuRow(g, m) => {
            let row = need!(run.ok("plan row", plan_row(g, m).ok_or_else(|| Error::Precondition(format!("no plan row ({g},{m})")))));
            mgnu_row(run, &c, &row)
        }
    }
}

fn fmt_ambient(a: Option<Ambient>) -> String {
    match a {
        Some(Ambient::Projective(r)) => format!("P^{r}"),
        Some(Ambient::P1xP2) => "P^1 x P^2".into(),
        None => "unrecognized ring".into(),
    }
}

/// Writes the fixture ideal in the ideal-file format.
pub fn export_fixture(fixture: &Fixture, path: &Path) -> Result<()> {
    io::export_ideal(&fixture.ideal, path)
}
