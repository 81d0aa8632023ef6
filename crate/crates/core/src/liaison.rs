//! Geometric linkage through complete intersections.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{general_elements, intersection_is_transversal, is_smooth_curve, linear_system_through, PointSet};
use crate::groebner::Ideal;
use crate::hilbert::{curve_invariants, CurveInvariants};
use crate::ring::{Ambient, MultiDegree, Polynomial};

/// Degrees of the hypersurfaces cutting out the complete intersection `Y`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinkageSpec {
    pub ambient: Ambient,
    pub degrees: Vec<MultiDegree>,
    pub imposed_points: Option<PointSet>,
    pub seed: u64,
}

impl LinkageSpec {
    pub fn new(ambient: Ambient, degrees: Vec<MultiDegree>, imposed_points: Option<PointSet>, seed: u64) -> Result<Self> {
        match ambient {
            Ambient::Projective(r) => {
                if degrees.len() + 1 != r || degrees.iter().any(|d| d.0.len() != 1 || d.0[0] < 1) {
                    return Err(Error::Precondition(format!("P^{r} needs {} degrees >= 1", r - 1)));
                }
            }
            Ambient::P1xP2 => {
                if degrees.len() != 2 || degrees.iter().any(|d| d.0.len() != 2 || d.0.iter().any(|&x| x < 0) || d.total() == 0) {
                    return Err(Error::Precondition("P^1 x P^2 needs two nonzero bidegrees".into()));
                }
            }
        }
        if let Some(p) = &imposed_points {
            if p.ambient != ambient {
                return Err(Error::InvalidPoint("points live in another ambient".into()));
            }
        }
        Ok(LinkageSpec { ambient, degrees, imposed_points, seed })
    }

    pub fn projective(r: usize, degrees: &[i64], seed: u64) -> Result<Self> {
        Self::new(Ambient::Projective(r), degrees.iter().map(|&d| MultiDegree::single(d)).collect(), None, seed)
    }

    pub fn p1p2(degrees: [(i64, i64); 2], seed: u64) -> Result<Self> {
        Self::new(Ambient::P1xP2, degrees.iter().map(|&(a, b)| MultiDegree::bi(a, b)).collect(), None, seed)
    }

    pub fn with_points(mut self, pts: PointSet) -> Result<Self> {
        if pts.ambient != self.ambient {
            return Err(Error::InvalidPoint("points live in another ambient".into()));
        }
        self.imposed_points = Some(pts);
        Ok(self)
    }
}

/// Degree and arithmetic genus of the complete intersection itself.
pub fn ci_invariants(ambient: Ambient, degrees: &[MultiDegree]) -> CurveInvariants {
    match ambient {
        Ambient::Projective(r) => {
            let prod: i64 = degrees.iter().map(|d| d.0[0]).product();
            let sum: i64 = degrees.iter().map(|d| d.0[0]).sum();
            // 2 p_a - 2 = deg . (sum d_i - r - 1)
            let genus = (prod * (sum - r as i64 - 1)) / 2 + 1;
            CurveInvariants { ambient, dim: 1, degree: vec![prod], genus }
        }
        Ambient::P1xP2 => {
            let (a1, b1, a2, b2) = (degrees[0].0[0], degrees[0].0[1], degrees[1].0[0], degrees[1].0[1]);
            let d1 = b1 * b2;
            let d2 = a1 * b2 + a2 * b1;
            let genus = ((a1 + a2 - 2) * d1 + (b1 + b2 - 3) * d2) / 2 + 1;
            CurveInvariants { ambient, dim: 1, degree: vec![d1, d2], genus }
        }
    }
}

/// Invariants of the residual of a transversal link.
pub fn predicted_link(inv: &CurveInvariants, spec: &LinkageSpec) -> Result<CurveInvariants> {
    if inv.ambient != spec.ambient {
        return Err(Error::Precondition("ambient mismatch".into()));
    }
    let y = ci_invariants(spec.ambient, &spec.degrees);
    let degree: Vec<i64> = y.degree.iter().zip(&inv.degree).map(|(a, b)| a - b).collect();
    if degree.iter().any(|&d| d < 0) {
        return Err(Error::NotLinkable);
    }
    let twice = match spec.ambient {
        Ambient::Projective(r) => {
            let sum: i64 = spec.degrees.iter().map(|d| d.0[0]).sum();
            (sum - (r as i64 + 1)) * (inv.degree[0] - degree[0])
        }
        Ambient::P1xP2 => {
            let (a1, b1, a2, b2) = (spec.degrees[0].0[0], spec.degrees[0].0[1], spec.degrees[1].0[0], spec.degrees[1].0[1]);
            (a1 + a2 - 2) * (inv.degree[0] - degree[0]) + (b1 + b2 - 3) * (inv.degree[1] - degree[1])
        }
    };
    Ok(CurveInvariants { ambient: spec.ambient, dim: 1, degree, genus: inv.genus - twice / 2 })
}

/// A computed link `C ~ C'` through `Y`.
#[derive(Clone, Debug)]
pub struct LinkageResult {
    pub original_ideal: Ideal,
    pub residual: Ideal,
    pub original: CurveInvariants,
    pub predicted: CurveInvariants,
    pub computed: CurveInvariants,
    pub ci_ideal: Ideal,
    pub ci: CurveInvariants,
    pub transversal: bool,
    pub residual_smooth: bool,
    pub intersection_degree: i64,
}

/// Residual `(f_1..f_k) : I`, saturated, with its invariants and the
/// transversality/smoothness flags.
pub fn link_residual(ideal: &Ideal, forms: &[Polynomial]) -> Result<LinkageResult> {
    let ring = ideal.ring().clone();
    let ambient = ring.ambient().ok_or_else(|| Error::Precondition("unsupported ambient".into()))?;
    for (i, f) in forms.iter().enumerate() {
        if !ideal.contains(f) {
            return Err(Error::FormNotInIdeal(i));
        }
    }
    let degrees: Vec<MultiDegree> = forms.iter().map(|f| f.degree()).collect::<Result<_>>()?;
    let spec = LinkageSpec::new(ambient, degrees, None, 0)?;
    let y = Ideal::new(&ring, forms.to_vec())?;
    let expected = ring.nvars() as i64 - forms.len() as i64;
    let found = y.krull_dim();
    if found != expected {
        return Err(Error::NotCompleteIntersection { expected, found });
    }
    let residual = residual_ideal(&y, ideal)?.saturate(None)?;
    if residual.is_unit() {
        return Err(Error::EmptyResidual);
    }
    let original = curve_invariants(ideal)?;
    let computed = curve_invariants(&residual)?;
    let predicted = predicted_link(&original, &spec)?;
    let meet = intersection_is_transversal(ideal, &residual)?;
    let residual_smooth = is_smooth_curve(&residual)?.smooth;
    Ok(LinkageResult {
        original_ideal: ideal.clone(),
        residual,
        original,
        predicted,
        computed,
        ci_ideal: y,
        ci: ci_invariants(ambient, &spec.degrees),
        transversal: meet.transversal,
        residual_smooth,
        intersection_degree: meet.degree,
    })
}

/// `Y : I` as `Y : h` for a general `h` in `I`, certified by `(Y : h) I ⊆ Y`.
fn residual_ideal(y: &Ideal, ideal: &Ideal) -> Result<Ideal> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x11a1 ^ y.ring().field().p() as u64);
    for _ in 0..3 {
        let h = general_elements(ideal, 1, &mut rng)?.remove(0);
        let j = y.quotient_element(&h)?;
        let certified = j.gens().iter().all(|a| ideal.gens().iter().all(|b| y.contains(&a.mul(b))));
        if certified {
            return Ok(j);
        }
    }
    y.quotient(ideal)
}

/// Link through general members of the prescribed degrees containing `C`
/// and, when given, the imposed points.
pub fn link_imposing_points(ideal: &Ideal, spec: &LinkageSpec) -> Result<PointLinkage> {
    let ring = ideal.ring().clone();
    let pts = match &spec.imposed_points {
        Some(p) => p.clone(),
        None => PointSet::new(&ring, vec![])?,
    };
    let f = ring.field();
    let mut systems = Vec::new();
    for (k, d) in spec.degrees.iter().enumerate() {
        let sys = linear_system_through(ideal, &pts, d)?;
        let needed = spec.degrees[..=k].iter().filter(|e| *e == d).count();
        if sys.len() < needed {
            return Err(Error::SystemTooSmall { needed, found: sys.len() });
        }
        systems.push(sys);
    }
    let mut last = String::new();
    for attempt in 0..5u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(spec.seed.wrapping_add(attempt.wrapping_mul(0x9e37_79b9_7f4a_7c15)));
        let forms: Vec<Polynomial> = systems
            .iter()
            .map(|sys| {
                let mut g = Polynomial::zero(&ring);
                for b in sys {
                    g = g.combine(b, f.random(&mut rng));
                }
                g
            })
            .collect();
        match link_residual(ideal, &forms) {
            Ok(result) => {
                let on_residual = (0..pts.len()).all(|i| {
                    let c = pts.flat(i);
                    result.residual.gens().iter().all(|g| g.evaluate(&c) == 0)
                });
                return Ok(PointLinkage { result, points: pts, on_residual, forms });
            }
            Err(e @ (Error::NotCompleteIntersection { .. } | Error::CommonComponent(_))) => last = e.to_string(),
            Err(e) => return Err(e),
        }
    }
    Err(Error::ResampleExhausted(5, last))
}

/// A link through imposed points, with the evaluation check on the residual.
#[derive(Clone, Debug)]
pub struct PointLinkage {
    pub result: LinkageResult,
    pub points: PointSet,
    pub on_residual: bool,
    pub forms: Vec<Polynomial>,
}

/// Clause-by-clause verification of a link.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinkageVerification {
    pub invariants_match: bool,
    pub transversal: bool,
    pub residual_smooth: bool,
    pub omega_relation: bool,
    /// Invariants disagree on a non-transversal link: resample rather than
    /// treat as a counterexample.
    pub degenerate: bool,
}

impl LinkageVerification {
    pub fn pass(&self) -> bool {
        self.invariants_match && self.transversal && self.residual_smooth && self.omega_relation
    }

    pub fn clauses(&self) -> Vec<(&'static str, bool)> {
        vec![
            ("predicted = computed", self.invariants_match),
            ("transversal", self.transversal),
            ("residual smooth", self.residual_smooth),
            ("intersection degree", self.omega_relation),
        ]
    }
}

pub fn verify_linkage(result: &LinkageResult) -> LinkageVerification {
    let invariants_match = result.predicted == result.computed;
    let omega = result.ci.genus - result.original.genus - result.computed.genus + 1;
    LinkageVerification {
        invariants_match,
        transversal: result.transversal,
        residual_smooth: result.residual_smooth,
        omega_relation: omega == result.intersection_degree,
        degenerate: !invariants_match && !result.transversal,
    }
}
