//! Minimal graded free resolutions, canonical modules, the Petri map, and
//! Serre-dual models obtained through liaison.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::engine::{groebner, Buchberger, ModCtx, Vector};
use crate::error::{Error, Result};
use crate::geometry::minimal_ideal;
use crate::groebner::Ideal;
use crate::hilbert::{graded_piece, hilbert_polynomial};
use crate::liaison::LinkageResult;
use crate::linalg::Matrix;
use crate::ring::{MultiDegree, Polynomial, Ring};

/// A homogeneous element of a graded free module, one polynomial per basis element.
pub type Column = Vec<Polynomial>;

/// Matrix of a map `⊕ R(-b_j) → ⊕ R(-a_i)`, stored by columns.
#[derive(Clone, Debug)]
pub struct PolyMatrix {
    pub source: Vec<MultiDegree>,
    pub target: Vec<MultiDegree>,
    pub columns: Vec<Column>,
}

impl PolyMatrix {
    pub fn entry(&self, i: usize, j: usize) -> &Polynomial {
        &self.columns[j][i]
    }

    /// `self ∘ other`
    pub fn compose(&self, other: &PolyMatrix, ring: &Arc<Ring>) -> Vec<Column> {
        other
            .columns
            .iter()
            .map(|c| {
                (0..self.target.len())
                    .map(|i| {
                        let mut acc = Polynomial::zero(ring);
                        for (k, p) in c.iter().enumerate() {
                            if !p.is_zero() {
                                acc = acc.add(&self.columns[k][i].mul(p));
                            }
                        }
                        acc
                    })
                    .collect()
            })
            .collect()
    }

    /// Transpose, a map between the dual modules (degrees negated).
    pub fn transpose(&self) -> PolyMatrix {
        let neg = |d: &MultiDegree| MultiDegree(d.0.iter().map(|x| -x).collect());
        PolyMatrix {
            source: self.target.iter().map(neg).collect(),
            target: self.source.iter().map(neg).collect(),
            columns: (0..self.target.len()).map(|i| self.columns.iter().map(|c| c[i].clone()).collect()).collect(),
        }
    }
}

/// Total weight of a multidegree, matching `Ring::mon_degree`.
pub(crate) fn total(_ring: &Ring, d: &MultiDegree) -> i64 {
    d.0.iter().sum()
}

pub(crate) fn column_degree(col: &[Polynomial], target: &[MultiDegree]) -> Option<MultiDegree> {
    col.iter().zip(target).find(|(p, _)| !p.is_zero()).map(|(p, t)| &p.degree().expect("homogeneous entry") + t)
}

pub(crate) fn to_vector(ctx: &ModCtx, col: &[Polynomial], offset: u32) -> Vector {
    let mut v: Vector = Vec::new();
    for (i, p) in col.iter().enumerate() {
        v.extend(ctx.from_poly(p, i as u32 + offset));
    }
    ctx.sort(&mut v);
    v
}

pub(crate) fn from_vector(ctx: &ModCtx, v: &Vector, offset: u32, rank: usize) -> Column {
    (0..rank).map(|i| ctx.component(v, i as u32 + offset)).collect()
}

pub(crate) fn module_ctx(ring: &Arc<Ring>, degrees: &[MultiDegree]) -> ModCtx {
    ModCtx::new(ring, degrees.iter().map(|d| total(ring, d)).collect(), 0)
}

/// A minimal generating subset (degree by degree) of the submodule spanned by `cands`.
pub fn minimal_generators(ring: &Arc<Ring>, target: &[MultiDegree], cands: Vec<Column>) -> Vec<(Column, MultiDegree)> {
    let ctx = module_ctx(ring, target);
    let mut with_deg: Vec<(Column, MultiDegree)> =
        cands.into_iter().filter_map(|c| column_degree(&c, target).map(|d| (c, d))).collect();
    with_deg.sort_by_key(|(c, d)| (total(ring, d), to_vector(&ctx, c, 0).len()));
    let mut b = Buchberger::new(ctx.clone());
    let mut out = Vec::new();
    for (c, d) in with_deg {
        let t = total(ring, &d);
        b.run(Some(t));
        let v = to_vector(&ctx, &c, 0);
        let r = b.normal_form(v);
        if !r.is_empty() {
            b.add(r);
            out.push((c, d));
        }
    }
    out
}

/// Minimal generators of the kernel of the map with the given columns.
pub fn syzygies(ring: &Arc<Ring>, target: &[MultiDegree], cols: &[(Column, MultiDegree)]) -> Vec<(Column, MultiDegree)> {
    let n = target.len();
    let m = cols.len();
    if m == 0 {
        return vec![];
    }
    let mut shifts: Vec<i64> = target.iter().map(|d| total(ring, d)).collect();
    shifts.extend(cols.iter().map(|(_, d)| total(ring, d)));
    let ctx = ModCtx::new(ring, shifts, n as u32);
    let gens: Vec<Vector> = cols
        .iter()
        .enumerate()
        .map(|(j, (c, _))| {
            let mut v = to_vector(&ctx, c, 0);
            v.push(ctx.term(ring.one(), (n + j) as u32, 1));
            ctx.sort(&mut v);
            v
        })
        .collect();
    let gb = groebner(&ctx, gens);
    let source: Vec<MultiDegree> = cols.iter().map(|(_, d)| d.clone()).collect();
    let kernel: Vec<Column> =
        gb.iter().filter(|v| v.iter().all(|t| t.comp as usize >= n)).map(|v| from_vector(&ctx, v, n as u32, m)).collect();
    minimal_generators(ring, &source, kernel)
}

/// Reduced Gröbner basis of a submodule of `⊕ R(-target_i)`.
pub(crate) fn module_gb(ctx: &ModCtx, cols: &[Column]) -> Vec<Vector> {
    groebner(ctx, cols.iter().map(|c| to_vector(ctx, c, 0)).filter(|v| !v.is_empty()).collect())
}

/// Minimal graded free resolution `0 <- F_0 <- F_1 <- ...`.
#[derive(Clone, Debug)]
pub struct FreeResolution {
    pub ring: Arc<Ring>,
    /// Generator degrees of `F_0, F_1, ...`.
    pub modules: Vec<Vec<MultiDegree>>,
    /// `maps[k]: F_{k+1} -> F_k`.
    pub maps: Vec<PolyMatrix>,
    /// False when the length cap stopped the computation early.
    pub complete: bool,
}

impl FreeResolution {
    /// Resolution of `R/I`.
    pub fn of_ideal(ideal: &Ideal, length_cap: usize) -> Result<FreeResolution> {
        let ring = ideal.ring().clone();
        for g in ideal.gens() {
            if !g.is_homogeneous() {
                return Err(Error::Inhomogeneous);
            }
        }
        let cols: Vec<Column> = ideal.gens().iter().map(|g| vec![g.clone()]).collect();
        Self::of_module(&ring, vec![ring.zero_degree()], cols, length_cap)
    }

    /// Resolution of the cokernel of `relations` (columns in `⊕ R(-f0_i)`).
    pub fn of_module(ring: &Arc<Ring>, f0: Vec<MultiDegree>, relations: Vec<Column>, length_cap: usize) -> Result<FreeResolution> {
        let mut cur = minimal_generators(ring, &f0, relations);
        let mut modules = vec![f0];
        let mut maps = Vec::new();
        while !cur.is_empty() {
            if maps.len() >= length_cap {
                return Ok(FreeResolution { ring: ring.clone(), modules, maps, complete: false });
            }
            let source: Vec<MultiDegree> = cur.iter().map(|(_, d)| d.clone()).collect();
            let target = modules.last().unwrap().clone();
            let next = syzygies(ring, &target, &cur);
            maps.push(PolyMatrix { source: source.clone(), target, columns: cur.into_iter().map(|(c, _)| c).collect() });
            modules.push(source);
            cur = next;
        }
        Ok(FreeResolution { ring: ring.clone(), modules, maps, complete: true })
    }

    pub fn length(&self) -> usize {
        self.maps.len()
    }

    /// Betti numbers: `(homological index, multidegree) -> count`.
    pub fn betti(&self) -> BTreeMap<(usize, MultiDegree), usize> {
        let mut out = BTreeMap::new();
        for (i, m) in self.modules.iter().enumerate() {
            for d in m {
                *out.entry((i, d.clone())).or_insert(0) += 1;
            }
        }
        out
    }

    /// `F_i` written as `R(-a)^n ⊕ ...`.
    pub fn module_string(&self, i: usize) -> String {
        let mut counts: BTreeMap<MultiDegree, usize> = BTreeMap::new();
        for d in &self.modules[i] {
            *counts.entry(d.clone()).or_insert(0) += 1;
        }
        counts
            .iter()
            .rev()
            .map(|(d, n)| {
                let tw: Vec<String> = d.0.iter().map(|x| (-x).to_string()).collect();
                let base = format!("R({})", tw.join(","));
                if *n == 1 {
                    base
                } else {
                    format!("{base}^{n}")
                }
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }

    /// Consecutive maps compose to zero.
    pub fn is_complex(&self) -> bool {
        self.maps.windows(2).all(|w| w[0].compose(&w[1], &self.ring).iter().all(|c| c.iter().all(|p| p.is_zero())))
    }

    /// `sum_i (-1)^i dim (F_i)_deg`, which equals `HF(M, deg)` for the resolved module.
    pub fn euler_characteristic(&self, deg: &MultiDegree) -> i64 {
        let mut s = 0i64;
        for (i, m) in self.modules.iter().enumerate() {
            let sign = if i % 2 == 0 { 1 } else { -1 };
            for d in m {
                s += sign * self.ring.monomial_count(&deg.sub(d)) as i64;
            }
        }
        s
    }
}

impl fmt::Display for FreeResolution {
    /// Staircase Betti table for a single grading; module list otherwise.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.ring.grading_rank() != 1 {
            for i in 0..self.modules.len() {
                writeln!(f, "F{i}: {}", self.module_string(i))?;
            }
            return Ok(());
        }
        let betti = self.betti();
        let rows: Vec<i64> = betti.keys().map(|(i, d)| d.0[0] - *i as i64).collect();
        let (lo, hi) = (*rows.iter().min().unwrap_or(&0), *rows.iter().max().unwrap_or(&0));
        let ncol = self.modules.len();
        write!(f, "{:>6}", "")?;
        for i in 0..ncol {
            write!(f, "{i:>5}")?;
        }
        writeln!(f)?;
        write!(f, "{:>6}", "total:")?;
        for m in &self.modules {
            write!(f, "{:>5}", m.len())?;
        }
        writeln!(f)?;
        for j in lo..=hi {
            write!(f, "{:>6}", format!("{j}:"))?;
            for i in 0..ncol {
                let n = betti.get(&(i, MultiDegree::single(i as i64 + j))).copied().unwrap_or(0);
                if n == 0 {
                    write!(f, "{:>5}", ".")?;
                } else {
                    write!(f, "{n:>5}")?;
                }
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

fn nf(ctx: &ModCtx, gb: &[Vector], v: Vector) -> Vector {
    let ring = &ctx.ring;
    crate::engine::reduce_with(ctx, v, |m, comp| {
        let pm = ring.plain(m);
        gb.iter().find(|g| g[0].comp == comp && ring.divides_plain(ring.plain(g[0].mon), pm))
    })
}

/// Terms `(monomial, component)` of total degree `m` in the module described by `ctx`.
fn terms_of_degree(ctx: &ModCtx, m: i64) -> Vec<(crate::ring::Monomial, u32)> {
    let mut out = Vec::new();
    for (j, &s) in ctx.shifts.iter().enumerate() {
        if m - s < 0 {
            continue;
        }
        for mon in ctx.ring.monomials_of_degree(&MultiDegree::single(m - s)) {
            out.push((mon, j as u32));
        }
    }
    out
}

fn lt_divisible(ctx: &ModCtx, gb: &[Vector], mon: crate::ring::Monomial, comp: u32) -> bool {
    let ring = &ctx.ring;
    let pm = ring.plain(mon);
    gb.iter().any(|g| g[0].comp == comp && ring.divides_plain(ring.plain(g[0].mon), pm))
}

/// Independent subset of vectors (by coordinates on `index`), via row reduction.
fn rank_of(ctx: &ModCtx, vs: &[Vector], index: &[(crate::ring::Monomial, u32)]) -> usize {
    let f = ctx.ring.field();
    let pos: std::collections::HashMap<(u128, u32), usize> = index.iter().enumerate().map(|(i, (m, c))| ((m.0, *c), i)).collect();
    let rows: Vec<Vec<u32>> = vs
        .iter()
        .map(|v| {
            let mut row = vec![0u32; index.len()];
            for t in v {
                row[pos[&(t.mon.0, t.comp)]] = t.coef;
            }
            row
        })
        .collect();
    if rows.is_empty() {
        return 0;
    }
    crate::linalg::Matrix::from_rows(rows, index.len()).rank(f)
}

/// `ω_{R/I} = Ext^c(R/I, R(-n))` for a curve in `P^r` (`c = r - 1`, `n = r + 1`),
/// as the subquotient `ker(d_{c+1}^T) / im(d_c^T)` of `F_c^∨(-n)`.
#[derive(Clone, Debug)]
pub struct CanonicalModule {
    pub ideal: Ideal,
    /// Generator degrees of the ambient free module `F_c^∨(-n)`.
    pub ambient_degrees: Vec<MultiDegree>,
    /// Minimal generators of `ω` (representatives in `F_c^∨(-n)`) and their degrees.
    pub generators: Vec<(Column, MultiDegree)>,
    /// Columns of the presentation: the image of `d_c^T`.
    pub relations: Vec<Column>,
    ctx: ModCtx,
    kernel_gb: Vec<Vector>,
    image_gb: Vec<Vector>,
}

impl CanonicalModule {
    fn piece_dim(&self, gb: &[Vector], m: i64) -> i64 {
        terms_of_degree(&self.ctx, m).into_iter().filter(|&(mon, c)| lt_divisible(&self.ctx, gb, mon, c)).count() as i64
    }

    /// `dim ω_m = h^0(ω_C(m))`
    pub fn dim(&self, m: i64) -> i64 {
        self.piece_dim(&self.kernel_gb, m) - self.piece_dim(&self.image_gb, m)
    }

    /// Basis of `ω_m` as normal forms modulo the relations.
    fn basis(&self, m: i64) -> Vec<Vector> {
        let ctx = &self.ctx;
        let index = terms_of_degree(ctx, m);
        let mut out: Vec<Vector> = Vec::new();
        let mut rank = 0;
        for &(mon, c) in &index {
            if !lt_divisible(ctx, &self.kernel_gb, mon, c) {
                continue;
            }
            let t = vec![ctx.term(mon, c, 1)];
            let r = nf(ctx, &self.kernel_gb, t.clone());
            let mut v = t;
            v.extend(r.iter().map(|x| negated(ctx, x)));
            ctx.sort(&mut v);
            let w = nf(ctx, &self.image_gb, v);
            if w.is_empty() {
                continue;
            }
            out.push(w);
            let nr = rank_of(ctx, &out, &index);
            if nr == rank {
                out.pop();
            } else {
                rank = nr;
            }
        }
        out
    }
}

fn negated(ctx: &ModCtx, t: &crate::engine::Term) -> crate::engine::Term {
    ctx.term(t.mon, t.comp, ctx.ring.field().neg(t.coef))
}

pub fn canonical_module(ideal: &Ideal) -> Result<CanonicalModule> {
    let ring = ideal.ring().clone();
    let r = match ring.ambient() {
        Some(crate::ring::Ambient::Projective(r)) => r,
        _ => return Err(Error::Precondition("canonical module needs a curve in P^r".into())),
    };
    let c = r - 1;
    let n = (r + 1) as i64;
    let res = FreeResolution::of_ideal(ideal, c + 2)?;
    if res.length() < c {
        return Err(Error::ResolutionCap(res.length()));
    }
    let fc = &res.modules[c];
    let ambient_degrees: Vec<MultiDegree> = fc.iter().map(|a| MultiDegree::single(n - a.0[0])).collect();
    let dc = &res.maps[c - 1];
    // image of d_c^T: one column per basis element of F_{c-1}
    let relations: Vec<Column> = (0..dc.target.len()).map(|i| dc.columns.iter().map(|col| col[i].clone()).collect()).collect();
    let kernel: Vec<Column> = match res.maps.get(c) {
        None => (0..fc.len())
            .map(|j| (0..fc.len()).map(|k| if k == j { Polynomial::constant(&ring, 1) } else { Polynomial::zero(&ring) }).collect())
            .collect(),
        Some(d) => {
            let target: Vec<MultiDegree> = d.source.iter().map(|b| MultiDegree::single(n - b.0[0])).collect();
            let cols: Vec<(Column, MultiDegree)> = (0..fc.len())
                .map(|j| ((0..d.source.len()).map(|k| d.columns[k][j].clone()).collect(), ambient_degrees[j].clone()))
                .collect();
            syzygies(&ring, &target, &cols).into_iter().map(|(col, _)| col).collect()
        }
    };
    let ctx = module_ctx(&ring, &ambient_degrees);
    let kernel_gb = module_gb(&ctx, &kernel);
    let image_gb = module_gb(&ctx, &relations);
    // minimal generators of the quotient: kernel generators not in image + earlier ones
    let mut quotient_gens = Vec::new();
    let mut b = Buchberger::new(ctx.clone());
    for g in &image_gb {
        b.add(g.clone());
    }
    let mut cands: Vec<(Column, MultiDegree)> =
        kernel.iter().filter_map(|k| column_degree(k, &ambient_degrees).map(|d| (k.clone(), d))).collect();
    cands.sort_by_key(|(_, d)| d.0[0]);
    for (k, d) in cands {
        b.run(Some(d.0[0]));
        let v = b.normal_form(to_vector(&ctx, &k, 0));
        if !v.is_empty() {
            b.add(v);
            quotient_gens.push((k, d));
        }
    }
    Ok(CanonicalModule { ideal: ideal.clone(), ambient_degrees, generators: quotient_gens, relations, ctx, kernel_gb, image_gb })
}

/// Rank of `H^0(ω_C(-1)) ⊗ H^0(O(1)) -> H^0(ω_C)`.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct PetriReport {
    pub h0_omega_minus_one: i64,
    pub h0_omega: i64,
    pub rank: i64,
    pub injective: bool,
    /// `(r+1) h^0(ω(-1)) > h^0(ω)`: injectivity is impossible by dimension.
    pub structurally_false: bool,
}

/// Petri injectivity as the absence of degree-(-1) linear relations: the
/// products `x_i s_j` for a basis `s_j` of `ω_{-1}` are independent in `ω_0`.
pub fn petri_check(omega: &CanonicalModule) -> PetriReport {
    let ctx = &omega.ctx;
    let ring = &ctx.ring;
    let s = omega.basis(-1);
    let h0m = s.len() as i64;
    let h0 = omega.dim(0);
    let vars = ring.nvars() as i64;
    if vars * h0m > h0 {
        return PetriReport { h0_omega_minus_one: h0m, h0_omega: h0, rank: -1, injective: false, structurally_false: true };
    }
    let mut prods = Vec::new();
    for v in &s {
        for i in 0..ring.nvars() {
            let mut e = vec![0u32; ring.nvars()];
            e[i] = 1;
            let p = ctx.mul_term(v, ring.encode(&e), 1);
            prods.push(nf(ctx, &omega.image_gb, p));
        }
    }
    let rank = rank_of(ctx, &prods, &terms_of_degree(ctx, 0)) as i64;
    PetriReport { h0_omega_minus_one: h0m, h0_omega: h0, rank, injective: rank == vars * h0m, structurally_false: false }
}

/// Basis of `H^0(ω_{C'}(-1))` for the residual `C'` of a link in `P^r`,
/// realized as forms of degree `sum d_i - r - 2` in `I_C` modulo `I_Y`.
pub fn serre_dual_sections(link: &LinkageResult) -> Result<Vec<Polynomial>> {
    if !link.transversal {
        return Err(Error::Precondition("Serre-dual sections need a transversal link".into()));
    }
    let ring = link.residual.ring().clone();
    let r = match ring.ambient() {
        Some(crate::ring::Ambient::Projective(r)) => r as i64,
        _ => return Err(Error::Precondition("Serre-dual sections are implemented for P^r".into())),
    };
    let sum: i64 = link.ci_ideal.gens().iter().map(|g| g.total_degree() as i64).sum();
    let deg = sum - r - 2;
    if deg < 0 {
        return Ok(vec![]);
    }
    let piece = graded_piece(&link.original_ideal, &MultiDegree::single(deg));
    let f = ring.field();
    let mons = ring.monomials_of_degree(&MultiDegree::single(deg));
    let mut out: Vec<Polynomial> = Vec::new();
    let mut rows: Vec<Vec<u32>> = Vec::new();
    for p in piece {
        let q = link.ci_ideal.normal_form(&p);
        if q.is_zero() {
            continue;
        }
        let mut row = vec![0u32; mons.len()];
        for &(m, c) in q.terms() {
            row[mons.iter().position(|&x| x == m).unwrap()] = c;
        }
        rows.push(row);
        if Matrix::from_rows(rows.clone(), mons.len()).rank(f) == rows.len() {
            out.push(q);
        } else {
            rows.pop();
        }
    }
    Ok(out)
}

/// Image of the residual `C'` under its Serre-dual sections, in `P^{h-1}`.
/// The ideal is collected degree by degree as the kernel of `F -> F(q)` modulo
/// `I_{C'}` until its Hilbert polynomial is `(2g-2-d) t + 1 - g`.
pub fn serre_dual_embed(link: &LinkageResult) -> Result<Ideal> {
    let q = serre_dual_sections(link)?;
    if q.len() < 3 {
        return Err(Error::SystemTooSmall { needed: 3, found: q.len() });
    }
    let src = link.residual.ring().clone();
    let g = link.computed.genus;
    let d = link.computed.degree[0];
    let target_deg = 2 * g - 2 - d;
    let base = divisor_ideal(link, &q)?;
    if !base.is_unit() {
        return Err(Error::Degenerate("Serre-dual sections have base points on the residual".into()));
    }
    let tgt = Ring::projective(src.field(), q.len() - 1);
    let f = src.field();
    let mut ideal = Ideal::zero(&tgt);
    let goal = Some((vec![target_deg], 1 - g));
    for e in 1..=(target_deg.max(4) as i64) {
        let mons = tgt.monomials_of_degree(&MultiDegree::single(e));
        let images: Vec<Polynomial> = mons
            .iter()
            .map(|&m| {
                let ex = tgt.exponents(m);
                let mut acc = Polynomial::constant(&src, 1);
                for (i, &k) in ex.iter().enumerate() {
                    for _ in 0..k {
                        acc = acc.mul(&q[i]);
                    }
                }
                link.residual.normal_form(&acc)
            })
            .collect();
        let mut index: Vec<crate::ring::Monomial> = images.iter().flat_map(|p| p.terms().iter().map(|t| t.0)).collect();
        index.sort();
        index.dedup();
        let mut mat = Matrix::zeros(index.len().max(1), mons.len());
        for (c, p) in images.iter().enumerate() {
            for &(m, v) in p.terms() {
                mat.set(index.binary_search(&m).unwrap(), c, v);
            }
        }
        let new: Vec<Polynomial> = mat
            .kernel(f)
            .into_iter()
            .map(|k| Polynomial::from_terms(&tgt, mons.iter().zip(&k).filter(|(_, &c)| c != 0).map(|(&m, &c)| (m, c)).collect()))
            .filter(|p| !ideal.contains(p))
            .collect();
        if !new.is_empty() {
            ideal = ideal.add_gens(&new);
        }
        if e >= 2 && !ideal.is_zero() {
            let hp = hilbert_polynomial(&ideal)?.polynomial.affine();
            if hp == goal {
                let sat = ideal.saturate(None)?;
                if hilbert_polynomial(&sat)?.polynomial.affine() == goal {
                    let gb = sat.groebner_basis().to_vec();
                    return Ok(minimal_ideal(&tgt, gb));
                }
                return Err(Error::Degenerate("image of the Serre-dual model is not a curve of the expected degree".into()));
            }
        }
    }
    Err(Error::NoStabilization(target_deg.max(4)))
}

/// `(I_{C'} + (q)) : (I_C + I_{C'})^∞`, saturated.
fn divisor_ideal(link: &LinkageResult, q: &[Polynomial]) -> Result<Ideal> {
    let zero = link.residual.add_gens(q).saturate(None)?;
    if zero.is_unit() {
        return Ok(zero);
    }
    let meet = link.original_ideal.sum(&link.residual)?;
    zero.saturate(Some(&meet))?.saturate(None)
}

/// Effective divisor of `ω_{C'}(-1)` cut by one Serre-dual section: its zero
/// scheme on `C'` minus the intersection with `C`. Length `2g - 2 - d`.
pub fn divisor_of_dual_section(link: &LinkageResult, index: usize) -> Result<Ideal> {
    let q = serre_dual_sections(link)?;
    let s = q.get(index).ok_or_else(|| Error::Precondition(format!("no Serre-dual section {index}")))?.clone();
    if crate::hilbert::curve_invariants(&link.residual.add_gens(&[s.clone()]).saturate(None)?).is_ok() {
        return Err(Error::Degenerate("section vanishes on a component of the residual".into()));
    }
    divisor_ideal(link, &[s])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PrimeField;
    use crate::hilbert::hilbert_function;
    use crate::liaison::link_residual;
    use crate::ring::random_form;

    fn p(r: usize) -> Arc<Ring> {
        Ring::projective(PrimeField::new(1009).unwrap(), r)
    }

    fn twisted_cubic(r: &Arc<Ring>) -> Ideal {
        let x = r.variables();
        Ideal::new(
            r,
            vec![
                x[0].mul(&x[2]).sub(&x[1].mul(&x[1])),
                x[0].mul(&x[3]).sub(&x[1].mul(&x[2])),
                x[1].mul(&x[3]).sub(&x[2].mul(&x[2])),
            ],
        )
        .unwrap()
    }

    fn ci(r: &Arc<Ring>, degs: &[i64]) -> Ideal {
        let gens = degs.iter().enumerate().map(|(i, &d)| random_form(r, &MultiDegree::single(d), 40 + i as u64).unwrap()).collect();
        Ideal::new(r, gens).unwrap()
    }

    #[test]
    fn twisted_cubic_resolution() {
        let r = p(3);
        let res = FreeResolution::of_ideal(&twisted_cubic(&r), 5).unwrap();
        assert!(res.complete && res.is_complex());
        assert_eq!(res.modules[1], vec![MultiDegree::single(2); 3]);
        assert_eq!(res.modules[2], vec![MultiDegree::single(3); 2]);
        assert_eq!(res.length(), 2);
        let table = res.to_string();
        assert!(table.contains("total:    1    3    2"), "{table}");
        for d in 0..6 {
            let d = MultiDegree::single(d);
            assert_eq!(res.euler_characteristic(&d), hilbert_function(&twisted_cubic(&r), &d));
        }
        let capped = FreeResolution::of_ideal(&twisted_cubic(&r), 1).unwrap();
        assert!(!capped.complete);
    }

    #[test]
    fn koszul() {
        let r = p(3);
        let i = ci(&r, &[2, 3]);
        let res = FreeResolution::of_ideal(&i, 5).unwrap();
        assert_eq!(res.module_string(1), "R(-3) + R(-2)");
        assert_eq!(res.module_string(2), "R(-5)");
        assert!(res.is_complex());
    }

    #[test]
    fn canonical_of_complete_intersection() {
        let r = p(3);
        let i = ci(&r, &[2, 3]);
        let w = canonical_module(&i).unwrap();
        assert_eq!(w.generators.len(), 1);
        assert_eq!(w.generators[0].1, MultiDegree::single(-1));
        // genus 4, degree 6: h0(ω(m)) = 3 + 6m for m >= 1
        assert_eq!(w.dim(-1), 1);
        assert_eq!(w.dim(0), 4);
        for m in 1..3 {
            assert_eq!(w.dim(m), 3 + 6 * m);
        }
        let petri = petri_check(&w);
        assert!(petri.injective && petri.rank == 4, "{petri:?}");
    }

    #[test]
    fn plane_quintic_is_structurally_false() {
        let r = p(2);
        let i = ci(&r, &[5]);
        let w = canonical_module(&i).unwrap();
        let petri = petri_check(&w);
        assert_eq!((petri.h0_omega_minus_one, petri.h0_omega), (3, 6));
        assert!(petri.structurally_false && !petri.injective);
    }

    #[test]
    fn no_dual_sections_on_a_line() {
        let r = p(3);
        let tc = twisted_cubic(&r);
        let q = tc.gens().to_vec();
        let link = link_residual(&tc, &[q[0].clone(), q[2].clone()]).unwrap();
        assert!(serre_dual_sections(&link).unwrap().is_empty());
        assert!(matches!(serre_dual_embed(&link), Err(Error::SystemTooSmall { .. })));
    }
}
