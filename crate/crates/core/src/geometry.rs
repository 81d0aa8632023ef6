//! Smoothness and transversality certificates, point schemes, random
//! rational curves and linear systems through points.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::groebner::Ideal;
use crate::hilbert::{curve_invariants, graded_piece, hilbert_function, hilbert_polynomial};
use crate::linalg::{krylov_minpoly, upoly, Matrix};
use crate::ring::{random_form_with, Ambient, MultiDegree, Polynomial, Ring};

/// Points of `P^r` (one coordinate tuple each) or of `P^1 x P^2` (two tuples).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointSet {
    pub ambient: Ambient,
    pub points: Vec<Vec<Vec<u32>>>,
}

fn factor_blocks(ambient: Ambient) -> Vec<Vec<usize>> {
    match ambient {
        Ambient::Projective(r) => vec![(0..=r).collect()],
        Ambient::P1xP2 => vec![vec![0, 1], vec![2, 3, 4]],
    }
}

fn normalize(v: &[u32], f: crate::field::PrimeField) -> Vec<u32> {
    let lead = v.iter().copied().find(|&x| x != 0).unwrap_or(1);
    let inv = f.inv(lead);
    v.iter().map(|&x| f.mul(x, inv)).collect()
}

impl PointSet {
    pub fn new(ring: &Ring, points: Vec<Vec<Vec<u32>>>) -> Result<PointSet> {
        let ambient = ring.ambient().ok_or_else(|| Error::InvalidPoint("unsupported ambient".into()))?;
        let f = ring.field();
        let blocks = factor_blocks(ambient);
        let mut seen = Vec::new();
        for p in &points {
            if p.len() != blocks.len() {
                return Err(Error::InvalidPoint(format!("expected {} coordinate tuples", blocks.len())));
            }
            let mut norm = Vec::new();
            for (t, b) in p.iter().zip(&blocks) {
                if t.len() != b.len() {
                    return Err(Error::InvalidPoint(format!("expected {} coordinates", b.len())));
                }
                if t.iter().any(|&c| c >= f.p()) {
                    return Err(Error::InvalidPoint("coordinate not reduced mod p".into()));
                }
                if t.iter().all(|&c| c == 0) {
                    return Err(Error::InvalidPoint("all coordinates zero".into()));
                }
                norm.push(normalize(t, f));
            }
            if seen.contains(&norm) {
                return Err(Error::InvalidPoint("repeated point".into()));
            }
            seen.push(norm);
        }
        Ok(PointSet { ambient, points })
    }

    /// `n` random points (distinct with overwhelming probability; re-drawn otherwise).
    pub fn random(ring: &Ring, n: usize, rng: &mut impl Rng) -> Result<PointSet> {
        let ambient = ring.ambient().ok_or_else(|| Error::InvalidPoint("unsupported ambient".into()))?;
        let f = ring.field();
        let blocks = factor_blocks(ambient);
        let mut pts: Vec<Vec<Vec<u32>>> = Vec::new();
        while pts.len() < n {
            let p: Vec<Vec<u32>> = blocks.iter().map(|b| b.iter().map(|_| f.random_nonzero(rng)).collect()).collect();
            let mut cand = pts.clone();
            cand.push(p);
            if PointSet::new(ring, cand.clone()).is_ok() {
                pts = cand;
            }
        }
        PointSet::new(ring, pts)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Coordinates in variable order.
    pub fn flat(&self, i: usize) -> Vec<u32> {
        self.points[i].concat()
    }
}

/// Linear forms vanishing at one point, factor by factor.
fn point_ideal(ring: &Arc<Ring>, blocks: &[Vec<usize>], p: &[Vec<u32>]) -> Ideal {
    let f = ring.field();
    let mut gens = Vec::new();
    for (b, t) in blocks.iter().zip(p) {
        let row = Matrix::from_rows(vec![t.clone()], t.len());
        for k in row.kernel(f) {
            let mut g = Polynomial::zero(ring);
            for (&v, &c) in b.iter().zip(&k) {
                g = g.combine(&ring.variable(v), c);
            }
            gens.push(g);
        }
    }
    Ideal::new_unchecked(ring, gens)
}

fn check_ring(ring: &Ring, pts: &PointSet) -> Result<()> {
    if ring.ambient() != Some(pts.ambient) {
        return Err(Error::InvalidPoint("point set lives in another ambient".into()));
    }
    Ok(())
}

/// Radical ideal of a reduced set of points.
pub fn ideal_of_points(ring: &Arc<Ring>, pts: &PointSet) -> Result<Ideal> {
    check_ring(ring, pts)?;
    let blocks = factor_blocks(pts.ambient);
    let mut acc = Ideal::unit(ring);
    for p in &pts.points {
        let q = point_ideal(ring, &blocks, p);
        acc = if acc.is_unit() { q } else { acc.intersect(&q)? };
    }
    let gb = acc.groebner_basis().to_vec();
    Ok(Ideal::new_unchecked(ring, gb))
}

/// Basis of the degree-`deg` forms of `I` vanishing at all points.
pub fn linear_system_through(ideal: &Ideal, pts: &PointSet, deg: &MultiDegree) -> Result<Vec<Polynomial>> {
    let ring = ideal.ring();
    check_ring(ring, pts)?;
    let basis = graded_piece(ideal, deg);
    if pts.is_empty() || basis.is_empty() {
        return Ok(basis);
    }
    let f = ring.field();
    let rows: Vec<Vec<u32>> = (0..pts.len())
        .map(|i| {
            let c = pts.flat(i);
            basis.iter().map(|b| b.evaluate(&c)).collect()
        })
        .collect();
    let m = Matrix::from_rows(rows, basis.len());
    Ok(m.kernel(f)
        .into_iter()
        .map(|k| {
            let mut g = Polynomial::zero(ring);
            for (b, &c) in basis.iter().zip(&k) {
                if c != 0 {
                    g = g.combine(b, c);
                }
            }
            g
        })
        .collect())
}

/// Outcome of the Jacobian criterion. On failure `chart` names the affine
/// chart `(x_a = 1, y_b = 1)` for `P^1 x P^2` and `singular_locus` holds the
/// ideal of the singular points found there.
#[derive(Clone, Debug)]
pub struct SmoothnessReport {
    pub smooth: bool,
    pub chart: Option<(usize, usize)>,
    pub singular_locus: Option<Ideal>,
}

fn determinant(m: &[Vec<Polynomial>], ring: &Arc<Ring>) -> Polynomial {
    match m.len() {
        0 => Polynomial::constant(ring, 1),
        1 => m[0][0].clone(),
        2 => m[0][0].mul(&m[1][1]).sub(&m[0][1].mul(&m[1][0])),
        n => {
            let mut acc = Polynomial::zero(ring);
            for j in 0..n {
                if m[0][j].is_zero() {
                    continue;
                }
                let minor: Vec<Vec<Polynomial>> = m[1..]
                    .iter()
                    .map(|row| row.iter().enumerate().filter(|(k, _)| *k != j).map(|(_, p)| p.clone()).collect())
                    .collect();
                let t = m[0][j].mul(&determinant(&minor, ring));
                acc = if j % 2 == 0 { acc.add(&t) } else { acc.sub(&t) };
            }
            acc
        }
    }
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// All `c x c` minors of the Jacobian of `polys` with respect to `vars`.
fn jacobian_minors(polys: &[Polynomial], vars: &[usize], c: usize, ring: &Arc<Ring>) -> Vec<Polynomial> {
    let jac: Vec<Vec<Polynomial>> = polys.iter().map(|p| vars.iter().map(|&v| p.derivative(v)).collect()).collect();
    let mut out = Vec::new();
    for rows in subsets(polys.len(), c) {
        for cols in subsets(vars.len(), c) {
            let m: Vec<Vec<Polynomial>> = rows.iter().map(|&r| cols.iter().map(|&k| jac[r][k].clone()).collect()).collect();
            let d = determinant(&m, ring);
            if !d.is_zero() {
                out.push(d);
            }
        }
    }
    out
}

/// `count` general elements of `I`, all of the componentwise maximal generator degree.
pub(crate) fn general_elements(ideal: &Ideal, count: usize, rng: &mut ChaCha8Rng) -> Result<Vec<Polynomial>> {
    let ring = ideal.ring();
    let degs: Vec<MultiDegree> = ideal.gens().iter().map(|g| g.degree()).collect::<Result<_>>()?;
    let k = ring.grading_rank();
    let top = MultiDegree((0..k).map(|j| degs.iter().map(|d| d.0[j]).max().unwrap_or(0)).collect());
    let mut out = Vec::new();
    for _ in 0..count {
        let mut acc = Polynomial::zero(ring);
        for (g, d) in ideal.gens().iter().zip(&degs) {
            let h = random_form_with(ring, &top.sub(d), rng)?;
            acc = acc.add(&h.mul(g));
        }
        out.push(acc);
    }
    Ok(out)
}

/// Jacobian criterion for a saturated one-dimensional ideal. A general
/// choice of `c + 1` elements (`c` the codimension) certifies smoothness;
/// otherwise all generators are used.
pub fn is_smooth_curve(ideal: &Ideal) -> Result<SmoothnessReport> {
    let ring = ideal.ring().clone();
    let inv = curve_invariants(ideal)?;
    let mut rng = ChaCha8Rng::seed_from_u64(0x5300 ^ ring.field().p() as u64);
    match inv.ambient {
        Ambient::Projective(r) => {
            let c = r - 1;
            let vars: Vec<usize> = (0..=r).collect();
            let sing = |polys: &[Polynomial]| {
                let minors = jacobian_minors(polys, &vars, c, &ring);
                ideal.add_gens(&minors)
            };
            let quick = sing(&general_elements(ideal, c + 1, &mut rng)?);
            if quick.krull_dim() <= 0 {
                return Ok(SmoothnessReport { smooth: true, chart: None, singular_locus: None });
            }
            let full = sing(ideal.gens());
            if full.krull_dim() <= 0 {
                return Ok(SmoothnessReport { smooth: true, chart: None, singular_locus: None });
            }
            Ok(SmoothnessReport { smooth: false, chart: None, singular_locus: Some(full.saturate(None)?) })
        }
        Ambient::P1xP2 => {
            let combos = general_elements(ideal, 3, &mut rng)?;
            for a in 0..2 {
                for b in 2..5 {
                    let vars: Vec<usize> = (0..5).filter(|&v| v != a && v != b).collect();
                    let chart: Vec<Polynomial> = ideal.gens().iter().map(|g| g.set_to_one(&[a, b])).collect();
                    let base = Ideal::new_unchecked(&ring, chart.clone());
                    let quick: Vec<Polynomial> = combos.iter().map(|g| g.set_to_one(&[a, b])).collect();
                    if base.add_gens(&jacobian_minors(&quick, &vars, 2, &ring)).is_unit() {
                        continue;
                    }
                    let locus = base.add_gens(&jacobian_minors(&chart, &vars, 2, &ring));
                    if !locus.is_unit() {
                        return Ok(SmoothnessReport { smooth: false, chart: Some((a, b)), singular_locus: Some(locus) });
                    }
                }
            }
            Ok(SmoothnessReport { smooth: true, chart: None, singular_locus: None })
        }
    }
}

/// Length of `V(I + J)` and whether it is reduced.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntersectionReport {
    pub transversal: bool,
    pub degree: i64,
}

/// Finite-and-reduced test for the intersection of two curves. Reducedness
/// is decided by the minimal polynomial of multiplication by `l/u` on the
/// length-`N` quotient: squarefree of degree `N` for a general `l`.
pub fn intersection_is_transversal(i: &Ideal, j: &Ideal) -> Result<IntersectionReport> {
    let ring = i.ring().clone();
    let s = i.sum(j)?.saturate(None)?;
    if s.is_unit() {
        return Ok(IntersectionReport { transversal: true, degree: 0 });
    }
    let hd = hilbert_polynomial(&s)?;
    let dim = hd.polynomial.total_degree();
    if dim >= 1 {
        return Err(Error::CommonComponent(dim));
    }
    let n = hd.polynomial.eval(&vec![0; ring.grading_rank()]).unwrap_or(0);
    if n <= 0 {
        return Ok(IntersectionReport { transversal: true, degree: 0 });
    }
    let f = ring.field();
    let mut e1 = vec![0; ring.grading_rank()];
    e1[0] = 1;
    let e1 = MultiDegree(e1);
    let mut k = hd.regularity.clone();
    while hilbert_function(&s, &k) != n || hilbert_function(&s, &(&k + &e1)) != n {
        k = &k + &e1;
    }
    let std_basis = |d: &MultiDegree| -> Vec<crate::ring::Monomial> {
        let lts: Vec<u128> = s.leading_monomials().iter().map(|&m| ring.plain(m)).collect();
        ring.monomials_of_degree(d)
            .into_iter()
            .filter(|&m| !lts.iter().any(|&l| ring.divides_plain(l, ring.plain(m))))
            .collect()
    };
    let src = std_basis(&k);
    let dst = std_basis(&(&k + &e1));
    let matrix_of = |g: &Polynomial| -> Matrix {
        let mut m = Matrix::zeros(dst.len(), src.len());
        for (col, &mon) in src.iter().enumerate() {
            let img = s.normal_form(&g.mul_monomial(mon, 1));
            for &(t, c) in img.terms() {
                let row = dst.iter().position(|&d| d == t).expect("normal form outside the standard basis");
                m.set(row, col, c);
            }
        }
        m
    };
    let mut rng = ChaCha8Rng::seed_from_u64(0x7a5 ^ f.p() as u64);
    for _ in 0..3 {
        let u = random_form_with(&ring, &e1, &mut rng)?;
        let l = random_form_with(&ring, &e1, &mut rng)?;
        let Some(uinv) = matrix_of(&u).inverse(f) else { continue };
        let m = uinv.mul(&matrix_of(&l), f);
        let v: Vec<u32> = (0..src.len()).map(|_| f.random(&mut rng)).collect();
        let mp = krylov_minpoly(&m, &v, f);
        if mp.len() as i64 - 1 == n && upoly::is_squarefree(&mp, f) {
            return Ok(IntersectionReport { transversal: true, degree: n });
        }
    }
    Ok(IntersectionReport { transversal: false, degree: n })
}

/// Dense binary forms `sum c_j s^(n-j) t^j`.
mod binary {
    use crate::field::PrimeField;

    pub fn mul(a: &[u32], b: &[u32], f: PrimeField) -> Vec<u32> {
        let mut out = vec![0u32; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = f.add(out[i + j], f.mul(x, y));
            }
        }
        out
    }

    pub fn random(deg: usize, f: PrimeField, rng: &mut impl rand::Rng) -> Vec<u32> {
        (0..=deg).map(|_| f.random(rng)).collect()
    }
}

/// Ideal of the image of `P^1` under `forms` (one binary form per variable), collected
/// degree by degree as kernels of the pullback. Stops once `done` accepts the
/// ideal generated so far.
fn image_ideal(
    ring: &Arc<Ring>,
    forms: &[Vec<u32>],
    max_total: i64,
    done: impl Fn(&Ideal) -> bool,
) -> Result<Ideal> {
    let f = ring.field();
    let k = ring.grading_rank();
    let mut ideal = Ideal::zero(ring);
    for total in 1..=max_total {
        let mut new_gens = Vec::new();
        for deg in degrees_of_total(k, total) {
            let mons = ring.monomials_of_degree(&deg);
            if mons.is_empty() {
                continue;
            }
            let images: Vec<Vec<u32>> = mons
                .iter()
                .map(|&m| {
                    let e = ring.exponents(m);
                    let mut acc = vec![1u32];
                    for (v, &x) in e.iter().enumerate() {
                        for _ in 0..x {
                            acc = binary::mul(&acc, &forms[v], f);
                        }
                    }
                    acc
                })
                .collect();
            let len = images.iter().map(|v| v.len()).max().unwrap();
            let mut mat = Matrix::zeros(len, mons.len());
            for (c, img) in images.iter().enumerate() {
                for (r, &x) in img.iter().enumerate() {
                    mat.set(r, c, x);
                }
            }
            for kv in mat.kernel(f) {
                let g = Polynomial::from_terms(ring, mons.iter().zip(&kv).filter(|(_, &c)| c != 0).map(|(&m, &c)| (m, c)).collect());
                new_gens.push(g);
            }
        }
        if new_gens.is_empty() {
            continue;
        }
        let extra: Vec<Polynomial> = new_gens.into_iter().filter(|g| !ideal.contains(g)).collect();
        if !extra.is_empty() {
            ideal = ideal.add_gens(&extra);
        }
        if done(&ideal) {
            return Ok(ideal);
        }
    }
    Err(Error::NoStabilization(max_total))
}

fn degrees_of_total(k: usize, total: i64) -> Vec<MultiDegree> {
    match k {
        1 => vec![MultiDegree::single(total)],
        _ => (0..=total).map(|a| MultiDegree::bi(a, total - a)).collect(),
    }
}

const RESAMPLES: usize = 5;

/// Random rational curve of degree `d` in `P^r`, image of `P^1` under
/// `r + 1` random binary forms of degree `d`.
pub fn random_rational_curve_pr(field: crate::field::PrimeField, d: i64, r: usize, seed: u64) -> Result<Ideal> {
    if d < 1 || !(2..=6).contains(&r) {
        return Err(Error::Precondition(format!("need d >= 1 and 2 <= r <= 6, got d={d}, r={r}")));
    }
    let ring = Ring::projective(field, r);
    let bound = (d - (r as i64).min(d) + 2).max(2);
    let mut last = String::new();
    for attempt in 0..RESAMPLES {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(attempt as u64 * 0x9e37_79b9));
        let forms: Vec<Vec<u32>> = (0..=r).map(|_| binary::random(d as usize, field, &mut rng)).collect();
        let target = |i: &Ideal| {
            hilbert_polynomial(i).map(|h| h.polynomial.affine() == Some((vec![d], 1))).unwrap_or(false)
        };
        match image_ideal(&ring, &forms, bound, |i| !i.is_zero() && target(i)) {
            Ok(i) if i.is_saturated() => {
                let gb = i.groebner_basis().to_vec();
                return Ok(minimal_ideal(&ring, gb));
            }
            Ok(_) => last = "image ideal not saturated".into(),
            Err(e) => last = e.to_string(),
        }
        if d < r as i64 {
            break;
        }
    }
    Err(Error::ResampleExhausted(RESAMPLES, last))
}

/// Random rational curve of bidegree `(d1, d2)` in `P^1 x P^2`.
pub fn random_rational_curve_bip(field: crate::field::PrimeField, d1: i64, d2: i64, seed: u64) -> Result<Ideal> {
    if d1 < 0 || d2 < 0 || d1 + d2 == 0 {
        return Err(Error::Precondition(format!("bad bidegree ({d1},{d2})")));
    }
    let ring = Ring::cox_p1p2(field);
    let mut last = String::new();
    for attempt in 0..RESAMPLES {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(attempt as u64 * 0x9e37_79b9));
        // the P^1 factor of degree d1 and the P^2 factor of degree d2, all in s,t of
        // total degree d1*h1 + d2*h2 for a monomial of bidegree (h1,h2)
        let mut forms: Vec<Vec<u32>> = Vec::new();
        for _ in 0..2 {
            forms.push(binary::random(d1 as usize, field, &mut rng));
        }
        for _ in 0..3 {
            forms.push(binary::random(d2 as usize, field, &mut rng));
        }
        let goal = Some((vec![d1, d2], 1));
        let found = image_ideal(&ring, &forms, 2 * (d1 + d2) + 4, |i| {
            !i.is_zero() && hilbert_polynomial(i).map(|h| h.polynomial.affine() == goal).unwrap_or(false)
        });
        match found.and_then(|i| i.saturate(None)) {
            Ok(s) => {
                if hilbert_polynomial(&s)?.polynomial.affine() == goal {
                    let gb = s.groebner_basis().to_vec();
                    return Ok(minimal_ideal(&ring, gb));
                }
                last = "image has the wrong Hilbert polynomial".into();
            }
            Err(e) => last = e.to_string(),
        }
    }
    Err(Error::ResampleExhausted(RESAMPLES, last))
}

/// Drops generators lying in the ideal of the previous ones (by degree).
pub fn minimal_ideal(ring: &Arc<Ring>, mut gens: Vec<Polynomial>) -> Ideal {
    gens.sort_by_key(|g| g.total_degree());
    let mut kept: Vec<Polynomial> = Vec::new();
    for g in gens {
        let cur = Ideal::new_unchecked(ring, kept.clone());
        if kept.is_empty() || !cur.contains(&g) {
            kept.push(g);
        }
    }
    Ideal::new_unchecked(ring, kept)
}

/// A plane curve of degree `deg` with nodes at `nodes` random points, embedded
/// by the adjoint curves of degree `adj` through the nodes and through `extra`
/// further points of the curve. Genus `(deg-1)(deg-2)/2 - nodes`, image degree
/// `deg*adj - 2*nodes - extra` in `P^r` with `r + 1` the dimension of that system.
pub fn nodal_plane_model(field: crate::field::PrimeField, deg: i64, nodes: usize, adj: i64, extra: usize, seed: u64) -> Result<Ideal> {
    let plane = Ring::projective(field, 2);
    let f = field;
    let genus = (deg - 1) * (deg - 2) / 2 - nodes as i64;
    let image_deg = deg * adj - 2 * nodes as i64 - extra as i64;
    let mut last = String::new();
    for attempt in 0..RESAMPLES {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(attempt as u64 * 0x9e37_79b9) ^ 0x9a1e);
        let node_pts: Vec<Vec<u32>> = (0..nodes).map(|_| (0..3).map(|_| f.random_nonzero(&mut rng)).collect()).collect();
        // the curve: singular at every node
        let mons = plane.monomials_of_degree(&MultiDegree::single(deg));
        let mut rows = Vec::new();
        for p in &node_pts {
            for i in 0..3 {
                rows.push(mons.iter().map(|&m| Polynomial::from_terms(&plane, vec![(m, 1)]).derivative(i).evaluate(p)).collect());
            }
        }
        let ker = Matrix::from_rows(rows, mons.len()).kernel(f);
        if ker.len() != 1 {
            last = format!("{} curves through the nodes", ker.len());
            continue;
        }
        let curve = Polynomial::from_terms(&plane, mons.iter().zip(&ker[0]).map(|(&m, &c)| (m, c)).collect());
        // further points: roots on random lines, away from the nodes
        let grads: Vec<Polynomial> = (0..3).map(|i| curve.derivative(i)).collect();
        let mut on_curve: Vec<Vec<u32>> = Vec::new();
        let mut lines = 0;
        while on_curve.len() < extra && lines < 200 {
            lines += 1;
            let a: Vec<u32> = (0..3).map(|_| f.random(&mut rng)).collect();
            let b: Vec<u32> = (0..3).map(|_| f.random(&mut rng)).collect();
            for t in 0..f.p() {
                let p: Vec<u32> = (0..3).map(|i| f.add(a[i], f.mul(t, b[i]))).collect();
                if p.iter().all(|&x| x == 0) || curve.evaluate(&p) != 0 || grads.iter().all(|g| g.evaluate(&p) == 0) {
                    continue;
                }
                on_curve.push(p);
                break;
            }
        }
        if on_curve.len() < extra {
            last = "too few rational points on the curve".into();
            continue;
        }
        let amons = plane.monomials_of_degree(&MultiDegree::single(adj));
        let rows: Vec<Vec<u32>> = node_pts
            .iter()
            .chain(&on_curve)
            .map(|p| amons.iter().map(|&m| Polynomial::from_terms(&plane, vec![(m, 1)]).evaluate(p)).collect())
            .collect();
        let sys = Matrix::from_rows(rows, amons.len()).kernel(f);
        let r = sys.len() as i64 - 1;
        if !(2..=6).contains(&r) {
            last = format!("adjoint system of dimension {}", sys.len());
            continue;
        }
        let forms: Vec<Polynomial> =
            sys.iter().map(|v| Polynomial::from_terms(&plane, amons.iter().zip(v).map(|(&m, &c)| (m, c)).collect())).collect();
        let target = Ring::projective(field, r as usize);
        match plane_image_ideal(&target, &Ideal::new(&plane, vec![curve.clone()])?, &forms, image_deg, genus) {
            Ok(i) => return Ok(i),
            Err(e) => last = e.to_string(),
        }
    }
    Err(Error::ResampleExhausted(RESAMPLES, last))
}

/// Ideal of the image of the plane curve `V(curve)` under `forms`, read off
/// degree by degree as kernels of `k[x]_e -> (k[u]/(curve))_{e*deg forms}`.
fn plane_image_ideal(target: &Arc<Ring>, curve: &Ideal, forms: &[Polynomial], d: i64, g: i64) -> Result<Ideal> {
    let f = target.field();
    let plane = curve.ring();
    let mut ideal = Ideal::zero(target);
    let mut prev: Vec<(Vec<u32>, Polynomial)> = vec![(vec![0; target.nvars()], Polynomial::constant(plane, 1))];
    for e in 1..=(d + 2) {
        let mons = target.monomials_of_degree(&MultiDegree::single(e));
        let mut images: Vec<Polynomial> = Vec::with_capacity(mons.len());
        let mut next = Vec::with_capacity(mons.len());
        for &m in &mons {
            let ex = target.exponents(m);
            let v = ex.iter().position(|&x| x > 0).unwrap();
            let mut lower = ex.clone();
            lower[v] -= 1;
            let base = &prev.iter().find(|(x, _)| *x == lower).unwrap().1;
            let img = curve.normal_form(&base.mul(&forms[v]));
            images.push(img.clone());
            next.push((ex, img));
        }
        prev = next;
        let mut cols: std::collections::BTreeMap<crate::ring::Monomial, usize> = Default::default();
        for p in &images {
            for &(m, _) in p.terms() {
                let n = cols.len();
                cols.entry(m).or_insert(n);
            }
        }
        let mut mat = Matrix::zeros(cols.len(), mons.len());
        for (c, p) in images.iter().enumerate() {
            for &(m, x) in p.terms() {
                mat.set(cols[&m], c, x);
            }
        }
        let extra: Vec<Polynomial> = mat
            .kernel(f)
            .into_iter()
            .map(|kv| Polynomial::from_terms(target, mons.iter().zip(&kv).filter(|(_, &c)| c != 0).map(|(&m, &c)| (m, c)).collect()))
            .filter(|p| !ideal.contains(p))
            .collect();
        if !extra.is_empty() {
            ideal = ideal.add_gens(&extra);
            if hilbert_polynomial(&ideal).map(|h| h.polynomial.affine() == Some((vec![d], 1 - g))).unwrap_or(false) {
                let sat = ideal.saturate(None)?;
                return Ok(minimal_ideal(target, sat.gens().to_vec()));
            }
        }
    }
    Err(Error::NoStabilization(d + 2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PrimeField;
    use crate::ring::random_form;

    fn fp() -> PrimeField {
        PrimeField::new(1009).unwrap()
    }

    fn lines(r: &Arc<Ring>, a: [usize; 2], b: [usize; 2]) -> (Ideal, Ideal) {
        let x = r.variables();
        (
            Ideal::new(r, vec![x[a[0]].clone(), x[a[1]].clone()]).unwrap(),
            Ideal::new(r, vec![x[b[0]].clone(), x[b[1]].clone()]).unwrap(),
        )
    }

    #[test]
    fn smooth_and_nodal() {
        let tc = random_rational_curve_pr(fp(), 3, 3, 1).unwrap();
        assert!(is_smooth_curve(&tc).unwrap().smooth);
        let r = Ring::projective(fp(), 3);
        let (l1, l2) = lines(&r, [0, 1], [0, 2]);
        let rep = is_smooth_curve(&l1.intersect(&l2).unwrap()).unwrap();
        assert!(!rep.smooth);
        let locus = rep.singular_locus.unwrap();
        let pt = PointSet::new(&r, vec![vec![vec![0, 0, 0, 1]]]).unwrap();
        assert!(locus.equals(&ideal_of_points(&r, &pt).unwrap()));
        let ci = Ideal::new(
            &r,
            vec![random_form(&r, &MultiDegree::single(2), 5).unwrap(), random_form(&r, &MultiDegree::single(3), 6).unwrap()],
        )
        .unwrap();
        assert!(is_smooth_curve(&ci).unwrap().smooth);
    }

    #[test]
    fn transversality_examples() {
        let r = Ring::projective(fp(), 3);
        let (l1, l2) = lines(&r, [0, 1], [0, 2]);
        assert_eq!(intersection_is_transversal(&l1, &l2).unwrap(), IntersectionReport { transversal: true, degree: 1 });
        let (a, b) = lines(&r, [0, 1], [2, 3]);
        assert_eq!(intersection_is_transversal(&a, &b).unwrap().degree, 0);
        // conic x0 x2 = x1^2 in the plane x3 = 0, tangent line x0 = 0
        let x = r.variables();
        let conic = Ideal::new(&r, vec![x[3].clone(), x[0].mul(&x[2]).sub(&x[1].pow(2))]).unwrap();
        let tangent = Ideal::new(&r, vec![x[3].clone(), x[0].clone()]).unwrap();
        assert_eq!(intersection_is_transversal(&conic, &tangent).unwrap(), IntersectionReport { transversal: false, degree: 2 });
        assert!(matches!(intersection_is_transversal(&conic, &conic), Err(Error::CommonComponent(1))));
    }

    #[test]
    fn points() {
        let r = Ring::projective(fp(), 3);
        let one = PointSet::new(&r, vec![vec![vec![1, 2, 3, 4]]]).unwrap();
        let i = ideal_of_points(&r, &one).unwrap();
        assert_eq!(graded_piece(&i, &MultiDegree::single(1)).len(), 3);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let four = PointSet::random(&r, 4, &mut rng).unwrap();
        let i = ideal_of_points(&r, &four).unwrap();
        let hf: Vec<i64> = (0..5).map(|d| hilbert_function(&i, &MultiDegree::single(d))).collect();
        assert_eq!(hf, vec![1, 4, 4, 4, 4]);
        assert_eq!(hilbert_polynomial(&i).unwrap().polynomial.affine(), Some((vec![0], 4)));
        let c = Ring::cox_p1p2(fp());
        let p = PointSet::new(&c, vec![vec![vec![1, 3], vec![2, 0, 5]]]).unwrap();
        let i = ideal_of_points(&c, &p).unwrap();
        assert_eq!(graded_piece(&i, &MultiDegree::bi(1, 0)).len(), 1);
        assert_eq!(graded_piece(&i, &MultiDegree::bi(0, 1)).len(), 2);
        assert!(PointSet::new(&r, vec![vec![vec![0, 0, 0, 0]]]).is_err());
        assert!(PointSet::new(&r, vec![vec![vec![1, 1, 1, 1]], vec![vec![2, 2, 2, 2]]]).is_err());
        assert!(PointSet::new(&r, vec![vec![vec![1, 1, 1]]]).is_err());
    }

    #[test]
    fn rational_curves() {
        let tc = random_rational_curve_pr(fp(), 3, 3, 7).unwrap();
        assert_eq!(hilbert_polynomial(&tc).unwrap().polynomial.affine(), Some((vec![3], 1)));
        let conic = random_rational_curve_pr(fp(), 2, 2, 7).unwrap();
        assert_eq!(conic.gens().len(), 1);
        let b = random_rational_curve_bip(fp(), 1, 1, 2).unwrap();
        assert_eq!(hilbert_polynomial(&b).unwrap().polynomial.affine(), Some((vec![1, 1], 1)));
        let b = random_rational_curve_bip(fp(), 1, 2, 2).unwrap();
        let ci = curve_invariants(&b).unwrap();
        assert_eq!((ci.degree, ci.genus), (vec![1, 2], 0));
        assert!(is_smooth_curve(&b).unwrap().smooth);
        let fiber = random_rational_curve_bip(fp(), 0, 1, 2).unwrap();
        assert_eq!(curve_invariants(&fiber).unwrap().degree, vec![0, 1]);
    }

    #[test]
    fn linear_systems() {
        let r = Ring::projective(fp(), 3);
        let tc = random_rational_curve_pr(fp(), 3, 3, 1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let pts = PointSet::random(&r, 2, &mut rng).unwrap();
        let sys = linear_system_through(&tc, &pts, &MultiDegree::single(2)).unwrap();
        assert_eq!(sys.len(), 1);
        for g in &sys {
            assert!(tc.contains(g));
            for i in 0..pts.len() {
                assert_eq!(g.evaluate(&pts.flat(i)), 0);
            }
        }
        let empty = PointSet::new(&r, vec![]).unwrap();
        assert_eq!(linear_system_through(&tc, &empty, &MultiDegree::single(2)).unwrap().len(), 3);
    }
}
