//! Hilbert functions, Hilbert polynomials and curve invariants.
//!
//! Hilbert polynomials are exact: they come from the multigraded Hilbert
//! series numerator of the leading-term ideal, which also yields the degree
//! from which the Hilbert function agrees with the polynomial.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::groebner::Ideal;
use crate::ring::{Ambient, MultiDegree, Polynomial, Ring};

/// `dim (R/I)_deg`
pub fn hilbert_function(ideal: &Ideal, deg: &MultiDegree) -> i64 {
    let ring = ideal.ring();
    let lts = ideal.leading_monomials();
    let plain: Vec<u128> = lts.iter().map(|&m| ring.plain(m)).collect();
    ring.monomials_of_degree(deg)
        .into_iter()
        .filter(|&m| {
            let pm = ring.plain(m);
            !plain.iter().any(|&l| ring.divides_plain(l, pm))
        })
        .count() as i64
}

/// A basis of `I_deg`, one element per leading monomial (`m - NF(m)`).
pub fn graded_piece(ideal: &Ideal, deg: &MultiDegree) -> Vec<Polynomial> {
    let ring = ideal.ring();
    let plain: Vec<u128> = ideal.leading_monomials().iter().map(|&m| ring.plain(m)).collect();
    ring.monomials_of_degree(deg)
        .into_iter()
        .filter(|&m| {
            let pm = ring.plain(m);
            plain.iter().any(|&l| ring.divides_plain(l, pm))
        })
        .map(|m| {
            let f = Polynomial::from_terms(ring, vec![(m, 1)]);
            f.sub(&ideal.normal_form(&f))
        })
        .collect()
}

/// Numerator of the multigraded Hilbert series of `R/I`, as a map from
/// multidegree to coefficient (`HS = N / prod (1 - t^deg x_i)`).
pub fn series_numerator(ideal: &Ideal) -> BTreeMap<Vec<i64>, i64> {
    let ring = ideal.ring();
    let gens: Vec<Vec<u32>> = ideal.leading_monomials().iter().map(|&m| ring.exponents(m)).collect();
    let grading = ring.grading().to_vec();
    let mut out = BTreeMap::new();
    numerator(minimalize(gens), &grading, &mut out, &vec![0; ring.grading_rank()], 1);
    out.retain(|_, c| *c != 0);
    out
}

fn divides(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

fn minimalize(mut gens: Vec<Vec<u32>>) -> Vec<Vec<u32>> {
    gens.sort_by_key(|g| g.iter().sum::<u32>());
    gens.dedup();
    let mut out: Vec<Vec<u32>> = Vec::new();
    for g in gens {
        if !out.iter().any(|h| divides(h, &g)) {
            out.push(g);
        }
    }
    out
}

fn mdeg(e: &[u32], grading: &[Vec<i64>]) -> Vec<i64> {
    let k = grading[0].len();
    let mut d = vec![0; k];
    for (i, &x) in e.iter().enumerate() {
        for j in 0..k {
            d[j] += x as i64 * grading[i][j];
        }
    }
    d
}

/// Accumulates `sign * t^shift * N(gens)` into `out` (Bigatti pivot recursion).
fn numerator(gens: Vec<Vec<u32>>, grading: &[Vec<i64>], out: &mut BTreeMap<Vec<i64>, i64>, shift: &[i64], sign: i64) {
    let n = grading.len();
    // pairwise coprime generators: product of (1 - t^deg g)
    let coprime = {
        let mut used = vec![false; n];
        let mut ok = true;
        'outer: for g in &gens {
            for (i, &x) in g.iter().enumerate() {
                if x > 0 {
                    if used[i] {
                        ok = false;
                        break 'outer;
                    }
                    used[i] = true;
                }
            }
        }
        ok
    };
    if coprime {
        let mut terms: BTreeMap<Vec<i64>, i64> = BTreeMap::new();
        terms.insert(shift.to_vec(), sign);
        for g in &gens {
            let d = mdeg(g, grading);
            let mut next = terms.clone();
            for (k, c) in terms {
                let key: Vec<i64> = k.iter().zip(&d).map(|(a, b)| a + b).collect();
                *next.entry(key).or_insert(0) -= c;
            }
            terms = next;
        }
        for (k, c) in terms {
            *out.entry(k).or_insert(0) += c;
        }
        return;
    }
    // pivot on the variable occurring in most generators
    let mut counts = vec![0usize; n];
    for g in &gens {
        for (i, &x) in g.iter().enumerate() {
            if x > 0 {
                counts[i] += 1;
            }
        }
    }
    let v = (0..n).max_by_key(|&i| counts[i]).unwrap();
    let mut es: Vec<u32> = gens.iter().map(|g| g[v]).filter(|&x| x > 0).collect();
    es.sort_unstable();
    let e = es[(es.len() - 1) / 2];
    let mut pivot = vec![0u32; n];
    pivot[v] = e;
    // N(M) = N(M + p) + t^deg(p) N(M : p)
    let colon: Vec<Vec<u32>> = gens
        .iter()
        .map(|g| {
            let mut h = g.clone();
            h[v] = h[v].saturating_sub(e);
            h
        })
        .collect();
    let mut plus: Vec<Vec<u32>> = gens.iter().filter(|g| g[v] < e).cloned().collect();
    plus.push(pivot.clone());
    numerator(minimalize(plus), grading, out, shift, sign);
    let d = mdeg(&pivot, grading);
    let s2: Vec<i64> = shift.iter().zip(&d).map(|(a, b)| a + b).collect();
    numerator(minimalize(colon), grading, out, &s2, sign);
}

/// A polynomial with rational coefficients `sum c_e h^e / denom`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HilbertPolynomial {
    pub denom: i64,
    pub terms: BTreeMap<Vec<u32>, i64>,
}

impl HilbertPolynomial {
    pub fn eval(&self, h: &[i64]) -> Option<i64> {
        let mut s: i128 = 0;
        for (e, &c) in &self.terms {
            let mut t = c as i128;
            for (x, &k) in h.iter().zip(e) {
                t *= (*x as i128).pow(k);
            }
            s += t;
        }
        if s % self.denom as i128 == 0 {
            Some((s / self.denom as i128) as i64)
        } else {
            None
        }
    }

    pub fn total_degree(&self) -> i64 {
        self.terms.keys().map(|e| e.iter().sum::<u32>() as i64).max().unwrap_or(-1)
    }

    /// `(linear coefficients, constant)` when the polynomial is affine with
    /// integer coefficients.
    pub fn affine(&self) -> Option<(Vec<i64>, i64)> {
        if self.total_degree() > 1 {
            return None;
        }
        let k = self.terms.keys().next().map(|e| e.len())?;
        let mut lin = vec![0; k];
        let mut c = 0;
        for (e, &v) in &self.terms {
            if v % self.denom != 0 {
                return None;
            }
            let v = v / self.denom;
            match e.iter().position(|&x| x == 1) {
                Some(i) => lin[i] = v,
                None => c = v,
            }
        }
        Some((lin, c))
    }
}

impl std::fmt::Display for HilbertPolynomial {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let names: &[&str] = match self.terms.keys().next().map(|e| e.len()) {
            Some(1) => &["t"],
            _ => &["h1", "h2", "h3", "h4"],
        };
        let mut parts = Vec::new();
        for (e, &c) in self.terms.iter().rev() {
            let mon: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(i, &k)| if k == 1 { names[i].to_string() } else { format!("{}^{k}", names[i]) })
                .collect();
            let coef = if self.denom == 1 { format!("{c}") } else { format!("{c}/{}", self.denom) };
            parts.push(if mon.is_empty() { coef } else { format!("{coef}*{}", mon.join("*")) });
        }
        if parts.is_empty() {
            return write!(f, "0");
        }
        write!(f, "{}", parts.join(" + ").replace("+ -", "- "))
    }
}

/// Hilbert function table with its polynomial.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct HilbertData {
    pub table: BTreeMap<MultiDegree, i64>,
    pub polynomial: HilbertPolynomial,
    /// The Hilbert function equals the polynomial in every degree
    /// dominating this bound.
    pub regularity: MultiDegree,
}

type Poly1 = Vec<i128>;

fn pmul(a: &[i128], b: &[i128]) -> Poly1 {
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn factorial(n: usize) -> i128 {
    (1..=n as i128).product()
}

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// Factor sizes: the number of variables of each grading component, when the
/// grading is standard (each variable has one unit-degree entry).
fn factor_sizes(ring: &Ring) -> Result<Vec<usize>> {
    let k = ring.grading_rank();
    let mut sizes = vec![0; k];
    for g in ring.grading() {
        let ones: Vec<usize> = (0..k).filter(|&j| g[j] != 0).collect();
        if ones.len() != 1 || g[ones[0]] != 1 {
            return Err(Error::Precondition("Hilbert polynomials need a standard (multi)grading".into()));
        }
        sizes[ones[0]] += 1;
    }
    Ok(sizes)
}

/// Exact Hilbert polynomial and a table of the Hilbert function up to one
/// past the regularity bound in each direction.
pub fn hilbert_polynomial(ideal: &Ideal) -> Result<HilbertData> {
    let ring = ideal.ring();
    let sizes = factor_sizes(ring)?;
    let k = sizes.len();
    let num = series_numerator(ideal);
    // P_m(x - v) = prod_{j=1}^{m-1} (x - v + j) / (m-1)!
    let denom: i128 = sizes.iter().map(|&m| factorial(m - 1)).product();
    let mut acc: BTreeMap<Vec<u32>, i128> = BTreeMap::new();
    for (v, &c) in &num {
        let mut total: BTreeMap<Vec<u32>, i128> = BTreeMap::new();
        total.insert(vec![0; k], c as i128);
        for j in 0..k {
            let mut p: Poly1 = vec![1];
            for s in 1..sizes[j] as i64 {
                p = pmul(&p, &[(s - v[j]) as i128, 1]);
            }
            let mut next = BTreeMap::new();
            for (e, &a) in &total {
                for (d, &b) in p.iter().enumerate() {
                    if b != 0 {
                        let mut e2 = e.clone();
                        e2[j] += d as u32;
                        *next.entry(e2).or_insert(0) += a * b;
                    }
                }
            }
            total = next;
        }
        for (e, a) in total {
            *acc.entry(e).or_insert(0) += a;
        }
    }
    acc.retain(|_, c| *c != 0);
    let g = acc.values().fold(denom, |g, &c| gcd(g, c));
    let polynomial = HilbertPolynomial {
        denom: (denom / g) as i64,
        terms: acc.into_iter().map(|(e, c)| (e, (c / g) as i64)).collect(),
    };
    let regularity: Vec<i64> = (0..k)
        .map(|j| num.keys().map(|v| v[j] - sizes[j] as i64 + 1).max().unwrap_or(0).max(0))
        .collect();
    let mut table = BTreeMap::new();
    let mut idx = vec![0i64; k];
    loop {
        let d = MultiDegree(idx.clone());
        table.insert(d.clone(), hilbert_function(ideal, &d));
        let mut j = 0;
        loop {
            if j == k {
                return Ok(HilbertData { table, polynomial, regularity: MultiDegree(regularity) });
            }
            idx[j] += 1;
            if idx[j] <= regularity[j] + 1 {
                break;
            }
            idx[j] = 0;
            j += 1;
        }
    }
}

/// Degree (or bidegree) and arithmetic genus of a curve.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveInvariants {
    pub ambient: Ambient,
    pub dim: i64,
    pub degree: Vec<i64>,
    pub genus: i64,
}

impl CurveInvariants {
    pub fn degree_display(&self) -> String {
        match self.degree.as_slice() {
            [d] => d.to_string(),
            ds => format!("({})", ds.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(",")),
        }
    }
}

impl std::fmt::Display for CurveInvariants {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "degree {} genus {}", self.degree_display(), self.genus)
    }
}

/// Invariants of a one-dimensional scheme read off its Hilbert polynomial.
pub fn curve_invariants(ideal: &Ideal) -> Result<CurveInvariants> {
    let ambient = ideal
        .ring()
        .ambient()
        .ok_or_else(|| Error::Precondition("curve invariants need P^r or P^1 x P^2".into()))?;
    let hp = hilbert_polynomial(ideal)?.polynomial;
    let dim = hp.total_degree();
    if dim != 1 {
        return Err(Error::WrongDimension(dim));
    }
    let (lin, c) = hp.affine().ok_or(Error::WrongDimension(dim))?;
    Ok(CurveInvariants { ambient, dim, degree: lin, genus: 1 - c })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PrimeField;
    use crate::ring::random_form;
    use std::sync::Arc;

    fn p3() -> Arc<Ring> {
        Ring::projective(PrimeField::new(1009).unwrap(), 3)
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

    #[test]
    fn counts_in_empty_ideal() {
        let r = p3();
        assert_eq!(hilbert_function(&Ideal::zero(&r), &MultiDegree::single(5)), 56);
        let c = Ring::cox_p1p2(PrimeField::new(1009).unwrap());
        assert_eq!(hilbert_function(&Ideal::zero(&c), &MultiDegree::bi(2, 4)), 45);
    }

    #[test]
    fn twisted_cubic_data() {
        let r = p3();
        let i = twisted_cubic(&r);
        assert_eq!(hilbert_function(&i, &MultiDegree::single(2)), 7);
        assert_eq!(graded_piece(&i, &MultiDegree::single(2)).len(), 3);
        let hd = hilbert_polynomial(&i).unwrap();
        assert_eq!(hd.polynomial.affine(), Some((vec![3], 1)));
        assert_eq!(hd.polynomial.to_string(), "3*t + 1");
        for (d, v) in &hd.table {
            if d.0[0] >= hd.regularity.0[0] {
                assert_eq!(hd.polynomial.eval(&d.0), Some(*v));
            }
        }
        let ci = curve_invariants(&i).unwrap();
        assert_eq!((ci.degree.clone(), ci.genus), (vec![3], 0));
    }

    #[test]
    fn line_and_linear_piece() {
        let r = p3();
        let x = r.variables();
        let l = Ideal::new(&r, vec![x[0].clone(), x[1].clone()]).unwrap();
        let ci = curve_invariants(&l).unwrap();
        assert_eq!((ci.degree, ci.genus), (vec![1], 0));
        let h = Ideal::new(&r, vec![x[0].clone()]).unwrap();
        assert_eq!(graded_piece(&h, &MultiDegree::single(1)), vec![x[0].clone()]);
        assert!(matches!(curve_invariants(&h), Err(Error::WrongDimension(2))));
    }

    #[test]
    fn complete_intersections() {
        let r = p3();
        for (a, b) in [(2, 2), (2, 3), (3, 3)] {
            let f = random_form(&r, &MultiDegree::single(a), 1).unwrap();
            let g = random_form(&r, &MultiDegree::single(b), 2).unwrap();
            let i = Ideal::new(&r, vec![f, g]).unwrap();
            let ci = curve_invariants(&i).unwrap();
            assert_eq!(ci.degree, vec![a * b]);
            assert_eq!(2 * ci.genus - 2, a * b * (a + b - 4));
        }
    }

    #[test]
    fn skew_lines_add() {
        let r = p3();
        let x = r.variables();
        let l1 = Ideal::new(&r, vec![x[0].clone(), x[1].clone()]).unwrap();
        let l2 = Ideal::new(&r, vec![x[2].clone(), x[3].clone()]).unwrap();
        let u = l1.intersect(&l2).unwrap();
        let hp = hilbert_polynomial(&u).unwrap().polynomial;
        assert_eq!(hp.affine(), Some((vec![2], 2)));
    }

    #[test]
    fn bigraded_rational_curve() {
        // graph of t -> [t], [t] in P^1 x P^2 via a (1,1) curve: y = (x0, x1, 0) line
        let c = Ring::cox_p1p2(PrimeField::new(1009).unwrap());
        let v = c.variables();
        let i = Ideal::new(&c, vec![v[4].clone(), v[0].mul(&v[3]).sub(&v[1].mul(&v[2]))]).unwrap();
        let hd = hilbert_polynomial(&i).unwrap();
        assert_eq!(hd.polynomial.affine(), Some((vec![1, 1], 1)));
        let ci = curve_invariants(&i).unwrap();
        assert_eq!((ci.degree, ci.genus), (vec![1, 1], 0));
        assert_eq!(hilbert_polynomial(&Ideal::zero(&c)).unwrap().polynomial.eval(&[2, 4]), Some(45));
    }

    #[test]
    fn complementarity() {
        let r = p3();
        let i = twisted_cubic(&r);
        for d in 0..6 {
            let d = MultiDegree::single(d);
            assert_eq!(
                hilbert_function(&i, &d) + graded_piece(&i, &d).len() as i64,
                hilbert_function(&Ideal::zero(&r), &d)
            );
        }
    }
}
