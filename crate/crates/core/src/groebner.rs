//! Ideals with cached Gröbner bases and the derived ideal operations:
//! membership, intersection, quotient, saturation, elimination and Krull
//! dimension.

use std::fmt;
use std::sync::{Arc, OnceLock};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::engine::{groebner, ModCtx, Vector};
use crate::error::{Error, Result};
use crate::ring::{Ambient, Monomial, MonomialOrder, Polynomial, Ring};

struct IdealInner {
    ring: Arc<Ring>,
    gens: Vec<Polynomial>,
    gb: OnceLock<Vec<Polynomial>>,
    reducers: OnceLock<Vec<Vector>>,
    saturated: OnceLock<bool>,
}

/// An ideal given by generators. The reduced Gröbner basis is computed on
/// first use and shared by all clones.
#[derive(Clone)]
pub struct Ideal {
    inner: Arc<IdealInner>,
}

impl fmt::Debug for Ideal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let g: Vec<String> = self.gens().iter().map(|p| p.to_string()).collect();
        write!(f, "Ideal({})", g.join(", "))
    }
}

const SATURATION_SEED: u64 = 0x5a7_u64;

impl Ideal {
    /// Ideal of homogeneous generators (zero generators are dropped).
    pub fn new(ring: &Arc<Ring>, gens: Vec<Polynomial>) -> Result<Ideal> {
        for g in &gens {
            if **g.ring() != **ring {
                return Err(Error::RingMismatch);
            }
            if !g.is_homogeneous() {
                return Err(Error::Inhomogeneous);
            }
        }
        Ok(Self::new_unchecked(ring, gens))
    }

    /// No homogeneity check; used for affine charts.
    pub fn new_unchecked(ring: &Arc<Ring>, gens: Vec<Polynomial>) -> Ideal {
        let gens = gens.into_iter().filter(|g| !g.is_zero()).collect();
        Ideal {
            inner: Arc::new(IdealInner {
                ring: ring.clone(),
                gens,
                gb: OnceLock::new(),
                reducers: OnceLock::new(),
                saturated: OnceLock::new(),
            }),
        }
    }

    fn with_flags(ring: &Arc<Ring>, gens: Vec<Polynomial>, gb: Option<Vec<Polynomial>>, saturated: Option<bool>) -> Ideal {
        let i = Self::new_unchecked(ring, gens);
        if let Some(gb) = gb {
            let _ = i.inner.gb.set(gb);
        }
        if let Some(s) = saturated {
            let _ = i.inner.saturated.set(s);
        }
        i
    }

    pub fn zero(ring: &Arc<Ring>) -> Ideal {
        Self::new_unchecked(ring, vec![])
    }

    pub fn unit(ring: &Arc<Ring>) -> Ideal {
        Self::new_unchecked(ring, vec![Polynomial::constant(ring, 1)])
    }

    /// The irrelevant ideal: all variables for `P^r`, `(x)(y)` for the Cox ring.
    pub fn irrelevant(ring: &Arc<Ring>) -> Ideal {
        match ring.ambient() {
            Some(Ambient::P1xP2) => {
                let v = ring.variables();
                let mut g = Vec::new();
                for a in &v[0..2] {
                    for b in &v[2..5] {
                        g.push(a.mul(b));
                    }
                }
                Self::new_unchecked(ring, g)
            }
            _ => Self::new_unchecked(ring, ring.variables()),
        }
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.inner.ring
    }

    pub fn gens(&self) -> &[Polynomial] {
        &self.inner.gens
    }

    fn same_ring(&self, other: &Ideal) -> Result<()> {
        if **self.ring() != **other.ring() {
            return Err(Error::RingMismatch);
        }
        Ok(())
    }

    /// Reduced Gröbner basis with respect to the ring's order.
    pub fn groebner_basis(&self) -> &[Polynomial] {
        self.inner.gb.get_or_init(|| compute_gb(self.ring(), self.gens()))
    }

    pub fn leading_monomials(&self) -> Vec<Monomial> {
        self.groebner_basis().iter().map(|g| g.leading_monomial().unwrap()).collect()
    }

    pub fn is_unit(&self) -> bool {
        let gb = self.groebner_basis();
        gb.len() == 1 && gb[0].terms().len() == 1 && gb[0].leading_monomial() == Some(self.ring().one())
    }

    pub fn is_zero(&self) -> bool {
        self.gens().is_empty()
    }

    /// Remainder modulo the reduced Gröbner basis.
    pub fn normal_form(&self, f: &Polynomial) -> Polynomial {
        let ring = self.ring();
        let ctx = ModCtx::ideal(ring);
        let gb = self
            .inner
            .reducers
            .get_or_init(|| self.groebner_basis().iter().map(|g| ctx.from_poly(g, 0)).collect());
        let r = crate::engine::reduce_with(&ctx, ctx.from_poly(f, 0), |m, _| {
            let pm = ring.plain(m);
            gb.iter().find(|g| ring.divides_plain(ring.plain(g[0].mon), pm))
        });
        ctx.component(&r, 0)
    }

    pub fn contains(&self, f: &Polynomial) -> bool {
        self.normal_form(f).is_zero()
    }

    /// `self ⊆ other`
    pub fn is_subset_of(&self, other: &Ideal) -> bool {
        self.gens().iter().all(|g| other.contains(g))
    }

    /// Equality as ideals (same reduced Gröbner basis).
    pub fn equals(&self, other: &Ideal) -> bool {
        **self.ring() == **other.ring() && self.groebner_basis() == other.groebner_basis()
    }

    pub fn sum(&self, other: &Ideal) -> Result<Ideal> {
        self.same_ring(other)?;
        let mut g = self.gens().to_vec();
        g.extend(other.gens().iter().cloned());
        Ok(Self::new_unchecked(self.ring(), g))
    }

    pub fn add_gens(&self, extra: &[Polynomial]) -> Ideal {
        let mut g = self.gens().to_vec();
        g.extend(extra.iter().cloned());
        Self::new_unchecked(self.ring(), g)
    }

    pub fn product(&self, other: &Ideal) -> Result<Ideal> {
        self.same_ring(other)?;
        let mut g = Vec::new();
        for a in self.gens() {
            for b in other.gens() {
                g.push(a.mul(b));
            }
        }
        Ok(Self::new_unchecked(self.ring(), g))
    }

    /// `I ∩ J` via `t I + (1 - t) J` and elimination of `t` (degree zero).
    pub fn intersect(&self, other: &Ideal) -> Result<Ideal> {
        self.same_ring(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Ideal::zero(self.ring()));
        }
        let ring = self.ring();
        let n = ring.nvars();
        let mut vars = ring.vars().to_vec();
        vars.push("_t".into());
        let mut grading = ring.grading().to_vec();
        grading.push(vec![0; ring.grading_rank()]);
        let aux = Ring::new_unchecked(ring.field(), vars, grading, MonomialOrder::Elimination(vec![n]))?;
        let map: Vec<usize> = (0..n).collect();
        let t = aux.variable(n);
        let one_minus_t = Polynomial::constant(&aux, 1).sub(&t);
        let mut gens = Vec::new();
        for f in self.gens() {
            gens.push(f.rename_into(&aux, &map).mul(&t));
        }
        for g in other.gens() {
            gens.push(g.rename_into(&aux, &map).mul(&one_minus_t));
        }
        let gb = compute_gb(&aux, &gens);
        let back: Vec<usize> = (0..=n).map(|i| i.min(n - 1)).collect();
        let kept: Vec<Polynomial> = gb
            .into_iter()
            .filter(|g| g.terms().iter().all(|&(m, _)| aux.exponent(m, n) == 0))
            .map(|g| g.rename_into(ring, &back))
            .collect();
        Ok(Self::new_unchecked(ring, kept))
    }

    /// `I : f` by the Bayer construction: `(I + (z - f)) : z` in `R[z]` with
    /// `z` last in grevlex, then `z -> f`.
    pub fn quotient_element(&self, f: &Polynomial) -> Result<Ideal> {
        self.colon_element(f, false)
    }

    /// `I : f^∞`
    pub fn saturate_element(&self, f: &Polynomial) -> Result<Ideal> {
        self.colon_element(f, true)
    }

    fn colon_element(&self, f: &Polynomial, saturate: bool) -> Result<Ideal> {
        let ring = self.ring();
        if **f.ring() != **ring {
            return Err(Error::RingMismatch);
        }
        if f.is_zero() {
            return Err(Error::ZeroIdeal);
        }
        let deg = f.degree()?;
        if deg.0.iter().all(|&c| c == 0) {
            return Ok(self.clone());
        }
        if self.is_zero() {
            return Ok(self.clone());
        }
        let n = ring.nvars();
        let mut vars = ring.vars().to_vec();
        vars.push("_z".into());
        let mut grading = ring.grading().to_vec();
        grading.push(deg.0.clone());
        let aux = Ring::new_unchecked(ring.field(), vars, grading, MonomialOrder::GRevLex)?;
        let map: Vec<usize> = (0..n).collect();
        let z = aux.variable(n);
        let mut gens: Vec<Polynomial> = self.gens().iter().map(|g| g.rename_into(&aux, &map)).collect();
        gens.push(z.sub(&f.rename_into(&aux, &map)));
        let gb = compute_gb(&aux, &gens);
        let mut images = ring.variables();
        images.push(f.clone());
        let out: Vec<Polynomial> = gb
            .iter()
            .map(|g| {
                let k = g.terms().iter().map(|&(m, _)| aux.exponent(m, n)).min().unwrap_or(0);
                let k = if saturate { k } else { k.min(1) };
                let shifted = divide_by_var_power(&aux, g, n, k);
                shifted.substitute(&images)
            })
            .collect();
        Ok(Self::new_unchecked(ring, out))
    }

    /// `(I : J) = ∩_j (I : g_j)`.
    pub fn quotient(&self, other: &Ideal) -> Result<Ideal> {
        self.same_ring(other)?;
        if other.is_zero() {
            return Err(Error::ZeroIdeal);
        }
        let mut acc: Option<Ideal> = None;
        for g in other.gens() {
            let q = self.quotient_element(g)?;
            acc = Some(match acc {
                None => q,
                Some(a) => a.intersect(&q)?,
            });
            if acc.as_ref().unwrap().is_subset_of(self) {
                break;
            }
        }
        Ok(acc.unwrap())
    }

    /// `I : J^∞`. With `None`, saturates with respect to the irrelevant ideal
    /// of the ambient (factor by factor for `P^1 x P^2`).
    pub fn saturate(&self, j: Option<&Ideal>) -> Result<Ideal> {
        let out = match j {
            None => self.saturate_irrelevant()?,
            Some(j) => {
                self.same_ring(j)?;
                if j.is_zero() {
                    return Err(Error::ZeroIdeal);
                }
                // I : J^∞ = I : h^∞ for h general in J
                let mut rng = ChaCha8Rng::seed_from_u64(SATURATION_SEED.rotate_left(17) ^ self.ring().field().p() as u64);
                let h = crate::geometry::general_elements(j, 1, &mut rng)?.remove(0);
                self.saturate_element(&h)?
            }
        };
        Ok(out)
    }

    fn saturate_irrelevant(&self) -> Result<Ideal> {
        let ring = self.ring().clone();
        let mut rng = ChaCha8Rng::seed_from_u64(SATURATION_SEED ^ ring.field().p() as u64);
        let out = match ring.ambient() {
            Some(Ambient::Projective(r)) => {
                let block: Vec<usize> = (0..=r).collect();
                saturate_linear(self, &block, &mut rng)?
            }
            Some(Ambient::P1xP2) => {
                let a = saturate_linear(self, &[0, 1], &mut rng)?;
                saturate_linear(&a, &[2, 3, 4], &mut rng)?
            }
            None => {
                let m = Ideal::new_unchecked(&ring, ring.variables());
                let mut cur = self.clone();
                loop {
                    let next = cur.quotient(&m)?;
                    if next.is_subset_of(&cur) {
                        break cur;
                    }
                    cur = next;
                }
            }
        };
        let gb = out.groebner_basis().to_vec();
        Ok(Ideal::with_flags(&ring, gb.clone(), Some(gb), Some(true)))
    }

    /// Whether `I = I : B^∞` for the irrelevant ideal `B`.
    pub fn is_saturated(&self) -> bool {
        *self.inner.saturated.get_or_init(|| match self.saturate(None) {
            Ok(s) => s.is_subset_of(self),
            Err(_) => false,
        })
    }

    pub fn saturated_flag(&self) -> Option<bool> {
        self.inner.saturated.get().copied()
    }

    /// `I ∩ k[vars \ block]`, returned in the subring on the remaining variables.
    pub fn eliminate(&self, block: &[usize]) -> Result<Ideal> {
        let ring = self.ring();
        let n = ring.nvars();
        if block.iter().any(|&b| b >= n) {
            return Err(Error::InvalidRing("elimination block out of range".into()));
        }
        if block.is_empty() {
            return Ok(self.clone());
        }
        let rest: Vec<usize> = (0..n).filter(|v| !block.contains(v)).collect();
        let elim = ring.with_order(MonomialOrder::Elimination(block.to_vec()))?;
        let id: Vec<usize> = (0..n).collect();
        let gens: Vec<Polynomial> = self.gens().iter().map(|g| g.rename_into(&elim, &id)).collect();
        let gb = compute_gb(&elim, &gens);
        let sub_vars: Vec<String> = rest.iter().map(|&v| ring.vars()[v].clone()).collect();
        let sub_grading: Vec<Vec<i64>> = rest.iter().map(|&v| ring.grading()[v].clone()).collect();
        let sub = Ring::new(ring.field(), sub_vars.clone(), sub_grading.clone(), MonomialOrder::GRevLex)
            .or_else(|_| Ring::new_unchecked(ring.field(), sub_vars, sub_grading, MonomialOrder::GRevLex))?;
        let mut map = vec![0usize; n];
        for (j, &v) in rest.iter().enumerate() {
            map[v] = j;
        }
        let kept: Vec<Polynomial> = gb
            .into_iter()
            .filter(|g| g.terms().iter().all(|&(m, _)| block.iter().all(|&b| elim.exponent(m, b) == 0)))
            .map(|g| g.rename_into(&sub, &map))
            .collect();
        Ok(Self::new_unchecked(&sub, kept))
    }

    /// Krull dimension of `R/I` from the leading-term ideal (maximal
    /// independent variable sets). The unit ideal gives `-1`.
    pub fn krull_dim(&self) -> i64 {
        if self.is_unit() {
            return -1;
        }
        let ring = self.ring();
        let n = ring.nvars();
        let supports: Vec<u32> = self
            .leading_monomials()
            .iter()
            .map(|&m| {
                let e = ring.exponents(m);
                e.iter().enumerate().filter(|(_, &x)| x > 0).fold(0u32, |acc, (i, _)| acc | (1 << i))
            })
            .collect();
        let mut best = 0i64;
        for s in 0u32..(1 << n) {
            let size = s.count_ones() as i64;
            if size <= best {
                continue;
            }
            if supports.iter().all(|&sup| sup & !s != 0) {
                best = size;
            }
        }
        best
    }

    /// Dimension of the projective scheme (`krull_dim - 1`, or `-1` when empty).
    /// Uses the number of grading factors for product ambients.
    pub fn projective_dim(&self) -> i64 {
        let k = self.krull_dim();
        match self.ring().ambient() {
            Some(Ambient::P1xP2) => {
                // a bihomogeneous ideal defining an empty subscheme may still
                // have Krull dimension up to 3 (e.g. the ideal (x0,x1)).
                let sat = self.saturate(None).expect("saturation");
                if sat.is_unit() {
                    -1
                } else {
                    sat.krull_dim() - 2
                }
            }
            _ => {
                if k <= 0 {
                    -1
                } else {
                    k - 1
                }
            }
        }
    }

    /// Image under a ring map given by images of the variables.
    pub fn map(&self, target: &Arc<Ring>, images: &[Polynomial]) -> Ideal {
        let g = self.gens().iter().map(|f| f.substitute(images)).collect();
        Ideal::new_unchecked(target, g)
    }
}

pub(crate) fn compute_gb(ring: &Arc<Ring>, gens: &[Polynomial]) -> Vec<Polynomial> {
    let ctx = ModCtx::ideal(ring);
    let vecs = gens.iter().filter(|g| !g.is_zero()).map(|g| ctx.from_poly(g, 0)).collect();
    groebner(&ctx, vecs).iter().map(|v| ctx.component(v, 0)).collect()
}

fn divide_by_var_power(ring: &Arc<Ring>, g: &Polynomial, var: usize, k: u32) -> Polynomial {
    if k == 0 {
        return g.clone();
    }
    let terms = g
        .terms()
        .iter()
        .map(|&(m, c)| {
            let mut e = ring.exponents(m);
            e[var] -= k;
            (ring.encode(&e), c)
        })
        .collect();
    Polynomial::from_terms(ring, terms)
}

/// `I : ℓ^∞` for a random linear form `ℓ` supported on `block` (all of one
/// multidegree); equals `I : (block)^∞` for general `ℓ`.
fn saturate_linear(ideal: &Ideal, block: &[usize], rng: &mut ChaCha8Rng) -> Result<Ideal> {
    let ring = ideal.ring();
    let f = ring.field();
    let n = ring.nvars();
    let v = *block.last().unwrap();
    let coeffs: Vec<(usize, u32)> = block[..block.len() - 1].iter().map(|&u| (u, f.random(rng))).collect();
    // psi^{-1}: x_v -> x_v - sum c_u x_u
    let vars = ring.variables();
    let mut inv_images = vars.clone();
    let mut fwd_images = vars.clone();
    for &(u, c) in &coeffs {
        inv_images[v] = inv_images[v].combine(&vars[u], f.neg(c));
        fwd_images[v] = fwd_images[v].combine(&vars[u], c);
    }
    // permute so that v is the last variable
    let mut perm: Vec<usize> = (0..n).filter(|&i| i != v).collect();
    perm.push(v);
    let mut map = vec![0usize; n];
    for (j, &i) in perm.iter().enumerate() {
        map[i] = j;
    }
    let pvars: Vec<String> = perm.iter().map(|&i| ring.vars()[i].clone()).collect();
    let pgrad: Vec<Vec<i64>> = perm.iter().map(|&i| ring.grading()[i].clone()).collect();
    let pring = Ring::new_unchecked(f, pvars, pgrad, MonomialOrder::GRevLex)?;
    let gens: Vec<Polynomial> = ideal.gens().iter().map(|g| g.substitute(&inv_images).rename_into(&pring, &map)).collect();
    let gb = compute_gb(&pring, &gens);
    let back: Vec<usize> = perm.clone();
    let out: Vec<Polynomial> = gb
        .iter()
        .map(|g| {
            let k = g.terms().iter().map(|&(m, _)| pring.exponent(m, n - 1)).min().unwrap_or(0);
            divide_by_var_power(&pring, g, n - 1, k).rename_into(ring, &back).substitute(&fwd_images)
        })
        .collect();
    Ok(Ideal::new_unchecked(ring, out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PrimeField;
    use crate::ring::{random_form, MultiDegree};

    fn p3() -> Arc<Ring> {
        Ring::projective(PrimeField::new(1009).unwrap(), 3)
    }

    pub(crate) fn twisted_cubic(r: &Arc<Ring>) -> Ideal {
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
    fn principal_and_linear() {
        let r = p3();
        let x = r.variables();
        let f = x[0].mul(&x[1]).scale(5).add(&x[2].mul(&x[3]));
        let i = Ideal::new(&r, vec![f.clone()]).unwrap();
        assert_eq!(i.groebner_basis(), &[f.monic()]);
        let j = Ideal::new(&r, vec![x[0].clone(), x[0].add(&x[1])]).unwrap();
        let mut gb = j.groebner_basis().to_vec();
        gb.sort_by_key(|g| g.leading_monomial());
        assert_eq!(gb, vec![x[1].clone(), x[0].clone()]);
    }

    #[test]
    fn twisted_cubic_is_groebner() {
        let r = p3();
        let i = twisted_cubic(&r);
        assert_eq!(i.groebner_basis().len(), 3);
        for g in i.gens() {
            assert!(i.contains(g));
        }
        let x = r.variables();
        let x13 = x[1].pow(3);
        assert!(!i.contains(&x13));
        assert!(!i.normal_form(&x13).is_zero());
        assert_eq!(i.normal_form(&Polynomial::constant(&r, 1)), Polynomial::constant(&r, 1));
        assert_eq!(i.krull_dim(), 2);
        assert_eq!(Ideal::zero(&r).krull_dim(), 4);
        let pt = Ideal::new(&r, vec![x[1].clone(), x[2].clone(), x[3].clone()]).unwrap();
        assert_eq!(pt.krull_dim(), 1);
        assert_eq!(Ideal::unit(&r).krull_dim(), -1);
    }

    #[test]
    fn intersection_and_quotient() {
        let r = p3();
        let x = r.variables();
        let a = Ideal::new(&r, vec![x[0].clone()]).unwrap();
        let b = Ideal::new(&r, vec![x[1].clone()]).unwrap();
        let ab = a.intersect(&b).unwrap();
        assert!(ab.equals(&Ideal::new(&r, vec![x[0].mul(&x[1])]).unwrap()));
        let i = twisted_cubic(&r);
        assert!(i.intersect(&i).unwrap().equals(&i));
        let j = Ideal::new(&r, vec![x[0].pow(2), x[0].mul(&x[1])]).unwrap();
        let q = j.quotient(&a).unwrap();
        assert!(q.equals(&Ideal::new(&r, vec![x[0].clone(), x[1].clone()]).unwrap()));
        assert!(i.quotient(&Ideal::unit(&r)).unwrap().equals(&i));
        let m = Ideal::new(&r, vec![x[0].clone(), x[1].clone()]).unwrap();
        let s = j.saturate(Some(&m)).unwrap();
        assert!(s.equals(&a));
        assert!(matches!(i.quotient(&Ideal::zero(&r)), Err(Error::ZeroIdeal)));
    }

    #[test]
    fn saturation_irrelevant() {
        let r = p3();
        let x = r.variables();
        let i = twisted_cubic(&r);
        // multiply by the maximal ideal: saturation recovers I
        let m = Ideal::irrelevant(&r);
        let im = i.product(&m).unwrap();
        assert!(!im.equals(&i));
        let s = im.saturate(None).unwrap();
        assert!(s.equals(&i));
        assert!(s.saturate(None).unwrap().equals(&s));
        assert!(i.is_saturated());
        assert!(!im.is_saturated());
        let _ = x;
    }

    #[test]
    fn elimination_of_parametrizations() {
        let f = PrimeField::new(1009).unwrap();
        // conic: s,t weight 1; x,y,z weight 2
        let vars = ["s", "t", "x", "y", "z"].iter().map(|s| s.to_string()).collect();
        let r = Ring::new(f, vars, vec![vec![1], vec![1], vec![2], vec![2], vec![2]], MonomialOrder::GRevLex).unwrap();
        let v = r.variables();
        let i = Ideal::new(
            &r,
            vec![v[2].sub(&v[0].pow(2)), v[3].sub(&v[0].mul(&v[1])), v[4].sub(&v[1].pow(2))],
        )
        .unwrap();
        let e = i.eliminate(&[0, 1]).unwrap();
        let w = e.ring().variables();
        assert!(e.equals(&Ideal::new(e.ring(), vec![w[0].mul(&w[2]).sub(&w[1].pow(2))]).unwrap()));
        assert!(i.eliminate(&[]).unwrap().equals(&i));
        // twisted cubic from the Veronese graph, x_i weight 3
        let vars = ["s", "t", "x0", "x1", "x2", "x3"].iter().map(|s| s.to_string()).collect();
        let r = Ring::new(f, vars, vec![vec![1], vec![1], vec![3], vec![3], vec![3], vec![3]], MonomialOrder::GRevLex).unwrap();
        let v = r.variables();
        let (s, t) = (&v[0], &v[1]);
        let i = Ideal::new(
            &r,
            vec![
                v[2].sub(&s.pow(3)),
                v[3].sub(&s.pow(2).mul(t)),
                v[4].sub(&s.mul(&t.pow(2))),
                v[5].sub(&t.pow(3)),
            ],
        )
        .unwrap();
        let e = i.eliminate(&[0, 1]).unwrap();
        assert_eq!(e.groebner_basis().len(), 3);
        let p3r = Ring::new(f, (0..4).map(|i| format!("x{i}")).collect(), vec![vec![3]; 4], MonomialOrder::GRevLex).unwrap();
        let tc = {
            let x = p3r.variables();
            Ideal::new(&p3r, vec![x[0].mul(&x[2]).sub(&x[1].mul(&x[1])), x[0].mul(&x[3]).sub(&x[1].mul(&x[2])), x[1].mul(&x[3]).sub(&x[2].mul(&x[2]))]).unwrap()
        };
        assert_eq!(e.groebner_basis(), tc.groebner_basis());
    }

    #[test]
    fn gb_independent_of_generator_order() {
        let r = p3();
        let gens: Vec<Polynomial> = (0..4).map(|s| random_form(&r, &MultiDegree::single(2 + (s % 2) as i64), s).unwrap()).collect();
        let base = Ideal::new(&r, gens.clone()).unwrap();
        for shift in 1..3 {
            let mut g = gens.clone();
            g.rotate_left(shift);
            g.reverse();
            assert_eq!(Ideal::new(&r, g).unwrap().groebner_basis(), base.groebner_basis());
        }
    }
}
