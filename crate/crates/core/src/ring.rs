//! Multigraded polynomial rings over `F_p` and their sparse polynomials.
//!
//! Monomials are packed into a single `u128` whose *numeric* order is the
//! ring's monomial order. Each variable owns one byte (exponents are at most
//! 127); degree-compatible orders also carry 16-bit degree fields in the high
//! bytes. Multiplication and division are then plain integer arithmetic
//! corrected by the encoding of the unit monomial.

use std::cmp::Ordering;
use std::fmt;
use std::ops::Add;
use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rustc_hash::FxHashMap;

use crate::error::{Error, Result};
use crate::field::PrimeField;

pub const MAX_EXPONENT: u32 = 127;

/// Monomial order descriptor.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum MonomialOrder {
    /// Graded reverse lexicographic order, graded by the ring's total weights.
    GRevLex,
    /// Pure lexicographic order, `x0 > x1 > ...`.
    Lex,
    /// Block order: the listed variables are compared first (unit-weight
    /// grevlex), the remaining ones break ties (weighted grevlex). Any monomial
    /// involving a block variable exceeds every block-free monomial of the
    /// same rest-part comparison, which makes this an elimination order.
    Elimination(Vec<usize>),
}

/// A packed monomial. Only meaningful relative to the ring that produced it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(pub(crate) u128);

#[derive(Clone, Debug)]
struct Layout {
    pos: Vec<u8>,
    flip: u128,
    high: u128,
    one: u128,
    /// (bit shift, weight per variable) of each degree field.
    deg_fields: Vec<(u32, Vec<u32>)>,
    /// Bit shift of a degree field holding the full weighted degree.
    total_deg_field: Option<u32>,
}

impl Layout {
    fn build(n: usize, weights: &[u32], order: &MonomialOrder) -> Result<Layout> {
        let mut pos = vec![0u8; n];
        let mut complemented = vec![false; n];
        let mut deg_fields = Vec::new();
        let mut total = None;
        match order {
            MonomialOrder::GRevLex => {
                if n > 14 {
                    return Err(Error::InvalidRing("grevlex supports at most 14 variables".into()));
                }
                for i in 0..n {
                    pos[i] = i as u8;
                    complemented[i] = true;
                }
                deg_fields.push((112, weights.to_vec()));
                total = Some(112);
            }
            MonomialOrder::Lex => {
                if n > 16 {
                    return Err(Error::InvalidRing("lex supports at most 16 variables".into()));
                }
                for i in 0..n {
                    pos[i] = (15 - i) as u8;
                }
            }
            MonomialOrder::Elimination(block) => {
                let mut b: Vec<usize> = block.clone();
                b.sort_unstable();
                b.dedup();
                if b.iter().any(|&v| v >= n) {
                    return Err(Error::InvalidRing("elimination block out of range".into()));
                }
                let rest: Vec<usize> = (0..n).filter(|v| !b.contains(v)).collect();
                if n > 12 {
                    return Err(Error::InvalidRing("elimination orders support at most 12 variables".into()));
                }
                let m = b.len();
                let mut wb = vec![0u32; n];
                for &v in &b {
                    wb[v] = 1;
                }
                deg_fields.push((112, wb));
                for (j, &v) in b.iter().enumerate() {
                    pos[v] = (14 - m + j) as u8;
                    complemented[v] = true;
                }
                let mut wr = vec![0u32; n];
                for &v in &rest {
                    wr[v] = weights[v];
                }
                let shift = 8 * (12 - m) as u32;
                deg_fields.push((shift, wr));
                let nr = rest.len();
                for (j, &v) in rest.iter().enumerate() {
                    pos[v] = (12 - m - nr + j) as u8;
                    complemented[v] = true;
                }
            }
        }
        let mut flip = 0u128;
        let mut high = 0u128;
        for i in 0..n {
            if complemented[i] {
                flip |= 0x7Fu128 << (8 * pos[i] as u32);
            }
            high |= 0x80u128 << (8 * pos[i] as u32);
        }
        Ok(Layout { pos, flip, high, one: flip, deg_fields, total_deg_field: total })
    }
}

/// A multigraded polynomial ring `F_p[x_0..x_n]`.
#[derive(Clone, Debug)]
pub struct Ring {
    field: PrimeField,
    vars: Vec<String>,
    grading: Vec<Vec<i64>>,
    weights: Vec<u32>,
    order: MonomialOrder,
    layout: Layout,
}

impl PartialEq for Ring {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field
            && self.vars == other.vars
            && self.grading == other.grading
            && self.order == other.order
            && self.weights == other.weights
    }
}
impl Eq for Ring {}

/// Which ambient variety a ring is the coordinate ring of.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum Ambient {
    Projective(usize),
    P1xP2,
}

impl Ring {
    /// Builds a ring, validating the grading invariants.
    pub fn new(
        field: PrimeField,
        vars: Vec<String>,
        grading: Vec<Vec<i64>>,
        order: MonomialOrder,
    ) -> Result<Arc<Ring>> {
        if vars.len() != grading.len() || vars.is_empty() {
            return Err(Error::InvalidRing("one grading vector per variable required".into()));
        }
        let k = grading[0].len();
        if k == 0 || grading.iter().any(|g| g.len() != k) {
            return Err(Error::InvalidRing("grading vectors must share one length".into()));
        }
        for g in &grading {
            if g.iter().any(|&c| c < 0) || g.iter().all(|&c| c == 0) {
                return Err(Error::InvalidRing(
                    "grading vectors must be non-negative and nonzero".into(),
                ));
            }
        }
        if k == 2 {
            let a = grading.iter().filter(|g| **g == [1, 0]).count();
            let b = grading.iter().filter(|g| **g == [0, 1]).count();
            if a != 2 || b != 3 || vars.len() != 5 {
                return Err(Error::InvalidRing(
                    "bigraded rings must be the Cox ring of P^1 x P^2".into(),
                ));
            }
        }
        let mut seen = std::collections::HashSet::new();
        for v in &vars {
            if !seen.insert(v.as_str()) {
                return Err(Error::InvalidRing(format!("duplicate variable {v}")));
            }
        }
        Self::new_unchecked(field, vars, grading, order)
    }

    /// Builds a ring without checking grading invariants (auxiliary rings may
    /// carry degree-zero variables).
    pub(crate) fn new_unchecked(
        field: PrimeField,
        vars: Vec<String>,
        grading: Vec<Vec<i64>>,
        order: MonomialOrder,
    ) -> Result<Arc<Ring>> {
        let weights: Vec<u32> = grading.iter().map(|g| g.iter().sum::<i64>() as u32).collect();
        let layout = Layout::build(vars.len(), &weights, &order)?;
        Ok(Arc::new(Ring { field, vars, grading, weights, order, layout }))
    }

    /// Standard-graded `P^r` with variables `x0..xr` in grevlex.
    pub fn projective(field: PrimeField, r: usize) -> Arc<Ring> {
        let vars = (0..=r).map(|i| format!("x{i}")).collect();
        Ring::new(field, vars, vec![vec![1]; r + 1], MonomialOrder::GRevLex).expect("valid P^r ring")
    }

    /// The Cox ring of `P^1 x P^2`: `x0,x1` of degree (1,0), `y0,y1,y2` of degree (0,1).
    pub fn cox_p1p2(field: PrimeField) -> Arc<Ring> {
        let vars = ["x0", "x1", "y0", "y1", "y2"].iter().map(|s| s.to_string()).collect();
        let grading = vec![vec![1, 0], vec![1, 0], vec![0, 1], vec![0, 1], vec![0, 1]];
        Ring::new(field, vars, grading, MonomialOrder::GRevLex).expect("valid Cox ring")
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }
    pub fn nvars(&self) -> usize {
        self.vars.len()
    }
    pub fn vars(&self) -> &[String] {
        &self.vars
    }
    pub fn grading(&self) -> &[Vec<i64>] {
        &self.grading
    }
    pub fn grading_rank(&self) -> usize {
        self.grading[0].len()
    }
    pub fn weights(&self) -> &[u32] {
        &self.weights
    }
    pub fn order(&self) -> &MonomialOrder {
        &self.order
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    /// The ambient variety, when the ring is one of the two standard shapes.
    pub fn ambient(&self) -> Option<Ambient> {
        match self.grading_rank() {
            1 if self.grading.iter().all(|g| g[0] == 1) => Some(Ambient::Projective(self.nvars() - 1)),
            2 => Some(Ambient::P1xP2),
            _ => None,
        }
    }

    /// Same variables and grading, different order.
    pub fn with_order(&self, order: MonomialOrder) -> Result<Arc<Ring>> {
        Self::new_unchecked(self.field, self.vars.clone(), self.grading.clone(), order)
    }

    /// Whether the order refines the total weighted degree.
    pub fn degree_compatible(&self) -> bool {
        self.layout.total_deg_field.is_some()
    }

    // ---- monomial encoding -------------------------------------------------

    pub fn monomial(&self, exps: &[u32]) -> Result<Monomial> {
        if exps.len() != self.nvars() {
            return Err(Error::InvalidRing("exponent vector length mismatch".into()));
        }
        if exps.iter().any(|&e| e > MAX_EXPONENT) {
            return Err(Error::ExponentOverflow);
        }
        Ok(self.encode(exps))
    }

    pub(crate) fn encode(&self, exps: &[u32]) -> Monomial {
        let l = &self.layout;
        let mut m = 0u128;
        for (i, &e) in exps.iter().enumerate() {
            debug_assert!(e <= MAX_EXPONENT);
            m |= (e as u128) << (8 * l.pos[i] as u32);
        }
        m ^= l.flip;
        for (shift, w) in &l.deg_fields {
            let d: u32 = exps.iter().zip(w).map(|(&e, &w)| e * w).sum();
            debug_assert!(d < 65536);
            m += (d as u128) << shift;
        }
        Monomial(m)
    }

    #[inline]
    pub(crate) fn one(&self) -> Monomial {
        Monomial(self.layout.one)
    }

    /// Plain exponents, one per variable byte.
    #[inline]
    pub(crate) fn plain(&self, m: Monomial) -> u128 {
        (m.0 ^ self.layout.flip) & (self.layout.high >> 7).wrapping_mul(0xFF)
    }

    pub fn exponents(&self, m: Monomial) -> Vec<u32> {
        let p = self.plain(m);
        self.layout.pos.iter().map(|&b| ((p >> (8 * b as u32)) & 0xFF) as u32).collect()
    }

    #[inline]
    pub fn exponent(&self, m: Monomial, var: usize) -> u32 {
        let p = self.plain(m);
        ((p >> (8 * self.layout.pos[var] as u32)) & 0xFF) as u32
    }

    #[inline]
    pub(crate) fn mul_mon(&self, a: Monomial, b: Monomial) -> Monomial {
        Monomial(a.0 + b.0 - self.layout.one)
    }

    /// `b / a`, assuming `a | b`.
    #[inline]
    pub(crate) fn div_mon(&self, b: Monomial, a: Monomial) -> Monomial {
        Monomial(b.0 + self.layout.one - a.0)
    }

    #[inline]
    pub(crate) fn divides_plain(&self, pa: u128, pb: u128) -> bool {
        let h = self.layout.high;
        ((pb | h) - pa) & h == h
    }

    #[inline]
    pub fn divides(&self, a: Monomial, b: Monomial) -> bool {
        self.divides_plain(self.plain(a), self.plain(b))
    }

    pub(crate) fn lcm_mon(&self, a: Monomial, b: Monomial) -> Monomial {
        let ea = self.exponents(a);
        let eb = self.exponents(b);
        let e: Vec<u32> = ea.iter().zip(&eb).map(|(x, y)| *x.max(y)).collect();
        self.encode(&e)
    }

    pub(crate) fn coprime(&self, a: Monomial, b: Monomial) -> bool {
        let pa = self.plain(a);
        let pb = self.plain(b);
        for &byte in &self.layout.pos {
            let s = 8 * byte as u32;
            if (pa >> s) & 0xFF != 0 && (pb >> s) & 0xFF != 0 {
                return false;
            }
        }
        true
    }

    /// Total weighted degree.
    #[inline]
    pub fn mon_degree(&self, m: Monomial) -> u32 {
        match self.layout.total_deg_field {
            Some(s) => ((m.0 >> s) & 0xFFFF) as u32,
            None => self.exponents(m).iter().zip(&self.weights).map(|(e, w)| e * w).sum(),
        }
    }

    pub fn mon_multidegree(&self, m: Monomial) -> MultiDegree {
        let e = self.exponents(m);
        let k = self.grading_rank();
        let mut c = vec![0i64; k];
        for (i, &ei) in e.iter().enumerate() {
            for j in 0..k {
                c[j] += ei as i64 * self.grading[i][j];
            }
        }
        MultiDegree(c)
    }

    pub fn mon_to_string(&self, m: Monomial) -> String {
        let e = self.exponents(m);
        let parts: Vec<String> = e
            .iter()
            .enumerate()
            .filter(|(_, &x)| x > 0)
            .map(|(i, &x)| if x == 1 { self.vars[i].clone() } else { format!("{}^{}", self.vars[i], x) })
            .collect();
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }

    pub fn compare(&self, a: Monomial, b: Monomial) -> Ordering {
        a.cmp(&b)
    }

    // ---- graded structure --------------------------------------------------

    /// All monomials of the given multidegree, in descending order.
    pub fn monomials_of_degree(&self, deg: &MultiDegree) -> Vec<Monomial> {
        let mut out = Vec::new();
        if deg.0.len() != self.grading_rank() || deg.0.iter().any(|&c| c < 0) {
            return out;
        }
        let mut exps = vec![0u32; self.nvars()];
        let mut rem = deg.0.clone();
        self.enumerate(0, &mut rem, &mut exps, &mut out);
        out.sort_unstable_by(|a, b| b.cmp(a));
        out
    }

    fn enumerate(&self, var: usize, rem: &mut Vec<i64>, exps: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if var == self.nvars() {
            if rem.iter().all(|&c| c == 0) {
                out.push(self.encode(exps));
            }
            return;
        }
        // prune: remaining variables must be able to absorb rem
        let g = &self.grading[var];
        let mut e = 0u32;
        loop {
            self.enumerate(var + 1, rem, exps, out);
            if g.iter().zip(rem.iter()).any(|(&gi, &ri)| gi > ri) || e == MAX_EXPONENT {
                break;
            }
            for (ri, gi) in rem.iter_mut().zip(g) {
                *ri -= gi;
            }
            e += 1;
            exps[var] = e;
        }
        for (ri, gi) in rem.iter_mut().zip(g) {
            *ri += gi * e as i64;
        }
        exps[var] = 0;
    }

    /// Number of monomials of the multidegree, `h^0` of the ambient line bundle.
    pub fn monomial_count(&self, deg: &MultiDegree) -> usize {
        match self.ambient() {
            Some(Ambient::Projective(r)) if deg.0.len() == 1 => {
                let d = deg.0[0];
                if d < 0 {
                    0
                } else {
                    binomial(d as u64 + r as u64, r as u64) as usize
                }
            }
            Some(Ambient::P1xP2) if deg.0.len() == 2 => {
                let (a, b) = (deg.0[0], deg.0[1]);
                if a < 0 || b < 0 {
                    0
                } else {
                    ((a + 1) * (b + 2) * (b + 1) / 2) as usize
                }
            }
            _ => self.monomials_of_degree(deg).len(),
        }
    }

    pub fn variable(self: &Arc<Self>, i: usize) -> Polynomial {
        let mut e = vec![0; self.nvars()];
        e[i] = 1;
        Polynomial { ring: self.clone(), terms: vec![(self.encode(&e), 1)] }
    }

    pub fn variables(self: &Arc<Self>) -> Vec<Polynomial> {
        (0..self.nvars()).map(|i| self.variable(i)).collect()
    }

    pub fn var_degree(&self, i: usize) -> MultiDegree {
        MultiDegree(self.grading[i].clone())
    }

    /// The zero vector of the grading group.
    pub fn zero_degree(&self) -> MultiDegree {
        MultiDegree(vec![0; self.grading_rank()])
    }
}

pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc = 1u64;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// A degree in `Z^k`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize, serde::Deserialize)]
pub struct MultiDegree(pub Vec<i64>);

impl MultiDegree {
    pub fn single(d: i64) -> Self {
        MultiDegree(vec![d])
    }
    pub fn bi(a: i64, b: i64) -> Self {
        MultiDegree(vec![a, b])
    }
    pub fn components(&self) -> &[i64] {
        &self.0
    }
    /// Componentwise `self >= other` (partial order for k >= 2).
    pub fn dominates(&self, other: &MultiDegree) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a >= b)
    }
    pub fn total(&self) -> i64 {
        self.0.iter().sum()
    }
    pub fn sub(&self, other: &MultiDegree) -> MultiDegree {
        MultiDegree(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }
}

impl Add for &MultiDegree {
    type Output = MultiDegree;
    fn add(self, o: &MultiDegree) -> MultiDegree {
        MultiDegree(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }
}

impl fmt::Display for MultiDegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.len() == 1 {
            write!(f, "{}", self.0[0])
        } else {
            let s: Vec<String> = self.0.iter().map(|c| c.to_string()).collect();
            write!(f, "({})", s.join(","))
        }
    }
}

// ---- polynomials ----------------------------------------------------------

/// A sparse polynomial; terms strictly descending in the ring's order, no zero
/// coefficients.
#[derive(Clone, Debug)]
pub struct Polynomial {
    pub(crate) ring: Arc<Ring>,
    pub(crate) terms: Vec<(Monomial, u32)>,
}

impl PartialEq for Polynomial {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms && *self.ring == *other.ring
    }
}
impl Eq for Polynomial {}

/// Arithmetic selector for [`poly_arith`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
}

/// Ring-checked arithmetic.
pub fn poly_arith(f: &Polynomial, g: &Polynomial, op: ArithOp) -> Result<Polynomial> {
    if *f.ring != *g.ring {
        return Err(Error::RingMismatch);
    }
    Ok(match op {
        ArithOp::Add => f.add(g),
        ArithOp::Sub => f.sub(g),
        ArithOp::Mul => f.mul(g),
    })
}

impl Polynomial {
    pub fn zero(ring: &Arc<Ring>) -> Self {
        Polynomial { ring: ring.clone(), terms: Vec::new() }
    }

    pub fn constant(ring: &Arc<Ring>, c: u32) -> Self {
        let c = c % ring.field.p();
        let terms = if c == 0 { vec![] } else { vec![(ring.one(), c)] };
        Polynomial { ring: ring.clone(), terms }
    }

    /// Builds from arbitrary (monomial, coefficient) pairs, combining duplicates.
    pub fn from_terms(ring: &Arc<Ring>, terms: Vec<(Monomial, u32)>) -> Self {
        let f = ring.field;
        let mut map: FxHashMap<Monomial, u32> = FxHashMap::default();
        for (m, c) in terms {
            let e = map.entry(m).or_insert(0);
            *e = f.add(*e, c % f.p());
        }
        let mut t: Vec<(Monomial, u32)> = map.into_iter().filter(|(_, c)| *c != 0).collect();
        t.sort_unstable_by(|a, b| b.0.cmp(&a.0));
        Polynomial { ring: ring.clone(), terms: t }
    }

    /// Terms already strictly sorted and nonzero.
    pub(crate) fn from_sorted(ring: &Arc<Ring>, terms: Vec<(Monomial, u32)>) -> Self {
        debug_assert!(terms.windows(2).all(|w| w[0].0 > w[1].0));
        debug_assert!(terms.iter().all(|t| t.1 != 0));
        Polynomial { ring: ring.clone(), terms }
    }

    pub fn monomial(ring: &Arc<Ring>, exps: &[u32], c: u32) -> Result<Self> {
        let m = ring.monomial(exps)?;
        Ok(Polynomial::from_terms(ring, vec![(m, c)]))
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }
    pub fn terms(&self) -> &[(Monomial, u32)] {
        &self.terms
    }
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    pub fn len(&self) -> usize {
        self.terms.len()
    }
    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
    pub fn leading_monomial(&self) -> Option<Monomial> {
        self.terms.first().map(|t| t.0)
    }
    pub fn leading_coefficient(&self) -> u32 {
        self.terms.first().map(|t| t.1).unwrap_or(0)
    }

    pub fn add(&self, g: &Polynomial) -> Polynomial {
        self.combine(g, 1)
    }

    pub fn sub(&self, g: &Polynomial) -> Polynomial {
        self.combine(g, self.ring.field.neg(1))
    }

    /// `self + c * g`
    pub(crate) fn combine(&self, g: &Polynomial, c: u32) -> Polynomial {
        let f = self.ring.field;
        let (a, b) = (&self.terms, &g.terms);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() || j < b.len() {
            if j == b.len() || (i < a.len() && a[i].0 > b[j].0) {
                out.push(a[i]);
                i += 1;
            } else if i == a.len() || b[j].0 > a[i].0 {
                let v = f.mul(b[j].1, c);
                if v != 0 {
                    out.push((b[j].0, v));
                }
                j += 1;
            } else {
                let v = f.add(a[i].1, f.mul(b[j].1, c));
                if v != 0 {
                    out.push((a[i].0, v));
                }
                i += 1;
                j += 1;
            }
        }
        Polynomial { ring: self.ring.clone(), terms: out }
    }

    pub fn neg(&self) -> Polynomial {
        self.scale(self.ring.field.neg(1))
    }

    pub fn scale(&self, c: u32) -> Polynomial {
        let f = self.ring.field;
        let c = c % f.p();
        if c == 0 {
            return Polynomial::zero(&self.ring);
        }
        Polynomial {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|&(m, a)| (m, f.mul(a, c))).collect(),
        }
    }

    pub fn mul_monomial(&self, m: Monomial, c: u32) -> Polynomial {
        let f = self.ring.field;
        if c % f.p() == 0 {
            return Polynomial::zero(&self.ring);
        }
        Polynomial {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|&(t, a)| (self.ring.mul_mon(t, m), f.mul(a, c))).collect(),
        }
    }

    pub fn mul(&self, g: &Polynomial) -> Polynomial {
        if self.is_zero() || g.is_zero() {
            return Polynomial::zero(&self.ring);
        }
        let (small, big) = if self.len() <= g.len() { (self, g) } else { (g, self) };
        if small.len() == 1 {
            return big.mul_monomial(small.terms[0].0, small.terms[0].1);
        }
        let f = self.ring.field;
        let p = f.p() as u64;
        let mut map: FxHashMap<Monomial, u64> = FxHashMap::default();
        map.reserve(self.len() * g.len() / 2);
        for &(m1, c1) in &small.terms {
            for &(m2, c2) in &big.terms {
                let e = map.entry(self.ring.mul_mon(m1, m2)).or_insert(0);
                *e = (*e + c1 as u64 * c2 as u64) % p;
            }
        }
        let mut t: Vec<(Monomial, u32)> =
            map.into_iter().filter(|(_, c)| *c != 0).map(|(m, c)| (m, c as u32)).collect();
        t.sort_unstable_by(|a, b| b.0.cmp(&a.0));
        Polynomial { ring: self.ring.clone(), terms: t }
    }

    pub fn pow(&self, e: u32) -> Polynomial {
        let mut acc = Polynomial::constant(&self.ring, 1);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn monic(&self) -> Polynomial {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(self.ring.field.inv(self.leading_coefficient()))
    }

    /// Common multidegree of all terms; `Ok(None)` when inhomogeneous.
    pub fn multidegree(&self) -> Result<Option<MultiDegree>> {
        let first = self.terms.first().ok_or(Error::ZeroPolynomial)?;
        let d = self.ring.mon_multidegree(first.0);
        for &(m, _) in &self.terms[1..] {
            if self.ring.mon_multidegree(m) != d {
                return Ok(None);
            }
        }
        Ok(Some(d))
    }

    pub fn is_homogeneous(&self) -> bool {
        self.is_zero() || matches!(self.multidegree(), Ok(Some(_)))
    }

    /// Multidegree of a nonzero homogeneous polynomial.
    pub fn degree(&self) -> Result<MultiDegree> {
        self.multidegree()?.ok_or(Error::Inhomogeneous)
    }

    /// Maximal total weighted degree of a term.
    pub fn total_degree(&self) -> u32 {
        self.terms.iter().map(|t| self.ring.mon_degree(t.0)).max().unwrap_or(0)
    }

    pub fn evaluate(&self, point: &[u32]) -> u32 {
        let f = self.ring.field;
        let mut acc = 0;
        for &(m, c) in &self.terms {
            let e = self.ring.exponents(m);
            let mut v = c;
            for (i, &ei) in e.iter().enumerate() {
                if ei > 0 {
                    v = f.mul(v, f.pow(point[i], ei as u64));
                }
            }
            acc = f.add(acc, v);
        }
        acc
    }

    /// Ring homomorphism sending variable `i` to `images[i]`.
    pub fn substitute(&self, images: &[Polynomial]) -> Polynomial {
        let target = images[0].ring.clone();
        let n = self.ring.nvars();
        let mut powers: Vec<Vec<Polynomial>> = vec![vec![Polynomial::constant(&target, 1)]; n];
        let mut acc: FxHashMap<Monomial, u32> = FxHashMap::default();
        let f = target.field;
        for &(m, c) in &self.terms {
            let e = self.ring.exponents(m);
            let mut prod = Polynomial::constant(&target, c);
            for i in 0..n {
                let k = e[i] as usize;
                if k == 0 {
                    continue;
                }
                while powers[i].len() <= k {
                    let next = powers[i].last().unwrap().mul(&images[i]);
                    powers[i].push(next);
                }
                prod = prod.mul(&powers[i][k]);
            }
            for &(mm, cc) in &prod.terms {
                let v = acc.entry(mm).or_insert(0);
                *v = f.add(*v, cc);
            }
        }
        let mut t: Vec<(Monomial, u32)> = acc.into_iter().filter(|x| x.1 != 0).collect();
        t.sort_unstable_by(|a, b| b.0.cmp(&a.0));
        Polynomial { ring: target, terms: t }
    }

    /// Re-encodes into `target`, sending variable `i` to variable `var_map[i]`.
    pub fn rename_into(&self, target: &Arc<Ring>, var_map: &[usize]) -> Polynomial {
        let n = target.nvars();
        let mut t: Vec<(Monomial, u32)> = self
            .terms
            .iter()
            .map(|&(m, c)| {
                let e = self.ring.exponents(m);
                let mut ne = vec![0u32; n];
                for (i, &x) in e.iter().enumerate() {
                    ne[var_map[i]] += x;
                }
                (target.encode(&ne), c)
            })
            .collect();
        t.sort_unstable_by(|a, b| b.0.cmp(&a.0));
        Polynomial { ring: target.clone(), terms: t }
    }

    /// Partial derivative with respect to variable `i`.
    pub fn derivative(&self, i: usize) -> Polynomial {
        let f = self.ring.field;
        let mut out = Vec::new();
        for &(m, c) in &self.terms {
            let mut e = self.ring.exponents(m);
            if e[i] == 0 {
                continue;
            }
            let k = e[i];
            e[i] -= 1;
            let v = f.mul(c, k % f.p());
            if v != 0 {
                out.push((self.ring.encode(&e), v));
            }
        }
        Polynomial::from_terms(&self.ring, out)
    }

    /// Terms of the given multidegree.
    pub fn homogeneous_part(&self, deg: &MultiDegree) -> Polynomial {
        Polynomial {
            ring: self.ring.clone(),
            terms: self.terms.iter().copied().filter(|t| self.ring.mon_multidegree(t.0) == *deg).collect(),
        }
    }

    /// Dehomogenize by setting the listed variables to 1 (terms re-sorted).
    pub fn set_to_one(&self, vars: &[usize]) -> Polynomial {
        let t = self
            .terms
            .iter()
            .map(|&(m, c)| {
                let mut e = self.ring.exponents(m);
                for &v in vars {
                    e[v] = 0;
                }
                (self.ring.encode(&e), c)
            })
            .collect();
        Polynomial::from_terms(&self.ring, t)
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let field = self.ring.field;
        for (k, &(m, c)) in self.terms.iter().enumerate() {
            let s = field.to_signed(c);
            let (neg, a) = if s < 0 { (true, -s) } else { (false, s) };
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            let ms = self.ring.mon_to_string(m);
            if ms == "1" {
                write!(f, "{a}")?;
            } else if a == 1 {
                write!(f, "{ms}")?;
            } else {
                write!(f, "{a}*{ms}")?;
            }
        }
        Ok(())
    }
}

/// Compare two exponent vectors under an order (convenience wrapper that
/// builds a throwaway standard-graded ring).
pub fn monomial_compare(a: &[u32], b: &[u32], order: &MonomialOrder) -> Result<Ordering> {
    if a.len() != b.len() {
        return Err(Error::InvalidRing("exponent vectors of different lengths".into()));
    }
    let field = PrimeField::new(crate::field::DEFAULT_PRIME)?;
    let vars = (0..a.len()).map(|i| format!("v{i}")).collect();
    let ring = Ring::new_unchecked(field, vars, vec![vec![1]; a.len()], order.clone())?;
    Ok(ring.monomial(a)?.cmp(&ring.monomial(b)?))
}

/// Dense random homogeneous form: every monomial of degree `deg` receives a
/// uniform coefficient. Deterministic per seed.
pub fn random_form(ring: &Arc<Ring>, deg: &MultiDegree, seed: u64) -> Result<Polynomial> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_form_with(ring, deg, &mut rng)
}

pub fn random_form_with<R: rand::Rng>(ring: &Arc<Ring>, deg: &MultiDegree, rng: &mut R) -> Result<Polynomial> {
    let mons = ring.monomials_of_degree(deg);
    if mons.is_empty() {
        return Err(Error::UnattainableDegree(deg.0.clone()));
    }
    let f = ring.field();
    let terms: Vec<(Monomial, u32)> = mons.into_iter().map(|m| (m, f.random(rng))).filter(|t| t.1 != 0).collect();
    Ok(Polynomial::from_sorted(ring, terms))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn f1009() -> PrimeField {
        PrimeField::new(1009).unwrap()
    }

    #[test]
    fn difference_of_squares() {
        let r = Ring::projective(f1009(), 1);
        let (x0, x1) = (r.variable(0), r.variable(1));
        let p = x0.add(&x1).mul(&x0.sub(&x1));
        assert_eq!(p, x0.mul(&x0).sub(&x1.mul(&x1)));
        assert!(x0.add(&x0.neg()).is_zero());
    }

    #[test]
    fn bigraded_degrees() {
        let r = Ring::cox_p1p2(f1009());
        let v = r.variables();
        let f = v[0].add(&v[1]);
        let g = v[2].sub(&v[4]);
        assert_eq!(f.mul(&g).degree().unwrap(), MultiDegree::bi(1, 1));
        let m = v[0].pow(2).mul(&v[2].pow(4));
        assert_eq!(m.degree().unwrap(), MultiDegree::bi(2, 4));
        assert_eq!(v[0].add(&v[2]).multidegree().unwrap(), None);
        assert!(matches!(Polynomial::zero(&r).multidegree(), Err(Error::ZeroPolynomial)));
        let p3 = Ring::projective(f1009(), 3);
        let q = random_form(&p3, &MultiDegree::single(5), 3).unwrap();
        assert_eq!(q.degree().unwrap(), MultiDegree::single(5));
    }

    #[test]
    fn grevlex_tie_break() {
        // x > y > z: x*z vs y^2 -> y^2 is larger
        let o = monomial_compare(&[1, 0, 1], &[0, 2, 0], &MonomialOrder::GRevLex).unwrap();
        assert_eq!(o, Ordering::Less);
        assert_eq!(monomial_compare(&[1, 2, 3], &[1, 2, 3], &MonomialOrder::Lex).unwrap(), Ordering::Equal);
        // lex: x*z > y^2
        assert_eq!(monomial_compare(&[1, 0, 1], &[0, 2, 0], &MonomialOrder::Lex).unwrap(), Ordering::Greater);
    }

    #[test]
    fn elimination_block_dominates() {
        let o = MonomialOrder::Elimination(vec![0]);
        // t * z  vs  x^5 y^3  (t = var 0)
        assert_eq!(monomial_compare(&[1, 0, 0, 1], &[0, 5, 3, 0], &o).unwrap(), Ordering::Greater);
        assert_eq!(monomial_compare(&[1, 0, 0, 0], &[0, 9, 9, 9], &o).unwrap(), Ordering::Greater);
    }

    #[test]
    fn random_form_counts() {
        let p3 = Ring::projective(f1009(), 3);
        let a = random_form(&p3, &MultiDegree::single(5), 11).unwrap();
        assert!(a.len() <= 56 && a.len() > 50);
        assert_eq!(p3.monomials_of_degree(&MultiDegree::single(5)).len(), 56);
        assert_eq!(a, random_form(&p3, &MultiDegree::single(5), 11).unwrap());
        let cox = Ring::cox_p1p2(f1009());
        assert_eq!(cox.monomials_of_degree(&MultiDegree::bi(2, 4)).len(), 45);
        assert_eq!(cox.monomial_count(&MultiDegree::bi(2, 4)), 45);
        assert!(random_form(&cox, &MultiDegree::bi(-1, 2), 0).is_err());
    }

    #[test]
    fn ring_invariants_checked() {
        let f = f1009();
        let vars: Vec<String> = ["a", "b", "c", "d", "e"].iter().map(|s| s.to_string()).collect();
        let g = vec![vec![1, 0], vec![1, 0], vec![1, 0], vec![0, 1], vec![0, 1]];
        assert!(Ring::new(f, vars.clone(), g, MonomialOrder::GRevLex).is_err());
        assert!(Ring::new(f, vars, vec![vec![0]; 5], MonomialOrder::GRevLex).is_err());
    }

    fn exps(n: usize) -> impl Strategy<Value = Vec<u32>> {
        proptest::collection::vec(0u32..6, n)
    }

    proptest! {
        #[test]
        fn orders_are_multiplicative(a in exps(4), b in exps(4), c in exps(4), which in 0usize..3) {
            let order = match which { 0 => MonomialOrder::GRevLex, 1 => MonomialOrder::Lex, _ => MonomialOrder::Elimination(vec![1, 3]) };
            let ab = monomial_compare(&a, &b, &order).unwrap();
            prop_assert_eq!(monomial_compare(&b, &a, &order).unwrap(), ab.reverse());
            let ac: Vec<u32> = a.iter().zip(&c).map(|(x, y)| x + y).collect();
            let bc: Vec<u32> = b.iter().zip(&c).map(|(x, y)| x + y).collect();
            prop_assert_eq!(monomial_compare(&ac, &bc, &order).unwrap(), ab);
            if order == MonomialOrder::GRevLex {
                let (da, db): (u32, u32) = (a.iter().sum(), b.iter().sum());
                if da != db { prop_assert_eq!(ab, da.cmp(&db)); }
            }
        }

        #[test]
        fn encoding_round_trip_and_division(a in exps(5), b in exps(5)) {
            let r = Ring::cox_p1p2(f1009());
            let (ma, mb) = (r.encode(&a), r.encode(&b));
            prop_assert_eq!(r.exponents(ma), a.clone());
            let prod = r.mul_mon(ma, mb);
            let sum: Vec<u32> = a.iter().zip(&b).map(|(x, y)| x + y).collect();
            prop_assert_eq!(r.exponents(prod), sum);
            prop_assert!(r.divides(ma, prod));
            prop_assert_eq!(r.div_mon(prod, ma), mb);
            let div = a.iter().zip(&b).all(|(x, y)| x <= y);
            prop_assert_eq!(r.divides(ma, mb), div);
        }

        #[test]
        fn multiplication_laws(s1 in 0u64..1000, s2 in 0u64..1000, s3 in 0u64..1000) {
            let r = Ring::cox_p1p2(f1009());
            let f = random_form(&r, &MultiDegree::bi(1, 1), s1).unwrap();
            let g = random_form(&r, &MultiDegree::bi(0, 2), s2).unwrap();
            let h = random_form(&r, &MultiDegree::bi(2, 0), s3).unwrap();
            prop_assert_eq!(f.mul(&g), g.mul(&f));
            prop_assert_eq!(f.mul(&g).mul(&h), f.mul(&g.mul(&h)));
            prop_assert_eq!(f.mul(&g.add(&h.mul(&r.variable(2)))), f.mul(&g).add(&f.mul(&h).mul(&r.variable(2))));
            let d = &f.degree().unwrap() + &g.degree().unwrap();
            prop_assert_eq!(f.mul(&g).degree().unwrap(), d);
        }
    }
}
