//! Buchberger engine over free modules `R^s` (ideals are the case `s = 1`).
//!
//! Pairs are processed by sugar degree (normal selection within a degree)
//! with Gebauer–Möller pair elimination. Module orders are term-over-position
//! after an optional priority split: components `< elim` dominate all others,
//! which turns kernel computation into an elimination.

use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::sync::Arc;

use rustc_hash::FxHashMap;

use crate::ring::{Monomial, Polynomial, Ring};

const DEG_OFFSET: i64 = 1 << 30;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct Term {
    pub key: u64,
    pub mon: Monomial,
    pub comp: u32,
    pub coef: u32,
}

type OrdKey = (u64, u128, Reverse<u32>);

impl Term {
    #[inline]
    fn ord(&self) -> OrdKey {
        (self.key, self.mon.0, Reverse(self.comp))
    }
}

pub(crate) type Vector = Vec<Term>;

/// Describes the free module and its order.
#[derive(Clone, Debug)]
pub(crate) struct ModCtx {
    pub ring: Arc<Ring>,
    pub shifts: Vec<i64>,
    pub elim: u32,
    degc: bool,
}

impl ModCtx {
    pub fn new(ring: &Arc<Ring>, shifts: Vec<i64>, elim: u32) -> Self {
        let degc = ring.degree_compatible();
        ModCtx { ring: ring.clone(), shifts, elim, degc }
    }

    pub fn ideal(ring: &Arc<Ring>) -> Self {
        Self::new(ring, vec![0], 0)
    }

    pub fn rank(&self) -> usize {
        self.shifts.len()
    }

    #[inline]
    pub fn key(&self, mon: Monomial, comp: u32) -> u64 {
        let group: u64 = if comp < self.elim { 1 << 40 } else { 0 };
        if self.degc {
            let d = self.ring.mon_degree(mon) as i64 + self.shifts[comp as usize] + DEG_OFFSET;
            group | d as u64
        } else {
            group
        }
    }

    #[inline]
    pub fn term(&self, mon: Monomial, comp: u32, coef: u32) -> Term {
        Term { key: self.key(mon, comp), mon, comp, coef }
    }

    /// Shifted total degree of a term.
    #[inline]
    pub fn term_degree(&self, t: &Term) -> i64 {
        self.ring.mon_degree(t.mon) as i64 + self.shifts[t.comp as usize]
    }

    pub fn sugar_of(&self, v: &Vector) -> i64 {
        v.iter().map(|t| self.term_degree(t)).max().unwrap_or(0)
    }

    pub fn sort(&self, v: &mut Vector) {
        v.sort_unstable_by(|a, b| b.ord().cmp(&a.ord()));
    }

    pub fn from_poly(&self, p: &Polynomial, comp: u32) -> Vector {
        let v: Vector = p.terms().iter().map(|&(m, c)| self.term(m, comp, c)).collect();
        // a polynomial's terms are sorted by monomial; within one component
        // and a degree-compatible order the keys agree with that order, but
        // for non-graded orders the key is constant so this is still sorted.
        debug_assert!(v.windows(2).all(|w| w[0].ord() > w[1].ord()));
        v
    }

    /// Component `comp` of a vector as a polynomial.
    pub fn component(&self, v: &Vector, comp: u32) -> Polynomial {
        let t: Vec<(Monomial, u32)> = v.iter().filter(|t| t.comp == comp).map(|t| (t.mon, t.coef)).collect();
        Polynomial::from_sorted(&self.ring, t)
    }

    /// `v * (c * mon)`
    pub fn mul_term(&self, v: &Vector, mon: Monomial, c: u32) -> Vector {
        let f = self.ring.field();
        let dk = if self.degc { self.ring.mon_degree(mon) as u64 } else { 0 };
        v.iter()
            .map(|t| Term { key: t.key + dk, mon: self.ring.mul_mon(t.mon, mon), comp: t.comp, coef: f.mul(t.coef, c) })
            .collect()
    }

    /// `a + c * b`, both sorted.
    pub fn axpy(&self, a: &Vector, b: &Vector, c: u32) -> Vector {
        let f = self.ring.field();
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() || j < b.len() {
            let take = if i == a.len() {
                1
            } else if j == b.len() {
                0
            } else {
                match a[i].ord().cmp(&b[j].ord()) {
                    std::cmp::Ordering::Greater => 0,
                    std::cmp::Ordering::Less => 1,
                    std::cmp::Ordering::Equal => 2,
                }
            };
            match take {
                0 => {
                    out.push(a[i]);
                    i += 1;
                }
                1 => {
                    let v = f.mul(b[j].coef, c);
                    if v != 0 {
                        out.push(Term { coef: v, ..b[j] });
                    }
                    j += 1;
                }
                _ => {
                    let v = f.add(a[i].coef, f.mul(b[j].coef, c));
                    if v != 0 {
                        out.push(Term { coef: v, ..a[i] });
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out
    }

    pub fn monic(&self, v: &mut Vector) {
        if let Some(first) = v.first() {
            let f = self.ring.field();
            let inv = f.inv(first.coef);
            if inv != 1 {
                for t in v.iter_mut() {
                    t.coef = f.mul(t.coef, inv);
                }
            }
        }
    }

}

#[derive(Clone, Debug)]
struct Pair {
    i: usize,
    j: usize,
    lcm: Monomial,
    sugar: i64,
    key: u64,
}

/// Incremental Buchberger state.
pub(crate) struct Buchberger {
    pub ctx: ModCtx,
    polys: Vec<Vector>,
    sugar: Vec<i64>,
    lt_plain: Vec<u128>,
    active: Vec<bool>,
    reducers: Vec<Vec<(u128, usize)>>,
    pairs: Vec<Pair>,
    pending: Vec<(i64, Vector)>,
    /// All S-pairs and generators of sugar `<= done_to` have been processed.
    done_to: i64,
}

impl Buchberger {
    pub fn new(ctx: ModCtx) -> Self {
        let rank = ctx.rank();
        Buchberger {
            ctx,
            polys: Vec::new(),
            sugar: Vec::new(),
            lt_plain: Vec::new(),
            active: Vec::new(),
            reducers: vec![Vec::new(); rank],
            pairs: Vec::new(),
            pending: Vec::new(),
            done_to: i64::MIN,
        }
    }

    pub fn add(&mut self, v: Vector) {
        if v.is_empty() {
            return;
        }
        let s = self.ctx.sugar_of(&v);
        if s <= self.done_to {
            self.done_to = s - 1;
        }
        self.pending.push((s, v));
    }

    /// Processes all work of sugar at most `limit` (everything when `None`).
    pub fn run(&mut self, limit: Option<i64>) {
        loop {
            let dp = self.pairs.iter().map(|p| p.sugar).min();
            let dg = self.pending.iter().map(|p| p.0).min();
            let d = match (dp, dg) {
                (None, None) => {
                    self.done_to = i64::MAX;
                    return;
                }
                (Some(a), None) | (None, Some(a)) => a,
                (Some(a), Some(b)) => a.min(b),
            };
            if let Some(l) = limit {
                if d > l {
                    self.done_to = self.done_to.max(l);
                    return;
                }
            }
            let mut gens = Vec::new();
            let mut rest = Vec::new();
            for (s, v) in self.pending.drain(..) {
                if s == d {
                    gens.push(v);
                } else {
                    rest.push((s, v));
                }
            }
            self.pending = rest;
            let mut batch: Vec<Pair> = Vec::new();
            let mut keep = Vec::new();
            for p in self.pairs.drain(..) {
                if p.sugar == d {
                    batch.push(p);
                } else {
                    keep.push(p);
                }
            }
            self.pairs = keep;
            batch.sort_by(|a, b| (a.key, a.lcm).cmp(&(b.key, b.lcm)));
            for g in gens {
                let r = self.reduce(g, None);
                if !r.is_empty() {
                    self.insert(r, d);
                }
            }
            for p in batch {
                let s = self.spoly(&p);
                let r = self.reduce(s, None);
                if !r.is_empty() {
                    self.insert(r, d);
                }
            }
            self.done_to = self.done_to.max(d);
        }
    }

    fn spoly(&self, p: &Pair) -> Vector {
        let r = &self.ctx.ring;
        let fi = &self.polys[p.i];
        let fj = &self.polys[p.j];
        let ui = r.div_mon(p.lcm, fi[0].mon);
        let uj = r.div_mon(p.lcm, fj[0].mon);
        let a = self.ctx.mul_term(&fi[1..].to_vec(), ui, 1);
        let b = self.ctx.mul_term(&fj[1..].to_vec(), uj, 1);
        self.ctx.axpy(&a, &b, r.field().neg(1))
    }

    fn find_reducer(&self, mon: Monomial, comp: u32, skip: Option<usize>) -> Option<usize> {
        let r = &self.ctx.ring;
        let pm = r.plain(mon);
        for &(pl, idx) in &self.reducers[comp as usize] {
            if Some(idx) != skip && r.divides_plain(pl, pm) {
                return Some(idx);
            }
        }
        None
    }

    /// Full normal form with respect to the active elements.
    fn reduce(&self, v: Vector, skip: Option<usize>) -> Vector {
        reduce_with(&self.ctx, v, |m, c| self.find_reducer(m, c, skip).map(|i| &self.polys[i]))
    }

    fn insert(&mut self, mut v: Vector, sugar: i64) {
        self.ctx.monic(&mut v);
        let idx = self.polys.len();
        let lt = v[0];
        let r = self.ctx.ring.clone();
        let plain = r.plain(lt.mon);
        self.polys.push(v);
        self.sugar.push(sugar);
        self.lt_plain.push(plain);
        self.active.push(true);
        self.update(idx);
        // deactivate elements whose leading term is divisible by the new one
        let comp = lt.comp;
        let list = &mut self.reducers[comp as usize];
        list.retain(|&(pl, i)| {
            let dead = r.divides_plain(plain, pl);
            if dead {
                self.active[i] = false;
            }
            !dead
        });
        list.push((plain, idx));
    }

    fn update(&mut self, h: usize) {
        let r = self.ctx.ring.clone();
        let ideal = self.ctx.rank() == 1;
        let lh = self.polys[h][0];
        let sh = self.sugar[h];
        let dh = self.ctx.term_degree(&lh);
        // candidate pairs (h, g)
        let mut cand: Vec<(usize, Monomial, bool)> = Vec::new();
        for g in 0..h {
            if !self.active[g] || self.polys[g][0].comp != lh.comp {
                continue;
            }
            let lg = self.polys[g][0].mon;
            let l = r.lcm_mon(lh.mon, lg);
            let cop = ideal && r.coprime(lh.mon, lg);
            cand.push((g, l, cop));
        }
        // chain criterion among new pairs (Gebauer–Möller)
        let mut keep_new: Vec<(usize, Monomial, bool)> = Vec::new();
        while let Some(x) = cand.pop() {
            if x.2 || !cand.iter().chain(keep_new.iter()).any(|y| r.divides(y.1, x.1)) {
                keep_new.push(x);
            }
        }
        // old pairs eliminated by h
        let ph = self.lt_plain[h];
        self.pairs.retain(|p| {
            if self.polys[p.i][0].comp != lh.comp {
                return true;
            }
            let pl = r.plain(p.lcm);
            if !r.divides_plain(ph, pl) {
                return true;
            }
            let li = r.lcm_mon(self.polys[p.i][0].mon, lh.mon);
            let lj = r.lcm_mon(self.polys[p.j][0].mon, lh.mon);
            li == p.lcm || lj == p.lcm
        });
        for (g, l, cop) in keep_new {
            if cop {
                continue;
            }
            let lg = self.polys[g][0];
            let dl = r.mon_degree(l) as i64 + self.ctx.shifts[lh.comp as usize];
            let sugar = (sh + dl - dh).max(self.sugar[g] + dl - self.ctx.term_degree(&lg));
            let key = self.ctx.key(l, lh.comp);
            self.pairs.push(Pair { i: g, j: h, lcm: l, sugar, key });
        }
    }

    /// Normal form of an arbitrary vector.
    pub fn normal_form(&self, v: Vector) -> Vector {
        self.reduce(v, None)
    }

    /// Reduced, monic basis sorted by ascending leading term.
    pub fn reduced_basis(&self) -> Vec<Vector> {
        let idx: Vec<usize> = (0..self.polys.len()).filter(|&i| self.active[i]).collect();
        let mut out: Vec<Vector> = idx
            .iter()
            .map(|&i| {
                let mut v = self.reduce(self.polys[i].clone(), Some(i));
                self.ctx.monic(&mut v);
                v
            })
            .collect();
        out.sort_by(|a, b| a[0].ord().cmp(&b[0].ord()));
        out
    }
}

/// Normal form of `v` using a reducer lookup `(mon, comp) -> monic vector`.
pub(crate) fn reduce_with<'a, F>(ctx: &ModCtx, v: Vector, find: F) -> Vector
where
    F: Fn(Monomial, u32) -> Option<&'a Vector>,
{
    if v.is_empty() {
        return v;
    }
    let ring = &ctx.ring;
    let f = ring.field();
    let p = f.p() as u64;
    let mut map: FxHashMap<(u128, u32), (u32, u64)> = FxHashMap::default();
    map.reserve(v.len() * 4);
    let mut heap: BinaryHeap<OrdKey> = BinaryHeap::with_capacity(v.len() * 4);
    for t in &v {
        map.insert((t.mon.0, t.comp), (t.coef, t.key));
        heap.push(t.ord());
    }
    let mut out = Vec::new();
    while let Some((key, mon, Reverse(comp))) = heap.pop() {
        let Some((coef, _)) = map.remove(&(mon, comp)) else { continue };
        let m = Monomial(mon);
        match find(m, comp) {
            Some(g) => {
                let q = ring.div_mon(m, g[0].mon);
                let dk = key - g[0].key;
                for s in &g[1..] {
                    let nm = ring.mul_mon(s.mon, q);
                    let delta = ((p - (coef as u64 * s.coef as u64) % p) % p) as u32;
                    let kk = s.key + dk;
                    match map.entry((nm.0, s.comp)) {
                        std::collections::hash_map::Entry::Occupied(mut e) => {
                            let nv = f.add(e.get().0, delta);
                            if nv == 0 {
                                e.remove();
                            } else {
                                e.get_mut().0 = nv;
                            }
                        }
                        std::collections::hash_map::Entry::Vacant(e) => {
                            e.insert((delta, kk));
                            heap.push((kk, nm.0, Reverse(s.comp)));
                        }
                    }
                }
            }
            None => out.push(Term { key, mon: m, comp, coef }),
        }
    }
    out
}

/// Convenience: reduced Gröbner basis of a list of vectors.
pub(crate) fn groebner(ctx: &ModCtx, gens: Vec<Vector>) -> Vec<Vector> {
    let mut b = Buchberger::new(ctx.clone());
    for g in gens {
        b.add(g);
    }
    b.run(None);
    b.reduced_basis()
}
