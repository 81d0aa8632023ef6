//! Truncated deficiency modules of curves in `P^1 x P^2`: the cokernel of the
//! dual of the last map in a length-3 resolution of a truncated ideal, its
//! Hilbert table, recovery of the ideal from the module, and a family of
//! modules built from Macaulay inverse systems.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::engine::Vector;
use crate::error::{Error, Result};
use crate::geometry::minimal_ideal;
use crate::groebner::Ideal;
use crate::linalg::Matrix;
use crate::resolution::{module_ctx, module_gb, syzygies, Column, FreeResolution};
use crate::ring::{random_form_with, MultiDegree, Polynomial, Ring};

/// Ideal generated by the pieces `I_d` with `d >= floor` componentwise.
pub fn truncate_ideal(ideal: &Ideal, floor: &MultiDegree) -> Result<Ideal> {
    let ring = ideal.ring();
    let mut gens = Vec::new();
    for g in ideal.gens() {
        let e = g.degree()?;
        let top = MultiDegree(e.0.iter().zip(&floor.0).map(|(a, b)| *a.max(b)).collect());
        for m in ring.monomials_of_degree(&top.sub(&e)) {
            gens.push(g.mul_monomial(m, 1));
        }
    }
    Ok(minimal_ideal(ring, gens))
}

/// A finitely generated graded module `coker(relations)` presented on free
/// generators of the given degrees.
#[derive(Clone, Debug)]
pub struct DeficiencyModule {
    pub ring: Arc<Ring>,
    pub generators: Vec<MultiDegree>,
    pub relations: Vec<Column>,
    /// `dim K_d` over its (finite) support.
    pub table: BTreeMap<MultiDegree, i64>,
}

impl DeficiencyModule {
    pub fn new(ring: &Arc<Ring>, generators: Vec<MultiDegree>, relations: Vec<Column>) -> Result<Self> {
        let table = module_table(ring, &generators, &relations)?;
        Ok(DeficiencyModule { ring: ring.clone(), generators, relations, table })
    }

    pub fn length(&self) -> i64 {
        self.table.values().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.table.is_empty()
    }

    pub fn dim(&self, d: &MultiDegree) -> i64 {
        self.table.get(d).copied().unwrap_or(0)
    }
}

/// Hilbert table of `coker(relations)`, requiring finite length.
fn module_table(ring: &Arc<Ring>, gens: &[MultiDegree], relations: &[Column]) -> Result<BTreeMap<MultiDegree, i64>> {
    let mut table = BTreeMap::new();
    if gens.is_empty() {
        return Ok(table);
    }
    let ctx = module_ctx(ring, gens);
    let gb = module_gb(&ctx, relations);
    if !artinian(&ctx.ring, &gb, gens.len(), ring.nvars()) {
        return Err(Error::UnexpectedShape("module does not have finite length".into()));
    }
    let k = ring.grading_rank();
    let lo: Vec<i64> = (0..k).map(|j| gens.iter().map(|g| g.0[j]).min().unwrap()).collect();
    let count = |d: &MultiDegree| -> i64 {
        let mut n = 0;
        for (c, g) in gens.iter().enumerate() {
            let rel = d.sub(g);
            if rel.0.iter().any(|&x| x < 0) {
                continue;
            }
            for m in ring.monomials_of_degree(&rel) {
                if !divisible(&ctx.ring, &gb, m, c as u32) {
                    n += 1;
                }
            }
        }
        n
    };
    let max_total = 64;
    for t in 0..=max_total {
        let mut any = false;
        for rel in degrees_of_total(k, t) {
            let d = MultiDegree(rel.0.iter().zip(&lo).map(|(a, b)| a + b).collect());
            let n = count(&d);
            if n > 0 {
                any = true;
                table.insert(d, n);
            }
        }
        if !any {
            return Ok(table);
        }
    }
    Err(Error::UnexpectedShape("module does not have finite length".into()))
}

/// Finite length iff every `x_i^k e_c` is a leading term for some `k`.
fn artinian(ring: &Ring, gb: &[Vector], rank: usize, nvars: usize) -> bool {
    (0..rank as u32).all(|c| {
        (0..nvars).all(|i| {
            gb.iter().any(|g| {
                let e = ring.exponents(g[0].mon);
                g[0].comp == c && e[..nvars].iter().enumerate().all(|(j, &x)| j == i || x == 0)
            })
        })
    })
}

fn divisible(ring: &Ring, gb: &[Vector], m: crate::ring::Monomial, comp: u32) -> bool {
    let pm = ring.plain(m);
    gb.iter().any(|g| g[0].comp == comp && ring.divides_plain(ring.plain(g[0].mon), pm))
}

fn degrees_of_total(k: usize, t: i64) -> Vec<MultiDegree> {
    match k {
        1 => vec![MultiDegree::single(t)],
        _ => (0..=t).map(|a| MultiDegree::bi(a, t - a)).collect(),
    }
}

/// `K = coker(φ^∨)` for the last map `φ: F_3 -> F_2` of a minimal resolution
/// of `R/I'`. A resolution of length below 3 gives the zero module.
pub fn deficiency_module(truncated: &Ideal) -> Result<DeficiencyModule> {
    let ring = truncated.ring().clone();
    let res = FreeResolution::of_ideal(truncated, 4)?;
    if res.length() < 3 {
        return DeficiencyModule::new(&ring, vec![], vec![]);
    }
    if res.length() > 3 {
        return Err(Error::UnexpectedShape(format!("resolution of length {}:\n{res}", res.length())));
    }
    let phi = &res.maps[2];
    let dual = phi.transpose();
    DeficiencyModule::new(&ring, dual.target.clone(), dual.columns.clone())
}

/// Twists of `F_1^∨` for the genus-12 curve of bidegree `(7,10)`:
/// `F_1 = R(-4,-4)^9 + R(-4,-3)^3`.
pub fn geiss_f1_dual() -> Vec<MultiDegree> {
    let mut v = vec![MultiDegree::bi(-4, -4); 9];
    v.extend(vec![MultiDegree::bi(-4, -3); 3]);
    v
}

/// Expected Hilbert table of the deficiency module of the genus-12 curve.
pub fn geiss_table() -> BTreeMap<MultiDegree, i64> {
    let mut t: BTreeMap<MultiDegree, i64> = (0..6).map(|i| (MultiDegree::bi(-5 + i, -5), 6 - i)).collect();
    t.insert(MultiDegree::bi(-5, -4), 8);
    t.insert(MultiDegree::bi(-4, -4), 4);
    t.insert(MultiDegree::bi(-5, -3), 6);
    t
}

/// Outcome of rebuilding an ideal from its deficiency module.
#[derive(Clone, Debug)]
pub struct Recovery {
    /// The truncated ideal `I'` read off the rank-one kernel.
    pub truncated: Ideal,
    /// Its saturation.
    pub ideal: Ideal,
    pub seed: u64,
}

/// Rebuilds `I'` from `K`: resolve `K` two steps `G -> F_2^∨ -> F_3^∨`, compose
/// with a general map `F_1^∨ -> G` and read `I'` off the rank-one kernel.
pub fn recover_ideal_from_k(k: &DeficiencyModule, f1_dual: &[MultiDegree], seed: u64) -> Result<Recovery> {
    let ring = &k.ring;
    if k.is_zero() {
        return Err(Error::Precondition("zero deficiency module".into()));
    }
    let res = FreeResolution::of_module(ring, k.generators.clone(), k.relations.clone(), 2)?;
    if res.maps.len() < 2 {
        return Err(Error::UnexpectedShape("presentation has no second syzygies".into()));
    }
    let psi = &res.maps[1];
    let f2_dual = &res.modules[1];
    let g = &res.modules[2];
    let mut last = String::new();
    for attempt in 0..5u64 {
        let s = seed.wrapping_add(attempt);
        let mut rng = ChaCha8Rng::seed_from_u64(s ^ 0xdef1);
        let mut comp: Vec<(Column, MultiDegree)> = Vec::with_capacity(f1_dual.len());
        for a in f1_dual {
            let alpha: Vec<Polynomial> = g
                .iter()
                .map(|gk| {
                    let d = a.sub(gk);
                    if d.0.iter().all(|&x| x >= 0) {
                        random_form_with(ring, &d, &mut rng).unwrap_or_else(|_| Polynomial::zero(ring))
                    } else {
                        Polynomial::zero(ring)
                    }
                })
                .collect();
            let col: Column = (0..f2_dual.len())
                .map(|i| {
                    let mut acc = Polynomial::zero(ring);
                    for (kk, p) in alpha.iter().enumerate() {
                        if !p.is_zero() {
                            acc = acc.add(&psi.columns[kk][i].mul(p));
                        }
                    }
                    acc
                })
                .collect();
            comp.push((col, a.clone()));
        }
        if comp.iter().any(|(c, _)| c.iter().all(|p| p.is_zero())) {
            last = "composite has a zero column".into();
            continue;
        }
        let ker = syzygies(ring, f2_dual, &comp);
        if ker.len() != 1 || ker[0].1 != ring.zero_degree() {
            last = format!("kernel has {} generators", ker.len());
            continue;
        }
        let gens: Vec<Polynomial> = ker[0].0.iter().filter(|p| !p.is_zero()).cloned().collect();
        let truncated = minimal_ideal(ring, gens);
        let sat = truncated.saturate(None)?;
        let ideal = minimal_ideal(ring, sat.gens().to_vec());
        return Ok(Recovery { truncated, ideal, seed: s });
    }
    Err(Error::ResampleExhausted(5, last))
}

/// A module with the Hilbert table of [`geiss_table`], built from inverse
/// systems in the divided-power dual with generic choices.
pub fn generate_k_family(ring: &Arc<Ring>, seed: u64) -> Result<DeficiencyModule> {
    if ring.ambient() != Some(crate::ring::Ambient::P1xP2) || ring.nvars() != 5 {
        return Err(Error::Precondition("needs the Cox ring of P^1 x P^2".into()));
    }
    let want = geiss_table();
    let mut last = String::new();
    for attempt in 0..5u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(attempt) ^ 0x6e155);
        let k = inverse_system_module(ring, &mut rng)?;
        if k.table == want {
            return Ok(k);
        }
        last = format!("table {:?}", k.table);
    }
    Err(Error::ResampleExhausted(5, last))
}

fn inverse_system_module(ring: &Arc<Ring>, rng: &mut ChaCha8Rng) -> Result<DeficiencyModule> {
    let f = ring.field();
    let rand_rows = |rng: &mut ChaCha8Rng, n: usize, len: usize| -> Vec<Vec<u32>> {
        (0..n).map(|_| (0..len).map(|_| f.random(rng)).collect()).collect()
    };
    // coordinates: X_i E_k at 6i+k, X_i Y_j E_k at 18i+6j+k, Y_j E_k at 6j+k
    let v = rand_rows(rng, 5, 12);
    let n10 = Matrix::from_rows(v, 12).kernel(f);
    let mut eqs = Vec::new();
    for c in &n10 {
        for j in 0..3 {
            let mut row = vec![0u32; 36];
            for i in 0..2 {
                for k in 0..6 {
                    row[18 * i + 6 * j + k] = c[6 * i + k];
                }
            }
            eqs.push(row);
        }
    }
    let p = Matrix::from_rows(eqs, 36).kernel(f);
    let mut w = Vec::new();
    for _ in 0..4 {
        let coef: Vec<u32> = (0..p.len()).map(|_| f.random(rng)).collect();
        let mut phi = vec![0u32; 36];
        for (c, b) in coef.iter().zip(&p) {
            for (x, y) in phi.iter_mut().zip(b) {
                *x = f.add(*x, f.mul(*c, *y));
            }
        }
        for i in 0..2 {
            w.push(phi[18 * i..18 * i + 18].to_vec());
        }
    }
    let n01 = Matrix::from_rows(w, 18).kernel(f);
    let xs = [ring.variable(0), ring.variable(1)];
    let ys = [ring.variable(2), ring.variable(3), ring.variable(4)];
    let column = |c: &[u32], vars: &[Polynomial]| -> Column {
        (0..6)
            .map(|k| {
                let mut acc = Polynomial::zero(ring);
                for (i, x) in vars.iter().enumerate() {
                    acc = acc.add(&x.scale(c[6 * i + k]));
                }
                acc
            })
            .collect()
    };
    let mut relations: Vec<Column> = n10.iter().map(|c| column(c, &xs)).collect();
    relations.extend(n01.iter().map(|c| column(c, &ys)));
    DeficiencyModule::new(ring, vec![MultiDegree::bi(-5, -5); 6], relations)
}
