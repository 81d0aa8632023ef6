//! Brill–Noether and Riemann–Roch bookkeeping.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hilbert::CurveInvariants;
use crate::liaison::{predicted_link, LinkageSpec};
use crate::ring::{binomial, Ambient, MultiDegree};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BNIndex {
    pub g: i64,
    pub r: i64,
    pub d: i64,
}

impl BNIndex {
    pub fn rho(&self) -> i64 {
        rho(self.g, self.r, self.d)
    }
}

/// `rho(g, r, d) = g - (r+1)(g+r-d)`
pub fn rho(g: i64, r: i64, d: i64) -> i64 {
    g - (r + 1) * (g + r - d)
}

fn ambient_sections(ambient: Ambient, deg: &MultiDegree) -> i64 {
    match ambient {
        Ambient::Projective(r) => {
            let h = deg.0[0];
            if h < 0 {
                0
            } else {
                binomial((h + r as i64) as u64, r as u64) as i64
            }
        }
        Ambient::P1xP2 => {
            let (a, b) = (deg.0[0], deg.0[1]);
            if a < 0 || b < 0 {
                0
            } else {
                (a + 1) * (b + 2) * (b + 1) / 2
            }
        }
    }
}

/// Degree of `O_C(deg)` for a curve of the given (bi)degree.
pub fn line_bundle_degree(inv: &CurveInvariants, deg: &MultiDegree) -> i64 {
    inv.degree.iter().zip(&deg.0).map(|(a, b)| a * b).sum()
}

/// Minimum number of independent hypersurfaces of degree `deg` through the
/// curve: `h^0(O(deg)) - (deg . C + 1 - g)`, only where `O_C(deg)` is non-special.
pub fn expected_hypersurfaces(inv: &CurveInvariants, deg: &MultiDegree) -> Result<i64> {
    if deg.0.len() != inv.degree.len() {
        return Err(Error::Precondition("degree has the wrong number of components".into()));
    }
    let e = line_bundle_degree(inv, deg);
    if e <= 2 * inv.genus - 2 {
        return Err(Error::Precondition(format!("degree {e} is in the special range (<= {})", 2 * inv.genus - 2)));
    }
    Ok((ambient_sections(inv.ambient, deg) - (e + 1 - inv.genus)).max(0))
}

/// `(h^0(K - H), deg(K - H))` for a curve of genus `g` and degree `d`
/// spanning `P^r` with `h^0(H) = r + 1`.
pub fn serre_dual_counts(g: i64, d: i64, r: i64) -> Result<(i64, i64)> {
    let dual = 2 * g - 2 - d;
    if dual < 0 {
        return Err(Error::Precondition(format!("negative dual degree {dual}")));
    }
    Ok(((r + 1) - d + g - 1, dual))
}

/// One row of the liaison plan for `M_{g,n}^u`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LiaisonPlan {
    pub g: i64,
    pub m: i64,
    pub d: i64,
    pub r: i64,
    /// Degree `h` and number of hypersurfaces of the linking complete intersection.
    pub h: i64,
    pub count: usize,
    pub g_prime: i64,
    pub d_prime: i64,
    pub n: i64,
}

impl LiaisonPlan {
    pub fn linkage_type(&self) -> String {
        format!("{}^{}", self.h, self.count)
    }

    pub fn spec(&self, seed: u64) -> Result<LinkageSpec> {
        LinkageSpec::projective(self.r as usize, &vec![self.h; self.count], seed)
    }

    fn validate(&self) -> Result<()> {
        let bad = |what: &str| Err(Error::Precondition(format!("plan row g={} m={}: {what}", self.g, self.m)));
        if self.d != 2 * self.g - 2 - self.m || self.r != self.g - self.m - 1 || self.count as i64 != self.r - 1 {
            return bad("numerology");
        }
        let (h0, dual) = serre_dual_counts(self.g, self.d, self.r)?;
        if dual != self.m || h0 < 1 {
            return bad("Serre dual");
        }
        let inv = CurveInvariants { ambient: Ambient::Projective(self.r as usize), dim: 1, degree: vec![self.d], genus: self.g };
        let out = predicted_link(&inv, &self.spec(0)?)?;
        if out.degree != vec![self.d_prime] || out.genus != self.g_prime {
            return bad("linked invariants");
        }
        if self.n != self.m + 1 {
            return bad("marked points");
        }
        Ok(())
    }
}

/// The four liaison constructions for `M_{g,n}^u`, each row re-validated.
pub fn liaison_plan_table() -> Result<Vec<LiaisonPlan>> {
    let rows = [(11, 6, 14, 4, 3, 9, 13, 7), (12, 5, 17, 6, 2, 9, 15, 6), (10, 5, 13, 4, 3, 12, 14, 6), (10, 6, 12, 3, 5, 13, 13, 7)];
    rows.iter()
        .map(|&(g, m, d, r, h, g_prime, d_prime, n)| {
            let row = LiaisonPlan { g, m, d, r, h, count: (r - 1) as usize, g_prime, d_prime, n };
            row.validate()?;
            Ok(row)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(ambient: Ambient, degree: Vec<i64>, genus: i64) -> CurveInvariants {
        CurveInvariants { ambient, dim: 1, degree, genus }
    }

    #[test]
    fn brill_noether() {
        assert_eq!(rho(12, 3, 12), 0);
        assert_eq!(rho(13, 3, 13), 1);
        for g in 0..20 {
            assert_eq!(rho(g, 0, 7), 7);
        }
        assert_eq!(BNIndex { g: 12, r: 3, d: 12 }.rho(), 0);
    }

    #[test]
    fn hypersurface_counts() {
        let p3 = Ambient::Projective(3);
        let s = MultiDegree::single;
        assert_eq!(expected_hypersurfaces(&c(p3, vec![12], 12), &s(5)).unwrap(), 7);
        assert_eq!(expected_hypersurfaces(&c(p3, vec![13], 13), &s(5)).unwrap(), 3);
        assert_eq!(expected_hypersurfaces(&c(Ambient::P1xP2, vec![9, 6], 4), &MultiDegree::bi(2, 4)).unwrap(), 6);
        assert_eq!(expected_hypersurfaces(&c(Ambient::P1xP2, vec![7, 10], 12), &MultiDegree::bi(2, 4)).unwrap(), 2);
        let p6 = Ambient::Projective(6);
        assert_eq!(expected_hypersurfaces(&c(p6, vec![17], 12), &s(2)).unwrap(), 5);
        assert_eq!(expected_hypersurfaces(&c(p6, vec![15], 9), &s(2)).unwrap(), 6);
        assert!(expected_hypersurfaces(&c(p3, vec![12], 12), &s(1)).is_err());
    }

    #[test]
    fn serre_duals() {
        assert_eq!(serre_dual_counts(15, 13, 3).unwrap(), (5, 15));
        assert_eq!(serre_dual_counts(10, 12, 3).unwrap(), (1, 6));
        assert_eq!(serre_dual_counts(9, 12, 4).unwrap(), (1, 4));
        assert!(serre_dual_counts(2, 5, 3).is_err());
        for (g, d) in [(15, 13), (10, 12), (9, 12), (12, 17)] {
            let (_, dual) = serre_dual_counts(g, d, 3).unwrap();
            assert_eq!(serre_dual_counts(g, dual, 3).unwrap().1, d);
        }
    }

    #[test]
    fn plan_table() {
        let t = liaison_plan_table().unwrap();
        assert_eq!(t.len(), 4);
        assert_eq!((t[0].g_prime, t[0].d_prime), (9, 13));
        assert_eq!(t[3].linkage_type(), "5^2");
        for row in &t {
            assert_eq!(row.d, 2 * row.g - 2 - row.m);
            assert_eq!(row.r, row.g - row.m - 1);
        }
    }
}
