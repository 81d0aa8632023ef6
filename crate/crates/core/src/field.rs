//! Arithmetic in the prime field `F_p` for primes `2 < p < 2^31`.
//!
//! Elements are plain `u32` values kept as canonical residues in `[0, p)`.

use crate::error::{Error, Result};
use rand::Rng;

/// A prime field `F_p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u32,
}

/// Default working prime.
pub const DEFAULT_PRIME: u32 = 1009;

impl PrimeField {
    pub fn new(p: u32) -> Result<Self> {
        if p <= 2 || p >= (1 << 31) || !is_prime(p) {
            return Err(Error::InvalidPrime(p));
        }
        Ok(PrimeField { p })
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.p
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.p as u64) as u32
    }

    /// Multiplicative inverse. Panics on zero.
    pub fn inv(&self, a: u32) -> u32 {
        assert!(a != 0, "inverse of zero in F_{}", self.p);
        let (mut t, mut new_t) = (0i64, 1i64);
        let (mut r, mut new_r) = (self.p as i64, a as i64);
        while new_r != 0 {
            let q = r / new_r;
            (t, new_t) = (new_t, t - q * new_t);
            (r, new_r) = (new_r, r - q * new_r);
        }
        debug_assert_eq!(r, 1);
        t.rem_euclid(self.p as i64) as u32
    }

    pub fn pow(&self, mut a: u32, mut e: u64) -> u32 {
        let mut acc = 1u32;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        acc
    }

    /// Reduces an arbitrary signed integer into canonical form.
    pub fn from_i64(&self, v: i64) -> u32 {
        v.rem_euclid(self.p as i64) as u32
    }

    /// Symmetric representative in `(-p/2, p/2]`, used for printing.
    pub fn to_signed(&self, a: u32) -> i64 {
        if a > self.p / 2 {
            a as i64 - self.p as i64
        } else {
            a as i64
        }
    }

    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> u32 {
        rng.gen_range(0..self.p)
    }

    pub fn random_nonzero<R: Rng + ?Sized>(&self, rng: &mut R) -> u32 {
        rng.gen_range(1..self.p)
    }
}

fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let n = n as u64;
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn rejects_composites_and_small() {
        assert!(PrimeField::new(2).is_err());
        assert!(PrimeField::new(1001).is_err());
        assert!(PrimeField::new(1009).is_ok());
        assert!(PrimeField::new(2147483647).is_ok());
        assert!(PrimeField::new(2147483648).is_err());
    }

    #[test]
    fn inverse_round_trip() {
        let f = PrimeField::new(1009).unwrap();
        for a in 1..1009 {
            assert_eq!(f.mul(a, f.inv(a)), 1);
        }
    }

    proptest! {
        #[test]
        fn field_axioms(a in 0u32..65521, b in 0u32..65521, c in 0u32..65521) {
            let f = PrimeField::new(65521).unwrap();
            prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
            prop_assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
            prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
            prop_assert_eq!(f.add(a, f.neg(a)), 0);
            prop_assert_eq!(f.sub(a, b), f.add(a, f.neg(b)));
            if a != 0 {
                prop_assert_eq!(f.mul(a, f.inv(a)), 1);
            }
        }
    }
}
