//! Arithmetic in the prime field F_p.
//!
//! Elements are stored as `u32` residues in `0..p`; products are formed in
//! `u64`, so any prime below 2^32 is supported. No floating point is used.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// The prime field F_p.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PrimeField {
    p: u32,
}

/// Deterministic primality test by trial division (the field sizes used here are small).
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n % 2 == 0 {
        return false;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

impl PrimeField {
    /// Creates F_p, rejecting non-primes.
    pub fn new(p: u32) -> Result<Self> {
        if !is_prime(p as u64) {
            return Err(Error::NotPrime(p as u64));
        }
        Ok(PrimeField { p })
    }

    /// The characteristic.
    #[inline]
    pub fn p(&self) -> u32 {
        self.p
    }

    /// Reduces a signed integer into `0..p`.
    #[inline]
    pub fn from_i64(&self, x: i64) -> u32 {
        x.rem_euclid(self.p as i64) as u32
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        let s = a as u64 + b as u64;
        (s % self.p as u64) as u32
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        if a >= b {
            a - b
        } else {
            (a as u64 + self.p as u64 - b as u64) as u32
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

    /// Multiplicative inverse via the extended Euclidean algorithm.
    ///
    /// # Panics
    /// Panics on `a == 0`.
    pub fn inv(&self, a: u32) -> u32 {
        assert!(a % self.p != 0, "inverse of zero in F_{}", self.p);
        let (mut r0, mut r1) = (self.p as i64, (a % self.p) as i64);
        let (mut t0, mut t1) = (0i64, 1i64);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        debug_assert_eq!(r0, 1);
        self.from_i64(t0)
    }

    /// `a^e` by square-and-multiply.
    pub fn pow(&self, mut a: u32, mut e: u64) -> u32 {
        let mut acc = 1u32 % self.p;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        acc
    }

    /// The residue as a signed representative in `(-p/2, p/2]`.
    pub fn to_signed(&self, a: u32) -> i64 {
        let a = a as i64;
        let p = self.p as i64;
        if a > p / 2 {
            a - p
        } else {
            a
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality() {
        let primes: Vec<u64> = (0..60).filter(|&n| is_prime(n)).collect();
        assert_eq!(primes, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59]);
        assert!(PrimeField::new(4).is_err());
        assert!(PrimeField::new(1).is_err());
    }

    #[test]
    fn inverse_is_inverse_for_all_residues() {
        for p in [2u32, 3, 5, 7, 13, 101] {
            let f = PrimeField::new(p).unwrap();
            for a in 1..p {
                assert_eq!(f.mul(a, f.inv(a)), 1);
                // Fermat oracle
                assert_eq!(f.inv(a), f.pow(a, (p - 2) as u64));
            }
        }
    }

    #[test]
    fn signed_reduction() {
        let f = PrimeField::new(5).unwrap();
        assert_eq!(f.from_i64(-1), 4);
        assert_eq!(f.from_i64(12), 2);
        assert_eq!(f.to_signed(4), -1);
        assert_eq!(f.sub(1, 3), 3);
        assert_eq!(f.neg(0), 0);
    }
}
