//! Counting polynomials: integer polynomials P with |X(F_q)| = P(q),
//! interpolated from prime sample points and verified on a held-out prime.

use crate::error::{Error, Result};
use num_rational::Ratio;
use num_traits::{One, Zero};
use serde::Serialize;
use std::fmt;

/// An integer polynomial in q with the samples it was fitted to.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CountPolynomial {
    /// Coefficients, constant term first; no trailing zeros.
    pub coeffs: Vec<i128>,
    /// Samples used for the fit.
    pub samples: Vec<(u64, u128)>,
    /// The held-out verification sample.
    pub held_out: Option<(u64, u128)>,
}

impl CountPolynomial {
    /// The polynomial from coefficients (constant term first).
    pub fn from_coeffs(mut coeffs: Vec<i128>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        CountPolynomial { coeffs, samples: vec![], held_out: None }
    }

    /// Fits the polynomial of degree < n through the first n = len − 1
    /// samples and verifies it on the last one.
    pub fn interpolate(samples: &[(u64, u128)]) -> Result<Self> {
        if samples.len() < 2 {
            return Err(Error::NotPolynomialCount("need at least two sample primes (one is held out)".into()));
        }
        let (fit, last) = samples.split_at(samples.len() - 1);
        let mut p = Self::fit(fit)?;
        let (q, v) = last[0];
        if p.eval(q) != v as i128 {
            return Err(Error::NotPolynomialCount(format!("fit {p} through q = {:?} predicts {} at q = {q}, counted {v}", fit.iter().map(|s| s.0).collect::<Vec<_>>(), p.eval(q))));
        }
        p.held_out = Some(last[0]);
        Ok(p)
    }

    /// Newton interpolation through all samples; errors on non-integral coefficients.
    pub fn fit(samples: &[(u64, u128)]) -> Result<Self> {
        let n = samples.len();
        let xs: Vec<Ratio<i128>> = samples.iter().map(|s| Ratio::from_integer(s.0 as i128)).collect();
        let mut dd: Vec<Ratio<i128>> = samples.iter().map(|s| Ratio::from_integer(s.1 as i128)).collect();
        for j in 1..n {
            for i in (j..n).rev() {
                dd[i] = (dd[i] - dd[i - 1]) / (xs[i] - xs[i - j]);
            }
        }
        // expand Σ dd[k] Π_{i<k} (q − x_i)
        let mut coeffs = vec![Ratio::<i128>::zero(); n.max(1)];
        let mut basis = vec![Ratio::<i128>::one()];
        for k in 0..n {
            for (c, b) in coeffs.iter_mut().zip(&basis) {
                *c += dd[k] * b;
            }
            let mut next = vec![Ratio::zero(); basis.len() + 1];
            for (i, b) in basis.iter().enumerate() {
                next[i + 1] += *b;
                next[i] -= *b * xs[k];
            }
            basis = next;
        }
        let mut ints = Vec::with_capacity(coeffs.len());
        for c in coeffs {
            if !c.is_integer() {
                return Err(Error::NotPolynomialCount(format!("non-integral coefficient {c}")));
            }
            ints.push(c.to_integer());
        }
        let mut p = Self::from_coeffs(ints);
        p.samples = samples.to_vec();
        Ok(p)
    }

    pub fn eval(&self, q: u64) -> i128 {
        self.coeffs.iter().rev().fold(0i128, |acc, &c| acc * q as i128 + c)
    }

    /// Degree (−1 for the zero polynomial).
    pub fn degree(&self) -> i64 {
        self.coeffs.len() as i64 - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Leading coefficient (0 for the zero polynomial).
    pub fn leading(&self) -> i128 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn mul(&self, other: &CountPolynomial) -> CountPolynomial {
        if self.is_zero() || other.is_zero() {
            return Self::from_coeffs(vec![]);
        }
        let mut c = vec![0i128; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        Self::from_coeffs(c)
    }

    /// Same coefficients (ignores sample bookkeeping).
    pub fn same_as(&self, other: &CountPolynomial) -> bool {
        self.coeffs == other.coeffs
    }
}

impl fmt::Display for CountPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let sign = if c < 0 { "-" } else { "+" };
            if first {
                if c < 0 {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let a = c.unsigned_abs();
            match (k, a) {
                (0, _) => write!(f, "{a}")?,
                (1, 1) => write!(f, "q")?,
                (1, _) => write!(f, "{a}q")?,
                (_, 1) => write!(f, "q^{k}")?,
                _ => write!(f, "{a}q^{k}")?,
            }
        }
        Ok(())
    }
}

/// Fits a counting polynomial from counts at `primes`, holding the last one out.
pub fn count_polynomial(primes: &[u64], count: impl Fn(u64) -> Result<u128>) -> Result<CountPolynomial> {
    let mut samples = Vec::with_capacity(primes.len());
    for &p in primes {
        samples.push((p, count(p)?));
    }
    CountPolynomial::interpolate(&samples)
}

/// The primes 2, 3, 5, 7, 11, 13, 17, 19, 23 used as sample points.
pub const SAMPLE_PRIMES: [u64; 9] = [2, 3, 5, 7, 11, 13, 17, 19, 23];

/// Fits with the shortest prefix of `SAMPLE_PRIMES` (at least `min_len`
/// primes, at most `max_len`) whose fit through all but the last prime also
/// predicts the last one. The degree of the result is thus confirmed by one
/// extra prime; `count` is only called on the primes actually used.
pub fn count_polynomial_adaptive(min_len: usize, max_len: usize, count: impl Fn(u64) -> Result<u128>) -> Result<CountPolynomial> {
    let mut samples = Vec::new();
    let mut last_err = None;
    for (k, &p) in SAMPLE_PRIMES.iter().enumerate().take(max_len) {
        samples.push((p, count(p)?));
        if k + 1 >= min_len.max(2) {
            match CountPolynomial::interpolate(&samples) {
                Ok(poly) => return Ok(poly),
                Err(e) => last_err = Some(e),
            }
        }
    }
    Err(last_err.unwrap_or_else(|| Error::NotPolynomialCount("not enough sample primes".into())))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_known_polynomials() {
        let p = |q: u64| (1 + 3 * q + q * q) * (1 + q).pow(3);
        let samples: Vec<(u64, u128)> = [2u64, 3, 5, 7, 11, 13, 17].iter().map(|&q| (q, p(q) as u128)).collect();
        let fit = CountPolynomial::interpolate(&samples).unwrap();
        assert_eq!(fit.coeffs, vec![1, 6, 13, 13, 6, 1]);
        assert_eq!(fit.eval(2), 297);
        assert_eq!(fit.to_string(), "q^5 + 6q^4 + 13q^3 + 13q^2 + 6q + 1");
    }

    #[test]
    fn held_out_failure_is_reported() {
        let samples = [(2u64, 4u128), (3, 9), (5, 1000)];
        assert!(matches!(CountPolynomial::interpolate(&samples), Err(Error::NotPolynomialCount(_))));
        assert!(CountPolynomial::interpolate(&[(2, 1)]).is_err());
    }

    #[test]
    fn zero_and_adaptive() {
        let z = CountPolynomial::interpolate(&[(2, 0), (3, 0)]).unwrap();
        assert!(z.is_zero() && z.degree() == -1 && z.to_string() == "0");
        let p = count_polynomial_adaptive(2, 9, |q| Ok((q * q + q + 1) as u128)).unwrap();
        assert_eq!(p.coeffs, vec![1, 1, 1]);
        assert_eq!(p.samples.len(), 3);
        let neg = CountPolynomial::from_coeffs(vec![0, -1, 2]);
        assert_eq!(neg.to_string(), "2q^2 - q");
    }
}
