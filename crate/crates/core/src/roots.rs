//! Root systems of Dynkin quivers, the Coxeter transformation and exact
//! integer/rational matrix utilities.

use crate::error::{ensure, Error, Result};
use crate::quiver::Quiver;
use num_rational::Ratio;
use num_traits::{One, Zero};
use std::collections::{BTreeSet, VecDeque};

/// Exact inverse of a square integer matrix over the rationals, or `None`
/// if singular.
pub fn rational_inverse(m: &[Vec<i64>]) -> Option<Vec<Vec<Ratio<i128>>>> {
    let n = m.len();
    let mut a: Vec<Vec<Ratio<i128>>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            assert_eq!(row.len(), n, "square matrix expected");
            let mut r: Vec<Ratio<i128>> = row.iter().map(|&x| Ratio::from_integer(x as i128)).collect();
            r.extend((0..n).map(|j| if i == j { Ratio::one() } else { Ratio::zero() }));
            r
        })
        .collect();
    for col in 0..n {
        let pr = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(pr, col);
        let inv = a[col][col].recip();
        for x in a[col].iter_mut() {
            *x *= inv;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let factor = a[r][col];
                let pivot_row = a[col].clone();
                for (x, p) in a[r].iter_mut().zip(pivot_row) {
                    *x -= factor * p;
                }
            }
        }
    }
    Some(a.into_iter().map(|row| row[n..].to_vec()).collect())
}

/// Inverse of an integer matrix that must be unimodular; errors if the
/// rational inverse is missing or non-integral.
pub fn integer_inverse(m: &[Vec<i64>]) -> Result<Vec<Vec<i64>>> {
    let inv = rational_inverse(m).ok_or_else(|| Error::Invariant("singular integer matrix".into()))?;
    inv.into_iter()
        .map(|row| {
            row.into_iter()
                .map(|x| {
                    if x.is_integer() {
                        Ok(x.to_integer() as i64)
                    } else {
                        Err(Error::Invariant(format!("non-integral inverse entry {x}")))
                    }
                })
                .collect()
        })
        .collect()
}

pub fn mat_vec(m: &[Vec<i64>], v: &[i64]) -> Vec<i64> {
    m.iter().map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum()).collect()
}

pub fn transpose(m: &[Vec<i64>]) -> Vec<Vec<i64>> {
    if m.is_empty() {
        return vec![];
    }
    (0..m[0].len()).map(|j| m.iter().map(|r| r[j]).collect()).collect()
}

pub fn mat_mul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let bt = transpose(b);
    a.iter().map(|r| bt.iter().map(|c| r.iter().zip(c).map(|(x, y)| x * y).sum()).collect()).collect()
}

/// The Euler matrix E = I − A (A_ij = #arrows i→j), so ⟨x,y⟩ = xᵀ E y.
pub fn euler_matrix(q: &Quiver) -> Vec<Vec<i64>> {
    let n = q.num_vertices();
    let mut e = vec![vec![0i64; n]; n];
    for (i, row) in e.iter_mut().enumerate() {
        row[i] = 1;
    }
    for &(s, t) in q.arrows() {
        e[s][t] -= 1;
    }
    e
}

/// Coxeter data of an acyclic quiver: Φ = −E⁻¹Eᵀ with dim τX = Φ(dim X) for
/// non-projective indecomposables X, and its inverse.
#[derive(Clone, Debug)]
pub struct Coxeter {
    pub phi: Vec<Vec<i64>>,
    pub phi_inv: Vec<Vec<i64>>,
}

impl Coxeter {
    pub fn new(q: &Quiver) -> Result<Self> {
        let e = euler_matrix(q);
        let e_inv = integer_inverse(&e)?;
        let et = transpose(&e);
        let et_inv = integer_inverse(&et)?;
        let neg = |m: Vec<Vec<i64>>| m.into_iter().map(|r| r.into_iter().map(|x| -x).collect()).collect::<Vec<Vec<i64>>>();
        let phi = neg(mat_mul(&e_inv, &et));
        let phi_inv = neg(mat_mul(&et_inv, &e));
        Ok(Coxeter { phi, phi_inv })
    }

    pub fn tau(&self, x: &[i64]) -> Vec<i64> {
        mat_vec(&self.phi, x)
    }

    pub fn tau_inv(&self, x: &[i64]) -> Vec<i64> {
        mat_vec(&self.phi_inv, x)
    }
}

/// Positive roots of a Dynkin quiver as the closure of the simple roots under
/// simple reflections s_i(x) = x − (x, α_i) α_i, sorted lexicographically.
pub fn positive_roots(q: &Quiver) -> Result<Vec<Vec<i64>>> {
    ensure!(q.dynkin_type().is_some(), "positive roots requested for a non-Dynkin quiver");
    let n = q.num_vertices();
    let simple = |i: usize| {
        let mut v = vec![0i64; n];
        v[i] = 1;
        v
    };
    let mut seen: BTreeSet<Vec<i64>> = BTreeSet::new();
    let mut queue: VecDeque<Vec<i64>> = (0..n).map(simple).collect();
    for r in &queue {
        seen.insert(r.clone());
    }
    while let Some(x) = queue.pop_front() {
        for i in 0..n {
            let c = q.symmetric_form(&x, &simple(i));
            let mut y = x.clone();
            y[i] -= c;
            if y.iter().all(|&v| v >= 0) && y.iter().any(|&v| v > 0) && seen.insert(y.clone()) {
                queue.push_back(y);
            }
            ensure!(seen.len() <= 200, "root closure did not terminate; not a finite root system");
        }
    }
    Ok(seen.into_iter().collect())
}

/// True if `x` is a positive root (nonnegative, nonzero, Tits form 1).
pub fn is_positive_root(q: &Quiver, x: &[i64]) -> bool {
    x.iter().all(|&v| v >= 0) && x.iter().any(|&v| v > 0) && q.euler_form(x, x).map(|v| v == 1).unwrap_or(false)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Oracle: brute-force all nonnegative vectors with entries ≤ bound and Tits form 1.
    fn brute_roots(q: &Quiver, bound: i64) -> Vec<Vec<i64>> {
        let n = q.num_vertices();
        let mut out = Vec::new();
        let total = (bound + 1).pow(n as u32);
        for code in 1..total {
            let mut v = vec![0i64; n];
            let mut c = code;
            for x in v.iter_mut() {
                *x = c % (bound + 1);
                c /= bound + 1;
            }
            if q.euler_form(&v, &v).unwrap() == 1 {
                out.push(v);
            }
        }
        out.sort();
        out
    }

    #[test]
    fn root_counts_match_brute_force() {
        for (spec, count) in [
            ("1->2", 3),
            ("1->2, 2->3", 6),
            ("1->2, 3->2", 6),
            ("1->4, 2->4, 3->4", 12),
            ("4->1, 4->2, 4->3", 12),
            ("1->2, 2->3, 3->4", 10),
            ("1->3, 2->3, 3->4, 4->5", 20),
            ("1->2, 2->3, 3->4, 4->5, 3->6", 36),
        ] {
            let q = Quiver::parse(spec).unwrap();
            let roots = positive_roots(&q).unwrap();
            assert_eq!(roots.len(), count, "{spec}");
            let bound = if count > 20 { 3 } else { 2 };
            assert_eq!(roots, brute_roots(&q, bound), "{spec}");
        }
    }

    #[test]
    fn coxeter_on_a2() {
        let q = Quiver::parse("1->2").unwrap();
        let c = Coxeter::new(&q).unwrap();
        assert_eq!(c.tau(&[1, 0]), vec![0, 1]);
        assert_eq!(c.tau_inv(&[0, 1]), vec![1, 0]);
        assert_eq!(mat_mul(&c.phi, &c.phi_inv), vec![vec![1, 0], vec![0, 1]]);
    }

    #[test]
    fn rational_inverse_detects_non_integrality() {
        assert!(integer_inverse(&[vec![2, 0], vec![0, 1]]).is_err());
        assert!(rational_inverse(&[vec![1, 2], vec![2, 4]]).is_none());
        assert_eq!(integer_inverse(&[vec![1, -1], vec![0, 1]]).unwrap(), vec![vec![1, 1], vec![0, 1]]);
    }
}
