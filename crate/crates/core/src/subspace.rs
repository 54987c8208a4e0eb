//! Enumeration of subspaces of F_q^m and Gaussian binomial coefficients.
//!
//! A k-dimensional subspace is produced as an `m × k` basis matrix in
//! reduced column echelon form: column `c` has a 1 in its pivot row, zeros in
//! every other pivot row and above its pivot, and free entries elsewhere.
//! Distinct echelon forms are distinct subspaces, so the enumeration visits
//! each subspace exactly once.

use crate::field::PrimeField;
use crate::matrix::Matrix;

/// Gaussian binomial [m choose k]_q as an integer (0 when k > m).
pub fn qbinomial(m: u64, k: u64, q: u64) -> u128 {
    if k > m {
        return 0;
    }
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    let qq = q as u128;
    for i in 0..k {
        num *= qq.pow((m - i) as u32) - 1;
        den *= qq.pow((i + 1) as u32) - 1;
    }
    num / den
}

/// Coefficients (lowest degree first) of the Gaussian binomial as a
/// polynomial in q.
pub fn qbinomial_poly(m: usize, k: usize) -> Vec<i64> {
    if k > m {
        return vec![];
    }
    // Pascal rule: [m,k] = [m-1,k-1] + q^k [m-1,k].
    let mut table: Vec<Vec<Vec<i64>>> = vec![vec![vec![]; m + 1]; m + 1];
    for n in 0..=m {
        table[n][0] = vec![1];
        for j in 1..=n.min(k) {
            let a = table[n - 1][j - 1].clone();
            let b = if j <= n - 1 { table[n - 1][j].clone() } else { vec![] };
            let len = a.len().max(b.len() + j);
            let mut c = vec![0i64; len];
            for (i, x) in a.iter().enumerate() {
                c[i] += x;
            }
            for (i, x) in b.iter().enumerate() {
                c[i + j] += x;
            }
            while c.last() == Some(&0) {
                c.pop();
            }
            table[n][j] = c;
        }
    }
    table[m][k].clone()
}

/// Iterator over all k-dimensional subspaces of F_q^m, as column bases.
pub struct SubspaceIter {
    field: PrimeField,
    m: usize,
    k: usize,
    pivots: Option<Vec<usize>>,
    free: Vec<(usize, usize)>,
    counter: Vec<u32>,
    fresh: bool,
}

impl SubspaceIter {
    pub fn new(field: PrimeField, m: usize, k: usize) -> Self {
        let pivots = if k <= m { Some((0..k).collect()) } else { None };
        let mut it = SubspaceIter { field, m, k, pivots, free: vec![], counter: vec![], fresh: true };
        it.reset_free();
        it
    }

    fn reset_free(&mut self) {
        self.free.clear();
        if let Some(piv) = &self.pivots {
            for (c, &pr) in piv.iter().enumerate() {
                for r in pr + 1..self.m {
                    if !piv.contains(&r) {
                        self.free.push((r, c));
                    }
                }
            }
        }
        self.counter = vec![0; self.free.len()];
        self.fresh = true;
    }

    fn advance_pivots(&mut self) -> bool {
        let Some(piv) = self.pivots.as_mut() else { return false };
        let k = self.k;
        let m = self.m;
        // next k-combination of 0..m in lexicographic order
        let mut i = k;
        while i > 0 {
            i -= 1;
            if piv[i] < m - k + i {
                piv[i] += 1;
                for j in i + 1..k {
                    piv[j] = piv[j - 1] + 1;
                }
                return true;
            }
        }
        false
    }

    fn current(&self) -> Matrix {
        let piv = self.pivots.as_ref().expect("active iterator");
        let mut b = Matrix::zeros(self.field, self.m, self.k);
        for (c, &pr) in piv.iter().enumerate() {
            b.set(pr, c, 1);
        }
        for (&(r, c), &v) in self.free.iter().zip(&self.counter) {
            b.set(r, c, v);
        }
        b
    }
}

impl Iterator for SubspaceIter {
    type Item = Matrix;

    fn next(&mut self) -> Option<Matrix> {
        self.pivots.as_ref()?;
        if self.fresh {
            self.fresh = false;
            return Some(self.current());
        }
        let q = self.field.p();
        for x in self.counter.iter_mut() {
            *x += 1;
            if *x < q {
                return Some(self.current());
            }
            *x = 0;
        }
        if self.advance_pivots() {
            self.reset_free();
            self.fresh = false;
            Some(self.current())
        } else {
            self.pivots = None;
            None
        }
    }
}

/// All subspaces `V` with `forced ⊆ V ⊆ F_q^m` and `dim V = k`, given a basis
/// `forced` (independent columns). Each is returned as the basis
/// `[forced | complement · W]`.
pub fn superspaces(forced: &Matrix, k: usize) -> impl Iterator<Item = Matrix> + '_ {
    let field = forced.field();
    let m = forced.rows();
    let f = forced.cols();
    let comp = forced.complement();
    let inner = if k >= f { Some(SubspaceIter::new(field, m - f, k - f)) } else { None };
    inner.into_iter().flatten().map(move |w| {
        let ext = comp.mul(&w);
        Matrix::hstack(field, m, &[forced, &ext])
    })
}
