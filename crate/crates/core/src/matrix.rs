//! Dense matrices over a prime field with exact Gaussian elimination.
//!
//! Pivoting always takes the first nonzero entry in the current column, so
//! every derived basis (kernel, image, complement) is deterministic.
//! Subspaces are represented by matrices whose *columns* form a basis.

use crate::field::PrimeField;
use std::fmt;

/// A dense `rows × cols` matrix over F_p, stored row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    field: PrimeField,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix[F_{}; {}x{}](", self.field.p(), self.rows, self.cols)?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, "; ")?;
            }
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.get(r, c))?;
            }
        }
        write!(f, ")")
    }
}

/// Result of row reduction: the reduced row echelon form and its pivot columns.
#[derive(Clone, Debug)]
pub struct Rref {
    pub matrix: Matrix,
    pub pivots: Vec<usize>,
}

impl Matrix {
    pub fn zeros(field: PrimeField, rows: usize, cols: usize) -> Self {
        Matrix { field, rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(field: PrimeField, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    /// Builds a matrix from integer rows, reducing entries mod p.
    ///
    /// # Panics
    /// Panics if rows have unequal lengths.
    pub fn from_rows(field: PrimeField, rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut m = Self::zeros(field, r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged matrix rows");
            for (j, &x) in row.iter().enumerate() {
                m.set(i, j, field.from_i64(x));
            }
        }
        m
    }

    /// Builds a `rows × cols` matrix from residues in row-major order.
    pub fn from_vec(field: PrimeField, rows: usize, cols: usize, data: Vec<u32>) -> Self {
        assert_eq!(data.len(), rows * cols);
        let p = field.p();
        Matrix { field, rows, cols, data: data.into_iter().map(|x| x % p).collect() }
    }

    /// A single column vector.
    pub fn column(field: PrimeField, v: &[u32]) -> Self {
        Self::from_vec(field, v.len(), 1, v.to_vec())
    }

    #[inline]
    pub fn field(&self) -> PrimeField {
        self.field
    }
    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }
    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }
    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.data[r * self.cols + c]
    }
    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u32) {
        self.data[r * self.cols + c] = v;
    }

    /// Rows as signed integer representatives in `0..p`.
    pub fn to_rows(&self) -> Vec<Vec<i64>> {
        (0..self.rows).map(|r| (0..self.cols).map(|c| self.get(r, c) as i64).collect()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Self::zeros(self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }

    /// Matrix product `self · other`.
    ///
    /// # Panics
    /// Panics on shape or field mismatch.
    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.field, other.field, "field mismatch in product");
        assert_eq!(self.cols, other.rows, "shape mismatch in product");
        let p = self.field.p() as u64;
        let mut out = Self::zeros(self.field, self.rows, other.cols);
        let mut acc = vec![0u64; other.cols];
        for r in 0..self.rows {
            acc.iter_mut().for_each(|x| *x = 0);
            for k in 0..self.cols {
                let a = self.get(r, k) as u64;
                if a == 0 {
                    continue;
                }
                let orow = &other.data[k * other.cols..(k + 1) * other.cols];
                for (x, &b) in acc.iter_mut().zip(orow) {
                    *x = (*x + a * b as u64) % p;
                }
            }
            for (c, &x) in acc.iter().enumerate() {
                out.set(r, c, x as u32);
            }
        }
        out
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch in sum");
        let f = self.field;
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| f.add(a, b)).collect();
        Matrix { field: f, rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch in difference");
        let f = self.field;
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| f.sub(a, b)).collect();
        Matrix { field: f, rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, s: u32) -> Matrix {
        let f = self.field;
        Matrix { field: f, rows: self.rows, cols: self.cols, data: self.data.iter().map(|&a| f.mul(a, s)).collect() }
    }

    /// Horizontal concatenation; all parts need the same number of rows
    /// (`rows` is used when `parts` is empty).
    pub fn hstack(field: PrimeField, rows: usize, parts: &[&Matrix]) -> Matrix {
        let cols: usize = parts.iter().map(|m| m.cols).sum();
        let mut out = Self::zeros(field, rows, cols);
        let mut off = 0;
        for m in parts {
            assert_eq!(m.rows, rows, "row mismatch in hstack");
            for r in 0..rows {
                for c in 0..m.cols {
                    out.set(r, off + c, m.get(r, c));
                }
            }
            off += m.cols;
        }
        out
    }

    /// Vertical concatenation; all parts need the same number of columns
    /// (`cols` is used when `parts` is empty).
    pub fn vstack(field: PrimeField, cols: usize, parts: &[&Matrix]) -> Matrix {
        let rows: usize = parts.iter().map(|m| m.rows).sum();
        let mut data = Vec::with_capacity(rows * cols);
        for m in parts {
            assert_eq!(m.cols, cols, "column mismatch in vstack");
            data.extend_from_slice(&m.data);
        }
        Matrix { field, rows, cols, data }
    }

    /// Block matrix from a grid of optional blocks with given block sizes;
    /// `None` blocks are zero.
    pub fn from_blocks(field: PrimeField, row_sizes: &[usize], col_sizes: &[usize], block: impl Fn(usize, usize) -> Option<Matrix>) -> Matrix {
        let rows: usize = row_sizes.iter().sum();
        let cols: usize = col_sizes.iter().sum();
        let mut out = Self::zeros(field, rows, cols);
        let mut ro = 0;
        for (bi, &rs) in row_sizes.iter().enumerate() {
            let mut co = 0;
            for (bj, &cs) in col_sizes.iter().enumerate() {
                if let Some(b) = block(bi, bj) {
                    assert_eq!((b.rows, b.cols), (rs, cs), "block shape mismatch");
                    for r in 0..rs {
                        for c in 0..cs {
                            out.set(ro + r, co + c, b.get(r, c));
                        }
                    }
                }
                co += cs;
            }
            ro += rs;
        }
        out
    }

    pub fn select_cols(&self, cols: &[usize]) -> Matrix {
        let mut out = Self::zeros(self.field, self.rows, cols.len());
        for r in 0..self.rows {
            for (k, &c) in cols.iter().enumerate() {
                out.set(r, k, self.get(r, c));
            }
        }
        out
    }

    pub fn select_rows(&self, rows: &[usize]) -> Matrix {
        let mut data = Vec::with_capacity(rows.len() * self.cols);
        for &r in rows {
            data.extend_from_slice(&self.data[r * self.cols..(r + 1) * self.cols]);
        }
        Matrix { field: self.field, rows: rows.len(), cols: self.cols, data }
    }

    /// Rows `lo..hi` as a new matrix.
    pub fn row_range(&self, lo: usize, hi: usize) -> Matrix {
        Matrix { field: self.field, rows: hi - lo, cols: self.cols, data: self.data[lo * self.cols..hi * self.cols].to_vec() }
    }

    /// Columns `lo..hi` as a new matrix.
    pub fn col_range(&self, lo: usize, hi: usize) -> Matrix {
        let idx: Vec<usize> = (lo..hi).collect();
        self.select_cols(&idx)
    }

    /// Reduced row echelon form with first-nonzero pivoting.
    pub fn rref(&self) -> Rref {
        let mut m = self.clone();
        let f = self.field;
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(pr) = (row..m.rows).find(|&r| m.get(r, col) != 0) else { continue };
            if pr != row {
                for c in 0..m.cols {
                    m.data.swap(pr * m.cols + c, row * m.cols + c);
                }
            }
            let inv = f.inv(m.get(row, col));
            if inv != 1 {
                for c in col..m.cols {
                    let v = m.get(row, c);
                    m.set(row, c, f.mul(v, inv));
                }
            }
            for r in 0..m.rows {
                if r == row {
                    continue;
                }
                let factor = m.get(r, col);
                if factor == 0 {
                    continue;
                }
                for c in col..m.cols {
                    let v = f.sub(m.get(r, c), f.mul(factor, m.get(row, c)));
                    m.set(r, c, v);
                }
            }
            pivots.push(col);
            row += 1;
        }
        Rref { matrix: m, pivots }
    }

    /// Rank by forward elimination.
    pub fn rank(&self) -> usize {
        if self.rows == 0 || self.cols == 0 {
            return 0;
        }
        let mut m = self.clone();
        let f = self.field;
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(pr) = (row..m.rows).find(|&r| m.get(r, col) != 0) else { continue };
            if pr != row {
                for c in 0..m.cols {
                    m.data.swap(pr * m.cols + c, row * m.cols + c);
                }
            }
            let inv = f.inv(m.get(row, col));
            for r in row + 1..m.rows {
                let factor = f.mul(m.get(r, col), inv);
                if factor == 0 {
                    continue;
                }
                for c in col..m.cols {
                    let v = f.sub(m.get(r, c), f.mul(factor, m.get(row, c)));
                    m.set(r, c, v);
                }
            }
            row += 1;
        }
        row
    }

    /// Basis of the null space `{x : self·x = 0}` as the columns of a
    /// `cols × k` matrix (one basis vector per free column).
    pub fn kernel(&self) -> Matrix {
        let Rref { matrix: r, pivots } = self.rref();
        let f = self.field;
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut k = Self::zeros(f, self.cols, free.len());
        for (j, &fc) in free.iter().enumerate() {
            k.set(fc, j, 1);
            for (i, &pc) in pivots.iter().enumerate() {
                k.set(pc, j, f.neg(r.get(i, fc)));
            }
        }
        k
    }

    /// Basis of the column space: the pivot columns of `self`.
    pub fn column_space(&self) -> Matrix {
        let pivots = self.rref().pivots;
        self.select_cols(&pivots)
    }

    /// A particular solution `X` of `self · X = b`, free variables set to 0,
    /// or `None` if the system is inconsistent.
    pub fn solve(&self, b: &Matrix) -> Option<Matrix> {
        assert_eq!(self.rows, b.rows, "row mismatch in solve");
        let aug = Matrix::hstack(self.field, self.rows, &[self, b]);
        let Rref { matrix: r, pivots } = aug.rref();
        if pivots.iter().any(|&c| c >= self.cols) {
            return None;
        }
        let mut x = Self::zeros(self.field, self.cols, b.cols);
        for (i, &pc) in pivots.iter().enumerate() {
            for j in 0..b.cols {
                x.set(pc, j, r.get(i, self.cols + j));
            }
        }
        Some(x)
    }

    /// Inverse of a square matrix, or `None` if singular.
    pub fn inverse(&self) -> Option<Matrix> {
        assert_eq!(self.rows, self.cols, "inverse of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return Some(self.clone());
        }
        let aug = Matrix::hstack(self.field, n, &[self, &Matrix::identity(self.field, n)]);
        let Rref { matrix: r, pivots } = aug.rref();
        if pivots.len() < n || pivots[n - 1] >= n {
            return None;
        }
        Some(r.col_range(n, 2 * n))
    }

    /// Standard basis vectors completing the independent columns of `self`
    /// to a basis of F_p^rows (the non-pivot rows of its column echelon form).
    pub fn complement(&self) -> Matrix {
        let n = self.rows;
        let pivots = self.transpose().rref().pivots;
        let missing: Vec<usize> = (0..n).filter(|i| !pivots.contains(i)).collect();
        let mut c = Self::zeros(self.field, n, missing.len());
        for (j, &i) in missing.iter().enumerate() {
            c.set(i, j, 1);
        }
        c
    }

    /// Canonical basis of the column space: the transpose of the nonzero rows
    /// of the RREF of the transpose. Two matrices span the same subspace iff
    /// their canonical bases are equal.
    pub fn canonical_column_basis(&self) -> Matrix {
        let Rref { matrix: r, pivots } = self.transpose().rref();
        r.row_range(0, pivots.len()).transpose()
    }

    /// True if every column of `other` lies in the column space of `self`.
    pub fn contains_columns(&self, other: &Matrix) -> bool {
        if other.cols == 0 {
            return true;
        }
        self.solve(other).is_some()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn rand_matrix(f: PrimeField, rng: &mut ChaCha8Rng, r: usize, c: usize) -> Matrix {
        let data = (0..r * c).map(|_| rng.gen_range(0..f.p())).collect();
        Matrix::from_vec(f, r, c, data)
    }

    /// Oracle: rank over F_p by brute-force counting the image size |Im A| = p^rank.
    fn brute_rank(m: &Matrix) -> usize {
        let p = m.field().p() as usize;
        let mut image = std::collections::HashSet::new();
        let n = m.cols();
        let total = p.pow(n as u32);
        for code in 0..total {
            let mut x = vec![0u32; n];
            let mut c = code;
            for xi in x.iter_mut() {
                *xi = (c % p) as u32;
                c /= p;
            }
            let v = m.mul(&Matrix::column(m.field(), &x));
            image.insert((0..v.rows()).map(|i| v.get(i, 0)).collect::<Vec<_>>());
        }
        let mut r = 0;
        while p.pow(r) < image.len() {
            r += 1;
        }
        r as usize
    }

    #[test]
    fn rank_against_image_size_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for p in [2u32, 3, 5] {
            let f = PrimeField::new(p).unwrap();
            for _ in 0..40 {
                let r = rng.gen_range(0..4);
                let c = rng.gen_range(0..4);
                let m = rand_matrix(f, &mut rng, r, c);
                assert_eq!(m.rank(), brute_rank(&m), "{m:?}");
                assert_eq!(m.rref().pivots.len(), m.rank());
            }
        }
    }

    #[test]
    fn kernel_and_solve_are_consistent() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for p in [2u32, 3, 7] {
            let f = PrimeField::new(p).unwrap();
            for _ in 0..60 {
                let r = rng.gen_range(1..6);
                let c = rng.gen_range(1..6);
                let a = rand_matrix(f, &mut rng, r, c);
                let k = a.kernel();
                assert!(a.mul(&k).is_zero());
                assert_eq!(k.cols() + a.rank(), c);
                assert_eq!(k.rank(), k.cols());
                let x = rand_matrix(f, &mut rng, c, 2);
                let b = a.mul(&x);
                let sol = a.solve(&b).expect("consistent system");
                assert_eq!(a.mul(&sol), b);
            }
        }
    }

    #[test]
    fn inconsistent_system_detected() {
        let f = PrimeField::new(3).unwrap();
        let a = Matrix::from_rows(f, &[vec![1, 0], vec![0, 0]]);
        let b = Matrix::from_rows(f, &[vec![0], vec![1]]);
        assert!(a.solve(&b).is_none());
    }

    #[test]
    fn inverse_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let f = PrimeField::new(5).unwrap();
        let mut found = 0;
        while found < 20 {
            let a = rand_matrix(f, &mut rng, 4, 4);
            match a.inverse() {
                Some(inv) => {
                    assert_eq!(a.mul(&inv), Matrix::identity(f, 4));
                    found += 1;
                }
                None => assert!(a.rank() < 4),
            }
        }
    }

    #[test]
    fn complement_completes_a_basis() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let f = PrimeField::new(3).unwrap();
        for _ in 0..30 {
            let a = rand_matrix(f, &mut rng, 5, 3).column_space();
            let c = a.complement();
            let both = Matrix::hstack(f, 5, &[&a, &c]);
            assert_eq!(both.rank(), 5);
            assert_eq!(both.cols(), 5);
        }
    }

    #[test]
    fn canonical_basis_identifies_subspaces() {
        let f = PrimeField::new(5).unwrap();
        let a = Matrix::from_rows(f, &[vec![1, 1], vec![2, 0], vec![0, 3]]);
        let g = Matrix::from_rows(f, &[vec![2, 1], vec![1, 4]]);
        let b = a.mul(&g);
        assert_eq!(a.canonical_column_basis(), b.canonical_column_basis());
        assert!(a.contains_columns(&b));
    }
}
