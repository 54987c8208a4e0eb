//! Representations of quivers over prime fields: direct sums, path maps,
//! homomorphism spaces, subrepresentations and quotients.

use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::matrix::Matrix;
use crate::quiver::Quiver;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::sync::Arc;

/// A representation: a vector space F_p^{d_v} per vertex and a
/// `d_t × d_s` matrix per arrow `s → t`. Immutable after construction.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Representation {
    quiver: Arc<Quiver>,
    field: PrimeField,
    dims: Vec<usize>,
    maps: Vec<Matrix>,
}

impl Representation {
    /// Validates shapes and fields.
    pub fn new(quiver: Arc<Quiver>, field: PrimeField, dims: Vec<usize>, maps: Vec<Matrix>) -> Result<Self> {
        if dims.len() != quiver.num_vertices() {
            return Err(Error::DimensionMismatch(format!("{} dims for {} vertices", dims.len(), quiver.num_vertices())));
        }
        if maps.len() != quiver.num_arrows() {
            return Err(Error::DimensionMismatch(format!("{} matrices for {} arrows", maps.len(), quiver.num_arrows())));
        }
        for (a, m) in maps.iter().enumerate() {
            let (s, t) = quiver.arrow(a);
            if m.field() != field {
                return Err(Error::FieldMismatch(m.field().p(), field.p()));
            }
            if m.rows() != dims[t] || m.cols() != dims[s] {
                return Err(Error::DimensionMismatch(format!(
                    "arrow {}->{} has a {}x{} matrix, expected {}x{}",
                    quiver.label(s),
                    quiver.label(t),
                    m.rows(),
                    m.cols(),
                    dims[t],
                    dims[s]
                )));
            }
        }
        Ok(Representation { quiver, field, dims, maps })
    }

    /// The zero representation.
    pub fn zero(quiver: Arc<Quiver>, field: PrimeField) -> Self {
        let n = quiver.num_vertices();
        let maps = quiver.arrows().iter().map(|_| Matrix::zeros(field, 0, 0)).collect();
        Representation { quiver, field, dims: vec![0; n], maps }
    }

    /// The simple representation at vertex `v`.
    pub fn simple(quiver: Arc<Quiver>, field: PrimeField, v: usize) -> Self {
        let mut dims = vec![0; quiver.num_vertices()];
        dims[v] = 1;
        let maps = quiver.arrows().iter().map(|&(s, t)| Matrix::zeros(field, dims[t], dims[s])).collect();
        Representation { quiver, field, dims, maps }
    }

    /// A seeded random representation of the given dimension vector. Each
    /// arrow matrix is a product of random factors through a random rank, so
    /// degenerate iso types occur as often as generic ones.
    pub fn random(quiver: Arc<Quiver>, field: PrimeField, dims: Vec<usize>, seed: u64) -> Result<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rand_mat = |r: usize, c: usize, rng: &mut ChaCha8Rng| {
            let data = (0..r * c).map(|_| rng.gen_range(0..field.p())).collect();
            Matrix::from_vec(field, r, c, data)
        };
        let maps = quiver
            .arrows()
            .iter()
            .map(|&(s, t)| {
                let k = rng.gen_range(0..=dims[s].min(dims[t]));
                let a = rand_mat(dims[t], k, &mut rng);
                let b = rand_mat(k, dims[s], &mut rng);
                a.mul(&b)
            })
            .collect();
        Representation::new(quiver, field, dims, maps)
    }

    pub fn quiver(&self) -> &Arc<Quiver> {
        &self.quiver
    }
    pub fn field(&self) -> PrimeField {
        self.field
    }
    pub fn dims(&self) -> &[usize] {
        &self.dims
    }
    pub fn dim(&self, v: usize) -> usize {
        self.dims[v]
    }
    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }
    pub fn map(&self, a: usize) -> &Matrix {
        &self.maps[a]
    }
    pub fn maps(&self) -> &[Matrix] {
        &self.maps
    }

    /// The linear map along the unique path `u → v` (identity for `u = v`),
    /// or `None` if there is no path.
    pub fn path_map(&self, u: usize, v: usize) -> Option<Matrix> {
        let path = self.quiver.unique_path(u, v)?;
        let mut m = Matrix::identity(self.field, self.dims[u]);
        for a in path {
            m = self.maps[a].mul(&m);
        }
        Some(m)
    }

    /// Direct sum of representations over the same quiver and field.
    pub fn direct_sum(parts: &[&Representation]) -> Result<Self> {
        let first = parts.first().ok_or_else(|| Error::Malformed("empty direct sum".into()))?;
        let q = first.quiver.clone();
        let f = first.field;
        for p in parts {
            if p.field != f {
                return Err(Error::FieldMismatch(p.field.p(), f.p()));
            }
            if *p.quiver != *q {
                return Err(Error::Malformed("direct sum over different quivers".into()));
            }
        }
        let n = q.num_vertices();
        let dims: Vec<usize> = (0..n).map(|v| parts.iter().map(|p| p.dims[v]).sum()).collect();
        let maps = q
            .arrows()
            .iter()
            .enumerate()
            .map(|(a, &(s, t))| {
                let rs: Vec<usize> = parts.iter().map(|p| p.dims[t]).collect();
                let cs: Vec<usize> = parts.iter().map(|p| p.dims[s]).collect();
                Matrix::from_blocks(f, &rs, &cs, |i, j| (i == j).then(|| parts[i].maps[a].clone()))
            })
            .collect();
        Ok(Representation { quiver: q, field: f, dims, maps })
    }

    fn check_compatible(&self, other: &Representation) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch(self.field.p(), other.field.p()));
        }
        if *self.quiver != *other.quiver {
            return Err(Error::Malformed("representations over different quivers".into()));
        }
        Ok(())
    }

    /// Coefficient matrix of the intertwiner system `f_t x_α − y_α f_s = 0`
    /// in the unknowns `f_v` (each `dim y_v × dim x_v`, row-major, vertices in
    /// order).
    fn hom_system(&self, y: &Representation) -> (Matrix, Vec<usize>) {
        let n = self.quiver.num_vertices();
        let mut offsets = Vec::with_capacity(n + 1);
        let mut off = 0;
        for v in 0..n {
            offsets.push(off);
            off += y.dims[v] * self.dims[v];
        }
        offsets.push(off);
        let unknowns = off;
        let eqs: usize = self.quiver.arrows().iter().map(|&(s, t)| y.dims[t] * self.dims[s]).sum();
        let f = self.field;
        let mut sys = Matrix::zeros(f, eqs, unknowns);
        let mut row = 0;
        for (a, &(s, t)) in self.quiver.arrows().iter().enumerate() {
            let xa = &self.maps[a]; // dims x_t × x_s
            let ya = &y.maps[a]; // dims y_t × y_s
            let (ds_x, dt_x, ds_y) = (self.dims[s], self.dims[t], y.dims[s]);
            for i in 0..y.dims[t] {
                for j in 0..ds_x {
                    // (f_t x_α)[i][j] = Σ_c f_t[i][c] x_α[c][j]
                    for c in 0..dt_x {
                        let v = xa.get(c, j);
                        if v != 0 {
                            let col = offsets[t] + i * dt_x + c;
                            sys.set(row, col, f.add(sys.get(row, col), v));
                        }
                    }
                    // −(y_α f_s)[i][j] = −Σ_c y_α[i][c] f_s[c][j]
                    for c in 0..ds_y {
                        let v = ya.get(i, c);
                        if v != 0 {
                            let col = offsets[s] + c * ds_x + j;
                            sys.set(row, col, f.sub(sys.get(row, col), v));
                        }
                    }
                    row += 1;
                }
            }
        }
        (sys, offsets)
    }

    /// Basis of Hom(self, y): each element is one matrix per vertex.
    pub fn hom_basis(&self, y: &Representation) -> Result<Vec<Vec<Matrix>>> {
        self.check_compatible(y)?;
        let (sys, offsets) = self.hom_system(y);
        let k = sys.kernel();
        let n = self.quiver.num_vertices();
        Ok((0..k.cols())
            .map(|j| {
                (0..n)
                    .map(|v| {
                        let mut m = Matrix::zeros(self.field, y.dims[v], self.dims[v]);
                        for i in 0..y.dims[v] {
                            for c in 0..self.dims[v] {
                                m.set(i, c, k.get(offsets[v] + i * self.dims[v] + c, j));
                            }
                        }
                        m
                    })
                    .collect()
            })
            .collect())
    }

    /// dim Hom(self, y) by rank–nullity of the intertwiner system.
    pub fn hom_dim(&self, y: &Representation) -> Result<usize> {
        self.check_compatible(y)?;
        let (sys, offsets) = self.hom_system(y);
        Ok(offsets[offsets.len() - 1] - sys.rank())
    }

    /// True if the per-vertex matrices form a homomorphism `self → y`.
    pub fn is_hom(&self, y: &Representation, f: &[Matrix]) -> bool {
        self.quiver.arrows().iter().enumerate().all(|(a, &(s, t))| f[t].mul(&self.maps[a]) == y.maps[a].mul(&f[s]))
    }

    /// Splits a subspace choice `bases` (column bases per vertex, which must be
    /// a subrepresentation) into the subrepresentation and the quotient, both
    /// in coordinates adapted to `[basis | complement]`.
    pub fn sub_and_quotient(&self, bases: &[Matrix]) -> Result<(Representation, Representation)> {
        let n = self.quiver.num_vertices();
        if bases.len() != n {
            return Err(Error::DimensionMismatch("one subspace per vertex expected".into()));
        }
        let f = self.field;
        let mut inv = Vec::with_capacity(n);
        let mut comps = Vec::with_capacity(n);
        for (v, b) in bases.iter().enumerate() {
            if b.rows() != self.dims[v] {
                return Err(Error::DimensionMismatch(format!("subspace at vertex {v} lives in the wrong space")));
            }
            let c = b.complement();
            let w = Matrix::hstack(f, self.dims[v], &[b, &c]);
            let wi = w.inverse().ok_or_else(|| Error::NotSubrepresentation(format!("dependent basis at vertex {v}")))?;
            inv.push(wi);
            comps.push(c);
        }
        let sub_dims: Vec<usize> = bases.iter().map(|b| b.cols()).collect();
        let quo_dims: Vec<usize> = (0..n).map(|v| self.dims[v] - sub_dims[v]).collect();
        let mut sub_maps = Vec::with_capacity(self.maps.len());
        let mut quo_maps = Vec::with_capacity(self.maps.len());
        for (a, &(s, t)) in self.quiver.arrows().iter().enumerate() {
            let img = inv[t].mul(&self.maps[a].mul(&bases[s]));
            let k = sub_dims[t];
            if !img.row_range(k, self.dims[t]).is_zero() {
                return Err(Error::NotSubrepresentation(format!(
                    "arrow {}->{} does not preserve the subspace",
                    self.quiver.label(s),
                    self.quiver.label(t)
                )));
            }
            sub_maps.push(img.row_range(0, k));
            let qimg = inv[t].mul(&self.maps[a].mul(&comps[s]));
            quo_maps.push(qimg.row_range(k, self.dims[t]));
        }
        let sub = Representation { quiver: self.quiver.clone(), field: f, dims: sub_dims, maps: sub_maps };
        let quo = Representation { quiver: self.quiver.clone(), field: f, dims: quo_dims, maps: quo_maps };
        Ok((sub, quo))
    }

    /// True if `bases` is a subrepresentation (arrow images stay inside).
    pub fn is_subrep(&self, bases: &[Matrix]) -> bool {
        self.quiver.arrows().iter().enumerate().all(|(a, &(s, t))| bases[t].contains_columns(&self.maps[a].mul(&bases[s])))
    }

    /// The same representation over an isomorphic quiver object (used when a
    /// quiver is rebuilt with identical data).
    pub fn with_quiver(&self, quiver: Arc<Quiver>) -> Result<Self> {
        Representation::new(quiver, self.field, self.dims.clone(), self.maps.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn a2() -> Arc<Quiver> {
        Arc::new(Quiver::parse("1->2").unwrap())
    }

    fn random_rep(q: &Arc<Quiver>, f: PrimeField, rng: &mut ChaCha8Rng, maxd: usize) -> Representation {
        let dims: Vec<usize> = (0..q.num_vertices()).map(|_| rng.gen_range(0..=maxd)).collect();
        let maps = q
            .arrows()
            .iter()
            .map(|&(s, t)| Matrix::from_vec(f, dims[t], dims[s], (0..dims[t] * dims[s]).map(|_| rng.gen_range(0..f.p())).collect()))
            .collect();
        Representation::new(q.clone(), f, dims, maps).unwrap()
    }

    #[test]
    fn hom_examples() {
        let q = a2();
        let f = PrimeField::new(3).unwrap();
        let p1 = Representation::new(q.clone(), f, vec![1, 1], vec![Matrix::from_rows(f, &[vec![1]])]).unwrap();
        let s1 = Representation::simple(q.clone(), f, 0);
        let s2 = Representation::simple(q.clone(), f, 1);
        assert_eq!(p1.hom_dim(&s2).unwrap(), 0);
        assert_eq!(p1.hom_dim(&p1).unwrap(), 1);
        let s1s1 = Representation::direct_sum(&[&s1, &s1]).unwrap();
        assert_eq!(s1.hom_dim(&s1s1).unwrap(), 2);
        let basis = p1.hom_basis(&p1).unwrap();
        assert_eq!(basis.len(), 1);
        assert!(p1.is_hom(&p1, &basis[0]));
        // Hom(S2, P1) = 1, Hom(P1, S1) = 1, Hom(S1, P1) = 0
        assert_eq!(s2.hom_dim(&p1).unwrap(), 1);
        assert_eq!(p1.hom_dim(&s1).unwrap(), 1);
        assert_eq!(s1.hom_dim(&p1).unwrap(), 0);
    }

    #[test]
    fn hom_is_additive_on_random_reps() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let q = Arc::new(Quiver::parse("1->2, 3->2").unwrap());
        for p in [2u32, 3] {
            let f = PrimeField::new(p).unwrap();
            for _ in 0..25 {
                let x = random_rep(&q, f, &mut rng, 2);
                let y = random_rep(&q, f, &mut rng, 2);
                let z = random_rep(&q, f, &mut rng, 2);
                let xy = Representation::direct_sum(&[&x, &y]).unwrap();
                assert_eq!(xy.hom_dim(&z).unwrap(), x.hom_dim(&z).unwrap() + y.hom_dim(&z).unwrap());
                assert_eq!(z.hom_dim(&xy).unwrap(), z.hom_dim(&x).unwrap() + z.hom_dim(&y).unwrap());
                // every basis element is a homomorphism and the basis is independent
                let b = x.hom_basis(&y).unwrap();
                assert_eq!(b.len(), x.hom_dim(&y).unwrap());
                assert!(b.iter().all(|h| x.is_hom(&y, h)));
            }
        }
    }

    #[test]
    fn shape_validation() {
        let q = a2();
        let f = PrimeField::new(2).unwrap();
        let bad = Representation::new(q.clone(), f, vec![1, 2], vec![Matrix::zeros(f, 1, 2)]);
        assert!(matches!(bad, Err(Error::DimensionMismatch(_))));
        let g = PrimeField::new(3).unwrap();
        let s = Representation::simple(q.clone(), f, 0);
        let t = Representation::simple(q, g, 0);
        assert!(matches!(s.hom_dim(&t), Err(Error::FieldMismatch(..))));
    }

    #[test]
    fn sub_and_quotient_dimensions() {
        let q = a2();
        let f = PrimeField::new(5).unwrap();
        // k^2 -> k^1 projection onto the first coordinate
        let m = Representation::new(q.clone(), f, vec![2, 1], vec![Matrix::from_rows(f, &[vec![1, 0]])]).unwrap();
        let u1 = Matrix::from_rows(f, &[vec![0], vec![1]]);
        let u2 = Matrix::zeros(f, 1, 0);
        let (sub, quo) = m.sub_and_quotient(&[u1.clone(), u2.clone()]).unwrap();
        assert_eq!(sub.dims(), &[1, 0]);
        assert_eq!(quo.dims(), &[1, 1]);
        assert_eq!(quo.map(0).rank(), 1);
        let bad = Matrix::from_rows(f, &[vec![1], vec![0]]);
        assert!(m.sub_and_quotient(&[bad.clone(), u2.clone()]).is_err());
        assert!(!m.is_subrep(&[bad, u2]));
    }
}
