//! Auslander–Reiten theory of kQ for a Dynkin quiver Q.
//!
//! The AR quiver is realized as a full subquiver of ℤQ^op: vertex (r, i)
//! stands for τ^{-r} P_i, with dimension vectors obtained from the Coxeter
//! transformation. For every arrow i → j of Q there are AR arrows
//! (r, j) → (r, i) and (r, i) → (r+1, j). Explicit indecomposables are
//! built by BGP reflection functors; homomorphism dimensions by the
//! hereditary recursion hom(X,Y) = ⟨X,Y⟩ + hom(Y, τX).

use crate::error::{ensure, Error, Result};
use crate::field::PrimeField;
use crate::matrix::Matrix;
use crate::projmap::{present, projective_sum_rep, ProjMap};
use crate::quiver::{topological_order_by, Quiver};
use crate::rep::Representation;
use crate::roots::{is_positive_root, positive_roots, Coxeter};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

/// Explicit minimal projective resolution 0 → P_U → Q_U → U → 0.
#[derive(Clone, Debug)]
pub struct Resolution {
    /// Vertices i_s of the cover summands Q_U = ⊕_s P_{i_s}.
    pub cover: Vec<usize>,
    /// Top vectors u_s ∈ U_{i_s} (column vectors) generating U.
    pub tops: Vec<Matrix>,
    /// Vertices j_t of the kernel summands P_U = ⊕_t P_{j_t}.
    pub kernel: Vec<usize>,
    /// Kernel generators g_t ∈ (Q_U)_{j_t}, in the coordinates of the summands present at j_t.
    pub kernel_gens: Vec<Matrix>,
    /// The embedding ι_U : P_U → Q_U.
    pub iota: ProjMap,
}

impl Resolution {
    /// The cover map Q_U → U at vertex j: columns U_{path i_s → j}(u_s) over the summands present at j.
    pub fn cover_at(&self, q: &Quiver, u: &Representation, j: usize) -> Matrix {
        let pres = present(q, &self.cover, j);
        let cols: Vec<Matrix> = pres.iter().map(|&s| u.path_map(self.cover[s], j).expect("present summand").mul(&self.tops[s])).collect();
        let refs: Vec<&Matrix> = cols.iter().collect();
        Matrix::hstack(u.field(), u.dim(j), &refs)
    }
}

/// One indecomposable kQ-module.
#[derive(Clone, Debug)]
pub struct Indecomposable {
    pub id: usize,
    pub label: String,
    pub dim: Vec<usize>,
    /// ℤQ coordinate: this module is τ^{-r} P_vertex.
    pub r: usize,
    pub vertex: usize,
    pub is_projective: bool,
    pub is_injective: bool,
    pub tau: Option<usize>,
    pub tau_inv: Option<usize>,
    pub rep: Representation,
    pub resolution: Option<Resolution>,
}

/// All indecomposables of kQ with AR data and the hom table.
#[derive(Clone, Debug)]
pub struct IndecTable {
    quiver: Arc<Quiver>,
    field: PrimeField,
    indecs: Vec<Indecomposable>,
    hom: Vec<Vec<usize>>,
    ar_arrows: Vec<(usize, usize)>,
    projective: Vec<usize>,
    injective: Vec<usize>,
    simple: Vec<usize>,
    by_dim: HashMap<Vec<usize>, usize>,
}

/// A direct sum of indecomposables: multiplicity per indecomposable id.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct IsoType {
    pub mult: Vec<usize>,
}

impl IsoType {
    pub fn zero(n: usize) -> Self {
        IsoType { mult: vec![0; n] }
    }

    pub fn single(n: usize, id: usize) -> Self {
        let mut t = Self::zero(n);
        t.mult[id] = 1;
        t
    }

    pub fn from_pairs(n: usize, pairs: &[(usize, usize)]) -> Self {
        let mut t = Self::zero(n);
        for &(id, m) in pairs {
            t.mult[id] += m;
        }
        t
    }

    pub fn add(&self, other: &IsoType) -> IsoType {
        IsoType { mult: self.mult.iter().zip(&other.mult).map(|(a, b)| a + b).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.mult.iter().all(|&m| m == 0)
    }

    /// Nonzero (id, multiplicity) pairs.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        self.mult.iter().enumerate().filter(|(_, &m)| m > 0).map(|(i, &m)| (i, m)).collect()
    }
}

/// Display helper pairing an [`IsoType`] with its table, e.g. `{P1:2, S1:1}`.
pub struct IsoDisplay<'a>(pub &'a IndecTable, pub &'a IsoType);

impl fmt::Display for IsoDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.1.pairs().iter().map(|&(i, m)| format!("{}:{}", self.0.indec(i).label, m)).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

impl IndecTable {
    /// Builds the complete table for a Dynkin quiver over F_p.
    pub fn new(quiver: Arc<Quiver>, field: PrimeField) -> Result<Self> {
        if quiver.dynkin_type().is_none() {
            crate::quiver::classify(quiver.num_vertices(), quiver.arrows())?;
            return Err(Error::NotDynkin("quiver was not validated as Dynkin".into()));
        }
        let q = &*quiver;
        let n = q.num_vertices();
        let cox = Coxeter::new(q)?;
        let roots = positive_roots(q)?;

        // ℤQ coordinates by iterating τ^{-1} on projective dimension vectors.
        let mut coords: Vec<(usize, usize, Vec<i64>)> = Vec::new();
        for i in 0..n {
            let mut x: Vec<i64> = (0..n).map(|j| q.path_count(i, j) as i64).collect();
            let mut r = 0;
            loop {
                ensure!(is_positive_root(q, &x), "τ-orbit left the root system at ({r},{i})");
                coords.push((r, i, x.clone()));
                let y = cox.tau_inv(&x);
                if y.iter().any(|&v| v < 0) {
                    break;
                }
                x = y;
                r += 1;
                ensure!(r <= roots.len(), "τ-orbit does not terminate");
            }
        }
        ensure!(coords.len() == roots.len(), "ℤQ knitting found {} modules but there are {} positive roots", coords.len(), roots.len());
        let mut dims_sorted: Vec<Vec<i64>> = coords.iter().map(|c| c.2.clone()).collect();
        dims_sorted.sort();
        ensure!(dims_sorted == roots, "ℤQ knitting does not reproduce the positive roots");

        let coord_index: HashMap<(usize, usize), usize> = coords.iter().enumerate().map(|(k, c)| ((c.0, c.1), k)).collect();
        let mut raw_arrows = Vec::new();
        for &(i, j) in q.arrows() {
            for (k, c) in coords.iter().enumerate() {
                if c.1 == j {
                    if let Some(&t) = coord_index.get(&(c.0, i)) {
                        raw_arrows.push((k, t));
                    }
                }
                if c.1 == i {
                    if let Some(&t) = coord_index.get(&(c.0 + 1, j)) {
                        raw_arrows.push((k, t));
                    }
                }
            }
        }
        // Mesh additivity: dim τZ + dim Z = Σ_{Y→Z} dim Y for non-projective Z.
        for (k, c) in coords.iter().enumerate() {
            if c.0 == 0 {
                continue;
            }
            let tz = coord_index[&(c.0 - 1, c.1)];
            let mut mid = vec![0i64; n];
            for &(s, t) in &raw_arrows {
                if t == k {
                    for v in 0..n {
                        mid[v] += coords[s].2[v];
                    }
                }
            }
            let lhs: Vec<i64> = (0..n).map(|v| coords[tz].2[v] + c.2[v]).collect();
            ensure!(lhs == mid, "mesh at ({},{}) is not dimension-additive", c.0, c.1);
        }
        let mut pairs = raw_arrows.clone();
        pairs.sort();
        pairs.dedup();
        ensure!(pairs.len() == raw_arrows.len(), "multiple arrows in the AR quiver");

        // Global order: topological on the AR quiver, ties by lexicographic dimension vector.
        let order = topological_order_by(coords.len(), &raw_arrows, |k| coords[k].2.clone())
            .ok_or_else(|| Error::Invariant("AR quiver has a cycle".into()))?;
        let mut new_id = vec![0usize; coords.len()];
        for (pos, &k) in order.iter().enumerate() {
            new_id[k] = pos;
        }
        let mut ar_arrows: Vec<(usize, usize)> = raw_arrows.iter().map(|&(s, t)| (new_id[s], new_id[t])).collect();
        ar_arrows.sort();

        let mut max_r = vec![0usize; n];
        for c in &coords {
            max_r[c.1] = max_r[c.1].max(c.0);
        }
        let mut indecs = Vec::with_capacity(coords.len());
        for (pos, &k) in order.iter().enumerate() {
            let (r, v, ref d) = coords[k];
            let dim: Vec<usize> = d.iter().map(|&x| x as usize).collect();
            let rep = explicit_indecomposable(&quiver, field, &dim)?;
            indecs.push(Indecomposable {
                id: pos,
                label: String::new(),
                dim,
                r,
                vertex: v,
                is_projective: r == 0,
                is_injective: r == max_r[v],
                tau: if r > 0 { Some(new_id[coord_index[&(r - 1, v)]]) } else { None },
                tau_inv: coord_index.get(&(r + 1, v)).map(|&x| new_id[x]),
                rep,
                resolution: None,
            });
        }
        let by_dim: HashMap<Vec<usize>, usize> = indecs.iter().map(|x| (x.dim.clone(), x.id)).collect();
        let unit = |v: usize| {
            let mut d = vec![0usize; n];
            d[v] = 1;
            d
        };
        let projective: Vec<usize> = (0..n).map(|i| new_id[coord_index[&(0, i)]]).collect();
        let injective: Vec<usize> = (0..n).map(|i| new_id[coord_index[&(max_r[i], i)]]).collect();
        let simple: Vec<usize> = (0..n).map(|i| by_dim[&unit(i)]).collect();

        // Labels: simples S_i, then projectives P_i, injectives I_i, else τ^k of an injective.
        for x in indecs.iter_mut() {
            let l = |v: usize| q.label(v).to_string();
            x.label = if let Some(v) = simple.iter().position(|&s| s == x.id) {
                format!("S{}", l(v))
            } else if x.is_projective {
                format!("P{}", l(x.vertex))
            } else if x.is_injective {
                format!("I{}", l(x.vertex))
            } else {
                let k = max_r[x.vertex] - x.r;
                let inj = &injective[x.vertex];
                let base_is_simple = simple.contains(inj);
                let base = if base_is_simple { format!("S{}", l(x.vertex)) } else { format!("I{}", l(x.vertex)) };
                if k == 1 {
                    format!("tau{base}")
                } else {
                    format!("tau^{k}{base}")
                }
            };
        }

        let mut table = IndecTable { quiver, field, indecs, hom: vec![], ar_arrows, projective, injective, simple, by_dim };
        table.hom = table.compute_hom_table()?;
        for x in 0..table.len() {
            ensure!(table.hom[x][x] == 1, "hom({0},{0}) != 1", table.indecs[x].label);
            for y in 0..x {
                ensure!(table.hom[x][y] == 0, "hom table not unitriangular at ({x},{y})");
            }
        }
        for id in 0..table.len() {
            if !table.indecs[id].is_projective {
                let res = table.build_resolution(id)?;
                table.indecs[id].resolution = Some(res);
            }
        }
        Ok(table)
    }

    pub fn quiver(&self) -> &Arc<Quiver> {
        &self.quiver
    }
    pub fn field(&self) -> PrimeField {
        self.field
    }
    pub fn len(&self) -> usize {
        self.indecs.len()
    }
    pub fn is_empty(&self) -> bool {
        self.indecs.is_empty()
    }
    pub fn indec(&self, id: usize) -> &Indecomposable {
        &self.indecs[id]
    }
    pub fn indecs(&self) -> &[Indecomposable] {
        &self.indecs
    }
    pub fn ar_arrows(&self) -> &[(usize, usize)] {
        &self.ar_arrows
    }
    pub fn projective(&self, v: usize) -> usize {
        self.projective[v]
    }
    pub fn injective(&self, v: usize) -> usize {
        self.injective[v]
    }
    pub fn simple(&self, v: usize) -> usize {
        self.simple[v]
    }
    pub fn by_dim(&self, d: &[usize]) -> Option<usize> {
        self.by_dim.get(d).copied()
    }
    pub fn by_label(&self, l: &str) -> Option<usize> {
        self.indecs.iter().position(|x| x.label == l)
    }
    pub fn hom_table(&self) -> &[Vec<usize>] {
        &self.hom
    }
    /// Non-projective indecomposables in table order.
    pub fn non_projectives(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| !self.indecs[i].is_projective).collect()
    }

    fn euler(&self, x: usize, y: usize) -> i64 {
        let a: Vec<i64> = self.indecs[x].dim.iter().map(|&v| v as i64).collect();
        let b: Vec<i64> = self.indecs[y].dim.iter().map(|&v| v as i64).collect();
        self.quiver.euler_form(&a, &b).expect("same quiver")
    }

    fn compute_hom_table(&self) -> Result<Vec<Vec<usize>>> {
        let n = self.len();
        let mut memo: Vec<Option<i64>> = vec![None; n * n];
        fn rec(t: &IndecTable, memo: &mut Vec<Option<i64>>, x: usize, y: usize) -> i64 {
            let n = t.len();
            if let Some(v) = memo[x * n + y] {
                return v;
            }
            let ix = &t.indecs[x];
            let v = match ix.tau {
                None => t.indecs[y].dim[ix.vertex] as i64,
                Some(tx) => t.euler(x, y) + rec(t, memo, y, tx),
            };
            memo[x * n + y] = Some(v);
            v
        }
        let mut out = vec![vec![0usize; n]; n];
        for x in 0..n {
            for y in 0..n {
                let v = rec(self, &mut memo, x, y);
                ensure!(v >= 0, "negative hom dimension from recursion at ({x},{y})");
                out[x][y] = v as usize;
            }
        }
        Ok(out)
    }

    /// dim Hom(X, Y) for indecomposables.
    pub fn hom_dim(&self, x: usize, y: usize) -> usize {
        self.hom[x][y]
    }

    /// dim Ext¹(X, Y) = hom(Y, τX) (zero for projective X).
    pub fn ext_dim(&self, x: usize, y: usize) -> usize {
        match self.indecs[x].tau {
            None => 0,
            Some(tx) => self.hom[y][tx],
        }
    }

    /// dim Hom extended additively to iso types.
    pub fn hom_iso(&self, a: &IsoType, b: &IsoType) -> usize {
        let mut s = 0;
        for (x, mx) in a.pairs() {
            for (y, my) in b.pairs() {
                s += mx * my * self.hom[x][y];
            }
        }
        s
    }

    /// dim Ext¹ extended additively to iso types.
    pub fn ext_iso(&self, a: &IsoType, b: &IsoType) -> usize {
        let mut s = 0;
        for (x, mx) in a.pairs() {
            for (y, my) in b.pairs() {
                s += mx * my * self.ext_dim(x, y);
            }
        }
        s
    }

    /// Dimension vector of an iso type.
    pub fn dim_of(&self, t: &IsoType) -> Vec<usize> {
        let n = self.quiver.num_vertices();
        let mut d = vec![0usize; n];
        for (id, m) in t.pairs() {
            for v in 0..n {
                d[v] += m * self.indecs[id].dim[v];
            }
        }
        d
    }

    /// Numeric minimal projective resolution of a non-projective
    /// indecomposable: (multiplicities of P_U, multiplicities of Q_U) per
    /// vertex, derived from hom(U, S_i) and dimension bookkeeping.
    pub fn min_proj_res(&self, u: usize) -> Result<(Vec<usize>, Vec<usize>)> {
        let x = &self.indecs[u];
        if x.is_projective {
            return Err(Error::ProjectiveResolution(x.label.clone()));
        }
        let q = &*self.quiver;
        let n = q.num_vertices();
        let top: Vec<usize> = (0..n).map(|i| self.hom[u][self.simple[i]]).collect();
        let mut dim_q = vec![0i64; n];
        for (i, &m) in top.iter().enumerate() {
            for j in 0..n {
                dim_q[j] += (m as u64 * q.path_count(i, j)) as i64;
            }
        }
        let dim_p: Vec<i64> = (0..n).map(|j| dim_q[j] - x.dim[j] as i64).collect();
        // multiplicities of P_j in P_U: m_j = (dim P)_j − Σ_{i→j} (dim P)_i
        let mut kernel = vec![0usize; n];
        for j in 0..n {
            let mut m = dim_p[j];
            for a in q.in_arrows(j) {
                m -= dim_p[q.arrow(a).0];
            }
            ensure!(m >= 0, "negative projective multiplicity in resolution of {}", x.label);
            kernel[j] = m as usize;
        }
        Ok((kernel, top))
    }

    fn build_resolution(&self, u: usize) -> Result<Resolution> {
        let q = &*self.quiver;
        let f = self.field;
        let n = q.num_vertices();
        let x = &self.indecs[u];
        let rep = &x.rep;
        // top of U: complement of rad U_j = Σ_{i→j} Im U_α
        let mut cover = Vec::new();
        let mut tops = Vec::new();
        for j in 0..n {
            let ims: Vec<Matrix> = q.in_arrows(j).map(|a| rep.map(a).clone()).collect();
            let refs: Vec<&Matrix> = ims.iter().collect();
            let rad = Matrix::hstack(f, rep.dim(j), &refs).column_space();
            let comp = rad.complement();
            for c in 0..comp.cols() {
                cover.push(j);
                tops.push(comp.col_range(c, c + 1));
            }
        }
        let qrep = projective_sum_rep(&self.quiver, f, &cover);
        let partial = Resolution { cover: cover.clone(), tops: tops.clone(), kernel: vec![], kernel_gens: vec![], iota: ProjMap::zero(f, vec![], cover.clone()) };
        let phi: Vec<Matrix> = (0..n).map(|j| partial.cover_at(q, rep, j)).collect();
        ensure!(qrep.is_hom(rep, &phi), "cover map of {} is not a homomorphism", x.label);
        let kers: Vec<Matrix> = (0..n)
            .map(|j| {
                ensure!(phi[j].rank() == rep.dim(j), "cover of {} not surjective at vertex {}", x.label, j);
                Ok(phi[j].kernel())
            })
            .collect::<Result<_>>()?;
        let mut kernel = Vec::new();
        let mut kernel_gens = Vec::new();
        for j in q.topological_order().iter().copied() {
            let ims: Vec<Matrix> = q.in_arrows(j).map(|a| qrep.map(a).mul(&kers[q.arrow(a).0])).collect();
            let refs: Vec<&Matrix> = ims.iter().collect();
            let mut span = Matrix::hstack(f, qrep.dim(j), &refs).column_space();
            for c in 0..kers[j].cols() {
                let v = kers[j].col_range(c, c + 1);
                let ext = Matrix::hstack(f, qrep.dim(j), &[&span, &v]);
                if ext.rank() > span.cols() {
                    span = ext;
                    kernel.push(j);
                    kernel_gens.push(v);
                }
            }
            ensure!(span.cols() == kers[j].cols(), "kernel generators of {} do not span at vertex {j}", x.label);
        }
        let mut coef = Matrix::zeros(f, cover.len(), kernel.len());
        for (t, (&j, g)) in kernel.iter().zip(&kernel_gens).enumerate() {
            for (k, &s) in present(q, &cover, j).iter().enumerate() {
                coef.set(s, t, g.get(k, 0));
            }
        }
        let iota = ProjMap::new(q, kernel.clone(), cover.clone(), coef)?;
        // exactness: ι injective with image ker φ at every vertex
        for j in 0..n {
            let ij = iota.at_vertex(q, j);
            ensure!(ij.rank() == ij.cols() && ij.cols() == kers[j].cols(), "ι of {} not injective onto the kernel at {j}", x.label);
            ensure!(phi[j].mul(&ij).is_zero(), "π∘ι ≠ 0 for {}", x.label);
        }
        // agreement with the numeric resolution
        let (pk, top) = self.min_proj_res(u)?;
        let mut ck = vec![0usize; n];
        let mut cq = vec![0usize; n];
        kernel.iter().for_each(|&j| ck[j] += 1);
        cover.iter().for_each(|&j| cq[j] += 1);
        ensure!(ck == pk && cq == top, "explicit resolution of {} disagrees with the numeric one", x.label);
        Ok(Resolution { cover, tops, kernel, kernel_gens, iota })
    }

    /// Explicit resolution of a non-projective indecomposable.
    pub fn resolution(&self, u: usize) -> Result<&Resolution> {
        self.indecs[u].resolution.as_ref().ok_or_else(|| Error::ProjectiveResolution(self.indecs[u].label.clone()))
    }

    /// Block matrix B_X(M) = Hom(ι_X, M) : ⊕_s M_{i_s} → ⊕_t M_{j_t}.
    pub fn b_matrix(&self, x: usize, m: &Representation) -> Result<Matrix> {
        Ok(self.resolution(x)?.iota.induced(m))
    }

    /// dim Hom(X, M) for every indecomposable X, computed from resolution ranks.
    pub fn hom_profile(&self, m: &Representation) -> Result<Vec<usize>> {
        if m.field() != self.field {
            return Err(Error::FieldMismatch(m.field().p(), self.field.p()));
        }
        (0..self.len())
            .map(|x| {
                let ix = &self.indecs[x];
                if ix.is_projective {
                    return Ok(m.dim(ix.vertex));
                }
                let res = self.resolution(x)?;
                let top: usize = res.cover.iter().map(|&i| m.dim(i)).sum();
                Ok(top - self.b_matrix(x, m)?.rank())
            })
            .collect()
    }

    /// Krull–Schmidt decomposition of a representation.
    pub fn decompose(&self, m: &Representation) -> Result<IsoType> {
        let h = self.hom_profile(m)?;
        self.decompose_profile(&h, m.dims())
    }

    /// Solves Σ_Y mult_Y hom(X,Y) = h_X by back-substitution through the
    /// unitriangular hom table.
    pub fn decompose_profile(&self, h: &[usize], dims: &[usize]) -> Result<IsoType> {
        let n = self.len();
        let mut mult = vec![0usize; n];
        for x in (0..n).rev() {
            let mut v = h[x] as i64;
            for y in x + 1..n {
                v -= (mult[y] * self.hom[x][y]) as i64;
            }
            ensure!(v >= 0, "inconsistent hom profile at {}", self.indecs[x].label);
            mult[x] = v as usize;
        }
        let t = IsoType { mult };
        ensure!(self.dim_of(&t) == dims, "decomposition does not reproduce the dimension vector");
        Ok(t)
    }

    /// Canonical realization of an iso type: the direct sum of the explicit
    /// indecomposables in table order.
    pub fn realize(&self, t: &IsoType) -> Representation {
        let parts: Vec<&Representation> = t.pairs().iter().flat_map(|&(id, m)| std::iter::repeat(&self.indecs[id].rep).take(m)).collect();
        if parts.is_empty() {
            return Representation::zero(self.quiver.clone(), self.field);
        }
        Representation::direct_sum(&parts).expect("same quiver and field")
    }

    /// Parses `P1:2,S1` / `{P1:2, S1:1}` into an iso type.
    pub fn parse_iso(&self, s: &str) -> Result<IsoType> {
        let s = s.trim().trim_start_matches('{').trim_end_matches('}');
        let mut t = IsoType::zero(self.len());
        for tok in s.split(',') {
            let tok = tok.trim();
            if tok.is_empty() {
                continue;
            }
            let (name, m) = match tok.split_once(':') {
                Some((a, b)) => (a.trim(), b.trim().parse::<usize>().map_err(|_| Error::Malformed(format!("bad multiplicity in {tok:?}")))?),
                None => (tok, 1),
            };
            let id = self.by_label(name).ok_or_else(|| Error::Malformed(format!("unknown indecomposable {name:?}")))?;
            t.mult[id] += m;
        }
        Ok(t)
    }

    /// Display string of an iso type.
    pub fn iso_string(&self, t: &IsoType) -> String {
        IsoDisplay(self, t).to_string()
    }

    /// Map from label to multiplicity (for reports).
    pub fn iso_map(&self, t: &IsoType) -> BTreeMap<String, usize> {
        t.pairs().into_iter().map(|(i, m)| (self.indecs[i].label.clone(), m)).collect()
    }
}

/// Builds an explicit indecomposable with dimension vector `root` by BGP
/// reflection functors (falling back to seeded random matrices).
pub fn explicit_indecomposable(quiver: &Arc<Quiver>, field: PrimeField, root: &[usize]) -> Result<Representation> {
    if let Some(r) = reflection_construction(quiver, field, root)? {
        if r.dims() == root && r.hom_dim(&r)? == 1 {
            return Ok(r);
        }
    }
    random_indecomposable(quiver, field, root)
}

fn reflection_construction(quiver: &Arc<Quiver>, field: PrimeField, root: &[usize]) -> Result<Option<Representation>> {
    let q = &**quiver;
    let n = q.num_vertices();
    let seq: Vec<usize> = q.topological_order().iter().rev().copied().collect();
    let mut orient: Vec<Vec<(usize, usize)>> = vec![q.arrows().to_vec()];
    let mut beta: Vec<i64> = root.iter().map(|&x| x as i64).collect();
    let mut steps: Vec<usize> = Vec::new();
    let limit = 4 * n * (n + 1);
    loop {
        let k = seq[steps.len() % n];
        let cur = orient.last().unwrap().clone();
        ensure!(cur.iter().all(|&(s, _)| s != k), "reflection sequence hit a non-sink");
        let is_simple = beta.iter().enumerate().all(|(i, &v)| v == if i == k { 1 } else { 0 });
        if is_simple {
            break;
        }
        // s_k(β) = β − (β, α_k) α_k with the symmetric form of the underlying graph
        let adj: i64 = cur.iter().filter(|&&(s, t)| s == k || t == k).map(|&(s, t)| if s == k { beta[t] } else { beta[s] }).sum();
        beta[k] = adj - beta[k];
        if beta.iter().any(|&v| v < 0) {
            return Ok(None);
        }
        let flipped = cur.iter().map(|&(s, t)| if t == k { (t, s) } else { (s, t) }).collect();
        orient.push(flipped);
        steps.push(k);
        if steps.len() > limit {
            return Ok(None);
        }
    }
    let k = seq[steps.len() % n];
    let mut dims = vec![0usize; n];
    dims[k] = 1;
    let mut maps: Vec<Matrix> = orient.last().unwrap().iter().map(|&(s, t)| Matrix::zeros(field, dims[t], dims[s])).collect();
    for (t, &k) in steps.iter().enumerate().rev() {
        // V lives on orient[t+1], where k is a source; S^-_k yields orient[t].
        let cur = &orient[t + 1];
        let arrows_at_k: Vec<usize> = (0..cur.len()).filter(|&a| cur[a].0 == k).collect();
        let targets: Vec<usize> = arrows_at_k.iter().map(|&a| cur[a].1).collect();
        let blocks: Vec<&Matrix> = arrows_at_k.iter().map(|&a| &maps[a]).collect();
        let wdim: usize = targets.iter().map(|&j| dims[j]).sum();
        let phi = Matrix::vstack(field, dims[k], &blocks);
        let img = phi.column_space();
        let comp = img.complement();
        let basis = Matrix::hstack(field, wdim, &[&img, &comp]);
        let inv = basis.inverse().ok_or_else(|| Error::Invariant("singular cokernel basis".into()))?;
        let proj = inv.row_range(img.cols(), wdim);
        let new_dim = comp.cols();
        let mut off = 0;
        for (&a, &j) in arrows_at_k.iter().zip(&targets) {
            maps[a] = proj.col_range(off, off + dims[j]);
            off += dims[j];
        }
        dims[k] = new_dim;
        // arrows not at k keep their matrices; reshape arrows at k done above
        debug_assert!(orient[t].iter().enumerate().all(|(a, &(s, tt))| maps[a].rows() == dims[tt] && maps[a].cols() == dims[s]));
    }
    Ok(Some(Representation::new(quiver.clone(), field, dims, maps)?))
}

fn random_indecomposable(quiver: &Arc<Quiver>, field: PrimeField, root: &[usize]) -> Result<Representation> {
    let seed = root.iter().fold(field.p() as u64, |h, &x| h.wrapping_mul(1_000_003).wrapping_add(x as u64));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..200 {
        let maps = quiver
            .arrows()
            .iter()
            .map(|&(s, t)| Matrix::from_vec(field, root[t], root[s], (0..root[t] * root[s]).map(|_| rng.gen_range(0..field.p())).collect()))
            .collect();
        let r = Representation::new(quiver.clone(), field, root.to_vec(), maps)?;
        if r.hom_dim(&r)? == 1 {
            return Ok(r);
        }
    }
    Err(Error::Invariant(format!("no indecomposable found for dimension vector {root:?}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table(spec: &str, p: u32) -> IndecTable {
        IndecTable::new(Arc::new(Quiver::parse(spec).unwrap()), PrimeField::new(p).unwrap()).unwrap()
    }

    #[test]
    fn a2_table() {
        let t = table("1->2", 3);
        let dims: Vec<Vec<usize>> = t.indecs().iter().map(|x| x.dim.clone()).collect();
        assert_eq!(dims, vec![vec![0, 1], vec![1, 1], vec![1, 0]]);
        let labels: Vec<&str> = t.indecs().iter().map(|x| x.label.as_str()).collect();
        assert_eq!(labels, vec!["S2", "P1", "S1"]);
        assert_eq!(t.ar_arrows(), &[(0, 1), (1, 2)]);
        let s1 = t.simple(0);
        let s2 = t.simple(1);
        assert_eq!(t.indec(s1).tau, Some(s2));
        assert_eq!(t.ext_dim(s1, s2), 1);
        assert_eq!(t.hom_dim(s1, s1), 1);
        let (pk, pq) = t.min_proj_res(s1).unwrap();
        assert_eq!((pk, pq), (vec![0, 1], vec![1, 0]));
        assert!(matches!(t.min_proj_res(t.projective(0)), Err(Error::ProjectiveResolution(_))));
    }

    #[test]
    fn counts_and_labels() {
        let a3 = table("1->2, 2->3", 2);
        assert_eq!(a3.len(), 6);
        let d4 = table("1->4, 2->4, 3->4", 2);
        assert_eq!(d4.len(), 12);
        // arrows P4 -> P1, P4 -> P2, P4 -> P3
        let q = d4.quiver().clone();
        let c = q.vertex_index("4").unwrap();
        for l in ["1", "2", "3"] {
            let i = q.vertex_index(l).unwrap();
            assert!(d4.ar_arrows().contains(&(d4.projective(c), d4.projective(i))));
        }
        let e6 = table("1->2, 2->3, 3->4, 4->5, 3->6", 2);
        assert_eq!(e6.len(), 36);
        let labels: std::collections::BTreeSet<&str> = d4.indecs().iter().map(|x| x.label.as_str()).collect();
        assert_eq!(labels.len(), 12);
    }

    #[test]
    fn a3_resolutions() {
        let t = table("1->2, 2->3", 5);
        // U_{i,j} has resolution (P_{j+1}, P_i)
        for i in 0..3 {
            for j in i..3 {
                let dim: Vec<usize> = (0..3).map(|v| (i <= v && v <= j) as usize).collect();
                let id = t.by_dim(&dim).unwrap();
                if j == 2 {
                    assert!(t.indec(id).is_projective);
                    continue;
                }
                let (pk, pq) = t.min_proj_res(id).unwrap();
                let mut ek = vec![0; 3];
                ek[j + 1] = 1;
                let mut eq = vec![0; 3];
                eq[i] = 1;
                assert_eq!((pk, pq), (ek, eq));
            }
        }
        let t = table("1->2, 3->2", 5);
        let i2 = t.by_dim(&[1, 1, 1]).unwrap();
        assert_eq!(t.min_proj_res(i2).unwrap(), (vec![0, 1, 0], vec![1, 0, 1]));
        assert_eq!(t.indec(i2).label, "I2");
    }

    #[test]
    fn decompose_examples() {
        let t = table("1->2", 7);
        let f = t.field();
        let q = t.quiver().clone();
        let m = Representation::new(q.clone(), f, vec![3, 2], vec![Matrix::from_rows(f, &[vec![1, 0, 0], vec![0, 1, 0]])]).unwrap();
        let d = t.decompose(&m).unwrap();
        assert_eq!(t.iso_string(&d), "{P1:2, S1:1}");
        let p1 = t.realize(&IsoType::single(t.len(), t.projective(0)));
        assert_eq!(t.iso_string(&t.decompose(&p1).unwrap()), "{P1:1}");
    }
}
