//! The category H_Q of embeddings between projective kQ-modules, the quiver
//! Q̂ of its endomorphism algebra B_Q, Cartan and Euler data of B_Q, and the
//! functor Λ : M ↦ M̂ with M̂(P ⊂ Q) = Im(Hom(Q, M) → Hom(P, M)).
//!
//! A B_Q-module is a contravariant functor on H_Q: an arrow [a] → [b] of Q̂
//! corresponds to a morphism obj_b → obj_a of H_Q and acts F(a) → F(b).

use crate::ar::{IndecTable, IsoType};
use crate::error::{ensure, Error, Result};
use crate::matrix::Matrix;
use crate::projmap::{present, ProjMap};
use crate::quiver::{topological_order_by, Quiver};
use crate::rep::Representation;
use crate::roots::rational_inverse;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::sync::Arc;

/// An indecomposable object of H_Q.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum HqObject {
    /// The minimal resolution (P_U ⊂ Q_U) of a non-projective indecomposable.
    Res(usize),
    /// The identity object (P_i = P_i) at a vertex of Q.
    Id(usize),
}

/// A morphism (φ, ψ) of H_Q: φ on the sub-projectives, ψ on the ambient
/// projectives, with ψ ∘ ι_src = ι_dst ∘ φ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HqMorphism {
    pub phi: ProjMap,
    pub psi: ProjMap,
}

impl HqMorphism {
    /// `self ∘ first`.
    pub fn after(&self, first: &HqMorphism) -> HqMorphism {
        HqMorphism { phi: self.phi.after(&first.phi), psi: self.psi.after(&first.psi) }
    }

    /// Coefficients of φ then ψ, flattened row-major.
    fn flatten(&self) -> Vec<u32> {
        let mut v = Vec::new();
        for m in [&self.phi.coef, &self.psi.coef] {
            for r in 0..m.rows() {
                for c in 0..m.cols() {
                    v.push(m.get(r, c));
                }
            }
        }
        v
    }
}

/// An object (P ⊂ Q) of the morphism category given numerically: the
/// projective multiplicity vectors of P and Q plus the iso type of the cokernel.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairData {
    pub sub: IsoType,
    pub top: IsoType,
    pub coker: IsoType,
}

/// A relation of B_Q between two vertices, for display.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct Relation {
    pub from: usize,
    pub to: usize,
    /// Number of independent relations (dim Ext² between the simples).
    pub count: usize,
    /// The Q̂-paths from `from` to `to`, as arrow sequences.
    pub paths: Vec<Vec<usize>>,
    /// "zero" when a single path is killed, "commutativity" otherwise.
    pub kind: String,
}

/// The quiver Q̂ of B_Q together with the H_Q data realizing its arrows.
#[derive(Clone, Debug)]
pub struct QHat {
    table: Arc<IndecTable>,
    objects: Vec<HqObject>,
    quiver: Arc<Quiver>,
    arrow_maps: Vec<HqMorphism>,
    cartan: Vec<Vec<i64>>,
    euler: Vec<Vec<i64>>,
    relations: Vec<Relation>,
}

/// The representation M̂ of Q̂ with explicit bases: at each vertex x the
/// basis `bases[x]` of M̂(x) ⊂ Hom(P_x, M) = ⊕_t M_{j_t}.
#[derive(Clone, Debug)]
pub struct MHat {
    pub rep: Representation,
    pub bases: Vec<Matrix>,
    /// B_x(M) for every vertex: the maps whose images are the values.
    pub b_mats: Vec<Matrix>,
}

impl QHat {
    /// Q̂ with deterministic lifts of the irreducible maps.
    pub fn new(table: Arc<IndecTable>) -> Result<Self> {
        Self::build(table, None)
    }

    /// Q̂ whose arrow morphisms are perturbed by seeded null-homotopic terms
    /// and nonzero scalars (a different but equivalent choice of lifts).
    pub fn with_perturbed_lifts(table: Arc<IndecTable>, seed: u64) -> Result<Self> {
        Self::build(table, Some(seed))
    }

    fn build(table: Arc<IndecTable>, seed: Option<u64>) -> Result<Self> {
        let t = &*table;
        let q = t.quiver().clone();
        let f = t.field();
        let n = q.num_vertices();
        let mut created: Vec<HqObject> = (0..n).map(HqObject::Id).collect();
        created.extend(t.non_projectives().into_iter().map(HqObject::Res));
        let index_of = |o: HqObject| created.iter().position(|&x| x == o).expect("object exists");
        let mut arrows: Vec<(usize, usize)> = Vec::new();
        let mut maps: Vec<HqMorphism> = Vec::new();
        // [U] → [V] for each AR arrow V → U between non-projectives
        for &(v, u) in t.ar_arrows() {
            if t.indec(v).is_projective || t.indec(u).is_projective {
                continue;
            }
            arrows.push((index_of(HqObject::Res(u)), index_of(HqObject::Res(v))));
            maps.push(lift_irreducible(t, v, u)?);
        }
        for i in 0..n {
            // [i] → [S_i] when S_i is non-projective: Res(S_i) → Id(i) is (ι_{S_i}, id)
            let s = t.simple(i);
            if !t.indec(s).is_projective {
                let res = t.resolution(s)?;
                ensure!(res.cover == vec![i], "projective cover of S_{} is not P_{}", q.label(i), q.label(i));
                arrows.push((index_of(HqObject::Id(i)), index_of(HqObject::Res(s))));
                maps.push(HqMorphism { phi: res.iota.clone(), psi: ProjMap::identity(f, vec![i]) });
            }
            // [τ⁻¹S_i] → [i] when S_i is non-injective: Id(i) → Res(X) is (id, ι_X)
            if let Some(x) = t.indec(s).tau_inv {
                let res = t.resolution(x)?;
                ensure!(res.kernel == vec![i], "P_X of τ⁻¹S_{} is not P_{}", q.label(i), q.label(i));
                arrows.push((index_of(HqObject::Res(x)), index_of(HqObject::Id(i))));
                maps.push(HqMorphism { phi: ProjMap::identity(f, vec![i]), psi: res.iota.clone() });
            }
        }
        // canonical vertex order: topological, ties by creation order
        let order = topological_order_by(created.len(), &arrows, |v| v).ok_or_else(|| Error::Invariant("Q̂ has a cycle".into()))?;
        let mut pos = vec![0usize; created.len()];
        for (k, &v) in order.iter().enumerate() {
            pos[v] = k;
        }
        let objects: Vec<HqObject> = order.iter().map(|&v| created[v]).collect();
        let mut paired: Vec<((usize, usize), HqMorphism)> = arrows.iter().map(|&(a, b)| (pos[a], pos[b])).zip(maps).collect();
        paired.sort_by(|x, y| x.0.cmp(&y.0));
        let arrows: Vec<(usize, usize)> = paired.iter().map(|p| p.0).collect();
        let mut arrow_maps: Vec<HqMorphism> = paired.into_iter().map(|p| p.1).collect();
        if let Some(seed) = seed {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for (k, &(a, b)) in arrows.iter().enumerate() {
                arrow_maps[k] = perturb(t, &objects[b], &objects[a], &arrow_maps[k], &mut rng)?;
            }
        }
        let labels: Vec<String> = objects.iter().map(|o| object_label(t, *o)).collect();
        let quiver = Arc::new(Quiver::new(labels, arrows)?);
        for (k, &(a, b)) in quiver.arrows().iter().enumerate() {
            ensure!(is_morphism(t, objects[b], objects[a], &arrow_maps[k]), "arrow {k} of Q̂ is not realized by an H_Q morphism");
        }
        let mut qh = QHat { table, objects, quiver, arrow_maps, cartan: vec![], euler: vec![], relations: vec![] };
        qh.compute_cartan_euler()?;
        Ok(qh)
    }

    pub fn table(&self) -> &Arc<IndecTable> {
        &self.table
    }
    pub fn quiver(&self) -> &Arc<Quiver> {
        &self.quiver
    }
    pub fn objects(&self) -> &[HqObject] {
        &self.objects
    }
    pub fn num_vertices(&self) -> usize {
        self.objects.len()
    }
    pub fn arrow_morphism(&self, a: usize) -> &HqMorphism {
        &self.arrow_maps[a]
    }
    pub fn cartan(&self) -> &[Vec<i64>] {
        &self.cartan
    }
    pub fn euler_matrix(&self) -> &[Vec<i64>] {
        &self.euler
    }
    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }
    pub fn vertex_of(&self, o: HqObject) -> Option<usize> {
        self.objects.iter().position(|&x| x == o)
    }
    pub fn vertex_by_label(&self, l: &str) -> Option<usize> {
        self.quiver.vertex_index(l)
    }

    /// Number of independent relations of B_Q.
    pub fn relation_count(&self) -> usize {
        self.relations.iter().map(|r| r.count).sum()
    }

    /// Numeric data (P ⊂ Q, cokernel) of an H_Q object.
    pub fn pair_data(&self, o: HqObject) -> PairData {
        pair_data(&self.table, o)
    }

    /// dim Hom_{H_Q}(a, b) = hom(S, P) + hom(S/R, Q/P) for a = (R ⊂ S), b = (P ⊂ Q).
    pub fn hq_hom_dim(&self, a: &PairData, b: &PairData) -> usize {
        let t = &self.table;
        t.hom_iso(&a.top, &b.sub) + t.hom_iso(&a.coker, &b.coker)
    }

    /// hq_hom_dim extended to direct sums of objects with multiplicities.
    pub fn hq_hom_dim_sum(&self, a: &[(HqObject, usize)], b: &[(HqObject, usize)]) -> usize {
        let mut s = 0;
        for &(x, mx) in a {
            for &(y, my) in b {
                s += mx * my * self.hq_hom_dim(&self.pair_data(x), &self.pair_data(y));
            }
        }
        s
    }

    /// Basis of Hom_{H_Q}(a, b) obtained by solving ψ ι_a = ι_b φ in the
    /// support-constrained coefficients (an independent oracle for the formula).
    pub fn hq_hom_basis(&self, a: HqObject, b: HqObject) -> Vec<HqMorphism> {
        hom_space(&self.table, a, b)
    }

    /// The Euler form of B_Q on dimension vectors over Q̂.
    pub fn euler_form(&self, x: &[i64], y: &[i64]) -> i64 {
        let n = self.num_vertices();
        let mut s = 0;
        for a in 0..n {
            for b in 0..n {
                s += x[a] * self.euler[a][b] * y[b];
            }
        }
        s
    }

    /// Dimension vector of the projective B_Q-module Hom(−, X) for a general pair X.
    pub fn projective_dim(&self, x: &PairData) -> Vec<i64> {
        self.objects.iter().map(|&o| self.hq_hom_dim(&self.pair_data(o), x) as i64).collect()
    }

    fn compute_cartan_euler(&mut self) -> Result<()> {
        let n = self.num_vertices();
        let data: Vec<PairData> = self.objects.iter().map(|&o| self.pair_data(o)).collect();
        let cartan: Vec<Vec<i64>> = (0..n).map(|x| (0..n).map(|y| self.hq_hom_dim(&data[x], &data[y]) as i64).collect()).collect();
        let ct: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| cartan[j][i]).collect()).collect();
        let inv = rational_inverse(&ct).ok_or_else(|| Error::Invariant("Cartan matrix of B_Q is singular".into()))?;
        let mut euler = vec![vec![0i64; n]; n];
        for i in 0..n {
            for j in 0..n {
                ensure!(inv[i][j].is_integer(), "Cartan matrix of B_Q is not invertible over the integers");
                euler[i][j] = inv[i][j].to_integer() as i64;
            }
        }
        self.cartan = cartan;
        self.euler = euler;
        // relations from Ext²(S_a, S_b) = E[a][b] − δ_ab + #arrows(a→b)
        let mut rels = Vec::new();
        for a in 0..n {
            for b in 0..n {
                let arrows = self.quiver.arrows().iter().filter(|&&(s, t)| s == a && t == b).count() as i64;
                let ext2 = self.euler[a][b] - (a == b) as i64 + arrows;
                ensure!(ext2 >= 0, "negative Ext² between simples of B_Q at ({a},{b})");
                if ext2 > 0 {
                    let paths = self.paths(a, b).into_iter().filter(|p| p.len() >= 2).collect::<Vec<_>>();
                    let kind = if paths.len() == 1 { "zero" } else { "commutativity" };
                    rels.push(Relation { from: a, to: b, count: ext2 as usize, paths, kind: kind.into() });
                }
            }
        }
        self.relations = rels;
        Ok(())
    }

    /// All paths from `a` to `b` in Q̂ as arrow sequences (the trivial path
    /// for a = b).
    pub fn paths(&self, a: usize, b: usize) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut stack = vec![(a, Vec::<usize>::new())];
        while let Some((v, p)) = stack.pop() {
            if v == b {
                out.push(p.clone());
            }
            for (k, &(s, t)) in self.quiver.arrows().iter().enumerate().rev() {
                if s == v {
                    let mut np = p.clone();
                    np.push(k);
                    stack.push((t, np));
                }
            }
        }
        out.sort();
        out
    }

    /// The H_Q morphism obj_b → obj_a realized by a Q̂-path from a to b.
    pub fn path_morphism(&self, a: usize, path: &[usize]) -> HqMorphism {
        let t = &self.table;
        let f = t.field();
        let pd = self.pair_data(self.objects[a]);
        let flat = |x: &IsoType| -> Vec<usize> { multiset_vertices(t, x) };
        let mut m = HqMorphism { phi: ProjMap::identity(f, flat(&pd.sub)), psi: ProjMap::identity(f, flat(&pd.top)) };
        for &k in path {
            m = m.after(&self.arrow_maps[k]);
        }
        m
    }

    /// Dimension vector of M̂ for an iso type M: (dim M)_i at [i] and
    /// hom(Q_U, M) − hom(U, M) at [U].
    pub fn mhat_dim(&self, m: &IsoType) -> Vec<usize> {
        let t = &self.table;
        let d = t.dim_of(m);
        self.objects
            .iter()
            .map(|&o| match o {
                HqObject::Id(i) => d[i],
                HqObject::Res(u) => {
                    let top: usize = t.resolution(u).expect("non-projective").cover.iter().map(|&i| d[i]).sum();
                    top - t.hom_iso(&IsoType::single(t.len(), u), m)
                }
            })
            .collect()
    }

    /// The explicit representation M̂ = Λ(M) of Q̂.
    pub fn mhat_explicit(&self, m: &Representation) -> Result<MHat> {
        let t = &self.table;
        if m.field() != t.field() {
            return Err(Error::FieldMismatch(m.field().p(), t.field().p()));
        }
        let b_mats: Vec<Matrix> = self.objects.iter().map(|&o| object_iota(t, o).induced(m)).collect();
        let bases: Vec<Matrix> = b_mats.iter().map(|b| b.column_space()).collect();
        let dims: Vec<usize> = bases.iter().map(|b| b.cols()).collect();
        let mut maps = Vec::with_capacity(self.quiver.num_arrows());
        for (k, &(a, b)) in self.quiver.arrows().iter().enumerate() {
            let ind = self.arrow_maps[k].phi.induced(m);
            let img = ind.mul(&bases[a]);
            let x = bases[b].solve(&img).ok_or_else(|| Error::Invariant(format!("arrow {k} does not map M̂ values into each other")))?;
            maps.push(x);
        }
        let rep = Representation::new(self.quiver.clone(), t.field(), dims, maps)?;
        Ok(MHat { rep, bases, b_mats })
    }

    /// True iff at every vertex [U] the incoming arrow maps are jointly
    /// surjective and the outgoing ones jointly injective.
    pub fn check_lambda_image(&self, f: &Representation) -> bool {
        let q = &self.quiver;
        let field = f.field();
        (0..self.num_vertices()).all(|x| {
            if matches!(self.objects[x], HqObject::Id(_)) {
                return true;
            }
            let d = f.dim(x);
            let ins: Vec<&Matrix> = q.in_arrows(x).map(|a| f.map(a)).collect();
            let outs: Vec<&Matrix> = q.out_arrows(x).map(|a| f.map(a)).collect();
            let surj = Matrix::hstack(field, d, &ins).rank() == d;
            let inj = Matrix::vstack(field, d, &outs).rank() == d;
            surj && inj
        })
    }

    /// The restriction res F of a Q̂-representation to a kQ-module: the value
    /// at vertex i is F([i]) and an arrow i → j of Q acts through the H_Q
    /// morphism Id(j) → Id(i) given by the path.
    pub fn restrict(&self, f: &Representation) -> Result<Representation> {
        let t = &self.table;
        let q = t.quiver();
        let field = t.field();
        let xs: Vec<usize> = (0..q.num_vertices()).map(|i| self.vertex_of(HqObject::Id(i)).expect("vertex for i")).collect();
        let mut maps = Vec::with_capacity(q.num_arrows());
        for &(i, j) in q.arrows() {
            let one = Matrix::identity(field, 1);
            let g = HqMorphism { phi: ProjMap { src: vec![j], dst: vec![i], coef: one.clone() }, psi: ProjMap { src: vec![j], dst: vec![i], coef: one } };
            maps.push(self.evaluate(&g, xs[i], xs[j], f)?);
        }
        Representation::new(q.clone(), field, xs.iter().map(|&x| f.dim(x)).collect(), maps)
    }

    /// Ext¹(M̂, F) for M of iso type `m`: Σ over non-projective summands U of
    /// the cokernel dimension of ⊕_s F([i_s]) → F([U]) induced by the
    /// canonical morphism Res(U) → Id(Q_U).
    pub fn ext1_from_mhat(&self, m: &IsoType, f: &Representation) -> Result<usize> {
        let t = &self.table;
        let mut total = 0;
        for (u, mult) in m.pairs() {
            if t.indec(u).is_projective {
                continue;
            }
            total += mult * self.ext1_single(u, f)?;
        }
        Ok(total)
    }

    fn ext1_single(&self, u: usize, f: &Representation) -> Result<usize> {
        let t = &self.table;
        let field = t.field();
        let res = t.resolution(u)?;
        let xu = self.vertex_of(HqObject::Res(u)).expect("vertex for U");
        let mut cols = Vec::new();
        for (s, &i) in res.cover.iter().enumerate() {
            let xi = self.vertex_of(HqObject::Id(i)).expect("vertex for i");
            let mut psi = Matrix::zeros(field, 1, res.cover.len());
            psi.set(0, s, 1);
            let phi = res.iota.coef.select_rows(&[s]);
            let g = HqMorphism { phi: ProjMap { src: res.kernel.clone(), dst: vec![i], coef: phi }, psi: ProjMap { src: res.cover.clone(), dst: vec![i], coef: psi } };
            cols.push(self.evaluate(&g, xi, xu, f)?);
        }
        let refs: Vec<&Matrix> = cols.iter().collect();
        let d = f.dim(xu);
        Ok(d - Matrix::hstack(field, d, &refs).rank())
    }

    /// Evaluates a representation F of Q̂ on an H_Q morphism obj_b → obj_a by
    /// writing it as a combination of Q̂-path morphisms from a to b.
    pub fn evaluate(&self, g: &HqMorphism, a: usize, b: usize, f: &Representation) -> Result<Matrix> {
        let field = f.field();
        let paths = self.paths(a, b);
        let morphs: Vec<HqMorphism> = paths.iter().map(|p| self.path_morphism(a, p)).collect();
        let target = g.flatten();
        let len = target.len();
        let mut sys = Matrix::zeros(field, len, morphs.len());
        for (c, m) in morphs.iter().enumerate() {
            for (r, v) in m.flatten().into_iter().enumerate() {
                sys.set(r, c, v);
            }
        }
        let rhs = Matrix::from_vec(field, len, 1, target);
        let lam = sys.solve(&rhs).ok_or_else(|| Error::Invariant(format!("morphism {a}<-{b} is not in the span of Q̂-paths")))?;
        let mut out = Matrix::zeros(field, f.dim(b), f.dim(a));
        for (c, p) in paths.iter().enumerate() {
            let l = lam.get(c, 0);
            if l == 0 {
                continue;
            }
            let mut m = Matrix::identity(field, f.dim(a));
            for &k in p {
                m = f.map(k).mul(&m);
            }
            out = out.add(&m.scale(l));
        }
        Ok(out)
    }

    /// Label-to-vertex parsing of a Q̂ dimension vector: either a positional
    /// list in canonical order or `[label]=value` pairs (unlisted vertices 0).
    pub fn parse_dim(&self, s: &str) -> Result<Vec<usize>> {
        parse_dim_vector(&self.quiver, s)
    }
}

/// Parses a dimension vector for `q`: positional `1,0,2` or labeled `a=1,b=2`.
pub fn parse_dim_vector(q: &Quiver, s: &str) -> Result<Vec<usize>> {
    let n = q.num_vertices();
    let toks: Vec<&str> = s.split(',').map(|x| x.trim()).filter(|x| !x.is_empty()).collect();
    if toks.iter().all(|t| !t.contains('=')) {
        if toks.len() != n {
            return Err(Error::DimensionMismatch(format!("expected {n} entries, got {}", toks.len())));
        }
        return toks.iter().map(|t| t.parse::<usize>().map_err(|_| Error::Malformed(format!("bad entry {t:?}")))).collect();
    }
    let mut d = vec![0usize; n];
    for t in toks {
        let (l, v) = t.split_once('=').ok_or_else(|| Error::Malformed(format!("mixed positional and labeled entries at {t:?}")))?;
        let l = l.trim();
        let idx = q.vertex_index(l).ok_or_else(|| Error::Malformed(format!("unknown vertex {l:?}")))?;
        d[idx] = v.trim().parse().map_err(|_| Error::Malformed(format!("bad entry {t:?}")))?;
    }
    Ok(d)
}

fn multiset_vertices(t: &IndecTable, x: &IsoType) -> Vec<usize> {
    let mut v = Vec::new();
    for (id, m) in x.pairs() {
        for _ in 0..m {
            v.push(t.indec(id).vertex);
        }
    }
    v
}

/// Label of an H_Q object as a Q̂ vertex, e.g. `[1]` or `[S1]`.
pub fn object_label(t: &IndecTable, o: HqObject) -> String {
    match o {
        HqObject::Id(i) => format!("[{}]", t.quiver().label(i)),
        HqObject::Res(u) => format!("[{}]", t.indec(u).label),
    }
}

/// The embedding ι of an object (identity for Id objects).
pub fn object_iota(t: &IndecTable, o: HqObject) -> ProjMap {
    match o {
        HqObject::Id(i) => ProjMap::identity(t.field(), vec![i]),
        HqObject::Res(u) => t.resolution(u).expect("non-projective").iota.clone(),
    }
}

fn pair_data(t: &IndecTable, o: HqObject) -> PairData {
    let n = t.len();
    let proj = |vs: &[usize]| {
        let mut x = IsoType::zero(n);
        for &v in vs {
            x.mult[t.projective(v)] += 1;
        }
        x
    };
    match o {
        HqObject::Id(i) => PairData { sub: proj(&[i]), top: proj(&[i]), coker: IsoType::zero(n) },
        HqObject::Res(u) => {
            let r = t.resolution(u).expect("non-projective");
            PairData { sub: proj(&r.kernel), top: proj(&r.cover), coker: IsoType::single(n, u) }
        }
    }
}

fn is_morphism(t: &IndecTable, src: HqObject, dst: HqObject, m: &HqMorphism) -> bool {
    let is = object_iota(t, src);
    let id = object_iota(t, dst);
    m.phi.src == is.src && m.phi.dst == id.src && m.psi.src == is.dst && m.psi.dst == id.dst && m.psi.after(&is) == id.after(&m.phi)
}

/// Lifts the (one-dimensional) space Hom(V, U) of an irreducible map to a
/// morphism Res(V) → Res(U).
fn lift_irreducible(t: &IndecTable, v: usize, u: usize) -> Result<HqMorphism> {
    let q = t.quiver();
    let rv = &t.indec(v).rep;
    let ru = &t.indec(u).rep;
    let basis = rv.hom_basis(ru)?;
    ensure!(basis.len() == 1, "Hom({}, {}) has dimension {} for an AR arrow", t.indec(v).label, t.indec(u).label, basis.len());
    let fm = &basis[0];
    let resv = t.resolution(v)?;
    let resu = t.resolution(u)?;
    let field = t.field();
    // ψ: cover generators of V map to preimages of f(u_s) under the cover of U
    let mut psi = Matrix::zeros(field, resu.cover.len(), resv.cover.len());
    for (s, &i) in resv.cover.iter().enumerate() {
        let x = fm[i].mul(&resv.tops[s]);
        let cu = resu.cover_at(q, ru, i);
        let y = cu.solve(&x).ok_or_else(|| Error::Invariant("cover of U does not reach f(top)".into()))?;
        for (k, &s2) in present(q, &resu.cover, i).iter().enumerate() {
            psi.set(s2, s, y.get(k, 0));
        }
    }
    let psi = ProjMap::new(q, resv.cover.clone(), resu.cover.clone(), psi)?;
    // φ: kernel generators of V map into the kernel of U through ψ
    let mut phi = Matrix::zeros(field, resu.kernel.len(), resv.kernel.len());
    for (tt, &j) in resv.kernel.iter().enumerate() {
        let img = psi.at_vertex(q, j).mul(&resv.kernel_gens[tt]);
        let z = resu.iota.at_vertex(q, j).solve(&img).ok_or_else(|| Error::Invariant("lift of an irreducible map leaves the kernel".into()))?;
        for (k, &t2) in present(q, &resu.kernel, j).iter().enumerate() {
            phi.set(t2, tt, z.get(k, 0));
        }
    }
    let phi = ProjMap::new(q, resv.kernel.clone(), resu.kernel.clone(), phi)?;
    let m = HqMorphism { phi, psi };
    ensure!(is_morphism(t, HqObject::Res(v), HqObject::Res(u), &m), "lift of {} -> {} does not commute", t.indec(v).label, t.indec(u).label);
    Ok(m)
}

fn random_projmap(t: &IndecTable, src: &[usize], dst: &[usize], rng: &mut ChaCha8Rng) -> ProjMap {
    let q = t.quiver();
    let f = t.field();
    let mut c = Matrix::zeros(f, dst.len(), src.len());
    for b in 0..dst.len() {
        for a in 0..src.len() {
            if q.path_count(dst[b], src[a]) > 0 {
                c.set(b, a, rng.gen_range(0..f.p()));
            }
        }
    }
    ProjMap { src: src.to_vec(), dst: dst.to_vec(), coef: c }
}

/// (φ, ψ) ↦ λ(φ, ψ) + (h ι_src, ι_dst h) for a random h: Q_src → P_dst. The
/// added term factors through Id objects, so the arrow class modulo rad² is kept.
fn perturb(t: &IndecTable, src: &HqObject, dst: &HqObject, m: &HqMorphism, rng: &mut ChaCha8Rng) -> Result<HqMorphism> {
    let is = object_iota(t, *src);
    let id = object_iota(t, *dst);
    // between an Id object and anything, h only rescales the arrow itself, so
    // it is left out to keep the arrow nonzero
    let h = if matches!(src, HqObject::Id(_)) || matches!(dst, HqObject::Id(_)) {
        ProjMap::zero(t.field(), is.dst.clone(), id.src.clone())
    } else {
        random_projmap(t, &is.dst, &id.src, rng)
    };
    let lam = rng.gen_range(1..t.field().p());
    let phi = m.phi.scale(lam).add(&h.after(&is));
    let psi = m.psi.scale(lam).add(&id.after(&h));
    let out = HqMorphism { phi, psi };
    ensure!(is_morphism(t, *src, *dst, &out), "perturbed lift is not a morphism");
    Ok(out)
}

/// Basis of Hom_{H_Q}(a, b) by solving the commutativity system.
fn hom_space(t: &IndecTable, a: HqObject, b: HqObject) -> Vec<HqMorphism> {
    let q = t.quiver();
    let f = t.field();
    let ia = object_iota(t, a);
    let ib = object_iota(t, b);
    // unknowns: φ[bb][aa] with path ib.src[bb] → ia.src[aa]; ψ[bb][aa] with path ib.dst[bb] → ia.dst[aa]
    let mut unk: Vec<(bool, usize, usize)> = Vec::new();
    for bb in 0..ib.src.len() {
        for aa in 0..ia.src.len() {
            if q.path_count(ib.src[bb], ia.src[aa]) > 0 {
                unk.push((false, bb, aa));
            }
        }
    }
    for bb in 0..ib.dst.len() {
        for aa in 0..ia.dst.len() {
            if q.path_count(ib.dst[bb], ia.dst[aa]) > 0 {
                unk.push((true, bb, aa));
            }
        }
    }
    // equations: (ψ ι_a − ι_b φ)[r][c] = 0 for r over ib.dst, c over ia.src
    let rows = ib.dst.len() * ia.src.len();
    let mut sys = Matrix::zeros(f, rows, unk.len());
    for (k, &(is_psi, bb, aa)) in unk.iter().enumerate() {
        for c in 0..ia.src.len() {
            if is_psi {
                // ψ[bb][aa] ι_a[aa][c] contributes to row (bb, c)
                let v = ia.coef.get(aa, c);
                let r = bb * ia.src.len() + c;
                sys.set(r, k, f.add(sys.get(r, k), v));
            }
        }
        if !is_psi {
            // −ι_b[r][bb] φ[bb][aa] contributes to row (r, aa)
            for r in 0..ib.dst.len() {
                let v = ib.coef.get(r, bb);
                let row = r * ia.src.len() + aa;
                sys.set(row, k, f.sub(sys.get(row, k), v));
            }
        }
    }
    let ker = sys.kernel();
    (0..ker.cols())
        .map(|j| {
            let mut phi = Matrix::zeros(f, ib.src.len(), ia.src.len());
            let mut psi = Matrix::zeros(f, ib.dst.len(), ia.dst.len());
            for (k, &(is_psi, bb, aa)) in unk.iter().enumerate() {
                if is_psi {
                    psi.set(bb, aa, ker.get(k, j));
                } else {
                    phi.set(bb, aa, ker.get(k, j));
                }
            }
            HqMorphism { phi: ProjMap { src: ia.src.clone(), dst: ib.src.clone(), coef: phi }, psi: ProjMap { src: ia.dst.clone(), dst: ib.dst.clone(), coef: psi } }
        })
        .collect()
}

impl MHat {
    /// The subrepresentation Û ⊂ M̂ of a point U ⊂ M (one column basis per
    /// vertex of Q), in the coordinates of `self.rep`.
    pub fn sub_point(&self, qh: &QHat, u: &[Matrix]) -> Result<Vec<Matrix>> {
        let t = qh.table();
        let field = t.field();
        qh.objects
            .iter()
            .enumerate()
            .map(|(x, &o)| {
                let iota = object_iota(t, o);
                let blocks: Vec<usize> = iota.dst.iter().map(|&i| u[i].cols()).collect();
                let rows: Vec<usize> = iota.dst.iter().map(|&i| u[i].rows()).collect();
                let diag = Matrix::from_blocks(field, &rows, &blocks, |r, c| (r == c).then(|| u[iota.dst[r]].clone()));
                let img = self.b_mats[x].mul(&diag);
                let z = self.bases[x].solve(&img).ok_or_else(|| Error::Invariant("image of a subrepresentation escapes M̂".into()))?;
                Ok(z.column_space())
            })
            .collect()
    }
}
