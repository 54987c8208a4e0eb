//! Points of quiver Grassmannians Gr_e(M) over prime fields.
//!
//! Enumeration is guided: vertices are processed in a topological order
//! (sinks last), and at each vertex only subspaces containing the span of the
//! images of the already-chosen subspaces are enumerated. In counting mode the
//! sinks, which constrain nothing further, contribute a product of Gaussian
//! binomials. Work is split over a frontier of partial assignments for
//! parallel evaluation, and a shared node budget bounds the search.

use crate::ar::{IndecTable, IsoType};
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::par::Exec;
use crate::quiver::Quiver;
use crate::rep::Representation;
use crate::subspace::{qbinomial, superspaces};
use std::collections::BTreeMap;
use std::sync::atomic::{AtomicU64, Ordering};

/// A point of Gr_e(M): one column basis per vertex.
pub type Point = Vec<Matrix>;

/// Enumeration options.
#[derive(Clone, Debug, Default)]
pub struct GrassOptions {
    pub exec: Exec,
    /// Maximum number of search nodes (partial assignments) to visit.
    pub budget: Option<u64>,
    /// A custom processing order; must be topological. Sinks are moved last.
    pub order: Option<Vec<usize>>,
}

impl GrassOptions {
    pub fn sequential() -> Self {
        GrassOptions { exec: Exec::Sequential, ..Default::default() }
    }
}

struct Search<'a> {
    m: &'a Representation,
    e: &'a [usize],
    order: Vec<usize>,
    /// Number of leading non-sink vertices in `order`.
    inner: usize,
    budget: Option<u64>,
    nodes: AtomicU64,
}

/// A partial assignment: subspaces for a prefix of the processing order.
type Partial = Vec<Option<Matrix>>;

impl<'a> Search<'a> {
    fn new(m: &'a Representation, e: &'a [usize], opts: &GrassOptions) -> Result<Self> {
        let q = m.quiver();
        let n = q.num_vertices();
        if e.len() != n {
            return Err(Error::DimensionMismatch(format!("dimension vector of length {} for {n} vertices", e.len())));
        }
        if let Some(v) = (0..n).find(|&v| e[v] > m.dim(v)) {
            return Err(Error::DimensionMismatch(format!("e exceeds dim M at vertex {}", q.label(v))));
        }
        let base = match &opts.order {
            Some(o) => {
                if o.len() != n || !q.is_topological(o) {
                    return Err(Error::Malformed("processing order is not a topological order".into()));
                }
                o.clone()
            }
            None => q.topological_order().to_vec(),
        };
        let mut order: Vec<usize> = base.iter().copied().filter(|&v| !q.is_sink(v)).collect();
        let inner = order.len();
        order.extend(base.iter().copied().filter(|&v| q.is_sink(v)));
        Ok(Search { m, e, order, inner, budget: opts.budget, nodes: AtomicU64::new(0) })
    }

    fn tick(&self, partial: u128) -> Result<()> {
        let used = self.nodes.fetch_add(1, Ordering::Relaxed) + 1;
        match self.budget {
            Some(b) if used > b => Err(Error::BudgetExceeded { budget: b, partial: partial.min(u64::MAX as u128) as u64 }),
            _ => Ok(()),
        }
    }

    /// Span of the images of chosen subspaces along arrows into `v`.
    fn forced(&self, v: usize, assign: &Partial) -> Matrix {
        let q = self.m.quiver();
        let f = self.m.field();
        let imgs: Vec<Matrix> = q
            .in_arrows(v)
            .map(|a| {
                let s = q.arrow(a).0;
                self.m.map(a).mul(assign[s].as_ref().expect("predecessor assigned"))
            })
            .collect();
        let refs: Vec<&Matrix> = imgs.iter().collect();
        Matrix::hstack(f, self.m.dim(v), &refs).column_space()
    }

    fn choices(&self, k: usize, assign: &Partial) -> Vec<Matrix> {
        let v = self.order[k];
        let forced = self.forced(v, assign);
        if forced.cols() > self.e[v] {
            return vec![];
        }
        superspaces(&forced, self.e[v]).collect()
    }

    /// Product of the sink contributions for a complete inner assignment.
    fn sink_product(&self, assign: &Partial) -> u128 {
        let p = self.m.field().p() as u64;
        let mut prod: u128 = 1;
        for &v in &self.order[self.inner..] {
            let f = self.forced(v, assign).cols();
            if f > self.e[v] {
                return 0;
            }
            prod *= qbinomial((self.m.dim(v) - f) as u64, (self.e[v] - f) as u64, p);
            if prod == 0 {
                return 0;
            }
        }
        prod
    }

    fn count_from(&self, k: usize, assign: &mut Partial, acc: &mut u128) -> Result<()> {
        self.tick(*acc)?;
        if k == self.inner {
            *acc += self.sink_product(assign);
            return Ok(());
        }
        let v = self.order[k];
        for c in self.choices(k, assign) {
            assign[v] = Some(c);
            self.count_from(k + 1, assign, acc)?;
        }
        assign[v] = None;
        Ok(())
    }

    fn points_from(&self, k: usize, assign: &mut Partial, out: &mut Vec<Point>) -> Result<()> {
        self.tick(out.len() as u128)?;
        if k == self.order.len() {
            out.push(assign.iter().map(|x| x.clone().expect("complete assignment")).collect());
            return Ok(());
        }
        let v = self.order[k];
        for c in self.choices(k, assign) {
            assign[v] = Some(c);
            self.points_from(k + 1, assign, out)?;
        }
        assign[v] = None;
        Ok(())
    }

    /// Breadth-first expansion of the first levels up to `depth_limit`
    /// until at least `target` partial assignments exist.
    fn frontier(&self, depth_limit: usize, target: usize) -> (usize, Vec<Partial>) {
        let n = self.m.quiver().num_vertices();
        let mut level: Vec<Partial> = vec![vec![None; n]];
        let mut depth = 0;
        while depth < depth_limit && level.len() < target {
            let v = self.order[depth];
            let mut next = Vec::new();
            for a in &level {
                for c in self.choices(depth, a) {
                    let mut b = a.clone();
                    b[v] = Some(c);
                    next.push(b);
                }
            }
            level = next;
            depth += 1;
        }
        (depth, level)
    }
}

const FRONTIER_TARGET: usize = 256;

/// |Gr_e(M)(F_p)| for the field of `m`.
pub fn count_points(m: &Representation, e: &[usize], opts: &GrassOptions) -> Result<u128> {
    let s = Search::new(m, e, opts)?;
    let (depth, front) = if opts.exec.is_parallel() { s.frontier(s.inner, FRONTIER_TARGET) } else { (0, vec![vec![None; e.len()]]) };
    let parts = opts.exec.map(front, |mut a| {
        let mut acc = 0u128;
        s.count_from(depth, &mut a, &mut acc).map(|_| acc)
    });
    let mut total = 0u128;
    for p in parts {
        total += p?;
    }
    Ok(total)
}

/// |Gr_e(M)(F_p)| for the canonical realization of an iso type.
pub fn count_points_iso(t: &IndecTable, m: &IsoType, e: &[usize], opts: &GrassOptions) -> Result<u128> {
    count_points(&t.realize(m), e, opts)
}

/// All points of Gr_e(M) in the deterministic enumeration order.
pub fn list_points(m: &Representation, e: &[usize], opts: &GrassOptions) -> Result<Vec<Point>> {
    let s = Search::new(m, e, opts)?;
    let n = e.len();
    let (depth, front) = if opts.exec.is_parallel() { s.frontier(s.order.len(), FRONTIER_TARGET) } else { (0, vec![vec![None; n]]) };
    let parts = opts.exec.map(front, |mut a| {
        let mut out = Vec::new();
        s.points_from(depth, &mut a, &mut out).map(|_| out)
    });
    let mut all = Vec::new();
    for p in parts {
        all.extend(p?);
    }
    Ok(all)
}

/// dim Hom(N, M) − dim End(N): the dimension of the stratum S_[N] ⊂ Gr_e(M).
pub fn stratum_dim(t: &IndecTable, n: &IsoType, m: &IsoType) -> i64 {
    t.hom_iso(n, m) as i64 - t.hom_iso(n, n) as i64
}

/// dim Hom(U, M/U), the tangent space dimension of Gr_e(M) at U.
pub fn tangent_dim(m: &Representation, u: &[Matrix]) -> Result<usize> {
    let (sub, quo) = m.sub_and_quotient(u)?;
    sub.hom_dim(&quo)
}

/// A piece of the stratification: points with sub iso type `sub` and
/// quotient iso type `quo` (a single Aut(M)-orbit for A2).
#[derive(Clone, Debug)]
pub struct Piece {
    pub sub: IsoType,
    pub quo: IsoType,
    pub count: u128,
    /// dim S_[sub] = hom(sub, M) − end(sub), the dimension of the coarse stratum.
    pub coarse_dim: i64,
    /// The first point of the piece in enumeration order.
    pub sample: Point,
}

/// Stratification of Gr_e(M)(F_p) by (sub, quotient) iso types.
#[derive(Clone, Debug)]
pub struct Stratification {
    pub m: IsoType,
    pub e: Vec<usize>,
    pub total: u128,
    /// Sorted by (sub, quo) multiplicity vectors.
    pub pieces: Vec<Piece>,
}

/// A coarse stratum S_[N]: all points with sub iso type N.
#[derive(Clone, Debug)]
pub struct Stratum {
    pub iso_type: IsoType,
    pub count: u128,
    pub dim: i64,
}

/// The (sub, quotient) iso types of a point.
pub fn classify_point(t: &IndecTable, m: &Representation, u: &[Matrix]) -> Result<(IsoType, IsoType)> {
    let (sub, quo) = m.sub_and_quotient(u)?;
    Ok((t.decompose(&sub)?, t.decompose(&quo)?))
}

/// All points of Gr_e(M) together with the piece each one lies in.
#[derive(Clone, Debug)]
pub struct Classified {
    pub points: Vec<Point>,
    /// Index into `strat.pieces` for every point.
    pub piece_of: Vec<usize>,
    pub strat: Stratification,
}

/// Enumerates Gr_e(M) and groups points by (sub, quotient) iso types.
pub fn classify_points(t: &IndecTable, m: &Representation, e: &[usize], opts: &GrassOptions) -> Result<Classified> {
    let iso = t.decompose(m)?;
    let points = list_points(m, e, opts)?;
    let keys = opts.exec.map(points.iter().collect::<Vec<_>>(), |u| classify_point(t, m, u));
    let mut groups: BTreeMap<(Vec<usize>, Vec<usize>), (u128, usize)> = BTreeMap::new();
    let mut raw = Vec::with_capacity(points.len());
    for (k, key) in keys.into_iter().enumerate() {
        let (s, q) = key?;
        let ent = groups.entry((s.mult.clone(), q.mult.clone())).or_insert((0, k));
        ent.0 += 1;
        raw.push((s.mult, q.mult));
    }
    let index: BTreeMap<(Vec<usize>, Vec<usize>), usize> = groups.keys().cloned().enumerate().map(|(i, k)| (k, i)).collect();
    let piece_of = raw.into_iter().map(|k| index[&k]).collect();
    let pieces = groups
        .into_iter()
        .map(|((s, q), (count, first))| {
            let sub = IsoType { mult: s };
            let coarse_dim = stratum_dim(t, &sub, &iso);
            Piece { sub, quo: IsoType { mult: q }, count, coarse_dim, sample: points[first].clone() }
        })
        .collect();
    let strat = Stratification { m: iso, e: e.to_vec(), total: points.len() as u128, pieces };
    Ok(Classified { points, piece_of, strat })
}

/// The stratification of Gr_e(M) by (sub, quotient) iso types.
pub fn stratify(t: &IndecTable, m: &Representation, e: &[usize], opts: &GrassOptions) -> Result<Stratification> {
    Ok(classify_points(t, m, e, opts)?.strat)
}

impl Stratification {
    /// Merges pieces with equal sub type into the strata S_[N].
    pub fn coarse_strata(&self) -> Vec<Stratum> {
        let mut out: Vec<Stratum> = Vec::new();
        for p in &self.pieces {
            match out.iter_mut().find(|s| s.iso_type == p.sub) {
                Some(s) => s.count += p.count,
                None => out.push(Stratum { iso_type: p.sub.clone(), count: p.count, dim: p.coarse_dim }),
            }
        }
        out
    }

    pub fn piece(&self, sub: &IsoType, quo: &IsoType) -> Option<&Piece> {
        self.pieces.iter().find(|p| &p.sub == sub && &p.quo == quo)
    }
}

/// All topological orders of a quiver (for order-independence checks on
/// small quivers).
pub fn all_topological_orders(q: &Quiver) -> Vec<Vec<usize>> {
    fn rec(q: &Quiver, cur: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        let n = q.num_vertices();
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for v in 0..n {
            if !used[v] && q.in_arrows(v).all(|a| used[q.arrow(a).0]) {
                used[v] = true;
                cur.push(v);
                rec(q, cur, used, out);
                cur.pop();
                used[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(q, &mut Vec::new(), &mut vec![false; q.num_vertices()], &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PrimeField;
    use std::sync::Arc;

    fn a2_blowup(p: u32) -> Representation {
        let q = Arc::new(Quiver::parse("1->2").unwrap());
        let f = PrimeField::new(p).unwrap();
        Representation::new(q, f, vec![3, 2], vec![Matrix::from_rows(f, &[vec![1, 0, 0], vec![0, 1, 0]])]).unwrap()
    }

    #[test]
    fn projective_plane_at_q2() {
        let m = a2_blowup(2);
        for opts in [GrassOptions::sequential(), GrassOptions::default()] {
            assert_eq!(count_points(&m, &[1, 2], &opts).unwrap(), 7);
            assert_eq!(list_points(&m, &[1, 2], &opts).unwrap().len(), 7);
            assert_eq!(count_points(&m, &[0, 0], &opts).unwrap(), 1);
        }
    }

    #[test]
    fn empty_and_oversized() {
        let q = Arc::new(Quiver::parse("1->2").unwrap());
        let f = PrimeField::new(3).unwrap();
        let m = Representation::new(q, f, vec![1, 1], vec![Matrix::from_rows(f, &[vec![1]])]).unwrap();
        assert_eq!(count_points(&m, &[1, 0], &GrassOptions::default()).unwrap(), 0);
        assert!(matches!(count_points(&m, &[2, 0], &GrassOptions::default()), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn budget_is_enforced() {
        let m = a2_blowup(5);
        let opts = GrassOptions { budget: Some(3), ..GrassOptions::sequential() };
        assert!(matches!(list_points(&m, &[1, 2], &opts), Err(Error::BudgetExceeded { budget: 3, .. })));
    }
}
