//! Finite acyclic quivers, Dynkin classification and the Euler form of kQ.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

/// The ADE type of a connected Dynkin tree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DynkinType {
    A(usize),
    D(usize),
    E(usize),
}

impl fmt::Display for DynkinType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DynkinType::A(n) => write!(f, "A{n}"),
            DynkinType::D(n) => write!(f, "D{n}"),
            DynkinType::E(n) => write!(f, "E{n}"),
        }
    }
}

/// A finite quiver with labelled vertices and arrows given by vertex indices.
///
/// Vertices are referenced by their position in `labels`; arrows by their
/// position in `arrows`. Construction checks acyclicity and unique labels.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Quiver {
    labels: Vec<String>,
    arrows: Vec<(usize, usize)>,
    topo: Vec<usize>,
    dynkin: Option<DynkinType>,
}

impl Quiver {
    /// Builds an acyclic quiver (no Dynkin requirement).
    pub fn new(labels: Vec<String>, arrows: Vec<(usize, usize)>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for l in &labels {
            if !seen.insert(l.clone()) {
                return Err(Error::Malformed(format!("duplicate vertex id {l:?}")));
            }
        }
        let n = labels.len();
        for &(s, t) in &arrows {
            if s >= n || t >= n {
                return Err(Error::Malformed(format!("arrow ({s},{t}) references a missing vertex")));
            }
        }
        let topo = topological_order(n, &arrows).ok_or(Error::Cycle)?;
        Ok(Quiver { labels, arrows, topo, dynkin: None })
    }

    /// Builds a quiver and requires it to be a connected ADE Dynkin quiver.
    pub fn dynkin(labels: Vec<String>, arrows: Vec<(usize, usize)>) -> Result<Self> {
        let mut q = Self::new(labels, arrows)?;
        q.dynkin = Some(classify(q.labels.len(), &q.arrows)?);
        Ok(q)
    }

    /// Parses the arrow-list syntax `"1->2, 2->3"`. Bare tokens declare
    /// isolated vertices. Vertices are ordered by first appearance. The result
    /// must be a Dynkin quiver.
    pub fn parse(spec: &str) -> Result<Self> {
        let mut labels: Vec<String> = Vec::new();
        let mut index = BTreeMap::new();
        let mut arrows = Vec::new();
        let mut vertex = |name: &str, labels: &mut Vec<String>| -> Result<usize> {
            let name = name.trim();
            if name.is_empty() {
                return Err(Error::Malformed("empty vertex id".into()));
            }
            Ok(*index.entry(name.to_string()).or_insert_with(|| {
                labels.push(name.to_string());
                labels.len() - 1
            }))
        };
        for tok in spec.split([',', ';']) {
            let tok = tok.trim();
            if tok.is_empty() {
                continue;
            }
            let parts: Vec<&str> = tok.split("->").collect();
            if parts.len() == 1 {
                vertex(parts[0], &mut labels)?;
                continue;
            }
            let ids: Vec<usize> = parts.iter().map(|p| vertex(p, &mut labels)).collect::<Result<_>>()?;
            for w in ids.windows(2) {
                arrows.push((w[0], w[1]));
            }
        }
        if labels.is_empty() {
            return Err(Error::Malformed("no vertices".into()));
        }
        Self::dynkin(labels, arrows)
    }

    pub fn num_vertices(&self) -> usize {
        self.labels.len()
    }
    pub fn num_arrows(&self) -> usize {
        self.arrows.len()
    }
    pub fn labels(&self) -> &[String] {
        &self.labels
    }
    pub fn label(&self, v: usize) -> &str {
        &self.labels[v]
    }
    pub fn vertex_index(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }
    pub fn arrows(&self) -> &[(usize, usize)] {
        &self.arrows
    }
    pub fn arrow(&self, a: usize) -> (usize, usize) {
        self.arrows[a]
    }
    /// A fixed topological order (sources first; ties by vertex index).
    pub fn topological_order(&self) -> &[usize] {
        &self.topo
    }
    pub fn dynkin_type(&self) -> Option<DynkinType> {
        self.dynkin
    }

    /// Arrow indices leaving `v`.
    pub fn out_arrows(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.arrows.iter().enumerate().filter(move |(_, &(s, _))| s == v).map(|(a, _)| a)
    }
    /// Arrow indices entering `v`.
    pub fn in_arrows(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.arrows.iter().enumerate().filter(move |(_, &(_, t))| t == v).map(|(a, _)| a)
    }
    pub fn is_sink(&self, v: usize) -> bool {
        self.out_arrows(v).next().is_none()
    }
    pub fn is_source(&self, v: usize) -> bool {
        self.in_arrows(v).next().is_none()
    }

    /// Checks whether `order` is a topological order of the vertices.
    pub fn is_topological(&self, order: &[usize]) -> bool {
        let n = self.num_vertices();
        if order.len() != n {
            return false;
        }
        let mut pos = vec![usize::MAX; n];
        for (i, &v) in order.iter().enumerate() {
            if v >= n || pos[v] != usize::MAX {
                return false;
            }
            pos[v] = i;
        }
        self.arrows.iter().all(|&(s, t)| pos[s] < pos[t])
    }

    /// Number of directed paths from `u` to `v` (including the trivial path).
    pub fn path_count(&self, u: usize, v: usize) -> u64 {
        let n = self.num_vertices();
        let mut cnt = vec![0u64; n];
        cnt[u] = 1;
        for &x in &self.topo {
            if cnt[x] == 0 {
                continue;
            }
            for a in self.out_arrows(x).collect::<Vec<_>>() {
                let t = self.arrows[a].1;
                cnt[t] += cnt[x];
            }
        }
        cnt[v]
    }

    /// The arrow indices of the unique path `u → v`, if one exists and is
    /// unique; `None` if no path exists.
    ///
    /// # Panics
    /// Panics if several paths exist (never the case for trees).
    pub fn unique_path(&self, u: usize, v: usize) -> Option<Vec<usize>> {
        let n = self.num_vertices();
        let c = self.path_count(u, v);
        if c == 0 {
            return None;
        }
        assert_eq!(c, 1, "multiple paths between {u} and {v}");
        // BFS back-pointers
        let mut prev: Vec<Option<usize>> = vec![None; n];
        let mut seen = vec![false; n];
        seen[u] = true;
        let mut queue = VecDeque::from([u]);
        while let Some(x) = queue.pop_front() {
            for a in self.out_arrows(x) {
                let t = self.arrows[a].1;
                if !seen[t] {
                    seen[t] = true;
                    prev[t] = Some(a);
                    queue.push_back(t);
                }
            }
        }
        let mut path = Vec::new();
        let mut x = v;
        while x != u {
            let a = prev[x].expect("path exists");
            path.push(a);
            x = self.arrows[a].0;
        }
        path.reverse();
        Some(path)
    }

    /// The Euler form ⟨x,y⟩ = Σ x_i y_i − Σ_{α:i→j} x_i y_j of kQ.
    pub fn euler_form(&self, x: &[i64], y: &[i64]) -> Result<i64> {
        let n = self.num_vertices();
        if x.len() != n || y.len() != n {
            return Err(Error::DimensionMismatch(format!("vectors of length {} and {} for {} vertices", x.len(), y.len(), n)));
        }
        let diag: i64 = x.iter().zip(y).map(|(a, b)| a * b).sum();
        let off: i64 = self.arrows.iter().map(|&(s, t)| x[s] * y[t]).sum();
        Ok(diag - off)
    }

    /// The symmetrized (Tits) form (x,y) = ⟨x,y⟩ + ⟨y,x⟩.
    pub fn symmetric_form(&self, x: &[i64], y: &[i64]) -> i64 {
        self.euler_form(x, y).unwrap() + self.euler_form(y, x).unwrap()
    }

    /// The quiver with all arrows reversed.
    pub fn opposite(&self) -> Quiver {
        let arrows: Vec<(usize, usize)> = self.arrows.iter().map(|&(s, t)| (t, s)).collect();
        let mut q = Quiver::new(self.labels.clone(), arrows).expect("opposite of acyclic is acyclic");
        q.dynkin = self.dynkin;
        q
    }

    /// Compact arrow-list description, e.g. `1->2, 3->2`.
    pub fn describe(&self) -> String {
        let mut parts: Vec<String> = self.arrows.iter().map(|&(s, t)| format!("{}->{}", self.labels[s], self.labels[t])).collect();
        for v in 0..self.num_vertices() {
            if self.arrows.iter().all(|&(s, t)| s != v && t != v) {
                parts.push(self.labels[v].clone());
            }
        }
        parts.join(", ")
    }
}

/// Kahn's algorithm; ties broken by smallest vertex index. `None` on a cycle.
pub fn topological_order(n: usize, arrows: &[(usize, usize)]) -> Option<Vec<usize>> {
    topological_order_by(n, arrows, |v| v)
}

/// Kahn's algorithm with ties broken by the smallest `key`.
pub fn topological_order_by<K: Ord>(n: usize, arrows: &[(usize, usize)], key: impl Fn(usize) -> K) -> Option<Vec<usize>> {
    let mut indeg = vec![0usize; n];
    for &(_, t) in arrows {
        indeg[t] += 1;
    }
    let mut ready: BTreeSet<(K, usize)> = (0..n).filter(|&v| indeg[v] == 0).map(|v| (key(v), v)).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(first) = ready.pop_first() {
        let v = first.1;
        order.push(v);
        for &(s, t) in arrows {
            if s == v {
                indeg[t] -= 1;
                if indeg[t] == 0 {
                    ready.insert((key(t), t));
                }
            }
        }
    }
    (order.len() == n).then_some(order)
}

/// Classifies the underlying graph as an ADE Dynkin tree.
pub fn classify(n: usize, arrows: &[(usize, usize)]) -> Result<DynkinType> {
    if n == 0 {
        return Err(Error::NotDynkin("empty quiver".into()));
    }
    let mut adj = vec![Vec::new(); n];
    let mut edges = BTreeSet::new();
    for &(s, t) in arrows {
        let e = (s.min(t), s.max(t));
        if !edges.insert(e) {
            return Err(Error::NotDynkin(format!("multiple edges between {s} and {t}")));
        }
        adj[s].push(t);
        adj[t].push(s);
    }
    // connectivity
    let mut seen = vec![false; n];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(v) = stack.pop() {
        for &w in &adj[v] {
            if !seen[w] {
                seen[w] = true;
                stack.push(w);
            }
        }
    }
    if seen.iter().any(|s| !s) {
        return Err(Error::Disconnected);
    }
    if edges.len() != n - 1 {
        return Err(Error::NotDynkin("underlying graph contains a cycle".into()));
    }
    let branch: Vec<usize> = (0..n).filter(|&v| adj[v].len() >= 3).collect();
    if branch.is_empty() {
        return Ok(DynkinType::A(n));
    }
    if branch.len() > 1 || adj[branch[0]].len() > 3 {
        return Err(Error::NotDynkin("more than one branch point or a vertex of degree > 3".into()));
    }
    let b = branch[0];
    let mut arms: Vec<usize> = adj[b]
        .iter()
        .map(|&start| {
            let (mut prev, mut cur, mut len) = (b, start, 1);
            loop {
                let next: Vec<usize> = adj[cur].iter().copied().filter(|&w| w != prev).collect();
                if next.is_empty() {
                    break len;
                }
                prev = cur;
                cur = next[0];
                len += 1;
            }
        })
        .collect();
    arms.sort_unstable();
    match (arms[0], arms[1], arms[2]) {
        (1, 1, k) => Ok(DynkinType::D(k + 3)),
        (1, 2, 2) => Ok(DynkinType::E(6)),
        (1, 2, 3) => Ok(DynkinType::E(7)),
        (1, 2, 4) => Ok(DynkinType::E(8)),
        (a, b2, c) => Err(Error::NotDynkin(format!("branch arms ({a},{b2},{c})"))),
    }
}

/// Componentwise comparison `x ≤ y` of dimension vectors.
pub fn dim_le(x: &[usize], y: &[usize]) -> bool {
    x.len() == y.len() && x.iter().zip(y).all(|(a, b)| a <= b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_examples() {
        let a3 = Quiver::parse("1->2, 2->3").unwrap();
        assert_eq!(a3.num_vertices(), 3);
        assert_eq!(a3.num_arrows(), 2);
        assert_eq!(a3.dynkin_type(), Some(DynkinType::A(3)));
        let d4 = Quiver::parse("1->4, 2->4, 3->4").unwrap();
        assert_eq!(d4.dynkin_type(), Some(DynkinType::D(4)));
        assert_eq!(Quiver::parse("1->2, 2->1"), Err(Error::Cycle));
        assert_eq!(Quiver::parse("1->2, 3->4"), Err(Error::Disconnected));
        assert!(matches!(Quiver::parse("1->2, 2->3, 3->4, 4->1"), Err(Error::Cycle)));
        assert!(matches!(Quiver::parse("1->2, 2->3, 1->3"), Err(Error::NotDynkin(_))));
        assert!(matches!(Quiver::parse("0->1,0->2,0->3,0->4"), Err(Error::NotDynkin(_))));
        assert_eq!(Quiver::parse("1").unwrap().dynkin_type(), Some(DynkinType::A(1)));
        assert_eq!(Quiver::parse("1->2->3").unwrap().num_arrows(), 2);
    }

    #[test]
    fn exceptional_and_d_types() {
        let e6 = Quiver::parse("1->2, 2->3, 3->4, 4->5, 3->6").unwrap();
        assert_eq!(e6.dynkin_type(), Some(DynkinType::E(6)));
        let e7 = Quiver::parse("1->2, 2->3, 3->4, 4->5, 5->6, 3->7").unwrap();
        assert_eq!(e7.dynkin_type(), Some(DynkinType::E(7)));
        let e8 = Quiver::parse("1->2, 2->3, 3->4, 4->5, 5->6, 6->7, 3->8").unwrap();
        assert_eq!(e8.dynkin_type(), Some(DynkinType::E(8)));
        let d5 = Quiver::parse("1->3, 2->3, 3->4, 4->5").unwrap();
        assert_eq!(d5.dynkin_type(), Some(DynkinType::D(5)));
        // affine E6~ arms (2,2,2)
        assert!(matches!(Quiver::parse("1->2, 2->3, 4->5, 5->3, 6->7, 7->3"), Err(Error::NotDynkin(_))));
    }

    #[test]
    fn duplicate_labels_rejected() {
        let r = Quiver::new(vec!["a".into(), "a".into()], vec![(0, 1)]);
        assert!(matches!(r, Err(Error::Malformed(_))));
    }

    #[test]
    fn euler_form_examples() {
        let a2 = Quiver::parse("1->2").unwrap();
        assert_eq!(a2.euler_form(&[1, 0], &[0, 1]).unwrap(), -1);
        assert_eq!(a2.euler_form(&[1, 2], &[2, 1]).unwrap(), 3);
        assert!(a2.euler_form(&[1], &[1, 0]).is_err());
    }

    #[test]
    fn paths() {
        let q = Quiver::parse("1->2, 3->2, 2->4").unwrap();
        assert_eq!(q.path_count(0, 3), 1);
        assert_eq!(q.path_count(0, 2), 0);
        assert_eq!(q.unique_path(0, 3).unwrap().len(), 2);
        assert_eq!(q.unique_path(1, 1).unwrap().len(), 0);
        assert!(q.is_topological(q.topological_order()));
    }
}
