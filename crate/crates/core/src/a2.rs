//! Closed forms for quiver Grassmannians of type A2 = (1 → 2).
//!
//! M is determined by d = (d1, d2) and the rank r of its map. Aut(M)-orbits
//! in Gr_e(M) are indexed by (r', r''): the rank of the map on U and on M/U.

use crate::error::{Error, Result};
use crate::subspace::{qbinomial, qbinomial_poly};
use serde::Serialize;

/// An A2 instance: dims of M, the rank of its map and the dimension vector e.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, PartialOrd, Ord)]
pub struct A2Instance {
    pub d1: i64,
    pub d2: i64,
    pub r: i64,
    pub e1: i64,
    pub e2: i64,
}

/// An orbit O(r', r'') with its derived data.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct A2Orbit {
    pub rp: i64,
    pub rpp: i64,
    /// Multiplicities p1..p7 of the indecomposables of the sub-pair category.
    pub p: [i64; 7],
    pub orbit_dim: i64,
    pub tangent_dim: i64,
}

/// An irreducible component: the closure of the maximal orbit (a, r − a).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct A2Component {
    pub a: i64,
    pub generic: (i64, i64),
    pub dim: i64,
}

/// Multiplicities of (P1, S1, S2) in an A2 module.
pub type A2Type = [i64; 3];

impl A2Instance {
    pub fn new(d1: i64, d2: i64, r: i64, e1: i64, e2: i64) -> Result<Self> {
        let inst = A2Instance { d1, d2, r, e1, e2 };
        if [d1, d2, r, e1, e2].iter().any(|&x| x < 0) || r > d1.min(d2) || e1 > d1 || e2 > d2 {
            return Err(Error::OutOfRange(format!("invalid A2 instance {inst:?}")));
        }
        Ok(inst)
    }

    /// Every valid instance with d1, d2 ≤ bound.
    pub fn all_up_to(bound: i64) -> Vec<A2Instance> {
        let mut out = Vec::new();
        for d1 in 0..=bound {
            for d2 in 0..=bound {
                for r in 0..=d1.min(d2) {
                    for e1 in 0..=d1 {
                        for e2 in 0..=d2 {
                            out.push(A2Instance { d1, d2, r, e1, e2 });
                        }
                    }
                }
            }
        }
        out
    }

    /// Iso type of M.
    pub fn m_type(&self) -> A2Type {
        [self.r, self.d1 - self.r, self.d2 - self.r]
    }

    /// Gr_e(M) is non-empty iff r ≤ d1 − e1 + e2.
    pub fn nonempty(&self) -> bool {
        self.r <= self.d1 - self.e1 + self.e2
    }

    /// The orbits, i.e. the set R, in lexicographic (r', r'') order.
    pub fn orbits(&self) -> Vec<A2Orbit> {
        let A2Instance { d1, d2, r, e1, e2 } = *self;
        let mut out = Vec::new();
        for rp in 0.max(r + e1 - d1)..=e1 {
            for rpp in 0.max(r - e2)..=(d2 - e2) {
                if rp + rpp <= r {
                    out.push(self.orbit_unchecked(rp, rpp));
                }
            }
        }
        out
    }

    pub fn in_r(&self, rp: i64, rpp: i64) -> bool {
        let A2Instance { d1, d2, r, e1, e2 } = *self;
        0.max(r + e1 - d1) <= rp && rp <= e1 && 0.max(r - e2) <= rpp && rpp <= d2 - e2 && rp + rpp <= r
    }

    pub fn orbit(&self, rp: i64, rpp: i64) -> Result<A2Orbit> {
        if !self.in_r(rp, rpp) {
            return Err(Error::OutOfRange(format!("orbit ({rp},{rpp}) not in R for {self:?}")));
        }
        Ok(self.orbit_unchecked(rp, rpp))
    }

    fn orbit_unchecked(&self, rp: i64, rpp: i64) -> A2Orbit {
        let A2Instance { d1, d2, r, e1, e2 } = *self;
        let p = [d2 - e2 - rpp, rpp, e2 - r + rpp, r - rp - rpp, rp, d1 - e1 - r + rp, e1 - rp];
        A2Orbit { rp, rpp, p, orbit_dim: self.orbit_dim(rp, rpp), tangent_dim: self.tangent_dim(rp, rpp) }
    }

    /// dim O(r', r'').
    pub fn orbit_dim(&self, rp: i64, rpp: i64) -> i64 {
        let A2Instance { d1, d2, r, e1, e2 } = *self;
        e1 * (d1 - e1) + e2 * (d2 - e2) - (d2 - e2 + e1) * r + (e1 + r) * rp + (d2 - e2 + r) * rpp - rp * rp - rp * rpp - rpp * rpp
    }

    /// dim Hom(U, M/U) at a point of O(r', r'').
    pub fn tangent_dim(&self, rp: i64, rpp: i64) -> i64 {
        let A2Instance { d1, d2, e1, e2, .. } = *self;
        e1 * (d1 - e1) + e2 * (d2 - e2) - (d2 - e2) * rp - e1 * rpp + rp * rpp
    }

    /// ⟨e, d − e⟩ for the A2 Euler form.
    pub fn euler_dim(&self) -> i64 {
        let (f1, f2) = (self.d1 - self.e1, self.d2 - self.e2);
        self.e1 * f1 + self.e2 * f2 - self.e1 * f2
    }

    /// Orbit closure: O1 ⊆ closure(O2) iff componentwise ≤.
    pub fn closure_leq(o1: (i64, i64), o2: (i64, i64)) -> bool {
        o1.0 <= o2.0 && o1.1 <= o2.1
    }

    /// Whether r ≥ e1 − e2 + d2 (the irreducible case).
    pub fn irreducible(&self) -> bool {
        self.nonempty() && self.r >= self.e1 - self.e2 + self.d2
    }

    /// The irreducible components.
    pub fn components(&self) -> Vec<A2Component> {
        if !self.nonempty() {
            return vec![];
        }
        let A2Instance { d1, d2, r, e1, e2 } = *self;
        if self.irreducible() {
            let g = (e1, d2 - e2);
            return vec![A2Component { a: e1, generic: g, dim: self.orbit_dim(g.0, g.1) }];
        }
        let lo = 0.max(r + e1 - d1).max(r - d2 + e2);
        let hi = e1.min(e2).min(r);
        (lo..=hi).map(|a| A2Component { a, generic: (a, r - a), dim: self.orbit_dim(a, r - a) }).collect()
    }

    /// Sub type of a point of O(r', r''): P1^{r'} ⊕ S1^{e1−r'} ⊕ S2^{e2−r'}.
    pub fn sub_type(&self, rp: i64) -> A2Type {
        [rp, self.e1 - rp, self.e2 - rp]
    }

    /// Quotient type: P1^{r''} ⊕ S1^{d1−e1−r''} ⊕ S2^{d2−e2−r''}.
    pub fn quotient_type(&self, rpp: i64) -> A2Type {
        [rpp, self.d1 - self.e1 - rpp, self.d2 - self.e2 - rpp]
    }

    /// The generic sub type of a component.
    pub fn component_type(&self, c: &A2Component) -> A2Type {
        self.sub_type(c.generic.0)
    }

    /// Whether the orbit consists of smooth points.
    pub fn is_smooth(&self, rp: i64, rpp: i64) -> bool {
        let A2Instance { d1, d2, r, e1, e2 } = *self;
        if e1 == 0 || e2 == d2 || r == d1.min(d2) {
            return true;
        }
        if self.irreducible() {
            return rp == e1 || rpp == d2 - e2;
        }
        self.components().iter().any(|c| c.generic == (rp, rpp))
    }

    /// Fibre of π over O(r', r'') restricted to the component with parameter
    /// a: Gr_{a−r'}(k^{r−r'−r''}) when r' ≤ a ≤ r − r'', else empty.
    /// Returned as (n, k) for Gr_k(k^n).
    pub fn fibre(&self, rp: i64, rpp: i64, a: i64) -> Option<(i64, i64)> {
        (rp <= a && a <= self.r - rpp).then_some((self.r - rp - rpp, a - rp))
    }

    /// The point count of the fibre over O(r', r'') for component a.
    pub fn fibre_count(&self, rp: i64, rpp: i64, a: i64, q: u64) -> u128 {
        match self.fibre(rp, rpp, a) {
            Some((n, k)) => qbinomial(n as u64, k as u64, q),
            None => 0,
        }
    }

    /// The fibre counting polynomial (coefficients, constant term first).
    pub fn fibre_poly(&self, rp: i64, rpp: i64, a: i64) -> Vec<i64> {
        match self.fibre(rp, rpp, a) {
            Some((n, k)) => qbinomial_poly(n as usize, k as usize),
            None => vec![],
        }
    }

    /// Whether the full desingularization (the disjoint union over all
    /// components) has one-point fibres over every smooth orbit.
    pub fn one_to_one_over_smooth(&self) -> bool {
        let comps = self.components();
        self.orbits().iter().filter(|o| self.is_smooth(o.rp, o.rpp)).all(|o| {
            let polys: Vec<Vec<i64>> = comps.iter().map(|c| self.fibre_poly(o.rp, o.rpp, c.a)).collect();
            let total: Vec<i64> = polys.iter().fold(vec![], |acc, p| add_poly(&acc, p));
            total == vec![1]
        })
    }

    /// The closed-form statements about one-to-one-ness where they apply:
    /// r = e1 + d2 − e2 in the irreducible case; true in the reducible case
    /// outside the always-smooth conditions; otherwise no statement.
    pub fn one_to_one_statement(&self) -> Option<bool> {
        let A2Instance { d1, d2, r, e1, e2 } = *self;
        if !self.nonempty() {
            return None;
        }
        if self.irreducible() {
            Some(r == e1 + d2 - e2)
        } else if !(e1 == 0 || e2 == d2 || r == d1.min(d2)) {
            Some(true)
        } else {
            None
        }
    }
}

fn add_poly(a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut c = vec![0; a.len().max(b.len())];
    for (i, x) in a.iter().enumerate() {
        c[i] += x;
    }
    for (i, x) in b.iter().enumerate() {
        c[i] += x;
    }
    while c.last() == Some(&0) {
        c.pop();
    }
    c
}
