//! Cross-check of the general pipeline against the A2 closed forms over
//! every instance up to a dimension bound.

use crate::a2::{A2Instance, A2Type};
use crate::ar::{IndecTable, IsoType};
use crate::desing::{fibre_count, generic_candidates, Exactness, PrimeContext};
use crate::error::Result;
use crate::field::PrimeField;
use crate::grassmannian::{stratify, tangent_dim, GrassOptions};
use crate::par::Exec;
use crate::poly::{CountPolynomial, SAMPLE_PRIMES};
use crate::quiver::{dim_le, Quiver};
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

/// Sweep configuration.
#[derive(Clone, Debug)]
pub struct SweepConfig {
    /// Instances with d1, d2 ≤ bound.
    pub bound: i64,
    /// Primes for the structural checks.
    pub primes: Vec<u64>,
    /// Maximal number of sample primes for the orbit-degree fits.
    pub degree_primes: usize,
    pub exec: Exec,
    pub budget: Option<u64>,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig { bound: 3, primes: vec![2, 3], degree_primes: 6, exec: Exec::Parallel, budget: None }
    }
}

/// A failed agreement check.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct SweepFailure {
    pub instance: A2Instance,
    pub check: String,
    pub detail: String,
}

/// Outcome of the sweep.
#[derive(Clone, Debug, Serialize)]
pub struct SweepReport {
    pub bound: i64,
    pub primes: Vec<u64>,
    pub instances: usize,
    pub nonempty_instances: usize,
    /// Number of passed checks per check name.
    pub passed: BTreeMap<String, usize>,
    pub failures: Vec<SweepFailure>,
}

impl SweepReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

fn iso_of(t: &IndecTable, ids: &[usize; 3], ty: A2Type) -> IsoType {
    let mut v = IsoType::zero(t.len());
    for k in 0..3 {
        v.mult[ids[k]] += ty[k] as usize;
    }
    v
}

struct Checker {
    inst: A2Instance,
    passed: BTreeMap<String, usize>,
    failures: Vec<SweepFailure>,
}

impl Checker {
    fn check(&mut self, name: &str, ok: bool, detail: impl FnOnce() -> String) {
        if ok {
            *self.passed.entry(name.into()).or_insert(0) += 1;
        } else {
            self.failures.push(SweepFailure { instance: self.inst, check: name.into(), detail: detail() });
        }
    }
}

/// Runs every agreement check on one instance.
pub fn check_instance(inst: A2Instance, cfg: &SweepConfig) -> Result<(BTreeMap<String, usize>, Vec<SweepFailure>)> {
    let quiver = Arc::new(Quiver::parse("1->2")?);
    let opts = GrassOptions { exec: Exec::Sequential, budget: cfg.budget, order: None };
    let e = vec![inst.e1 as usize, inst.e2 as usize];
    let mut ck = Checker { inst, passed: BTreeMap::new(), failures: Vec::new() };
    let build = |q: u64| -> Result<(Arc<IndecTable>, [usize; 3], crate::rep::Representation)> {
        let t = Arc::new(IndecTable::new(quiver.clone(), PrimeField::new(q as u32)?)?);
        let ids = [t.projective(0), t.simple(0), t.simple(1)];
        let m = t.realize(&iso_of(&t, &ids, inst.m_type()));
        Ok((t, ids, m))
    };
    let orbits = inst.orbits();
    let r_set: BTreeSet<(i64, i64)> = orbits.iter().map(|o| (o.rp, o.rpp)).collect();
    ck.check("emptiness", orbits.is_empty() != inst.nonempty(), || format!("|R| = {}, nonempty = {}", orbits.len(), inst.nonempty()));

    for &q in &cfg.primes {
        let (t, ids, m) = build(q)?;
        let ctx = PrimeContext::with_table(t.clone(), m, &e, &opts)?;
        let strat = &ctx.classified.strat;
        ck.check("emptiness", (strat.total == 0) != inst.nonempty(), || format!("q={q}: {} points", strat.total));
        // strata ↔ R
        let mut seen = BTreeSet::new();
        for p in &strat.pieces {
            let o = (p.sub.mult[ids[0]] as i64, p.quo.mult[ids[0]] as i64);
            seen.insert(o);
            ck.check("orbit types", p.sub == iso_of(&t, &ids, inst.sub_type(o.0)) && p.quo == iso_of(&t, &ids, inst.quotient_type(o.1)), || {
                format!("q={q}: piece ({}, {}) vs orbit {o:?}", t.iso_string(&p.sub), t.iso_string(&p.quo))
            });
            let td = tangent_dim(&ctx.m, &p.sample)? as i64;
            ck.check("tangent dim", r_set.contains(&o) && td == inst.tangent_dim(o.0, o.1), || format!("q={q}: orbit {o:?} tangent {td}"));
        }
        ck.check("strata bijection", seen == r_set && seen.len() == strat.pieces.len(), || format!("q={q}: pieces {seen:?} vs R {r_set:?}"));
        if !inst.nonempty() {
            continue;
        }
        // components
        let gen = generic_candidates(&ctx)?;
        let comps = inst.components();
        let want: BTreeSet<Vec<usize>> = comps.iter().map(|c| iso_of(&t, &ids, inst.component_type(c)).mult).collect();
        let got: BTreeSet<Vec<usize>> = gen.candidates.iter().map(|c| c.mult.clone()).collect();
        ck.check("components", got == want && gen.exactness == Exactness::ExactA2, || format!("q={q}: candidates {got:?}, closed form {want:?}"));
        // closure order ⟹ M̂ dominance
        for a in &orbits {
            for b in &orbits {
                if A2Instance::closure_leq((a.rp, a.rpp), (b.rp, b.rpp)) {
                    let ma = ctx.qhat.mhat_dim(&iso_of(&t, &ids, inst.sub_type(a.rp)));
                    let mb = ctx.qhat.mhat_dim(&iso_of(&t, &ids, inst.sub_type(b.rp)));
                    ck.check("closure dominance", dim_le(&ma, &mb), || format!("orbits ({},{}) ≤ ({},{})", a.rp, a.rpp, b.rp, b.rpp));
                }
            }
        }
        // fibres at sampled points (the sample and the last point of every piece)
        for c in &comps {
            let n_hat = ctx.qhat.mhat_dim(&iso_of(&t, &ids, inst.component_type(c)));
            for (pi, p) in strat.pieces.iter().enumerate() {
                let o = (p.sub.mult[ids[0]] as i64, p.quo.mult[ids[0]] as i64);
                let last = (0..ctx.classified.points.len()).rev().find(|&k| ctx.classified.piece_of[k] == pi).expect("piece has points");
                for u in [&p.sample, &ctx.classified.points[last]] {
                    let f = fibre_count(&ctx.qhat, &ctx.mhat, u, &n_hat, &opts)?;
                    let want = inst.fibre_count(o.0, o.1, c.a, q);
                    ck.check("fibres", f == want, || format!("q={q}: component a={}, orbit {o:?}: fibre {f}, closed form {want}", c.a));
                }
            }
        }
    }
    // orbit degrees
    if inst.nonempty() {
        let mut counts: BTreeMap<(i64, i64), Vec<(u64, u128)>> = BTreeMap::new();
        let mut fitted: BTreeMap<(i64, i64), i64> = BTreeMap::new();
        for &q in SAMPLE_PRIMES.iter().take(cfg.degree_primes) {
            let (t, ids, m) = build(q)?;
            let s = stratify(&t, &m, &e, &opts)?;
            for o in &r_set {
                if fitted.contains_key(o) {
                    continue;
                }
                let c = s.piece(&iso_of(&t, &ids, inst.sub_type(o.0)), &iso_of(&t, &ids, inst.quotient_type(o.1))).map_or(0, |p| p.count);
                let v = counts.entry(*o).or_default();
                v.push((q, c));
                if v.len() >= 2 {
                    if let Ok(p) = CountPolynomial::interpolate(v) {
                        fitted.insert(*o, p.degree());
                    }
                }
            }
            if fitted.len() == r_set.len() {
                break;
            }
        }
        for o in &r_set {
            let d = fitted.get(o).copied();
            ck.check("orbit degree", d == Some(inst.orbit_dim(o.0, o.1)), || format!("orbit {o:?}: fitted degree {d:?}, formula {}", inst.orbit_dim(o.0, o.1)));
        }
    }
    Ok((ck.passed, ck.failures))
}

/// Runs the sweep over all instances with d1, d2 ≤ bound.
pub fn sweep(cfg: &SweepConfig) -> Result<SweepReport> {
    let insts = A2Instance::all_up_to(cfg.bound);
    let results = cfg.exec.map(insts.clone(), |i| check_instance(i, cfg));
    let mut passed = BTreeMap::new();
    let mut failures = Vec::new();
    for r in results {
        let (p, f) = r?;
        for (k, v) in p {
            *passed.entry(k).or_insert(0) += v;
        }
        failures.extend(f);
    }
    Ok(SweepReport {
        bound: cfg.bound,
        primes: cfg.primes.clone(),
        instances: insts.len(),
        nonempty_instances: insts.iter().filter(|i| i.nonempty()).count(),
        passed,
        failures,
    })
}
