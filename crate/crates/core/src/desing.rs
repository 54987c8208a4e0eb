//! Generic subrepresentation types, the desingularizations
//! π_[N] : Gr_{dim N̂}(M̂) → Gr_e(M), their fibres and the summary report.
//!
//! The fibre over U ⊂ M is Gr_{dim N̂ − dim Û}(M̂/Û), which is counted
//! explicitly over each sample prime.

use crate::a2::A2Instance;
use crate::ar::{IndecTable, IsoType};
use crate::error::{ensure, Error, Result};
use crate::grassmannian::{classify_points, count_points, tangent_dim, Classified, GrassOptions, Point};
use crate::hq::{MHat, QHat};
use crate::matrix::Matrix;
use crate::par::Exec;
use crate::poly::{CountPolynomial, SAMPLE_PRIMES};
use crate::quiver::dim_le;
use crate::rep::Representation;
use serde::Serialize;
use std::collections::BTreeMap;
use std::sync::{Arc, Mutex};

/// How far the candidate set is known to be exact.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Exactness {
    /// Agrees with the closed-form A2 components.
    ExactA2,
    /// One candidate dominates every other stratum.
    SingleMaximal,
    /// Contains only generic types, but completeness is not certified.
    Partial,
}

/// The generic-type candidates of Gr_e(M).
#[derive(Clone, Debug)]
pub struct GenericTypeSet {
    pub candidates: Vec<IsoType>,
    pub exactness: Exactness,
    /// Candidates that survive the dominance rule.
    pub survivors: Vec<IsoType>,
    /// Types with a sampled point whose tangent dimension equals the stratum dimension.
    pub smooth_certified: Vec<IsoType>,
}

/// Everything computed over one prime field.
pub struct PrimeContext {
    pub q: u64,
    pub table: Arc<IndecTable>,
    pub qhat: QHat,
    pub m: Representation,
    pub m_type: IsoType,
    pub mhat: MHat,
    pub classified: Classified,
}

impl PrimeContext {
    /// Builds the table, Q̂, M̂ and the classified points of Gr_e(M).
    pub fn new(m: Representation, e: &[usize], opts: &GrassOptions) -> Result<Self> {
        let table = Arc::new(IndecTable::new(m.quiver().clone(), m.field())?);
        Self::with_table(table, m, e, opts)
    }

    pub fn with_table(table: Arc<IndecTable>, m: Representation, e: &[usize], opts: &GrassOptions) -> Result<Self> {
        let qhat = QHat::new(table.clone())?;
        let m_type = table.decompose(&m)?;
        let mhat = qhat.mhat_explicit(&m)?;
        let classified = classify_points(&table, &m, e, opts)?;
        Ok(PrimeContext { q: m.field().p() as u64, table, qhat, m, m_type, mhat, classified })
    }

    pub fn piece_index(&self, sub: &IsoType, quo: &IsoType) -> Option<usize> {
        self.classified.strat.pieces.iter().position(|p| &p.sub == sub && &p.quo == quo)
    }
}

/// The A2 instance of M when the quiver is 1 → 2 (source first).
pub fn a2_instance(t: &IndecTable, m: &IsoType, e: &[usize]) -> Option<(A2Instance, [usize; 3])> {
    let q = t.quiver();
    if q.num_vertices() != 2 || q.num_arrows() != 1 {
        return None;
    }
    let (s, k) = q.arrow(0);
    let ids = [t.projective(s), t.simple(s), t.simple(k)];
    let d = t.dim_of(m);
    let r = m.mult[ids[0]] as i64;
    A2Instance::new(d[s] as i64, d[k] as i64, r, e[s] as i64, e[k] as i64).ok().map(|i| (i, ids))
}

/// (r', r'') of a piece: the multiplicity of P1 in the sub and in the quotient.
pub fn a2_orbit_of(ids: &[usize; 3], sub: &IsoType, quo: &IsoType) -> (i64, i64) {
    (sub.mult[ids[0]] as i64, quo.mult[ids[0]] as i64)
}

/// Candidate generic types: dominance survivors together with the types
/// certified by a smooth point of the right dimension.
pub fn generic_candidates(ctx: &PrimeContext) -> Result<GenericTypeSet> {
    let t = &ctx.table;
    let strat = &ctx.classified.strat;
    let coarse = strat.coarse_strata();
    let mh: Vec<Vec<usize>> = coarse.iter().map(|s| ctx.qhat.mhat_dim(&s.iso_type)).collect();
    let survivors: Vec<IsoType> = (0..coarse.len())
        .filter(|&i| !(0..coarse.len()).any(|j| coarse[j].dim > coarse[i].dim && dim_le(&mh[i], &mh[j])))
        .map(|i| coarse[i].iso_type.clone())
        .collect();
    let mut smooth_certified = Vec::new();
    for s in &coarse {
        let mut certified = false;
        for p in strat.pieces.iter().filter(|p| p.sub == s.iso_type) {
            if tangent_dim(&ctx.m, &p.sample)? as i64 == s.dim {
                certified = true;
            }
        }
        if certified {
            smooth_certified.push(s.iso_type.clone());
        }
    }
    let mut candidates: Vec<IsoType> = survivors.clone();
    for c in &smooth_certified {
        if !candidates.contains(c) {
            candidates.push(c.clone());
        }
    }
    candidates.sort_by(|a, b| a.mult.cmp(&b.mult));
    let exactness = if let Some((inst, ids)) = a2_instance(t, &ctx.m_type, &strat.e) {
        let mut closed: Vec<Vec<usize>> = inst
            .components()
            .iter()
            .map(|c| {
                let ty = inst.component_type(c);
                let mut v = vec![0usize; t.len()];
                for (k, &id) in ids.iter().enumerate() {
                    v[id] += ty[k] as usize;
                }
                v
            })
            .collect();
        closed.sort();
        let ours: Vec<Vec<usize>> = candidates.iter().map(|c| c.mult.clone()).collect();
        if closed == ours {
            Exactness::ExactA2
        } else {
            Exactness::Partial
        }
    } else if candidates.len() == 1 && {
        let c = coarse.iter().position(|s| s.iso_type == candidates[0]).expect("candidate is a stratum");
        (0..coarse.len()).all(|j| j == c || (coarse[j].dim < coarse[c].dim && dim_le(&mh[j], &mh[c])))
    } {
        Exactness::SingleMaximal
    } else {
        Exactness::Partial
    };
    Ok(GenericTypeSet { candidates, exactness, survivors, smooth_certified })
}

/// |π_[N]⁻¹(U)(F_q)| = |Gr_{n̂ − dim Û}(M̂/Û)(F_q)|, or 0 unless dim Û ≤ n̂.
pub fn fibre_count(qh: &QHat, mhat: &MHat, u: &Point, n_hat: &[usize], opts: &GrassOptions) -> Result<u128> {
    let uhat = mhat.sub_point(qh, u)?;
    let du: Vec<usize> = uhat.iter().map(|b| b.cols()).collect();
    if !dim_le(&du, n_hat) {
        return Ok(0);
    }
    let (_, quo) = mhat.rep.sub_and_quotient(&uhat)?;
    let rest: Vec<usize> = n_hat.iter().zip(&du).map(|(a, b)| a - b).collect();
    count_points(&quo, &rest, opts)
}

/// Rank profile of M̂/Û: ranks of every arrow, of the stacked incoming and
/// outgoing maps at each vertex and of every length-two path. It is an
/// isomorphism invariant of the quotient and refines the pieces of Gr_e(M)
/// on which the fibres are counted.
pub fn quotient_profile(mhat: &MHat, uhat: &[Matrix]) -> Result<Vec<usize>> {
    let (_, quo) = mhat.rep.sub_and_quotient(uhat)?;
    let q = quo.quiver();
    let f = quo.field();
    let mut prof: Vec<usize> = (0..q.num_arrows()).map(|a| quo.map(a).rank()).collect();
    for v in 0..q.num_vertices() {
        let ins: Vec<&Matrix> = q.in_arrows(v).map(|a| quo.map(a)).collect();
        prof.push(Matrix::hstack(f, quo.dim(v), &ins).rank());
        let outs: Vec<&Matrix> = q.out_arrows(v).map(|a| quo.map(a)).collect();
        prof.push(Matrix::vstack(f, quo.dim(v), &outs).rank());
    }
    for a in 0..q.num_arrows() {
        let (_, t) = q.arrow(a);
        for b in q.out_arrows(t) {
            prof.push(quo.map(b).mul(quo.map(a)).rank());
        }
    }
    Ok(prof)
}

/// Verdict with its justification.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    True,
    False,
    Unknown,
}

/// A counting polynomial in report form.
#[derive(Clone, Debug, Serialize)]
pub struct PolyReport {
    pub coeffs: Vec<i128>,
    pub display: String,
    pub degree: i64,
    pub primes: Vec<u64>,
}

impl From<&CountPolynomial> for PolyReport {
    fn from(p: &CountPolynomial) -> Self {
        let mut primes: Vec<u64> = p.samples.iter().map(|s| s.0).collect();
        primes.extend(p.held_out.map(|h| h.0));
        PolyReport { coeffs: p.coeffs.clone(), display: p.to_string(), degree: p.degree(), primes }
    }
}

/// Fibre data over one fibre piece: the points of a (sub, quotient) piece of
/// Gr_e(M) whose M̂/Û has a given rank profile.
#[derive(Clone, Debug, Serialize)]
pub struct PieceReport {
    pub sub: String,
    pub quotient: String,
    pub profile: Vec<usize>,
    /// Dimension of the coarse stratum S_[sub].
    pub coarse_dim: i64,
    /// Point counts per check prime.
    pub counts: BTreeMap<u64, u128>,
    pub count_poly: Option<PolyReport>,
    pub piece_dim: i64,
    /// "count-polynomial degree" or "coarse stratum bound".
    pub piece_dim_source: String,
    /// The fibre value per check prime (at the first point when not constant).
    pub fibre: BTreeMap<u64, u128>,
    pub fibre_constant: bool,
    pub fibre_poly: Option<PolyReport>,
    /// −1 for empty fibres; None when not determined.
    pub fibre_dim: Option<i64>,
    /// Tangent dimension at the first point, per check prime.
    pub tangent_dim: BTreeMap<u64, usize>,
    /// (r', r'') when the quiver is A2.
    pub a2_orbit: Option<(i64, i64)>,
}

/// Report for one generic candidate N.
#[derive(Clone, Debug, Serialize)]
pub struct CandidateReport {
    pub n_type: String,
    pub n_hat: Vec<(String, usize)>,
    pub m_hat: Vec<(String, usize)>,
    /// ⟨dim N̂, dim M̂ − dim N̂⟩ of B_Q.
    pub euler_dim: i64,
    /// Dimension of S_[N], the component dimension.
    pub component_dim: i64,
    pub totals: BTreeMap<u64, u128>,
    pub total_poly: Option<PolyReport>,
    pub degree_matches_euler: Option<bool>,
    /// Leading coefficient of the total-space polynomial (number of top-dimensional components).
    pub leading_coefficient: Option<i128>,
    /// Σ_U |fibre(U)| per check prime; must equal `totals`.
    pub fibre_sums: BTreeMap<u64, u128>,
    pub identity_holds: bool,
    pub generic_fibres_all_one: bool,
    pub pieces: Vec<PieceReport>,
    pub max_fibre_dim: Option<i64>,
    /// Number of base points whose fibre has the maximal dimension, per check prime.
    pub points_with_max_fibre_dim: BTreeMap<u64, u128>,
    pub small: Verdict,
    pub small_detail: Vec<String>,
}

/// The full desingularization report.
#[derive(Clone, Debug, Serialize)]
pub struct DesingReport {
    pub m_type: String,
    pub e: Vec<usize>,
    pub check_primes: Vec<u64>,
    pub gr_counts: BTreeMap<u64, u128>,
    pub gr_poly: Option<PolyReport>,
    pub candidates: Vec<String>,
    pub exactness: Exactness,
    pub survivors: Vec<String>,
    pub smooth_certified: Vec<String>,
    pub per_candidate: Vec<CandidateReport>,
    pub one_to_one_over_smooth: Verdict,
    pub smooth_locus_source: String,
    /// For A2: the value derived from the closed-form fibres over the smooth orbits.
    pub a2_closed_form_one_to_one: Option<bool>,
}

/// Configuration of a desingularization run.
#[derive(Clone, Debug)]
pub struct DesingConfig {
    /// Primes at which every base point is checked.
    pub check_primes: Vec<u64>,
    /// Maximal number of sample primes for a polynomial fit.
    pub max_fit_primes: usize,
    pub opts: GrassOptions,
}

impl Default for DesingConfig {
    fn default() -> Self {
        DesingConfig { check_primes: vec![2, 3], max_fit_primes: 6, opts: GrassOptions::default() }
    }
}

/// A fibre piece: index into the base (sub, quotient) pieces plus a profile.
type FKey = (usize, Vec<usize>);

/// Lazily built prime contexts and per-point profiles.
struct Contexts<'a> {
    make: &'a (dyn Fn(u32) -> Result<Representation> + Sync),
    e: Vec<usize>,
    opts: GrassOptions,
    cache: Mutex<BTreeMap<u64, Arc<PrimeContext>>>,
    profiles: Mutex<BTreeMap<u64, Arc<Vec<Vec<usize>>>>>,
}

impl Contexts<'_> {
    fn get(&self, q: u64) -> Result<Arc<PrimeContext>> {
        if let Some(c) = self.cache.lock().expect("cache lock").get(&q) {
            return Ok(c.clone());
        }
        let m = (self.make)(q as u32)?;
        ensure!(m.field().p() as u64 == q, "representation for F_{q} built over F_{}", m.field().p());
        let ctx = Arc::new(PrimeContext::new(m, &self.e, &self.opts)?);
        self.cache.lock().expect("cache lock").insert(q, ctx.clone());
        Ok(ctx)
    }

    /// Quotient profiles of every point of Gr_e(M)(F_q).
    fn profiles(&self, q: u64) -> Result<Arc<Vec<Vec<usize>>>> {
        if let Some(p) = self.profiles.lock().expect("profile lock").get(&q) {
            return Ok(p.clone());
        }
        let ctx = self.get(q)?;
        let pts: Vec<&Point> = ctx.classified.points.iter().collect();
        let prof = self.opts.exec.map(pts, |u| quotient_profile(&ctx.mhat, &ctx.mhat.sub_point(&ctx.qhat, u)?)).into_iter().collect::<Result<Vec<_>>>()?;
        let prof = Arc::new(prof);
        self.profiles.lock().expect("profile lock").insert(q, prof.clone());
        Ok(prof)
    }

    /// Point indices of a fibre piece over F_q (keyed by the base pieces of `base`).
    fn members(&self, base: &PrimeContext, q: u64, key: &FKey) -> Result<Vec<usize>> {
        let ctx = self.get(q)?;
        let p0 = &base.classified.strat.pieces[key.0];
        let Some(pi) = ctx.piece_index(&p0.sub, &p0.quo) else { return Ok(vec![]) };
        let prof = self.profiles(q)?;
        Ok((0..ctx.classified.points.len()).filter(|&k| ctx.classified.piece_of[k] == pi && prof[k] == key.1).collect())
    }
}

/// Adaptive fit over the sample primes; `None` if no prefix verifies.
fn fit(max_len: usize, f: impl Fn(u64) -> Result<Option<u128>>) -> Result<Option<CountPolynomial>> {
    let mut samples = Vec::new();
    for &p in SAMPLE_PRIMES.iter().take(max_len) {
        match f(p)? {
            Some(v) => samples.push((p, v)),
            None => return Ok(None),
        }
        if samples.len() >= 2 {
            if let Ok(poly) = CountPolynomial::interpolate(&samples) {
                return Ok(Some(poly));
            }
        }
    }
    Ok(None)
}

/// Builds the desingularization report. `make(p)` must return M over F_p.
pub fn desing_report(make: &(dyn Fn(u32) -> Result<Representation> + Sync), e: &[usize], cfg: &DesingConfig) -> Result<DesingReport> {
    if cfg.check_primes.is_empty() {
        return Err(Error::Malformed("no check primes".into()));
    }
    let inner_opts = GrassOptions { exec: Exec::Sequential, ..cfg.opts.clone() };
    let ctxs = Contexts { make, e: e.to_vec(), opts: cfg.opts.clone(), cache: Mutex::new(BTreeMap::new()), profiles: Mutex::new(BTreeMap::new()) };
    let base = ctxs.get(cfg.check_primes[0])?;
    let t0 = base.table.clone();
    let gen = generic_candidates(&base)?;
    for &q in &cfg.check_primes[1..] {
        let g = generic_candidates(&*ctxs.get(q)?)?;
        ensure!(g.candidates == gen.candidates, "generic candidates differ between F_{} and F_{q}", cfg.check_primes[0]);
    }
    let iso = |x: &IsoType| t0.iso_string(x);
    let labels = base.qhat.quiver().labels().to_vec();
    let labeled = |v: &[usize]| labels.iter().cloned().zip(v.iter().copied()).collect::<Vec<_>>();
    let a2 = a2_instance(&t0, &base.m_type, e);
    let pieces0 = &base.classified.strat.pieces;

    let mut gr_counts = BTreeMap::new();
    // fibre pieces present at the check primes, with their members
    let mut members: BTreeMap<FKey, BTreeMap<u64, Vec<usize>>> = BTreeMap::new();
    for &q in &cfg.check_primes {
        let ctx = ctxs.get(q)?;
        gr_counts.insert(q, ctx.classified.strat.total);
        let prof = ctxs.profiles(q)?;
        let to_base: Vec<Option<usize>> = ctx.classified.strat.pieces.iter().map(|p| base.piece_index(&p.sub, &p.quo)).collect();
        for k in 0..ctx.classified.points.len() {
            let i = to_base[ctx.classified.piece_of[k]].ok_or_else(|| Error::Invariant(format!("piece over F_{q} missing over F_{}", base.q)))?;
            members.entry((i, prof[k].clone())).or_default().entry(q).or_default().push(k);
        }
    }
    let fkeys: Vec<FKey> = members.keys().cloned().collect();
    let gr_poly = fit(cfg.max_fit_primes, |q| Ok(Some(ctxs.get(q)?.classified.strat.total)))?;
    let count_polys: Vec<Option<CountPolynomial>> = fkeys
        .iter()
        .map(|key| fit(cfg.max_fit_primes, |q| Ok(Some(ctxs.members(&base, q, key)?.len() as u128))))
        .collect::<Result<_>>()?;

    let mut per_candidate = Vec::new();
    let mut total_fibre: BTreeMap<(u64, usize), Option<u128>> = BTreeMap::new();
    for n in &gen.candidates {
        let n_hat = base.qhat.mhat_dim(n);
        let m_hat = base.qhat.mhat_dim(&base.m_type);
        let diff: Vec<i64> = m_hat.iter().zip(&n_hat).map(|(a, b)| *a as i64 - *b as i64).collect();
        let euler_dim = base.qhat.euler_form(&n_hat.iter().map(|&x| x as i64).collect::<Vec<_>>(), &diff);
        let component_dim = crate::grassmannian::stratum_dim(&t0, n, &base.m_type);
        let mut totals = BTreeMap::new();
        let mut fibre_sums = BTreeMap::new();
        let mut identity_holds = true;
        let mut fib: Vec<BTreeMap<u64, u128>> = vec![BTreeMap::new(); fkeys.len()];
        let mut constant = vec![true; fkeys.len()];
        let mut tangent: Vec<BTreeMap<u64, usize>> = vec![BTreeMap::new(); fkeys.len()];
        for &q in &cfg.check_primes {
            let ctx = ctxs.get(q)?;
            let total = count_points(&ctx.mhat.rep, &n_hat, &cfg.opts)?;
            totals.insert(q, total);
            let pts: Vec<&Point> = ctx.classified.points.iter().collect();
            let fibres = cfg.opts.exec.map(pts, |u| fibre_count(&ctx.qhat, &ctx.mhat, u, &n_hat, &inner_opts)).into_iter().collect::<Result<Vec<u128>>>()?;
            let sum: u128 = fibres.iter().sum();
            identity_holds &= sum == total;
            fibre_sums.insert(q, sum);
            for (j, key) in fkeys.iter().enumerate() {
                let Some(ks) = members[key].get(&q) else {
                    constant[j] = false;
                    continue;
                };
                let v = fibres[ks[0]];
                constant[j] &= ks.iter().all(|&k| fibres[k] == v);
                fib[j].insert(q, v);
                tangent[j].insert(q, tangent_dim(&ctx.m, &ctx.classified.points[ks[0]])?);
                // summed over candidates; None once a fibre varies along the piece
                let slot = total_fibre.entry((q, j)).or_insert(Some(0));
                *slot = match (*slot, ks.iter().all(|&k| fibres[k] == v)) {
                    (Some(t), true) => Some(t + v),
                    _ => None,
                };
            }
        }
        let generic_one = fkeys.iter().enumerate().filter(|(_, k)| &pieces0[k.0].sub == n).all(|(j, _)| constant[j] && fib[j].values().all(|&v| v == 1));
        let total_poly = fit(cfg.max_fit_primes, |q| {
            let ctx = ctxs.get(q)?;
            Ok(Some(count_points(&ctx.mhat.rep, &n_hat, &cfg.opts)?))
        })?;
        let mut pieces = Vec::new();
        for (j, key) in fkeys.iter().enumerate() {
            let p0 = &pieces0[key.0];
            let fibre_poly = if constant[j] {
                fit(cfg.max_fit_primes, |q| {
                    let ks = ctxs.members(&base, q, key)?;
                    let Some(&k) = ks.first() else { return Ok(None) };
                    let ctx = ctxs.get(q)?;
                    Ok(Some(fibre_count(&ctx.qhat, &ctx.mhat, &ctx.classified.points[k], &n_hat, &cfg.opts)?))
                })?
            } else {
                None
            };
            let (piece_dim, src) = match &count_polys[j] {
                Some(p) => (p.degree(), "count-polynomial degree"),
                None => (p0.coarse_dim, "coarse stratum bound"),
            };
            let fibre_dim = if constant[j] && fib[j].values().all(|&v| v == 0) { Some(-1) } else { fibre_poly.as_ref().map(|p| p.degree()) };
            pieces.push(PieceReport {
                sub: iso(&p0.sub),
                quotient: iso(&p0.quo),
                profile: key.1.clone(),
                coarse_dim: p0.coarse_dim,
                counts: members[key].iter().map(|(&q, ks)| (q, ks.len() as u128)).collect(),
                count_poly: count_polys[j].as_ref().map(PolyReport::from),
                piece_dim,
                piece_dim_source: src.into(),
                fibre: fib[j].clone(),
                fibre_constant: constant[j],
                fibre_poly: fibre_poly.as_ref().map(PolyReport::from),
                fibre_dim,
                tangent_dim: tangent[j].clone(),
                a2_orbit: a2.as_ref().map(|(_, ids)| a2_orbit_of(ids, &p0.sub, &p0.quo)),
            });
        }
        // smallness over the fibre pieces
        let mut small = Verdict::True;
        let mut detail = Vec::new();
        for (p, key) in pieces.iter().zip(&fkeys) {
            if &pieces0[key.0].sub == n {
                continue;
            }
            let name = format!("({}, {}, {:?})", p.sub, p.quotient, p.profile);
            match p.fibre_dim {
                Some(f) if f <= 0 => {}
                Some(f) => {
                    let exact = p.piece_dim_source == "count-polynomial degree";
                    let codim = component_dim - p.piece_dim;
                    let ok = 2 * f < codim;
                    detail.push(format!("piece {name}: fibre dim {f}, codim {codim}{}: {}", if exact { "" } else { " (lower bound)" }, if ok { "ok" } else { "violated" }));
                    if !ok {
                        small = if exact && small != Verdict::Unknown { Verdict::False } else { Verdict::Unknown };
                    }
                }
                None => {
                    detail.push(format!("piece {name}: fibre dimension undetermined"));
                    if small == Verdict::True {
                        small = Verdict::Unknown;
                    }
                }
            }
        }
        let max_fibre_dim = pieces.iter().filter_map(|p| p.fibre_dim).max();
        let mut points_with_max = BTreeMap::new();
        if let Some(mx) = max_fibre_dim {
            for &q in &cfg.check_primes {
                let c: u128 = pieces.iter().filter(|p| p.fibre_dim == Some(mx)).map(|p| p.counts.get(&q).copied().unwrap_or(0)).sum();
                points_with_max.insert(q, c);
            }
        }
        per_candidate.push(CandidateReport {
            n_type: iso(n),
            n_hat: labeled(&n_hat),
            m_hat: labeled(&m_hat),
            euler_dim,
            component_dim,
            totals,
            leading_coefficient: total_poly.as_ref().map(|p| p.leading()),
            degree_matches_euler: total_poly.as_ref().map(|p| p.degree() == euler_dim),
            total_poly: total_poly.as_ref().map(PolyReport::from),
            fibre_sums,
            identity_holds,
            generic_fibres_all_one: generic_one,
            pieces,
            max_fibre_dim,
            points_with_max_fibre_dim: points_with_max,
            small,
            small_detail: detail,
        });
    }

    // one-to-one over the smooth locus of Gr_e(M): every smooth point has
    // exactly one preimage in the union of the Gr_{dim N̂}(M̂)
    let (smooth, source): (Option<Vec<bool>>, &str) = if let Some((inst, ids)) = &a2 {
        let v = fkeys
            .iter()
            .map(|k| {
                let (rp, rpp) = a2_orbit_of(ids, &pieces0[k.0].sub, &pieces0[k.0].quo);
                inst.is_smooth(rp, rpp)
            })
            .collect();
        (Some(v), "A2 closed form")
    } else if gen.exactness == Exactness::SingleMaximal {
        let d = crate::grassmannian::stratum_dim(&t0, &gen.candidates[0], &base.m_type);
        let mut v = Vec::new();
        for key in &fkeys {
            let mut all = true;
            for (&q, ks) in &members[key] {
                let ctx = ctxs.get(q)?;
                for &k in ks {
                    all &= tangent_dim(&ctx.m, &ctx.classified.points[k])? as i64 == d;
                }
            }
            v.push(all);
        }
        (Some(v), "tangent dimension equals the component dimension")
    } else {
        (None, "unknown (components not certified)")
    };
    let one_to_one = match &smooth {
        Some(sm) => {
            let ok = (0..fkeys.len()).filter(|&j| sm[j]).all(|j| cfg.check_primes.iter().all(|&q| total_fibre.get(&(q, j)).is_none_or(|&v| v == Some(1))));
            if ok {
                Verdict::True
            } else {
                Verdict::False
            }
        }
        None => Verdict::Unknown,
    };
    Ok(DesingReport {
        m_type: iso(&base.m_type),
        e: e.to_vec(),
        check_primes: cfg.check_primes.clone(),
        gr_counts,
        gr_poly: gr_poly.as_ref().map(PolyReport::from),
        candidates: gen.candidates.iter().map(iso).collect(),
        exactness: gen.exactness,
        survivors: gen.survivors.iter().map(iso).collect(),
        smooth_certified: gen.smooth_certified.iter().map(iso).collect(),
        per_candidate,
        one_to_one_over_smooth: one_to_one,
        smooth_locus_source: source.into(),
        a2_closed_form_one_to_one: a2.map(|(inst, _)| inst.one_to_one_over_smooth()),
    })
}
