//! Subcommand implementations. Every command produces a JSON report wrapped
//! in a versioned envelope; reports contain no timings or thread counts, so
//! they are byte-stable across runs and `--jobs` settings.

use crate::cache::{sha256_hex, Cache};
use crate::{A2Action, Cli, Command, Failure};
use qdesing::a2_sweep::{sweep, SweepConfig};
use qdesing::desing::{desing_report, DesingConfig};
use qdesing::dot::{ar_quiver_dot, qhat_dot, quiver_dot};
use qdesing::field::is_prime;
use qdesing::grassmannian::{classify_points, count_points, tangent_dim, GrassOptions};
use qdesing::hq::{object_label, parse_dim_vector, QHat};
use qdesing::instance::Instance;
use qdesing::par::Exec;
use qdesing::poly::{count_polynomial_adaptive, CountPolynomial};
use qdesing::{Error, IndecTable, PrimeField, Quiver, Representation};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use std::path::Path;
use std::sync::Arc;

pub const SCHEMA_VERSION: u32 = 1;

/// Shared configuration derived from the global flags.
pub struct Ctx {
    pub primes: Vec<u64>,
    pub opts: GrassOptions,
    pub seed: Option<u64>,
}

pub fn parse_primes(s: &str) -> Result<Vec<u64>, Error> {
    let mut out: Vec<u64> = Vec::new();
    for tok in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        let p: u64 = tok.parse().map_err(|_| Error::Malformed(format!("bad prime {tok:?}")))?;
        if !is_prime(p) || p > u32::MAX as u64 {
            return Err(Error::NotPrime(p));
        }
        if out.contains(&p) {
            return Err(Error::Malformed(format!("prime {p} listed twice")));
        }
        out.push(p);
    }
    if out.is_empty() {
        return Err(Error::Malformed("no primes given".into()));
    }
    Ok(out)
}

fn labeled(labels: &[String], v: &[usize]) -> Value {
    Value::Array(labels.iter().zip(v).map(|(l, x)| json!([l, x])).collect())
}

fn table_at(q: &Arc<Quiver>, p: u64) -> Result<Arc<IndecTable>, Error> {
    Ok(Arc::new(IndecTable::new(q.clone(), PrimeField::new(p as u32)?)?))
}

fn qhat_of(ctx: &Ctx, t: Arc<IndecTable>) -> Result<QHat, Error> {
    match ctx.seed {
        Some(s) => QHat::with_perturbed_lifts(t, s),
        None => QHat::new(t),
    }
}

fn poly_json(p: &CountPolynomial) -> Value {
    let mut primes: Vec<u64> = p.samples.iter().map(|s| s.0).collect();
    primes.extend(p.held_out.map(|h| h.0));
    json!({ "coeffs": p.coeffs, "display": p.to_string(), "degree": p.degree(), "primes": primes })
}

/// Output of a command: the report plus extra files for `--out`.
struct Output {
    result: Value,
    /// Extra (file name, contents) written next to the report.
    files: Vec<(String, String)>,
    /// Written to stdout instead of the JSON report when set.
    stdout: Option<String>,
    /// A failed check: the report is written, then the command exits with 4.
    failed: Option<String>,
}

impl Output {
    fn ok(result: Value) -> Self {
        Output { result, files: vec![], stdout: None, failed: None }
    }
}

pub fn run(cli: &Cli) -> Result<(), Failure> {
    let primes = parse_primes(&cli.primes)?;
    if cli.budget == Some(0) {
        return Err(Error::Malformed("budget must be positive".into()).into());
    }
    let exec = match cli.jobs {
        Some(0) => return Err(Error::Malformed("--jobs must be positive".into()).into()),
        Some(1) => Exec::Sequential,
        _ => Exec::Parallel,
    };
    #[cfg(feature = "parallel")]
    if let Some(n) = cli.jobs {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let ctx = Ctx { primes, opts: GrassOptions { exec, budget: cli.budget, order: None }, seed: cli.seed };
    let cache = Cache::new(cli.cache.clone());

    let (name, inst_text) = match instance_path(&cli.command) {
        Some(p) => {
            let inst = Instance::load(p)?;
            let canon = serde_json::to_string(&inst).expect("instance serializes");
            (inst.name.clone(), Some((inst, canon)))
        }
        None => (String::new(), None),
    };
    let command_name = command_name(&cli.command);
    let config = json!({ "primes": ctx.primes, "budget": cli.budget, "seed": cli.seed, "args": command_args(&cli.command) });
    let instance_json = inst_text.as_ref().map(|(i, canon)| json!({ "name": i.name, "sha256": sha256_hex(canon.as_bytes()) }));
    let key = Cache::key(&[&SCHEMA_VERSION.to_string(), command_name, &config.to_string(), inst_text.as_ref().map_or("", |x| x.1.as_str())]);
    let cacheable = !matches!(cli.command, Command::Fixtures { .. });

    let cached = cache.get(&key).filter(|_| cacheable).and_then(|text| serde_json::from_str::<Cached>(&text).ok());
    let cached = match cached {
        Some(c) => c,
        None => {
            let result = match &inst_text {
                Some((inst, _)) => execute(&ctx, &cli.command, Some(inst)),
                None => execute(&ctx, &cli.command, None),
            };
            let (status, out, err) = match result {
                Ok(out) => (if out.failed.is_some() { "check_failed" } else { "ok" }, Some(out), None),
                Err(Failure::Lib(e @ Error::BudgetExceeded { .. })) => ("budget_exceeded", None, Some(e)),
                Err(f) => return Err(f),
            };
            let mut env = json!({
                "schema_version": SCHEMA_VERSION,
                "command": command_name,
                "instance": instance_json,
                "config": config,
                "status": status,
                "result": out.as_ref().map_or(Value::Null, |o| o.result.clone()),
            });
            if let Some(e) = &err {
                env["error"] = json!(e.to_string());
            }
            let report = serde_json::to_string_pretty(&env).expect("report serializes") + "\n";
            if let Some(e) = err {
                emit(cli, command_name, &name, &report, None, &[])?;
                return Err(e.into());
            }
            let out = out.expect("set when no error");
            let c = Cached { report, files: out.files, stdout: out.stdout, failed: out.failed };
            if c.failed.is_none() && cacheable {
                cache.put(&key, &serde_json::to_string(&c).expect("serializes"));
            }
            c
        }
    };
    emit(cli, command_name, &name, &cached.report, cached.stdout.as_deref(), &cached.files)?;
    if let Some(msg) = cached.failed {
        return Err(Failure::Check(msg));
    }
    Ok(())
}

/// Everything a command writes, as stored in the cache.
#[derive(Serialize, Deserialize)]
struct Cached {
    report: String,
    files: Vec<(String, String)>,
    stdout: Option<String>,
    failed: Option<String>,
}

fn emit(cli: &Cli, command: &str, name: &str, report: &str, stdout: Option<&str>, files: &[(String, String)]) -> Result<(), Failure> {
    print!("{}", stdout.unwrap_or(report));
    write_files(cli, command, name, report, files)
}

fn write_files(cli: &Cli, command: &str, name: &str, report: &str, files: &[(String, String)]) -> Result<(), Failure> {
    let Some(dir) = &cli.out else { return Ok(()) };
    let io = |e: std::io::Error| Failure::Lib(Error::Malformed(format!("cannot write to {}: {e}", dir.display())));
    std::fs::create_dir_all(dir).map_err(io)?;
    let stem = if name.is_empty() { command.to_string() } else { format!("{command}-{name}") };
    std::fs::write(dir.join(format!("{stem}.json")), report).map_err(io)?;
    for (f, body) in files {
        std::fs::write(dir.join(format!("{stem}-{f}")), body).map_err(io)?;
    }
    Ok(())
}

fn instance_path(c: &Command) -> Option<&Path> {
    match c {
        Command::IndecTable { instance }
        | Command::Qhat { instance, .. }
        | Command::Mhat { instance }
        | Command::Count { instance, .. }
        | Command::Stratify { instance, .. }
        | Command::Desing { instance, .. } => Some(instance),
        _ => None,
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::IndecTable { .. } => "indec-table",
        Command::Qhat { .. } => "qhat",
        Command::Mhat { .. } => "mhat",
        Command::Count { .. } => "count",
        Command::Stratify { .. } => "stratify",
        Command::Desing { .. } => "desing",
        Command::A2 { .. } => "a2-sweep",
        Command::Fixtures { .. } => "fixtures",
    }
}

fn command_args(c: &Command) -> Value {
    match c {
        Command::Qhat { json, .. } => json!({ "json": json }),
        Command::Count { e, fit, .. } => json!({ "e": e, "fit": fit }),
        Command::Stratify { e, .. } => json!({ "e": e }),
        Command::Desing { e, fit_primes, .. } => json!({ "e": e, "fit_primes": fit_primes }),
        Command::A2 { action: A2Action::Sweep { bound } } => json!({ "bound": bound }),
        Command::Fixtures { dir } => json!({ "dir": dir }),
        _ => json!({}),
    }
}

fn execute(ctx: &Ctx, c: &Command, inst: Option<&Instance>) -> Result<Output, Failure> {
    match c {
        Command::IndecTable { .. } => indec_table(ctx, inst.expect("instance")),
        Command::Qhat { json, .. } => qhat(ctx, inst.expect("instance"), *json),
        Command::Mhat { .. } => mhat(ctx, inst.expect("instance")),
        Command::Count { e, fit, .. } => count(ctx, inst.expect("instance"), e.as_deref(), *fit),
        Command::Stratify { e, .. } => stratify(ctx, inst.expect("instance"), e.as_deref()),
        Command::Desing { e, fit_primes, .. } => desing(ctx, inst.expect("instance"), e.as_deref(), *fit_primes),
        Command::A2 { action: A2Action::Sweep { bound } } => a2_sweep(ctx, *bound),
        Command::Fixtures { dir } => {
            let checks = crate::fixtures::run(ctx, dir)?;
            let failed: Vec<String> = checks.iter().filter(|c| !c.pass).map(|c| c.name.clone()).collect();
            let mut out = Output::ok(json!({ "checks": checks, "passed": checks.len() - failed.len(), "failed": failed }));
            if !failed.is_empty() {
                out.failed = Some(format!("{} fixture checks failed: {}", failed.len(), failed.join(", ")));
            }
            Ok(out)
        }
    }
}

fn indec_table(ctx: &Ctx, inst: &Instance) -> Result<Output, Failure> {
    let q = Arc::new(inst.quiver()?);
    let t = table_at(&q, ctx.primes[0])?;
    let mut field_independent = true;
    for &p in &ctx.primes[1..] {
        let u = table_at(&q, p)?;
        field_independent &= u.hom_table() == t.hom_table() && u.indecs().iter().zip(t.indecs()).all(|(a, b)| a.label == b.label && a.dim == b.dim && a.tau == b.tau);
    }
    let lab = |i: usize| t.indec(i).label.clone();
    let indecs: Vec<Value> = t
        .indecs()
        .iter()
        .map(|x| {
            json!({
                "label": x.label, "dim": x.dim, "projective": x.is_projective, "injective": x.is_injective,
                "tau": x.tau.map(lab), "tau_inverse": x.tau_inv.map(lab),
            })
        })
        .collect();
    let result = json!({
        "dynkin_type": q.dynkin_type().map(|d| d.to_string()),
        "vertices": q.labels(),
        "indecomposables": indecs,
        "irreducible_maps": t.ar_arrows().iter().map(|&(a, b)| json!([lab(a), lab(b)])).collect::<Vec<_>>(),
        "hom_table": t.hom_table(),
        "field_independent": field_independent,
    });
    let mut out = Output::ok(result);
    out.files = vec![("quiver.dot".into(), quiver_dot(&q, "Q")), ("ar.dot".into(), ar_quiver_dot(&t))];
    Ok(out)
}

fn qhat(ctx: &Ctx, inst: &Instance, as_json: bool) -> Result<Output, Failure> {
    let q = Arc::new(inst.quiver()?);
    let qh = qhat_of(ctx, table_at(&q, ctx.primes[0])?)?;
    let qq = qh.quiver();
    let l = |v: usize| qq.label(v).to_string();
    let result = json!({
        "vertices": qq.labels(),
        "num_vertices": qq.num_vertices(),
        "num_arrows": qq.num_arrows(),
        "arrows": qq.arrows().iter().map(|&(a, b)| json!([l(a), l(b)])).collect::<Vec<_>>(),
        "objects": qh.objects().iter().map(|&o| object_label(qh.table(), o)).collect::<Vec<_>>(),
        "relations": qh.relations().iter().map(|r| json!({
            "from": l(r.from), "to": l(r.to), "count": r.count, "kind": r.kind,
            "paths": r.paths.iter().map(|p| p.iter().map(|&a| l(qq.arrow(a).1)).collect::<Vec<_>>()).collect::<Vec<_>>(),
        })).collect::<Vec<_>>(),
        "relation_count": qh.relation_count(),
        "cartan": qh.cartan(),
        "euler_matrix": qh.euler_matrix(),
        "underlying_dynkin_type": qdesing::quiver::classify(qq.num_vertices(), qq.arrows()).ok().map(|d| d.to_string()),
    });
    let dot = qhat_dot(&qh);
    let mut out = Output::ok(result);
    out.files = vec![("qhat.dot".into(), dot.clone())];
    if !as_json {
        out.stdout = Some(dot);
    }
    Ok(out)
}

fn mhat(ctx: &Ctx, inst: &Instance) -> Result<Output, Failure> {
    let q = Arc::new(inst.quiver()?);
    let mut per = serde_json::Map::new();
    let mut ok = true;
    for &p in &ctx.primes {
        let t = table_at(&q, p)?;
        let qh = qhat_of(ctx, t.clone())?;
        let m = inst.representation(&q, p as u32)?;
        let ty = t.decompose(&m)?;
        let mh = qh.mhat_explicit(&m)?;
        let dims = qh.mhat_dim(&ty);
        let lambda = qh.check_lambda_image(&mh.rep);
        let ext1 = qh.ext1_from_mhat(&ty, &mh.rep)?;
        let res_ok = qh.restrict(&mh.rep)?.dims() == m.dims();
        ok &= lambda && ext1 == 0 && res_ok && mh.rep.dims() == dims.as_slice();
        per.insert(p.to_string(), json!({
            "m_type": t.iso_string(&ty),
            "mhat_dim": labeled(qh.quiver().labels(), &dims),
            "explicit_matches_formula": mh.rep.dims() == dims.as_slice(),
            "lambda_image": lambda,
            "ext1_self": ext1,
            "restriction_recovers_dims": res_ok,
        }));
    }
    let mut out = Output::ok(json!({ "per_prime": per }));
    if !ok {
        out.failed = Some("M̂ homological checks failed".into());
    }
    Ok(out)
}

/// Dimension vector of M (length |Q|) or of M̂ (length |Q̂|).
enum Space {
    M(Vec<usize>),
    MHat(Vec<usize>),
}

fn parse_e(q: &Quiver, qh: &QHat, inst: &Instance, e: Option<&str>) -> Result<Space, Error> {
    match e {
        Some(s) => match parse_dim_vector(q, s) {
            Ok(v) => Ok(Space::M(v)),
            Err(e1) => parse_dim_vector(qh.quiver(), s).map(Space::MHat).map_err(|e2| Error::Malformed(format!("--e fits neither Q ({e1}) nor Q̂ ({e2})"))),
        },
        None => match (&inst.e, &inst.ehat) {
            (Some(v), _) => Ok(Space::M(v.clone())),
            (None, Some(s)) => Ok(Space::MHat(qh.parse_dim(s)?)),
            _ => Err(Error::Malformed("no dimension vector: pass --e or set \"e\" in the instance".into())),
        },
    }
}

fn count(ctx: &Ctx, inst: &Instance, e: Option<&str>, fit: bool) -> Result<Output, Failure> {
    let q = Arc::new(inst.quiver()?);
    let qh0 = QHat::new(table_at(&q, ctx.primes[0])?)?;
    let space = parse_e(&q, &qh0, inst, e)?;
    let count_at = |p: u64| -> Result<u128, Error> {
        let m = inst.representation(&q, p as u32)?;
        match &space {
            Space::M(e) => count_points(&m, e, &ctx.opts),
            Space::MHat(e) => {
                let qh = qhat_of(ctx, table_at(&q, p)?)?;
                count_points(&qh.mhat_explicit(&m)?.rep, e, &ctx.opts)
            }
        }
    };
    let (kind, e_json) = match &space {
        Space::M(e) => ("Gr_e(M)", labeled(q.labels(), e)),
        Space::MHat(e) => ("Gr_e(M̂)", labeled(qh0.quiver().labels(), e)),
    };
    let result = if fit {
        let poly = count_polynomial_adaptive(2, 9, count_at)?;
        json!({ "space": kind, "e": e_json, "counts": poly.samples.iter().chain(poly.held_out.iter()).map(|s| (s.0.to_string(), json!(s.1))).collect::<serde_json::Map<_, _>>(), "poly": poly_json(&poly) })
    } else {
        let mut samples = Vec::new();
        for &p in &ctx.primes {
            samples.push((p, count_at(p)?));
        }
        let poly = CountPolynomial::interpolate(&samples).ok();
        json!({
            "space": kind, "e": e_json,
            "counts": samples.iter().map(|s| (s.0.to_string(), json!(s.1))).collect::<serde_json::Map<_, _>>(),
            "poly": poly.as_ref().map(poly_json),
        })
    };
    Ok(Output::ok(result))
}

fn stratify(ctx: &Ctx, inst: &Instance, e: Option<&str>) -> Result<Output, Failure> {
    let q = Arc::new(inst.quiver()?);
    let qh0 = QHat::new(table_at(&q, ctx.primes[0])?)?;
    let Space::M(e) = parse_e(&q, &qh0, inst, e)? else {
        return Err(Error::Malformed("stratify needs a dimension vector of Q".into()).into());
    };
    let mut per = serde_json::Map::new();
    for &p in &ctx.primes {
        let t = table_at(&q, p)?;
        let m = inst.representation(&q, p as u32)?;
        let c = classify_points(&t, &m, &e, &ctx.opts)?;
        let mut pieces = Vec::new();
        for pc in &c.strat.pieces {
            pieces.push(json!({
                "sub": t.iso_string(&pc.sub), "quotient": t.iso_string(&pc.quo), "count": pc.count,
                "coarse_dim": pc.coarse_dim, "tangent_dim_at_sample": tangent_dim(&m, &pc.sample)?,
            }));
        }
        let coarse: Vec<Value> = c.strat.coarse_strata().iter().map(|s| json!({ "type": t.iso_string(&s.iso_type), "count": s.count, "dim": s.dim })).collect();
        per.insert(p.to_string(), json!({ "total": c.strat.total, "pieces": pieces, "strata": coarse }));
    }
    Ok(Output::ok(json!({ "e": labeled(q.labels(), &e), "per_prime": per })))
}

fn desing(ctx: &Ctx, inst: &Instance, e: Option<&str>, fit_primes: usize) -> Result<Output, Failure> {
    let q = Arc::new(inst.quiver()?);
    let qh0 = QHat::new(table_at(&q, ctx.primes[0])?)?;
    let Space::M(e) = parse_e(&q, &qh0, inst, e)? else {
        return Err(Error::Malformed("desing needs a dimension vector of Q".into()).into());
    };
    let make = |p: u32| -> qdesing::Result<Representation> { inst.representation(&q, p) };
    let cfg = DesingConfig { check_primes: ctx.primes.clone(), max_fit_primes: fit_primes, opts: ctx.opts.clone() };
    let r = desing_report(&make, &e, &cfg)?;
    let bad: Vec<String> = r.per_candidate.iter().filter(|c| !c.identity_holds || !c.generic_fibres_all_one).map(|c| c.n_type.clone()).collect();
    let mut out = Output::ok(serde_json::to_value(&r).expect("report serializes"));
    if !bad.is_empty() {
        out.failed = Some(format!("fibre identity or generic fibres failed for {}", bad.join("; ")));
    }
    Ok(out)
}

fn a2_sweep(ctx: &Ctx, bound: i64) -> Result<Output, Failure> {
    if !(0..=6).contains(&bound) {
        return Err(Error::Malformed(format!("bound {bound} outside 0..=6")).into());
    }
    let cfg = SweepConfig { bound, primes: ctx.primes.clone(), exec: ctx.opts.exec, budget: ctx.opts.budget, ..Default::default() };
    let r = sweep(&cfg)?;
    let mut out = Output::ok(serde_json::to_value(&r).expect("report serializes"));
    if !r.ok() {
        out.failed = Some(format!("{} agreement checks failed; first: {}", r.failures.len(), serde_json::to_string(&r.failures[0]).expect("serializes")));
    }
    Ok(out)
}
