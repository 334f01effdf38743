use std::fmt::Write as _;

use rayon::prelude::*;
use rig_poisson::cover::{enumerate_proper_covers, CliqueCover};
use rig_poisson::graph::io::host_to_edge_list;
use rig_poisson::graph::{count_induced_copies, PatternGraph};
use rig_poisson::oracle::{exact_distribution_with, exact_mean, exact_pi_detail};
use rig_poisson::sampler::{
    p_hat, project_graph, sample_gnp_with, sample_incidence_with, PHatMode, SamplingMethod, SeedSpec,
};
use rig_poisson::stats::{run_experiment, tv_to_poisson, tv_trend_holds, ExperimentConfig};
use rig_poisson::threshold::{
    classify_balance, eta0, floor_power, pi_predict, LambdaPolynomial, ModelParams, ThresholdReport,
};
use rig_poisson::graph::automorphism_count;
use rig_poisson::{Error, Rational};
use serde::Serialize;
use serde_json::{json, Value};

use crate::args::{AnalyzeArgs, Cli, Format, Method, OracleArgs, PHat, SampleArgs, SimulateArgs};
use crate::config::{
    edge_cover, load_pattern, parse_alpha, parse_c, parse_cover, resolve_seed, RunConfig, SCHEMA_VERSION,
};

pub const EXIT_INTERNAL: u8 = 1;
pub const EXIT_INPUT: u8 = 2;
pub const EXIT_REFUSAL: u8 = 3;
pub const EXIT_ASSERTION: u8 = 4;

#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    pub fn input(message: impl Into<String>) -> Self {
        CliError {
            code: EXIT_INPUT,
            message: message.into(),
        }
    }

    pub fn internal(message: impl Into<String>) -> Self {
        CliError {
            code: EXIT_INTERNAL,
            message: message.into(),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::CapExceeded { .. } | Error::BudgetExceeded { .. } => EXIT_REFUSAL,
            Error::Regime(_) => EXIT_ASSERTION,
            Error::Consistency(_) => EXIT_INTERNAL,
            Error::Parse { .. } | Error::InvalidPattern(_) | Error::InvalidParameter(_) | Error::Inconsistent(_) => {
                EXIT_INPUT
            }
        };
        CliError {
            code,
            message: e.to_string(),
        }
    }
}

/// Rendered output plus anything that changes the exit status.
pub struct Outcome {
    pub body: String,
    pub notes: Vec<String>,
    pub assertion_failure: Option<String>,
}

impl Outcome {
    fn ok(body: String) -> Self {
        Outcome {
            body,
            notes: Vec::new(),
            assertion_failure: None,
        }
    }
}

fn to_json(config: &RunConfig, result: impl Serialize) -> String {
    let doc = json!({
        "schema_version": SCHEMA_VERSION,
        "config": config,
        "result": result,
    });
    let mut s = serde_json::to_string_pretty(&doc).expect("output serializes");
    s.push('\n');
    s
}

fn method(m: Method) -> SamplingMethod {
    match m {
        Method::Auto => SamplingMethod::Auto,
        Method::Bernoulli => SamplingMethod::Bernoulli,
        Method::Skip => SamplingMethod::Skip,
    }
}

/// Shortest round-trip form, in scientific notation for very small or large values.
fn fmt_f(x: f64) -> String {
    let a = x.abs();
    if a != 0.0 && a.is_finite() && !(1e-4..1e9).contains(&a) {
        format!("{x:e}")
    } else {
        x.to_string()
    }
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt_f).unwrap_or_default()
}

fn cover_ids(c: &CliqueCover) -> String {
    c.to_ids()
        .iter()
        .map(|cl| cl.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(","))
        .collect::<Vec<_>>()
        .join(";")
}

#[derive(Serialize)]
struct AnalyzeResult<'a> {
    report: &'a ThresholdReport,
    lambda0_polynomial: String,
    c: Rational,
    lambda0_exact: Rational,
    lambda0: f64,
}

pub fn analyze(cli: &Cli, a: &AnalyzeArgs) -> Result<Outcome, CliError> {
    let mut cfg = RunConfig::new(cli, "analyze");
    let (h0, record) = load_pattern(&a.pattern)?;
    let alpha = parse_alpha(&a.alpha)?;
    let c = parse_c(&a.c)?;
    cfg.pattern = Some(record);
    cfg.alpha = Some(alpha.to_string());
    cfg.c = Some(c.to_string());

    let report = classify_balance(&h0, &alpha)?;
    let exact = report.lambda0.eval_exact(&c);
    let res = AnalyzeResult {
        report: &report,
        lambda0_polynomial: report.lambda0.to_string(),
        lambda0: exact.to_f64(),
        lambda0_exact: exact,
        c,
    };
    let body = match cli.format {
        Format::Json => to_json(&cfg, &res),
        Format::Csv => {
            let mut s = String::from("cover,sigma,eta1,critical\n");
            for row in &report.covers {
                let _ = writeln!(
                    s,
                    "\"{}\",{},{},{}",
                    cover_ids(&row.cover),
                    row.cover.total_size(),
                    row.eta1,
                    row.critical
                );
            }
            s
        }
        Format::Text => analyze_text(&res),
    };
    let mut out = Outcome::ok(body);
    out.notes = report.warnings.clone();
    Ok(out)
}

fn analyze_text(r: &AnalyzeResult) -> String {
    let rep = r.report;
    let mut s = String::new();
    let _ = writeln!(s, "pattern: {} vertices, {} edges, |aut| = {}", rep.order, rep.edges, rep.automorphisms);
    let _ = writeln!(s, "alpha: {}", rep.alpha);
    let _ = writeln!(s, "eta0: {}", rep.eta0);
    let _ = writeln!(s, "critical covers:");
    for (c, b) in rep.critical.iter().zip(&rep.balance) {
        let _ = writeln!(s, "  {:?}  sigma = {}  verdict = {:?}", c, c.total_size(), b.verdict);
    }
    let _ = writeln!(s, "strictly alpha-balanced: {}", rep.strictly_alpha_balanced);
    let _ = writeln!(s, "lambda0(c) = {}", r.lambda0_polynomial);
    let _ = writeln!(s, "lambda0({}) = {} = {}", r.c, r.lambda0_exact, r.lambda0);
    let _ = writeln!(
        s,
        "regime: m p^2 ~ n^({}), vanishes = {}",
        rep.regime.mp2_exponent, rep.regime.mp2_vanishes
    );
    for w in &rep.warnings {
        let _ = writeln!(s, "warning: {w}");
    }
    s
}

pub fn simulate(cli: &Cli, a: &SimulateArgs) -> Result<Outcome, CliError> {
    let mut cfg = RunConfig::new(cli, "simulate");
    let (h0, record) = load_pattern(&a.pattern)?;
    let alpha = parse_alpha(&a.alpha)?;
    let c = parse_c(&a.c)?;
    let (seed, source) = resolve_seed(a.seed)?;
    if a.replicates == 0 {
        return Err(CliError::input("need at least one replicate"));
    }
    if !(a.level > 0.0 && a.level < 1.0) {
        return Err(CliError::input(format!("--level must lie in (0, 1), got {}", a.level)));
    }
    cfg.pattern = Some(record);
    cfg.alpha = Some(alpha.to_string());
    cfg.c = Some(c.to_string());
    cfg.n = a.n.clone();
    cfg.replicates = Some(a.replicates);
    cfg.seed = Some(seed);
    cfg.seed_source = Some(source);
    cfg.force = a.force;
    cfg.assert_trend = a.assert_trend;
    cfg.set("bootstrap_resamples", a.bootstrap);
    cfg.set("level", a.level);
    cfg.set("method", a.method);
    cfg.set("per_replicate_counts", !a.no_replicates);

    let mut ecfg = ExperimentConfig::new(alpha, c.to_f64(), a.n.clone(), a.replicates, seed);
    ecfg.bootstrap_resamples = a.bootstrap;
    ecfg.level = a.level;
    ecfg.force = a.force;
    ecfg.method = method(a.method);
    let exp = run_experiment(&h0, &ecfg)?;
    let trend = tv_trend_holds(&exp.points);

    let body = match cli.format {
        Format::Json => {
            let mut v = serde_json::to_value(&exp).expect("experiment serializes");
            if a.no_replicates {
                if let Some(points) = v.get_mut("points").and_then(Value::as_array_mut) {
                    for p in points {
                        if let Some(o) = p.as_object_mut() {
                            o.remove("replicates");
                        }
                    }
                }
            }
            to_json(&cfg, json!({ "experiment": v, "tv_trend_holds": trend }))
        }
        Format::Csv | Format::Text => {
            let sep = if cli.format == Format::Csv { "," } else { "\t" };
            let cols = [
                "n", "m", "p", "replicates", "mean", "variance", "lambda0", "tv", "tv_lower", "tv_upper",
                "mean_lower", "mean_upper", "y0_mean", "y1_mean", "y1_share",
            ];
            let mut s = cols.join(sep);
            s.push('\n');
            for pt in &exp.points {
                let sm = &pt.summary;
                let row = [
                    pt.n.to_string(),
                    pt.m.to_string(),
                    fmt_f(pt.p),
                    sm.replicates.to_string(),
                    fmt_f(sm.mean),
                    fmt_f(sm.variance),
                    fmt_f(sm.lambda),
                    fmt_f(sm.tv),
                    fmt_opt(sm.tv_ci.map(|i| i.lower)),
                    fmt_opt(sm.tv_ci.map(|i| i.upper)),
                    fmt_opt(sm.mean_ci.map(|i| i.lower)),
                    fmt_opt(sm.mean_ci.map(|i| i.upper)),
                    fmt_f(pt.y0_mean),
                    fmt_f(pt.y1_mean),
                    fmt_opt(pt.y1_share),
                ];
                s.push_str(&row.join(sep));
                s.push('\n');
            }
            s
        }
    };
    let mut out = Outcome::ok(body);
    out.notes = exp.warnings.clone();
    if a.assert_trend {
        out.assertion_failure = match trend {
            Some(true) => None,
            Some(false) => Some("empirical TV increases beyond the bootstrap CI of the previous grid point".into()),
            None => Some("TV trend cannot be checked without bootstrap CIs or with fewer than two grid points".into()),
        };
    }
    Ok(out)
}

#[derive(Serialize)]
struct OracleRow {
    n: u64,
    m: u64,
    p: f64,
    cover: CliqueCover,
    method: rig_poisson::oracle::PiMethod,
    exact_pi: f64,
    ln_exact_pi: f64,
    pi_predict: f64,
    ln_pi_predict: f64,
    ratio: f64,
    warnings: Vec<String>,
}

#[derive(Serialize)]
struct OracleDistribution {
    n: u64,
    m: u64,
    p: f64,
    exact_mean: f64,
    pmf: Option<Vec<f64>>,
    pmf_sum: Option<f64>,
    pmf_mean: Option<f64>,
    tv_to_poisson_mean: Option<f64>,
    lambda0: Option<f64>,
    tv_to_poisson_lambda0: Option<f64>,
    skipped: Option<String>,
}

pub fn oracle(cli: &Cli, a: &OracleArgs) -> Result<Outcome, CliError> {
    let mut cfg = RunConfig::new(cli, "oracle");
    let (h0, record) = load_pattern(&a.pattern)?;
    let alpha = parse_alpha(&a.alpha)?;
    let c = match (&a.c, a.p) {
        (Some(c), None) => Some(parse_c(c)?),
        (None, None) => Some(Rational::one()),
        (None, Some(p)) if p > 0.0 && p <= 1.0 => None,
        (None, Some(p)) => return Err(CliError::input(format!("p must lie in (0, 1], got {p}"))),
        (Some(_), Some(_)) => return Err(CliError::input("give exactly one of --c and --p")),
    };
    if a.m == Some(0) {
        return Err(CliError::input("m must be at least 1"));
    }
    cfg.pattern = Some(record);
    cfg.alpha = Some(alpha.to_string());
    cfg.c = c.as_ref().map(|c| c.to_string());
    cfg.n = a.n.clone();
    cfg.m_override = a.m;
    cfg.p_override = a.p;
    cfg.set("cover", &a.cover);
    cfg.set("distribution", a.distribution);
    cfg.set("budget_log2", a.budget);

    let e0 = eta0(&h0, &alpha)?;
    let covers = select_covers(&a.cover, &h0, &e0.critical)?;
    let lambda0 = c
        .as_ref()
        .map(|c| LambdaPolynomial::from_critical(&e0.critical, automorphism_count(&h0)).eval(c.to_f64()));

    let mut rows = Vec::new();
    let mut dists = Vec::new();
    for &n in &a.n {
        let (m, p) = match (&c, a.p) {
            (Some(c), _) => {
                let mp = ModelParams::at_threshold(n, &alpha, c.to_f64(), &e0.eta0)?;
                (a.m.unwrap_or(mp.m), mp.p)
            }
            (None, Some(p)) => (a.m.map_or_else(|| floor_power(n, &alpha), Ok)?, p),
            (None, None) => unreachable!("c defaults to 1"),
        };
        for cover in &covers {
            let exact = exact_pi_detail(&h0, cover, m, p)?;
            let pred = pi_predict(cover, m, p)?;
            rows.push(OracleRow {
                n,
                m,
                p,
                cover: cover.clone(),
                method: exact.method,
                exact_pi: exact.value,
                ln_exact_pi: exact.ln_value,
                pi_predict: pred.value,
                ln_pi_predict: pred.ln_value,
                ratio: (exact.ln_value - pred.ln_value).exp(),
                warnings: pred.warnings,
            });
        }
        dists.push(distribution(&h0, n, m, p, lambda0, a)?);
    }

    let body = match cli.format {
        Format::Json => to_json(&cfg, json!({ "eta0": e0.eta0, "lambda0": lambda0, "rows": rows, "distributions": dists })),
        Format::Csv | Format::Text => {
            let sep = if cli.format == Format::Csv { "," } else { "\t" };
            let cols = ["n", "m", "p", "cover", "method", "exact_pi", "pi_predict", "ratio"];
            let mut s = cols.join(sep);
            s.push('\n');
            for r in &rows {
                let method = serde_json::to_value(r.method).expect("method serializes");
                let row = [
                    r.n.to_string(),
                    r.m.to_string(),
                    fmt_f(r.p),
                    format!("\"{}\"", cover_ids(&r.cover)),
                    method.as_str().unwrap_or_default().to_string(),
                    fmt_f(r.exact_pi),
                    fmt_f(r.pi_predict),
                    fmt_f(r.ratio),
                ];
                s.push_str(&row.join(sep));
                s.push('\n');
            }
            if cli.format == Format::Text {
                for d in dists.iter().filter(|d| d.pmf.is_some()) {
                    let _ = writeln!(
                        s,
                        "n={} m={} p={}: exact mean {}, pmf {:?}, TV to Poisson(mean) {}",
                        d.n,
                        d.m,
                        d.p,
                        d.exact_mean,
                        d.pmf.as_deref().unwrap_or_default(),
                        fmt_opt(d.tv_to_poisson_mean)
                    );
                }
            }
            s
        }
    };
    let mut out = Outcome::ok(body);
    out.notes = dists.iter().filter_map(|d| d.skipped.clone()).collect();
    Ok(out)
}

fn select_covers(sel: &str, h0: &PatternGraph, critical: &[CliqueCover]) -> Result<Vec<CliqueCover>, CliError> {
    Ok(match sel.trim() {
        "critical" => critical.to_vec(),
        "all" => enumerate_proper_covers(h0)?,
        "edges" => vec![edge_cover(h0)],
        explicit => vec![parse_cover(explicit, h0)?],
    })
}

fn distribution(
    h0: &PatternGraph,
    n: u64,
    m: u64,
    p: f64,
    lambda0: Option<f64>,
    a: &OracleArgs,
) -> Result<OracleDistribution, CliError> {
    let mut d = OracleDistribution {
        n,
        m,
        p,
        exact_mean: exact_mean(h0, n, m, p)?,
        pmf: None,
        pmf_sum: None,
        pmf_mean: None,
        tv_to_poisson_mean: None,
        lambda0,
        tv_to_poisson_lambda0: None,
        skipped: None,
    };
    match exact_distribution_with(h0, n as usize, m, p, a.budget) {
        Ok(pmf) => {
            d.pmf_sum = Some(pmf.iter().sum());
            d.pmf_mean = Some(pmf.iter().enumerate().map(|(k, q)| k as f64 * q).sum());
            d.tv_to_poisson_mean = Some(tv_to_poisson(&pmf, d.exact_mean)?.tv);
            if let Some(l) = lambda0 {
                d.tv_to_poisson_lambda0 = Some(tv_to_poisson(&pmf, l)?.tv);
            }
            d.pmf = Some(pmf);
        }
        Err(e) if e.is_refusal() && !a.distribution => {
            d.skipped = Some(format!("exact distribution skipped at n={n}: {e}"));
        }
        Err(e) => return Err(e.into()),
    }
    Ok(d)
}

#[derive(Serialize)]
struct SampleRow {
    replicate: u64,
    vertices: usize,
    edges: usize,
    incidences: Option<usize>,
    copies: Option<u128>,
}

pub fn sample(cli: &Cli, a: &SampleArgs) -> Result<Outcome, CliError> {
    let mut cfg = RunConfig::new(cli, "sample");
    let (seed, source) = resolve_seed(a.seed)?;
    let alpha = a.alpha.as_deref().map(parse_alpha).transpose()?;
    let pattern = a.pattern.as_deref().map(load_pattern).transpose()?;
    if a.replicates == 0 {
        return Err(CliError::input("need at least one replicate"));
    }
    let n = a.n as u64;
    let m = match (a.m, &alpha) {
        (Some(m), _) => m,
        (None, Some(al)) => floor_power(n, al)?,
        (None, None) => return Err(CliError::input("give --m or --alpha")),
    };
    let c = a.c.as_deref().map(parse_c).transpose()?;
    let p = match (a.p, &c) {
        (Some(p), None) if (0.0..=1.0).contains(&p) => p,
        (Some(p), None) => return Err(CliError::input(format!("p must lie in [0, 1], got {p}"))),
        (None, Some(c)) => {
            let (Some(al), Some((h0, _))) = (&alpha, &pattern) else {
                return Err(CliError::input("--c needs --alpha and --pattern to fix eta0"));
            };
            let e = eta0(h0, al)?;
            ModelParams::at_threshold(n, al, c.to_f64(), &e.eta0)?.p
        }
        _ => return Err(CliError::input("give exactly one of --p and --c")),
    };
    let p_hat_value = if a.gnp {
        let mode = match a.p_hat {
            PHat::Linear => PHatMode::Linear,
            PHat::Exact => PHatMode::Exact,
        };
        Some(p_hat(m, p, mode)?)
    } else {
        None
    };
    let usize_m = usize::try_from(m).map_err(|_| CliError::input("m too large"))?;

    cfg.pattern = pattern.as_ref().map(|(_, r)| r.clone());
    cfg.alpha = alpha.as_ref().map(|a| a.to_string());
    cfg.c = c.as_ref().map(|c| c.to_string());
    cfg.n = vec![n];
    cfg.m_override = a.m;
    cfg.p_override = a.p;
    cfg.replicates = Some(a.replicates);
    cfg.seed = Some(seed);
    cfg.seed_source = Some(source);
    cfg.set("m", m);
    cfg.set("p", p);
    cfg.set("gnp", a.gnp);
    cfg.set("p_hat_mode", a.p_hat);
    cfg.set("method", a.method);

    let h0 = pattern.as_ref().map(|(g, _)| g);
    let draws = (0..a.replicates as u64)
        .into_par_iter()
        .map(|r| {
            let spec = SeedSpec::new(seed, r);
            let (host, incidences) = match p_hat_value {
                Some(ph) => (sample_gnp_with(a.n, ph.value, spec, method(a.method))?, None),
                None => {
                    let s = sample_incidence_with(a.n, usize_m, p, spec, method(a.method))?;
                    (project_graph(&s), Some(s.incidence_count()))
                }
            };
            let copies = h0.map(|g| count_induced_copies(&host, g)).transpose()?;
            let row = SampleRow {
                replicate: r,
                vertices: host.vertex_count(),
                edges: host.edge_count(),
                incidences,
                copies,
            };
            Ok((row, host))
        })
        .collect::<Result<Vec<_>, Error>>()?;

    let body = match cli.format {
        Format::Json => {
            let rows: Vec<&SampleRow> = draws.iter().map(|(r, _)| r).collect();
            to_json(&cfg, json!({ "m": m, "p": p, "p_hat": p_hat_value, "replicates": rows }))
        }
        Format::Csv => {
            let mut s = String::from("replicate,vertices,edges,incidences,copies\n");
            for (r, _) in &draws {
                let _ = writeln!(
                    s,
                    "{},{},{},{},{}",
                    r.replicate,
                    r.vertices,
                    r.edges,
                    r.incidences.map(|x| x.to_string()).unwrap_or_default(),
                    r.copies.map(|x| x.to_string()).unwrap_or_default()
                );
            }
            s
        }
        Format::Text => {
            // Edge lists, one block per replicate.
            let mut s = String::new();
            for (r, host) in &draws {
                if draws.len() > 1 {
                    let _ = writeln!(s, "# replicate {}", r.replicate);
                }
                s.push_str(&host_to_edge_list(host));
            }
            s
        }
    };
    let mut out = Outcome::ok(body);
    if let Some(ph) = p_hat_value.filter(|ph| ph.clamped) {
        out.notes.push(format!("m p^2 > 1; matched probability clamped to {}", ph.value));
    }
    Ok(out)
}
