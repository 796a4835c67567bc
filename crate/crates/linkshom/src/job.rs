//! Command orchestration: parameter validation, dispatch, rendering and
//! exit codes. The CLI binary is a thin argument parser over [`run`], so
//! tests and foreign bindings can drive jobs directly.
//!
//! Exit codes: 0 success, 2 parameter validation failure, 3 internal
//! invariant failure (nonzero boundary square, negative homology dimension,
//! degenerate-span escape, vanishing violation), 1 verification findings.

use std::path::PathBuf;

use serde::Serialize;

use crate::cache::RankCache;
use crate::hochschild::{self, EngineConfig, EngineError};
use crate::linalg::RankPolicy;
use crate::series;
use crate::simplicial;
use crate::verify::{self, Suite, VerifyOptions};
use crate::arnold;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Json,
    Csv,
    Md,
}

impl std::str::FromStr for OutputFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "json" => Ok(OutputFormat::Json),
            "csv" => Ok(OutputFormat::Csv),
            "md" => Ok(OutputFormat::Md),
            other => Err(format!("unknown format `{other}`")),
        }
    }
}

#[derive(Debug, Clone)]
pub enum Command {
    Basis { n: u32, t: u32 },
    Model { m: u32, n: u32, p: u32 },
    Betti { m: u32, n: u32, d: u32, u_max: u32, p_max: Option<u32>, retraction: bool },
    Euler { m: u32, d: u32, terms: u32 },
    Series { kind: SeriesKind, m: u32, n: u32, d: u32, order: u32, p_max: Option<u32> },
    Radius { m: u32, d: u32 },
    Verify { suite: Suite, m: Option<u32>, t_max: Option<u32> },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeriesKind {
    Links,
    Pair,
    Poincare,
}

impl std::str::FromStr for SeriesKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "links" => Ok(SeriesKind::Links),
            "pair" => Ok(SeriesKind::Pair),
            "poincare" => Ok(SeriesKind::Poincare),
            other => Err(format!("unknown series kind `{other}`")),
        }
    }
}

/// A fully validated job: command plus engine-wide knobs.
#[derive(Debug, Clone)]
pub struct JobSpec {
    pub command: Command,
    pub format: OutputFormat,
    pub cache_dir: Option<PathBuf>,
    pub exact_ranks: bool,
    pub seed: u64,
}

pub struct JobOutcome {
    pub exit_code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl JobOutcome {
    fn ok(stdout: String) -> Self {
        Self { exit_code: 0, stdout, stderr: String::new() }
    }

    fn fail(exit_code: i32, message: String) -> Self {
        Self { exit_code, stdout: String::new(), stderr: message }
    }
}

fn exit_code_for(err: &EngineError) -> i32 {
    match err {
        EngineError::InvalidParams(_) => 2,
        EngineError::BoundarySquare { .. }
        | EngineError::NegativeHomology { .. }
        | EngineError::DegenerateEscape { .. }
        | EngineError::NormalizedVanishing { .. } => 3,
        _ => 2,
    }
}

pub fn run(spec: &JobSpec) -> JobOutcome {
    let cache = match RankCache::from_env(spec.cache_dir.clone()) {
        Ok(cache) => cache,
        Err(e) => return JobOutcome::fail(2, format!("cannot open cache directory: {e}")),
    };
    let cfg = EngineConfig {
        rank_policy: if spec.exact_ranks {
            RankPolicy::Exact
        } else {
            RankPolicy::default()
        },
        seed: spec.seed,
        cache,
    };
    match &spec.command {
        Command::Basis { n, t } => run_basis(*n, *t, spec.format),
        Command::Model { m, n, p } => run_model(*m, *n, *p),
        Command::Betti { m, n, d, u_max, p_max, retraction } => {
            run_betti(*m, *n, *d, *u_max, *p_max, *retraction, spec.format, &cfg)
        }
        Command::Euler { m, d, terms } => run_euler(*m, *d, *terms, spec.format),
        Command::Series { kind, m, n, d, order, p_max } => {
            run_series(*kind, *m, *n, *d, *order, *p_max, spec.format, &cfg)
        }
        Command::Radius { m, d } => run_radius(*m, *d, spec.format),
        Command::Verify { suite, m, t_max } => {
            run_verify(*suite, VerifyOptions { m: *m, t_max: *t_max, seed: spec.seed }, spec.format)
        }
    }
}

fn run_basis(n: u32, t: u32, format: OutputFormat) -> JobOutcome {
    let basis = arnold::enumerate_basis(n, t);
    let dimension = arnold::dimension(n, t);
    debug_assert_eq!(basis.len() as u128, dimension);
    let out = match format {
        OutputFormat::Json => {
            let json = serde_json::json!({
                "n": n,
                "t": t,
                "dimension": dimension.to_string(),
                "monomials": basis.iter().map(|m| m.to_string()).collect::<Vec<_>>(),
            });
            pretty(&json)
        }
        OutputFormat::Csv => {
            let mut s = format!("# n={n} t={t} dimension={dimension}\nmonomial\n");
            for m in &basis {
                s.push_str(&format!("{m}\n"));
            }
            s
        }
        OutputFormat::Md => {
            let mut s = format!("Basis for n={n}, t={t} (dimension {dimension})\n\n| monomial |\n|:---|\n");
            for m in &basis {
                s.push_str(&format!("| {m} |\n"));
            }
            s
        }
    };
    JobOutcome::ok(out)
}

fn run_model(m: u32, n: u32, p: u32) -> JobOutcome {
    match simplicial::wedge_model(m, n, p) {
        Ok(model) => JobOutcome::ok(pretty(&model.to_json())),
        Err(e) => JobOutcome::fail(2, e.to_string()),
    }
}

#[allow(clippy::too_many_arguments)]
fn run_betti(
    m: u32,
    n: u32,
    d: u32,
    u_max: u32,
    p_max: Option<u32>,
    retraction: bool,
    format: OutputFormat,
    cfg: &EngineConfig,
) -> JobOutcome {
    let table = match hochschild::betti_table(m, n, d, u_max, p_max, cfg) {
        Ok(table) => table,
        Err(e) => return JobOutcome::fail(exit_code_for(&e), e.to_string()),
    };
    let mut out = match format {
        OutputFormat::Json => pretty(&table.to_json()),
        OutputFormat::Csv => table.to_csv(),
        OutputFormat::Md => table.to_markdown(),
    };
    if retraction {
        match retraction_report(&table, d, u_max, cfg) {
            Ok(report) => {
                out.push('\n');
                out.push_str(&report);
            }
            Err(e) => return JobOutcome::fail(exit_code_for(&e), e.to_string()),
        }
    }
    JobOutcome::ok(out)
}

/// Compares link Betti numbers against the convolution of knot Betti
/// numbers over the jointly complete degrees; a report, not an assertion.
fn retraction_report(
    table: &hochschild::BettiTable,
    d: u32,
    u_max: u32,
    cfg: &EngineConfig,
) -> Result<String, EngineError> {
    let knots = hochschild::betti_table(1, table.n, d, u_max, None, cfg)?;
    let knot_series = series::poincare_series(&knots, u_max as usize)
        .map_err(EngineError::from)?;
    let mut out = String::from("retraction report: b_u(links) vs m-fold convolution of knot Betti numbers\n");
    for u in 0..=u_max {
        let entry = table.betti(u).expect("entry exists");
        if !entry.complete || !knots.betti(u).map(|e| e.complete).unwrap_or(false) {
            out.push_str(&format!("u={u}: incomplete, skipped\n"));
            continue;
        }
        // m-fold convolution of the knot series with itself
        let mut conv = series::PowerSeries::one(u_max as usize);
        for _ in 0..table.m {
            conv = conv.mul_trunc(&knot_series, u_max as usize);
        }
        let expected = conv.coefficient(u as usize);
        let holds = num_traits::ToPrimitive::to_u64(&expected)
            .map(|e| entry.betti >= e)
            .unwrap_or(false);
        out.push_str(&format!(
            "u={u}: links {} >= knots^m {} : {}\n",
            entry.betti, expected, holds
        ));
    }
    Ok(out)
}

fn run_euler(m: u32, d: u32, terms: u32, format: OutputFormat) -> JobOutcome {
    if terms == 0 {
        return JobOutcome::fail(2, "need at least one term".into());
    }
    match series::euler_series_links(m, d, terms as usize - 1) {
        Ok(series) => JobOutcome::ok(render_series(&series, format)),
        Err(e) => JobOutcome::fail(2, e.to_string()),
    }
}

fn render_series(s: &series::PowerSeries, format: OutputFormat) -> String {
    match format {
        OutputFormat::Json => pretty(&s.to_json()),
        OutputFormat::Csv => {
            let mut out = String::from("degree,coefficient\n");
            for (i, c) in s.coefficients().iter().enumerate() {
                out.push_str(&format!("{i},{c}\n"));
            }
            out
        }
        OutputFormat::Md => {
            let mut out = String::from("| degree | coefficient |\n|---:|---:|\n");
            for (i, c) in s.coefficients().iter().enumerate() {
                out.push_str(&format!("| {i} | {c} |\n"));
            }
            out
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn run_series(
    kind: SeriesKind,
    m: u32,
    n: u32,
    d: u32,
    order: u32,
    p_max: Option<u32>,
    format: OutputFormat,
    cfg: &EngineConfig,
) -> JobOutcome {
    let result = match kind {
        SeriesKind::Links => series::euler_series_links(m, d, order as usize),
        SeriesKind::Pair => series::euler_series_pair(m, d, order as usize),
        SeriesKind::Poincare => {
            let table = match hochschild::betti_table(m, n, d, order, p_max, cfg) {
                Ok(t) => t,
                Err(e) => return JobOutcome::fail(exit_code_for(&e), e.to_string()),
            };
            series::poincare_series(&table, order as usize)
        }
    };
    match result {
        Ok(series) => {
            let mut out = render_series(&series, format);
            if matches!(kind, SeriesKind::Links | SeriesKind::Pair) && format != OutputFormat::Json {
                out.push_str(&format!("\n{}\n", closed_form_note(kind, m, d)));
            }
            JobOutcome::ok(out)
        }
        Err(e) => JobOutcome::fail(2, e.to_string()),
    }
}

fn closed_form_note(kind: SeriesKind, m: u32, d: u32) -> String {
    let e = d - 1;
    match kind {
        SeriesKind::Links => format!(
            "closed form: 1/((1-x^{e})(1-2x^{e})...(1-{m}x^{e}))"
        ),
        SeriesKind::Pair => format!(
            "closed form: 1/((1-x^{e})(1-2x^{e})...(1-{m}x^{e})) - 1/(1-x^{e})^{m}"
        ),
        SeriesKind::Poincare => String::new(),
    }
}

fn run_radius(m: u32, d: u32, format: OutputFormat) -> JobOutcome {
    match series::radius_report(m, d) {
        Ok(report) => {
            let out = match format {
                OutputFormat::Json => {
                    pretty(&serde_json::to_value(&report).expect("report serializes"))
                }
                _ => format!(
                    "radius bounds for m={}, d={}\nlink bound (1/m)^(1/(d-1))      = {:.15}\nknot bound (1/sqrt(2))^(1/(d-1)) = {:.15}\nminimum = {:.15}\n{}\n",
                    report.m, report.d, report.link_bound, report.knot_bound, report.min_bound, report.note
                ),
            };
            JobOutcome::ok(out)
        }
        Err(e) => JobOutcome::fail(2, e.to_string()),
    }
}

fn run_verify(suite: Suite, opts: VerifyOptions, format: OutputFormat) -> JobOutcome {
    let reports = verify::run_suite(suite, opts);
    let all_pass = reports.iter().all(|r| r.all_pass());
    let out = match format {
        OutputFormat::Json => {
            let json = serde_json::json!({
                "suites": reports.iter().map(|r| r.to_json()).collect::<Vec<_>>(),
                "all_pass": all_pass,
            });
            pretty(&json)
        }
        _ => {
            let mut s = String::new();
            for r in &reports {
                s.push_str(&r.render_text());
            }
            s
        }
    };
    if all_pass {
        JobOutcome::ok(out)
    } else {
        JobOutcome { exit_code: 1, stdout: out, stderr: "verification failures".into() }
    }
}

fn pretty(value: &serde_json::Value) -> String {
    let mut out = serde_json::to_string_pretty(value).expect("json renders");
    out.push('\n');
    out
}
