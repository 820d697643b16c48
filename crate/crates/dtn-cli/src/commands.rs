use std::collections::BTreeMap;
use std::path::PathBuf;
use std::time::Instant;

use clap::Args;

use dtn_core::circulant::minus_laplacian;
use dtn_core::contfrac;
use dtn_core::network::{self, RouteSpec, Termination};
use dtn_core::scalar::Real;

use crate::report::{CheckResult, Report};

pub enum CmdError {
    Usage(String),
    Runtime(String),
}

type CmdResult = Result<bool, CmdError>;

fn usage(msg: impl Into<String>) -> CmdError {
    CmdError::Usage(msg.into())
}

fn runtime(msg: impl Into<String>) -> CmdError {
    CmdError::Runtime(msg.into())
}

/// Decimal digits to binary bits, rounded up.
fn digits_to_bits(digits: u32) -> u32 {
    (digits as f64 * std::f64::consts::LOG2_10).ceil() as u32
}

/// Default precision rule: double precision up to the classically checked
/// range, 200 bits beyond it.
fn default_bits_for_k(k: usize) -> u32 {
    if k <= 40 {
        53
    } else {
        200
    }
}

fn parse_tol(s: &str, bits: u32) -> Result<Real, CmdError> {
    let tol = Real::parse(s, bits).ok_or_else(|| usage(format!("invalid tolerance `{s}`")))?;
    if !tol.is_positive() {
        return Err(usage(format!("tolerance must be positive, got `{s}`")));
    }
    Ok(tol)
}

fn emit(report: &Report, out: &Option<PathBuf>) -> Result<(), CmdError> {
    let json = report.to_json();
    match out {
        Some(path) => {
            std::fs::write(path, json.as_bytes())
                .map_err(|e| runtime(format!("cannot write {}: {e}", path.display())))?;
            println!(
                "{}: {} ({} results, {} ms) -> {}",
                report.command,
                if report.pass() { "pass" } else { "FAIL" },
                report.results.len(),
                report.wall_time_ms,
                path.display()
            );
        }
        None => println!("{json}"),
    }
    Ok(())
}

#[derive(Args)]
pub struct ConjectureArgs {
    /// Number of continued-fraction floors.
    #[arg(long)]
    pub k: usize,
    /// Working precision in decimal digits (default: 15 for k <= 40,
    /// about 60 beyond).
    #[arg(long)]
    pub digits: Option<u32>,
    /// Residual tolerance for |beta(lambda_l) - 1|.
    #[arg(long, default_value = "1e-8")]
    pub tol: String,
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn run_conjecture(args: ConjectureArgs) -> CmdResult {
    if args.k < 1 {
        return Err(usage("--k must be at least 1"));
    }
    let bits = args
        .digits
        .map(digits_to_bits)
        .unwrap_or_else(|| default_bits_for_k(args.k));
    let tol = parse_tol(&args.tol, bits)?;

    let start = Instant::now();
    let run = contfrac::verify_conjecture(args.k, bits, &tol)
        .map_err(|e| runtime(e.to_string()))?;

    let mut results = Vec::with_capacity(run.points.len() + 1);
    for point in &run.points {
        let value = match (&point.residual, point.pole_floor) {
            (Some(r), _) => r.to_sci_string(),
            (None, Some(floor)) => format!("pole_at_floor_{floor}"),
            (None, None) => "inf".to_string(),
        };
        results.push(CheckResult {
            name: format!("beta_residual_l_{}", point.l),
            value,
            tolerance: args.tol.clone(),
            pass: point.pass,
        });
    }
    results.push(CheckResult {
        name: "max_residual".into(),
        value: run.max_residual.to_sci_string(),
        tolerance: args.tol.clone(),
        pass: run.pass,
    });

    let mut parameters = BTreeMap::new();
    parameters.insert("k".into(), args.k.to_string());
    if let Some(d) = args.digits {
        parameters.insert("digits".into(), d.to_string());
    }
    parameters.insert("tol".into(), args.tol.clone());

    let report = Report {
        command: "conjecture".into(),
        parameters,
        results,
        precision_bits: bits,
        wall_time_ms: start.elapsed().as_millis() as u64,
    };
    emit(&report, &args.out)?;
    Ok(report.pass())
}

#[derive(Args)]
pub struct TheoremArgs {
    /// Number of boundary vertices (at least 3).
    #[arg(long)]
    pub n: usize,
    /// Comma-separated routes: closed_form, fixed_point, schur, or all.
    #[arg(long, default_value = "all")]
    pub routes: String,
    /// Max-norm tolerance for residuals and pairwise discrepancies.
    #[arg(long, default_value = "1e-10")]
    pub tol: String,
    /// Truncation depth for the schur route.
    #[arg(long, default_value_t = 400)]
    pub depth: usize,
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

const THEOREM_BITS: u32 = 53;

pub fn run_theorem41(args: TheoremArgs) -> CmdResult {
    if args.n < 3 {
        return Err(usage("--n must be at least 3"));
    }
    let tol = parse_tol(&args.tol, THEOREM_BITS)?;

    let fixed_point_route = || RouteSpec::FixedPoint {
        tol: Real::parse("1e-10", THEOREM_BITS).expect("literal tolerance"),
        max_iter: 2000,
        deflate_constant: true,
    };
    let schur_route = || RouteSpec::Schur {
        depth: args.depth,
        termination: Termination::Insulated,
    };
    let mut routes = Vec::new();
    for name in args.routes.split(',').map(str::trim) {
        match name {
            "all" => {
                routes.push(RouteSpec::ClosedForm);
                routes.push(fixed_point_route());
                routes.push(schur_route());
            }
            "closed_form" => routes.push(RouteSpec::ClosedForm),
            "fixed_point" => routes.push(fixed_point_route()),
            "schur" => routes.push(schur_route()),
            other => return Err(usage(format!("unknown route `{other}`"))),
        }
    }

    let start = Instant::now();
    let run = network::verify_theorem41(args.n, &routes, &tol, THEOREM_BITS)
        .map_err(|e| runtime(e.to_string()))?;

    let mut results = Vec::new();
    let mut parameters = BTreeMap::new();
    for route in &run.routes {
        let value = match (&route.residual, &route.error) {
            (Some(r), _) => r.to_sci_string(),
            (None, Some(_)) => "inf".to_string(),
            (None, None) => "inf".to_string(),
        };
        results.push(CheckResult {
            name: format!("{}_squared_residual", route.label),
            value,
            tolerance: args.tol.clone(),
            pass: route.pass,
        });
        if let Some(iters) = route.iterations {
            parameters.insert(format!("{}_iterations", route.label), iters.to_string());
        }
        if let Some(err) = &route.error {
            parameters.insert(format!("{}_error", route.label), err.clone());
        }
    }
    for pair in &run.pairwise {
        results.push(CheckResult {
            name: format!("{}_vs_{}", pair.left, pair.right),
            value: pair.diff.to_sci_string(),
            tolerance: args.tol.clone(),
            pass: pair.pass,
        });
    }

    parameters.insert("n".into(), args.n.to_string());
    parameters.insert("routes".into(), args.routes.clone());
    parameters.insert("tol".into(), args.tol.clone());
    parameters.insert("depth".into(), args.depth.to_string());

    let report = Report {
        command: "theorem41".into(),
        parameters,
        results,
        precision_bits: THEOREM_BITS,
        wall_time_ms: start.elapsed().as_millis() as u64,
    };
    emit(&report, &args.out)?;
    Ok(report.pass())
}

#[derive(Args)]
pub struct ExportArgs {
    /// Object to export: sqrtL, dtn, coeffs, or lambda.
    #[arg(long)]
    pub what: String,
    /// Matrix size for sqrtL/dtn.
    #[arg(long)]
    pub n: Option<usize>,
    /// Floor count for coeffs/lambda.
    #[arg(long)]
    pub k: Option<usize>,
    /// Output format: csv or json.
    #[arg(long, default_value = "csv")]
    pub format: String,
    /// Write here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

const EXPORT_BITS: u32 = 53;

enum Exported {
    Matrix(Vec<Vec<Real>>),
    Points(Vec<dtn_core::Complex>),
}

pub fn run_export(args: ExportArgs) -> CmdResult {
    let need_n = || args.n.ok_or_else(|| usage("--n is required for this export"));
    let need_k = || args.k.ok_or_else(|| usage("--k is required for this export"));

    let (data, size_key, size_value) = match args.what.as_str() {
        "sqrtL" => {
            let n = need_n()?;
            let l = minus_laplacian(n, EXPORT_BITS).map_err(|e| usage(e.to_string()))?;
            let s = l.sqrt_psd().map_err(|e| runtime(e.to_string()))?;
            (Exported::Matrix(s.to_dense()), "n", n)
        }
        "dtn" => {
            let n = need_n()?;
            let map = network::dtn_infinite_closed_form(n, EXPORT_BITS)
                .map_err(|e| usage(e.to_string()))?;
            (Exported::Matrix(map.matrix.to_dense()), "n", n)
        }
        "coeffs" => {
            let k = need_k()?;
            let c = contfrac::conjecture_coeffs(k, EXPORT_BITS)
                .map_err(|e| usage(e.to_string()))?;
            (Exported::Points(c.coeffs().to_vec()), "k", k)
        }
        "lambda" => {
            let k = need_k()?;
            let p = contfrac::lambda_points(k, EXPORT_BITS)
                .map_err(|e| usage(e.to_string()))?;
            (Exported::Points(p.points().to_vec()), "k", k)
        }
        other => return Err(usage(format!("unknown export `{other}`"))),
    };

    let text = match args.format.as_str() {
        "csv" => to_csv(&data),
        "json" => to_json(&data, &args.what, size_key, size_value),
        other => return Err(usage(format!("unknown format `{other}`"))),
    };

    match &args.out {
        Some(path) => std::fs::write(path, text.as_bytes())
            .map_err(|e| runtime(format!("cannot write {}: {e}", path.display())))?,
        None => print!("{text}"),
    }
    Ok(true)
}

fn to_csv(data: &Exported) -> String {
    let mut out = String::new();
    match data {
        Exported::Matrix(rows) => {
            let n = rows.len();
            let header: Vec<String> = (0..n).map(|j| format!("c{j}")).collect();
            out.push_str(&header.join(","));
            out.push('\n');
            for row in rows {
                let line: Vec<String> = row.iter().map(Real::to_sci_string).collect();
                out.push_str(&line.join(","));
                out.push('\n');
            }
        }
        Exported::Points(points) => {
            out.push_str("re,im\n");
            for p in points {
                out.push_str(&format!(
                    "{},{}\n",
                    p.re.to_sci_string(),
                    p.im.to_sci_string()
                ));
            }
        }
    }
    out
}

fn to_json(data: &Exported, what: &str, size_key: &str, size_value: usize) -> String {
    let body = match data {
        Exported::Matrix(rows) => {
            let rows: Vec<Vec<String>> = rows
                .iter()
                .map(|r| r.iter().map(Real::to_sci_string).collect())
                .collect();
            serde_json::json!({
                "what": what,
                size_key: size_value,
                "precision_bits": EXPORT_BITS,
                "rows": rows,
            })
        }
        Exported::Points(points) => {
            let entries: Vec<serde_json::Value> = points
                .iter()
                .map(|p| {
                    serde_json::json!({
                        "re": p.re.to_sci_string(),
                        "im": p.im.to_sci_string(),
                    })
                })
                .collect();
            serde_json::json!({
                "what": what,
                size_key: size_value,
                "precision_bits": EXPORT_BITS,
                "entries": entries,
            })
        }
    };
    serde_json::to_string_pretty(&body).expect("export serialization")
}
