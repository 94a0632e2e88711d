//! Command line front end: series evaluation, quadrature cross-checks and
//! the identity verification suite.
//!
//! Exit codes: 0 on success, 1 on numerical failure or a failed
//! verification run, 2 on invalid input.

use std::io::Read;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ilmf::params::{Family, IlmfParams, SeriesPolicy};
use ilmf::quad::{rep_gamma_a, rep_gamma_c, rep_gamma_d, QuadSpec};
use ilmf::series::ilmf;
use ilmf::verify::{run_suite, VerifyConfig, IDENTITY_IDS};
use ilmf::{linalg::CMatrix, Error};

#[derive(Parser)]
#[command(name = "ilmf", version, about = "Incomplete Lauricella matrix functions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate one function from a JSON parameter set via the series engine.
    Eval(EvalArgs),
    /// Evaluate the same parameter set through the single-integral
    /// representation instead of the series.
    Oracle(OracleArgs),
    /// Run randomized identity verification and report residuals.
    Verify(VerifyArgs),
    /// List the identity checks the verifier knows.
    List,
}

#[derive(Args)]
struct InputArgs {
    /// Path to a JSON parameter file; "-" reads standard input.
    #[arg(long, conflicts_with = "json")]
    input: Option<String>,
    /// Inline JSON parameter string.
    #[arg(long)]
    json: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Table,
    Json,
}

#[derive(Args)]
struct EvalArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Per-index order cap; ILMF_MAX_ORDER is honored when the flag is
    /// absent.
    #[arg(long)]
    max_order: Option<usize>,
    /// Stop once two consecutive shells fall below this relative size.
    #[arg(long)]
    tail_tol: Option<f64>,
    #[arg(long, value_enum, default_value = "table")]
    format: Format,
}

#[derive(Args)]
struct OracleArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Relative quadrature tolerance.
    #[arg(long)]
    rel_tol: Option<f64>,
    /// Absolute quadrature tolerance.
    #[arg(long)]
    abs_tol: Option<f64>,
    #[arg(long, value_enum, default_value = "table")]
    format: Format,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Random draws per identity and family.
    #[arg(long, default_value_t = 2)]
    draws: usize,
    /// Comma separated identity ids; defaults to all of them.
    #[arg(long, value_delimiter = ',')]
    ids: Vec<String>,
    /// Comma separated families (A, C, D); defaults to all three.
    #[arg(long, value_delimiter = ',')]
    family: Vec<String>,
    /// Rerun kind-generalizable identities at the lower and complete kinds.
    #[arg(long)]
    extended: bool,
    #[arg(long, value_enum, default_value = "table")]
    format: Format,
}

fn main() -> ExitCode {
    match Cli::parse().command {
        Command::Eval(args) => run_eval(args),
        Command::Oracle(args) => run_oracle(args),
        Command::Verify(args) => run_verify(args),
        Command::List => {
            for id in IDENTITY_IDS {
                println!("{id}");
            }
            ExitCode::SUCCESS
        }
    }
}

const BAD_INPUT: u8 = 2;
const FAILED: u8 = 1;

fn read_params(input: &InputArgs) -> Result<IlmfParams, String> {
    let text = match (&input.input, &input.json) {
        (Some(path), None) if path == "-" => {
            let mut buf = String::new();
            std::io::stdin()
                .read_to_string(&mut buf)
                .map_err(|e| format!("reading stdin: {e}"))?;
            buf
        }
        (Some(path), None) => {
            std::fs::read_to_string(path).map_err(|e| format!("reading {path}: {e}"))?
        }
        (None, Some(text)) => text.clone(),
        _ => return Err("provide exactly one of --input or --json".to_string()),
    };
    let params: IlmfParams =
        serde_json::from_str(&text).map_err(|e| format!("parsing parameters: {e}"))?;
    params.validate().map_err(|e| e.to_string())?;
    Ok(params)
}

fn print_matrix_table(value: &CMatrix) {
    for row in 0..value.rows() {
        let cells: Vec<String> = (0..value.cols())
            .map(|col| {
                let v = value.get(row, col);
                format!("{:.16e} {:+.16e}i", v.re, v.im)
            })
            .collect();
        println!("{}", cells.join("  "));
    }
}

fn failure(code: u8, msg: &str) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(code)
}

fn error_code(e: &Error) -> u8 {
    match e {
        Error::InvalidParams(_) | Error::DimensionMismatch { .. } => BAD_INPUT,
        _ => FAILED,
    }
}

fn run_eval(args: EvalArgs) -> ExitCode {
    let params = match read_params(&args.input) {
        Ok(p) => p,
        Err(msg) => return failure(BAD_INPUT, &msg),
    };
    let mut policy = SeriesPolicy::default();
    let env_order = std::env::var("ILMF_MAX_ORDER")
        .ok()
        .and_then(|v| v.parse::<usize>().ok());
    if let Some(cap) = args.max_order.or(env_order) {
        if cap > 200 {
            return failure(BAD_INPUT, &format!("max order {cap} above the supported 200"));
        }
        policy.max_order_per_index = cap;
        policy.max_total_order = policy.max_total_order.max(cap);
    }
    if let Some(tol) = args.tail_tol {
        if !(tol >= 1e-15) {
            return failure(BAD_INPUT, &format!("tail tolerance {tol:e} below 1e-15"));
        }
        policy.tail_tol = tol;
    }
    match ilmf(&params, &policy) {
        Ok(ev) => {
            match args.format {
                Format::Json => println!("{}", serde_json::to_string(&ev).unwrap()),
                Format::Table => {
                    print_matrix_table(&ev.value);
                    println!(
                        "terms {}  tail {:.3e}  truncated {}",
                        ev.terms_summed, ev.tail_estimate, ev.truncated
                    );
                }
            }
            ExitCode::SUCCESS
        }
        Err(e) => failure(error_code(&e), &e.to_string()),
    }
}

fn run_oracle(args: OracleArgs) -> ExitCode {
    let params = match read_params(&args.input) {
        Ok(p) => p,
        Err(msg) => return failure(BAD_INPUT, &msg),
    };
    let mut spec = QuadSpec::default();
    for (name, v) in [("relative", args.rel_tol), ("absolute", args.abs_tol)] {
        if let Some(t) = v {
            if !(t >= 1e-15) {
                return failure(BAD_INPUT, &format!("{name} tolerance {t:e} below 1e-15"));
            }
        }
    }
    if let Some(t) = args.rel_tol {
        spec.rel_tol = t;
    }
    if let Some(t) = args.abs_tol {
        spec.abs_tol = t;
    }
    let value = match params.family {
        Family::A => rep_gamma_a(&params, &spec),
        Family::C => rep_gamma_c(&params, &spec),
        Family::D => rep_gamma_d(&params, &spec),
    };
    match value {
        Ok(v) => {
            match args.format {
                Format::Json => {
                    println!(
                        "{}",
                        serde_json::json!({ "method": "single-integral", "value": v })
                    );
                }
                Format::Table => print_matrix_table(&v),
            }
            ExitCode::SUCCESS
        }
        Err(e) => failure(error_code(&e), &e.to_string()),
    }
}

fn parse_families(raw: &[String]) -> Result<Vec<Family>, String> {
    if raw.is_empty() {
        return Ok(vec![Family::A, Family::C, Family::D]);
    }
    raw.iter()
        .map(|s| match s.trim().to_ascii_uppercase().as_str() {
            "A" => Ok(Family::A),
            "C" => Ok(Family::C),
            "D" => Ok(Family::D),
            other => Err(format!("unknown family {other:?}; expected A, C or D")),
        })
        .collect()
}

fn run_verify(args: VerifyArgs) -> ExitCode {
    let families = match parse_families(&args.family) {
        Ok(f) => f,
        Err(msg) => return failure(BAD_INPUT, &msg),
    };
    for id in &args.ids {
        if !IDENTITY_IDS.contains(&id.as_str()) {
            return failure(BAD_INPUT, &format!("unknown identity id {id:?}"));
        }
    }
    let cfg = VerifyConfig {
        draws: args.draws,
        families,
        ids: args.ids,
        extended: args.extended,
        ..VerifyConfig::default()
    };
    let report = run_suite(args.seed, &cfg);
    match args.format {
        Format::Json => println!("{}", serde_json::to_string(&report).unwrap()),
        Format::Table => {
            for (key, line) in &report.summary {
                println!(
                    "{key:<28} cases {:>3}  passed {:>3}  failed {:>3}  max residual {:.3e}",
                    line.cases, line.passed, line.failed, line.max_residual
                );
            }
            for case in report.cases.iter().filter(|c| !c.passed) {
                println!(
                    "FAIL {} family {} kind {} seed {} residual {:.3e} tol {:.3e}{}",
                    case.identity_id,
                    case.family,
                    case.kind,
                    case.seed,
                    case.residual,
                    case.tolerance,
                    case.detail
                        .as_deref()
                        .map(|d| format!(" ({d})"))
                        .unwrap_or_default()
                );
            }
            println!("{}", if report.all_passed { "PASS" } else { "FAIL" });
        }
    }
    if report.all_passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(FAILED)
    }
}
