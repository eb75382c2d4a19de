//! `ellr`: runs the identity verification suite and evaluates single
//! objects of the dynamical elliptic R-matrix.

mod complex;
mod config;
mod eval;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use chrono::{SecondsFormat, Utc};
use clap::{Args, Parser, Subcommand};
use ellr_core::verify::{run_suite, ReportDocument};
use ellr_core::Cx;

use complex::{parse_complex, parse_range};
use config::{CheckSelection, ConfigError, Format, RunConfig};
use eval::Object;

const EXIT_FAILED: u8 = 1;
const EXIT_CONFIG: u8 = 2;

/// Default `q^{1/2}` for `eval` (so that `q ≈ 0.47`).
const EVAL_Q_HALF: f64 = 0.6855654600401044;
const EVAL_P: f64 = 0.31;

#[derive(Debug, Parser)]
#[command(name = "ellr", version, about = "Dynamical elliptic R-matrix identity verification")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run the verification suite over a seeded grid of points.
    Check(CheckArgs),
    /// Print one object's entries at a point.
    Eval(EvalArgs),
}

#[derive(Debug, Args)]
struct CommonArgs {
    /// Configuration file of `key = value` lines (default: $ELLR_CONFIG).
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
    /// `q^{1/2}` as a complex literal `a+bi`; fixes it for every point.
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    q_half: Option<Cx>,
    /// Elliptic nome as a complex literal `a+bi`; fixes it for every point.
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    p: Option<Cx>,
    /// Truncation order of the infinite products (default: automatic).
    #[arg(long)]
    truncation_order: Option<usize>,
    #[arg(long)]
    tolerance: Option<f64>,
    #[arg(long)]
    singular_guard: Option<f64>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Write the output to a file instead of standard output.
    #[arg(long, short, value_name = "PATH")]
    output: Option<PathBuf>,
}

impl CommonArgs {
    fn layer(&self) -> RunConfig {
        RunConfig {
            q_half: self.q_half,
            p: self.p,
            truncation_order: self.truncation_order,
            tolerance: self.tolerance,
            singular_guard: self.singular_guard,
            format: self.format,
            output: self.output.clone(),
            ..RunConfig::default()
        }
    }
}

#[derive(Debug, Args)]
struct CheckArgs {
    #[command(flatten)]
    common: CommonArgs,
    #[arg(long)]
    seed: Option<u64>,
    /// Number of grid points.
    #[arg(long)]
    points: Option<usize>,
    /// Comma-separated check names, or `all`.
    #[arg(long)]
    checks: Option<CheckSelection>,
    #[arg(long, value_parser = parse_range, value_name = "LO,HI")]
    p_range: Option<(f64, f64)>,
    #[arg(long, value_parser = parse_range, value_name = "LO,HI")]
    q_half_range: Option<(f64, f64)>,
    #[arg(long, value_parser = parse_range, value_name = "LO,HI", allow_hyphen_values = true)]
    s_re_range: Option<(f64, f64)>,
    #[arg(long)]
    s_im_max: Option<f64>,
    #[arg(long, value_parser = parse_range, value_name = "LO,HI")]
    z_modulus_range: Option<(f64, f64)>,
    /// Dynamical samples per check.
    #[arg(long)]
    s_samples: Option<usize>,
    /// Multiplies beta by e^delta in the magic check (0 is critical).
    #[arg(long, allow_hyphen_values = true, value_name = "DELTA")]
    alpha_beta_offset: Option<f64>,
    /// Omit the timestamp so reruns are byte-identical.
    #[arg(long)]
    no_timestamp: bool,
    /// List the available checks and exit.
    #[arg(long)]
    list_checks: bool,
}

impl CheckArgs {
    fn layer(&self) -> RunConfig {
        RunConfig {
            seed: self.seed,
            points: self.points,
            checks: self.checks.clone(),
            p_range: self.p_range,
            q_half_range: self.q_half_range,
            s_re_range: self.s_re_range,
            s_im_max: self.s_im_max,
            z_modulus_range: self.z_modulus_range,
            s_samples: self.s_samples,
            alpha_beta_offset: self.alpha_beta_offset,
            timestamp: self.no_timestamp.then_some(false),
            ..self.common.layer()
        }
    }
}

#[derive(Debug, Args)]
struct EvalArgs {
    /// Object to evaluate.
    #[arg(value_enum)]
    object: Object,
    /// Spectral parameter `a+bi` (R, Rtilde, theta, rho).
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    z: Option<Cx>,
    /// Dynamical parameter `a+bi` (R, Rtilde, N, G, Gamma).
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    s: Option<Cx>,
    #[command(flatten)]
    common: CommonArgs,
}

fn config_error(e: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(EXIT_CONFIG)
}

fn load(explicit: Option<&Path>, flags: RunConfig) -> Result<RunConfig, ConfigError> {
    Ok(RunConfig::load_base(explicit)?.overlay(flags))
}

fn emit(text: &str, output: Option<&Path>) -> Result<(), ExitCode> {
    match output {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| config_error(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn cmd_check(args: &CheckArgs) -> ExitCode {
    if args.list_checks {
        for name in ellr_core::verify::CHECK_NAMES {
            println!("{name}");
        }
        return ExitCode::SUCCESS;
    }
    let config = match load(args.common.config.as_deref(), args.layer()) {
        Ok(c) => c,
        Err(e) => return config_error(e),
    };
    let grid = match config.grid() {
        Ok(g) => g,
        Err(e) => return config_error(e),
    };
    let reports = match run_suite(&grid) {
        Ok(r) => r,
        Err(e) => return config_error(e),
    };
    let timestamp = config
        .timestamp
        .unwrap_or(true)
        .then(|| Utc::now().to_rfc3339_opts(SecondsFormat::Secs, true));
    let doc = ReportDocument::new(&grid, reports, timestamp);
    let text = match config.format() {
        Format::Json => doc.to_json() + "\n",
        Format::Text => doc.to_text(),
    };
    if let Err(code) = emit(&text, config.output.as_deref()) {
        return code;
    }
    if config.output.is_some() {
        let s = doc.summary;
        eprintln!("{} pass, {} fail, {} skipped-singular", s.pass, s.fail, s.skipped);
    }
    if doc.passes() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_FAILED)
    }
}

fn cmd_eval(args: &EvalArgs) -> ExitCode {
    let config = match load(args.common.config.as_deref(), args.common.layer()) {
        Ok(c) => c,
        Err(e) => return config_error(e),
    };
    let params = match config.params(Cx::new(EVAL_Q_HALF, 0.0), Cx::new(EVAL_P, 0.0)) {
        Ok(p) => p,
        Err(e) => return config_error(e),
    };
    let object = args.object;
    let z = object.needs_z().then_some(args.z).flatten();
    let s = object.needs_s().then_some(args.s).flatten();
    if object.needs_z() && z.is_none() {
        return config_error(format!("eval {} requires --z", object.name()));
    }
    if object.needs_s() && s.is_none() {
        return config_error(format!("eval {} requires --s", object.name()));
    }
    let zero = Cx::new(0.0, 0.0);
    let value = match eval::evaluate(object, &params, z.unwrap_or(zero), s.unwrap_or(zero)) {
        Ok(v) => v,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_FAILED);
        }
    };
    let text = match config.format() {
        Format::Json => {
            let doc = eval::to_json(object, &params, z, s, &value);
            serde_json::to_string_pretty(&doc).expect("serializable") + "\n"
        }
        Format::Text => eval::describe(object, &params, z, s) + &eval::to_text(&value),
    };
    match emit(&text, config.output.as_deref()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(code) => code,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match &cli.command {
        Command::Check(args) => cmd_check(args),
        Command::Eval(args) => cmd_eval(args),
    }
}
