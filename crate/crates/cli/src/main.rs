use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

mod commands;
mod output;

/// Modified fractional Bessel function I0^alpha and the corneal-height model.
#[derive(Debug, Parser)]
#[command(name = "fracbessel", version)]
struct Cli {
    /// Worker threads for parallel sections (default: all cores).
    #[arg(long, global = true, value_name = "N", value_parser = positive_usize)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate I0^alpha(x) by its power series.
    Eval(EvalArgs),
    /// Tabulate I0^alpha against its leading-order large-x form.
    AsymCheck(AsymArgs),
    /// Compare the series with the Volterra solver under step doubling.
    OracleCheck(OracleArgs),
    /// Fit (a, b, alpha) to a surface file.
    Fit(FitArgs),
    /// Write a synthetic surface grid from the model.
    Synth(SynthArgs),
    /// Export the height profile h(r) on [0, 1].
    Profile(ProfileArgs),
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    /// Fractional order in [0, 1].
    #[arg(long, value_parser = unit_interval)]
    pub alpha: f64,
    /// Argument, x >= 0.
    #[arg(long, value_parser = non_negative)]
    pub x: f64,
    /// Relative truncation tolerance of the series.
    #[arg(long, default_value_t = fracbessel::specfun::DEFAULT_REL_TOL, value_parser = positive)]
    pub rel_tol: f64,
}

#[derive(Debug, Args)]
pub struct AsymArgs {
    /// Fractional order in [0, 1].
    #[arg(long, value_parser = unit_interval)]
    pub alpha: f64,
    /// Comma-separated x values (default: a doubling ladder ending at the
    /// largest x before overflow).
    #[arg(long, value_delimiter = ',', value_parser = positive)]
    pub x: Vec<f64>,
    /// Rungs in the default ladder.
    #[arg(long, default_value_t = 8, value_parser = positive_usize)]
    pub rungs: usize,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    /// Fractional order in (0, 1].
    #[arg(long, value_parser = unit_interval)]
    pub alpha: f64,
    /// Right end of the solution interval.
    #[arg(long, default_value_t = 2.0, value_parser = positive)]
    pub x_max: f64,
    /// Comma-separated, strictly increasing step counts.
    #[arg(long, value_delimiter = ',', default_value = "256,512,1024,2048,4096", value_parser = positive_usize)]
    pub steps: Vec<usize>,
    /// Also write the table to this CSV file.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct FitArgs {
    /// Surface file, grid form or long form (x_mm,y_mm,z_mm).
    #[arg(long, value_name = "PATH")]
    pub input: PathBuf,
    /// Residual map output (default: <input>.residuals.csv).
    #[arg(long, value_name = "PATH")]
    pub residuals: Option<PathBuf>,
    /// Also write the report to this file.
    #[arg(long, value_name = "PATH")]
    pub report: Option<PathBuf>,
    /// Extra starting point a,b,alpha tried before the defaults.
    #[arg(long, value_name = "A,B,ALPHA", value_parser = list::<3>)]
    pub init: Option<[f64; 3]>,
    /// Bounds on a as lo,hi.
    #[arg(long, value_name = "LO,HI", value_parser = list::<2>)]
    pub a_bounds: Option<[f64; 2]>,
    /// Bounds on b as lo,hi.
    #[arg(long, value_name = "LO,HI", value_parser = list::<2>)]
    pub b_bounds: Option<[f64; 2]>,
    /// Bounds on alpha as lo,hi.
    #[arg(long, value_name = "LO,HI", value_parser = list::<2>)]
    pub alpha_bounds: Option<[f64; 2]>,
    /// Override the rim radius in mm.
    #[arg(long, value_parser = positive)]
    pub rim: Option<f64>,
    /// Shift heights so the outermost 2% ring averages zero.
    #[arg(long)]
    pub rim_shift: bool,
    /// Objective evaluations per start.
    #[arg(long, default_value_t = 20_000, value_parser = positive_usize)]
    pub max_evals: usize,
}

#[derive(Debug, Args)]
pub struct ModelArgs {
    /// Curvature parameter a > 0.
    #[arg(long, value_parser = positive)]
    pub a: f64,
    /// Scale parameter b > 0.
    #[arg(long, value_parser = positive)]
    pub b: f64,
    /// Fractional order in [0, 1].
    #[arg(long, value_parser = unit_interval)]
    pub alpha: f64,
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Rim radius in mm.
    #[arg(long, default_value_t = 6.0, value_parser = positive)]
    pub rim: f64,
    /// Grid columns.
    #[arg(long, default_value_t = 123, value_parser = positive_usize)]
    pub nx: usize,
    /// Grid rows.
    #[arg(long, default_value_t = 123, value_parser = positive_usize)]
    pub ny: usize,
    /// Gaussian noise standard deviation in mm.
    #[arg(long, default_value_t = 0.0, value_parser = non_negative)]
    pub sigma: f64,
    /// Noise seed.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output grid file.
    #[arg(long, value_name = "PATH")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct ProfileArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Uniformly spaced radii, at least 2.
    #[arg(long, default_value_t = 101, value_parser = positive_usize)]
    pub points: usize,
    /// Output CSV (default: stdout).
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

fn parse_f64(s: &str) -> Result<f64, String> {
    let v: f64 = s
        .trim()
        .parse()
        .map_err(|_| format!("'{s}' is not a number"))?;
    if !v.is_finite() {
        return Err(format!("'{s}' is not finite"));
    }
    Ok(v)
}

fn list<const N: usize>(s: &str) -> Result<[f64; N], String> {
    let values = s.split(',').map(parse_f64).collect::<Result<Vec<_>, _>>()?;
    values
        .try_into()
        .map_err(|_| format!("expected {N} comma-separated numbers, got '{s}'"))
}

fn unit_interval(s: &str) -> Result<f64, String> {
    let v = parse_f64(s)?;
    if !(0.0..=1.0).contains(&v) {
        return Err(format!("must lie in [0, 1], got {v}"));
    }
    Ok(v)
}

fn positive(s: &str) -> Result<f64, String> {
    let v = parse_f64(s)?;
    if v <= 0.0 {
        return Err(format!("must be > 0, got {v}"));
    }
    Ok(v)
}

fn non_negative(s: &str) -> Result<f64, String> {
    let v = parse_f64(s)?;
    if v < 0.0 {
        return Err(format!("must be >= 0, got {v}"));
    }
    Ok(v)
}

fn positive_usize(s: &str) -> Result<usize, String> {
    match s.trim().parse::<usize>() {
        Ok(0) | Err(_) => Err(format!("must be a positive integer, got '{s}'")),
        Ok(v) => Ok(v),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // --help and --version.
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let msg = e.to_string();
            eprintln!(
                "{}",
                msg.lines().next().unwrap_or("error: invalid arguments")
            );
            return ExitCode::from(2);
        }
    };
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
        {
            eprintln!("error: {e}");
            return ExitCode::FAILURE;
        }
    }
    let result = match &cli.command {
        Command::Eval(a) => commands::eval(a),
        Command::AsymCheck(a) => commands::asym_check(a),
        Command::OracleCheck(a) => commands::oracle_check(a),
        Command::Fit(a) => commands::fit(a),
        Command::Synth(a) => commands::synth(a),
        Command::Profile(a) => commands::profile(a),
    };
    match result {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
