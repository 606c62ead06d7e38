//! `celp`: Cohn–Elkies linear-programming bounds from the command line.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;
mod goldens;

const EXIT_CODES: &str = "\
Exit status:
  0  success
  2  invalid input (bad flags, malformed descriptor, degenerate grid)
  3  precondition failed (verification failed, no tail certificate, bad bracket)
  4  numeric non-convergence (quadrature or simplex stall)
  5  improvement refused (no witness gap, no clearance, optimal input)";

#[derive(Parser, Debug)]
#[command(name = "celp", version, about = "Sphere-packing density bounds via Cohn–Elkies functions", after_help = EXIT_CODES)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Density bound V_n (r/2)^n implied by a certified radius r
    #[command(after_help = EXIT_CODES)]
    Bound(BoundArgs),
    /// Check that a function descriptor is a Cohn–Elkies candidate
    #[command(after_help = EXIT_CODES)]
    Verify(VerifyArgs),
    /// Root lengths of a radial profile and their gap statistics
    #[command(after_help = EXIT_CODES)]
    Zeros(ZerosArgs),
    /// Minimize the certified radius over Laguerre–Gaussian eigen sums
    #[command(after_help = EXIT_CODES)]
    Optimize(OptimizeArgs),
    /// Apply one improvement operator to a verified candidate
    #[command(after_help = EXIT_CODES)]
    Improve(ImproveArgs),
    /// Compare the exact transform with radial quadrature
    #[command(name = "ft-check", after_help = EXIT_CODES)]
    FtCheck(FtCheckArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Emit {
    Json,
    Csv,
}

#[derive(Args, Debug)]
struct Output {
    /// write here instead of standard output
    #[arg(long = "out")]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Emit::Json)]
    emit: Emit,
}

#[derive(Args, Debug)]
struct Scan {
    /// upper end of the scan range
    #[arg(long = "rmax")]
    r_max: Option<f64>,
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    /// scan step
    #[arg(long, default_value_t = 1e-3)]
    grid: f64,
    /// seed for sampled directions of non-radial functions
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args, Debug)]
struct BoundArgs {
    #[arg(long)]
    dim: usize,
    #[arg(long)]
    r: f64,
    /// print a JSON record instead of the bare number
    #[arg(long)]
    json: bool,
    #[arg(long = "out")]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// function descriptor (JSON); defaults to the bundled triangle certificate
    #[arg(long = "in")]
    input: Option<PathBuf>,
    #[command(flatten)]
    scan: Scan,
    #[command(flatten)]
    output: Output,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum SideArg {
    Function,
    Transform,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Fixture {
    /// E8 root lengths √(2m), m ≤ 18
    E8,
    /// zero set whose complement is [0, ε] ∪ ⋃ [2^k − ε, 2^k + ε]
    Remark,
}

#[derive(Args, Debug)]
struct ZerosArgs {
    /// function descriptor (JSON)
    #[arg(
        long = "in",
        conflicts_with = "fixture",
        required_unless_present = "fixture"
    )]
    input: Option<PathBuf>,
    /// use a bundled root list instead of a function
    #[arg(long, value_enum)]
    fixture: Option<Fixture>,
    #[arg(long, value_enum, default_value_t = SideArg::Function)]
    side: SideArg,
    #[command(flatten)]
    scan: Scan,
    /// window width C for the windowed minimum-gap profile
    #[arg(long, default_value_t = 1.0)]
    window: f64,
    /// window widths for close-pair counts (repeatable)
    #[arg(long = "threshold")]
    thresholds: Vec<f64>,
    /// arithmetic progression as SPACING,EPS for neighborhood counts (repeatable)
    #[arg(long = "progression", value_parser = parse_pair)]
    progressions: Vec<(f64, f64)>,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Debug)]
struct OptimizeArgs {
    #[arg(long)]
    dim: usize,
    /// highest Laguerre degree K
    #[arg(long, default_value_t = 12)]
    degree: usize,
    /// bisection bracket as LO,HI; defaults to [V^{-1/n}/2, 2V^{-1/n} + 1/2]
    #[arg(long, value_parser = parse_pair)]
    r: Option<(f64, f64)>,
    /// upper end of the LP sample range; defaults to max(6, 3r)
    #[arg(long = "rmax")]
    r_max: Option<f64>,
    /// bisection tolerance on r
    #[arg(long, default_value_t = 1e-4)]
    tol: f64,
    /// number of sample points on each side of the LP
    #[arg(long, default_value_t = 400)]
    grid: usize,
    #[command(flatten)]
    output: Output,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ImproveSide {
    Spatial,
    Fourier,
    Dual,
}

#[derive(Args, Debug)]
struct ImproveArgs {
    /// function descriptor (JSON); defaults to the bundled triangle certificate
    #[arg(long = "in")]
    input: Option<PathBuf>,
    #[arg(long, value_enum)]
    side: ImproveSide,
    /// fraction of the maximal admissible mixing weight
    #[arg(long, default_value_t = 0.5)]
    theta: f64,
    /// sharpening constant for the dual side; suggested from the grid when omitted
    #[arg(long)]
    c: Option<f64>,
    /// ball radius of the witness chain
    #[arg(long, default_value_t = 0.45)]
    eps: f64,
    /// measure the witness chain must reach; zeros are searched up to twice --rmax
    #[arg(long, default_value_t = 1.05)]
    target: f64,
    /// buffer added around isolated roots when certifying gaps
    #[arg(long, default_value_t = 0.05)]
    buffer: f64,
    #[command(flatten)]
    scan: Scan,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Debug)]
struct FtCheckArgs {
    /// function descriptor (JSON); a seeded random eigen sum when omitted
    #[arg(long = "in")]
    input: Option<PathBuf>,
    #[arg(long, default_value_t = 1)]
    dim: usize,
    #[arg(long, default_value_t = 6)]
    degree: usize,
    /// largest radius compared
    #[arg(long = "rmax", default_value_t = 3.0)]
    r_max: f64,
    #[arg(long, default_value_t = 50)]
    points: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    output: Output,
}

fn parse_pair(s: &str) -> Result<(f64, f64), String> {
    let (a, b) = s
        .split_once(',')
        .ok_or_else(|| format!("expected A,B but got {s:?}"))?;
    let a = a.trim().parse::<f64>().map_err(|e| e.to_string())?;
    let b = b.trim().parse::<f64>().map_err(|e| e.to_string())?;
    Ok((a, b))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("celp: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pairs() {
        assert_eq!(parse_pair("0.5, 2"), Ok((0.5, 2.0)));
        assert!(parse_pair("1").is_err());
        assert!(parse_pair("a,1").is_err());
    }

    #[test]
    fn clap_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
