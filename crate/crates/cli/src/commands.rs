use std::fmt;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use ce_core::geometry::{witness_chain, BallUnion};
use ce_core::improve::{
    improve_fourier, improve_spatial, sharpen_via_dual, suggest_dual_c, ImprovementParams,
    DEFAULT_CLEARANCE_DENSITY,
};
use ce_core::lp::{default_bracket, minimize_r, LpGridSpec, OptimizeResult};
use ce_core::radial::{
    density_bound, ft_check, verify_ce, CEReport, EvenFunction, GridSpec, RadialProfile,
};
use ce_core::special::QuadratureConfig;
use ce_core::zeros::{extract_zeros, gap_statistics, roots_csv, GapStats, Side, ZeroReport};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::goldens;
use crate::{
    BoundArgs, Command, Emit, Fixture, FtCheckArgs, ImproveArgs, ImproveSide, OptimizeArgs, Scan,
    SideArg, VerifyArgs, ZerosArgs,
};

const DEFAULT_R_MAX: f64 = 6.0;

#[derive(Debug)]
pub enum CliError {
    Core(ce_core::Error),
    Io(PathBuf, io::Error),
    Csv(csv::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(e) => e.class().exit_code() as u8,
            CliError::Io(..) | CliError::Csv(_) => 2,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io(p, e) => write!(f, "{}: {e}", p.display()),
            CliError::Csv(e) => write!(f, "{e}"),
        }
    }
}

impl From<ce_core::Error> for CliError {
    fn from(e: ce_core::Error) -> Self {
        CliError::Core(e)
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Core(e.into())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Csv(e)
    }
}

type Result<T> = std::result::Result<T, CliError>;

/// Runs one subcommand and returns its exit status.
pub fn run(cmd: Command) -> Result<u8> {
    match cmd {
        Command::Bound(a) => bound(a),
        Command::Verify(a) => verify(a),
        Command::Zeros(a) => zeros(a),
        Command::Optimize(a) => optimize(a),
        Command::Improve(a) => improve(a),
        Command::FtCheck(a) => ftcheck(a),
    }
}

fn write_out(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| CliError::Io(p.to_path_buf(), e)),
        None => io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| CliError::Io("<stdout>".into(), e)),
    }
}

fn json<T: Serialize>(v: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(v)? + "\n")
}

/// A bare descriptor, or any JSON object carrying one under "function".
fn load_function(path: Option<&Path>) -> Result<EvenFunction> {
    let text = match path {
        Some(p) => fs::read_to_string(p).map_err(|e| CliError::Io(p.to_path_buf(), e))?,
        None => goldens::TRIANGLE.to_string(),
    };
    if let Ok(f) = EvenFunction::from_json(&text) {
        return Ok(f);
    }
    let value: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| ce_core::Error::Descriptor(e.to_string()))?;
    match value.get("function") {
        Some(inner) => Ok(serde_json::from_value(inner.clone())
            .map_err(|e| ce_core::Error::Descriptor(e.to_string()))?),
        None => Ok(EvenFunction::from_json(&text)?),
    }
}

fn grid_spec(s: &Scan) -> GridSpec {
    GridSpec {
        r_max: s.r_max.unwrap_or(DEFAULT_R_MAX),
        step: s.grid,
        tol: s.tol,
        seed: s.seed,
        ..GridSpec::default()
    }
}

/// (radius,value) of the largest sampled value of f at each grid length.
fn profile_csv(f: &EvenFunction, grid: &GridSpec) -> Result<String> {
    let p = RadialProfile::new(f, false, grid.directions, grid.seed);
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["radius", "value"])?;
    let steps = (grid.r_max / grid.step).round() as usize;
    for i in 0..=steps {
        let s = grid.r_max * i as f64 / steps as f64;
        w.serialize((s, p.max_at(s)?))?;
    }
    Ok(String::from_utf8(
        w.into_inner()
            .map_err(|e| CliError::Csv(e.into_error().into()))?,
    )
    .expect("csv is utf-8"))
}

fn bound(a: BoundArgs) -> Result<u8> {
    let value = density_bound(a.dim, a.r)?;
    let text = if a.json {
        json(&serde_json::json!({ "dim": a.dim, "r": a.r, "density_bound": value }))?
    } else {
        format!("{value}\n")
    };
    write_out(a.out.as_deref(), &text)?;
    Ok(0)
}

fn verify(a: VerifyArgs) -> Result<u8> {
    let f = load_function(a.input.as_deref())?;
    let grid = grid_spec(&a.scan);
    let report = verify_ce(&f, &grid)?;
    let text = match a.output.emit {
        Emit::Json => json(&report)?,
        Emit::Csv => profile_csv(&f, &grid)?,
    };
    write_out(a.output.out.as_deref(), &text)?;
    Ok(if report.passed { 0 } else { 3 })
}

#[derive(Serialize)]
struct ZerosOutput {
    report: ZeroReport,
    gaps: Option<GapStats>,
    gaps_unavailable: Option<String>,
}

fn zeros(a: ZerosArgs) -> Result<u8> {
    let report = match a.fixture {
        Some(Fixture::E8) => goldens::e8_report()?,
        Some(Fixture::Remark) => goldens::remark_report()?,
        None => {
            let f = load_function(a.input.as_deref())?;
            let side = match a.side {
                SideArg::Function => Side::Function,
                SideArg::Transform => Side::Transform,
            };
            extract_zeros(
                &f,
                side,
                a.scan.r_max.unwrap_or(DEFAULT_R_MAX),
                a.scan.tol,
                a.scan.grid,
            )?
        }
    };
    let text = match a.output.emit {
        Emit::Csv => roots_csv(&report),
        Emit::Json => {
            let (gaps, gaps_unavailable) =
                match gap_statistics(&report, a.window, &a.thresholds, &a.progressions) {
                    Ok(g) => (Some(g), None),
                    Err(e @ ce_core::Error::InsufficientData(_)) => (None, Some(e.to_string())),
                    Err(e) => return Err(e.into()),
                };
            json(&ZerosOutput {
                report,
                gaps,
                gaps_unavailable,
            })?
        }
    };
    write_out(a.output.out.as_deref(), &text)?;
    Ok(0)
}

#[derive(Serialize)]
struct OptimizeOutput<'a> {
    function: EvenFunction,
    density_bound: f64,
    result: &'a OptimizeResult,
}

fn optimize(a: OptimizeArgs) -> Result<u8> {
    let (lo, hi) = match a.r {
        Some(pair) => pair,
        None => default_bracket(a.dim)?,
    };
    let grid = LpGridSpec {
        neg_points: a.grid,
        pos_points: a.grid,
        r_max: a.r_max,
        ..LpGridSpec::default()
    };
    let result = minimize_r(a.dim, a.degree, lo, hi, a.tol, &grid)?;
    let text = match a.output.emit {
        Emit::Csv => result.trace_csv(),
        Emit::Json => json(&OptimizeOutput {
            function: result.function()?,
            density_bound: density_bound(a.dim, result.r_best)?,
            result: &result,
        })?,
    };
    write_out(a.output.out.as_deref(), &text)?;
    Ok(0)
}

#[derive(Serialize)]
struct ImproveOutput {
    function: EvenFunction,
    params: ImprovementParams,
    input_r: f64,
    witness: Option<BallUnion>,
    report: CEReport,
}

fn improve(a: ImproveArgs) -> Result<u8> {
    let f = load_function(a.input.as_deref())?;
    let grid = grid_spec(&a.scan);
    let input = verify_ce(&f, &grid)?;
    let r = match (input.passed, input.r) {
        (true, Some(r)) => r,
        _ => {
            return Err(ce_core::Error::PreconditionFailed(format!(
                "input fails verification: {}",
                input.failures.join("; ")
            ))
            .into())
        }
    };
    let chain = |side: Side| -> Result<BallUnion> {
        let z = extract_zeros(&f, side, 2.0 * grid.r_max, grid.tol, grid.step)?;
        let oracle = z.gap_oracle(a.buffer)?;
        Ok(witness_chain(f.dim(), &oracle, a.eps, a.target)?)
    };
    let (improved, witness) = match a.side {
        ImproveSide::Dual => {
            let c = match a.c {
                Some(c) => c,
                None => suggest_dual_c(&f, a.theta, &grid)?,
            };
            (sharpen_via_dual(&f, r, c, &grid)?, None)
        }
        ImproveSide::Spatial => {
            let s = chain(Side::Function)?;
            (
                improve_spatial(&f, &s, r, a.theta, DEFAULT_CLEARANCE_DENSITY, a.scan.seed)?,
                Some(s),
            )
        }
        ImproveSide::Fourier => {
            let s = chain(Side::Transform)?;
            (
                improve_fourier(&f, &s, a.theta, DEFAULT_CLEARANCE_DENSITY, a.scan.seed)?,
                Some(s),
            )
        }
    };
    let report = verify_ce(&improved.function, &grid)?;
    let passed = report.passed;
    let text = match a.output.emit {
        Emit::Csv => profile_csv(&improved.function, &grid)?,
        Emit::Json => json(&ImproveOutput {
            function: improved.function,
            params: improved.params,
            input_r: r,
            witness,
            report,
        })?,
    };
    write_out(a.output.out.as_deref(), &text)?;
    Ok(if passed { 0 } else { 3 })
}

/// Seeded eigen sum with coefficients uniform in [−1, 1].
fn random_eigen_sum(dim: usize, degree: usize, seed: u64) -> Result<EvenFunction> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let coeffs: Vec<f64> = (0..=degree).map(|_| rng.random_range(-1.0..=1.0)).collect();
    Ok(EvenFunction::eigen_sum(dim, &coeffs)?)
}

#[derive(Serialize)]
struct FtCheckOutput {
    function: EvenFunction,
    check: ce_core::radial::FtCheck,
}

fn ftcheck(a: FtCheckArgs) -> Result<u8> {
    let f = match &a.input {
        Some(p) => load_function(Some(p))?,
        None => random_eigen_sum(a.dim, a.degree, a.seed)?,
    };
    if a.points < 2 || !a.r_max.is_finite() || a.r_max <= 0.0 {
        return Err(ce_core::Error::InvalidParameter(format!(
            "{} points on [0, {}]",
            a.points, a.r_max
        ))
        .into());
    }
    let radii: Vec<f64> = (0..a.points)
        .map(|i| a.r_max * i as f64 / (a.points - 1) as f64)
        .collect();
    let check = ft_check(&f, &radii, &QuadratureConfig::default())?;
    let text = match a.output.emit {
        Emit::Json => json(&FtCheckOutput { function: f, check })?,
        Emit::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["radius", "exact", "oracle"])?;
            for p in &check.samples {
                w.serialize((p.radius, p.exact, p.oracle))?;
            }
            String::from_utf8(
                w.into_inner()
                    .map_err(|e| CliError::Csv(e.into_error().into()))?,
            )
            .expect("csv is utf-8")
        }
    };
    write_out(a.output.out.as_deref(), &text)?;
    Ok(0)
}
