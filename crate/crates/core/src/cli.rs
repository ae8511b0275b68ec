//! Command-line front end.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::constants::{
    curve, czi, h_tilde, james, modulus_convexity, modulus_smoothness, nj_constant, z_profile,
    zbaganu, CurveConstant, CurvePoint, CziMethod, JamesMethod, NjVariant, ZbaganuMethod,
};
use crate::error::GeoError;
use crate::optimize::{Estimate, OptConfig};
use crate::space::{default_catalog, parse_space_spec, SpaceSpec};
use crate::verify::{all_asserted_pass, run_claims};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CLAIM_FAILED: i32 = 1;
pub const EXIT_IO: i32 = 2;
pub const EXIT_USAGE: i32 = 64;

#[derive(Debug, Parser)]
#[command(name = "geolab", version, about = "Geometric constants of normed planes and spaces")]
struct Cli {
    #[command(flatten)]
    opt: OptFlags,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct OptFlags {
    /// Grid points per axis before the budget cap
    #[arg(long, global = true, default_value_t = OptConfig::default().grid_resolution)]
    grid_resolution: usize,
    /// Best grid cells refined by compass search
    #[arg(long, global = true, default_value_t = OptConfig::default().top_cells)]
    top_cells: usize,
    /// Compass step at which refinement stops
    #[arg(long, global = true, default_value_t = OptConfig::default().step_tol)]
    step_tol: f64,
    /// Objective evaluations allowed per estimate
    #[arg(long, global = true, default_value_t = OptConfig::default().max_evals)]
    max_evals: u64,
    /// Seed for random starts and samplers
    #[arg(long, global = true, env = "GEOLAB_SEED", default_value_t = OptConfig::default().seed)]
    seed: u64,
    /// Random refinement starts in addition to the grid cells
    #[arg(long, global = true, default_value_t = OptConfig::default().extra_starts)]
    extra_starts: usize,
}

impl OptFlags {
    fn config(&self) -> OptConfig {
        OptConfig {
            grid_resolution: self.grid_resolution,
            top_cells: self.top_cells,
            step_tol: self.step_tol,
            max_evals: self.max_evals,
            seed: self.seed,
            extra_starts: self.extra_starts,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ConstantName {
    Czi,
    Z,
    Zbaganu,
    James,
    Nj,
    HTilde,
    Rho,
    Delta,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum CurveName {
    Czi,
    Z,
    Rho,
    Delta,
}

impl From<CurveName> for CurveConstant {
    fn from(c: CurveName) -> Self {
        match c {
            CurveName::Czi => CurveConstant::Czi,
            CurveName::Z => CurveConstant::Z,
            CurveName::Rho => CurveConstant::Rho,
            CurveName::Delta => CurveConstant::Delta,
        }
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Estimate one constant and print it as JSON
    Constant {
        /// Space, e.g. "lp:dim=2,p=1"
        spec: String,
        name: ConstantName,
        /// Parameter t (eps for delta)
        #[arg(long)]
        t: Option<f64>,
        /// Method or variant of the constant
        #[arg(long)]
        method: Option<String>,
    },
    /// Tabulate a constant on an even grid and write CSV
    Curve {
        spec: String,
        name: CurveName,
        #[arg(long, default_value_t = 51)]
        grid: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run the claim harness and write a JSON report
    Verify {
        /// Space to check (repeatable); defaults to the built-in catalog
        #[arg(long = "space")]
        spaces: Vec<String>,
        /// Comma-separated claim ids
        #[arg(long, value_delimiter = ',')]
        ids: Option<Vec<String>>,
        #[arg(long)]
        out: PathBuf,
        /// Record wall time per report (makes output run-dependent)
        #[arg(long)]
        timings: bool,
    },
}

enum Failure {
    Usage(String),
    Io(String),
}

impl From<GeoError> for Failure {
    fn from(e: GeoError) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn io_failure(path: &Path, e: impl std::fmt::Display) -> Failure {
    Failure::Io(format!("{}: {e}", path.display()))
}

/// Parses `args` (program name first), runs the command, and returns the
/// process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let cfg = cli.opt.config();
    let result = cfg
        .validate()
        .map_err(Failure::from)
        .and_then(|_| execute(cli.command, &cfg));
    match result {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            eprintln!("\nFor more information, try '--help'.");
            EXIT_USAGE
        }
        Err(Failure::Io(msg)) => {
            eprintln!("error: {msg}");
            EXIT_IO
        }
    }
}

fn parse_spec(s: &str) -> Result<SpaceSpec, Failure> {
    parse_space_spec(s).map_err(|e| Failure::Usage(format!("invalid space {s:?}: {e}")))
}

fn parse_method<M: std::str::FromStr<Err = String>>(m: Option<&str>, default: M) -> Result<M, Failure> {
    m.map_or(Ok(default), |s| s.parse().map_err(Failure::Usage))
}

fn need_t(t: Option<f64>) -> Result<f64, Failure> {
    t.ok_or_else(|| Failure::Usage("this constant needs --t".into()))
}

#[derive(Serialize)]
struct ConstantOutput<'a> {
    space: &'a SpaceSpec,
    constant: &'a str,
    method: Option<&'a str>,
    t: Option<f64>,
    #[serde(flatten)]
    estimate: Estimate,
}

fn execute(command: Command, cfg: &OptConfig) -> Result<i32, Failure> {
    match command {
        Command::Constant { spec, name, t, method } => {
            let space = parse_spec(&spec)?;
            let m = method.as_deref();
            let (label, method, t, est) = match name {
                ConstantName::Czi => {
                    let meth = parse_method(m, CziMethod::Direct)?;
                    let t = need_t(t)?;
                    ("czi", Some(meth.as_str()), Some(t), czi(&space, t, meth, cfg)?)
                }
                ConstantName::Z => {
                    let t = need_t(t)?;
                    ("z", None, Some(t), z_profile(&space, t, cfg)?)
                }
                ConstantName::Zbaganu => {
                    let meth = parse_method(m, ZbaganuMethod::Direct)?;
                    ("zbaganu", Some(meth.as_str()), None, zbaganu(&space, meth, cfg)?)
                }
                ConstantName::James => {
                    let meth = parse_method(m, JamesMethod::MinForm)?;
                    ("james", Some(meth.as_str()), None, james(&space, meth, cfg)?)
                }
                ConstantName::Nj => {
                    let meth = parse_method(m, NjVariant::Classic)?;
                    ("nj", Some(meth.as_str()), None, nj_constant(&space, meth, cfg)?)
                }
                ConstantName::HTilde => ("h_tilde", None, None, h_tilde(&space, cfg)?),
                ConstantName::Rho => {
                    let t = need_t(t)?;
                    ("rho", None, Some(t), modulus_smoothness(&space, t, cfg)?)
                }
                ConstantName::Delta => {
                    let t = need_t(t)?;
                    ("delta", None, Some(t), modulus_convexity(&space, t, cfg)?)
                }
            };
            let out = ConstantOutput {
                space: &space,
                constant: label,
                method,
                t,
                estimate: est,
            };
            let json = serde_json::to_string_pretty(&out).expect("estimate serializes");
            let _ = writeln!(io::stdout().lock(), "{json}");
            Ok(EXIT_OK)
        }
        Command::Curve { spec, name, grid, out } => {
            let space = parse_spec(&spec)?;
            if grid < 2 {
                return Err(Failure::Usage(format!("--grid must be at least 2, got {grid}")));
            }
            let constant = CurveConstant::from(name);
            let rows = curve(&space, constant, grid, cfg)?;
            write_curve(&out, &space, constant, &rows).map_err(|e| io_failure(&out, e))?;
            Ok(EXIT_OK)
        }
        Command::Verify { spaces, ids, out, timings } => {
            let spaces = if spaces.is_empty() {
                default_catalog()
            } else {
                spaces.iter().map(|s| parse_spec(s)).collect::<Result<_, _>>()?
            };
            let reports = run_claims(&spaces, ids.as_deref(), cfg, timings)?;
            let mut json = serde_json::to_string_pretty(&reports).expect("reports serialize");
            json.push('\n');
            File::create(&out)
                .and_then(|mut f| f.write_all(json.as_bytes()))
                .map_err(|e| io_failure(&out, e))?;
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            for r in &reports {
                let verdict = serde_json::to_value(r.verdict).expect("verdict serializes");
                let _ = writeln!(lock, "{:<4} {:<8} {}", r.claim_id, verdict.as_str().unwrap_or("?"), r.space);
            }
            Ok(if all_asserted_pass(&reports) {
                EXIT_OK
            } else {
                EXIT_CLAIM_FAILED
            })
        }
    }
}

/// `x` rounded to 12 significant digits, written in positional notation
/// without trailing zeros.
pub fn format_sig12(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{x:.11e}");
    let (_, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    let rounded: f64 = sci.parse().expect("float round-trips");
    let decimals = (11 - exp).max(0) as usize;
    let mut s = format!("{rounded:.decimals$}");
    if s.contains('.') {
        let trimmed = s.trim_end_matches('0').trim_end_matches('.').len();
        s.truncate(trimmed);
    }
    s
}

fn write_curve(
    path: &Path,
    space: &SpaceSpec,
    constant: CurveConstant,
    rows: &[CurvePoint],
) -> Result<(), csv::Error> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_path(path)?;
    w.write_record(["space", "constant", "method", "t", "value", "lower_bound", "upper_bound"])?;
    let space = space.to_string();
    for r in rows {
        w.write_record([
            space.as_str(),
            constant.as_str(),
            r.method.as_str(),
            &format_sig12(r.t),
            &format_sig12(r.value),
            &format_sig12(r.lower_bound),
            &format_sig12(r.upper_bound),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sig12() {
        assert_eq!(format_sig12(0.0), "0");
        assert_eq!(format_sig12(0.25), "0.25");
        assert_eq!(format_sig12(1.0), "1");
        assert_eq!(format_sig12(2f64.sqrt()), "1.41421356237");
        assert_eq!(format_sig12(-1.0 / 3.0), "-0.333333333333");
        assert_eq!(format_sig12(123456789012345.0), "123456789012000");
        assert_eq!(format_sig12(1.5e-7), "0.00000015");
        assert_eq!(format_sig12(0.1 + 0.2), "0.3");
    }

    #[test]
    fn sig12_round_trips_to_12_digits() {
        for x in [std::f64::consts::PI, 1e-9 / 7.0, 9.999999999999e5, 0.0625 - 1e-13] {
            let back: f64 = format_sig12(x).parse().unwrap();
            assert!(((back - x) / x).abs() < 5e-12, "{x} {back}");
        }
    }

    #[test]
    fn usage_exit_codes() {
        assert_eq!(run(["geolab", "--help"]), EXIT_OK);
        assert_eq!(run(["geolab", "frobnicate"]), EXIT_USAGE);
        assert_eq!(run(["geolab", "constant", "lplq:p=1,q=2", "james"]), EXIT_USAGE);
        assert_eq!(run(["geolab", "constant", "euclidean:dim=2", "czi"]), EXIT_USAGE);
        assert_eq!(
            run(["geolab", "--grid-resolution", "0", "constant", "euclidean:dim=2", "h-tilde"]),
            EXIT_USAGE
        );
    }
}
