//! Batch front end: `oscillometer <norm|distance|check> --config path.json`.
//!
//! Exit codes: 0 success, 2 configuration error, 3 numerical error,
//! 4 failed check.

mod builtins;
mod config;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use serde::Serialize;
use tempfile::NamedTempFile;

pub use builtins::Builtin;
pub use config::{FunctionSpec, InvarianceSpec, OutputSpec, RunConfig, Task};

use crate::approx::{assumption_check, ApproxFamily, AssumptionReport, Verdict};
use crate::distance::{sandwich_check_with_slack, DistanceReport};
use crate::error::{Error, Result};
use crate::family::seminorm_sup;
use crate::funcrep::{Automorphism, FunctionData};
use crate::spaces::{build_family, build_family_for, SpaceTag};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;
pub const EXIT_CHECK_FAILED: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "oscillometer", version, about = "Seminorms and distances to little spaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Grid seminorm `sup ‖Lf‖`.
    Norm(Common),
    /// Tail estimate of the distance to the little space.
    Distance(Common),
    /// Approximation assumption or Möbius invariance check.
    Check(Common),
}

#[derive(Debug, Args)]
struct Common {
    #[arg(long)]
    config: PathBuf,
    /// Directory for the report and profile (default: current directory).
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
}

/// Parse arguments, run, and return the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    configure_threads();
    let (command, common) = match &cli.command {
        Command::Norm(c) => ("norm", c),
        Command::Distance(c) => ("distance", c),
        Command::Check(c) => ("check", c),
    };
    match execute(command, common) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn configure_threads() {
    let threads = std::env::var("OSCILLOMETER_THREADS")
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .unwrap_or(0);
    if threads > 0 {
        // a pool that is already up keeps its size
        let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
    }
}

fn execute(command: &str, common: &Common) -> Result<i32> {
    let mut cfg = RunConfig::from_file(&common.config)?;
    if common.seed.is_some() {
        cfg.seed = common.seed;
    }
    let base = common.config.parent().unwrap_or(Path::new(".")).to_path_buf();
    let out = common.out.clone().unwrap_or_else(|| PathBuf::from("."));
    let f = cfg.function.load(&cfg.space, &base).map_err(|e| match e {
        Error::InvalidParameter(m) => Error::Config(m),
        other => other,
    })?;
    match command {
        "norm" => cmd_norm(&cfg, &f, &out),
        "distance" => cmd_distance(&cfg, &f, &out),
        _ => cmd_check(&cfg, &f, &out),
    }
}

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    space: SpaceTag,
    #[serde(skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
    #[serde(flatten)]
    body: &'a T,
}

fn render<T: Serialize>(cfg: &RunConfig, body: &T) -> Result<Vec<u8>> {
    let env = Envelope {
        space: cfg.space.tag(),
        seed: cfg.seed,
        body,
    };
    let mut text = serde_json::to_vec_pretty(&env)?;
    text.push(b'\n');
    Ok(text)
}

/// Write every file to a temporary sibling first, then rename them all, so a
/// failure leaves no partial output.
fn write_atomically(files: &[(PathBuf, Vec<u8>)]) -> Result<()> {
    let mut staged = Vec::with_capacity(files.len());
    for (path, bytes) in files {
        let dir = path
            .parent()
            .filter(|p| !p.as_os_str().is_empty())
            .unwrap_or(Path::new("."));
        std::fs::create_dir_all(dir)?;
        let mut tmp = NamedTempFile::new_in(dir)?;
        tmp.write_all(bytes)?;
        tmp.as_file().sync_all()?;
        staged.push((tmp, path));
    }
    for (tmp, path) in staged {
        tmp.persist(path).map_err(|e| Error::Io(e.error))?;
    }
    Ok(())
}

fn cmd_norm(cfg: &RunConfig, f: &FunctionData, out: &Path) -> Result<i32> {
    let grid = build_family_for(&cfg.space, f)?;
    let report = seminorm_sup(&grid, f)?;
    write_atomically(&[(out.join(&cfg.output.report), render(cfg, &report)?)])?;
    Ok(EXIT_OK)
}

fn cmd_distance(cfg: &RunConfig, f: &FunctionData, out: &Path) -> Result<i32> {
    let approximants = match &cfg.family {
        Some(spec) => {
            let fam = ApproxFamily::generate(spec, f)?;
            fam.ids().into_iter().zip(fam.members).collect()
        }
        None => Vec::new(),
    };
    let report: DistanceReport = sandwich_check_with_slack(&cfg.space, f, &approximants, cfg.slack())?;
    let mut csv = Vec::new();
    report.tail_profile.write_csv(&mut csv)?;
    write_atomically(&[
        (out.join(&cfg.output.report), render(cfg, &report)?),
        (out.join(&cfg.output.profile), csv),
    ])?;
    Ok(if report.sandwich_ok { EXIT_OK } else { EXIT_CHECK_FAILED })
}

/// Grid `Q_K` seminorm of `f` and of `f∘φ − f(φ(0))`.
#[derive(Clone, Debug, Serialize)]
pub struct InvarianceReport {
    pub a: [f64; 2],
    pub lambda: [f64; 2],
    pub original: f64,
    pub composed: f64,
    pub relative_deviation: f64,
    pub tolerance: f64,
    pub pass: bool,
}

pub fn invariance_check(cfg: &RunConfig, f: &FunctionData) -> Result<InvarianceReport> {
    if cfg.space.tag() != SpaceTag::Qk {
        return Err(Error::Config("invariance-check needs a qk space".into()));
    }
    let spec = cfg
        .invariance
        .as_ref()
        .ok_or_else(|| Error::Config("invariance-check needs an invariance block".into()))?;
    let phi = Automorphism::new(
        Complex64::new(spec.a[0], spec.a[1]),
        Complex64::new(spec.lambda[0], spec.lambda[1]),
    )
    .map_err(|e| Error::Config(e.to_string()))?;
    let g = FunctionData::Taylor(f.as_taylor()?.compose_mobius(phi)?);
    let grid = build_family(&cfg.space)?;
    let original = seminorm_sup(&grid, f)?.value;
    let composed = seminorm_sup(&grid, &g)?.value;
    let relative_deviation = if original > 0.0 {
        (composed - original).abs() / original
    } else {
        composed
    };
    Ok(InvarianceReport {
        a: spec.a,
        lambda: spec.lambda,
        original,
        composed,
        relative_deviation,
        tolerance: spec.tolerance,
        pass: relative_deviation <= spec.tolerance,
    })
}

fn cmd_check(cfg: &RunConfig, f: &FunctionData, out: &Path) -> Result<i32> {
    let task = match cfg.task {
        Some(t @ (Task::AssumptionCheck | Task::InvarianceCheck)) => t,
        Some(other) => {
            return Err(Error::Config(format!("task {other:?} is not a check")));
        }
        None if cfg.family.is_some() => Task::AssumptionCheck,
        None if cfg.invariance.is_some() => Task::InvarianceCheck,
        None => return Err(Error::Config("check needs a family or an invariance block".into())),
    };
    let path = out.join(&cfg.output.report);
    if task == Task::InvarianceCheck {
        let report = invariance_check(cfg, f)?;
        write_atomically(&[(path, render(cfg, &report)?)])?;
        return Ok(if report.pass { EXIT_OK } else { EXIT_CHECK_FAILED });
    }
    let spec = cfg
        .family
        .as_ref()
        .ok_or_else(|| Error::Config("assumption-check needs a family block".into()))?;
    let family = ApproxFamily::generate(spec, f)?;
    let report: AssumptionReport = assumption_check(&cfg.space, f, &family, cfg.slack())?;
    write_atomically(&[(path, render(cfg, &report)?)])?;
    Ok(if report.verdict == Verdict::Pass {
        EXIT_OK
    } else {
        EXIT_CHECK_FAILED
    })
}
