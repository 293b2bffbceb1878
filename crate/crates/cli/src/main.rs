//! Command-line front end for the random-tensor experiments.
//!
//! Each subcommand takes a TOML config, runs one experiment from the core
//! library, and writes CSV/SVG artifacts plus a `manifest.json` into a run
//! directory. Exit codes: 0 on success, 2 for config errors, 3 for numeric
//! or output errors.

mod config;
mod error;
mod experiments;
mod figures;
mod manifest;
mod svg;

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::thread;

use clap::{Args, Parser, Subcommand};
use serde::de::DeserializeOwned;
use serde::Serialize;

use config::{
    parse_config, snapshot, CommonOverrides, KroneckerConfig, Lemma1Config, MomentsConfig,
    ProcessConfig, SampleConfig, SpectrumConfig, SpikedConfig, SpikedFamily, SpikedOverrides,
    Validate, KIND_KRONECKER, KIND_LEMMA1, KIND_MOMENTS, KIND_PROCESS, KIND_SAMPLE, KIND_SPECTRUM,
    KIND_SPIKED,
};
use error::{CliError, Result};
use manifest::Outputs;

/// Environment variable naming the default base output directory.
const OUT_ENV: &str = "RANDTENSOR_OUT";
/// Seed of the built-in sweep used when `spiked` runs without a config.
const DEFAULT_SPIKED_SEED: u64 = 1729;

#[derive(Parser)]
#[command(
    name = "randtensor",
    version,
    about = "Experiments on complex random tensors: sampling, second-order structure, \
             filtered processes, limiting spectra, and spiked-model recovery"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CommonFlags {
    /// RNG seed, overriding the config value.
    #[arg(long)]
    seed: Option<u64>,
    /// Base output directory (overrides the config and RANDTENSOR_OUT).
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
    /// Name of the run subdirectory under the output directory.
    #[arg(long)]
    label: Option<String>,
}

impl CommonFlags {
    fn overrides(&self) -> CommonOverrides {
        CommonOverrides {
            seed: self.seed,
            out: self.out.clone(),
            label: self.label.clone(),
        }
    }
}

#[derive(Args)]
struct SpikedFlags {
    /// Model family: symmetric or asymmetric.
    #[arg(long, value_parser = parse_family)]
    family: Option<SpikedFamily>,
    /// Tensor order (symmetric family).
    #[arg(long)]
    order: Option<usize>,
    /// Mode size (symmetric family).
    #[arg(long)]
    dim: Option<usize>,
    /// Comma-separated mode sizes (asymmetric family).
    #[arg(long, value_delimiter = ',', value_name = "I1,I2,...")]
    dims: Option<Vec<usize>>,
    /// Smallest signal strength of the sweep.
    #[arg(long)]
    beta_min: Option<f64>,
    /// Largest signal strength of the sweep.
    #[arg(long)]
    beta_max: Option<f64>,
    /// Number of sweep points, endpoints included.
    #[arg(long)]
    beta_count: Option<usize>,
    /// Independent planted instances per sweep point.
    #[arg(long)]
    trials: Option<usize>,
    /// Random power-iteration starts per instance.
    #[arg(long)]
    restarts: Option<usize>,
    /// Iteration cap per start.
    #[arg(long)]
    max_iters: Option<usize>,
    /// Convergence tolerance on the iterate.
    #[arg(long)]
    tol: Option<f64>,
}

fn parse_family(s: &str) -> std::result::Result<SpikedFamily, String> {
    match s {
        "symmetric" => Ok(SpikedFamily::Symmetric),
        "asymmetric" => Ok(SpikedFamily::Asymmetric),
        other => Err(format!(
            "unknown family `{other}` (expected symmetric or asymmetric)"
        )),
    }
}

impl SpikedFlags {
    fn overrides(&self) -> SpikedOverrides {
        SpikedOverrides {
            family: self.family,
            order: self.order,
            dim: self.dim,
            dims: self.dims.clone(),
            beta_min: self.beta_min,
            beta_max: self.beta_max,
            beta_count: self.beta_count,
            trials: self.trials,
            restarts: self.restarts,
            max_iters: self.max_iters,
            tol: self.tol,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Draw Gaussian tensor samples and check the estimated correlation
    Sample {
        config: PathBuf,
        #[command(flatten)]
        common: CommonFlags,
    },
    /// Estimate mean, covariance, and pseudo-covariance of a Gaussian family
    Moments {
        config: PathBuf,
        #[command(flatten)]
        common: CommonFlags,
    },
    /// Estimate per-domain factors of a separable MIMO correlation
    Lemma1 {
        config: PathBuf,
        #[command(flatten)]
        common: CommonFlags,
    },
    /// Exhibit uniform per-mode blocks without a Kronecker factorization
    Kronecker {
        config: PathBuf,
        #[command(flatten)]
        common: CommonFlags,
    },
    /// Filter a white tensor sequence and verify stationary relations
    Process {
        config: PathBuf,
        #[command(flatten)]
        common: CommonFlags,
    },
    /// Histogram the spectrum of a random tensor ensemble against its limit
    Spectrum {
        config: PathBuf,
        #[command(flatten)]
        common: CommonFlags,
    },
    /// Sweep signal strength in a spiked model and compare with theory
    Spiked {
        /// Optional config file; defaults to a symmetric order-3 sweep.
        config: Option<PathBuf>,
        #[command(flatten)]
        common: CommonFlags,
        #[command(flatten)]
        spiked: SpikedFlags,
    },
    /// Re-run the canonical figure configs bundled with the binary
    Reproduce {
        /// Which figures to rebuild: all, fig4, fig5, or fig6.
        target: String,
        /// Base output directory (overrides RANDTENSOR_OUT).
        #[arg(long, value_name = "DIR")]
        out: Option<PathBuf>,
    },
}

/// One experiment kind as the front end sees it: strict parsing, flag
/// overrides, and a driver.
trait Runnable: DeserializeOwned + Serialize + Validate {
    const KIND: &'static str;
    const SUBCOMMAND: &'static str;
    fn apply_common(&mut self, ov: &CommonOverrides);
    fn seed(&self) -> u64;
    fn label(&self) -> Option<&str>;
    fn output(&self) -> Option<&Path>;
    fn drive(&self, out: &mut Outputs) -> Result<()>;
}

macro_rules! runnable {
    ($ty:ty, $kind:expr, $sub:expr, $driver:path) => {
        impl Runnable for $ty {
            const KIND: &'static str = $kind;
            const SUBCOMMAND: &'static str = $sub;
            fn apply_common(&mut self, ov: &CommonOverrides) {
                self.apply(ov);
            }
            fn seed(&self) -> u64 {
                self.seed
            }
            fn label(&self) -> Option<&str> {
                self.label.as_deref()
            }
            fn output(&self) -> Option<&Path> {
                self.output.as_deref()
            }
            fn drive(&self, out: &mut Outputs) -> Result<()> {
                $driver(self, out)
            }
        }
    };
}

runnable!(SampleConfig, KIND_SAMPLE, "sample", experiments::sample::run);
runnable!(MomentsConfig, KIND_MOMENTS, "moments", experiments::moments::run);
runnable!(Lemma1Config, KIND_LEMMA1, "lemma1", experiments::lemma1::run);
runnable!(KroneckerConfig, KIND_KRONECKER, "kronecker", experiments::kronecker::run);
runnable!(ProcessConfig, KIND_PROCESS, "process", experiments::process::run);
runnable!(SpectrumConfig, KIND_SPECTRUM, "spectrum", experiments::spectrum::run);

impl Runnable for SpikedConfig {
    const KIND: &'static str = KIND_SPIKED;
    const SUBCOMMAND: &'static str = "spiked";
    fn apply_common(&mut self, ov: &CommonOverrides) {
        self.apply(ov, &SpikedOverrides::default());
    }
    fn seed(&self) -> u64 {
        self.seed
    }
    fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }
    fn output(&self) -> Option<&Path> {
        self.output.as_deref()
    }
    fn drive(&self, out: &mut Outputs) -> Result<()> {
        experiments::spiked::run(self, out)
    }
}

/// Base output directory: the effective config (flag already folded in),
/// then the environment, then `./out`.
fn resolve_base_out(cfg_output: Option<&Path>) -> PathBuf {
    if let Some(p) = cfg_output {
        return p.to_path_buf();
    }
    if let Ok(v) = std::env::var(OUT_ENV) {
        if !v.is_empty() {
            return PathBuf::from(v);
        }
    }
    PathBuf::from("out")
}

/// Runs a fully overridden, validated config and returns the stdout lines.
fn finish_run<T: Runnable>(cfg: &T, source_stem: Option<&str>) -> Result<Vec<String>> {
    let label = cfg
        .label()
        .map(str::to_string)
        .or_else(|| source_stem.map(str::to_string))
        .unwrap_or_else(|| T::KIND.to_string());
    let dir = resolve_base_out(cfg.output()).join(&label);
    let snap = snapshot(cfg)?;
    let mut out = Outputs::create(dir, T::KIND, &label, cfg.seed(), snap)?;
    cfg.drive(&mut out)?;
    let checksum = out.run_checksum().to_string();
    let dir = out.dir().to_path_buf();
    let names = out.finish()?;
    let mut lines: Vec<String> = names
        .iter()
        .map(|n| format!("wrote {}", dir.join(n).display()))
        .collect();
    lines.push(format!("run checksum {checksum}"));
    Ok(lines)
}

/// Parses config text, applies flag overrides, re-validates (flags can
/// break cross-field invariants the file satisfied), and runs.
fn run_text<T: Runnable>(
    text: &str,
    source_stem: Option<&str>,
    common: &CommonOverrides,
) -> Result<Vec<String>> {
    let mut cfg: T = parse_config(text, T::SUBCOMMAND, T::KIND)?;
    cfg.apply_common(common);
    cfg.validate()?;
    finish_run(&cfg, source_stem)
}

fn read_config(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| {
        CliError::Config(format!("cannot read config `{}`: {e}", path.display()))
    })
}

fn run_file<T: Runnable>(path: &Path, common: &CommonOverrides) -> Result<Vec<String>> {
    let text = read_config(path)?;
    let stem = path.file_stem().and_then(|s| s.to_str()).map(str::to_string);
    run_text::<T>(&text, stem.as_deref(), common)
}

fn run_spiked(
    path: Option<&Path>,
    common: &CommonOverrides,
    sp: &SpikedOverrides,
) -> Result<Vec<String>> {
    let (mut cfg, stem) = match path {
        Some(p) => {
            let text = read_config(p)?;
            let cfg: SpikedConfig = parse_config(&text, "spiked", KIND_SPIKED)?;
            let stem = p.file_stem().and_then(|s| s.to_str()).map(str::to_string);
            (cfg, stem)
        }
        None => (SpikedConfig::default_symmetric(DEFAULT_SPIKED_SEED), None),
    };
    cfg.apply(common, sp);
    cfg.validate()?;
    finish_run(&cfg, stem.as_deref())
}

fn run_canonical(c: &figures::Canonical, common: &CommonOverrides) -> Result<Vec<String>> {
    match c.kind {
        KIND_SPECTRUM => run_text::<SpectrumConfig>(c.text, Some(c.name), common),
        KIND_SPIKED => run_text::<SpikedConfig>(c.text, Some(c.name), common),
        other => Err(CliError::Config(format!(
            "canonical config `{}` has unexpected kind `{other}`",
            c.name
        ))),
    }
}

/// Canonical figures are independent runs writing to disjoint directories,
/// so they fan out over a bounded worker pool; stdout stays ordered because
/// only this thread prints, after all workers are done.
fn run_reproduce(target: &str, out_flag: Option<PathBuf>) -> Result<Vec<String>> {
    let jobs = figures::select(target)?;
    let common = CommonOverrides {
        seed: None,
        out: out_flag,
        label: None,
    };
    let workers = thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1)
        .min(jobs.len())
        .max(1);
    let next = AtomicUsize::new(0);
    let slots: Vec<Mutex<Option<Result<Vec<String>>>>> =
        jobs.iter().map(|_| Mutex::new(None)).collect();
    thread::scope(|s| {
        for _ in 0..workers {
            s.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= jobs.len() {
                    break;
                }
                let res = run_canonical(jobs[i], &common);
                *slots[i].lock().expect("no panics while holding the slot") = Some(res);
            });
        }
    });
    let mut lines = Vec::new();
    for slot in slots {
        match slot.into_inner().expect("worker threads have exited") {
            Some(Ok(mut l)) => lines.append(&mut l),
            Some(Err(e)) => return Err(e),
            None => unreachable!("every job index was claimed by a worker"),
        }
    }
    Ok(lines)
}

fn run(cli: Cli) -> Result<Vec<String>> {
    match cli.command {
        Command::Sample { config, common } => run_file::<SampleConfig>(&config, &common.overrides()),
        Command::Moments { config, common } => {
            run_file::<MomentsConfig>(&config, &common.overrides())
        }
        Command::Lemma1 { config, common } => run_file::<Lemma1Config>(&config, &common.overrides()),
        Command::Kronecker { config, common } => {
            run_file::<KroneckerConfig>(&config, &common.overrides())
        }
        Command::Process { config, common } => {
            run_file::<ProcessConfig>(&config, &common.overrides())
        }
        Command::Spectrum { config, common } => {
            run_file::<SpectrumConfig>(&config, &common.overrides())
        }
        Command::Spiked {
            config,
            common,
            spiked,
        } => run_spiked(config.as_deref(), &common.overrides(), &spiked.overrides()),
        Command::Reproduce { target, out } => run_reproduce(&target, out),
    }
}

fn main() {
    let cli = Cli::parse();
    match run(cli) {
        Ok(lines) => {
            for line in lines {
                println!("{line}");
            }
        }
        Err(e) => {
            eprintln!("{}", e.report());
            std::process::exit(e.exit_code());
        }
    }
}
