//! Experiment configuration schema.
//!
//! Configs are TOML documents with a mandatory `kind` field that must match
//! the subcommand they are passed to. Parsing is strict: unknown keys are
//! rejected and parser diagnostics keep their line anchors. Scalar fields
//! can be overridden by command-line flags, and what lands in the run
//! manifest is the effective configuration after those overrides, minus the
//! purely locational fields (`output`, `label`).

use std::path::PathBuf;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

pub const KIND_SAMPLE: &str = "sample";
pub const KIND_MOMENTS: &str = "moments";
pub const KIND_LEMMA1: &str = "lemma1";
pub const KIND_KRONECKER: &str = "kronecker-check";
pub const KIND_PROCESS: &str = "process";
pub const KIND_SPECTRUM: &str = "spectrum";
pub const KIND_SPIKED: &str = "spiked";

fn config_err(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}

fn ensure(cond: bool, msg: impl Into<String>) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(config_err(msg))
    }
}

fn positive_dims(dims: &[usize], field: &str) -> Result<()> {
    ensure(
        !dims.is_empty() && dims.iter().all(|&d| d > 0),
        format!("`{field}` must list at least one positive mode size"),
    )
}

fn correlation_coefficient(rho: f64, field: &str) -> Result<()> {
    ensure(
        rho.is_finite() && rho.abs() < 1.0,
        format!("`{field}` must satisfy |rho| < 1, got {rho}"),
    )
}

#[derive(Debug, Deserialize)]
struct KindProbe {
    kind: Option<String>,
}

/// Parses `text` for the given subcommand: probes the `kind` field first so
/// a config of the wrong kind is reported as a mismatch rather than as a
/// pile of unknown-field errors, then re-parses strictly and validates.
pub fn parse_config<T>(text: &str, subcommand: &str, expected_kind: &str) -> Result<T>
where
    T: DeserializeOwned + Validate,
{
    let probe: KindProbe = toml::from_str(text).map_err(|e| config_err(e.to_string()))?;
    let kind = probe
        .kind
        .ok_or_else(|| config_err("config is missing the `kind` field"))?;
    if kind != expected_kind {
        return Err(config_err(format!(
            "config kind `{kind}` does not match subcommand `{subcommand}` (expected `{expected_kind}`)"
        )));
    }
    let cfg: T = toml::from_str(text).map_err(|e| config_err(e.to_string()))?;
    cfg.validate()?;
    Ok(cfg)
}

/// Field-level checks beyond what the schema can express.
pub trait Validate {
    fn validate(&self) -> Result<()>;
}

/// Flag overrides shared by every subcommand.
#[derive(Debug, Clone, Default)]
pub struct CommonOverrides {
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub label: Option<String>,
}

macro_rules! apply_common {
    ($cfg:expr, $ov:expr) => {{
        if let Some(seed) = $ov.seed {
            $cfg.seed = seed;
        }
        if let Some(out) = &$ov.out {
            $cfg.output = Some(out.clone());
        }
        if let Some(label) = &$ov.label {
            $cfg.label = Some(label.clone());
        }
    }};
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SampleFamily {
    StandardReal,
    Circular,
    Correlated,
    ModeRestricted,
    Separable,
}

/// Draw Gaussian tensor samples and report how well their estimated
/// correlation matches the configured one.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SampleConfig {
    pub kind: String,
    pub seed: u64,
    #[serde(default, skip_serializing)]
    pub label: Option<String>,
    #[serde(default, skip_serializing)]
    pub output: Option<PathBuf>,
    pub dims: Vec<usize>,
    pub family: SampleFamily,
    pub n_samples: usize,
    /// Exponential correlation coefficient for the structured families.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rho: Option<f64>,
    /// Zero-based modes carrying correlation in the mode-restricted family.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub correlated_modes: Option<Vec<usize>>,
}

impl SampleConfig {
    pub fn apply(&mut self, ov: &CommonOverrides) {
        apply_common!(self, ov);
    }
}

impl Validate for SampleConfig {
    fn validate(&self) -> Result<()> {
        positive_dims(&self.dims, "dims")?;
        ensure(self.n_samples >= 2, "`n_samples` must be at least 2")?;
        let structured = matches!(
            self.family,
            SampleFamily::ModeRestricted | SampleFamily::Separable
        );
        match self.rho {
            Some(rho) if structured => correlation_coefficient(rho, "rho")?,
            Some(_) => {
                return Err(config_err(
                    "`rho` applies only to the mode-restricted and separable families",
                ))
            }
            None if structured => {
                return Err(config_err(format!(
                    "`rho` is required for the {} family",
                    kebab(self.family)
                )))
            }
            None => {}
        }
        match &self.correlated_modes {
            Some(modes) if self.family == SampleFamily::ModeRestricted => {
                ensure(
                    !modes.is_empty(),
                    "`correlated_modes` must list at least one mode",
                )?;
                for &m in modes {
                    ensure(
                        m < self.dims.len(),
                        format!(
                            "`correlated_modes` entry {m} is out of range for {} modes",
                            self.dims.len()
                        ),
                    )?;
                }
                let mut seen = modes.clone();
                seen.sort_unstable();
                seen.dedup();
                ensure(
                    seen.len() == modes.len(),
                    "`correlated_modes` must not repeat a mode",
                )?;
            }
            Some(_) => {
                return Err(config_err(
                    "`correlated_modes` applies only to the mode-restricted family",
                ))
            }
            None if self.family == SampleFamily::ModeRestricted => {
                return Err(config_err(
                    "`correlated_modes` is required for the mode-restricted family",
                ))
            }
            None => {}
        }
        Ok(())
    }
}

fn kebab(f: SampleFamily) -> &'static str {
    match f {
        SampleFamily::StandardReal => "standard-real",
        SampleFamily::Circular => "circular",
        SampleFamily::Correlated => "correlated",
        SampleFamily::ModeRestricted => "mode-restricted",
        SampleFamily::Separable => "separable",
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MomentsFamily {
    Circular,
    Proper,
    Improper,
    StandardReal,
}

/// Draw from a known Gaussian spec and report the estimated first and
/// second moments next to the population values.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MomentsConfig {
    pub kind: String,
    pub seed: u64,
    #[serde(default, skip_serializing)]
    pub label: Option<String>,
    #[serde(default, skip_serializing)]
    pub output: Option<PathBuf>,
    pub dims: Vec<usize>,
    pub family: MomentsFamily,
    pub n_samples: usize,
}

impl MomentsConfig {
    pub fn apply(&mut self, ov: &CommonOverrides) {
        apply_common!(self, ov);
    }
}

impl Validate for MomentsConfig {
    fn validate(&self) -> Result<()> {
        positive_dims(&self.dims, "dims")?;
        ensure(self.n_samples >= 2, "`n_samples` must be at least 2")
    }
}

/// Per-domain factor estimation on a separable MIMO channel.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Lemma1Config {
    pub kind: String,
    pub seed: u64,
    #[serde(default, skip_serializing)]
    pub label: Option<String>,
    #[serde(default, skip_serializing)]
    pub output: Option<PathBuf>,
    pub receive_size: usize,
    pub transmit_size: usize,
    /// Exponential correlation coefficients of the two factors.
    pub receive_rho: f64,
    pub transmit_rho: f64,
    pub n_samples: usize,
}

impl Lemma1Config {
    pub fn apply(&mut self, ov: &CommonOverrides) {
        apply_common!(self, ov);
    }
}

impl Validate for Lemma1Config {
    fn validate(&self) -> Result<()> {
        ensure(self.receive_size >= 1, "`receive_size` must be positive")?;
        ensure(self.transmit_size >= 1, "`transmit_size` must be positive")?;
        correlation_coefficient(self.receive_rho, "receive_rho")?;
        correlation_coefficient(self.transmit_rho, "transmit_rho")?;
        ensure(self.n_samples >= 2, "`n_samples` must be at least 2")
    }
}

/// Two-antenna correlation whose per-mode blocks are uniform while the full
/// correlation stays away from their Kronecker product.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KroneckerConfig {
    pub kind: String,
    pub seed: u64,
    #[serde(default, skip_serializing)]
    pub label: Option<String>,
    #[serde(default, skip_serializing)]
    pub output: Option<PathBuf>,
    pub rho: f64,
    pub mu: f64,
    pub nu: f64,
    pub gamma: f64,
    pub n_samples: usize,
}

impl KroneckerConfig {
    pub fn apply(&mut self, ov: &CommonOverrides) {
        apply_common!(self, ov);
    }
}

impl Validate for KroneckerConfig {
    fn validate(&self) -> Result<()> {
        for (v, name) in [
            (self.rho, "rho"),
            (self.mu, "mu"),
            (self.nu, "nu"),
            (self.gamma, "gamma"),
        ] {
            ensure(v.is_finite(), format!("`{name}` must be finite"))?;
        }
        ensure(
            self.rho.abs() + self.mu.abs() + self.nu.abs() < 1.0
                && self.rho.abs() + self.gamma.abs() + self.mu.abs() < 1.0,
            "`rho`, `mu`, `nu`, `gamma` must satisfy |rho|+|mu|+|nu| < 1 and |rho|+|gamma|+|mu| < 1",
        )?;
        ensure(self.n_samples >= 2, "`n_samples` must be at least 2")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProcessInput {
    Identity,
    RandomPsd,
}

/// Filter a white-in-time tensor sequence and verify the stationary
/// second-order relations in time and frequency.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProcessConfig {
    pub kind: String,
    pub seed: u64,
    #[serde(default, skip_serializing)]
    pub label: Option<String>,
    #[serde(default, skip_serializing)]
    pub output: Option<PathBuf>,
    pub dims: Vec<usize>,
    pub n_taps: usize,
    pub input: ProcessInput,
    pub time_steps: usize,
    pub n_realizations: usize,
    pub grid_points: usize,
}

impl ProcessConfig {
    pub fn apply(&mut self, ov: &CommonOverrides) {
        apply_common!(self, ov);
    }
}

impl Validate for ProcessConfig {
    fn validate(&self) -> Result<()> {
        positive_dims(&self.dims, "dims")?;
        ensure(self.n_taps >= 1, "`n_taps` must be at least 1")?;
        ensure(
            self.time_steps >= self.n_taps,
            format!(
                "`time_steps` must be at least `n_taps` = {} to leave a steady-state window",
                self.n_taps
            ),
        )?;
        ensure(self.n_realizations >= 2, "`n_realizations` must be at least 2")?;
        ensure(self.grid_points >= 1, "`grid_points` must be at least 1")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Ensemble {
    Hermitian,
    Rectangular,
}

/// Pool eigenvalues of a random tensor ensemble and compare against the
/// matching limit law.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpectrumConfig {
    pub kind: String,
    pub seed: u64,
    #[serde(default, skip_serializing)]
    pub label: Option<String>,
    #[serde(default, skip_serializing)]
    pub output: Option<PathBuf>,
    pub ensemble: Ensemble,
    /// Leading mode sizes of the Hermitian ensemble.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub leading_dims: Option<Vec<usize>>,
    /// Row and column mode sizes of the rectangular ensemble.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub row_dims: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub col_dims: Option<Vec<usize>>,
    pub n_trials: usize,
}

impl SpectrumConfig {
    pub fn apply(&mut self, ov: &CommonOverrides) {
        apply_common!(self, ov);
    }
}

impl Validate for SpectrumConfig {
    fn validate(&self) -> Result<()> {
        ensure(self.n_trials >= 1, "`n_trials` must be at least 1")?;
        match self.ensemble {
            Ensemble::Hermitian => {
                let dims = self.leading_dims.as_ref().ok_or_else(|| {
                    config_err("`leading_dims` is required for the hermitian ensemble")
                })?;
                positive_dims(dims, "leading_dims")?;
                ensure(
                    self.row_dims.is_none() && self.col_dims.is_none(),
                    "`row_dims`/`col_dims` apply only to the rectangular ensemble",
                )
            }
            Ensemble::Rectangular => {
                let rows = self.row_dims.as_ref().ok_or_else(|| {
                    config_err("`row_dims` is required for the rectangular ensemble")
                })?;
                let cols = self.col_dims.as_ref().ok_or_else(|| {
                    config_err("`col_dims` is required for the rectangular ensemble")
                })?;
                positive_dims(rows, "row_dims")?;
                positive_dims(cols, "col_dims")?;
                ensure(
                    self.leading_dims.is_none(),
                    "`leading_dims` applies only to the hermitian ensemble",
                )
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SpikedFamily {
    Symmetric,
    Asymmetric,
}

/// Signal-strength sweep of a spiked model: empirical recovery by power
/// iteration next to the asymptotic alignment prediction.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpikedConfig {
    pub kind: String,
    pub seed: u64,
    #[serde(default, skip_serializing)]
    pub label: Option<String>,
    #[serde(default, skip_serializing)]
    pub output: Option<PathBuf>,
    pub family: SpikedFamily,
    /// Tensor order of the symmetric family.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order: Option<usize>,
    /// Mode size of the symmetric family.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
    /// Mode sizes of the asymmetric family.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dims: Option<Vec<usize>>,
    pub beta_min: f64,
    pub beta_max: f64,
    pub beta_count: usize,
    pub trials: usize,
    pub restarts: usize,
    pub max_iters: usize,
    pub tol: f64,
    /// Overrides the dims-derived ratios `c_k = I_k / sum I` in the
    /// asymmetric theory curve; must sum to 1.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode_ratios: Option<Vec<f64>>,
}

/// Flag overrides specific to the spiked subcommand.
#[derive(Debug, Clone, Default)]
pub struct SpikedOverrides {
    pub family: Option<SpikedFamily>,
    pub order: Option<usize>,
    pub dim: Option<usize>,
    pub dims: Option<Vec<usize>>,
    pub beta_min: Option<f64>,
    pub beta_max: Option<f64>,
    pub beta_count: Option<usize>,
    pub trials: Option<usize>,
    pub restarts: Option<usize>,
    pub max_iters: Option<usize>,
    pub tol: Option<f64>,
}

impl SpikedConfig {
    /// Starting point when the subcommand runs without a config file.
    pub fn default_symmetric(seed: u64) -> Self {
        SpikedConfig {
            kind: KIND_SPIKED.to_string(),
            seed,
            label: None,
            output: None,
            family: SpikedFamily::Symmetric,
            order: Some(3),
            dim: Some(20),
            dims: None,
            beta_min: 0.5,
            beta_max: 3.0,
            beta_count: 11,
            trials: 10,
            restarts: 10,
            max_iters: 3000,
            tol: 1e-8,
            mode_ratios: None,
        }
    }

    pub fn apply(&mut self, ov: &CommonOverrides, sp: &SpikedOverrides) {
        apply_common!(self, ov);
        if let Some(family) = sp.family {
            self.family = family;
            // Switching family from flags drops the other family's shape so
            // the cross-field validation speaks about the right fields.
            match family {
                SpikedFamily::Symmetric => self.dims = None,
                SpikedFamily::Asymmetric => {
                    self.order = None;
                    self.dim = None;
                }
            }
        }
        if let Some(order) = sp.order {
            self.order = Some(order);
        }
        if let Some(dim) = sp.dim {
            self.dim = Some(dim);
        }
        if let Some(dims) = &sp.dims {
            self.dims = Some(dims.clone());
        }
        if let Some(v) = sp.beta_min {
            self.beta_min = v;
        }
        if let Some(v) = sp.beta_max {
            self.beta_max = v;
        }
        if let Some(v) = sp.beta_count {
            self.beta_count = v;
        }
        if let Some(v) = sp.trials {
            self.trials = v;
        }
        if let Some(v) = sp.restarts {
            self.restarts = v;
        }
        if let Some(v) = sp.max_iters {
            self.max_iters = v;
        }
        if let Some(v) = sp.tol {
            self.tol = v;
        }
    }

    /// The uniform signal-strength grid described by the config.
    pub fn betas(&self) -> Vec<f64> {
        if self.beta_count == 1 {
            return vec![self.beta_min];
        }
        let step = (self.beta_max - self.beta_min) / (self.beta_count - 1) as f64;
        (0..self.beta_count)
            .map(|i| self.beta_min + step * i as f64)
            .collect()
    }
}

impl Validate for SpikedConfig {
    fn validate(&self) -> Result<()> {
        ensure(
            self.beta_min.is_finite() && self.beta_min >= 0.0,
            "`beta_min` must be nonnegative",
        )?;
        ensure(
            self.beta_max.is_finite() && self.beta_max >= self.beta_min,
            "`beta_max` must be at least `beta_min`",
        )?;
        ensure(self.beta_count >= 1, "`beta_count` must be at least 1")?;
        ensure(self.trials >= 1, "`trials` must be at least 1")?;
        ensure(self.restarts >= 1, "`restarts` must be at least 1")?;
        ensure(self.max_iters >= 1, "`max_iters` must be at least 1")?;
        ensure(
            self.tol.is_finite() && self.tol > 0.0,
            "`tol` must be positive",
        )?;
        match self.family {
            SpikedFamily::Symmetric => {
                let order = self
                    .order
                    .ok_or_else(|| config_err("`order` is required for the symmetric family"))?;
                ensure(order >= 3, "`order` must be at least 3")?;
                let dim = self
                    .dim
                    .ok_or_else(|| config_err("`dim` is required for the symmetric family"))?;
                ensure(dim >= 2, "`dim` must be at least 2")?;
                ensure(
                    self.dims.is_none(),
                    "`dims` applies only to the asymmetric family",
                )?;
                ensure(
                    self.mode_ratios.is_none(),
                    "`mode_ratios` applies only to the asymmetric family",
                )
            }
            SpikedFamily::Asymmetric => {
                let dims = self
                    .dims
                    .as_ref()
                    .ok_or_else(|| config_err("`dims` is required for the asymmetric family"))?;
                positive_dims(dims, "dims")?;
                ensure(dims.len() >= 3, "`dims` must list at least 3 modes")?;
                ensure(
                    self.order.is_none() && self.dim.is_none(),
                    "`order`/`dim` apply only to the symmetric family",
                )?;
                if let Some(ratios) = &self.mode_ratios {
                    ensure(
                        ratios.len() == dims.len(),
                        format!(
                            "`mode_ratios` must have one entry per mode ({} expected, {} given)",
                            dims.len(),
                            ratios.len()
                        ),
                    )?;
                    ensure(
                        ratios.iter().all(|&c| c.is_finite() && c > 0.0 && c < 1.0),
                        "`mode_ratios` entries must lie strictly between 0 and 1",
                    )?;
                    let sum: f64 = ratios.iter().sum();
                    ensure(
                        (sum - 1.0).abs() <= 1e-9,
                        format!("`mode_ratios` must sum to 1, got {sum}"),
                    )?;
                }
                Ok(())
            }
        }
    }
}

/// Effective-config snapshot for the manifest and the run checksum.
pub fn snapshot<T: Serialize>(cfg: &T) -> Result<String> {
    toml::to_string(cfg).map_err(|e| config_err(format!("cannot serialize config snapshot: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_keys_are_rejected_with_line_anchor() {
        let text = "kind = \"spectrum\"\nseed = 1\nensemble = \"hermitian\"\nleading_dims = [2]\nn_trials = 1\nbogus = 3\n";
        let err = parse_config::<SpectrumConfig>(text, "spectrum", KIND_SPECTRUM).unwrap_err();
        let msg = err.report();
        assert!(msg.contains("bogus"), "{msg}");
        assert!(msg.contains("line 6"), "{msg}");
    }

    #[test]
    fn kind_mismatch_names_both_sides() {
        let text = "kind = \"spectrum\"\nseed = 1\n";
        let err = parse_config::<SampleConfig>(text, "sample", KIND_SAMPLE).unwrap_err();
        let msg = err.report();
        assert!(msg.contains("`spectrum`"), "{msg}");
        assert!(msg.contains("`sample`"), "{msg}");
    }

    #[test]
    fn mode_ratios_must_sum_to_one() {
        let text = "kind = \"spiked\"\nseed = 1\nfamily = \"asymmetric\"\ndims = [4, 4, 4]\nbeta_min = 1.0\nbeta_max = 2.0\nbeta_count = 2\ntrials = 1\nrestarts = 1\nmax_iters = 10\ntol = 1e-6\nmode_ratios = [0.5, 0.3, 0.3]\n";
        let err = parse_config::<SpikedConfig>(text, "spiked", KIND_SPIKED).unwrap_err();
        let msg = err.report();
        assert!(msg.contains("mode_ratios"), "{msg}");
        assert!(msg.contains("sum to 1"), "{msg}");
    }

    #[test]
    fn beta_grid_is_inclusive_and_uniform() {
        let mut cfg = SpikedConfig::default_symmetric(0);
        cfg.beta_min = 1.0;
        cfg.beta_max = 2.0;
        cfg.beta_count = 5;
        assert_eq!(cfg.betas(), vec![1.0, 1.25, 1.5, 1.75, 2.0]);
    }

    #[test]
    fn snapshot_skips_locational_fields() {
        let mut cfg = SpikedConfig::default_symmetric(7);
        cfg.output = Some(PathBuf::from("/tmp/somewhere"));
        cfg.label = Some("x".into());
        let snap = snapshot(&cfg).unwrap();
        assert!(!snap.contains("somewhere"), "{snap}");
        assert!(!snap.contains("label"), "{snap}");
        assert!(snap.contains("seed = 7"), "{snap}");
    }
}
