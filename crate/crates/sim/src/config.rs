//! Experiment configuration: a TOML document with per-experiment presets,
//! overridable from the command line.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use wiretap_core::cj::JammedRatioForm;
use wiretap_core::conic::{IpmSettings, SolverSettings};
use wiretap_core::dt::RobustSettings;
use wiretap_core::power::JointSettings;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config {path}: {source}")]
    Read { path: String, source: std::io::Error },
    #[error("cannot parse config: {0}")]
    Parse(#[from] toml::de::Error),
    #[error("invalid config: {0}")]
    Invalid(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    RateVsPower,
    RateVsSplit,
    RateVsMismatch,
    SinrVsQos,
    SinrVsMismatch,
}

impl ExperimentKind {
    pub const ALL: [ExperimentKind; 5] = [Self::RateVsPower, Self::RateVsSplit, Self::RateVsMismatch, Self::SinrVsQos, Self::SinrVsMismatch];

    pub fn as_str(&self) -> &'static str {
        match self {
            Self::RateVsPower => "rate_vs_power",
            Self::RateVsSplit => "rate_vs_split",
            Self::RateVsMismatch => "rate_vs_mismatch",
            Self::SinrVsQos => "sinr_vs_qos",
            Self::SinrVsMismatch => "sinr_vs_mismatch",
        }
    }

    pub fn sweep_label(&self) -> &'static str {
        match self {
            Self::RateVsPower => "P (dB)",
            Self::RateVsSplit => "p_s / P",
            Self::RateVsMismatch | Self::SinrVsMismatch => "eps^2",
            Self::SinrVsQos => "gamma_t (dB)",
        }
    }

    pub fn is_qos(&self) -> bool {
        matches!(self, Self::SinrVsQos | Self::SinrVsMismatch)
    }
}

impl fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ExperimentKind {
    type Err = ConfigError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL.into_iter().find(|k| k.as_str() == s).ok_or_else(|| ConfigError::Invalid(format!("unknown experiment '{s}'")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SchemeKind {
    RobustDt,
    NonrobustDtGev,
    RobustCj,
    NonrobustCj,
    JointGlobal,
    QosDtNonrobust,
    QosDtRobust,
    QosRelaxedZf,
    QosCjRobust,
    QosCjNonrobust,
}

impl SchemeKind {
    pub const ALL: [SchemeKind; 10] = [
        Self::RobustDt,
        Self::NonrobustDtGev,
        Self::RobustCj,
        Self::NonrobustCj,
        Self::JointGlobal,
        Self::QosDtNonrobust,
        Self::QosDtRobust,
        Self::QosRelaxedZf,
        Self::QosCjRobust,
        Self::QosCjNonrobust,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Self::RobustDt => "robust_dt",
            Self::NonrobustDtGev => "nonrobust_dt_gev",
            Self::RobustCj => "robust_cj",
            Self::NonrobustCj => "nonrobust_cj",
            Self::JointGlobal => "joint_global",
            Self::QosDtNonrobust => "qos_dt_nonrobust",
            Self::QosDtRobust => "qos_dt_robust",
            Self::QosRelaxedZf => "qos_relaxed_zf",
            Self::QosCjRobust => "qos_cj_robust",
            Self::QosCjNonrobust => "qos_cj_nonrobust",
        }
    }

    pub fn is_qos(&self) -> bool {
        matches!(self, Self::QosDtNonrobust | Self::QosDtRobust | Self::QosRelaxedZf | Self::QosCjRobust | Self::QosCjNonrobust)
    }
}

impl fmt::Display for SchemeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SchemeKind {
    type Err = ConfigError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL.into_iter().find(|k| k.as_str() == s).ok_or_else(|| ConfigError::Invalid(format!("unknown scheme '{s}'")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RatioForm {
    #[default]
    Consistent,
    AsPrinted,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    pub ipm_tol: f64,
    pub ipm_max_iter: usize,
    pub bisect_rel: f64,
    pub bisect_max_iter: usize,
    pub outer_tol: f64,
    pub outer_max: usize,
    pub inner_tol: f64,
    pub inner_max: usize,
    pub jammed_ratio: RatioForm,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            ipm_tol: 1e-9,
            ipm_max_iter: 100,
            bisect_rel: 1e-4,
            bisect_max_iter: 60,
            outer_tol: 1e-4,
            outer_max: 30,
            inner_tol: 1e-5,
            inner_max: 50,
            jammed_ratio: RatioForm::Consistent,
        }
    }
}

impl Tolerances {
    pub fn robust(&self) -> RobustSettings<f64> {
        let ipm = IpmSettings { tol: self.ipm_tol, max_iter: self.ipm_max_iter, ..IpmSettings::default() };
        RobustSettings { delta_rel: self.bisect_rel, max_iter: self.bisect_max_iter, solver: SolverSettings { ipm, dump_path: None } }
    }

    pub fn joint(&self) -> JointSettings<f64> {
        JointSettings {
            robust: self.robust(),
            form: match self.jammed_ratio {
                RatioForm::Consistent => JammedRatioForm::Consistent,
                RatioForm::AsPrinted => JammedRatioForm::AsPrinted,
            },
            outer_tol: self.outer_tol,
            outer_max: self.outer_max,
            inner_tol: self.inner_tol,
            inner_max: self.inner_max,
        }
    }
}

/// One Monte Carlo sweep. Powers are in dB relative to the unit noise power.
///
/// The swept quantity depends on the experiment; the other two of
/// `power_db`, `eps_sq`, `gamma_db` stay fixed. A power value `P` is used as
/// Alice's and the helper's individual budgets and as the global budget.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: ExperimentKind,
    #[serde(default = "default_trials")]
    pub trials: usize,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default = "default_antennas")]
    pub n_a: usize,
    #[serde(default = "default_antennas")]
    pub n_h: usize,
    #[serde(default)]
    pub sweep: Vec<f64>,
    #[serde(default)]
    pub schemes: Vec<SchemeKind>,
    #[serde(default)]
    pub power_db: Option<f64>,
    #[serde(default)]
    pub eps_sq: Option<f64>,
    #[serde(default)]
    pub gamma_db: Option<f64>,
    #[serde(default = "default_workers")]
    pub workers: usize,
    /// Fills the `runtime_ms` column; off by default so output is reproducible.
    #[serde(default)]
    pub timing: bool,
    #[serde(default)]
    pub tolerances: Tolerances,
}

fn default_trials() -> usize {
    200
}
fn default_seed() -> u64 {
    1
}
fn default_antennas() -> usize {
    4
}
fn default_workers() -> usize {
    std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
}

impl ExperimentConfig {
    /// Desk-scale defaults for each experiment.
    pub fn preset(kind: ExperimentKind) -> Self {
        use SchemeKind::*;
        let (sweep, schemes, power_db, eps_sq, gamma_db): (Vec<f64>, Vec<SchemeKind>, f64, f64, f64) = match kind {
            ExperimentKind::RateVsPower => (vec![0.0, 2.0, 4.0, 6.0, 8.0, 10.0], vec![RobustDt, NonrobustDtGev, RobustCj, NonrobustCj], 10.0, 1.5, 10.0),
            ExperimentKind::RateVsSplit => ((1..10).map(|k| k as f64 / 10.0).collect(), vec![RobustDt, RobustCj, JointGlobal], 10.0, 1.5, 10.0),
            ExperimentKind::RateVsMismatch => (vec![0.0, 0.5, 1.0, 1.5, 2.0], vec![RobustDt, NonrobustDtGev, JointGlobal, NonrobustCj], 5.0, 0.0, 10.0),
            ExperimentKind::SinrVsQos => (
                vec![0.0, 5.0, 10.0, 15.0, 20.0],
                vec![QosDtNonrobust, QosDtRobust, QosRelaxedZf, QosCjRobust, QosCjNonrobust],
                10.0,
                0.5,
                10.0,
            ),
            ExperimentKind::SinrVsMismatch => (
                vec![0.0, 0.5, 1.0, 1.5, 2.0],
                vec![QosDtNonrobust, QosDtRobust, QosRelaxedZf, QosCjRobust, QosCjNonrobust],
                10.0,
                0.0,
                10.0,
            ),
        };
        Self {
            experiment: kind,
            trials: default_trials(),
            seed: default_seed(),
            n_a: 4,
            n_h: 4,
            sweep,
            schemes,
            power_db: Some(power_db),
            eps_sq: Some(eps_sq),
            gamma_db: Some(gamma_db),
            workers: default_workers(),
            timing: false,
            tolerances: Tolerances::default(),
        }
    }

    /// Parses a TOML document; unset fields take the experiment's preset.
    pub fn from_toml_str(text: &str) -> Result<Self, ConfigError> {
        let parsed: ExperimentConfig = toml::from_str(text)?;
        let preset = Self::preset(parsed.experiment);
        let merged = Self {
            sweep: if parsed.sweep.is_empty() { preset.sweep } else { parsed.sweep.clone() },
            schemes: if parsed.schemes.is_empty() { preset.schemes } else { parsed.schemes.clone() },
            power_db: parsed.power_db.or(preset.power_db),
            eps_sq: parsed.eps_sq.or(preset.eps_sq),
            gamma_db: parsed.gamma_db.or(preset.gamma_db),
            ..parsed
        };
        merged.validate()?;
        Ok(merged)
    }

    pub fn from_file(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Read { path: path.display().to_string(), source })?;
        Self::from_toml_str(&text)
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string_pretty(self).expect("config serializes")
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let bad = |m: &str| Err(ConfigError::Invalid(m.to_string()));
        if self.trials < 1 {
            return bad("trials must be at least 1");
        }
        if self.sweep.is_empty() {
            return bad("sweep must be nonempty");
        }
        if self.schemes.is_empty() {
            return bad("schemes must be nonempty");
        }
        if self.n_a < 1 || self.n_h < 1 {
            return bad("antenna counts must be at least 1");
        }
        if self.workers < 1 {
            return bad("workers must be at least 1");
        }
        if self.sweep.iter().any(|v| !v.is_finite()) {
            return bad("sweep values must be finite");
        }
        let mismatch_axis = matches!(self.experiment, ExperimentKind::RateVsMismatch | ExperimentKind::SinrVsMismatch);
        if mismatch_axis && self.sweep.iter().any(|&v| v < 0.0) {
            return bad("mismatch sweep values must be nonnegative");
        }
        if self.experiment == ExperimentKind::RateVsSplit && self.sweep.iter().any(|&v| !(0.0..=1.0).contains(&v)) {
            return bad("split fractions must lie in [0, 1]");
        }
        if self.eps_sq.is_some_and(|e| e < 0.0 || !e.is_finite()) {
            return bad("eps_sq must be finite and nonnegative");
        }
        for s in &self.schemes {
            if s.is_qos() != self.experiment.is_qos() {
                return Err(ConfigError::Invalid(format!("scheme {s} does not apply to experiment {}", self.experiment)));
            }
        }
        Ok(())
    }
}

/// Parses a comma-separated list of scheme names.
pub fn parse_schemes(list: &str) -> Result<Vec<SchemeKind>, ConfigError> {
    list.split(',').map(str::trim).filter(|s| !s.is_empty()).map(SchemeKind::from_str).collect()
}
