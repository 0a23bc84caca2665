//! Monte Carlo execution: channel draws per trial, every scheme at every
//! sweep point on the same draw, records in a fixed order.

use std::collections::HashMap;
use std::time::Instant;

use serde::Serialize;
use thiserror::Error;

use wiretap_core::cj::{nonrobust_cj, solve_robust_cj};
use wiretap_core::dt::{nonrobust_dt_worst_case, solve_robust_dt};
use wiretap_core::model::{sample_channels, ChannelSet, SchemeResult, Status, SystemParams};
use wiretap_core::power::{fixed_split_cj, joint_optimize_global};
use wiretap_core::qos::{relaxed_zf_qos, solve_qos_cj_nonrobust, solve_qos_cj_robust, solve_qos_dt_nonrobust, solve_qos_dt_robust};

use crate::config::{ConfigError, ExperimentConfig, ExperimentKind, SchemeKind, Tolerances};

#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("worker pool: {0}")]
    Pool(String),
}

/// One row per (sweep point, trial, scheme). Metrics are worst-case.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialRecord {
    pub trial_id: usize,
    pub scheme: String,
    pub sweep_value: f64,
    pub worst_secrecy_rate_bits: f64,
    pub p1: f64,
    pub p2: f64,
    pub eve_metric_db: f64,
    pub bob_metric_db: f64,
    pub status: String,
    pub iterations: usize,
    pub runtime_ms: Option<f64>,
}

/// Linear to dB, floored at −300 dB so zero leakage stays finite.
pub fn to_db(x: f64) -> f64 {
    10.0 * x.max(1e-30).log10()
}

pub fn from_db(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// System parameters at one sweep point, plus Alice's share for fixed splits.
pub fn point_params(cfg: &ExperimentConfig, x: f64) -> (SystemParams<f64>, Option<f64>) {
    let mut p = SystemParams::new(cfg.n_a, cfg.n_h);
    let mut power = from_db(cfg.power_db.unwrap_or(10.0));
    let mut eps = cfg.eps_sq.unwrap_or(0.0);
    let mut gamma = from_db(cfg.gamma_db.unwrap_or(10.0));
    let mut fraction = None;
    match cfg.experiment {
        ExperimentKind::RateVsPower => power = from_db(x),
        ExperimentKind::RateVsSplit => fraction = Some(x),
        ExperimentKind::RateVsMismatch | ExperimentKind::SinrVsMismatch => eps = x,
        ExperimentKind::SinrVsQos => gamma = from_db(x),
    }
    p.p_s = power;
    p.p_j = power;
    p.p_total = power;
    p.eps_h_sq = eps;
    p.eps_g_sq = eps;
    p.gamma_t = gamma;
    (p, fraction)
}

/// Runs one scheme; `fraction` selects a fixed split for `robust_cj`.
pub fn run_scheme(kind: SchemeKind, ch: &ChannelSet<f64>, params: &SystemParams<f64>, fraction: Option<f64>, tol: &Tolerances) -> SchemeResult<f64> {
    let robust = tol.robust();
    let joint = tol.joint();
    match kind {
        SchemeKind::RobustDt => solve_robust_dt(ch, params, &robust),
        SchemeKind::NonrobustDtGev => nonrobust_dt_worst_case(ch, params, &robust.solver),
        SchemeKind::RobustCj => match fraction {
            Some(f) => fixed_split_cj(ch, params, f, &joint),
            None => solve_robust_cj(ch, params, joint.form, &robust),
        },
        SchemeKind::NonrobustCj => nonrobust_cj(ch, params, &robust.solver),
        SchemeKind::JointGlobal => joint_optimize_global(ch, params, &joint),
        SchemeKind::QosDtNonrobust => solve_qos_dt_nonrobust(ch, params, &robust),
        SchemeKind::QosDtRobust => solve_qos_dt_robust(ch, params, &robust),
        SchemeKind::QosRelaxedZf => relaxed_zf_qos(ch, params, &robust),
        SchemeKind::QosCjRobust => solve_qos_cj_robust(ch, params, &robust),
        SchemeKind::QosCjNonrobust => solve_qos_cj_nonrobust(ch, params, &robust),
    }
}

fn record(trial_id: usize, kind: SchemeKind, x: f64, r: &SchemeResult<f64>, ms: Option<f64>) -> TrialRecord {
    TrialRecord {
        trial_id,
        scheme: kind.as_str().to_string(),
        sweep_value: x,
        worst_secrecy_rate_bits: r.secrecy_rate_bits,
        p1: r.p1(),
        p2: r.p2(),
        eve_metric_db: to_db(r.eve_metric),
        bob_metric_db: to_db(r.bob_metric),
        status: r.status.as_str().to_string(),
        iterations: r.iterations,
        runtime_ms: ms,
    }
}

/// Every sweep point and scheme on the channel draw `seed + trial_id`.
/// In split sweeps only `robust_cj` depends on the split; the others are
/// solved once and repeated.
pub fn run_trial(cfg: &ExperimentConfig, trial_id: usize) -> Vec<(usize, TrialRecord)> {
    let base = SystemParams::<f64>::new(cfg.n_a, cfg.n_h);
    let ch = sample_channels(&base, cfg.seed.wrapping_add(trial_id as u64));
    let mut cache: HashMap<SchemeKind, (SchemeResult<f64>, Option<f64>)> = HashMap::new();
    let mut out = Vec::with_capacity(cfg.sweep.len() * cfg.schemes.len());
    for (ix, &x) in cfg.sweep.iter().enumerate() {
        let (params, fraction) = point_params(cfg, x);
        for &kind in &cfg.schemes {
            let split_dependent = kind == SchemeKind::RobustCj;
            let reusable = fraction.is_some() && !split_dependent;
            if reusable {
                if let Some((r, ms)) = cache.get(&kind) {
                    out.push((ix, record(trial_id, kind, x, r, *ms)));
                    continue;
                }
            }
            let start = Instant::now();
            let r = run_scheme(kind, &ch, &params, if split_dependent { fraction } else { None }, &cfg.tolerances);
            let ms = cfg.timing.then(|| start.elapsed().as_secs_f64() * 1e3);
            out.push((ix, record(trial_id, kind, x, &r, ms)));
            if reusable {
                cache.insert(kind, (r, ms));
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SummaryRow {
    pub sweep_value: f64,
    pub scheme: String,
    pub trials_used: usize,
    pub solver_failures: usize,
    pub outages: usize,
    pub mean_rate_bits: f64,
    pub mean_jamming_fraction: f64,
    pub mean_eve_sinr_db: f64,
    pub mean_bob_sinr_db: f64,
    pub evaluation: &'static str,
}

/// Every scheme, robust or not, is scored at the worst mismatch of its own design.
pub const EVALUATION_NOTE: &str = "worst mismatch of own covariance";

#[derive(Debug, Clone)]
pub struct RunOutput {
    pub records: Vec<TrialRecord>,
    pub summary: Vec<SummaryRow>,
    pub failure_rate: f64,
}

/// Averages over usable trials (optimal or max-iterations) per sweep point
/// and scheme; Eve and Bob SINRs are averaged linearly, then shown in dB.
pub fn summarize(cfg: &ExperimentConfig, records: &[TrialRecord]) -> Vec<SummaryRow> {
    let mut rows = Vec::new();
    for &x in &cfg.sweep {
        let (params, _) = point_params(cfg, x);
        for &kind in &cfg.schemes {
            let name = kind.as_str();
            let sel: Vec<&TrialRecord> = records.iter().filter(|r| r.sweep_value == x && r.scheme == name).collect();
            let usable: Vec<&&TrialRecord> = sel.iter().filter(|r| r.status == Status::Optimal.as_str() || r.status == Status::MaxIter.as_str()).collect();
            let n = usable.len();
            let mean = |f: &dyn Fn(&TrialRecord) -> f64| if n == 0 { f64::NAN } else { usable.iter().map(|r| f(r)).sum::<f64>() / n as f64 };
            let budget = if kind == SchemeKind::JointGlobal || kind.is_qos() || cfg.experiment == ExperimentKind::RateVsSplit { params.p_total } else { params.p_s + params.p_j };
            rows.push(SummaryRow {
                sweep_value: x,
                scheme: name.to_string(),
                trials_used: n,
                solver_failures: sel.iter().filter(|r| r.status == Status::SolverFailure.as_str()).count(),
                outages: sel.iter().filter(|r| r.status == Status::Outage.as_str()).count(),
                mean_rate_bits: mean(&|r| r.worst_secrecy_rate_bits),
                mean_jamming_fraction: mean(&|r| if budget > 0.0 { r.p2 / budget } else { 0.0 }),
                mean_eve_sinr_db: to_db(mean(&|r| from_db(r.eve_metric_db))),
                mean_bob_sinr_db: to_db(mean(&|r| from_db(r.bob_metric_db))),
                evaluation: EVALUATION_NOTE,
            });
        }
    }
    rows
}

/// Runs all trials on `cfg.workers` threads. Output order is
/// (sweep point, trial, scheme) whatever the completion order.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<RunOutput, RunError> {
    cfg.validate()?;
    let pool = rayon::ThreadPoolBuilder::new().num_threads(cfg.workers).build().map_err(|e| RunError::Pool(e.to_string()))?;
    let per_trial: Vec<Vec<(usize, TrialRecord)>> = pool.install(|| {
        use rayon::prelude::*;
        (0..cfg.trials).into_par_iter().map(|t| run_trial(cfg, t)).collect()
    });
    let scheme_rank: HashMap<&str, usize> = cfg.schemes.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect();
    let mut keyed: Vec<(usize, usize, usize, TrialRecord)> =
        per_trial.into_iter().flatten().map(|(ix, r)| (ix, r.trial_id, scheme_rank[r.scheme.as_str()], r)).collect();
    keyed.sort_by_key(|k| (k.0, k.1, k.2));
    let records: Vec<TrialRecord> = keyed.into_iter().map(|k| k.3).collect();
    let failures = records.iter().filter(|r| r.status == Status::SolverFailure.as_str()).count();
    let failure_rate = if records.is_empty() { 0.0 } else { failures as f64 / records.len() as f64 };
    let summary = summarize(cfg, &records);
    Ok(RunOutput { records, summary, failure_rate })
}
