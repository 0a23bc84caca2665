//! Oracle suites: solver outputs against brute-force references on random
//! instances. Used by the `verify` subcommand and the acceptance tests.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use wiretap_core::cj::{solve_robust_jamming, worst_mismatch_cj};
use wiretap_core::conic::SolverSettings;
use wiretap_core::dt::{solve_robust_dt, worst_mismatch_dt, RobustSettings};
use wiretap_core::linalg::{null_space_basis, ComplexVector, HermitianMatrix};
use wiretap_core::model::{sample_channels, worst_mismatch_sampled, ChannelSet, MismatchObjective, SystemParams};
use wiretap_core::oracles::{grid_covariance_search, power_grid_search, trs_extremum};
use wiretap_core::power::{objective_ratio, single_condensation_loop, ChannelConstants, PowerSplit};

/// Outcome of one suite: `worst` is the largest observed violation measure.
#[derive(Debug, Clone)]
pub struct CheckReport {
    pub name: &'static str,
    pub passed: bool,
    pub instances: usize,
    pub worst: f64,
    pub tolerance: f64,
    pub detail: String,
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {}: {} instances, worst {:.3e} (tol {:.1e}){}",
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.instances,
            self.worst,
            self.tolerance,
            if self.detail.is_empty() { String::new() } else { format!("; {}", self.detail) }
        )
    }
}

fn report(name: &'static str, instances: usize, worst: f64, tolerance: f64, failures: Vec<String>) -> CheckReport {
    let passed = failures.is_empty() && worst <= tolerance;
    let detail = failures.into_iter().take(3).collect::<Vec<_>>().join("; ");
    CheckReport { name, passed, instances, worst, tolerance, detail }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1.0)
}

fn random_vector(n: usize, seed: u64) -> ComplexVector<f64> {
    sample_channels(&SystemParams::<f64>::new(n, 1), seed).h_b
}

/// PSD matrix of random rank 1..=n scaled to trace `power`.
fn random_covariance(n: usize, power: f64, rng: &mut ChaCha8Rng) -> HermitianMatrix<f64> {
    let rank = rng.random_range(1..=n);
    let mut q = HermitianMatrix::zeros(n);
    for _ in 0..rank {
        q = q.add(&random_vector(n, rng.random()).gram());
    }
    q.scale(power / q.trace())
}

/// The worst-case Eve power found by the dual SDP equals the ball maximum
/// from the eigen-reduced trust-region oracle and the value at the recovered
/// mismatch.
pub fn eve_mismatch_duality(instances: usize, seed: u64) -> CheckReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let solver = SolverSettings::default();
    let (mut worst, mut failures) = (0.0f64, Vec::new());
    for i in 0..instances {
        let n = rng.random_range(2..=4);
        let q = random_covariance(n, 10f64.powf(rng.random_range(-0.5..1.5)), &mut rng);
        let c = random_vector(n, rng.random());
        let eps = rng.random_range(0.05f64..2.0).sqrt();
        match worst_mismatch_dt(&q, &c, eps, &solver) {
            Ok((e, Some(dual))) => {
                let (_, oracle) = trs_extremum(MismatchObjective::MaximizeEve, &c, &q, eps);
                let primal = q.quad_form(&c.add(&e));
                worst = worst.max(rel(dual.gamma, oracle)).max(rel(primal, oracle));
                if e.norm() > eps * (1.0 + 1e-9) {
                    failures.push(format!("instance {i}: recovered mismatch outside the ball"));
                }
            }
            Ok((_, None)) => failures.push(format!("instance {i}: no dual certificate")),
            Err(e) => failures.push(format!("instance {i}: {e}")),
        }
    }
    report("eve mismatch duality", instances, worst, 1e-5, failures)
}

/// Same certificate for the jamming-minimizing mismatch.
pub fn jammer_mismatch_duality(instances: usize, seed: u64) -> CheckReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let solver = SolverSettings::default();
    let (mut worst, mut failures) = (0.0f64, Vec::new());
    for i in 0..instances {
        let n = rng.random_range(2..=4);
        let q = random_covariance(n, 10f64.powf(rng.random_range(-0.5..1.5)), &mut rng);
        let c = random_vector(n, rng.random());
        let eps = rng.random_range(0.05f64..2.0).sqrt();
        match worst_mismatch_cj(&q, &c, eps, &solver) {
            Ok((e, Some(dual))) => {
                let (_, oracle) = trs_extremum(MismatchObjective::MinimizeJamming, &c, &q, eps);
                let primal = q.quad_form(&c.add(&e));
                worst = worst.max(rel(dual.gamma, oracle)).max(rel(primal, oracle));
                if e.norm() > eps * (1.0 + 1e-9) {
                    failures.push(format!("instance {i}: recovered mismatch outside the ball"));
                }
            }
            Ok((_, None)) => failures.push(format!("instance {i}: no dual certificate")),
            Err(e) => failures.push(format!("instance {i}: {e}")),
        }
    }
    report("jammer mismatch duality", instances, worst, 1e-5, failures)
}

/// Worst-case Eve power of a fixed 2×2 covariance from the LMI against
/// uniform sampling of the mismatch ball, relative gap.
pub fn inner_worst_case_vs_sampling(instances: usize, seed: u64) -> CheckReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let solver = SolverSettings::default();
    let (mut worst, mut failures) = (0.0f64, Vec::new());
    for i in 0..instances {
        let q = random_covariance(2, 10f64.powf(rng.random_range(0.0..1.0)), &mut rng);
        let c = random_vector(2, rng.random());
        let eps = rng.random_range(0.1f64..2.0).sqrt();
        match worst_mismatch_dt(&q, &c, eps, &solver) {
            Ok((_, Some(dual))) => {
                let (_, sampled) = worst_mismatch_sampled(MismatchObjective::MaximizeEve, &c, eps, &q, 20_000, rng.random()).expect("samples > 0");
                // sampling can only undershoot the ball maximum
                if sampled > dual.gamma * (1.0 + 1e-6) + 1e-9 {
                    failures.push(format!("instance {i}: sampled {sampled:.6} exceeds certificate {:.6}", dual.gamma));
                }
                worst = worst.max((dual.gamma - sampled).abs() / dual.gamma.abs().max(1e-12));
            }
            Ok((_, None)) => failures.push(format!("instance {i}: no dual certificate")),
            Err(e) => failures.push(format!("instance {i}: {e}")),
        }
    }
    report("inner worst case vs sampling", instances, worst, 1e-2, failures)
}

/// Eigenvalue ratio λ₂/λ₁ of the robust jamming covariance at ε_g = 0.
pub fn jamming_rank_one(instances: usize, seed: u64) -> CheckReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let solver = SolverSettings::default();
    let (mut worst, mut failures) = (0.0f64, Vec::new());
    for i in 0..instances {
        let mut params = SystemParams::<f64>::new(4, 4);
        params.p_j = 10f64.powf(rng.random_range(0.0..1.0));
        let ch = sample_channels(&params, rng.random());
        match solve_robust_jamming(&ch, &params, &solver) {
            Ok(j) => {
                let mut ev = j.q_z.eigenvalues();
                ev.sort_by(|a, b| b.total_cmp(a));
                if ev[0] <= 0.0 {
                    failures.push(format!("instance {i}: zero jamming covariance"));
                    continue;
                }
                worst = worst.max(ev[1].max(0.0) / ev[0]);
            }
            Err(e) => failures.push(format!("instance {i}: {e}")),
        }
    }
    report("jamming rank one", instances, worst, 1e-6, failures)
}

/// Condensation loop against the exhaustive power grid, plus a monotone
/// objective trace in every run.
pub fn gp_vs_grid(instances: usize, grid: usize, seed: u64) -> CheckReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut worst, mut failures) = (0.0f64, Vec::new());
    for i in 0..instances {
        let c = ChannelConstants { c1: rng.random_range(0.05..8.0), c2: rng.random_range(0.0..8.0), c3: rng.random_range(0.05..8.0) };
        let budget = 10f64.powf(rng.random_range(0.0..1.5));
        let out = single_condensation_loop(PowerSplit::even(budget), &c, 1.0, 1e-9, 200);
        if out.trace.windows(2).any(|w| w[1] < w[0]) {
            failures.push(format!("instance {i}: objective trace decreased"));
        }
        if !out.split.is_feasible() {
            failures.push(format!("instance {i}: infeasible split"));
        }
        let g = power_grid_search(&c, 1.0, budget, grid);
        let (v_loop, v_grid) = (objective_ratio(&out.split, &c, 1.0), objective_ratio(&g, &c, 1.0));
        worst = worst.max((v_loop - v_grid).abs() / v_grid);
    }
    report("condensation vs power grid", instances, worst, 1e-3, failures)
}

/// With `c₂ = 0` or `c₃ = 0` (and `c₁ > c₂`) all power goes to Alice.
pub fn gp_analytic_cases() -> CheckReport {
    let cases = [
        ChannelConstants { c1: 2.0, c2: 0.0, c3: 1.5 },
        ChannelConstants { c1: 0.3, c2: 0.0, c3: 6.0 },
        ChannelConstants { c1: 3.0, c2: 1.0, c3: 0.0 },
        ChannelConstants { c1: 1.1, c2: 1.0, c3: 0.0 },
    ];
    let (mut worst, failures) = (0.0f64, Vec::new());
    for c in &cases {
        for budget in [1.0f64, 10.0, 100.0] {
            let out = single_condensation_loop(PowerSplit::even(budget), c, 1.0, 1e-9, 200);
            worst = worst.max((out.split.p1 - budget).abs() / budget).max(out.split.p2 / budget);
        }
    }
    report("condensation boundary cases", cases.len() * 3, worst, 1e-9, failures)
}

fn dt_rate_oracle(ch: &ChannelSet<f64>, eps: f64, q: &HermitianMatrix<f64>) -> f64 {
    let (_, eve) = trs_extremum(MismatchObjective::MaximizeEve, &ch.h_e_est, q, eps);
    ((1.0 + q.quad_form(&ch.h_b).max(0.0)) / (1.0 + eve)).log2().max(0.0)
}

/// Robust DT at two antennas against a covariance grid whose inner worst
/// case is the trust-region oracle; the winner's inner value is confirmed by
/// ball sampling.
pub fn dt_grid_equivalence(instances: usize, resolution: usize, seed: u64) -> CheckReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let settings = RobustSettings::default();
    let (mut worst, mut failures) = (0.0f64, Vec::new());
    for i in 0..instances {
        let mut params = SystemParams::<f64>::new(2, 2);
        params.p_s = 10f64.powf(rng.random_range(0.0..1.0));
        params.eps_h_sq = rng.random_range(0.1..1.5);
        let ch = sample_channels(&params, rng.random());
        let eps = params.eps_h();
        let r = solve_robust_dt(&ch, &params, &settings);
        if !r.is_optimal() {
            failures.push(format!("instance {i}: {} {}", r.status.as_str(), r.message.clone().unwrap_or_default()));
            continue;
        }
        let obj = |q: &HermitianMatrix<f64>| dt_rate_oracle(&ch, eps, q);
        let (q_grid, v_grid) = grid_covariance_search(&obj, 2, params.p_s, resolution).expect("dimension 2");
        let (_, sampled) = worst_mismatch_sampled(MismatchObjective::MaximizeEve, &ch.h_e_est, eps, &q_grid, 20_000, rng.random()).expect("samples > 0");
        let (_, exact) = trs_extremum(MismatchObjective::MaximizeEve, &ch.h_e_est, &q_grid, eps);
        if sampled > exact * (1.0 + 1e-7) + 1e-12 || exact - sampled > 1e-2 * exact.max(1e-12) {
            failures.push(format!("instance {i}: trust-region value {exact:.6} disagrees with sampling {sampled:.6}"));
        }
        let own = dt_rate_oracle(&ch, eps, &r.q_x);
        worst = worst.max((own - v_grid).abs() / v_grid.max(own).max(1e-9)).max((r.secrecy_rate_bits - own).abs() / own.max(1e-9));
    }
    report("robust DT vs covariance grid", instances, worst, 2e-2, failures)
}

/// Robust ZF jamming at two helper antennas against a grid over the
/// nullspace covariance with a sampled inner minimum.
pub fn cj_jamming_grid_equivalence(instances: usize, resolution: usize, seed: u64) -> CheckReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let solver = SolverSettings::default();
    let (mut worst, mut failures) = (0.0f64, Vec::new());
    for i in 0..instances {
        let mut params = SystemParams::<f64>::new(2, 2);
        params.p_j = 10f64.powf(rng.random_range(0.0..1.0));
        params.eps_g_sq = rng.random_range(0.05..0.8);
        let ch = sample_channels(&params, rng.random());
        let eps = params.eps_g();
        let jam = match solve_robust_jamming(&ch, &params, &solver) {
            Ok(j) => j,
            Err(e) => {
                failures.push(format!("instance {i}: {e}"));
                continue;
            }
        };
        let basis = null_space_basis(&ch.g_b).expect("nonzero channel");
        let lift = |w: &HermitianMatrix<f64>| HermitianMatrix::new(&basis * w.as_matrix() * basis.adjoint()).expect("congruence is hermitian");
        let sample_seed: u64 = rng.random();
        let obj = |w: &HermitianMatrix<f64>| {
            let q = lift(w);
            worst_mismatch_sampled(MismatchObjective::MinimizeJamming, &ch.g_e_est, eps, &q, 4_000, sample_seed).expect("samples > 0").1
        };
        let (_, v_grid) = grid_covariance_search(&obj, basis.ncols(), params.p_j, resolution).expect("nullspace dimension 1");
        let leak = jam.q_z.quad_form(&ch.g_b).abs();
        if leak > 1e-9 * params.p_j {
            failures.push(format!("instance {i}: jamming reaches Bob with power {leak:.3e}"));
        }
        // zero worst-case jamming (Eve's ball reaches the nullspace) is compared on the power scale
        worst = worst.max((jam.objective - v_grid).abs() / jam.objective.max(v_grid).max(1e-6 * params.p_j));
    }
    report("robust jamming vs nullspace grid", instances, worst, 2e-2, failures)
}

/// Every suite at the acceptance sizes.
pub fn run_all(seed: u64) -> Vec<CheckReport> {
    vec![
        eve_mismatch_duality(100, seed),
        jammer_mismatch_duality(100, seed.wrapping_add(1)),
        inner_worst_case_vs_sampling(100, seed.wrapping_add(2)),
        jamming_rank_one(100, seed.wrapping_add(3)),
        gp_vs_grid(100, 400, seed.wrapping_add(4)),
        gp_analytic_cases(),
        dt_grid_equivalence(20, 16, seed.wrapping_add(5)),
        cj_jamming_grid_equivalence(20, 24, seed.wrapping_add(6)),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_suites_pass() {
        for r in [
            eve_mismatch_duality(5, 9),
            jammer_mismatch_duality(5, 9),
            inner_worst_case_vs_sampling(3, 9),
            jamming_rank_one(5, 9),
            gp_vs_grid(5, 200, 9),
            gp_analytic_cases(),
        ] {
            assert!(r.passed, "{r}");
        }
    }

    #[test]
    fn report_display() {
        let r = report("x", 2, 0.5, 1.0, vec![]);
        assert!(r.to_string().starts_with("PASS x: 2 instances"));
        let r = report("x", 2, 0.5, 1.0, vec!["bad".into()]);
        assert!(!r.passed && r.to_string().ends_with("; bad"));
    }
}
