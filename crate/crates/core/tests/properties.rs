use proptest::prelude::*;

use wiretap_core::cj::{null_steering, solve_robust_jamming};
use wiretap_core::conic::SolverSettings;
use wiretap_core::dt::{gev_beamformer, solve_robust_dt, worst_mismatch_dt, RobustSettings};
use wiretap_core::linalg::{ComplexVector, HermitianMatrix};
use wiretap_core::model::{sample_channels, secrecy_rate_dt, MismatchObjective, Status, SystemParams};
use wiretap_core::oracles::trs_extremum;
use wiretap_core::power::{condense, objective_ratio, single_condensation_loop, ChannelConstants, PowerSplit};
use wiretap_core::qos::solve_qos_cj_robust;

fn params(n_a: usize, n_h: usize, power: f64, eps_sq: f64) -> SystemParams<f64> {
    let mut p = SystemParams::new(n_a, n_h);
    p.p_s = power;
    p.p_j = power;
    p.p_total = power;
    p.eps_h_sq = eps_sq;
    p.eps_g_sq = eps_sq;
    p
}

/// Point of the ball `‖e‖ ≤ radius` picked by a seed.
fn ball_point(n: usize, seed: u64, radius: f64, frac: f64) -> ComplexVector<f64> {
    let v = sample_channels(&SystemParams::<f64>::new(n, 1), seed).h_b;
    v.normalized().map(|u| u.scale(radius * frac)).unwrap_or(v)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, ..ProptestConfig::default() })]

    #[test]
    fn jamming_is_zero_forcing_and_within_budget(seed in 0u64..10_000, power in 0.5f64..10.0, eps_sq in 0.0f64..2.0, n_h in 2usize..=4) {
        let p = params(3, n_h, power, eps_sq);
        let ch = sample_channels(&p, seed);
        let j = solve_robust_jamming(&ch, &p, &SolverSettings::default()).unwrap();
        prop_assert!(j.q_z.quad_form(&ch.g_b).abs() <= 1e-9 * power);
        prop_assert!(j.q_z.trace() <= power * (1.0 + 1e-9));
        prop_assert!(j.q_z.min_eigenvalue() >= -1e-9 * power);
        let w = null_steering(&ch.g_b, &ch.g_e_est).unwrap();
        prop_assert!(w.column_outer().quad_form(&ch.g_b).abs() <= 1e-12);
    }

    #[test]
    fn robust_dt_respects_budget_and_bounds_every_mismatch(seed in 0u64..10_000, power in 0.5f64..10.0, eps_sq in 0.05f64..2.0, pick in 0u64..1000, frac in 0.0f64..=1.0) {
        let p = params(4, 4, power, eps_sq);
        let ch = sample_channels(&p, seed);
        let r = solve_robust_dt(&ch, &p, &RobustSettings::default());
        prop_assert_eq!(r.status, Status::Optimal);
        prop_assert!(r.q_x.trace() <= power * (1.0 + 1e-7));
        prop_assert!(r.worst_mismatch.e_h.norm() <= p.eps_h() * (1.0 + 1e-9));
        // any other mismatch in the ball leaves at least the worst-case rate
        let e = ball_point(4, pick, p.eps_h(), frac);
        prop_assert!(secrecy_rate_dt(&ch, &r.q_x, &e, 1.0) >= r.secrecy_rate_bits - 1e-7);
    }

    #[test]
    fn eve_dual_value_matches_trust_region(seed in 0u64..10_000, eps_sq in 0.01f64..3.0, power in 0.2f64..20.0) {
        let ch = sample_channels(&SystemParams::<f64>::new(3, 1), seed);
        let q = ch.h_b.gram().add(&ch.h_e_est.gram().scale(0.3)).scale(power);
        let eps = eps_sq.sqrt();
        let (e, dual) = worst_mismatch_dt(&q, &ch.h_e_est, eps, &SolverSettings::default()).unwrap();
        let (_, exact) = trs_extremum(MismatchObjective::MaximizeEve, &ch.h_e_est, &q, eps);
        let gamma = dual.unwrap().gamma;
        prop_assert!((gamma - exact).abs() <= 1e-6 * exact.max(1.0));
        prop_assert!((q.quad_form(&ch.h_e_est.add(&e)) - exact).abs() <= 1e-6 * exact.max(1.0));
    }

    #[test]
    fn qos_cj_meets_target(seed in 0u64..10_000, gamma_db in 0.0f64..12.0, eps_sq in 0.0f64..1.0) {
        let mut p = params(4, 4, 10.0, eps_sq);
        p.gamma_t = 10f64.powf(gamma_db / 10.0);
        let ch = sample_channels(&p, seed);
        let r = solve_qos_cj_robust(&ch, &p, &RobustSettings::default());
        if r.status == Status::Optimal {
            prop_assert!(r.bob_metric >= p.gamma_t - 1e-6);
            prop_assert!(r.q_x.trace() + r.q_z.trace() <= p.p_total * (1.0 + 1e-7));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 256, ..ProptestConfig::default() })]

    #[test]
    fn monomial_under_estimates_and_touches(c1 in 0.01f64..10.0, c2 in 0.0f64..10.0, c3 in 0.0f64..10.0, a in 0.01f64..0.99, b in 0.0f64..=1.0, x in 0.0f64..=1.0, y in 0.0f64..=1.0, budget in 0.1f64..50.0) {
        let c = ChannelConstants { c1, c2, c3 };
        let p1 = a * budget;
        let p2 = b * (budget - p1);
        let state = condense(&PowerSplit::new(p1, p2, budget), &c, 1.0);
        let f = |p1: f64, p2: f64| p1 * p2 * c1 * c3 + p1 * c1 + p2 * c3 + 1.0;
        let at = state.monomial(p1, p2);
        prop_assert!((at - f(p1, p2)).abs() <= 1e-9 * f(p1, p2));
        let (q1, q2) = (x * budget, y * budget);
        prop_assert!(state.monomial(q1, q2) <= f(q1, q2) * (1.0 + 1e-12));
        prop_assert!((state.alpha.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn condensation_trace_is_monotone(c1 in 0.01f64..10.0, c2 in 0.0f64..10.0, c3 in 0.0f64..10.0, budget in 0.1f64..50.0, start in 0.05f64..0.95) {
        let c = ChannelConstants { c1, c2, c3 };
        let init = PowerSplit::new(start * budget, (1.0 - start) * budget, budget);
        let out = single_condensation_loop(init, &c, 1.0, 1e-8, 100);
        prop_assert!(out.trace.windows(2).all(|w| w[1] >= w[0]));
        prop_assert!(out.split.is_feasible());
        prop_assert!(objective_ratio(&out.split, &c, 1.0) >= objective_ratio(&init, &c, 1.0));
    }

    #[test]
    fn gev_beats_any_beam_in_two_dimensions(seed in 0u64..100_000, power in 0.1f64..20.0, theta in 0.0f64..std::f64::consts::FRAC_PI_2, phi in 0.0f64..std::f64::consts::TAU) {
        let ch = sample_channels(&SystemParams::<f64>::new(2, 1), seed);
        let q = gev_beamformer(&ch.h_b, &ch.h_e_est, power, 1.0, 1.0).unwrap();
        let w = ComplexVector::new(vec![
            nalgebra::Complex::new(theta.cos(), 0.0),
            nalgebra::Complex::new(theta.sin() * phi.cos(), theta.sin() * phi.sin()),
        ]).unwrap();
        let other = w.column_outer().scale(power);
        let zero = ComplexVector::zeros(2);
        prop_assert!((q.trace() - power).abs() <= 1e-9 * power);
        prop_assert!(secrecy_rate_dt(&ch, &q, &zero, 1.0) >= secrecy_rate_dt(&ch, &other, &zero, 1.0) - 1e-9);
    }
}

#[test]
fn single_precision_robust_dt_tracks_double() {
    use wiretap_core::f32 as s;
    for seed in [3u64, 8, 21] {
        let p64 = params(4, 4, 5.0, 0.5);
        let ch64 = sample_channels(&p64, seed);
        let r64 = solve_robust_dt(&ch64, &p64, &RobustSettings::default());

        let mut p32 = s::SystemParams::new(4, 4);
        p32.p_s = 5.0;
        p32.p_j = 5.0;
        p32.p_total = 5.0;
        p32.eps_h_sq = 0.5;
        p32.eps_g_sq = 0.5;
        let ch32: s::ChannelSet = sample_channels(&p32, seed);
        let settings = s::RobustSettings::default();
        let r32 = solve_robust_dt(&ch32, &p32, &settings);
        assert!(r32.status == Status::Optimal || r32.status == Status::MaxIter, "{:?} {:?}", r32.status, r32.message);
        assert!((r32.secrecy_rate_bits as f64 - r64.secrecy_rate_bits).abs() < 2e-2, "seed {seed}: {} vs {}", r32.secrecy_rate_bits, r64.secrecy_rate_bits);
        let _: &HermitianMatrix<f32> = &r32.q_x;
    }
}
