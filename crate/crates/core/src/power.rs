//! Global power split between Alice and the helper: the quadratic-fractional
//! rate objective, its monomial condensation, the condensed geometric
//! program, and the outer loop alternating with the covariance designs.

use thiserror::Error;

use crate::cj::{solve_qx_given_jamming, solve_robust_jamming, worst_mismatch_cj, JammedRatioForm};
use crate::dt::RobustSettings;
use crate::linalg::HermitianMatrix;
use crate::model::{ChannelSet, MismatchPair, SchemeResult, Status, SystemParams};
use crate::scalar::{lit, Real};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PowerError {
    #[error("covariance trace {trace} is not normalized")]
    NotNormalized { trace: f64 },
    #[error("dimension mismatch: {0}")]
    Dimension(String),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerSplit<T: Real> {
    pub p1: T,
    pub p2: T,
    pub budget: T,
}

impl<T: Real> PowerSplit<T> {
    pub fn new(p1: T, p2: T, budget: T) -> Self {
        Self { p1, p2, budget }
    }

    pub fn even(budget: T) -> Self {
        let h = budget * lit(0.5);
        Self { p1: h, p2: h, budget }
    }

    pub fn is_feasible(&self) -> bool {
        self.p1 >= T::zero() && self.p2 >= T::zero() && self.p1 + self.p2 <= self.budget + lit(1e-9)
    }

    pub fn jamming_fraction(&self) -> T {
        if self.budget > T::zero() {
            self.p2 / self.budget
        } else {
            T::zero()
        }
    }
}

/// `c₁ = h_bQ̄_xh_bᴴ`, `c₂ = h_eQ̄_xh_eᴴ`, `c₃ = g_eQ̄_zg_eᴴ` with mismatched Eve channels.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelConstants<T: Real> {
    pub c1: T,
    pub c2: T,
    pub c3: T,
}

/// Monomial under-estimator of `f` at an expansion point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CondensationState<T: Real> {
    pub c: ChannelConstants<T>,
    pub alpha: [T; 4],
    pub sigma_sq: T,
}

fn trace_unit<T: Real>(q: &HermitianMatrix<T>) -> Result<(), PowerError> {
    let tr = q.trace();
    if (tr - T::one()).abs() > lit(1e-9) {
        return Err(PowerError::NotNormalized { trace: crate::scalar::to_f64(tr) });
    }
    Ok(())
}

/// Quadratic forms of normalized covariances. A zero `q_z_norm` (no usable
/// jamming direction) is accepted and gives `c₃ = 0`.
pub fn compute_constants<T: Real>(
    ch: &ChannelSet<T>,
    q_x_norm: &HermitianMatrix<T>,
    q_z_norm: &HermitianMatrix<T>,
    mm: &MismatchPair<T>,
) -> Result<ChannelConstants<T>, PowerError> {
    if q_x_norm.dim() != ch.n_a() || q_z_norm.dim() != ch.n_h() {
        return Err(PowerError::Dimension(format!("covariances {}x{} for channels {}x{}", q_x_norm.dim(), q_z_norm.dim(), ch.n_a(), ch.n_h())));
    }
    trace_unit(q_x_norm)?;
    if q_z_norm.trace() != T::zero() {
        trace_unit(q_z_norm)?;
    }
    Ok(ChannelConstants {
        c1: q_x_norm.quad_form(&ch.h_b).max(T::zero()),
        c2: q_x_norm.quad_form(&ch.h_e_est.add(&mm.e_h)).max(T::zero()),
        c3: q_z_norm.quad_form(&ch.g_e_est.add(&mm.e_g)).max(T::zero()),
    })
}

fn terms<T: Real>(p1: T, p2: T, c: &ChannelConstants<T>, s2: T) -> [T; 4] {
    [p1 * p2 * c.c1 * c.c3, p1 * c.c1 * s2, p2 * c.c3 * s2, s2 * s2]
}

fn denominator<T: Real>(p1: T, p2: T, c: &ChannelConstants<T>, s2: T) -> T {
    p1 * c.c2 + p2 * c.c3 + s2
}

/// `f/g` with `f = p₁p₂c₁c₃ + p₁c₁σ² + p₂c₃σ² + σ⁴` and `g = p₁c₂ + p₂c₃ + σ²`.
pub fn objective_ratio<T: Real>(s: &PowerSplit<T>, c: &ChannelConstants<T>, sigma_sq: T) -> T {
    let f = terms(s.p1, s.p2, c, sigma_sq).iter().fold(T::zero(), |a, &b| a + b);
    f / denominator(s.p1, s.p2, c, sigma_sq)
}

/// Secrecy rate in bits, `log₂(f / (σ² g))`, clamped at zero.
pub fn split_rate<T: Real>(s: &PowerSplit<T>, c: &ChannelConstants<T>, sigma_sq: T) -> T {
    ((objective_ratio(s, c, sigma_sq) / sigma_sq).ln() / lit::<T>(std::f64::consts::LN_2)).max(T::zero())
}

/// Weights `αᵢ = uᵢ/f` at the expansion point.
pub fn condense<T: Real>(s: &PowerSplit<T>, c: &ChannelConstants<T>, sigma_sq: T) -> CondensationState<T> {
    let u = terms(s.p1.max(T::zero()), s.p2.max(T::zero()), c, sigma_sq);
    let f = u.iter().fold(T::zero(), |a, &b| a + b);
    CondensationState { c: *c, alpha: [u[0] / f, u[1] / f, u[2] / f, u[3] / f], sigma_sq }
}

impl<T: Real> CondensationState<T> {
    /// `f̃(p) = Πᵢ (uᵢ(p)/αᵢ)^αᵢ` over the terms with `αᵢ > 0`.
    pub fn monomial(&self, p1: T, p2: T) -> T {
        let u = terms(p1, p2, &self.c, self.sigma_sq);
        let mut log = T::zero();
        for (ui, &ai) in u.iter().zip(&self.alpha) {
            if ai > T::zero() {
                if *ui <= T::zero() {
                    return T::zero();
                }
                log += ai * (*ui / ai).ln();
            }
        }
        log.exp()
    }

    /// Exponents of `p₁` and `p₂` in the monomial.
    pub fn exponents(&self) -> (T, T) {
        (self.alpha[0] + self.alpha[1], self.alpha[0] + self.alpha[2])
    }
}

type Vec2<T> = [T; 2];

/// Barrier Newton method on `ln g(eˣ) − a₁x₁ − a₂x₂` over
/// `e^{x₁} + e^{x₂} ≤ P`, `xᵢ ≥ ln p_min`.
fn log_space_gp<T: Real>(state: &CondensationState<T>, budget: T) -> Vec2<T> {
    let (a1, a2) = state.exponents();
    let c = state.c;
    let s2 = state.sigma_sq;
    let lo = (budget * lit(1e-8)).ln();
    let obj = |x: &Vec2<T>| (c.c2 * x[0].exp() + c.c3 * x[1].exp() + s2).ln() - a1 * x[0] - a2 * x[1];
    let inside = |x: &Vec2<T>| x[0] > lo && x[1] > lo && x[0].exp() + x[1].exp() < budget;
    let barrier = |x: &Vec2<T>, t: T| t * obj(x) - (budget - x[0].exp() - x[1].exp()).ln() - (x[0] - lo).ln() - (x[1] - lo).ln();
    let mut x: Vec2<T> = [(budget / lit(3.0)).ln(), (budget / lit(3.0)).ln()];
    let mut t = T::one();
    let two = lit::<T>(2.0);
    for _outer in 0..40 {
        for _ in 0..100 {
            let (e1, e2) = (x[0].exp(), x[1].exp());
            let g = c.c2 * e1 + c.c3 * e2 + s2;
            let (w1, w2) = (c.c2 * e1 / g, c.c3 * e2 / g);
            let slack = budget - e1 - e2;
            let (d1, d2) = (x[0] - lo, x[1] - lo);
            let grad = [
                t * (w1 - a1) + e1 / slack - T::one() / d1,
                t * (w2 - a2) + e2 / slack - T::one() / d2,
            ];
            let s_inv2 = T::one() / (slack * slack);
            let h11 = t * (w1 - w1 * w1) + e1 / slack + e1 * e1 * s_inv2 + T::one() / (d1 * d1);
            let h22 = t * (w2 - w2 * w2) + e2 / slack + e2 * e2 * s_inv2 + T::one() / (d2 * d2);
            let h12 = -t * w1 * w2 + e1 * e2 * s_inv2;
            let det = h11 * h22 - h12 * h12;
            let step = [-(h22 * grad[0] - h12 * grad[1]) / det, -(h11 * grad[1] - h12 * grad[0]) / det];
            let decrement = -(grad[0] * step[0] + grad[1] * step[1]);
            if !(decrement > lit(1e-20)) || !det.is_finite() {
                break;
            }
            let f0 = barrier(&x, t);
            let mut alpha = T::one();
            let mut moved = false;
            for _ in 0..60 {
                let cand = [x[0] + alpha * step[0], x[1] + alpha * step[1]];
                if inside(&cand) && barrier(&cand, t) <= f0 - lit::<T>(0.25) * alpha * decrement {
                    x = cand;
                    moved = true;
                    break;
                }
                alpha = alpha / two;
            }
            if !moved || (grad[0] * grad[0] + grad[1] * grad[1]).sqrt() <= lit::<T>(1e-8) * t.max(T::one()) {
                break;
            }
        }
        if lit::<T>(3.0) / t < lit(1e-12) {
            break;
        }
        t = t * lit(10.0);
    }
    x
}

fn better_split<T: Real>(cand: &PowerSplit<T>, best: &PowerSplit<T>, c: &ChannelConstants<T>, s2: T) -> bool {
    let (vc, vb) = (objective_ratio(cand, c, s2), objective_ratio(best, c, s2));
    let tie = lit::<T>(1e-12) * vb.abs().max(T::one());
    vc > vb + tie || ((vc - vb).abs() <= tie && (cand.p2 < best.p2 || cand.p2 == best.p2 && cand.p1 > best.p1))
}

/// Condensed GP solved in log variables, then polished on the true ratio
/// against the boundary allocations that put all power on Alice.
pub fn solve_condensed_gp<T: Real>(state: &CondensationState<T>, budget: T, sigma_sq: T) -> PowerSplit<T> {
    if budget <= T::zero() {
        return PowerSplit::new(T::zero(), T::zero(), budget);
    }
    let x = log_space_gp(state, budget);
    let gp = PowerSplit::new(x[0].exp(), x[1].exp(), budget);
    let c = &state.c;
    let mut best = gp;
    for cand in [PowerSplit::new(gp.p1 + gp.p2, T::zero(), budget), PowerSplit::new(budget, T::zero(), budget)] {
        if better_split(&cand, &best, c, sigma_sq) {
            best = cand;
        }
    }
    best
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LoopStatus {
    Converged,
    MaxIter,
}

#[derive(Debug, Clone)]
pub struct CondensationOutcome<T: Real> {
    pub split: PowerSplit<T>,
    /// Objective ratio after each iteration, starting with the initial point.
    pub trace: Vec<T>,
    pub iterations: usize,
    pub status: LoopStatus,
}

/// Successive condensation: re-expand at the current split and solve the GP
/// until the relative change of the ratio drops below `tol`.
pub fn single_condensation_loop<T: Real>(initial: PowerSplit<T>, c: &ChannelConstants<T>, sigma_sq: T, tol: T, max_iter: usize) -> CondensationOutcome<T> {
    let budget = initial.budget;
    let mut cur = initial;
    let mut val = objective_ratio(&cur, c, sigma_sq);
    let mut trace = vec![val];
    for it in 1..=max_iter {
        let state = condense(&cur, c, sigma_sq);
        let next = solve_condensed_gp(&state, budget, sigma_sq);
        let nv = objective_ratio(&next, c, sigma_sq);
        let improved = nv >= val && better_split(&next, &cur, c, sigma_sq);
        if improved {
            cur = next;
        }
        let change = if improved { (nv - val).abs() / val.abs().max(lit(1e-300)) } else { T::zero() };
        if improved {
            val = nv;
        }
        trace.push(val);
        if change < tol {
            return CondensationOutcome { split: cur, trace, iterations: it, status: LoopStatus::Converged };
        }
    }
    CondensationOutcome { split: cur, trace, iterations: max_iter, status: LoopStatus::MaxIter }
}

#[derive(Debug, Clone)]
pub struct JointSettings<T: Real> {
    pub robust: RobustSettings<T>,
    pub form: JammedRatioForm,
    pub outer_tol: T,
    pub outer_max: usize,
    pub inner_tol: T,
    pub inner_max: usize,
}

impl<T: Real> Default for JointSettings<T> {
    fn default() -> Self {
        Self { robust: RobustSettings::default(), form: JammedRatioForm::default(), outer_tol: lit(1e-4), outer_max: 30, inner_tol: lit(1e-5), inner_max: 50 }
    }
}

/// Robust CJ at individual budgets `(p₁, p₂)`.
pub fn robust_cj_at_split<T: Real>(ch: &ChannelSet<T>, params: &SystemParams<T>, split: &PowerSplit<T>, settings: &JointSettings<T>) -> SchemeResult<T> {
    let mut p = *params;
    p.p_s = split.p1;
    p.p_j = split.p2;
    let (na, nh) = (ch.n_a(), ch.n_h());
    let jam = match solve_robust_jamming(ch, &p, &settings.robust.solver) {
        Ok(j) => j,
        Err(e) => return SchemeResult::failure(Status::SolverFailure, na, nh, e.to_string()),
    };
    let e_g = match worst_mismatch_cj(&jam.q_z, &ch.g_e_est, p.eps_g(), &settings.robust.solver) {
        Ok((e, _)) => e,
        Err(e) => return SchemeResult::failure(Status::SolverFailure, na, nh, e.to_string()),
    };
    solve_qx_given_jamming(ch, &p, &jam.q_z, &e_g, settings.form, &settings.robust)
}

/// Robust CJ with Alice's share `fraction` of the total budget.
pub fn fixed_split_cj<T: Real>(ch: &ChannelSet<T>, params: &SystemParams<T>, fraction: T, settings: &JointSettings<T>) -> SchemeResult<T> {
    let p = params.p_total;
    robust_cj_at_split(ch, params, &PowerSplit::new(fraction * p, (T::one() - fraction) * p, p), settings)
}

/// Alternates covariance design at fixed powers with the condensation loop at
/// fixed covariance directions and mismatches, starting from an even split.
/// An outer iterate is accepted only if its worst-case rate does not drop.
pub fn joint_optimize_global<T: Real>(ch: &ChannelSet<T>, params: &SystemParams<T>, settings: &JointSettings<T>) -> SchemeResult<T> {
    let (na, nh) = (ch.n_a(), ch.n_h());
    if let Err(e) = params.validate().and_then(|_| ch.check(params)) {
        return SchemeResult::failure(Status::SolverFailure, na, nh, e.to_string());
    }
    let budget = params.p_total;
    if budget <= T::zero() {
        return robust_cj_at_split(ch, params, &PowerSplit::new(T::zero(), T::zero(), budget), settings);
    }
    // jamming direction and its worst mismatch do not depend on the helper's power
    let mut unit = *params;
    unit.p_j = T::one();
    let q_z_dir = match solve_robust_jamming(ch, &unit, &settings.robust.solver) {
        Ok(j) if j.q_z.trace() > lit(1e-9) => j.q_z.scale(T::one() / j.q_z.trace()),
        Ok(_) => HermitianMatrix::zeros(nh),
        Err(e) => return SchemeResult::failure(Status::SolverFailure, na, nh, e.to_string()),
    };
    let e_g_dir = match worst_mismatch_cj(&q_z_dir, &ch.g_e_est, params.eps_g(), &settings.robust.solver) {
        Ok((e, _)) => e,
        Err(e) => return SchemeResult::failure(Status::SolverFailure, na, nh, e.to_string()),
    };

    let mut split = PowerSplit::even(budget);
    let mut best: Option<SchemeResult<T>> = None;
    let mut trace: Vec<T> = Vec::new();
    let mut q_x_dir = HermitianMatrix::identity(na).scale(T::one() / lit(na as f64));
    let mut status = Status::MaxIter;
    let mut iterations = 0;
    for it in 1..=settings.outer_max {
        iterations = it;
        let cur = robust_cj_at_split(ch, params, &split, settings);
        if cur.status == Status::SolverFailure {
            let mut r = best.unwrap_or(cur);
            r.status = Status::SolverFailure;
            r.trace = trace;
            r.iterations = it;
            return r;
        }
        let rate = cur.secrecy_rate_bits;
        let prev = best.as_ref().map(|b| b.secrecy_rate_bits);
        if let Some(pr) = prev {
            if rate < pr {
                log::debug!("outer iterate {it} lowered the rate ({rate} < {pr}); stopping");
                status = Status::Optimal;
                break;
            }
        }
        trace.push(rate);
        let tr_x = cur.q_x.trace();
        if tr_x > lit(1e-12) {
            q_x_dir = cur.q_x.scale(T::one() / tr_x);
        }
        let e_h = cur.worst_mismatch.e_h.clone();
        best = Some(cur);
        if let Some(pr) = prev {
            if rate - pr < settings.outer_tol {
                status = Status::Optimal;
                break;
            }
        }
        let mm = MismatchPair { e_h, e_g: e_g_dir.clone() };
        let c = match compute_constants(ch, &q_x_dir, &q_z_dir, &mm) {
            Ok(c) => c,
            Err(e) => return SchemeResult::failure(Status::SolverFailure, na, nh, e.to_string()),
        };
        let inner = single_condensation_loop(split, &c, params.sigma_sq, settings.inner_tol, settings.inner_max);
        let moved = (inner.split.p1 - split.p1).abs() + (inner.split.p2 - split.p2).abs();
        split = inner.split;
        if moved <= lit::<T>(1e-12) * budget {
            status = Status::Optimal;
            break;
        }
    }
    let mut r = best.expect("at least one outer iterate");
    // all power on Alice: preferred on ties, since the helper adds nothing then
    let solo = robust_cj_at_split(ch, params, &PowerSplit::new(budget, T::zero(), budget), settings);
    if solo.status != Status::SolverFailure && solo.secrecy_rate_bits >= r.secrecy_rate_bits {
        if solo.secrecy_rate_bits > r.secrecy_rate_bits {
            trace.push(solo.secrecy_rate_bits);
        }
        r = solo;
    }
    if r.status == Status::Optimal {
        r.status = status;
    }
    r.trace = trace;
    r.iterations = iterations;
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dt::solve_robust_dt;
    use crate::linalg::ComplexVector;
    use crate::model::sample_channels;

    fn consts(c1: f64, c2: f64, c3: f64) -> ChannelConstants<f64> {
        ChannelConstants { c1, c2, c3 }
    }

    #[test]
    fn ratio_collapses_without_eve_leakage() {
        let c = consts(2.0, 0.0, 1.3);
        for (p1, p2) in [(0.5, 1.0), (2.0, 0.0), (1.0, 3.0)] {
            let r = objective_ratio(&PowerSplit::new(p1, p2, 4.0), &c, 1.0);
            assert!((r - (p1 * 2.0 + 1.0)).abs() < 1e-12);
        }
        assert_eq!(objective_ratio(&PowerSplit::new(0.0, 0.0, 4.0), &consts(1.0, 2.0, 3.0), 1.7), 1.7);
    }

    #[test]
    fn condensation_weights() {
        let dom = condense(&PowerSplit::new(1.0, 1.0, 2.0), &consts(0.0, 1.0, 0.0), 1.0);
        assert_eq!(dom.alpha, [0.0, 0.0, 0.0, 1.0]);
        // all four terms equal: p1 = p2 = 1, c1 = c3 = 1, σ² = 1
        let eq = condense(&PowerSplit::new(1.0, 1.0, 2.0), &consts(1.0, 0.5, 1.0), 1.0);
        for a in eq.alpha {
            assert!((a - 0.25).abs() < 1e-15);
        }
        let zero = condense(&PowerSplit::new(0.0, 0.0, 2.0), &consts(1.0, 0.5, 1.0), 1.0);
        assert_eq!(zero.alpha[3], 1.0);
    }

    #[test]
    fn boundary_allocations() {
        let s = single_condensation_loop(PowerSplit::new(0.3, 1.2, 2.0), &consts(2.0, 0.0, 1.0), 1.0, 1e-5, 50);
        assert_eq!((s.split.p1, s.split.p2), (2.0, 0.0));
        assert!(s.iterations <= 2);
        let s = single_condensation_loop(PowerSplit::new(1.0, 1.0, 2.0), &consts(2.0, 1.0, 0.0), 1.0, 1e-5, 50);
        assert_eq!((s.split.p1, s.split.p2), (2.0, 0.0));
    }

    #[test]
    fn loop_trace_non_decreasing() {
        let s = single_condensation_loop(PowerSplit::even(10.0), &consts(1.0, 2.5, 3.0), 1.0, 1e-9, 50);
        for w in s.trace.windows(2) {
            assert!(w[1] >= w[0]);
        }
        let again = single_condensation_loop(s.split, &consts(1.0, 2.5, 3.0), 1.0, 1e-5, 50);
        assert_eq!(again.iterations, 1, "{:?} {:?}", s, again);
        let (v0, v1) = (again.trace[0], *again.trace.last().unwrap());
        assert!((v1 - v0).abs() <= 1e-8 * v0);
    }

    #[test]
    fn rejects_unnormalized() {
        let ch = sample_channels(&SystemParams::<f64>::new(4, 4), 0);
        let q = HermitianMatrix::identity(4);
        let e = compute_constants(&ch, &q, &q.scale(0.25), &MismatchPair::zero(4, 4));
        assert!(matches!(e, Err(PowerError::NotNormalized { .. })));
        let mrt = ch.h_b.gram().scale(1.0 / ch.h_b.norm_sq());
        let mm = MismatchPair { e_h: ch.h_e_est.scale(-1.0), e_g: ComplexVector::zeros(4) };
        let c = compute_constants(&ch, &mrt, &q.scale(0.25), &mm).unwrap();
        assert!((c.c1 - ch.h_b.norm_sq()).abs() < 1e-12);
        assert!(c.c2.abs() < 1e-14);
    }

    #[test]
    fn joint_trace_monotone_and_beats_dt() {
        let mut p = SystemParams::<f64>::new(4, 4);
        p.eps_h_sq = 1.0;
        p.eps_g_sq = 1.0;
        p.p_total = 10f64.powf(0.5);
        p.p_s = p.p_total;
        let sets = JointSettings::default();
        for seed in 0..3 {
            let ch = sample_channels(&p, 70 + seed);
            let r = joint_optimize_global(&ch, &p, &sets);
            assert_ne!(r.status, Status::SolverFailure, "{:?}", r.message);
            for w in r.trace.windows(2) {
                assert!(w[1] >= w[0] - 1e-6);
            }
            assert!(r.p1() + r.p2() <= p.p_total * (1.0 + 1e-6));
            let dt = solve_robust_dt(&ch, &p, &sets.robust);
            assert!(r.secrecy_rate_bits >= dt.secrecy_rate_bits - 2e-2, "{} vs {}", r.secrecy_rate_bits, dt.secrecy_rate_bits);
        }
    }

    #[test]
    fn single_antenna_puts_all_power_on_alice() {
        let mut p = SystemParams::<f64>::new(1, 1);
        p.p_total = 4.0;
        p.eps_h_sq = 0.1;
        p.eps_g_sq = 0.1;
        let ch = sample_channels(&p, 11);
        let r = joint_optimize_global(&ch, &p, &JointSettings::default());
        assert_eq!(r.p2(), 0.0);
        assert!((r.p1() - 4.0).abs() < 1e-6 || r.secrecy_rate_bits == 0.0);
    }
}
