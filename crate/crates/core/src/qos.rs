//! Designs minimizing Eve's worst-case SINR subject to a target SINR at Bob,
//! with and without a helper, plus outage detection.

use crate::cj::{evaluate_cj_worst_case, null_steering, worst_mismatch_cj};
use crate::conic::{self, AffineMatrix, AffineScalar, BisectError, BisectionConfig, ConicProblem, MatrixVar, Sign, SolverSettings};
use crate::dt::{solver_error, worst_mismatch_dt, RobustSettings};
use crate::linalg::{null_projector, null_space_basis, ComplexVector, HermitianMatrix};
use nalgebra::{Complex, DMatrix};
use crate::model::{bob_sinr, eve_sinr, secrecy_rate_cj, ChannelSet, MismatchPair, SchemeResult, Status, SystemParams};
use crate::scalar::{lit, Real};

/// Full-power MRT cannot reach the target: `P‖h_b‖²/σ² < γ_t`.
pub fn is_outage<T: Real>(ch: &ChannelSet<T>, params: &SystemParams<T>) -> bool {
    params.p_total * ch.h_b.norm_sq() / params.sigma_sq < params.gamma_t
}

fn outage<T: Real>(ch: &ChannelSet<T>, why: &str) -> SchemeResult<T> {
    SchemeResult::failure(Status::Outage, ch.n_a(), ch.n_h(), why.to_string())
}

fn failure<T: Real>(ch: &ChannelSet<T>, msg: String) -> SchemeResult<T> {
    SchemeResult::failure(Status::SolverFailure, ch.n_a(), ch.n_h(), msg)
}

/// Fills metrics of `(q_x, q_z)` at the worst-case mismatches of both.
fn evaluate<T: Real>(ch: &ChannelSet<T>, params: &SystemParams<T>, q_x: HermitianMatrix<T>, q_z: HermitianMatrix<T>, solver: &SolverSettings<T>) -> SchemeResult<T> {
    match evaluate_cj_worst_case(ch, params, q_x, q_z, None, solver) {
        Ok(r) => r,
        Err(e) => failure(ch, e.to_string()),
    }
}

/// Bob's SINR constraint `h_bQ_xh_bᴴ ≥ γ_t(g_bQ_zg_bᴴ + σ²)`.
fn bob_constraint<T: Real>(p: &mut ConicProblem<T>, ch: &ChannelSet<T>, params: &SystemParams<T>, q_x: &MatrixVar<T>, q_z: Option<&MatrixVar<T>>) {
    let mut rhs = AffineScalar::constant(params.gamma_t * params.sigma_sq);
    if let Some(qz) = q_z {
        rhs = rhs.add(&qz.expr().quad_form(&ch.g_b).scale(params.gamma_t));
    }
    p.add_le("bob-sinr", rhs, q_x.expr().quad_form(&ch.h_b));
}

/// Eve's power on the estimated channel, minimized; among minimizers the
/// smallest-trace covariance is returned.
pub fn solve_qos_dt_nonrobust<T: Real>(ch: &ChannelSet<T>, params: &SystemParams<T>, settings: &RobustSettings<T>) -> SchemeResult<T> {
    if is_outage(ch, params) {
        return outage(ch, "target SINR exceeds full-power MRT");
    }
    match min_trace_eve_design(ch, params, &settings.solver) {
        Ok(Some(q)) => evaluate(ch, params, q, HermitianMatrix::zeros(ch.n_h()), &settings.solver),
        Ok(None) => outage(ch, "SINR target infeasible within the power budget"),
        Err(e) => failure(ch, e),
    }
}

fn min_trace_eve_design<T: Real>(ch: &ChannelSet<T>, params: &SystemParams<T>, solver: &SolverSettings<T>) -> Result<Option<HermitianMatrix<T>>, String> {
    let n = ch.n_a();
    // stage 1: least Eve power; stage 2: least trace at that Eve power, either
    // inside the nullspace of h̃_e (Eve nulled) or under an Eve-power cap
    let stage = |basis: Option<&DMatrix<Complex<T>>>, cap: Option<T>| {
        let mut p = ConicProblem::new();
        let q = match basis {
            Some(b) => p.hermitian_in_subspace("Qx", b),
            None => p.hermitian("Qx", n),
        };
        p.add_le("power", q.expr().trace(), AffineScalar::constant(params.p_total));
        bob_constraint(&mut p, ch, params, &q, None);
        let eve = q.expr().quad_form(&ch.h_e_est);
        match (basis, cap) {
            (None, None) => p.minimize(eve),
            (_, cap) => {
                if let Some(v) = cap {
                    p.add_le("eve-cap", eve, AffineScalar::constant(v));
                }
                p.minimize(q.expr().trace());
            }
        }
        let sol = conic::solve(&p, solver);
        let m = sol.matrix(&q).clamp_psd(lit(1e-12));
        (sol, m)
    };
    let (s1, q1) = stage(None, None);
    match s1.status {
        conic::SolveStatus::Infeasible => return Ok(None),
        _ if !s1.is_usable() => return Err(solver_error(&s1)),
        _ => {}
    }
    let v = s1.objective_value.max(T::zero());
    let nulled = v <= lit::<T>(1e-9) * params.sigma_sq;
    let cap = v + lit::<T>(1e-7) * params.sigma_sq + lit::<T>(1e-6) * v;
    let (s2, q2) = match (nulled, null_space_basis(&ch.h_e_est)) {
        (true, Ok(b)) if b.ncols() > 0 => stage(Some(&b), None),
        _ => stage(None, Some(cap)),
    };
    let meets = |q: &HermitianMatrix<T>| {
        q.quad_form(&ch.h_b) >= (params.gamma_t - lit(1e-7)) * params.sigma_sq
            && q.trace() <= params.p_total * (T::one() + lit(1e-9))
            && q.quad_form(&ch.h_e_est) <= cap
    };
    let pick = if s2.is_usable() && meets(&q2) && q2.trace() <= q1.trace() { q2 } else { q1 };
    Ok(Some(pick))
}

/// Worst-case Eve SNR minimized through the S-procedure LMI
/// `[[ψ, h̃Q], [Qh̃ᴴ, μI−Q]] ⪰ 0` with Bob's target and the power budget.
pub fn solve_qos_dt_robust<T: Real>(ch: &ChannelSet<T>, params: &SystemParams<T>, settings: &RobustSettings<T>) -> SchemeResult<T> {
    if is_outage(ch, params) {
        return outage(ch, "target SINR exceeds full-power MRT");
    }
    let n = ch.n_a();
    let eps = params.eps_h();
    if eps <= T::zero() {
        // without mismatch the robust problem is the non-robust one
        let mut r = solve_qos_dt_nonrobust(ch, params, settings);
        r.trace = vec![r.eve_metric];
        return r;
    }
    let mut p = ConicProblem::new();
    let q = p.hermitian("Qx", n);
    p.add_le("power", q.expr().trace(), AffineScalar::constant(params.p_total));
    bob_constraint(&mut p, ch, params, &q, None);
    let mu = p.scalar("mu", Sign::Nonneg);
    let psi = p.scalar("psi", Sign::Free);
    let lmi = AffineMatrix::block2(
        &AffineMatrix::from_scalar(&AffineScalar::var(psi)),
        &q.expr().row_times(&ch.h_e_est),
        &AffineMatrix::scalar_identity(&AffineScalar::var(mu), n).sub(&q.expr()),
    )
    .expect("block shapes are consistent");
    p.add_lmi("s-procedure", lmi);
    p.minimize(q.expr().quad_form(&ch.h_e_est).add(&AffineScalar::var(mu).scale(eps * eps)).add(&AffineScalar::var(psi)));
    let sol = conic::solve(&p, &settings.solver);
    match sol.status {
        conic::SolveStatus::Infeasible => return outage(ch, "SINR target infeasible within the power budget"),
        _ if !sol.is_usable() => return failure(ch, solver_error(&sol)),
        _ => {}
    }
    let mut r = evaluate(ch, params, sol.matrix(&q).clamp_psd(lit(1e-12)), HermitianMatrix::zeros(ch.n_h()), &settings.solver);
    r.trace = vec![sol.objective_value / params.sigma_sq];
    r
}

/// Beamformer on the projection of `h_b` onto the nullspace of `h̃_e`, scaled
/// to meet Bob's target exactly.
pub fn relaxed_zf_qos<T: Real>(ch: &ChannelSet<T>, params: &SystemParams<T>, settings: &RobustSettings<T>) -> SchemeResult<T> {
    if is_outage(ch, params) {
        return outage(ch, "target SINR exceeds full-power MRT");
    }
    let proj = match null_projector(&ch.h_e_est) {
        Ok(p) => p.into_matrix(),
        // no estimated eavesdropper: every direction is zero-forcing
        Err(_) => HermitianMatrix::identity(ch.n_a()).into_matrix(),
    };
    let w = proj * ch.h_b.adjoint_col();
    let nrm = w.norm();
    if nrm <= lit::<T>(1e-10) * ch.h_b.norm() {
        return outage(ch, "Bob and Eve channels are parallel");
    }
    let Ok(w) = ComplexVector::from_dvector(w.unscale(nrm)) else {
        return failure(ch, "non-finite beamformer".into());
    };
    let unit = w.column_outer();
    let scale = params.gamma_t * params.sigma_sq / unit.quad_form(&ch.h_b);
    if scale > params.p_total * (T::one() + lit(1e-12)) {
        return outage(ch, "zero-forcing beamformer needs more than the power budget");
    }
    evaluate(ch, params, unit.scale(scale), HermitianMatrix::zeros(ch.n_h()), &settings.solver)
}

/// Ratio problem over `(Q_x, Q_z)` with a joint budget:
/// `num = με_h² + h̃Q_xh̃ᴴ + ψ`, `den = σ² − νε_g² + g̃Q_zg̃ᴴ − φ`.
#[derive(Debug, Clone)]
pub struct QosCjRatio<'a, T: Real> {
    pub ch: &'a ChannelSet<T>,
    pub params: &'a SystemParams<T>,
}

#[derive(Debug, Clone)]
pub struct QosCjWitness<T: Real> {
    pub q_x: HermitianMatrix<T>,
    pub q_z: HermitianMatrix<T>,
    pub numerator: T,
    pub denominator: T,
}

impl<T: Real> QosCjRatio<'_, T> {
    /// Minimizes `num − t·den`; `t` is feasible iff the optimum is `≤ 0` up to
    /// a `1e-9` margin of the noise level.
    pub fn oracle(&self, t: T, solver: &SolverSettings<T>) -> Result<Option<QosCjWitness<T>>, String> {
        let (ch, params) = (self.ch, self.params);
        let (na, nh) = (ch.n_a(), ch.n_h());
        let (eh, eg) = (params.eps_h(), params.eps_g());
        let mut p = ConicProblem::new();
        let qx = p.hermitian("Qx", na);
        let qz = p.hermitian("Qz", nh);
        p.add_le("power", qx.expr().trace().add(&qz.expr().trace()), AffineScalar::constant(params.p_total));
        bob_constraint(&mut p, ch, params, &qx, Some(&qz));
        let mut num = qx.expr().quad_form(&ch.h_e_est);
        if eh > T::zero() {
            let mu = p.scalar("mu", Sign::Nonneg);
            let psi = p.scalar("psi", Sign::Free);
            let lmi = AffineMatrix::block2(
                &AffineMatrix::from_scalar(&AffineScalar::var(psi)),
                &qx.expr().row_times(&ch.h_e_est),
                &AffineMatrix::scalar_identity(&AffineScalar::var(mu), na).sub(&qx.expr()),
            )
            .expect("block shapes are consistent");
            p.add_lmi("eve-signal", lmi);
            num = num.add(&AffineScalar::var(mu).scale(eh * eh)).add(&AffineScalar::var(psi));
        }
        let mut den = qz.expr().quad_form(&ch.g_e_est).add_const(params.sigma_sq);
        if eg > T::zero() {
            let nu = p.scalar("nu", Sign::Nonneg);
            let phi = p.scalar("phi", Sign::Free);
            let lmi = AffineMatrix::block2(
                &AffineMatrix::from_scalar(&AffineScalar::var(phi)),
                &qz.expr().row_times(&ch.g_e_est),
                &AffineMatrix::scalar_identity(&AffineScalar::var(nu), nh).add(&qz.expr()),
            )
            .expect("block shapes are consistent");
            p.add_lmi("eve-jamming", lmi);
            den = den.sub(&AffineScalar::var(nu).scale(eg * eg)).sub(&AffineScalar::var(phi));
            p.add_nonneg("den", den.clone());
        }
        p.minimize(num.sub(&den.scale(t)));
        let sol = conic::solve(&p, solver);
        if sol.status == conic::SolveStatus::Infeasible {
            return Ok(None);
        }
        if !sol.is_usable() {
            return Err(solver_error(&sol));
        }
        if sol.objective_value > lit::<T>(1e-9) * params.sigma_sq * (T::one() + t) {
            return Ok(None);
        }
        Ok(Some(QosCjWitness {
            q_x: sol.matrix(&qx).clamp_psd(lit(1e-12)),
            q_z: sol.matrix(&qz).clamp_psd(lit(1e-12)),
            numerator: sol.eval(&num),
            denominator: sol.eval(&den),
        }))
    }
}

/// Bisection on Eve's worst-case SINR over joint `(Q_x, Q_z)` designs; no
/// zero-forcing constraint on the jamming.
pub fn solve_qos_cj_robust<T: Real>(ch: &ChannelSet<T>, params: &SystemParams<T>, settings: &RobustSettings<T>) -> SchemeResult<T> {
    if is_outage(ch, params) {
        return outage(ch, "target SINR exceeds full-power MRT");
    }
    let base = solve_qos_cj_nonrobust(ch, params, settings);
    let base_eve = if base.status == Status::Optimal {
        let zero = MismatchPair::zero(ch.n_a(), ch.n_h());
        eve_sinr(ch, &base.q_x, &base.q_z, &zero, params.sigma_sq)
    } else {
        T::zero()
    };
    let grow = ch.h_e_est.norm() + params.eps_h();
    let upper = base_eve + grow * grow * params.p_total / params.sigma_sq;
    let upper = upper.max(lit(1e-9));
    let cfg = BisectionConfig { lower: T::zero(), upper, tolerance: lit::<T>(1e-8) * upper, max_iter: settings.max_iter };
    let ratio = QosCjRatio { ch, params };
    let out = match conic::bisect(&cfg, |t| ratio.oracle(t, &settings.solver)) {
        Ok(o) => o,
        Err(BisectError::UpperInfeasible { .. }) => return outage(ch, "SINR target infeasible within the power budget"),
        Err(BisectError::Oracle(e)) => return failure(ch, e),
        Err(e) => return failure(ch, e.to_string()),
    };
    let mut r = evaluate(ch, params, out.witness.q_x, out.witness.q_z, &settings.solver);
    // helper silent is a feasible joint design; keep whichever is better
    let dt = solve_qos_dt_robust(ch, params, settings);
    if dt.status == Status::Optimal && r.status == Status::Optimal && dt.eve_metric < r.eve_metric {
        r = dt;
        r.message = Some("helper-silent design retained".into());
    }
    r.iterations = out.iterations;
    r.trace = vec![cfg.lower, cfg.upper, out.value];
    if out.status == conic::BisectStatus::MaxIter && r.status == Status::Optimal {
        r.status = Status::MaxIter;
    }
    r
}

/// Minimal-trace non-robust transmit covariance with the leftover budget on
/// null-steering jamming toward the estimated `g̃_e`.
pub fn solve_qos_cj_nonrobust<T: Real>(ch: &ChannelSet<T>, params: &SystemParams<T>, settings: &RobustSettings<T>) -> SchemeResult<T> {
    if is_outage(ch, params) {
        return outage(ch, "target SINR exceeds full-power MRT");
    }
    let q_x = match min_trace_eve_design(ch, params, &settings.solver) {
        Ok(Some(q)) => q,
        Ok(None) => return outage(ch, "SINR target infeasible within the power budget"),
        Err(e) => return failure(ch, e),
    };
    let residual = (params.p_total - q_x.trace()).max(T::zero());
    let q_z = match null_steering(&ch.g_b, &ch.g_e_est) {
        Ok(w) => w.column_outer().scale(residual),
        Err(_) => HermitianMatrix::zeros(ch.n_h()),
    };
    evaluate(ch, params, q_x, q_z, &settings.solver)
}

/// Worst-case Eve SINR of a fixed design and the mismatches attaining it.
pub fn worst_case_eve_sinr<T: Real>(ch: &ChannelSet<T>, params: &SystemParams<T>, q_x: &HermitianMatrix<T>, q_z: &HermitianMatrix<T>, solver: &SolverSettings<T>) -> Result<(T, MismatchPair<T>), String> {
    let (e_h, _) = worst_mismatch_dt(q_x, &ch.h_e_est, params.eps_h(), solver).map_err(|e| e.to_string())?;
    let (e_g, _) = worst_mismatch_cj(q_z, &ch.g_e_est, params.eps_g(), solver).map_err(|e| e.to_string())?;
    let mm = MismatchPair { e_h, e_g };
    Ok((eve_sinr(ch, q_x, q_z, &mm, params.sigma_sq), mm))
}

/// Secrecy rate and Bob SINR for reporting alongside the QoS metrics.
pub fn qos_summary<T: Real>(ch: &ChannelSet<T>, params: &SystemParams<T>, r: &SchemeResult<T>) -> (T, T) {
    (secrecy_rate_cj(ch, &r.q_x, &r.q_z, &r.worst_mismatch, params.sigma_sq), bob_sinr(ch, &r.q_x, &r.q_z, params.sigma_sq))
}
