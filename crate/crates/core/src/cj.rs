//! Robust cooperative jamming with zero-forcing at Bob: the jamming
//! covariance, the jammer's worst-case mismatch, the information covariance
//! given jamming, and the null-steering baseline.

use nalgebra::{Complex, DMatrix, DVector};
use thiserror::Error;

use crate::conic::{self, AffineMatrix, AffineScalar, ConicProblem, Sign, SolverSettings};
use crate::dt::{gev_beamformer, solver_error, worst_mismatch_dt, DtError, RobustRatio, RobustSettings, TrsDual};
use crate::linalg::{null_projector, null_space_basis, ComplexVector, HermitianMatrix, LinalgError};
use crate::model::{bob_sinr, eve_sinr, secrecy_rate_cj, ChannelSet, MismatchPair, SchemeResult, Status, SystemParams};
use crate::scalar::{lit, Real};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CjError {
    #[error("jammer channels to Bob and Eve are parallel; null steering is degenerate")]
    DegenerateJammer,
    #[error("conic solver failed: {0}")]
    Solver(String),
    #[error(transparent)]
    Dt(#[from] DtError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Which constants enter the information-covariance ratio once jamming is fixed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum JammedRatioForm {
    /// `(σ_z² + Eve) / (σ_b² + Bob)`, the ratio whose minimum maximizes the
    /// jammed secrecy rate; `σ_z²` is Eve's noise plus jamming, `σ_b²` Bob's.
    #[default]
    Consistent,
    /// `(σ_b² + Eve) / (σ_z² + Bob)`: the jamming-plus-noise term attached to
    /// Bob's side instead.
    AsPrinted,
}

/// Unit vector `w ∝ (I − P_gb) g_eᴴ`, stored as a column. Maximizes `|g_e w|`
/// over unit vectors with `g_b w = 0`.
pub fn null_steering<T: Real>(g_b: &ComplexVector<T>, g_e: &ComplexVector<T>) -> Result<ComplexVector<T>, CjError> {
    let proj = null_projector(g_b)?;
    let w = proj.as_matrix() * g_e.adjoint_col();
    let nrm = w.norm();
    if nrm <= lit::<T>(1e-10) * g_e.norm() || nrm == T::zero() {
        return Err(CjError::DegenerateJammer);
    }
    Ok(ComplexVector::from_dvector(w.unscale(nrm))?)
}

/// `λ₂/λ₁ ≤ tol`; the zero matrix is not rank one.
pub fn verify_rank_one<T: Real>(q: &HermitianMatrix<T>, tol: T) -> bool {
    let vals = q.eigenvalues();
    let n = vals.len();
    let top = vals[n - 1];
    if top <= T::zero() {
        return false;
    }
    n == 1 || vals[n - 2].max(T::zero()) / top <= tol
}

#[derive(Debug, Clone)]
pub struct JammingSolution<T: Real> {
    pub q_z: HermitianMatrix<T>,
    /// Worst-case jamming power at Eve, `min_{‖e‖≤ε} (g̃+e)Q_z(g̃+e)ᴴ`.
    pub objective: T,
    pub mu: T,
    pub phi: T,
}

/// Robust ZF jamming covariance `Q_z = U W Uᴴ` (`U` spanning the nullspace of
/// `g_b`) maximizing `g̃Q_zg̃ᴴ − φ − με²` over
/// `[[φ, g̃Q_z], [Q_zg̃ᴴ, μI+Q_z]] ⪰ 0`, `tr Q_z ≤ P_J`, `μ ≥ 0`.
pub fn solve_robust_jamming<T: Real>(ch: &ChannelSet<T>, params: &SystemParams<T>, solver: &SolverSettings<T>) -> Result<JammingSolution<T>, CjError> {
    let n = ch.n_h();
    let zero = JammingSolution { q_z: HermitianMatrix::zeros(n), objective: T::zero(), mu: T::zero(), phi: T::zero() };
    if n < 2 || params.p_j <= T::zero() {
        return Ok(zero);
    }
    let g = &ch.g_e_est;
    let eps = params.eps_g();
    let basis = null_space_basis(&ch.g_b)?;
    // the problem is homogeneous in (Q_z, μ, φ): solve at unit power
    let mut p = ConicProblem::new();
    let q = p.hermitian_in_subspace("Qz", &basis);
    p.add_le("power", q.expr().trace(), AffineScalar::constant(T::one()));
    let mut obj = q.expr().quad_form(g);
    let mut aux = None;
    if eps > T::zero() {
        let mu = p.scalar("mu", Sign::Nonneg);
        let phi = p.scalar("phi", Sign::Free);
        let lmi = AffineMatrix::block2(
            &AffineMatrix::from_scalar(&AffineScalar::var(phi)),
            &q.expr().row_times(g),
            &AffineMatrix::scalar_identity(&AffineScalar::var(mu), n).add(&q.expr()),
        )
        .expect("block shapes are consistent");
        p.add_lmi("s-procedure", lmi);
        obj = obj.sub(&AffineScalar::var(phi)).sub(&AffineScalar::var(mu).scale(eps * eps));
        aux = Some((mu, phi));
    }
    p.maximize(obj);
    let sol = conic::solve(&p, solver);
    if !sol.is_usable() {
        return Err(CjError::Solver(solver_error(&sol)));
    }
    let q_unit = sol.matrix(&q).clamp_psd(lit(1e-12));
    let (mu, phi) = aux.map(|(m, f)| (sol.value(m), sol.value(f))).unwrap_or((T::zero(), T::zero()));
    let pj = params.p_j;
    Ok(JammingSolution { q_z: q_unit.scale(pj), objective: sol.objective_value.max(T::zero()) * pj, mu: mu * pj, phi: phi * pj })
}

/// Minimizer over `‖e‖ ≤ ε` of `(c+e)Q(c+e)ᴴ` on the curve `e(λ) = −cQ(λI+Q)⁻¹`.
fn secular_min<T: Real>(q: &HermitianMatrix<T>, c: &ComplexVector<T>, eps: T) -> Option<ComplexVector<T>> {
    let (vals, vecs) = q.eigen();
    let n = vals.len();
    let qmax = vals[n - 1].max(T::zero());
    if qmax <= T::zero() {
        return None;
    }
    let floor = qmax * lit(1e-12);
    let coef: Vec<Complex<T>> = (0..n).map(|k| c.apply(&vecs.column(k).into_owned())).collect();
    let weight = |lam: T, k: usize| {
        let qk = vals[k].max(T::zero());
        if qk <= floor && lam <= floor {
            T::zero()
        } else {
            qk / (lam + qk)
        }
    };
    let norm_sq = |lam: T| (0..n).fold(T::zero(), |acc, k| acc + coef[k].norm_sqr() * weight(lam, k).powi(2));
    let build = |lam: T| {
        let mut e = DVector::zeros(n);
        for k in 0..n {
            e += vecs.column(k).map(|z| z.conj()) * coef[k] * Complex::new(-weight(lam, k), T::zero());
        }
        ComplexVector::from_dvector(e).ok()
    };
    if norm_sq(T::zero()) <= eps * eps {
        return build(T::zero());
    }
    let (mut lo, mut hi) = (T::zero(), qmax.max(c.norm() * qmax / eps));
    while norm_sq(hi) > eps * eps {
        hi = hi * lit(2.0);
    }
    for _ in 0..200 {
        let mid = (lo + hi) * lit(0.5);
        if norm_sq(mid) > eps * eps {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= hi * lit(1e-15) {
            break;
        }
    }
    build(hi)
}

/// Mismatch minimizing the jamming power Eve sees, `e* = −g̃Q(λI+Q)⁻¹`, with `λ`
/// from `max γ s.t. [[λI+Q, Qg̃ᴴ], [g̃Q, g̃Qg̃ᴴ−λε²−γ]] ⪰ 0, λ ≥ 0`.
pub fn worst_mismatch_cj<T: Real>(
    q_z: &HermitianMatrix<T>,
    g_e_est: &ComplexVector<T>,
    eps_g: T,
    solver: &SolverSettings<T>,
) -> Result<(ComplexVector<T>, Option<TrsDual<T>>), CjError> {
    let n = g_e_est.len();
    if eps_g <= T::zero() || q_z.max_eigenvalue() <= T::zero() {
        return Ok((ComplexVector::zeros(n), None));
    }
    let mut p = ConicProblem::new();
    let lambda = p.scalar("lambda", Sign::Nonneg);
    let gamma = p.scalar("gamma", Sign::Free);
    let top = AffineMatrix::scalar_identity(&AffineScalar::var(lambda), n).add(&AffineMatrix::hermitian(q_z));
    let qg = q_z.as_matrix() * g_e_est.adjoint_col();
    let off = AffineMatrix::constant(DMatrix::from_column_slice(n, 1, qg.as_slice()));
    let corner = AffineScalar::constant(q_z.quad_form(g_e_est))
        .sub(&AffineScalar::var(lambda).scale(eps_g * eps_g))
        .sub(&AffineScalar::var(gamma));
    let lmi = AffineMatrix::block2(&top, &off, &AffineMatrix::from_scalar(&corner)).expect("block shapes are consistent");
    p.add_lmi("trs-dual", lmi);
    p.maximize(AffineScalar::var(gamma));
    let sol = conic::solve(&p, solver);
    if !sol.is_usable() {
        return Err(CjError::Solver(solver_error(&sol)));
    }
    let dual = TrsDual { lambda: sol.value(lambda), gamma: sol.value(gamma) };

    let (vals, vecs) = q_z.eigen();
    let qmax = vals[n - 1];
    let mut e = DVector::zeros(n);
    for k in 0..n {
        let qk = vals[k].max(T::zero());
        let den = dual.lambda + qk;
        if den <= qmax * lit(1e-12) {
            continue;
        }
        let v = vecs.column(k).into_owned();
        let coef = g_e_est.apply(&v);
        e += v.map(|z| z.conj()) * coef * Complex::new(-qk / den, T::zero());
    }
    let recovered = ComplexVector::from_dvector(e)?;

    let value = |e: &ComplexVector<T>| q_z.quad_form(&g_e_est.add(e));
    let limit = eps_g * (T::one() + lit(1e-9));
    let mut best: Option<(ComplexVector<T>, T)> = None;
    let mut consider = |e: ComplexVector<T>| {
        if e.norm() > limit {
            return;
        }
        let v = value(&e);
        if best.as_ref().map(|(_, b)| v < *b).unwrap_or(true) {
            best = Some((e, v));
        }
    };
    let rn = recovered.norm();
    consider(if rn > eps_g { recovered.scale(eps_g / rn) } else { recovered });
    if let Some(e) = secular_min(q_z, g_e_est, eps_g) {
        consider(e);
    }
    let (e, _) = best.unwrap_or((ComplexVector::zeros(n), value(&ComplexVector::zeros(n))));
    Ok((e, Some(dual)))
}

/// Transmit covariance for fixed jamming `q_z` and jammer mismatch `e_g`,
/// evaluated at the joint worst case.
pub fn solve_qx_given_jamming<T: Real>(
    ch: &ChannelSet<T>,
    params: &SystemParams<T>,
    q_z: &HermitianMatrix<T>,
    e_g: &ComplexVector<T>,
    form: JammedRatioForm,
    settings: &RobustSettings<T>,
) -> SchemeResult<T> {
    let (na, nh) = (ch.n_a(), ch.n_h());
    if let Err(e) = params.validate().and_then(|_| ch.check(params)) {
        return SchemeResult::failure(Status::SolverFailure, na, nh, e.to_string());
    }
    let sigma_z = params.sigma_sq + q_z.quad_form(&ch.g_e_est.add(e_g)).max(T::zero());
    let sigma_b = params.sigma_sq + q_z.quad_form(&ch.g_b).max(T::zero());
    let (num_noise, den_noise) = match form {
        JammedRatioForm::Consistent => (sigma_z, sigma_b),
        JammedRatioForm::AsPrinted => (sigma_b, sigma_z),
    };
    let problem = RobustRatio { h_b: ch.h_b.clone(), h_e: ch.h_e_est.clone(), eps: params.eps_h(), power: params.p_s, num_noise, den_noise };
    let sol = match problem.solve(settings) {
        Ok(s) => s,
        Err(e) => return SchemeResult::failure(Status::SolverFailure, na, nh, e.to_string()),
    };
    let mut r = match evaluate_cj_worst_case(ch, params, sol.q, q_z.clone(), Some(e_g.clone()), &settings.solver) {
        Ok(r) => r,
        Err(e) => return SchemeResult::failure(Status::SolverFailure, na, nh, e.to_string()),
    };
    r.iterations = sol.iterations;
    r.trace = vec![sol.lower_init, sol.upper_init, sol.t];
    if sol.status == crate::conic::BisectStatus::MaxIter {
        r.status = Status::MaxIter;
    }
    r
}

/// Rate and SINRs of `(q_x, q_z)` at the separable worst case: Eve's signal
/// maximized over `e_h`, her jamming minimized over `e_g`.
pub fn evaluate_cj_worst_case<T: Real>(
    ch: &ChannelSet<T>,
    params: &SystemParams<T>,
    q_x: HermitianMatrix<T>,
    q_z: HermitianMatrix<T>,
    e_g: Option<ComplexVector<T>>,
    solver: &SolverSettings<T>,
) -> Result<SchemeResult<T>, CjError> {
    let e_g = match e_g {
        Some(e) => e,
        None => worst_mismatch_cj(&q_z, &ch.g_e_est, params.eps_g(), solver)?.0,
    };
    let (e_h, _) = worst_mismatch_dt(&q_x, &ch.h_e_est, params.eps_h(), solver)?;
    let mm = MismatchPair { e_h, e_g };
    let mut r = SchemeResult::empty(Status::Optimal, ch.n_a(), ch.n_h());
    r.secrecy_rate_bits = secrecy_rate_cj(ch, &q_x, &q_z, &mm, params.sigma_sq);
    r.eve_metric = eve_sinr(ch, &q_x, &q_z, &mm, params.sigma_sq);
    r.bob_metric = bob_sinr(ch, &q_x, &q_z, params.sigma_sq);
    r.worst_mismatch = mm;
    r.q_x = q_x;
    r.q_z = q_z;
    Ok(r)
}

/// Robust jamming, its worst mismatch, then the robust transmit covariance.
pub fn solve_robust_cj<T: Real>(ch: &ChannelSet<T>, params: &SystemParams<T>, form: JammedRatioForm, settings: &RobustSettings<T>) -> SchemeResult<T> {
    let (na, nh) = (ch.n_a(), ch.n_h());
    if let Err(e) = params.validate().and_then(|_| ch.check(params)) {
        return SchemeResult::failure(Status::SolverFailure, na, nh, e.to_string());
    }
    let jam = match solve_robust_jamming(ch, params, &settings.solver) {
        Ok(j) => j,
        Err(e) => return SchemeResult::failure(Status::SolverFailure, na, nh, e.to_string()),
    };
    let e_g = match worst_mismatch_cj(&jam.q_z, &ch.g_e_est, params.eps_g(), &settings.solver) {
        Ok((e, _)) => e,
        Err(e) => return SchemeResult::failure(Status::SolverFailure, na, nh, e.to_string()),
    };
    solve_qx_given_jamming(ch, params, &jam.q_z, &e_g, form, settings)
}

/// Null steering at full `P_J` toward the estimated `g̃_e`, plus the GEV
/// covariance for the resulting noise levels; evaluated at its worst case.
pub fn nonrobust_cj<T: Real>(ch: &ChannelSet<T>, params: &SystemParams<T>, solver: &SolverSettings<T>) -> SchemeResult<T> {
    let (na, nh) = (ch.n_a(), ch.n_h());
    let mut note = None;
    let q_z = match null_steering(&ch.g_b, &ch.g_e_est) {
        Ok(w) if params.p_j > T::zero() => w.column_outer().scale(params.p_j),
        Ok(_) => HermitianMatrix::zeros(nh),
        Err(e) => {
            note = Some(format!("jamming disabled: {e}"));
            HermitianMatrix::zeros(nh)
        }
    };
    let sigma_z = params.sigma_sq + q_z.quad_form(&ch.g_e_est).max(T::zero());
    let sigma_b = params.sigma_sq + q_z.quad_form(&ch.g_b).max(T::zero());
    let q_x = match gev_beamformer(&ch.h_b, &ch.h_e_est, params.p_s, sigma_b, sigma_z) {
        Ok(q) => q,
        Err(e) => return SchemeResult::failure(Status::SolverFailure, na, nh, e.to_string()),
    };
    match evaluate_cj_worst_case(ch, params, q_x, q_z, None, solver) {
        Ok(mut r) => {
            r.message = note;
            r
        }
        Err(e) => SchemeResult::failure(Status::SolverFailure, na, nh, e.to_string()),
    }
}
