//! Robust direct transmission: worst-case secrecy-rate maximization without
//! a helper, worst-case Eve mismatch recovery, and the non-robust
//! generalized-eigenvector beamformer.
//!
//! The design problem minimizes the worst-case ratio
//! `(a + max_e (h̃+e)Q(h̃+e)ᴴ) / (b + h_b Q h_bᴴ)` over `tr Q ≤ P`, `Q ⪰ 0`.
//! The inner maximum is replaced by the S-procedure: for `μ ≥ 0`,
//! `μ ε² + h̃Qh̃ᴴ + h̃Q(μI−Q)†Qh̃ᴴ` bounds it, with equality at the best `μ`.
//! Only the scalar `ψ ≥ h̃Q(μI−Q)†Qh̃ᴴ` enters the objective, so the LMI is
//! posed on `[[ψ, h̃Q], [Qh̃ᴴ, μI−Q]] ⪰ 0`.

use thiserror::Error;

use crate::conic::{self, AffineMatrix, AffineScalar, BisectError, BisectStatus, BisectionConfig, ConicProblem, Sign, SolverSettings};
use crate::linalg::{max_generalized_eigvec, pseudo_inverse, ComplexVector, HermitianMatrix, LinalgError, PencilPair, RANK_TOL};
use crate::model::{secrecy_rate_dt, ChannelSet, MismatchPair, ModelError, SchemeResult, Status, SystemParams};
use crate::scalar::{lit, Real};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DtError {
    #[error("conic solver failed: {0}")]
    Solver(String),
    #[error("bisection failed: {0}")]
    Bisection(String),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Bisection and solver settings shared by the robust designs.
#[derive(Debug, Clone)]
pub struct RobustSettings<T: Real> {
    /// Bisection tolerance relative to the initial lower bound.
    pub delta_rel: T,
    pub max_iter: usize,
    pub solver: SolverSettings<T>,
}

impl<T: Real> Default for RobustSettings<T> {
    fn default() -> Self {
        Self { delta_rel: lit(1e-4), max_iter: 60, solver: SolverSettings::default() }
    }
}

pub(crate) fn solver_error<T: Real>(sol: &conic::ConicSolution<T>) -> String {
    format!("{:?}: {}", sol.status, sol.message.clone().unwrap_or_default())
}

/// Worst-case ratio design problem over one transmit covariance.
#[derive(Debug, Clone)]
pub struct RobustRatio<T: Real> {
    pub h_b: ComplexVector<T>,
    pub h_e: ComplexVector<T>,
    pub eps: T,
    pub power: T,
    /// Constant in Eve's (numerator) term.
    pub num_noise: T,
    /// Constant in Bob's (denominator) term.
    pub den_noise: T,
}

#[derive(Debug, Clone)]
pub struct RatioWitness<T: Real> {
    pub q: HermitianMatrix<T>,
    pub mu: T,
    pub psi: T,
    /// Optimal `numerator − t·denominator` at the tested `t`.
    pub residual: T,
}

#[derive(Debug, Clone)]
pub struct RatioSolution<T: Real> {
    pub q: HermitianMatrix<T>,
    pub t: T,
    pub lower_init: T,
    pub upper_init: T,
    pub iterations: usize,
    pub status: BisectStatus,
    pub lower_feasible: bool,
    /// Times the initial upper bound had to be widened.
    pub upper_widenings: usize,
}

impl<T: Real> RobustRatio<T> {
    pub fn dt(ch: &ChannelSet<T>, params: &SystemParams<T>) -> Self {
        Self {
            h_b: ch.h_b.clone(),
            h_e: ch.h_e_est.clone(),
            eps: params.eps_h(),
            power: params.p_s,
            num_noise: params.sigma_sq,
            den_noise: params.sigma_sq,
        }
    }

    /// `a / (b + P‖h_b‖²)`: Eve's term is nonnegative and Bob's is at most `P‖h_b‖²`.
    pub fn lower_bound(&self) -> T {
        self.num_noise / (self.den_noise + self.power * self.h_b.norm_sq())
    }

    /// Objective at `μ₀ = P`, `Q₀ = (P/N)I`, `Ψ₀ = Q₀(μ₀I−Q₀)†Q₀`.
    pub fn upper_bound(&self) -> T {
        let n = self.h_b.len();
        let q0 = HermitianMatrix::identity(n).scale(self.power / lit(n as f64));
        let mu0 = self.power;
        let gap = HermitianMatrix::identity(n).scale(mu0).sub(&q0);
        let psi0 = HermitianMatrix::from_raw(q0.as_matrix() * pseudo_inverse(&gap, lit(RANK_TOL)).as_matrix() * q0.as_matrix());
        let num = self.num_noise + mu0 * self.eps * self.eps + q0.add(&psi0).quad_form(&self.h_e);
        let den = self.den_noise + q0.quad_form(&self.h_b);
        num / den
    }

    /// Minimizes `a + με² + h̃Qh̃ᴴ + ψ − t(b + h_bQh_bᴴ)`; `t` is feasible iff the
    /// optimum is nonpositive (up to a margin of `1e-9` of the problem scale).
    pub fn oracle(&self, t: T, solver: &SolverSettings<T>) -> Result<Option<RatioWitness<T>>, DtError> {
        let n = self.h_b.len();
        let mut p = ConicProblem::new();
        let q = p.hermitian("Q", n);
        p.add_le("power", q.expr().trace(), AffineScalar::constant(self.power));
        let bob = q.expr().quad_form(&self.h_b).add_const(self.den_noise);
        let mut num = q.expr().quad_form(&self.h_e).add_const(self.num_noise);
        let mut aux = None;
        if self.eps > T::zero() {
            let mu = p.scalar("mu", Sign::Nonneg);
            let psi = p.scalar("psi", Sign::Free);
            let lmi = AffineMatrix::block2(
                &AffineMatrix::from_scalar(&AffineScalar::var(psi)),
                &q.expr().row_times(&self.h_e),
                &AffineMatrix::scalar_identity(&AffineScalar::var(mu), n).sub(&q.expr()),
            )
            .expect("block shapes are consistent");
            p.add_lmi("s-procedure", lmi);
            num = num.add(&AffineScalar::var(mu).scale(self.eps * self.eps)).add(&AffineScalar::var(psi));
            aux = Some((mu, psi));
        }
        p.minimize(num.sub(&bob.scale(t)));
        let sol = conic::solve(&p, solver);
        if !sol.is_usable() {
            return Err(DtError::Solver(solver_error(&sol)));
        }
        let margin = lit::<T>(1e-9) * (self.num_noise + t * self.den_noise).max(T::one());
        if sol.objective_value > margin {
            return Ok(None);
        }
        let (mu, psi) = aux.map(|(m, s)| (sol.value(m), sol.value(s))).unwrap_or((T::zero(), T::zero()));
        Ok(Some(RatioWitness { q: sol.matrix(&q).clamp_psd(lit(1e-8)), mu, psi, residual: sol.objective_value }))
    }

    pub fn solve(&self, settings: &RobustSettings<T>) -> Result<RatioSolution<T>, DtError> {
        let n = self.h_b.len();
        if self.power <= T::zero() {
            return Ok(RatioSolution {
                q: HermitianMatrix::zeros(n),
                t: self.num_noise / self.den_noise,
                lower_init: self.num_noise / self.den_noise,
                upper_init: self.num_noise / self.den_noise,
                iterations: 0,
                status: BisectStatus::Converged,
                lower_feasible: true,
                upper_widenings: 0,
            });
        }
        let l = self.lower_bound();
        let mut u = self.upper_bound().max(l * lit(1.0 + 1e-6));
        let delta = settings.delta_rel * l;
        let mut widenings = 0;
        loop {
            let cfg = BisectionConfig { lower: l, upper: u, tolerance: delta, max_iter: settings.max_iter };
            match conic::bisect(&cfg, |t| self.oracle(t, &settings.solver)) {
                Ok(out) => {
                    return Ok(RatioSolution {
                        q: out.witness.q,
                        t: out.value,
                        lower_init: l,
                        upper_init: u,
                        iterations: out.iterations,
                        status: out.status,
                        lower_feasible: out.lower_feasible,
                        upper_widenings: widenings,
                    })
                }
                Err(BisectError::UpperInfeasible { .. }) if widenings < 20 => {
                    log::debug!("upper bound {} infeasible, widening", u);
                    u = l + (u - l) * lit(2.0);
                    widenings += 1;
                }
                Err(BisectError::Oracle(e)) => return Err(e),
                Err(e) => return Err(DtError::Bisection(e.to_string())),
            }
        }
    }
}

/// Dual multipliers of a worst-case mismatch problem; `gamma` is the optimal
/// quadratic value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrsDual<T: Real> {
    pub lambda: T,
    pub gamma: T,
}

/// Ball maximizer of `(c+e)Q(c+e)ᴴ` along the secular curve
/// `e(λ) = cQ(λI−Q)⁻¹`, `λ > λ_max(Q)`, with `‖e(λ)‖ = ε`. `None` in the hard case.
fn secular_max<T: Real>(q: &HermitianMatrix<T>, c: &ComplexVector<T>, eps: T) -> Option<ComplexVector<T>> {
    let (vals, vecs) = q.eigen();
    let n = vals.len();
    let qmax = vals[n - 1];
    if qmax <= T::zero() {
        return None;
    }
    let coef: Vec<_> = (0..n).map(|k| c.apply(&vecs.column(k).into_owned())).collect();
    let norm_sq = |lam: T| {
        (0..n).fold(T::zero(), |acc, k| {
            let d = lam - vals[k];
            acc + coef[k].norm_sqr() * vals[k] * vals[k] / (d * d)
        })
    };
    let mut lo = qmax * (T::one() + lit(1e-14));
    if norm_sq(lo) < eps * eps {
        return None;
    }
    let mut hi = qmax + (c.norm() * qmax / eps).max(lit(1e-12)) * lit(2.0);
    while norm_sq(hi) > eps * eps {
        hi = qmax + (hi - qmax) * lit(2.0);
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
    let lam = (lo + hi) * lit(0.5);
    let mut e = nalgebra::DVector::zeros(n);
    for k in 0..n {
        let w = vals[k] / (lam - vals[k]);
        let v = vecs.column(k);
        e += v.map(|z| z.conj()) * coef[k] * nalgebra::Complex::new(w, T::zero());
    }
    ComplexVector::from_dvector(e).ok()
}

/// Worst-case (Eve-maximizing) mismatch `e* = h̃Q(λI−Q)†` with `λ` from the
/// dual SDP `min γ s.t. [[λI−Q, −Qh̃ᴴ], [−h̃Q, γ−h̃Qh̃ᴴ−λε²]] ⪰ 0, λ ≥ 0`.
///
/// Interior recoveries are pushed to the sphere along their direction, along
/// the top eigenvector of `Q`, and along the secular curve; the best
/// candidate in the ball is returned.
pub fn worst_mismatch_dt<T: Real>(
    q_x: &HermitianMatrix<T>,
    h_e_est: &ComplexVector<T>,
    eps_h: T,
    solver: &SolverSettings<T>,
) -> Result<(ComplexVector<T>, Option<TrsDual<T>>), DtError> {
    let n = h_e_est.len();
    let zero = ComplexVector::zeros(n);
    if eps_h <= T::zero() || q_x.max_eigenvalue() <= T::zero() {
        return Ok((zero, None));
    }
    let mut p = ConicProblem::new();
    let lambda = p.scalar("lambda", Sign::Nonneg);
    let gamma = p.scalar("gamma", Sign::Free);
    let top = AffineMatrix::scalar_identity(&AffineScalar::var(lambda), n).sub(&AffineMatrix::hermitian(q_x));
    let qh = q_x.as_matrix() * h_e_est.adjoint_col();
    let off = AffineMatrix::constant(-nalgebra::DMatrix::from_column_slice(n, 1, qh.as_slice()));
    let corner = AffineScalar::var(gamma)
        .sub(&AffineScalar::var(lambda).scale(eps_h * eps_h))
        .add_const(-q_x.quad_form(h_e_est));
    let lmi = AffineMatrix::block2(&top, &off, &AffineMatrix::from_scalar(&corner)).expect("block shapes are consistent");
    p.add_lmi("trs-dual", lmi);
    p.minimize(AffineScalar::var(gamma));
    let sol = conic::solve(&p, solver);
    if !sol.is_usable() {
        return Err(DtError::Solver(solver_error(&sol)));
    }
    let dual = TrsDual { lambda: sol.value(lambda), gamma: sol.value(gamma) };

    let value = |e: &ComplexVector<T>| q_x.quad_form(&h_e_est.add(e));
    let limit = eps_h * (T::one() + lit(1e-9));
    let mut best: Option<(ComplexVector<T>, T)> = None;
    let mut consider = |e: ComplexVector<T>| {
        if e.norm() > limit {
            return;
        }
        let v = value(&e);
        if best.as_ref().map(|(_, b)| v > *b).unwrap_or(true) {
            best = Some((e, v));
        }
    };
    let shifted = HermitianMatrix::identity(n).scale(dual.lambda).sub(q_x);
    let recovered = h_e_est.mul_matrix(&(q_x.as_matrix() * pseudo_inverse(&shifted, lit(RANK_TOL)).as_matrix()));
    let rn = recovered.norm();
    if rn > eps_h {
        consider(recovered.scale(eps_h / rn));
    } else {
        consider(recovered.clone());
        if rn < eps_h - lit(1e-6) {
            if let Some(u) = recovered.normalized() {
                consider(u.scale(eps_h));
            }
            // complete to the sphere along the top eigenvector, phase-aligned
            let (_, v) = q_x.principal_eigvec();
            let v_row = v.conj();
            let tau = (eps_h * eps_h - rn * rn).max(T::zero()).sqrt();
            let base = h_e_est.add(&recovered);
            let z = base.apply(&(q_x.as_matrix() * v.entries()));
            let phase = if z.norm_sqr() > T::zero() { z / nalgebra::Complex::new(z.norm_sqr().sqrt(), T::zero()) } else { nalgebra::Complex::new(T::one(), T::zero()) };
            let dir = ComplexVector::from_dvector(v_row.entries().map(|x| x * phase))?;
            let cand = recovered.add(&dir.scale(tau));
            let cn = cand.norm();
            if cn > T::zero() {
                consider(cand.scale(eps_h / cn));
            }
        }
    }
    if let Some(e) = secular_max(q_x, h_e_est, eps_h) {
        consider(e);
    }
    let (e, _) = best.unwrap_or((zero, value(&ComplexVector::zeros(n))));
    Ok((e, Some(dual)))
}

/// Largest Eve power `max_{‖e‖≤ε} (h̃+e)Q(h̃+e)ᴴ` and its maximizer.
pub fn worst_eve_power<T: Real>(q_x: &HermitianMatrix<T>, h_e_est: &ComplexVector<T>, eps_h: T, solver: &SolverSettings<T>) -> Result<(ComplexVector<T>, T), DtError> {
    let (e, _) = worst_mismatch_dt(q_x, h_e_est, eps_h, solver)?;
    let v = q_x.quad_form(&h_e_est.add(&e));
    Ok((e, v))
}

/// Fills rate and metrics of a direct-transmission covariance at its worst mismatch.
pub fn evaluate_dt_worst_case<T: Real>(ch: &ChannelSet<T>, params: &SystemParams<T>, q_x: HermitianMatrix<T>, solver: &SolverSettings<T>) -> Result<SchemeResult<T>, DtError> {
    let (e_h, eve) = worst_eve_power(&q_x, &ch.h_e_est, params.eps_h(), solver)?;
    let mut r = SchemeResult::empty(Status::Optimal, ch.n_a(), ch.n_h());
    r.secrecy_rate_bits = secrecy_rate_dt(ch, &q_x, &e_h, params.sigma_sq);
    r.eve_metric = eve.max(T::zero()) / params.sigma_sq;
    r.bob_metric = q_x.quad_form(&ch.h_b).max(T::zero()) / params.sigma_sq;
    r.worst_mismatch = MismatchPair { e_h, e_g: ComplexVector::zeros(ch.n_h()) };
    r.q_x = q_x;
    Ok(r)
}

/// Robust direct transmission by bisection on the worst-case ratio.
pub fn solve_robust_dt<T: Real>(ch: &ChannelSet<T>, params: &SystemParams<T>, settings: &RobustSettings<T>) -> SchemeResult<T> {
    let (na, nh) = (ch.n_a(), ch.n_h());
    if let Err(e) = params.validate().and_then(|_| ch.check(params)) {
        return SchemeResult::failure(Status::SolverFailure, na, nh, e.to_string());
    }
    let problem = RobustRatio::dt(ch, params);
    let sol = match problem.solve(settings) {
        Ok(s) => s,
        Err(e) => return SchemeResult::failure(Status::SolverFailure, na, nh, e.to_string()),
    };
    match evaluate_dt_worst_case(ch, params, sol.q, &settings.solver) {
        Ok(mut r) => {
            r.iterations = sol.iterations;
            r.trace = vec![sol.lower_init, sol.upper_init, sol.t];
            if sol.status == BisectStatus::MaxIter {
                r.status = Status::MaxIter;
            }
            if sol.upper_widenings > 0 {
                r.message = Some(format!("initial upper bound widened {} times", sol.upper_widenings));
            }
            r
        }
        Err(e) => SchemeResult::failure(Status::SolverFailure, na, nh, e.to_string()),
    }
}

/// Reported rate `log₂(1/t*)` from the bisection value of the DT ratio.
pub fn rate_from_ratio<T: Real>(t: T) -> T {
    (-(t.ln()) / lit::<T>(std::f64::consts::LN_2)).max(T::zero())
}

/// Rank-one beamformer on the top generalized eigenvector of
/// `(σ²I + P h_bᴴh_b, σ_e²I + P h_eᴴh_e)` with `h_e = h̃_e + e_h`.
pub fn gev_beamformer<T: Real>(h_b: &ComplexVector<T>, h_e: &ComplexVector<T>, power: T, sigma_b: T, sigma_e: T) -> Result<HermitianMatrix<T>, DtError> {
    let n = h_b.len();
    let a = HermitianMatrix::identity(n).scale(sigma_b).add(&h_b.gram().scale(power));
    let b = HermitianMatrix::identity(n).scale(sigma_e).add(&h_e.gram().scale(power));
    let (_, w) = max_generalized_eigvec(&PencilPair::new(a, b)?)?;
    Ok(w.column_outer().scale(power))
}

/// Non-robust GEV design against `h̃_e + e_h`; rate reported at that channel.
pub fn gev_beamformer_dt<T: Real>(ch: &ChannelSet<T>, params: &SystemParams<T>, e_h: &ComplexVector<T>) -> SchemeResult<T> {
    let (na, nh) = (ch.n_a(), ch.n_h());
    let h_e = ch.h_e_est.add(e_h);
    match gev_beamformer(&ch.h_b, &h_e, params.p_s, params.sigma_sq, params.sigma_sq) {
        Ok(q) => {
            let mut r = SchemeResult::empty(Status::Optimal, na, nh);
            r.secrecy_rate_bits = secrecy_rate_dt(ch, &q, e_h, params.sigma_sq);
            r.eve_metric = q.quad_form(&h_e) / params.sigma_sq;
            r.bob_metric = q.quad_form(&ch.h_b) / params.sigma_sq;
            r.worst_mismatch = MismatchPair { e_h: e_h.clone(), e_g: ComplexVector::zeros(nh) };
            r.q_x = q;
            r
        }
        Err(e) => SchemeResult::failure(Status::SolverFailure, na, nh, e.to_string()),
    }
}

/// GEV designed on the estimate, evaluated at its own worst-case mismatch.
pub fn nonrobust_dt_worst_case<T: Real>(ch: &ChannelSet<T>, params: &SystemParams<T>, solver: &SolverSettings<T>) -> SchemeResult<T> {
    let design = gev_beamformer_dt(ch, params, &ComplexVector::zeros(ch.n_a()));
    if design.status != Status::Optimal {
        return design;
    }
    evaluate_dt_worst_case(ch, params, design.q_x, solver).unwrap_or_else(|e| SchemeResult::failure(Status::SolverFailure, ch.n_a(), ch.n_h(), e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::sample_channels;

    fn params(eps_sq: f64, p: f64) -> SystemParams<f64> {
        let mut s = SystemParams::new(4, 4);
        s.eps_h_sq = eps_sq;
        s.eps_g_sq = eps_sq;
        s.p_s = p;
        s.p_j = p;
        s
    }

    #[test]
    fn zero_mismatch_matches_gev() {
        let p = params(0.0, 10f64.powf(0.5));
        for seed in 0..5 {
            let ch = sample_channels(&p, seed);
            let robust = solve_robust_dt(&ch, &p, &RobustSettings::default());
            assert_eq!(robust.status, Status::Optimal, "{:?}", robust.message);
            let gev = gev_beamformer_dt(&ch, &p, &ComplexVector::zeros(4));
            assert!((robust.secrecy_rate_bits - gev.secrecy_rate_bits).abs() < 1e-3, "{} vs {}", robust.secrecy_rate_bits, gev.secrecy_rate_bits);
        }
    }

    #[test]
    fn no_eavesdropper_gives_mrt() {
        let p = params(0.0, 3.0);
        let mut ch = sample_channels(&p, 3);
        ch.h_e_est = ComplexVector::zeros(4);
        let r = solve_robust_dt(&ch, &p, &RobustSettings::default());
        let expect = (1.0 + 3.0 * ch.h_b.norm_sq()).log2();
        assert!((r.secrecy_rate_bits - expect).abs() < 1e-6);
        let mrt = ch.h_b.gram().scale(3.0 / ch.h_b.norm_sq());
        assert!((r.q_x.as_matrix() - mrt.as_matrix()).norm() < 1e-4);
    }

    #[test]
    fn robust_rate_monotone_in_mismatch() {
        let sets = RobustSettings::default();
        for seed in 0..4 {
            let mut prev = f64::INFINITY;
            for eps in [0.0, 0.5, 1.0, 1.5] {
                let p = params(eps, 3.0);
                let ch = sample_channels(&p, 100 + seed);
                let r = solve_robust_dt(&ch, &p, &sets);
                assert!(r.secrecy_rate_bits <= prev + 1e-3);
                prev = r.secrecy_rate_bits;
            }
        }
    }

    #[test]
    fn robust_beats_nonrobust() {
        let sets = RobustSettings::default();
        for seed in 0..5 {
            let p = params(1.5, 5.0);
            let ch = sample_channels(&p, 200 + seed);
            let r = solve_robust_dt(&ch, &p, &sets);
            let nr = nonrobust_dt_worst_case(&ch, &p, &sets.solver);
            assert!(r.secrecy_rate_bits >= nr.secrecy_rate_bits - 1e-3);
        }
    }

    #[test]
    fn isotropic_worst_mismatch_is_aligned() {
        let h = ComplexVector::<f64>::new(vec![nalgebra::Complex::new(1.0, 0.5), nalgebra::Complex::new(-0.2, 0.3)]).unwrap();
        let q = HermitianMatrix::identity(2).scale(2.0);
        let (e, dual) = worst_mismatch_dt(&q, &h, 0.7, &SolverSettings::default()).unwrap();
        let expect = h.normalized().unwrap().scale(0.7);
        assert!(e.sub(&expect).norm() < 1e-6);
        let dual = dual.unwrap();
        assert!((dual.gamma - 2.0 * (h.norm() + 0.7).powi(2)).abs() < 1e-6);
        let (e0, d0) = worst_mismatch_dt(&q, &h, 0.0, &SolverSettings::default()).unwrap();
        assert_eq!(e0.norm(), 0.0);
        assert!(d0.is_none());
    }

    #[test]
    fn gev_without_eve_is_mrt() {
        let p = params(0.0, 2.0);
        let mut ch = sample_channels(&p, 8);
        ch.h_e_est = ComplexVector::zeros(4);
        let r = gev_beamformer_dt(&ch, &p, &ComplexVector::zeros(4));
        let mrt = ch.h_b.gram().scale(2.0 / ch.h_b.norm_sq());
        assert!((r.q_x.as_matrix() - mrt.as_matrix()).norm() < 1e-9);
    }

    #[test]
    fn gev_identical_channels_rate_zero() {
        let p = params(0.0, 2.0);
        let mut ch = sample_channels(&p, 8);
        ch.h_e_est = ch.h_b.clone();
        let r = gev_beamformer_dt(&ch, &p, &ComplexVector::zeros(4));
        assert!(r.secrecy_rate_bits.abs() < 1e-12);
    }

    #[test]
    fn single_antenna_widening() {
        let mut p = SystemParams::<f64>::new(1, 1);
        p.eps_h_sq = 0.3;
        p.p_s = 4.0;
        let ch = sample_channels(&p, 5);
        let r = solve_robust_dt(&ch, &p, &RobustSettings::default());
        assert_eq!(r.status, Status::Optimal, "{:?}", r.message);
        // scalar case: rate at full power or zero, worst Eve gain (|h̃|+ε)²
        let eve = (ch.h_e_est.norm() + 0.3f64.sqrt()).powi(2);
        let expect = ((1.0 + 4.0 * ch.h_b.norm_sq()) / (1.0 + 4.0 * eve)).log2().max(0.0);
        assert!((r.secrecy_rate_bits - expect).abs() < 1e-3, "{} vs {}", r.secrecy_rate_bits, expect);
    }
}
