//! MISO wiretap system model: parameters, channel draws, mismatch balls,
//! rate and SINR evaluation, and a sampling oracle for worst-case mismatches.

use nalgebra::{Complex, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use thiserror::Error;

use crate::linalg::{ComplexVector, HermitianMatrix, LinalgError};
use crate::scalar::{lit, Real};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("invalid parameter: {0}")]
    InvalidParams(String),
    #[error("channel dimension mismatch: {0}")]
    Dimension(String),
    #[error("sample count must be at least 1")]
    NoSamples,
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Antenna counts, noise power, mismatch radii and power budgets, all linear.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemParams<T: Real> {
    pub n_a: usize,
    pub n_h: usize,
    pub sigma_sq: T,
    pub eps_h_sq: T,
    pub eps_g_sq: T,
    pub p_s: T,
    pub p_j: T,
    pub p_total: T,
    pub gamma_t: T,
}

impl<T: Real> SystemParams<T> {
    /// Four antennas at both transmitters, unit noise, no mismatch, unit powers.
    pub fn new(n_a: usize, n_h: usize) -> Self {
        Self {
            n_a,
            n_h,
            sigma_sq: T::one(),
            eps_h_sq: T::zero(),
            eps_g_sq: T::zero(),
            p_s: T::one(),
            p_j: T::one(),
            p_total: lit(2.0),
            gamma_t: T::one(),
        }
    }

    pub fn eps_h(&self) -> T {
        self.eps_h_sq.max(T::zero()).sqrt()
    }

    pub fn eps_g(&self) -> T {
        self.eps_g_sq.max(T::zero()).sqrt()
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        if self.n_a < 1 || self.n_h < 1 {
            return Err(ModelError::InvalidParams("antenna counts must be at least 1".into()));
        }
        if !(self.sigma_sq > T::zero()) {
            return Err(ModelError::InvalidParams("noise power must be positive".into()));
        }
        let named = [
            ("eps_h_sq", self.eps_h_sq),
            ("eps_g_sq", self.eps_g_sq),
            ("p_s", self.p_s),
            ("p_j", self.p_j),
            ("p_total", self.p_total),
            ("gamma_t", self.gamma_t),
        ];
        for (name, v) in named {
            if !(v >= T::zero()) || !v.is_finite() {
                return Err(ModelError::InvalidParams(format!("{name} must be finite and nonnegative")));
            }
        }
        Ok(())
    }
}

/// Bob and (estimated) Eve channels of Alice and the Helper, as rows.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelSet<T: Real> {
    pub h_b: ComplexVector<T>,
    pub g_b: ComplexVector<T>,
    pub h_e_est: ComplexVector<T>,
    pub g_e_est: ComplexVector<T>,
}

impl<T: Real> ChannelSet<T> {
    pub fn new(h_b: ComplexVector<T>, g_b: ComplexVector<T>, h_e_est: ComplexVector<T>, g_e_est: ComplexVector<T>) -> Result<Self, ModelError> {
        if h_b.len() != h_e_est.len() {
            return Err(ModelError::Dimension(format!("h_b has {} entries, h_e {}", h_b.len(), h_e_est.len())));
        }
        if g_b.len() != g_e_est.len() {
            return Err(ModelError::Dimension(format!("g_b has {} entries, g_e {}", g_b.len(), g_e_est.len())));
        }
        Ok(Self { h_b, g_b, h_e_est, g_e_est })
    }

    pub fn n_a(&self) -> usize {
        self.h_b.len()
    }

    pub fn n_h(&self) -> usize {
        self.g_b.len()
    }

    pub fn check(&self, params: &SystemParams<T>) -> Result<(), ModelError> {
        if self.n_a() != params.n_a || self.n_h() != params.n_h {
            return Err(ModelError::Dimension(format!(
                "channels are {}x{}, parameters expect {}x{}",
                self.n_a(),
                self.n_h(),
                params.n_a,
                params.n_h
            )));
        }
        Ok(())
    }
}

/// Errors on Eve's channels, `‖e_h‖ ≤ ε_h`, `‖e_g‖ ≤ ε_g`.
#[derive(Debug, Clone, PartialEq)]
pub struct MismatchPair<T: Real> {
    pub e_h: ComplexVector<T>,
    pub e_g: ComplexVector<T>,
}

impl<T: Real> MismatchPair<T> {
    pub fn zero(n_a: usize, n_h: usize) -> Self {
        Self { e_h: ComplexVector::zeros(n_a), e_g: ComplexVector::zeros(n_h) }
    }

    pub fn within(&self, eps_h: T, eps_g: T, tol: T) -> bool {
        self.e_h.norm() <= eps_h + tol && self.e_g.norm() <= eps_g + tol
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Optimal,
    Outage,
    MaxIter,
    SolverFailure,
}

impl Status {
    pub fn as_str(&self) -> &'static str {
        match self {
            Status::Optimal => "optimal",
            Status::Outage => "outage",
            Status::MaxIter => "max_iter",
            Status::SolverFailure => "solver_failure",
        }
    }
}

/// Outcome of one transmission scheme on one channel draw.
#[derive(Debug, Clone)]
pub struct SchemeResult<T: Real> {
    pub status: Status,
    pub q_x: HermitianMatrix<T>,
    pub q_z: HermitianMatrix<T>,
    pub worst_mismatch: MismatchPair<T>,
    pub secrecy_rate_bits: T,
    /// Eve SNR (no jamming) or SINR, linear.
    pub eve_metric: T,
    pub bob_metric: T,
    pub iterations: usize,
    /// Bisection upper bounds or outer-loop rates, depending on the scheme.
    pub trace: Vec<T>,
    pub message: Option<String>,
}

impl<T: Real> SchemeResult<T> {
    pub fn empty(status: Status, n_a: usize, n_h: usize) -> Self {
        Self {
            status,
            q_x: HermitianMatrix::zeros(n_a),
            q_z: HermitianMatrix::zeros(n_h),
            worst_mismatch: MismatchPair::zero(n_a, n_h),
            secrecy_rate_bits: T::zero(),
            eve_metric: T::zero(),
            bob_metric: T::zero(),
            iterations: 0,
            trace: Vec::new(),
            message: None,
        }
    }

    pub fn failure(status: Status, n_a: usize, n_h: usize, message: impl Into<String>) -> Self {
        let mut r = Self::empty(status, n_a, n_h);
        r.message = Some(message.into());
        r
    }

    pub fn p1(&self) -> T {
        self.q_x.trace()
    }

    pub fn p2(&self) -> T {
        self.q_z.trace()
    }

    pub fn is_optimal(&self) -> bool {
        self.status == Status::Optimal
    }
}

fn complex_gaussian_vector<T: Real>(rng: &mut ChaCha8Rng, n: usize) -> ComplexVector<T> {
    let half = std::f64::consts::FRAC_1_SQRT_2;
    let entries = (0..n)
        .map(|_| {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            Complex::new(lit(re * half), lit(im * half))
        })
        .collect();
    ComplexVector::new(entries).expect("gaussian draws are finite")
}

/// i.i.d. circular complex Gaussian channels with unit per-entry variance.
/// Draw order: `h_b`, `g_b`, `h̃_e`, `g̃_e`.
pub fn sample_channels<T: Real>(params: &SystemParams<T>, seed: u64) -> ChannelSet<T> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let h_b = complex_gaussian_vector(&mut rng, params.n_a);
    let g_b = complex_gaussian_vector(&mut rng, params.n_h);
    let h_e_est = complex_gaussian_vector(&mut rng, params.n_a);
    let g_e_est = complex_gaussian_vector(&mut rng, params.n_h);
    ChannelSet { h_b, g_b, h_e_est, g_e_est }
}

fn log2_ratio<T: Real>(num: T, den: T) -> T {
    (num / den).ln() / lit::<T>(std::f64::consts::LN_2)
}

/// Direct-transmission secrecy rate in bits, clamped at zero.
pub fn secrecy_rate_dt<T: Real>(ch: &ChannelSet<T>, q_x: &HermitianMatrix<T>, e_h: &ComplexVector<T>, sigma_sq: T) -> T {
    let bob = q_x.quad_form(&ch.h_b);
    let eve = q_x.quad_form(&ch.h_e_est.add(e_h));
    let r = log2_ratio(sigma_sq + bob, sigma_sq) - log2_ratio(sigma_sq + eve, sigma_sq);
    r.max(T::zero())
}

/// Secrecy rate with a helper's jamming covariance `q_z`, clamped at zero.
pub fn secrecy_rate_cj<T: Real>(ch: &ChannelSet<T>, q_x: &HermitianMatrix<T>, q_z: &HermitianMatrix<T>, mm: &MismatchPair<T>, sigma_sq: T) -> T {
    let bob_noise = sigma_sq + q_z.quad_form(&ch.g_b);
    let eve_noise = sigma_sq + q_z.quad_form(&ch.g_e_est.add(&mm.e_g));
    let bob = q_x.quad_form(&ch.h_b);
    let eve = q_x.quad_form(&ch.h_e_est.add(&mm.e_h));
    let r = log2_ratio(bob_noise + bob, bob_noise) - log2_ratio(eve_noise + eve, eve_noise);
    r.max(T::zero())
}

/// Eve's SINR at mismatch `mm`; `q_z = 0` gives her SNR.
pub fn eve_sinr<T: Real>(ch: &ChannelSet<T>, q_x: &HermitianMatrix<T>, q_z: &HermitianMatrix<T>, mm: &MismatchPair<T>, sigma_sq: T) -> T {
    let sig = q_x.quad_form(&ch.h_e_est.add(&mm.e_h)).max(T::zero());
    let jam = q_z.quad_form(&ch.g_e_est.add(&mm.e_g)).max(T::zero());
    sig / (jam + sigma_sq)
}

/// Bob's SINR (his channels are known exactly).
pub fn bob_sinr<T: Real>(ch: &ChannelSet<T>, q_x: &HermitianMatrix<T>, q_z: &HermitianMatrix<T>, sigma_sq: T) -> T {
    let sig = q_x.quad_form(&ch.h_b).max(T::zero());
    let jam = q_z.quad_form(&ch.g_b).max(T::zero());
    sig / (jam + sigma_sq)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MismatchObjective {
    /// Largest `(c+e) Q (c+e)ᴴ`: Eve's strongest information leakage.
    MaximizeEve,
    /// Smallest `(c+e) Q (c+e)ᴴ`: the weakest jamming Eve can see.
    MinimizeJamming,
}

/// Brute-force extremizer of `(c+e) Q (c+e)ᴴ` over `‖e‖ ≤ radius`.
///
/// Samples the sphere uniformly and adds analytic candidates: `±radius·unit(cQ)`
/// and, for the minimization, the stationary points `−cQ(λI+Q)⁻¹` over a
/// log-spaced `λ` grid, pulled back into the ball.
pub fn worst_mismatch_sampled<T: Real>(
    objective: MismatchObjective,
    center: &ComplexVector<T>,
    radius: T,
    quad: &HermitianMatrix<T>,
    n_samples: usize,
    seed: u64,
) -> Result<(ComplexVector<T>, T), ModelError> {
    if n_samples < 1 {
        return Err(ModelError::NoSamples);
    }
    let n = center.len();
    let value = |e: &ComplexVector<T>| quad.quad_form(&center.add(e));
    let better = |a: T, b: T| match objective {
        MismatchObjective::MaximizeEve => a > b,
        MismatchObjective::MinimizeJamming => a < b,
    };
    let zero = ComplexVector::zeros(n);
    let mut best_e = zero.clone();
    let mut best_v = value(&zero);
    if radius <= T::zero() {
        return Ok((best_e, best_v));
    }
    let mut consider = |e: ComplexVector<T>| {
        let v = value(&e);
        if better(v, best_v) {
            best_v = v;
            best_e = e;
        }
    };
    let into_ball = |e: ComplexVector<T>| {
        let nrm = e.norm();
        if nrm > radius {
            e.scale(radius / nrm)
        } else {
            e
        }
    };

    let grad = center.mul_matrix(quad.as_matrix());
    if let Some(u) = grad.normalized() {
        consider(u.scale(radius));
        consider(u.scale(-radius));
    }
    if let Some(u) = center.normalized() {
        consider(u.scale(radius));
        consider(u.scale(-radius));
    }
    if objective == MismatchObjective::MinimizeJamming {
        consider(into_ball(center.scale(-T::one())));
        let (vals, vecs) = quad.eigen();
        for k in -12..=12 {
            let lam: T = lit(10f64.powf(k as f64 * 0.5));
            let mut e = DVector::zeros(n);
            for (j, &q) in vals.iter().enumerate() {
                let v = vecs.column(j);
                // coefficient of c along v, in row form: c·v
                let coef = center.apply(&v.into_owned());
                let w = q.max(T::zero()) / (lam + q.max(T::zero()));
                e += v.map(|z| z.conj()) * coef * Complex::new(-w, T::zero());
            }
            let e = ComplexVector::from_dvector(e)?;
            consider(into_ball(e.clone()));
            if let Some(u) = e.normalized() {
                consider(u.scale(radius));
            }
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..n_samples {
        let g: ComplexVector<T> = complex_gaussian_vector(&mut rng, n);
        if let Some(u) = g.normalized() {
            consider(u.scale(radius));
        }
    }
    Ok((best_e, best_v))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params() -> SystemParams<f64> {
        SystemParams::new(4, 4)
    }

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    #[test]
    fn sampling_is_deterministic_and_seed_dependent() {
        let a = sample_channels(&params(), 42);
        let b = sample_channels(&params(), 42);
        let d = sample_channels(&params(), 43);
        assert_eq!(a, b);
        assert_ne!(a, d);
    }

    #[test]
    fn unit_variance_entries() {
        let p = params();
        let (mut s, mut s2, mut count) = (0.0, 0.0, 0.0);
        for seed in 0..2500 {
            let ch = sample_channels(&p, seed);
            for z in ch.h_b.as_slice().iter().chain(ch.h_e_est.as_slice()) {
                s += z.norm_sqr();
                count += 1.0;
            }
            s2 += ch.g_b.as_slice()[0].norm_sqr();
        }
        let var = s / count;
        assert!((0.94..=1.06).contains(&var), "{var}");
        assert!((0.9..=1.1).contains(&(s2 / 2500.0)));
    }

    fn mrt(h: &ComplexVector<f64>, p: f64) -> HermitianMatrix<f64> {
        h.gram().scale(p / h.norm_sq())
    }

    #[test]
    fn dt_rate_cases() {
        let ch = sample_channels(&params(), 1);
        let zero = ComplexVector::zeros(4);
        assert_eq!(secrecy_rate_dt(&ch, &HermitianMatrix::zeros(4), &zero, 1.0), 0.0);
        let cancel = ch.h_e_est.scale(-1.0);
        let q = mrt(&ch.h_b, 3.0);
        let r = secrecy_rate_dt(&ch, &q, &cancel, 1.0);
        assert!((r - (1.0 + 3.0 * ch.h_b.norm_sq()).log2()).abs() < 1e-12);
    }

    #[test]
    fn rate_transcription() {
        // independent formula evaluation with plain complex arithmetic
        let ch = sample_channels(&params(), 9);
        let mm = MismatchPair {
            e_h: ComplexVector::new(vec![c(0.1, 0.2), c(-0.3, 0.0), c(0.0, 0.1), c(0.2, -0.2)]).unwrap(),
            e_g: ComplexVector::new(vec![c(0.0, 0.3), c(0.1, 0.0), c(-0.2, 0.1), c(0.0, 0.0)]).unwrap(),
        };
        let q_x = mrt(&ch.h_b, 2.0).add(&HermitianMatrix::identity(4).scale(0.1));
        let q_z = mrt(&ch.g_e_est, 1.5);
        let quad = |h: &[Complex<f64>], q: &HermitianMatrix<f64>| {
            let mut acc = c(0.0, 0.0);
            for i in 0..4 {
                for j in 0..4 {
                    acc += h[i] * q.as_matrix()[(i, j)] * h[j].conj();
                }
            }
            acc.re
        };
        let he: Vec<_> = ch.h_e_est.as_slice().iter().zip(mm.e_h.as_slice()).map(|(a, b)| a + b).collect();
        let ge: Vec<_> = ch.g_e_est.as_slice().iter().zip(mm.e_g.as_slice()).map(|(a, b)| a + b).collect();
        let bn = 1.0 + quad(ch.g_b.as_slice(), &q_z);
        let en = 1.0 + quad(&ge, &q_z);
        let expect = ((1.0 + quad(ch.h_b.as_slice(), &q_x) / bn).log2() - (1.0 + quad(&he, &q_x) / en).log2()).max(0.0);
        assert!((secrecy_rate_cj(&ch, &q_x, &q_z, &mm, 1.0) - expect).abs() < 1e-12);
        assert!((eve_sinr(&ch, &q_x, &q_z, &mm, 1.0) - quad(&he, &q_x) / en).abs() < 1e-12);
        assert!((bob_sinr(&ch, &q_x, &q_z, 1.0) - quad(ch.h_b.as_slice(), &q_x) / bn).abs() < 1e-12);
        // no jamming reduces to the direct rate
        let z = HermitianMatrix::zeros(4);
        assert!((secrecy_rate_cj(&ch, &q_x, &z, &mm, 1.0) - secrecy_rate_dt(&ch, &q_x, &mm.e_h, 1.0)).abs() < 1e-14);
    }

    #[test]
    fn sampled_oracle_cases() {
        let center = ComplexVector::<f64>::from_real(&[1.0, 2.0]).unwrap();
        let q = HermitianMatrix::identity(2);
        let (e, v) = worst_mismatch_sampled(MismatchObjective::MaximizeEve, &center, 0.0, &q, 10, 1).unwrap();
        assert_eq!(e.norm(), 0.0);
        assert!((v - 5.0).abs() < 1e-12);
        let (e, v) = worst_mismatch_sampled(MismatchObjective::MaximizeEve, &center, 0.5, &q, 10, 1).unwrap();
        assert!((v - (5f64.sqrt() + 0.5).powi(2)).abs() < 1e-10);
        assert!((e.norm() - 0.5).abs() < 1e-12);
        let (_, v) = worst_mismatch_sampled(MismatchObjective::MinimizeJamming, &center, 3.0, &q, 10, 1).unwrap();
        assert!(v.abs() < 1e-12);
        assert!(worst_mismatch_sampled(MismatchObjective::MaximizeEve, &center, 0.5, &q, 0, 1).is_err());
    }

    #[test]
    fn validate_rejects_bad_params() {
        let mut p = params();
        assert!(p.validate().is_ok());
        p.sigma_sq = 0.0;
        assert!(p.validate().is_err());
        let mut p = params();
        p.eps_h_sq = -1.0;
        assert!(p.validate().is_err());
    }
}
