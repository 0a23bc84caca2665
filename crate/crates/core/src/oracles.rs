//! Brute-force references for tests and acceptance runs: a trust-region
//! solver for quadratic forms over a ball, covariance grids at dimension
//! ≤ 2 and an exhaustive power-split grid. None of these call the solvers
//! they are meant to check.

use nalgebra::{Complex, DMatrix, DVector};
use thiserror::Error;

use crate::linalg::{ComplexVector, HermitianMatrix};
use crate::model::MismatchObjective;
use crate::power::{ChannelConstants, PowerSplit};
use crate::scalar::{lit, Real};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("grid search supports dimension 1 or 2, got {0}")]
    Dimension(usize),
    #[error("resolution must be at least 2")]
    Resolution,
}

/// Root of a decreasing function on `(lo, hi)` with `f(lo) > 0 ≥ f(hi)`.
fn bisect_decreasing<T: Real>(f: impl Fn(T) -> T, mut lo: T, mut hi: T) -> T {
    for _ in 0..300 {
        let mid = (lo + hi) * lit(0.5);
        if f(mid) > T::zero() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (lo + hi) * lit(0.5)
}

/// Extremum of `(c+e)Q(c+e)ᴴ` over `‖e‖ ≤ radius`, reduced to the real problem
/// `Σ q_k(ρ_k ± β_k)²` over `‖β‖ ≤ radius` in the eigenbasis of `Q`.
pub fn trs_extremum<T: Real>(objective: MismatchObjective, center: &ComplexVector<T>, quad: &HermitianMatrix<T>, radius: T) -> (ComplexVector<T>, T) {
    let n = center.len();
    let (q, v) = quad.eigen();
    let q: Vec<T> = q.into_iter().map(|x| x.max(T::zero())).collect();
    let proj: Vec<Complex<T>> = (0..n).map(|k| center.apply(&v.column(k).into_owned())).collect();
    let rho: Vec<T> = proj.iter().map(|a| a.norm_sqr().sqrt()).collect();
    let unit: Vec<Complex<T>> = proj
        .iter()
        .zip(&rho)
        .map(|(a, &r)| if r > T::zero() { a / Complex::new(r, T::zero()) } else { Complex::new(T::one(), T::zero()) })
        .collect();
    let r2 = radius * radius;
    let qmax = q.iter().fold(T::zero(), |a, &b| a.max(b));
    let mut beta = vec![T::zero(); n];
    if radius > T::zero() && qmax > T::zero() {
        match objective {
            MismatchObjective::MaximizeEve => {
                let gap_tol = qmax * lit(1e-12);
                let top: Vec<usize> = (0..n).filter(|&k| qmax - q[k] <= gap_tol).collect();
                let top_mass = top.iter().fold(T::zero(), |a, &k| a + rho[k]);
                let norm_sq = |lam: T| (0..n).fold(T::zero(), |a, k| a + (rho[k] * q[k] / (lam - q[k])).powi(2));
                let hard = top_mass <= lit::<T>(1e-12) * (T::one() + center.norm());
                let rest: T = if hard { (0..n).filter(|k| !top.contains(k)).fold(T::zero(), |a, k| a + (rho[k] * q[k] / (qmax - q[k])).powi(2)) } else { T::zero() };
                if hard && rest <= r2 {
                    for k in 0..n {
                        if !top.contains(&k) {
                            beta[k] = rho[k] * q[k] / (qmax - q[k]);
                        }
                    }
                    beta[top[0]] = (r2 - rest).max(T::zero()).sqrt();
                } else {
                    let mut hi = qmax + qmax * (center.norm() + radius) / radius + T::one();
                    while norm_sq(hi) > r2 {
                        hi = qmax + (hi - qmax) * lit(2.0);
                    }
                    let lam = bisect_decreasing(|l| norm_sq(l) - r2, qmax, hi);
                    for k in 0..n {
                        beta[k] = rho[k] * q[k] / (lam - q[k]);
                    }
                }
            }
            MismatchObjective::MinimizeJamming => {
                let norm_sq = |lam: T| {
                    (0..n).fold(T::zero(), |a, k| if q[k] > T::zero() { a + (rho[k] * q[k] / (lam + q[k])).powi(2) } else { a })
                };
                let lam = if norm_sq(T::zero()) <= r2 {
                    T::zero()
                } else {
                    let mut hi = qmax;
                    while norm_sq(hi) > r2 {
                        hi = hi * lit(2.0);
                    }
                    bisect_decreasing(|l| norm_sq(l) - r2, T::zero(), hi)
                };
                for k in 0..n {
                    if q[k] > T::zero() {
                        beta[k] = -rho[k] * q[k] / (lam + q[k]);
                    }
                }
            }
        }
    }
    let mut e = DVector::<Complex<T>>::zeros(n);
    for k in 0..n {
        let b = unit[k] * Complex::new(beta[k], T::zero());
        e += v.column(k).map(|z| z.conj()) * b;
    }
    let value = (0..n).fold(T::zero(), |a, k| a + q[k] * (rho[k] + beta[k]).powi(2));
    (ComplexVector::from_dvector(e).expect("finite coefficients"), value)
}

/// Covariances reached by the grid: `Q = τ U diag(w, 1−w) Uᴴ` with
/// `U = [[cos θ, −e^{−iφ} sin θ], [e^{iφ} sin θ, cos θ]]`.
fn param_cov<T: Real>(dim: usize, tau: T, w: T, theta: T, phi: T) -> HermitianMatrix<T> {
    if dim == 1 {
        return HermitianMatrix::from_real_diagonal(&[crate::scalar::to_f64(tau)]);
    }
    let (c, s) = (theta.cos(), theta.sin());
    let ph = Complex::new(phi.cos(), phi.sin());
    let u = DMatrix::from_row_slice(2, 2, &[Complex::new(c, T::zero()), -ph.conj() * s, ph * s, Complex::new(c, T::zero())]);
    let d = DMatrix::from_diagonal(&DVector::from_vec(vec![Complex::new(tau * w, T::zero()), Complex::new(tau * (T::one() - w), T::zero())]));
    HermitianMatrix::new(&u * d * u.adjoint()).expect("unitary conjugation is hermitian")
}

/// Exhaustive maximization of `objective` over PSD `Q` with `tr Q ≤ power`
/// at dimension 1 or 2, followed by a shrinking local search around the best
/// grid point. `resolution` points per angle / weight / power axis.
pub fn grid_covariance_search<T: Real>(
    objective: &dyn Fn(&HermitianMatrix<T>) -> T,
    dimension: usize,
    power: T,
    resolution: usize,
) -> Result<(HermitianMatrix<T>, T), OracleError> {
    if dimension == 0 || dimension > 2 {
        return Err(OracleError::Dimension(dimension));
    }
    if resolution < 2 {
        return Err(OracleError::Resolution);
    }
    let r = resolution;
    let step = |k: usize, n: usize, span: T| span * lit::<T>(k as f64 / (n - 1) as f64);
    let half_pi = lit::<T>(std::f64::consts::FRAC_PI_2);
    let two_pi = lit::<T>(2.0 * std::f64::consts::PI);
    let mut best: (T, [T; 4]) = (objective(&HermitianMatrix::zeros(dimension)), [T::zero(); 4]);
    let angle_n = if dimension == 1 { 1 } else { r };
    for it in 1..r {
        let tau = step(it, r, power);
        for iw in 0..(if dimension == 1 { 1 } else { r }) {
            let w = if dimension == 1 { T::one() } else { step(iw, r, T::one()) };
            for ith in 0..angle_n {
                let th = if dimension == 1 { T::zero() } else { step(ith, r, half_pi) };
                for iph in 0..angle_n {
                    let ph = if dimension == 1 { T::zero() } else { two_pi * lit::<T>(iph as f64 / r as f64) };
                    let v = objective(&param_cov(dimension, tau, w, th, ph));
                    if v > best.0 {
                        best = (v, [tau, w, th, ph]);
                    }
                }
            }
        }
    }
    // coordinate pattern search with halving steps
    let mut steps = [power / lit(r as f64), lit::<T>(1.0 / r as f64), half_pi / lit(r as f64), two_pi / lit(r as f64)];
    let active = if dimension == 1 { 1 } else { 4 };
    for _ in 0..60 {
        let mut improved = false;
        for k in 0..active {
            for sign in [T::one(), -T::one()] {
                let mut x = best.1;
                x[k] += sign * steps[k];
                x[0] = x[0].max(T::zero()).min(power);
                x[1] = x[1].max(T::zero()).min(T::one());
                let v = objective(&param_cov(dimension, x[0], if dimension == 1 { T::one() } else { x[1] }, x[2], x[3]));
                if v > best.0 {
                    best = (v, x);
                    improved = true;
                }
            }
        }
        if !improved {
            for s in steps.iter_mut() {
                *s = *s * lit(0.5);
            }
        }
    }
    let x = best.1;
    let q = if best.0 == objective(&HermitianMatrix::zeros(dimension)) && x[0] == T::zero() {
        HermitianMatrix::zeros(dimension)
    } else {
        param_cov(dimension, x[0], if dimension == 1 { T::one() } else { x[1] }, x[2], x[3])
    };
    Ok((q, best.0))
}

fn grid_ratio<T: Real>(p1: T, p2: T, c: &ChannelConstants<T>, s2: T) -> T {
    let num = (s2 + p1 * c.c1) * (s2 + p2 * c.c3);
    let den = (s2 + p2 * c.c3 + p1 * c.c2) * s2;
    num / den
}

/// Exact argmax of the split ratio on the grid `pᵢ = P·k/(n−1)`,
/// `p₁ + p₂ ≤ P`; ties go to the smaller `p₂`.
pub fn power_grid_search<T: Real>(c: &ChannelConstants<T>, sigma_sq: T, budget: T, n: usize) -> PowerSplit<T> {
    let n = n.max(2);
    let h = budget / lit((n - 1) as f64);
    let mut best = (grid_ratio(T::zero(), T::zero(), c, sigma_sq), T::zero(), T::zero());
    for j in 0..n {
        for i in 0..(n - j) {
            let (p1, p2) = (h * lit(i as f64), h * lit(j as f64));
            let v = grid_ratio(p1, p2, c, sigma_sq);
            if v > best.0 {
                best = (v, p1, p2);
            }
        }
    }
    PowerSplit::new(best.1, best.2, budget)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::worst_mismatch_sampled;

    fn cv(v: &[(f64, f64)]) -> ComplexVector<f64> {
        ComplexVector::new(v.iter().map(|&(a, b)| Complex::new(a, b)).collect()).unwrap()
    }

    #[test]
    fn trs_matches_sampling() {
        let c = cv(&[(0.3, -0.1), (1.0, 0.4), (-0.5, 0.2)]);
        let g = cv(&[(0.2, 0.1), (0.0, 1.0), (0.7, 0.0)]);
        let q = g.gram().add(&HermitianMatrix::from_real_diagonal(&[0.5, 0.2, 0.0]));
        for obj in [MismatchObjective::MaximizeEve, MismatchObjective::MinimizeJamming] {
            for radius in [0.2, 0.8, 3.0] {
                let (e, v) = trs_extremum(obj, &c, &q, radius);
                assert!(e.norm() <= radius * (1.0 + 1e-9));
                assert!((q.quad_form(&c.add(&e)) - v).abs() < 1e-9);
                let (_, s) = worst_mismatch_sampled(obj, &c, radius, &q, 20_000, 4).unwrap();
                match obj {
                    MismatchObjective::MaximizeEve => assert!(v >= s - 1e-9),
                    MismatchObjective::MinimizeJamming => assert!(v <= s + 1e-9),
                }
            }
        }
    }

    #[test]
    fn trs_hard_case() {
        // center orthogonal to the top eigenvector
        let q = HermitianMatrix::<f64>::from_real_diagonal(&[1.0, 3.0]);
        let c = cv(&[(1.0, 0.0), (0.0, 0.0)]);
        let (e, v) = trs_extremum(MismatchObjective::MaximizeEve, &c, &q, 2.0);
        // β₁ = ρq/(3−q) = 0.5, top gets √(4 − 0.25)
        assert!((v - (1.5f64.powi(2) + 3.0 * 3.75)).abs() < 1e-9);
        assert!((e.norm() - 2.0).abs() < 1e-9);
    }

    #[test]
    fn grid_linear_objective() {
        let cmat = cv(&[(1.0, 0.5), (0.2, -0.3)]).gram().add(&HermitianMatrix::identity(2).scale(0.1));
        let obj = |q: &HermitianMatrix<f64>| q.trace_product(&cmat);
        let (_, v) = grid_covariance_search(&obj, 2, 3.0, 12).unwrap();
        assert!((v - 3.0 * cmat.max_eigenvalue()).abs() < 1e-6 * v);
        let zero = |_: &HermitianMatrix<f64>| 0.0;
        assert_eq!(grid_covariance_search(&zero, 2, 3.0, 4).unwrap().1, 0.0);
        assert!(grid_covariance_search(&zero, 3, 3.0, 4).is_err());
    }

    #[test]
    fn power_grid_cases() {
        let s = power_grid_search(&ChannelConstants { c1: 2.0, c2: 0.0, c3: 1.0 }, 1.0, 5.0, 101);
        assert_eq!((s.p1, s.p2), (5.0, 0.0));
        let s: PowerSplit<f64> = power_grid_search(&ChannelConstants { c1: 1.0, c2: 1.0, c3: 1.0 }, 1.0, 5.0, 101);
        assert!((s.p1 + s.p2 - 5.0).abs() < 1e-12);
    }
}
