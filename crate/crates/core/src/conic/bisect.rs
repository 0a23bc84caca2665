//! Bisection on a monotone feasibility oracle.

use thiserror::Error;

use crate::scalar::{lit, to_f64, Real};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BisectionConfig<T: Real> {
    pub lower: T,
    pub upper: T,
    pub tolerance: T,
    pub max_iter: usize,
}

impl<T: Real> BisectionConfig<T> {
    pub fn new(lower: T, upper: T, tolerance: T, max_iter: usize) -> Result<Self, String> {
        let cfg = Self { lower, upper, tolerance, max_iter };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), String> {
        if !(self.lower < self.upper) {
            return Err(format!("lower bound {} is not below upper bound {}", self.lower, self.upper));
        }
        if !(self.tolerance > T::zero()) {
            return Err(format!("tolerance {} must be positive", self.tolerance));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BisectStatus {
    Converged,
    MaxIter,
}

#[derive(Debug, Clone)]
pub struct BisectionOutcome<T: Real, W> {
    /// Smallest value found feasible.
    pub value: T,
    pub witness: W,
    /// Final bracket `[lower, upper]`; `upper == value`.
    pub lower: T,
    pub upper: T,
    pub iterations: usize,
    pub status: BisectStatus,
    /// The initial lower bound was already feasible.
    pub lower_feasible: bool,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BisectError<E> {
    #[error("invalid bisection interval: {0}")]
    InvalidConfig(String),
    #[error("upper bound {upper:e} is infeasible")]
    UpperInfeasible { upper: f64 },
    #[error("oracle failed: {0}")]
    Oracle(E),
}

/// Finds the feasibility threshold of `oracle` in `[lower, upper]`.
///
/// The oracle returns `Some(witness)` when `t` is feasible. It is evaluated at
/// `upper` first (which must be feasible) and at `lower`; if `lower` is
/// feasible it is returned directly. Otherwise the loop halves `[l, u]` until
/// `u − l ≤ tolerance`, keeping `u` feasible.
pub fn bisect<T, W, E, F>(cfg: &BisectionConfig<T>, mut oracle: F) -> Result<BisectionOutcome<T, W>, BisectError<E>>
where
    T: Real,
    F: FnMut(T) -> Result<Option<W>, E>,
{
    cfg.validate().map_err(BisectError::InvalidConfig)?;
    let mut u = cfg.upper;
    let mut l = cfg.lower;
    let mut witness = match oracle(u).map_err(BisectError::Oracle)? {
        Some(w) => w,
        None => return Err(BisectError::UpperInfeasible { upper: to_f64(u) }),
    };
    if let Some(w) = oracle(l).map_err(BisectError::Oracle)? {
        return Ok(BisectionOutcome {
            value: l,
            witness: w,
            lower: l,
            upper: l,
            iterations: 0,
            status: BisectStatus::Converged,
            lower_feasible: true,
        });
    }
    let half: T = lit(0.5);
    let mut iterations = 0;
    while u - l > cfg.tolerance {
        if iterations >= cfg.max_iter {
            return Ok(BisectionOutcome { value: u, witness, lower: l, upper: u, iterations, status: BisectStatus::MaxIter, lower_feasible: false });
        }
        let t = (l + u) * half;
        iterations += 1;
        match oracle(t).map_err(BisectError::Oracle)? {
            Some(w) => {
                u = t;
                witness = w;
            }
            None => l = t,
        }
    }
    Ok(BisectionOutcome { value: u, witness, lower: l, upper: u, iterations, status: BisectStatus::Converged, lower_feasible: false })
}
