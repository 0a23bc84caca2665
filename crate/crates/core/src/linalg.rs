//! Complex Hermitian linear algebra used by the solvers.
//!
//! Channel vectors are rows (`1 × N`), matching the signal model: the received
//! power of a covariance `Q` through channel `h` is `h Q hᴴ`. Internally a
//! [`ComplexVector`] stores the row entries as a column `DVector`.

use nalgebra::{Complex, ComplexField, DMatrix, DVector};
use thiserror::Error;

use crate::scalar::{lit, Real};

/// Maximum entrywise deviation from `A = Aᴴ` accepted by [`HermitianMatrix::new`].
pub const HERMITIAN_TOL: f64 = 1e-10;
/// Absolute tolerance on the smallest eigenvalue for positive semidefiniteness.
pub const PSD_TOL: f64 = 1e-8;
/// Default relative rank cut-off for [`pseudo_inverse`].
pub const RANK_TOL: f64 = 1e-9;
/// Smallest eigenvalue a pencil denominator must exceed.
pub const PD_TOL: f64 = 1e-10;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LinalgError {
    #[error("matrix is not Hermitian (max deviation {deviation:e})")]
    NotHermitian { deviation: f64 },
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("vector must have at least one entry")]
    Empty,
    #[error("non-finite entry")]
    NonFinite,
    #[error("zero vector has no projection")]
    ZeroVector,
    #[error("denominator matrix is not positive definite (min eigenvalue {min_eig:e})")]
    NotPositiveDefinite { min_eig: f64 },
}

/// Complex vector with row-vector semantics (channel `h`, mismatch `e`, beamformer `w`).
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexVector<T: Real>(DVector<Complex<T>>);

impl<T: Real> ComplexVector<T> {
    pub fn new(entries: Vec<Complex<T>>) -> Result<Self, LinalgError> {
        if entries.is_empty() {
            return Err(LinalgError::Empty);
        }
        if entries.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(LinalgError::NonFinite);
        }
        Ok(Self(DVector::from_vec(entries)))
    }

    pub fn from_dvector(v: DVector<Complex<T>>) -> Result<Self, LinalgError> {
        Self::new(v.as_slice().to_vec())
    }

    /// Real-valued vector, mostly for tests and examples.
    pub fn from_real(entries: &[f64]) -> Result<Self, LinalgError> {
        Self::new(entries.iter().map(|&x| Complex::new(lit(x), T::zero())).collect())
    }

    pub fn zeros(len: usize) -> Self {
        Self(DVector::zeros(len.max(1)))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn entries(&self) -> &DVector<Complex<T>> {
        &self.0
    }

    pub fn as_slice(&self) -> &[Complex<T>] {
        self.0.as_slice()
    }

    pub fn norm(&self) -> T {
        self.0.norm()
    }

    pub fn norm_sq(&self) -> T {
        self.0.norm_squared()
    }

    /// `vᴴ` as a column vector.
    pub fn adjoint_col(&self) -> DVector<Complex<T>> {
        self.0.conjugate()
    }

    /// `v·w` for a row `v` and column `w`.
    pub fn apply(&self, col: &DVector<Complex<T>>) -> Complex<T> {
        self.0.iter().zip(col.iter()).fold(Complex::new(T::zero(), T::zero()), |acc, (a, b)| acc + *a * *b)
    }

    pub fn add(&self, other: &Self) -> Self {
        Self(&self.0 + &other.0)
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self(&self.0 - &other.0)
    }

    pub fn scale(&self, s: T) -> Self {
        Self(self.0.map(|z| z * s))
    }

    pub fn rotate(&self, phase: T) -> Self {
        let rot = Complex::new(phase.cos(), phase.sin());
        Self(self.0.map(|z| z * rot))
    }

    /// `v / ‖v‖`; `None` for the zero vector.
    pub fn normalized(&self) -> Option<Self> {
        let n = self.norm();
        if n <= T::zero() {
            None
        } else {
            Some(self.scale(T::one() / n))
        }
    }

    /// Row-vector times matrix: `v M`.
    pub fn mul_matrix(&self, m: &DMatrix<Complex<T>>) -> Self {
        Self((m.transpose() * &self.0).into_owned())
    }

    /// `x xᴴ` where `x` is the stored entries read as a column (beamformers).
    pub fn column_outer(&self) -> HermitianMatrix<T> {
        HermitianMatrix::from_raw(&self.0 * self.0.adjoint())
    }

    /// The row `xᴴ` for a column `x` held in the stored entries.
    pub fn conj(&self) -> Self {
        Self(self.0.conjugate())
    }

    /// Outer product `vᴴ v` (Hermitian, rank one).
    pub fn gram(&self) -> HermitianMatrix<T> {
        let col = self.adjoint_col();
        HermitianMatrix::from_raw(&col * col.adjoint())
    }
}

/// Complex Hermitian matrix. The constructor symmetrizes after validating.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix<T: Real>(DMatrix<Complex<T>>);

impl<T: Real> HermitianMatrix<T> {
    pub fn new(m: DMatrix<Complex<T>>) -> Result<Self, LinalgError> {
        if m.nrows() != m.ncols() {
            return Err(LinalgError::NotSquare { rows: m.nrows(), cols: m.ncols() });
        }
        if m.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(LinalgError::NonFinite);
        }
        let deviation = hermitian_deviation(&m);
        if deviation > lit(HERMITIAN_TOL) {
            return Err(LinalgError::NotHermitian { deviation: crate::scalar::to_f64(deviation) });
        }
        Ok(Self::from_raw(m))
    }

    /// Symmetrizes without checking; used where Hermitian structure holds by construction.
    pub(crate) fn from_raw(m: DMatrix<Complex<T>>) -> Self {
        let half: T = lit(0.5);
        let sym = (&m + m.adjoint()).map(|z| z * half);
        Self(sym)
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let n = diag.len();
        let mut m = DMatrix::zeros(n, n);
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = Complex::new(lit(d), T::zero());
        }
        Self(m)
    }

    pub fn from_real(m: &DMatrix<f64>) -> Result<Self, LinalgError> {
        Self::new(m.map(|x| Complex::new(lit(x), T::zero())))
    }

    pub fn zeros(n: usize) -> Self {
        Self(DMatrix::zeros(n, n))
    }

    pub fn identity(n: usize) -> Self {
        Self(DMatrix::identity(n, n))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn as_matrix(&self) -> &DMatrix<Complex<T>> {
        &self.0
    }

    pub fn into_matrix(self) -> DMatrix<Complex<T>> {
        self.0
    }

    pub fn trace(&self) -> T {
        (0..self.dim()).fold(T::zero(), |acc, i| acc + self.0[(i, i)].re)
    }

    pub fn scale(&self, s: T) -> Self {
        Self(self.0.map(|z| z * s))
    }

    pub fn add(&self, other: &Self) -> Self {
        Self(&self.0 + &other.0)
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self(&self.0 - &other.0)
    }

    /// `h M hᴴ` for a row vector `h`.
    pub fn quad_form(&self, h: &ComplexVector<T>) -> T {
        let col = h.adjoint_col();
        col.dotc(&(&self.0 * &col)).re
    }

    /// `tr(M N)`, real for Hermitian arguments.
    pub fn trace_product(&self, other: &Self) -> T {
        let mut acc = T::zero();
        for i in 0..self.dim() {
            for j in 0..self.dim() {
                acc += (self.0[(i, j)] * other.0[(j, i)]).re;
            }
        }
        acc
    }

    /// Eigenvalues in ascending order with matching unit eigenvectors (columns).
    pub fn eigen(&self) -> (Vec<T>, DMatrix<Complex<T>>) {
        let n = self.dim();
        let eig = self.0.clone().symmetric_eigen();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].partial_cmp(&eig.eigenvalues[b]).unwrap_or(std::cmp::Ordering::Equal));
        let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
        let mut vectors = DMatrix::zeros(n, n);
        for (dst, &src) in order.iter().enumerate() {
            let v = fix_phase(eig.eigenvectors.column(src).into_owned());
            vectors.set_column(dst, &v);
        }
        (values, vectors)
    }

    pub fn eigenvalues(&self) -> Vec<T> {
        let mut v: Vec<T> = self.0.clone().symmetric_eigenvalues().iter().copied().collect();
        v.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
        v
    }

    pub fn min_eigenvalue(&self) -> T {
        self.eigenvalues().first().copied().unwrap_or_else(T::zero)
    }

    pub fn max_eigenvalue(&self) -> T {
        self.eigenvalues().last().copied().unwrap_or_else(T::zero)
    }

    /// Spectral norm (largest absolute eigenvalue).
    pub fn spectral_norm(&self) -> T {
        self.eigenvalues().iter().fold(T::zero(), |acc, x| acc.max(x.abs()))
    }

    /// Rebuilds the matrix from a spectral map `λ ↦ f(λ)`.
    pub fn spectral_map(&self, f: impl Fn(T) -> T) -> Self {
        let (values, vectors) = self.eigen();
        let n = self.dim();
        let mut out = DMatrix::zeros(n, n);
        for (k, &lam) in values.iter().enumerate() {
            let fl = f(lam);
            if fl == T::zero() {
                continue;
            }
            let v = vectors.column(k);
            out += (&v * v.adjoint()).map(|z| z * fl);
        }
        Self::from_raw(out)
    }

    /// Zeroes eigenvalues that fall within `[-tol, 0)`; larger violations are kept.
    pub fn clamp_psd(&self, tol: T) -> Self {
        if self.min_eigenvalue() >= T::zero() {
            return self.clone();
        }
        self.spectral_map(|l| if l < T::zero() && l >= -tol { T::zero() } else { l })
    }

    /// Top eigenvector, phase-normalized.
    pub fn principal_eigvec(&self) -> (T, ComplexVector<T>) {
        let (values, vectors) = self.eigen();
        let n = self.dim();
        let col = vectors.column(n - 1).into_owned();
        (values[n - 1], ComplexVector(col))
    }
}

fn hermitian_deviation<T: Real>(m: &DMatrix<Complex<T>>) -> T {
    let n = m.nrows();
    let mut dev = T::zero();
    for i in 0..n {
        for j in 0..n {
            let d = (m[(i, j)] - m[(j, i)].conj()).modulus();
            dev = dev.max(d);
        }
    }
    dev
}

/// Makes the first non-negligible entry real and positive.
pub fn fix_phase<T: Real>(mut v: DVector<Complex<T>>) -> DVector<Complex<T>> {
    let scale = v.iter().fold(T::zero(), |acc, z| acc.max(z.modulus()));
    let cut = scale * lit(1e-12);
    if let Some(z) = v.iter().find(|z| z.modulus() > cut).copied() {
        let r = z.modulus();
        let rot = Complex::new(z.re / r, -z.im / r);
        v.iter_mut().for_each(|x| *x *= rot);
    }
    v
}

/// Pair `(A, B)` for the generalized problem `A v = λ B v` with `B ≻ 0`.
#[derive(Debug, Clone)]
pub struct PencilPair<T: Real> {
    numerator: HermitianMatrix<T>,
    denominator: HermitianMatrix<T>,
}

impl<T: Real> PencilPair<T> {
    pub fn new(numerator: HermitianMatrix<T>, denominator: HermitianMatrix<T>) -> Result<Self, LinalgError> {
        if numerator.dim() != denominator.dim() {
            return Err(LinalgError::DimensionMismatch { expected: numerator.dim(), got: denominator.dim() });
        }
        let min_eig = denominator.min_eigenvalue();
        if min_eig <= lit(PD_TOL) {
            return Err(LinalgError::NotPositiveDefinite { min_eig: crate::scalar::to_f64(min_eig) });
        }
        Ok(Self { numerator, denominator })
    }

    pub fn numerator(&self) -> &HermitianMatrix<T> {
        &self.numerator
    }

    pub fn denominator(&self) -> &HermitianMatrix<T> {
        &self.denominator
    }
}

/// True iff the smallest eigenvalue is at least `-tol`.
pub fn psd_check<T: Real>(m: &HermitianMatrix<T>, tol: T) -> bool {
    m.min_eigenvalue() >= -tol
}

/// Moore–Penrose pseudo-inverse; eigenvalues with `|λ| ≤ rank_tol·|λ|max` count as zero.
pub fn pseudo_inverse<T: Real>(m: &HermitianMatrix<T>, rank_tol: T) -> HermitianMatrix<T> {
    let cut = m.spectral_norm() * rank_tol;
    if m.spectral_norm() == T::zero() {
        return HermitianMatrix::zeros(m.dim());
    }
    m.spectral_map(|l| if l.abs() <= cut { T::zero() } else { T::one() / l })
}

/// `I − vᴴ(v vᴴ)⁻¹ v`: orthogonal projector onto the complement of `span(vᴴ)`.
pub fn null_projector<T: Real>(v: &ComplexVector<T>) -> Result<HermitianMatrix<T>, LinalgError> {
    let nsq = v.norm_sq();
    if nsq <= T::zero() {
        return Err(LinalgError::ZeroVector);
    }
    let n = v.len();
    let col = v.adjoint_col();
    let p = (&col * col.adjoint()).map(|z| z / nsq);
    Ok(HermitianMatrix::from_raw(DMatrix::identity(n, n) - p))
}

/// Orthonormal basis (columns) of the null space of the row vector `v`, i.e. of
/// `{w : v w = 0}`. Has `len − 1` columns.
pub fn null_space_basis<T: Real>(v: &ComplexVector<T>) -> Result<DMatrix<Complex<T>>, LinalgError> {
    let proj = null_projector(v)?;
    let (values, vectors) = proj.eigen();
    let n = v.len();
    let keep: Vec<usize> = (0..n).filter(|&k| values[k] > lit(0.5)).collect();
    let mut basis = DMatrix::zeros(n, keep.len());
    for (dst, &src) in keep.iter().enumerate() {
        basis.set_column(dst, &vectors.column(src));
    }
    Ok(basis)
}

/// Largest generalized eigenvalue of the pencil and its unit eigenvector.
pub fn max_generalized_eigvec<T: Real>(p: &PencilPair<T>) -> Result<(T, ComplexVector<T>), LinalgError> {
    let b = p.denominator.as_matrix().clone();
    let chol = b.cholesky().ok_or(LinalgError::NotPositiveDefinite {
        min_eig: crate::scalar::to_f64(p.denominator.min_eigenvalue()),
    })?;
    let l = chol.l();
    let l_inv = l
        .clone()
        .try_inverse()
        .ok_or(LinalgError::NotPositiveDefinite { min_eig: 0.0 })?;
    let reduced = HermitianMatrix::from_raw(&l_inv * p.numerator.as_matrix() * l_inv.adjoint());
    let (lambda, u) = reduced.principal_eigvec();
    let v = l_inv.adjoint() * u.entries();
    let n = v.norm();
    let v = fix_phase(v.map(|z| z / n));
    Ok((lambda, ComplexVector(v)))
}

/// Real symmetric embedding `[[A, −B], [B, A]]` of `M = A + iB`.
pub fn complex_to_real_embed<T: Real>(m: &HermitianMatrix<T>) -> DMatrix<T> {
    embed_complex(m.as_matrix())
}

pub(crate) fn embed_complex<T: Real>(m: &DMatrix<Complex<T>>) -> DMatrix<T> {
    let (r, c) = m.shape();
    let mut out = DMatrix::zeros(2 * r, 2 * c);
    for i in 0..r {
        for j in 0..c {
            let z = m[(i, j)];
            out[(i, j)] = z.re;
            out[(i + r, j + c)] = z.re;
            out[(i, j + c)] = -z.im;
            out[(i + r, j)] = z.im;
        }
    }
    out
}

/// `λ₂/λ₁ ≤ tol` for a PSD matrix; false for the zero matrix.
pub fn is_rank_one<T: Real>(m: &HermitianMatrix<T>, tol: T) -> bool {
    let ev = m.eigenvalues();
    let n = ev.len();
    let top = ev[n - 1];
    if top <= T::zero() {
        return false;
    }
    if n == 1 {
        return true;
    }
    ev[n - 2].max(T::zero()) / top <= tol
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    fn lcg(seed: &mut u64) -> f64 {
        *seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        ((*seed >> 11) as f64) / ((1u64 << 53) as f64) - 0.5
    }

    fn random_hermitian(n: usize, seed: &mut u64) -> HermitianMatrix<f64> {
        let m = DMatrix::from_fn(n, n, |_, _| c(lcg(seed), lcg(seed)));
        HermitianMatrix::from_raw(&m + m.adjoint())
    }

    fn random_vector(n: usize, seed: &mut u64) -> ComplexVector<f64> {
        ComplexVector::new((0..n).map(|_| c(lcg(seed), lcg(seed))).collect()).unwrap()
    }

    #[test]
    fn psd_check_cases() {
        assert!(psd_check(&HermitianMatrix::<f64>::identity(3), 1e-8));
        assert!(!psd_check(&HermitianMatrix::<f64>::from_real_diagonal(&[1.0, -1.0]), 1e-8));
        let mut seed = 7;
        for _ in 0..20 {
            let v = DMatrix::from_fn(3, 4, |_, _| c(lcg(&mut seed), lcg(&mut seed)));
            let gram = HermitianMatrix::new(v.adjoint() * &v).unwrap();
            assert!(psd_check(&gram, 1e-8));
        }
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = DMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]);
        assert!(matches!(HermitianMatrix::new(m), Err(LinalgError::NotHermitian { .. })));
    }

    #[test]
    fn pseudo_inverse_cases() {
        let id = HermitianMatrix::<f64>::identity(3);
        let pinv = pseudo_inverse(&id, RANK_TOL);
        assert!((pinv.as_matrix() - id.as_matrix()).norm() < 1e-12);

        let d = HermitianMatrix::<f64>::from_real_diagonal(&[2.0, 0.0]);
        let pinv = pseudo_inverse(&d, RANK_TOL);
        let expect = HermitianMatrix::<f64>::from_real_diagonal(&[0.5, 0.0]);
        assert!((pinv.as_matrix() - expect.as_matrix()).norm() < 1e-12);

        let z = HermitianMatrix::<f64>::zeros(2);
        assert_eq!(pseudo_inverse(&z, RANK_TOL).as_matrix().norm(), 0.0);
    }

    #[test]
    fn pseudo_inverse_penrose_conditions() {
        let mut seed = 11;
        for _ in 0..50 {
            // rank-deficient: B Bᴴ with B 4x2, then shifted by an indefinite part
            let b = DMatrix::from_fn(4, 2, |_, _| c(lcg(&mut seed), lcg(&mut seed)));
            let sgn = DMatrix::from_diagonal(&DVector::from_vec(vec![c(1.0, 0.0), c(-1.0, 0.0)]));
            let m = HermitianMatrix::new(&b * sgn * b.adjoint()).unwrap();
            let p = pseudo_inverse(&m, RANK_TOL);
            let (a, x) = (m.as_matrix(), p.as_matrix());
            assert!((a * x * a - a).norm() < 1e-8);
            assert!((x * a * x - x).norm() < 1e-8);
            assert!(((a * x).adjoint() - a * x).norm() < 1e-8);
            assert!(((x * a).adjoint() - x * a).norm() < 1e-8);
        }
    }

    #[test]
    fn null_projector_cases() {
        let v = ComplexVector::<f64>::from_real(&[1.0, 0.0]).unwrap();
        let p = null_projector(&v).unwrap();
        let expect = HermitianMatrix::<f64>::from_real_diagonal(&[0.0, 1.0]);
        assert!((p.as_matrix() - expect.as_matrix()).norm() < 1e-14);

        let mut seed = 3;
        for _ in 0..20 {
            let v = random_vector(4, &mut seed);
            let p = null_projector(&v).unwrap();
            let pm = p.as_matrix();
            assert!((pm * pm - pm).norm() < 1e-10);
            assert!((pm * v.adjoint_col()).norm() < 1e-10);
        }
        assert_eq!(null_projector(&ComplexVector::<f64>::zeros(3)), Err(LinalgError::ZeroVector));
    }

    #[test]
    fn null_space_basis_is_orthonormal_and_annihilated() {
        let mut seed = 5;
        let v = random_vector(4, &mut seed);
        let u = null_space_basis(&v).unwrap();
        assert_eq!(u.ncols(), 3);
        assert!((u.adjoint() * &u - DMatrix::identity(3, 3)).norm() < 1e-10);
        for k in 0..3 {
            assert!(v.apply(&u.column(k).into_owned()).norm() < 1e-10);
        }
    }

    #[test]
    fn generalized_eigvec_cases() {
        let id = HermitianMatrix::<f64>::identity(2);
        let (l, v) = max_generalized_eigvec(&PencilPair::new(id.clone(), id.clone()).unwrap()).unwrap();
        assert!((l - 1.0).abs() < 1e-12);
        assert!((v.norm() - 1.0).abs() < 1e-12);

        let a = HermitianMatrix::<f64>::from_real_diagonal(&[3.0, 1.0]);
        let (l, v) = max_generalized_eigvec(&PencilPair::new(a, id).unwrap()).unwrap();
        assert!((l - 3.0).abs() < 1e-12);
        assert!((v.as_slice()[0] - c(1.0, 0.0)).norm() < 1e-12);
        assert!(v.as_slice()[1].norm() < 1e-12);

        let singular = HermitianMatrix::<f64>::from_real_diagonal(&[1.0, 0.0]);
        assert!(PencilPair::new(HermitianMatrix::identity(2), singular).is_err());
    }

    #[test]
    fn generalized_eigvec_matches_rayleigh_sampling() {
        let mut seed = 99;
        for _ in 0..5 {
            let a = random_hermitian(2, &mut seed);
            let r = DMatrix::from_fn(2, 2, |_, _| c(lcg(&mut seed), lcg(&mut seed)));
            let b = HermitianMatrix::new(&r * r.adjoint() + DMatrix::identity(2, 2).map(|z: Complex<f64>| z * 0.5)).unwrap();
            let (lam, v) = max_generalized_eigvec(&PencilPair::new(a.clone(), b.clone()).unwrap()).unwrap();
            let ratio = |w: &ComplexVector<f64>| a.quad_form(w) / b.quad_form(w);
            // quad_form uses rows; the eigvector is a column, so conjugate for the row form
            let row = ComplexVector::new(v.as_slice().iter().map(|z| z.conj()).collect()).unwrap();
            assert!((ratio(&row) - lam).abs() < 1e-9);
            let mut best = f64::NEG_INFINITY;
            for _ in 0..100_000 {
                let w = random_vector(2, &mut seed);
                best = best.max(ratio(&w));
            }
            assert!(best <= lam + 1e-9);
            assert!((lam - best) / lam.abs() < 1e-3, "lam {lam} best {best}");
        }
    }

    #[test]
    fn embedding_cases() {
        let m = HermitianMatrix::<f64>::from_real(&DMatrix::from_row_slice(2, 2, &[2.0, 1.0, 1.0, 3.0])).unwrap();
        let e = complex_to_real_embed(&m);
        let expect = DMatrix::from_row_slice(4, 4, &[2.0, 1.0, 0.0, 0.0, 1.0, 3.0, 0.0, 0.0, 0.0, 0.0, 2.0, 1.0, 0.0, 0.0, 1.0, 3.0]);
        assert_eq!(e, expect);

        let m = HermitianMatrix::new(DMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.0, 1.0), c(0.0, -1.0), c(1.0, 0.0)])).unwrap();
        let mut ev: Vec<f64> = complex_to_real_embed(&m).symmetric_eigenvalues().iter().copied().collect();
        ev.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for (got, want) in ev.iter().zip([0.0, 0.0, 2.0, 2.0]) {
            assert!((got - want).abs() < 1e-12);
        }
    }

    #[test]
    fn embedding_doubles_spectrum() {
        let mut seed = 21;
        for _ in 0..100 {
            let m = random_hermitian(4, &mut seed);
            let mut ev: Vec<f64> = complex_to_real_embed(&m).symmetric_eigenvalues().iter().copied().collect();
            ev.sort_by(|a, b| a.partial_cmp(b).unwrap());
            let base = m.eigenvalues();
            for (k, want) in base.iter().enumerate() {
                assert!((ev[2 * k] - want).abs() < 1e-9);
                assert!((ev[2 * k + 1] - want).abs() < 1e-9);
            }
            let embed_psd = ev[0] >= -1e-8;
            assert_eq!(embed_psd, psd_check(&m, 1e-8));
        }
    }

    #[test]
    fn rank_one_check() {
        let v = ComplexVector::<f64>::new(vec![c(1.0, 0.5), c(-0.3, 2.0)]).unwrap();
        assert!(is_rank_one(&v.gram(), 1e-9));
        assert!(!is_rank_one(&HermitianMatrix::<f64>::identity(2), 1e-6));
        assert!(!is_rank_one(&HermitianMatrix::<f64>::zeros(2), 1e-6));
    }

    #[test]
    fn eigvec_phase_convention() {
        let m = HermitianMatrix::new(DMatrix::from_row_slice(2, 2, &[c(2.0, 0.0), c(0.0, 1.0), c(0.0, -1.0), c(2.0, 0.0)])).unwrap();
        let (_, vecs) = m.eigen();
        for k in 0..2 {
            let first = vecs.column(k).iter().find(|z| z.norm() > 1e-12).copied().unwrap();
            assert!(first.im.abs() < 1e-14 && first.re > 0.0);
        }
    }

    #[test]
    fn works_in_single_precision() {
        let a = HermitianMatrix::<f32>::from_real_diagonal(&[3.0, 1.0]);
        let (l, _) = max_generalized_eigvec(&PencilPair::new(a, HermitianMatrix::identity(2)).unwrap()).unwrap();
        assert!((l - 3.0).abs() < 1e-5);
    }
}
