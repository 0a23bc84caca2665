//! Modeling layer for the linear SDPs used throughout the crate.
//!
//! A [`ConicProblem`] collects real scalar variables, Hermitian matrix
//! variables (optionally restricted to a subspace), affine LMIs and affine
//! inequalities. [`solve`] lowers it to the real block-diagonal form of
//! [`ipm`] through the embedding `A + iB ↦ [[A, −B], [B, A]]`.

pub mod bisect;
pub mod ipm;
pub mod sdpa;

use std::collections::BTreeMap;

use nalgebra::{Complex, ComplexField, DMatrix, DVector};
use thiserror::Error;

use crate::linalg::{ComplexVector, HermitianMatrix};
use crate::scalar::{lit, to_f64, Real};

pub use bisect::{bisect, BisectError, BisectStatus, BisectionConfig, BisectionOutcome};
pub use ipm::IpmSettings;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConicError {
    #[error("constraint `{name}` is not Hermitian (deviation {deviation:e})")]
    NotHermitian { name: String, deviation: f64 },
    #[error("constraint `{name}` has shape {rows}x{cols}; expected a square block")]
    NotSquare { name: String, rows: usize, cols: usize },
    #[error("block shapes do not line up in `{name}`")]
    BlockShape { name: String },
    #[error("objective has a non-real or unknown term")]
    BadObjective,
}

/// Sign restriction of a scalar variable.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Free,
    Nonneg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Minimize,
    Maximize,
    Feasibility,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ScalarVar {
    index: usize,
}

impl ScalarVar {
    pub fn index(&self) -> usize {
        self.index
    }
}

/// Handle to a matrix variable; carries its affine parameterization.
#[derive(Debug, Clone)]
pub struct MatrixVar<T: Real> {
    id: usize,
    dim: usize,
    expr: AffineMatrix<T>,
}

impl<T: Real> MatrixVar<T> {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn id(&self) -> usize {
        self.id
    }

    /// The variable as an affine matrix expression in the ambient space.
    pub fn expr(&self) -> AffineMatrix<T> {
        self.expr.clone()
    }
}

/// `constant + Σ coeff · y[index]`.
#[derive(Debug, Clone, PartialEq)]
pub struct AffineScalar<T: Real> {
    pub constant: T,
    pub terms: Vec<(usize, T)>,
}

impl<T: Real> AffineScalar<T> {
    pub fn constant(c: T) -> Self {
        Self { constant: c, terms: Vec::new() }
    }

    pub fn zero() -> Self {
        Self::constant(T::zero())
    }

    pub fn var(v: ScalarVar) -> Self {
        Self { constant: T::zero(), terms: vec![(v.index, T::one())] }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut terms = self.terms.clone();
        terms.extend_from_slice(&o.terms);
        Self { constant: self.constant + o.constant, terms }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(-T::one()))
    }

    pub fn scale(&self, s: T) -> Self {
        Self { constant: self.constant * s, terms: self.terms.iter().map(|&(i, c)| (i, c * s)).collect() }
    }

    pub fn add_const(&self, c: T) -> Self {
        Self { constant: self.constant + c, terms: self.terms.clone() }
    }

    pub fn eval(&self, y: &DVector<T>) -> T {
        self.terms.iter().fold(self.constant, |acc, &(i, c)| acc + c * y[i])
    }

    fn merged(&self) -> BTreeMap<usize, T> {
        let mut map = BTreeMap::new();
        for &(i, c) in &self.terms {
            *map.entry(i).or_insert_with(T::zero) += c;
        }
        map
    }
}

impl<T: Real> From<ScalarVar> for AffineScalar<T> {
    fn from(v: ScalarVar) -> Self {
        Self::var(v)
    }
}

/// Complex affine matrix `constant + Σ y[index] · coeff`.
#[derive(Debug, Clone, PartialEq)]
pub struct AffineMatrix<T: Real> {
    rows: usize,
    cols: usize,
    constant: DMatrix<Complex<T>>,
    terms: Vec<(usize, DMatrix<Complex<T>>)>,
}

fn creal<T: Real>(x: T) -> Complex<T> {
    Complex::new(x, T::zero())
}

impl<T: Real> AffineMatrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, constant: DMatrix::zeros(rows, cols), terms: Vec::new() }
    }

    pub fn constant(m: DMatrix<Complex<T>>) -> Self {
        Self { rows: m.nrows(), cols: m.ncols(), constant: m, terms: Vec::new() }
    }

    pub fn hermitian(m: &HermitianMatrix<T>) -> Self {
        Self::constant(m.as_matrix().clone())
    }

    /// `s · I_n`.
    pub fn scalar_identity(s: &AffineScalar<T>, n: usize) -> Self {
        let id = DMatrix::<Complex<T>>::identity(n, n);
        Self {
            rows: n,
            cols: n,
            constant: id.map(|z| z * s.constant),
            terms: s.terms.iter().map(|&(i, c)| (i, id.map(|z| z * c))).collect(),
        }
    }

    /// 1×1 block holding `s`.
    pub fn from_scalar(s: &AffineScalar<T>) -> Self {
        Self::scalar_identity(s, 1)
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!(self.shape(), o.shape(), "affine matrix shape mismatch");
        let mut terms = self.terms.clone();
        terms.extend(o.terms.iter().cloned());
        Self { rows: self.rows, cols: self.cols, constant: &self.constant + &o.constant, terms }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(-T::one()))
    }

    pub fn scale(&self, s: T) -> Self {
        self.map(|m| m.map(|z| z * s))
    }

    pub fn add_constant(&self, m: &DMatrix<Complex<T>>) -> Self {
        let mut out = self.clone();
        out.constant += m;
        out
    }

    fn map(&self, f: impl Fn(&DMatrix<Complex<T>>) -> DMatrix<Complex<T>>) -> Self {
        let constant = f(&self.constant);
        Self {
            rows: constant.nrows(),
            cols: constant.ncols(),
            terms: self.terms.iter().map(|(i, m)| (*i, f(m))).collect(),
            constant,
        }
    }

    /// `L · self`.
    pub fn left_mul(&self, l: &DMatrix<Complex<T>>) -> Self {
        self.map(|m| l * m)
    }

    /// `self · R`.
    pub fn right_mul(&self, r: &DMatrix<Complex<T>>) -> Self {
        self.map(|m| m * r)
    }

    /// `h · self` as a row block.
    pub fn row_times(&self, h: &ComplexVector<T>) -> Self {
        let row = DMatrix::from_row_slice(1, h.len(), h.as_slice());
        self.left_mul(&row)
    }

    /// `self · hᴴ` as a column block.
    pub fn times_adjoint(&self, h: &ComplexVector<T>) -> Self {
        let col = DMatrix::from_column_slice(h.len(), 1, h.adjoint_col().as_slice());
        self.right_mul(&col)
    }

    pub fn adjoint(&self) -> Self {
        self.map(|m| m.adjoint())
    }

    /// `Re tr(self · H)`.
    pub fn trace_product(&self, h: &HermitianMatrix<T>) -> AffineScalar<T> {
        let hm = h.as_matrix();
        let tr = |m: &DMatrix<Complex<T>>| {
            let mut acc = T::zero();
            for i in 0..m.nrows() {
                for j in 0..m.ncols() {
                    acc += (m[(i, j)] * hm[(j, i)]).re;
                }
            }
            acc
        };
        AffineScalar { constant: tr(&self.constant), terms: self.terms.iter().map(|(i, m)| (*i, tr(m))).collect() }
    }

    pub fn trace(&self) -> AffineScalar<T> {
        self.trace_product(&HermitianMatrix::identity(self.rows))
    }

    /// `Re(h · self · hᴴ)`.
    pub fn quad_form(&self, h: &ComplexVector<T>) -> AffineScalar<T> {
        let col = h.adjoint_col();
        let q = |m: &DMatrix<Complex<T>>| col.dotc(&(m * &col)).re;
        AffineScalar { constant: q(&self.constant), terms: self.terms.iter().map(|(i, m)| (*i, q(m))).collect() }
    }

    /// Real part of a 1×1 block.
    pub fn as_scalar(&self) -> AffineScalar<T> {
        assert_eq!(self.shape(), (1, 1));
        AffineScalar {
            constant: self.constant[(0, 0)].re,
            terms: self.terms.iter().map(|(i, m)| (*i, m[(0, 0)].re)).collect(),
        }
    }

    pub fn eval(&self, y: &DVector<T>) -> DMatrix<Complex<T>> {
        let mut out = self.constant.clone();
        for (i, m) in &self.terms {
            out += m.map(|z| z * y[*i]);
        }
        out
    }

    /// Assembles a block matrix; every row of blocks must agree in height and
    /// every column in width.
    pub fn blocks(grid: &[Vec<AffineMatrix<T>>]) -> Option<Self> {
        let heights: Vec<usize> = grid.iter().map(|row| row.first().map(|b| b.rows).unwrap_or(0)).collect();
        let widths: Vec<usize> = grid.first()?.iter().map(|b| b.cols).collect();
        for row in grid {
            if row.len() != widths.len() {
                return None;
            }
        }
        for (r, row) in grid.iter().enumerate() {
            for (c, b) in row.iter().enumerate() {
                if b.rows != heights[r] || b.cols != widths[c] {
                    return None;
                }
            }
        }
        let rows: usize = heights.iter().sum();
        let cols: usize = widths.iter().sum();
        let mut constant = DMatrix::zeros(rows, cols);
        let mut terms: BTreeMap<usize, DMatrix<Complex<T>>> = BTreeMap::new();
        let mut r0 = 0;
        for (r, row) in grid.iter().enumerate() {
            let mut c0 = 0;
            for (c, b) in row.iter().enumerate() {
                constant.view_mut((r0, c0), (heights[r], widths[c])).copy_from(&b.constant);
                for (i, m) in &b.terms {
                    let e = terms.entry(*i).or_insert_with(|| DMatrix::zeros(rows, cols));
                    let mut v = e.view_mut((r0, c0), (heights[r], widths[c]));
                    v += m;
                }
                c0 += widths[c];
            }
            r0 += heights[r];
        }
        Some(Self { rows, cols, constant, terms: terms.into_iter().collect() })
    }

    /// `[[a, b], [bᴴ, d]]`.
    pub fn block2(a: &Self, b: &Self, d: &Self) -> Option<Self> {
        Self::blocks(&[vec![a.clone(), b.clone()], vec![b.adjoint(), d.clone()]])
    }

    fn merged(&self) -> BTreeMap<usize, DMatrix<Complex<T>>> {
        let mut map: BTreeMap<usize, DMatrix<Complex<T>>> = BTreeMap::new();
        for (i, m) in &self.terms {
            match map.get_mut(i) {
                Some(acc) => *acc += m,
                None => {
                    map.insert(*i, m.clone());
                }
            }
        }
        map
    }
}

#[derive(Debug, Clone)]
struct MatrixInfo {
    name: String,
    offset: usize,
    /// Side of the parameter block (subspace dimension).
    inner_dim: usize,
    real: bool,
}

/// LMI-constrained problem over real scalars and Hermitian matrices.
#[derive(Debug, Clone)]
pub struct ConicProblem<T: Real> {
    n_params: usize,
    scalar_names: Vec<(String, usize, Sign)>,
    matrices: Vec<MatrixInfo>,
    lmis: Vec<(String, AffineMatrix<T>)>,
    linear: Vec<(String, AffineScalar<T>)>,
    sense: Sense,
    objective: AffineScalar<T>,
}

impl<T: Real> Default for ConicProblem<T> {
    fn default() -> Self {
        Self::new()
    }
}

/// Hermitian basis matrices for an `n×n` parameter block: diagonal first,
/// then `(Re, Im)` pairs of the strict upper triangle. Real blocks omit Im.
fn hermitian_basis<T: Real>(n: usize, real: bool) -> Vec<DMatrix<Complex<T>>> {
    let mut out = Vec::new();
    for j in 0..n {
        let mut e = DMatrix::zeros(n, n);
        e[(j, j)] = creal(T::one());
        out.push(e);
    }
    for j in 0..n {
        for k in (j + 1)..n {
            let mut e = DMatrix::zeros(n, n);
            e[(j, k)] = creal(T::one());
            e[(k, j)] = creal(T::one());
            out.push(e);
            if !real {
                let mut e = DMatrix::zeros(n, n);
                e[(j, k)] = Complex::new(T::zero(), T::one());
                e[(k, j)] = Complex::new(T::zero(), -T::one());
                out.push(e);
            }
        }
    }
    out
}

impl<T: Real> ConicProblem<T> {
    pub fn new() -> Self {
        Self {
            n_params: 0,
            scalar_names: Vec::new(),
            matrices: Vec::new(),
            lmis: Vec::new(),
            linear: Vec::new(),
            sense: Sense::Feasibility,
            objective: AffineScalar::zero(),
        }
    }

    pub fn n_params(&self) -> usize {
        self.n_params
    }

    pub fn scalar(&mut self, name: &str, sign: Sign) -> ScalarVar {
        let index = self.n_params;
        self.n_params += 1;
        self.scalar_names.push((name.to_string(), index, sign));
        ScalarVar { index }
    }

    fn matrix_var(&mut self, name: &str, inner_dim: usize, basis: Option<&DMatrix<Complex<T>>>, real: bool) -> MatrixVar<T> {
        let offset = self.n_params;
        let elems = hermitian_basis::<T>(inner_dim, real);
        self.n_params += elems.len();
        let id = self.matrices.len();
        self.matrices.push(MatrixInfo { name: name.to_string(), offset, inner_dim, real });
        let dim = basis.map(|u| u.nrows()).unwrap_or(inner_dim);
        let terms = elems
            .into_iter()
            .enumerate()
            .map(|(k, e)| {
                let m = match basis {
                    Some(u) => u * e * u.adjoint(),
                    None => e,
                };
                (offset + k, m)
            })
            .collect();
        MatrixVar { id, dim, expr: AffineMatrix { rows: dim, cols: dim, constant: DMatrix::zeros(dim, dim), terms } }
    }

    /// PSD Hermitian matrix variable.
    pub fn hermitian(&mut self, name: &str, dim: usize) -> MatrixVar<T> {
        self.matrix_var(name, dim, None, false)
    }

    /// PSD real symmetric matrix variable.
    pub fn symmetric(&mut self, name: &str, dim: usize) -> MatrixVar<T> {
        self.matrix_var(name, dim, None, true)
    }

    /// PSD variable `U W Uᴴ` with `W ⪰ 0`; `basis` holds the columns of `U`.
    pub fn hermitian_in_subspace(&mut self, name: &str, basis: &DMatrix<Complex<T>>) -> MatrixVar<T> {
        self.matrix_var(name, basis.ncols(), Some(basis), false)
    }

    /// Requires the square block expression to be PSD.
    pub fn add_lmi(&mut self, name: &str, expr: AffineMatrix<T>) {
        self.lmis.push((name.to_string(), expr));
    }

    /// Requires `expr ≥ 0`.
    pub fn add_nonneg(&mut self, name: &str, expr: AffineScalar<T>) {
        self.linear.push((name.to_string(), expr));
    }

    /// Requires `lhs ≤ rhs`.
    pub fn add_le(&mut self, name: &str, lhs: AffineScalar<T>, rhs: AffineScalar<T>) {
        self.add_nonneg(name, rhs.sub(&lhs));
    }

    pub fn minimize(&mut self, expr: AffineScalar<T>) {
        self.sense = Sense::Minimize;
        self.objective = expr;
    }

    pub fn maximize(&mut self, expr: AffineScalar<T>) {
        self.sense = Sense::Maximize;
        self.objective = expr;
    }

    pub fn feasibility(&mut self) {
        self.sense = Sense::Feasibility;
        self.objective = AffineScalar::zero();
    }

    pub fn sense(&self) -> Sense {
        self.sense
    }

    /// Lowers the problem to `maximize bᵀy s.t. C − Σ yᵢAᵢ ⪰ 0`.
    pub fn to_sdp(&self) -> Result<ipm::SdpData<T>, ConicError> {
        let m = self.n_params;
        let mut b = DVector::zeros(m);
        match self.sense {
            Sense::Minimize => {
                for (i, c) in self.objective.merged() {
                    b[i] -= c;
                }
            }
            Sense::Maximize => {
                for (i, c) in self.objective.merged() {
                    b[i] += c;
                }
            }
            Sense::Feasibility => {}
        }
        let mut psd = Vec::new();
        let mut lp = Vec::new();

        for (_, index, sign) in &self.scalar_names {
            if *sign == Sign::Nonneg {
                lp.push(ipm::LpRow { c: T::zero(), a: vec![(*index, -T::one())] });
            }
        }
        for (_, expr) in &self.linear {
            let a = expr.merged().into_iter().filter(|(_, c)| *c != T::zero()).map(|(i, c)| (i, -c)).collect();
            lp.push(ipm::LpRow { c: expr.constant, a });
        }
        for info in &self.matrices {
            let elems = hermitian_basis::<T>(info.inner_dim, info.real);
            let terms = elems.into_iter().enumerate().map(|(k, e)| (info.offset + k, e)).collect();
            let expr = AffineMatrix { rows: info.inner_dim, cols: info.inner_dim, constant: DMatrix::zeros(info.inner_dim, info.inner_dim), terms };
            psd.push(lower_block(&info.name, &expr)?);
        }
        for (name, expr) in &self.lmis {
            psd.push(lower_block(name, expr)?);
        }
        Ok(ipm::SdpData { m, b, psd, lp })
    }

    /// Largest violation of any constraint at `y` (0 when feasible).
    pub fn max_violation(&self, y: &DVector<T>) -> T {
        let mut worst = T::zero();
        for (_, index, sign) in &self.scalar_names {
            if *sign == Sign::Nonneg {
                worst = worst.max(-y[*index]);
            }
        }
        for (_, expr) in &self.linear {
            worst = worst.max(-expr.eval(y));
        }
        for info in &self.matrices {
            let w = self.param_block(info, y);
            worst = worst.max(-w.min_eigenvalue());
        }
        for (_, expr) in &self.lmis {
            let v = HermitianMatrix::from_raw(expr.eval(y));
            worst = worst.max(-v.min_eigenvalue());
        }
        worst
    }

    fn param_block(&self, info: &MatrixInfo, y: &DVector<T>) -> HermitianMatrix<T> {
        let elems = hermitian_basis::<T>(info.inner_dim, info.real);
        let mut w = DMatrix::zeros(info.inner_dim, info.inner_dim);
        for (k, e) in elems.into_iter().enumerate() {
            w += e.map(|z| z * y[info.offset + k]);
        }
        HermitianMatrix::from_raw(w)
    }

    pub fn objective_at(&self, y: &DVector<T>) -> T {
        match self.sense {
            Sense::Feasibility => T::zero(),
            _ => self.objective.eval(y),
        }
    }

    pub fn matrix_names(&self) -> impl Iterator<Item = &str> {
        self.matrices.iter().map(|m| m.name.as_str())
    }
}

fn is_real<T: Real>(m: &DMatrix<Complex<T>>) -> bool {
    m.iter().all(|z| z.im == T::zero())
}

fn hermitian_gap<T: Real>(m: &DMatrix<Complex<T>>) -> T {
    let n = m.nrows();
    let mut dev = T::zero();
    for i in 0..n {
        for j in 0..n {
            dev = dev.max((m[(i, j)] - m[(j, i)].conj()).modulus());
        }
    }
    dev
}

fn lower_block<T: Real>(name: &str, expr: &AffineMatrix<T>) -> Result<ipm::PsdBlock<T>, ConicError> {
    if expr.rows != expr.cols {
        return Err(ConicError::NotSquare { name: name.to_string(), rows: expr.rows, cols: expr.cols });
    }
    let terms = expr.merged();
    let scale = terms.values().fold(expr.constant.norm(), |a, m| a.max(m.norm())).max(T::one());
    let tol: T = lit::<T>(crate::linalg::HERMITIAN_TOL) * scale;
    let mut dev = hermitian_gap(&expr.constant);
    for m in terms.values() {
        dev = dev.max(hermitian_gap(m));
    }
    if dev > tol {
        return Err(ConicError::NotHermitian { name: name.to_string(), deviation: to_f64(dev) });
    }
    let real = is_real(&expr.constant) && terms.values().all(is_real);
    let lift = |m: &DMatrix<Complex<T>>| -> DMatrix<T> {
        let h = HermitianMatrix::from_raw(m.clone());
        if real {
            h.as_matrix().map(|z| z.re)
        } else {
            crate::linalg::complex_to_real_embed(&h)
        }
    };
    let c = lift(&expr.constant);
    let dim = c.nrows();
    let mut a = Vec::new();
    for (i, m) in terms {
        let r = lift(&m);
        let trip: ipm::Triplets<T> = (0..dim)
            .flat_map(|row| (0..dim).map(move |col| (row, col)))
            .filter_map(|(row, col)| {
                let v = r[(row, col)];
                if v != T::zero() {
                    Some((row, col, -v))
                } else {
                    None
                }
            })
            .collect();
        if !trip.is_empty() {
            a.push((i, trip));
        }
    }
    Ok(ipm::PsdBlock { dim, c, a })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveStatus {
    Optimal,
    Infeasible,
    Inaccurate,
    Error,
}

/// Solver report for a [`ConicProblem`].
#[derive(Debug, Clone)]
pub struct ConicSolution<T: Real> {
    pub status: SolveStatus,
    pub objective_value: T,
    /// Largest constraint violation at the returned point.
    pub primal_residual: T,
    /// Relative dual residual reported by the backend.
    pub dual_residual: T,
    pub iterations: usize,
    pub message: Option<String>,
    values: DVector<T>,
}

impl<T: Real> ConicSolution<T> {
    pub fn value(&self, v: ScalarVar) -> T {
        self.values[v.index]
    }

    pub fn matrix(&self, v: &MatrixVar<T>) -> HermitianMatrix<T> {
        HermitianMatrix::from_raw(v.expr.eval(&self.values))
    }

    pub fn eval(&self, e: &AffineScalar<T>) -> T {
        e.eval(&self.values)
    }

    pub fn values(&self) -> &DVector<T> {
        &self.values
    }

    pub fn is_usable(&self) -> bool {
        matches!(self.status, SolveStatus::Optimal | SolveStatus::Inaccurate)
    }
}

#[derive(Debug, Clone)]
pub struct SolverSettings<T: Real> {
    pub ipm: IpmSettings<T>,
    /// Writes the lowered problem in SDPA sparse format before solving.
    pub dump_path: Option<std::path::PathBuf>,
}

impl<T: Real> Default for SolverSettings<T> {
    fn default() -> Self {
        Self { ipm: IpmSettings::default(), dump_path: None }
    }
}

pub fn solve<T: Real>(p: &ConicProblem<T>, settings: &SolverSettings<T>) -> ConicSolution<T> {
    let data = match p.to_sdp() {
        Ok(d) => d,
        Err(e) => {
            return ConicSolution {
                status: SolveStatus::Error,
                objective_value: T::zero(),
                primal_residual: T::zero(),
                dual_residual: T::zero(),
                iterations: 0,
                message: Some(e.to_string()),
                values: DVector::zeros(p.n_params),
            }
        }
    };
    if let Some(path) = &settings.dump_path {
        if let Err(e) = sdpa::write_sdpa_file(&data, path) {
            log::warn!("could not write SDPA dump to {}: {e}", path.display());
        }
    }
    let r = ipm::solve_sdp(&data, &settings.ipm);
    let (status, message) = match &r.status {
        ipm::IpmStatus::Optimal => (SolveStatus::Optimal, None),
        ipm::IpmStatus::Inaccurate => (SolveStatus::Inaccurate, Some("reduced accuracy".to_string())),
        ipm::IpmStatus::Infeasible => (SolveStatus::Infeasible, Some("infeasibility certificate found".to_string())),
        ipm::IpmStatus::Unbounded => (SolveStatus::Error, Some("objective unbounded".to_string())),
        ipm::IpmStatus::Failed(msg) => (SolveStatus::Error, Some(msg.clone())),
    };
    ConicSolution {
        status,
        objective_value: p.objective_at(&r.y),
        primal_residual: p.max_violation(&r.y),
        dual_residual: r.rel_primal,
        iterations: r.iterations,
        message,
        values: r.y,
    }
}

/// Solves with default settings.
pub fn solve_default<T: Real>(p: &ConicProblem<T>) -> ConicSolution<T> {
    solve(p, &SolverSettings::default())
}
