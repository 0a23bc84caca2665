//! Infeasible-start primal-dual path-following solver (HKM direction with a
//! Mehrotra predictor-corrector) for block-diagonal SDPs in the form
//!
//! ```text
//! maximize  bᵀy   s.t.  S = C − Σᵢ yᵢ Aᵢ ⪰ 0
//! minimize ⟨C, X⟩ s.t.  ⟨Aᵢ, X⟩ = bᵢ,  X ⪰ 0
//! ```
//!
//! Cones are products of real PSD blocks and one nonnegative orthant.

use nalgebra::{DMatrix, DVector};

use crate::scalar::{lit, Real};

/// Sparse symmetric coefficient matrix, both triangles stored.
pub type Triplets<T> = Vec<(usize, usize, T)>;

#[derive(Debug, Clone)]
pub struct PsdBlock<T: Real> {
    pub dim: usize,
    pub c: DMatrix<T>,
    /// `(variable index, Aᵢ restricted to this block)`, only for variables present.
    pub a: Vec<(usize, Triplets<T>)>,
}

/// One orthant coordinate: `s = c − Σ aᵢ yᵢ ≥ 0`.
#[derive(Debug, Clone)]
pub struct LpRow<T: Real> {
    pub c: T,
    pub a: Vec<(usize, T)>,
}

#[derive(Debug, Clone)]
pub struct SdpData<T: Real> {
    pub m: usize,
    pub b: DVector<T>,
    pub psd: Vec<PsdBlock<T>>,
    pub lp: Vec<LpRow<T>>,
}

#[derive(Debug, Clone, Copy)]
pub struct IpmSettings<T: Real> {
    pub tol: T,
    /// Residual level accepted as `Inaccurate` when `tol` is not reached.
    pub loose_tol: T,
    pub max_iter: usize,
    pub step_fraction: T,
}

impl<T: Real> Default for IpmSettings<T> {
    fn default() -> Self {
        Self {
            tol: crate::scalar::default_tolerance(),
            loose_tol: T::default_epsilon().sqrt().max(lit(1e-6)),
            max_iter: 100,
            step_fraction: lit(0.98),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum IpmStatus {
    Optimal,
    Inaccurate,
    /// No `y` satisfies the cone constraints.
    Infeasible,
    /// `bᵀy` is unbounded above.
    Unbounded,
    Failed(String),
}

#[derive(Debug, Clone)]
pub struct IpmResult<T: Real> {
    pub status: IpmStatus,
    pub y: DVector<T>,
    pub x_psd: Vec<DMatrix<T>>,
    pub x_lp: DVector<T>,
    pub primal_obj: T,
    pub dual_obj: T,
    pub rel_primal: T,
    pub rel_dual: T,
    pub rel_gap: T,
    pub iterations: usize,
}

struct State<T: Real> {
    y: DVector<T>,
    x: Vec<DMatrix<T>>,
    s: Vec<DMatrix<T>>,
    xl: DVector<T>,
    sl: DVector<T>,
}

struct Direction<T: Real> {
    dy: DVector<T>,
    dx: Vec<DMatrix<T>>,
    ds: Vec<DMatrix<T>>,
    dxl: DVector<T>,
    dsl: DVector<T>,
}

fn frob<T: Real>(m: &DMatrix<T>) -> T {
    m.norm()
}

fn inner<T: Real>(a: &DMatrix<T>, b: &DMatrix<T>) -> T {
    a.iter().zip(b.iter()).fold(T::zero(), |acc, (x, y)| acc + *x * *y)
}

fn sym<T: Real>(m: DMatrix<T>) -> DMatrix<T> {
    let half: T = lit(0.5);
    (&m + m.transpose()) * half
}

fn triplet_norm<T: Real>(t: &Triplets<T>) -> T {
    t.iter().fold(T::zero(), |acc, &(_, _, v)| acc + v * v).sqrt()
}

impl<T: Real> SdpData<T> {
    fn cone_dim(&self) -> usize {
        self.psd.iter().map(|b| b.dim).sum::<usize>() + self.lp.len()
    }

    /// `C − Σ yᵢ Aᵢ` per block.
    fn slack_of(&self, y: &DVector<T>) -> (Vec<DMatrix<T>>, DVector<T>) {
        let psd = self
            .psd
            .iter()
            .map(|blk| {
                let mut z = blk.c.clone();
                for (i, trip) in &blk.a {
                    let yi = y[*i];
                    if yi != T::zero() {
                        for &(r, c, v) in trip {
                            z[(r, c)] -= yi * v;
                        }
                    }
                }
                z
            })
            .collect();
        let lp = DVector::from_iterator(
            self.lp.len(),
            self.lp.iter().map(|row| row.a.iter().fold(row.c, |acc, &(i, v)| acc - y[i] * v)),
        );
        (psd, lp)
    }

    /// `−Σ dyᵢ Aᵢ` per block (no constant term).
    fn adjoint_of(&self, dy: &DVector<T>) -> (Vec<DMatrix<T>>, DVector<T>) {
        let psd = self
            .psd
            .iter()
            .map(|blk| {
                let mut z = DMatrix::zeros(blk.dim, blk.dim);
                for (i, trip) in &blk.a {
                    let yi = dy[*i];
                    if yi != T::zero() {
                        for &(r, c, v) in trip {
                            z[(r, c)] -= yi * v;
                        }
                    }
                }
                z
            })
            .collect();
        let lp = DVector::from_iterator(
            self.lp.len(),
            self.lp.iter().map(|row| row.a.iter().fold(T::zero(), |acc, &(i, v)| acc - dy[i] * v)),
        );
        (psd, lp)
    }

    /// `(⟨Aᵢ, X⟩)ᵢ`.
    fn op(&self, x: &[DMatrix<T>], xl: &DVector<T>) -> DVector<T> {
        let mut out = DVector::zeros(self.m);
        for (blk, xb) in self.psd.iter().zip(x) {
            for (i, trip) in &blk.a {
                out[*i] += trip.iter().fold(T::zero(), |acc, &(r, c, v)| acc + v * xb[(r, c)]);
            }
        }
        for (row, &xv) in self.lp.iter().zip(xl.iter()) {
            for &(i, v) in &row.a {
                out[i] += v * xv;
            }
        }
        out
    }

    fn c_norm(&self) -> T {
        let psd = self.psd.iter().fold(T::zero(), |acc, b| acc + b.c.norm_squared());
        let lp = self.lp.iter().fold(T::zero(), |acc, r| acc + r.c * r.c);
        (psd + lp).sqrt()
    }

    fn c_dot(&self, x: &[DMatrix<T>], xl: &DVector<T>) -> T {
        let psd = self.psd.iter().zip(x).fold(T::zero(), |acc, (b, xb)| acc + inner(&b.c, xb));
        let lp = self.lp.iter().zip(xl.iter()).fold(T::zero(), |acc, (r, &v)| acc + r.c * v);
        psd + lp
    }
}

fn initial_state<T: Real>(data: &SdpData<T>) -> State<T> {
    let ten: T = lit(10.0);
    let mut x = Vec::with_capacity(data.psd.len());
    let mut s = Vec::with_capacity(data.psd.len());
    for blk in &data.psd {
        let n = blk.dim;
        let sqrt_n: T = lit::<T>(n as f64).sqrt();
        let mut xi = ten.max(sqrt_n);
        let mut eta = ten.max(sqrt_n).max(frob(&blk.c));
        for (i, trip) in &blk.a {
            let an = triplet_norm(trip);
            xi = xi.max(sqrt_n * (T::one() + data.b[*i].abs()) / (T::one() + an));
            eta = eta.max(an);
        }
        x.push(DMatrix::identity(n, n) * xi);
        s.push(DMatrix::identity(n, n) * eta);
    }
    let nl = data.lp.len();
    let mut xil = ten;
    let mut etal = ten;
    for row in &data.lp {
        etal = etal.max(row.c.abs());
        for &(i, v) in &row.a {
            etal = etal.max(v.abs());
            xil = xil.max((T::one() + data.b[i].abs()) / (T::one() + v.abs()));
        }
    }
    State { y: DVector::zeros(data.m), x, s, xl: DVector::from_element(nl, xil), sl: DVector::from_element(nl, etal) }
}

/// Largest `α ≤ 1/frac` keeping `M + α D ⪰ 0`, given the Cholesky factor `L` of `M`.
fn max_step_psd<T: Real>(l: &DMatrix<T>, d: &DMatrix<T>) -> T {
    let n = l.nrows();
    if n == 0 {
        return T::max_value().unwrap_or_else(|| lit(1e30));
    }
    let Some(li) = l.clone().solve_lower_triangular(&DMatrix::identity(n, n)) else {
        return T::zero();
    };
    let w = sym(&li * d * li.transpose());
    let lmin = w.symmetric_eigenvalues().iter().fold(T::max_value().unwrap_or_else(|| lit(1e30)), |a, &b| a.min(b));
    if lmin >= T::zero() {
        lit(1e30)
    } else {
        -T::one() / lmin
    }
}

fn max_step_lp<T: Real>(x: &DVector<T>, d: &DVector<T>) -> T {
    x.iter().zip(d.iter()).fold(lit(1e30), |acc, (&xv, &dv)| if dv < T::zero() { acc.min(-xv / dv) } else { acc })
}

fn cholesky_all<T: Real>(ms: &[DMatrix<T>]) -> Option<Vec<DMatrix<T>>> {
    ms.iter().map(|m| m.clone().cholesky().map(|c| c.l())).collect()
}

fn inverse_from_chol<T: Real>(l: &DMatrix<T>) -> Option<DMatrix<T>> {
    let n = l.nrows();
    let li = l.clone().solve_lower_triangular(&DMatrix::identity(n, n))?;
    Some(sym(li.transpose() * li))
}

/// Schur complement `Mᵢⱼ = Σ_blocks tr(Aᵢ X Aⱼ S⁻¹) + Σ_lp aᵢ aⱼ x/s`.
fn schur<T: Real>(data: &SdpData<T>, st: &State<T>, sinv: &[DMatrix<T>]) -> DMatrix<T> {
    let m = data.m;
    let mut out = DMatrix::zeros(m, m);
    for ((blk, xb), si) in data.psd.iter().zip(&st.x).zip(sinv) {
        let n = blk.dim;
        for (j, aj) in &blk.a {
            let mut xa = DMatrix::zeros(n, n);
            for &(r, c, v) in aj {
                for k in 0..n {
                    xa[(k, c)] += v * xb[(k, r)];
                }
            }
            let g = xa * si;
            for (i, ai) in &blk.a {
                let val = ai.iter().fold(T::zero(), |acc, &(r, c, v)| acc + v * g[(c, r)]);
                out[(*i, *j)] += val;
            }
        }
    }
    for (row, (&xv, &sv)) in data.lp.iter().zip(st.xl.iter().zip(st.sl.iter())) {
        let w = xv / sv;
        for &(i, vi) in &row.a {
            for &(j, vj) in &row.a {
                out[(i, j)] += vi * vj * w;
            }
        }
    }
    sym(out)
}

enum Factor<T: Real> {
    Chol(nalgebra::Cholesky<T, nalgebra::Dyn>),
    Lu(nalgebra::LU<T, nalgebra::Dyn, nalgebra::Dyn>),
}

impl<T: Real> Factor<T> {
    fn new(m: DMatrix<T>) -> Option<Self> {
        if let Some(c) = m.clone().cholesky() {
            return Some(Factor::Chol(c));
        }
        let lu = m.lu();
        if lu.is_invertible() {
            Some(Factor::Lu(lu))
        } else {
            None
        }
    }

    fn solve(&self, rhs: &DVector<T>) -> Option<DVector<T>> {
        match self {
            Factor::Chol(c) => Some(c.solve(rhs)),
            Factor::Lu(l) => l.solve(rhs),
        }
    }
}

struct Residuals<T: Real> {
    rp: DVector<T>,
    rd: Vec<DMatrix<T>>,
    rdl: DVector<T>,
}

/// Solves the Newton system for the target `σμ` with optional second-order correction.
#[allow(clippy::too_many_arguments)]
fn direction<T: Real>(
    data: &SdpData<T>,
    st: &State<T>,
    sinv: &[DMatrix<T>],
    factor: &Factor<T>,
    res: &Residuals<T>,
    sigma_mu: T,
    corr: Option<&Direction<T>>,
) -> Option<Direction<T>> {
    let nb = data.psd.len();
    // W = (Rc − X Rd) S⁻¹ with Rc = σμI − XS − ΔXₐΔSₐ
    let mut w = Vec::with_capacity(nb);
    for b in 0..nb {
        let xb = &st.x[b];
        let mut inner = &sinv[b] * sigma_mu - xb - xb * &res.rd[b] * &sinv[b];
        if let Some(c) = corr {
            inner -= &c.dx[b] * &c.ds[b] * &sinv[b];
        }
        w.push(inner);
    }
    let nl = data.lp.len();
    let mut wl = DVector::zeros(nl);
    for l in 0..nl {
        let (x, s) = (st.xl[l], st.sl[l]);
        let mut v = sigma_mu / s - x - x * res.rdl[l] / s;
        if let Some(c) = corr {
            v -= c.dxl[l] * c.dsl[l] / s;
        }
        wl[l] = v;
    }
    let rhs = &res.rp - data.op(&w, &wl);
    let dy = factor.solve(&rhs)?;
    if dy.iter().any(|v| !v.is_finite()) {
        return None;
    }
    let (mut ds, mut dsl) = data.adjoint_of(&dy);
    for b in 0..nb {
        ds[b] += &res.rd[b];
    }
    dsl += &res.rdl;
    let mut dx = Vec::with_capacity(nb);
    for b in 0..nb {
        let xb = &st.x[b];
        let mut d = &sinv[b] * sigma_mu - xb - xb * &ds[b] * &sinv[b];
        if let Some(c) = corr {
            d -= &c.dx[b] * &c.ds[b] * &sinv[b];
        }
        dx.push(sym(d));
    }
    let mut dxl = DVector::zeros(nl);
    for l in 0..nl {
        let (x, s) = (st.xl[l], st.sl[l]);
        let mut v = sigma_mu / s - x - x * dsl[l] / s;
        if let Some(c) = corr {
            v -= c.dxl[l] * c.dsl[l] / s;
        }
        dxl[l] = v;
    }
    Some(Direction { dy, dx, ds, dxl, dsl })
}

fn step_lengths<T: Real>(st: &State<T>, lx: &[DMatrix<T>], ls: &[DMatrix<T>], d: &Direction<T>) -> (T, T) {
    let mut ap: T = lit(1e30);
    let mut ad: T = lit(1e30);
    for b in 0..st.x.len() {
        ap = ap.min(max_step_psd(&lx[b], &d.dx[b]));
        ad = ad.min(max_step_psd(&ls[b], &d.ds[b]));
    }
    ap = ap.min(max_step_lp(&st.xl, &d.dxl));
    ad = ad.min(max_step_lp(&st.sl, &d.dsl));
    (ap, ad)
}

fn complementarity<T: Real>(st: &State<T>) -> T {
    let psd = st.x.iter().zip(&st.s).fold(T::zero(), |acc, (x, s)| acc + inner(x, s));
    psd + st.xl.dot(&st.sl)
}

pub fn solve_sdp<T: Real>(data: &SdpData<T>, settings: &IpmSettings<T>) -> IpmResult<T> {
    let n_cone = data.cone_dim();
    let nb = data.psd.len();
    let mut st = initial_state(data);
    let b_norm = data.b.norm();
    let c_norm = data.c_norm();
    let huge: T = lit(1e10);
    let cert_tol: T = lit(1e-8);

    let mut last = (T::one(), T::one(), T::one());
    let mut status = IpmStatus::Failed("iteration limit reached".into());
    let mut iterations = 0;

    if n_cone == 0 {
        return finish(data, st, IpmStatus::Failed("problem has no cone constraints".into()), (T::zero(), T::zero(), T::zero()), 0);
    }

    for it in 0..=settings.max_iter {
        iterations = it;
        let (z, zl) = data.slack_of(&st.y);
        let rd: Vec<DMatrix<T>> = z.iter().zip(&st.s).map(|(z, s)| z - s).collect();
        let rdl = &zl - &st.sl;
        let rp = &data.b - data.op(&st.x, &st.xl);
        let pobj = data.c_dot(&st.x, &st.xl);
        let dobj = data.b.dot(&st.y);
        let gap = complementarity(&st);
        let mu = gap / lit(n_cone as f64);

        let rd_norm = (rd.iter().fold(T::zero(), |a, m| a + m.norm_squared()) + rdl.norm_squared()).sqrt();
        let rel_p = rp.norm() / (T::one() + b_norm);
        let rel_d = rd_norm / (T::one() + c_norm);
        let rel_gap = ((pobj - dobj).abs()).max(gap.abs()) / (T::one() + pobj.abs() + dobj.abs());
        last = (rel_p, rel_d, rel_gap);
        if rel_p <= settings.tol && rel_d <= settings.tol && rel_gap <= settings.tol {
            status = IpmStatus::Optimal;
            break;
        }

        // Certificates once iterates blow up.
        let x_norm = (st.x.iter().fold(T::zero(), |a, m| a + m.norm_squared()) + st.xl.norm_squared()).sqrt();
        if x_norm > huge && pobj < T::zero() {
            let ax = data.op(&st.x, &st.xl);
            if ax.norm() <= cert_tol * (-pobj) {
                status = IpmStatus::Infeasible;
                break;
            }
        }
        if st.y.norm() > huge && dobj > T::zero() {
            let (ay, ayl) = data.adjoint_of(&st.y);
            let min_eig = ay
                .iter()
                .map(|m| m.clone().symmetric_eigenvalues().iter().fold(T::zero(), |a, &b| a.min(b)))
                .fold(ayl.iter().fold(T::zero(), |a, &b| a.min(b)), |a, b| a.min(b));
            if min_eig >= -cert_tol * dobj {
                status = IpmStatus::Unbounded;
                break;
            }
        }
        if it == settings.max_iter {
            break;
        }

        let (Some(lx), Some(ls)) = (cholesky_all(&st.x), cholesky_all(&st.s)) else {
            status = IpmStatus::Failed("iterate left the cone".into());
            break;
        };
        let Some(sinv) = ls.iter().map(inverse_from_chol).collect::<Option<Vec<_>>>() else {
            status = IpmStatus::Failed("singular dual slack".into());
            break;
        };
        let Some(factor) = Factor::new(schur(data, &st, &sinv)) else {
            status = IpmStatus::Failed("singular Schur complement".into());
            break;
        };
        let res = Residuals { rp, rd, rdl };

        let Some(pred) = direction(data, &st, &sinv, &factor, &res, T::zero(), None) else {
            status = IpmStatus::Failed("predictor solve failed".into());
            break;
        };
        let (ap, ad) = step_lengths(&st, &lx, &ls, &pred);
        let ap = ap.min(T::one());
        let ad = ad.min(T::one());
        let mut gap_aff = T::zero();
        for b in 0..nb {
            gap_aff += inner(&(&st.x[b] + &pred.dx[b] * ap), &(&st.s[b] + &pred.ds[b] * ad));
        }
        gap_aff += (&st.xl + &pred.dxl * ap).dot(&(&st.sl + &pred.dsl * ad));
        let ratio = (gap_aff / gap).max(T::zero()).min(T::one());
        let sigma = ratio * ratio * ratio;

        let Some(dir) = direction(data, &st, &sinv, &factor, &res, sigma * mu, Some(&pred)) else {
            status = IpmStatus::Failed("corrector solve failed".into());
            break;
        };
        let (ap, ad) = step_lengths(&st, &lx, &ls, &dir);
        let ap = (ap * settings.step_fraction).min(T::one());
        let ad = (ad * settings.step_fraction).min(T::one());
        if ap < lit(1e-12) && ad < lit(1e-12) {
            status = IpmStatus::Failed("step length collapsed".into());
            break;
        }
        for b in 0..nb {
            st.x[b] += &dir.dx[b] * ap;
            st.s[b] += &dir.ds[b] * ad;
        }
        st.xl += &dir.dxl * ap;
        st.sl += &dir.dsl * ad;
        st.y += &dir.dy * ad;
    }

    if let IpmStatus::Failed(_) = status {
        let (p, d, g) = last;
        if p <= settings.loose_tol && d <= settings.loose_tol && g <= settings.loose_tol {
            status = IpmStatus::Inaccurate;
        }
    }
    finish(data, st, status, last, iterations)
}

fn finish<T: Real>(data: &SdpData<T>, st: State<T>, status: IpmStatus, res: (T, T, T), iterations: usize) -> IpmResult<T> {
    let primal_obj = data.c_dot(&st.x, &st.xl);
    let dual_obj = data.b.dot(&st.y);
    IpmResult {
        status,
        y: st.y,
        x_psd: st.x,
        x_lp: st.xl,
        primal_obj,
        dual_obj,
        rel_primal: res.0,
        rel_dual: res.1,
        rel_gap: res.2,
        iterations,
    }
}
