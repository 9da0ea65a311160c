//! Dense complex linear algebra used by every other module.
//!
//! Matrices are `nalgebra::DMatrix<Complex<f64>>`. Exponentials of Hermitian
//! generators go through the Hermitian eigendecomposition so that the result
//! is unitary to rounding, independent of `t`.

use std::f64::consts::TAU;

use nalgebra::{DMatrix, DVector, Dim, Matrix, RawStorage};
use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type C64 = Complex<f64>;
pub type CMat = DMatrix<C64>;
pub type CVec = DVector<C64>;

pub const I: C64 = C64 { re: 0.0, im: 1.0 };

/// Numerical tolerances.
///
/// `structural` applies to Hermiticity / unitarity / idempotency checks,
/// `transport` to parallel-transport residuals and loop closure, and
/// `integration` to end-to-end propagation accuracy.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerance {
    pub structural: f64,
    pub transport: f64,
    pub integration: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance {
            structural: 1e-10,
            transport: 1e-8,
            integration: 1e-4,
        }
    }
}

impl Tolerance {
    pub fn new(structural: f64, transport: f64, integration: f64) -> Result<Self> {
        for (name, v) in [
            ("structural", structural),
            ("transport", transport),
            ("integration", integration),
        ] {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::InvalidParameter(format!(
                    "{name} tolerance must be finite and nonnegative, got {v}"
                )));
            }
        }
        Ok(Tolerance {
            structural,
            transport,
            integration,
        })
    }
}

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn identity(d: usize) -> CMat {
    CMat::identity(d, d)
}

/// Largest entry magnitude.
pub fn max_abs<R: Dim, Cl: Dim, S: RawStorage<C64, R, Cl>>(m: &Matrix<C64, R, Cl, S>) -> f64 {
    m.iter().fold(0.0f64, |acc, z| acc.max(z.norm()))
}

/// Largest singular value.
pub fn op_norm(m: &CMat) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.clone()
        .singular_values()
        .iter()
        .fold(0.0f64, |acc, &s| acc.max(s))
}

pub fn is_finite(m: &CMat) -> bool {
    m.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

pub fn ensure_finite(m: &CMat, what: &'static str) -> Result<()> {
    if is_finite(m) {
        Ok(())
    } else {
        Err(Error::Structural {
            what,
            magnitude: f64::INFINITY,
            tolerance: 0.0,
        })
    }
}

pub fn ensure_square(m: &CMat, what: &str) -> Result<usize> {
    if m.nrows() != m.ncols() || m.nrows() == 0 {
        return Err(Error::Shape(format!(
            "{what} must be a nonempty square matrix, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    Ok(m.nrows())
}

/// `max |H - H^dag|`.
pub fn hermiticity_defect(m: &CMat) -> f64 {
    max_abs(&(m - m.adjoint()))
}

/// `max |U^dag U - 1|`.
pub fn unitarity_defect(m: &CMat) -> f64 {
    let n = m.ncols();
    max_abs(&(m.adjoint() * m - identity(n)))
}

fn scaled(tol: f64, m: &CMat) -> f64 {
    tol * max_abs(m).max(1.0)
}

pub fn ensure_hermitian(m: &CMat, tol: f64, what: &'static str) -> Result<()> {
    ensure_square(m, what)?;
    ensure_finite(m, what)?;
    let defect = hermiticity_defect(m);
    let bound = scaled(tol, m);
    if defect > bound {
        return Err(Error::Structural {
            what,
            magnitude: defect,
            tolerance: bound,
        });
    }
    Ok(())
}

pub fn ensure_unitary(m: &CMat, tol: f64, what: &'static str) -> Result<()> {
    ensure_square(m, what)?;
    ensure_finite(m, what)?;
    let defect = unitarity_defect(m);
    if defect > tol {
        return Err(Error::Structural {
            what,
            magnitude: defect,
            tolerance: tol,
        });
    }
    Ok(())
}

/// `(M + M^dag) / 2`.
pub fn hermitian_part(m: &CMat) -> CMat {
    (m + m.adjoint()).scale(0.5)
}

/// `(M - M^dag) / 2`.
pub fn skew_part(m: &CMat) -> CMat {
    (m - m.adjoint()).scale(0.5)
}

pub fn commutator(a: &CMat, b: &CMat) -> CMat {
    a * b - b * a
}

pub fn trace(m: &CMat) -> C64 {
    m.diagonal().iter().sum()
}

/// Argument of `z` mapped to `[0, 2pi)`; values within `snap` of `2pi` map to 0.
pub fn principal_phase(z: C64, snap: f64) -> f64 {
    let mut a = z.arg();
    if a < 0.0 {
        a += TAU;
    }
    if a >= TAU - snap || a < 0.0 {
        0.0
    } else {
        a
    }
}

/// Spectral data of a Hermitian matrix, eigenvalues ascending.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: CMat,
}

impl HermitianEigen {
    pub fn reconstruct(&self) -> CMat {
        let diag = CVec::from_iterator(self.values.len(), self.values.iter().map(|&x| c(x, 0.0)));
        &self.vectors * CMat::from_diagonal(&diag) * self.vectors.adjoint()
    }

    /// `f(H) = W f(Lambda) W^dag` for a scalar function on the spectrum.
    pub fn apply(&self, f: impl Fn(f64) -> C64) -> CMat {
        let d = self.values.len();
        let mut scaled = self.vectors.clone();
        for (j, &lam) in self.values.iter().enumerate() {
            let s = f(lam);
            for i in 0..d {
                scaled[(i, j)] *= s;
            }
        }
        scaled * self.vectors.adjoint()
    }

    /// `e^{-itH}` from the cached decomposition.
    pub fn exp_neg_i(&self, t: f64) -> CMat {
        if t == 0.0 {
            return identity(self.values.len());
        }
        self.apply(|lam| C64::from_polar(1.0, -lam * t))
    }
}

/// Eigendecomposition of a Hermitian matrix with ascending eigenvalues.
pub fn eig_hermitian(h: &CMat) -> Result<HermitianEigen> {
    ensure_hermitian(h, Tolerance::default().structural, "Hermitian input")?;
    Ok(eig_hermitian_unchecked(h))
}

pub(crate) fn eig_hermitian_unchecked(h: &CMat) -> HermitianEigen {
    let sym = hermitian_part(h);
    let eig = sym.symmetric_eigen();
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = CMat::from_fn(h.nrows(), h.ncols(), |i, j| eig.eigenvectors[(i, order[j])]);
    HermitianEigen { values, vectors }
}

/// `e^{-itH}` for Hermitian `H`.
pub fn expm_skew(h: &CMat, t: f64) -> Result<CMat> {
    ensure_hermitian(h, Tolerance::default().structural, "Hamiltonian")?;
    Ok(expm_unchecked(h, t))
}

pub(crate) fn expm_unchecked(h: &CMat, t: f64) -> CMat {
    if t == 0.0 {
        return identity(h.nrows());
    }
    eig_hermitian_unchecked(h).exp_neg_i(t)
}

/// Spectral data of a unitary matrix: eigenphases in `[0, 2pi)` ascending and
/// the corresponding orthonormal eigenvectors as columns.
#[derive(Debug, Clone)]
pub struct UnitaryEigen {
    pub phases: Vec<f64>,
    pub vectors: CMat,
}

impl UnitaryEigen {
    pub fn reconstruct(&self) -> CMat {
        let diag = CVec::from_iterator(
            self.phases.len(),
            self.phases.iter().map(|&p| C64::from_polar(1.0, p)),
        );
        &self.vectors * CMat::from_diagonal(&diag) * self.vectors.adjoint()
    }
}

/// Eigendecomposition of a unitary matrix via the complex Schur form, which
/// is diagonal for normal matrices.
pub fn eig_unitary(u: &CMat) -> Result<UnitaryEigen> {
    let tol = Tolerance::default().structural;
    ensure_unitary(u, tol, "unitary input")?;
    Ok(eig_unitary_unchecked(u, tol))
}

pub(crate) fn eig_unitary_unchecked(u: &CMat, snap: f64) -> UnitaryEigen {
    let n = u.nrows();
    let (q, t) = u.clone().schur().unpack();
    let mut pairs: Vec<(f64, usize)> = (0..n)
        .map(|k| (principal_phase(t[(k, k)], snap), k))
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    let phases = pairs.iter().map(|p| p.0).collect();
    let vectors = CMat::from_fn(n, n, |i, j| q[(i, pairs[j].1)]);
    UnitaryEigen { phases, vectors }
}

/// Polar (unitary) factor of a square matrix: the closest unitary in
/// Frobenius norm. Fails if the matrix is singular within `tol`.
pub fn polar_unitary(m: &CMat, tol: f64) -> Result<CMat> {
    let svd = m.clone().svd(true, true);
    let smallest = svd
        .singular_values
        .iter()
        .fold(f64::INFINITY, |acc, &s| acc.min(s));
    if smallest.is_nan() || smallest <= tol {
        return Err(Error::Degenerate {
            smallest_singular_value: smallest,
        });
    }
    let u = svd.u.expect("requested U");
    let v_t = svd.v_t.expect("requested V^T");
    Ok(u * v_t)
}

/// Outer product `|a><b|`.
pub fn outer(a: &CVec, b: &CVec) -> CMat {
    a * b.adjoint()
}

/// Standard basis vector `e_k` in dimension `d`.
pub fn basis(d: usize, k: usize) -> CVec {
    let mut v = CVec::zeros(d);
    v[k] = c(1.0, 0.0);
    v
}

pub fn pauli_x() -> CMat {
    CMat::from_row_slice(2, 2, &[c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)])
}

pub fn pauli_y() -> CMat {
    CMat::from_row_slice(2, 2, &[c(0.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(0.0, 0.0)])
}

pub fn pauli_z() -> CMat {
    CMat::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0)])
}

pub fn diag(entries: &[C64]) -> CMat {
    CMat::from_diagonal(&CVec::from_column_slice(entries))
}

pub fn diag_phases(phases: &[f64]) -> CMat {
    let entries: Vec<C64> = phases.iter().map(|&p| C64::from_polar(1.0, p)).collect();
    diag(&entries)
}
