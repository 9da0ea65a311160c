//! Stiefel and Grassmann points: n-frames, rank-n projectors, and uniformly
//! sampled projector paths.

use std::f64::consts::TAU;

use crate::error::{Error, Result};
use crate::matrixcore::{
    ensure_finite, ensure_hermitian, ensure_unitary, identity, max_abs, op_norm, principal_phase,
    trace, CMat, CVec, Tolerance,
};

/// Largest admissible `|P_{k+1} - P_k|` between consecutive path samples.
pub const MAX_SAMPLE_JUMP: f64 = 0.5;

/// A `d x n` matrix with orthonormal columns.
#[derive(Debug, Clone, PartialEq)]
pub struct NFrame {
    matrix: CMat,
}

impl NFrame {
    pub fn new(matrix: CMat) -> Result<Self> {
        Self::with_tolerance(matrix, &Tolerance::default())
    }

    pub fn with_tolerance(matrix: CMat, tol: &Tolerance) -> Result<Self> {
        let (d, n) = matrix.shape();
        if n == 0 || n > d {
            return Err(Error::Shape(format!(
                "frame must be d x n with 1 <= n <= d, got {d}x{n}"
            )));
        }
        ensure_finite(&matrix, "frame entries")?;
        let defect = max_abs(&(matrix.adjoint() * &matrix - identity(n)));
        if defect > tol.structural {
            return Err(Error::Structural {
                what: "frame orthonormality",
                magnitude: defect,
                tolerance: tol.structural,
            });
        }
        Ok(NFrame { matrix })
    }

    pub(crate) fn new_unchecked(matrix: CMat) -> Self {
        NFrame { matrix }
    }

    /// First `n` standard basis vectors of `C^d`.
    pub fn standard(d: usize, n: usize) -> Result<Self> {
        if n == 0 || n > d {
            return Err(Error::Shape(format!("need 1 <= n <= d, got n={n}, d={d}")));
        }
        Ok(NFrame {
            matrix: identity(d).columns(0, n).into_owned(),
        })
    }

    pub fn matrix(&self) -> &CMat {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMat {
        self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn n(&self) -> usize {
        self.matrix.ncols()
    }

    pub fn column(&self, k: usize) -> CVec {
        self.matrix.column(k).into_owned()
    }

    /// Left action by an operator that is isometric on the span.
    pub fn transformed(&self, op: &CMat) -> NFrame {
        NFrame::new_unchecked(op * &self.matrix)
    }
}

/// Orthogonal projector of rank `n` on `C^d`.
#[derive(Debug, Clone, PartialEq)]
pub struct Projector {
    matrix: CMat,
    rank: usize,
}

impl Projector {
    pub fn new(matrix: CMat) -> Result<Self> {
        Self::with_tolerance(matrix, &Tolerance::default())
    }

    pub fn with_tolerance(matrix: CMat, tol: &Tolerance) -> Result<Self> {
        ensure_hermitian(&matrix, tol.structural, "projector Hermiticity")?;
        let idem = max_abs(&(&matrix * &matrix - &matrix));
        if idem > tol.structural {
            return Err(Error::Structural {
                what: "projector idempotency",
                magnitude: idem,
                tolerance: tol.structural,
            });
        }
        let tr = trace(&matrix).re;
        let rank = tr.round();
        if (tr - rank).abs() > tol.structural || rank < 1.0 {
            return Err(Error::Structural {
                what: "projector trace",
                magnitude: (tr - rank).abs(),
                tolerance: tol.structural,
            });
        }
        Ok(Projector {
            matrix,
            rank: rank as usize,
        })
    }

    pub(crate) fn new_unchecked(matrix: CMat, rank: usize) -> Self {
        Projector { matrix, rank }
    }

    pub fn matrix(&self) -> &CMat {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn rank(&self) -> usize {
        self.rank
    }
}

/// `P = V V^dag`.
pub fn projector_of(frame: &NFrame) -> Projector {
    let v = frame.matrix();
    let p = v * v.adjoint();
    Projector::new_unchecked(crate::matrixcore::hermitian_part(&p), frame.n())
}

/// Orthonormal frame spanning the column space of `m` (polar factor
/// `M (M^dag M)^{-1/2}`, which leaves orthonormal inputs unchanged).
pub fn orthonormalize(m: &CMat) -> Result<NFrame> {
    orthonormalize_with(m, &Tolerance::default())
}

pub fn orthonormalize_with(m: &CMat, tol: &Tolerance) -> Result<NFrame> {
    let (d, n) = m.shape();
    if n == 0 || n > d {
        return Err(Error::Shape(format!(
            "need a d x n matrix with 1 <= n <= d, got {d}x{n}"
        )));
    }
    ensure_finite(m, "matrix entries")?;
    let svd = m.clone().svd(true, true);
    let smallest = svd
        .singular_values
        .iter()
        .fold(f64::INFINITY, |acc, &s| acc.min(s));
    if smallest.is_nan() || smallest <= tol.structural {
        return Err(Error::Degenerate {
            smallest_singular_value: smallest,
        });
    }
    let u = svd.u.expect("requested U");
    let v_t = svd.v_t.expect("requested V^T");
    Ok(NFrame::new_unchecked(u * v_t))
}

/// Right gauge action `V -> V S` for unitary `S`.
pub fn gauge_act(frame: &NFrame, s: &CMat) -> Result<NFrame> {
    if s.nrows() != frame.n() {
        return Err(Error::Shape(format!(
            "gauge matrix must be {n}x{n}, got {}x{}",
            s.nrows(),
            s.ncols(),
            n = frame.n()
        )));
    }
    ensure_unitary(s, Tolerance::default().structural, "gauge matrix unitarity")?;
    Ok(NFrame::new_unchecked(frame.matrix() * s))
}

/// Decide whether `V1 = e^{i theta} V2`; returns the witness `theta` in
/// `[0, 2pi)` when they are.
///
/// Works on the column overlaps `<v1_k | v2_k>`: all must have unit modulus
/// and a common phase, within `tol`.
pub fn projectively_equal(v1: &NFrame, v2: &NFrame, tol: f64) -> Option<f64> {
    if v1.dim() != v2.dim() || v1.n() != v2.n() {
        return None;
    }
    let overlaps: Vec<_> = (0..v1.n())
        .map(|k| v1.matrix().column(k).dotc(&v2.matrix().column(k)))
        .collect();
    let first = overlaps[0];
    let all_match = overlaps
        .iter()
        .all(|z| (z.norm() - 1.0).abs() <= tol && (z - first).norm() <= tol);
    if !all_match {
        return None;
    }
    let theta = principal_phase(first.conj(), 0.0);
    Some(if theta >= TAU { 0.0 } else { theta })
}

/// Uniformly sampled path of projectors on `[0, tau]`.
#[derive(Debug, Clone)]
pub struct ProjectorPath {
    tau: f64,
    samples: Vec<Projector>,
}

impl ProjectorPath {
    pub fn new(tau: f64, samples: Vec<Projector>) -> Result<Self> {
        if !tau.is_finite() || tau <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "duration must be positive, got {tau}"
            )));
        }
        if samples.len() < 2 {
            return Err(Error::Grid(format!(
                "need at least 2 samples, got {}",
                samples.len()
            )));
        }
        let (d, n) = (samples[0].dim(), samples[0].rank());
        if let Some(bad) = samples.iter().find(|p| p.dim() != d || p.rank() != n) {
            return Err(Error::Shape(format!(
                "all samples must share dim {d} and rank {n}; found dim {} rank {}",
                bad.dim(),
                bad.rank()
            )));
        }
        for (index, pair) in samples.windows(2).enumerate() {
            let jump = op_norm(&(pair[1].matrix() - pair[0].matrix()));
            if jump >= MAX_SAMPLE_JUMP {
                return Err(Error::UnderResolved { index, jump });
            }
        }
        Ok(ProjectorPath { tau, samples })
    }

    /// Sample `f` on `intervals + 1` uniform points of `[0, tau]`.
    pub fn from_fn(tau: f64, intervals: usize, f: impl Fn(f64) -> Projector) -> Result<Self> {
        if intervals == 0 {
            return Err(Error::Grid("need at least one interval".into()));
        }
        let samples = (0..=intervals)
            .map(|j| f(tau * j as f64 / intervals as f64))
            .collect();
        Self::new(tau, samples)
    }

    /// Path traced by unit state vectors `psi(t)`.
    pub fn from_states(tau: f64, intervals: usize, psi: impl Fn(f64) -> CVec) -> Result<Self> {
        Self::from_fn(tau, intervals, |t| {
            let v = psi(t);
            let frame = NFrame::new_unchecked(CMat::from_column_slice(v.len(), 1, v.as_slice()));
            projector_of(&frame)
        })
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn samples(&self) -> &[Projector] {
        &self.samples
    }

    pub fn intervals(&self) -> usize {
        self.samples.len() - 1
    }

    pub fn dt(&self) -> f64 {
        self.tau / self.intervals() as f64
    }

    pub fn dim(&self) -> usize {
        self.samples[0].dim()
    }

    pub fn rank(&self) -> usize {
        self.samples[0].rank()
    }

    pub fn times(&self) -> Vec<f64> {
        grid(self.tau, self.intervals())
    }

    pub fn first(&self) -> &Projector {
        &self.samples[0]
    }

    pub fn last(&self) -> &Projector {
        self.samples.last().expect("nonempty")
    }
}

/// `intervals + 1` uniform points on `[0, tau]`.
pub fn grid(tau: f64, intervals: usize) -> Vec<f64> {
    (0..=intervals)
        .map(|j| tau * j as f64 / intervals as f64)
        .collect()
}
