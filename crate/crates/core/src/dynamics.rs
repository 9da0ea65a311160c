//! Time-dependent Hamiltonians, unitary propagation and rotating-frame
//! transformations.
//!
//! A rotating frame `R_t` maps states `|psi> -> R_t |psi>`, observables
//! `O -> R_t O R_t^dag`, and Hamiltonians `H -> R_t H R_t^dag + A_t` with the
//! frame potential `A_t = i (dR_t/dt) R_t^dag`.

use crate::error::{Error, Result};
use crate::frames::{grid, projector_of, NFrame, Projector, ProjectorPath};
use crate::matrixcore::{
    c, eig_hermitian_unchecked, ensure_hermitian, ensure_unitary, hermitian_part, identity,
    max_abs, polar_unitary, CMat, Tolerance, C64, I,
};

/// Default number of propagation steps per scenario.
pub const DEFAULT_STEPS: usize = 4096;

/// Grid used when a frame transformation of two analytic paths has to be
/// tabulated.
pub const DEFAULT_INTERVALS: usize = 4096;

const DURATION_MATCH: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub enum HamiltonianKind {
    Constant(CMat),
    /// `H_t = e^{-itB} H0 e^{itB}`.
    RotatedConstant {
        h0: CMat,
        b: CMat,
    },
    /// Uniform-grid samples, linearly interpolated in between.
    Sampled(Vec<CMat>),
}

/// Hermitian operator `H_t` on `[0, tau]`, optionally shifted by a scalar
/// offset `eps_t * 1` sampled on its own uniform grid.
#[derive(Debug, Clone, PartialEq)]
pub struct HamiltonianPath {
    dim: usize,
    tau: f64,
    kind: HamiltonianKind,
    offset: Option<Vec<f64>>,
}

fn check_tau(tau: f64) -> Result<()> {
    if !tau.is_finite() || tau <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "duration must be positive, got {tau}"
        )));
    }
    Ok(())
}

fn check_dim(m: &CMat, dim: usize, what: &str) -> Result<()> {
    if m.nrows() != dim || m.ncols() != dim {
        return Err(Error::Shape(format!(
            "{what} must be {dim}x{dim}, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    Ok(())
}

/// Linear interpolation on a uniform grid of `values.len()` points over `[0, tau]`.
fn interp_index(len: usize, tau: f64, t: f64) -> (usize, f64) {
    let intervals = len - 1;
    let x = (t / tau * intervals as f64).clamp(0.0, intervals as f64);
    let j = (x.floor() as usize).min(intervals - 1);
    (j, x - j as f64)
}

fn interp_scalar(values: &[f64], tau: f64, t: f64) -> f64 {
    let (j, f) = interp_index(values.len(), tau, t);
    values[j] * (1.0 - f) + values[j + 1] * f
}

/// Exact integral over `[0, t]` of the piecewise-linear interpolant.
fn integrate_scalar(values: &[f64], tau: f64, t: f64) -> f64 {
    let intervals = values.len() - 1;
    let h = tau / intervals as f64;
    let (j, f) = interp_index(values.len(), tau, t);
    let whole: f64 = values
        .windows(2)
        .take(j)
        .map(|w| 0.5 * h * (w[0] + w[1]))
        .sum();
    let partial_end = values[j] * (1.0 - f) + values[j + 1] * f;
    whole + 0.5 * f * h * (values[j] + partial_end)
}

impl HamiltonianPath {
    pub fn constant(h: CMat, tau: f64) -> Result<Self> {
        check_tau(tau)?;
        ensure_hermitian(&h, Tolerance::default().structural, "Hamiltonian")?;
        Ok(HamiltonianPath {
            dim: h.nrows(),
            tau,
            kind: HamiltonianKind::Constant(h),
            offset: None,
        })
    }

    pub fn rotated_constant(h0: CMat, b: CMat, tau: f64) -> Result<Self> {
        check_tau(tau)?;
        let tol = Tolerance::default().structural;
        ensure_hermitian(&h0, tol, "Hamiltonian H0")?;
        ensure_hermitian(&b, tol, "rotation generator B")?;
        check_dim(&b, h0.nrows(), "rotation generator B")?;
        Ok(HamiltonianPath {
            dim: h0.nrows(),
            tau,
            kind: HamiltonianKind::RotatedConstant { h0, b },
            offset: None,
        })
    }

    pub fn sampled(samples: Vec<CMat>, tau: f64) -> Result<Self> {
        check_tau(tau)?;
        if samples.len() < 2 {
            return Err(Error::Grid(format!(
                "sampled Hamiltonian needs at least 2 samples, got {}",
                samples.len()
            )));
        }
        let tol = Tolerance::default().structural;
        let dim = samples[0].nrows();
        for s in &samples {
            ensure_hermitian(s, tol, "Hamiltonian sample")?;
            check_dim(s, dim, "Hamiltonian sample")?;
        }
        Ok(HamiltonianPath {
            dim,
            tau,
            kind: HamiltonianKind::Sampled(samples),
            offset: None,
        })
    }

    /// Tabulate an arbitrary Hermitian-valued function on a uniform grid.
    pub fn from_fn(tau: f64, intervals: usize, f: impl Fn(f64) -> CMat) -> Result<Self> {
        if intervals == 0 {
            return Err(Error::Grid("need at least one interval".into()));
        }
        let samples = grid(tau, intervals).into_iter().map(f).collect();
        Self::sampled(samples, tau)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn kind(&self) -> &HamiltonianKind {
        &self.kind
    }

    pub fn offset(&self) -> Option<&[f64]> {
        self.offset.as_deref()
    }

    /// Number of grid intervals of a sampled path.
    pub fn sample_intervals(&self) -> Option<usize> {
        match &self.kind {
            HamiltonianKind::Sampled(s) => Some(s.len() - 1),
            _ => None,
        }
    }

    /// Scalar offset `eps_t` (zero when absent).
    pub fn offset_at(&self, t: f64) -> f64 {
        self.offset
            .as_ref()
            .map_or(0.0, |eps| interp_scalar(eps, self.tau, t))
    }

    /// `int_0^t eps_s ds`.
    pub fn offset_integral(&self, t: f64) -> f64 {
        self.offset
            .as_ref()
            .map_or(0.0, |eps| integrate_scalar(eps, self.tau, t))
    }

    /// `H_t` without the scalar offset.
    pub fn base_at(&self, t: f64) -> CMat {
        match &self.kind {
            HamiltonianKind::Constant(h) => h.clone(),
            HamiltonianKind::RotatedConstant { h0, b } => {
                let eig = eig_hermitian_unchecked(b);
                let u = eig.exp_neg_i(t);
                hermitian_part(&(&u * h0 * u.adjoint()))
            }
            HamiltonianKind::Sampled(samples) => {
                let (j, f) = interp_index(samples.len(), self.tau, t);
                &samples[j] * c(1.0 - f, 0.0) + &samples[j + 1] * c(f, 0.0)
            }
        }
    }

    /// `H_t`, including the scalar offset.
    pub fn at(&self, t: f64) -> CMat {
        let base = self.base_at(t);
        match &self.offset {
            None => base,
            Some(_) => base + identity(self.dim) * c(self.offset_at(t), 0.0),
        }
    }

    /// Values at `intervals + 1` uniform grid points.
    pub fn tabulate(&self, intervals: usize) -> Vec<CMat> {
        let times = grid(self.tau, intervals);
        match &self.kind {
            HamiltonianKind::RotatedConstant { h0, b } => {
                let eig = eig_hermitian_unchecked(b);
                times
                    .iter()
                    .map(|&t| {
                        let u = eig.exp_neg_i(t);
                        let base = hermitian_part(&(&u * h0 * u.adjoint()));
                        self.add_offset_value(base, t)
                    })
                    .collect()
            }
            _ => times.iter().map(|&t| self.at(t)).collect(),
        }
    }

    fn add_offset_value(&self, base: CMat, t: f64) -> CMat {
        match &self.offset {
            None => base,
            Some(_) => base + identity(self.dim) * c(self.offset_at(t), 0.0),
        }
    }

    /// Same dynamics tabulated as a sampled path (offset folded in).
    pub fn to_sampled(&self, intervals: usize) -> Result<HamiltonianPath> {
        if intervals == 0 {
            return Err(Error::Grid("need at least one interval".into()));
        }
        HamiltonianPath::sampled(self.tabulate(intervals), self.tau)
    }

    /// Add `eps_t * 1` where `eps` is sampled on a uniform grid over `[0, tau]`.
    pub fn with_offset(&self, eps: &[f64]) -> Result<HamiltonianPath> {
        if eps.len() < 2 {
            return Err(Error::Grid(
                "shift function needs at least 2 samples".into(),
            ));
        }
        if eps.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidParameter(
                "shift values must be finite".into(),
            ));
        }
        if let HamiltonianKind::Sampled(s) = &self.kind {
            if s.len() != eps.len() {
                return Err(Error::Grid(format!(
                    "shift grid has {} samples but the Hamiltonian has {}",
                    eps.len(),
                    s.len()
                )));
            }
        }
        let combined = match &self.offset {
            None => eps.to_vec(),
            Some(prev) if prev.len() == eps.len() => {
                prev.iter().zip(eps).map(|(a, b)| a + b).collect()
            }
            Some(_) => {
                return Err(Error::Grid(
                    "shift grid differs from the existing offset grid".into(),
                ))
            }
        };
        Ok(HamiltonianPath {
            offset: Some(combined),
            ..self.clone()
        })
    }

    /// The same path run `factor` times slower: `H'_t = H_{t/f} / f` on `[0, f tau]`.
    pub fn time_dilated(&self, factor: f64) -> Result<HamiltonianPath> {
        if factor.is_nan() || factor <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "dilation factor must be positive, got {factor}"
            )));
        }
        let s = c(1.0 / factor, 0.0);
        let kind = match &self.kind {
            HamiltonianKind::Constant(h) => HamiltonianKind::Constant(h * s),
            HamiltonianKind::RotatedConstant { h0, b } => HamiltonianKind::RotatedConstant {
                h0: h0 * s,
                b: b * s,
            },
            HamiltonianKind::Sampled(v) => {
                HamiltonianKind::Sampled(v.iter().map(|m| m * s).collect())
            }
        };
        Ok(HamiltonianPath {
            dim: self.dim,
            tau: self.tau * factor,
            kind,
            offset: self
                .offset
                .as_ref()
                .map(|eps| eps.iter().map(|x| x / factor).collect()),
        })
    }

    /// Largest Hermiticity defect over the payload.
    pub fn hermiticity_defect(&self) -> f64 {
        use crate::matrixcore::hermiticity_defect as hd;
        match &self.kind {
            HamiltonianKind::Constant(h) => hd(h),
            HamiltonianKind::RotatedConstant { h0, b } => hd(h0).max(hd(b)),
            HamiltonianKind::Sampled(s) => s.iter().map(hd).fold(0.0, f64::max),
        }
    }
}

/// Uniform-grid samples of the time-evolution operator, `U_0 = 1`.
#[derive(Debug, Clone)]
pub struct PropagatorPath {
    tau: f64,
    samples: Vec<CMat>,
}

impl PropagatorPath {
    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn samples(&self) -> &[CMat] {
        &self.samples
    }

    pub fn steps(&self) -> usize {
        self.samples.len() - 1
    }

    pub fn times(&self) -> Vec<f64> {
        grid(self.tau, self.steps())
    }

    pub fn last(&self) -> &CMat {
        self.samples.last().expect("nonempty")
    }

    /// `V_t = U_t V0` at every sample.
    pub fn frames(&self, v0: &NFrame) -> Vec<NFrame> {
        self.samples.iter().map(|u| v0.transformed(u)).collect()
    }

    /// Path of `P_t = U_t P_0 U_t^dag` for `P_0 = V0 V0^dag`.
    pub fn projector_path(&self, v0: &NFrame) -> Result<ProjectorPath> {
        let samples = self
            .samples
            .iter()
            .map(|u| projector_of(&v0.transformed(u)))
            .collect();
        ProjectorPath::new(self.tau, samples)
    }
}

/// Propagate `H` on a uniform grid of `steps` intervals.
///
/// Sampled paths use second-order midpoint exponential stepping,
/// `U_{t+dt} = exp(-i dt H(t + dt/2)) U_t`. Constant and rotated-constant
/// paths are propagated in closed form: for `H_t = e^{-itB} H0 e^{itB}` the
/// rotating frame `e^{itB}` turns the dynamics into the constant generator
/// `H0 - B`, so `U_t = e^{-itB} e^{-it(H0 - B)}`. A scalar offset contributes
/// the global phase `exp(-i int_0^t eps)`.
pub fn propagate(h: &HamiltonianPath, steps: usize) -> Result<PropagatorPath> {
    if steps < 2 {
        return Err(Error::Grid(format!("need at least 2 steps, got {steps}")));
    }
    let times = grid(h.tau, steps);
    let mut samples: Vec<CMat> = match &h.kind {
        HamiltonianKind::Constant(m) => {
            let eig = eig_hermitian_unchecked(m);
            times.iter().map(|&t| eig.exp_neg_i(t)).collect()
        }
        HamiltonianKind::RotatedConstant { h0, b } => {
            let eig_b = eig_hermitian_unchecked(b);
            let eig_k = eig_hermitian_unchecked(&hermitian_part(&(h0 - b)));
            times
                .iter()
                .map(|&t| eig_b.exp_neg_i(t) * eig_k.exp_neg_i(t))
                .collect()
        }
        HamiltonianKind::Sampled(s) => {
            let intervals = s.len() - 1;
            if !steps.is_multiple_of(intervals) {
                return Err(Error::Grid(format!(
                    "steps ({steps}) must be a multiple of the sample intervals ({intervals})"
                )));
            }
            let dt = h.tau / steps as f64;
            let mut out = Vec::with_capacity(steps + 1);
            let mut u = identity(h.dim);
            out.push(u.clone());
            for k in 0..steps {
                let mid = h.base_at((k as f64 + 0.5) * dt);
                u = eig_hermitian_unchecked(&mid).exp_neg_i(dt) * u;
                out.push(u.clone());
            }
            out
        }
    };
    if h.offset.is_some() {
        for (u, &t) in samples.iter_mut().zip(&times) {
            *u *= C64::from_polar(1.0, -h.offset_integral(t));
        }
    }
    Ok(PropagatorPath {
        tau: h.tau,
        samples,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub enum RotatingFrameKind {
    /// `R_t = e^{itB}`.
    ConstantGenerator(CMat),
    /// Uniform-grid samples of `R_t`.
    Sampled(Vec<CMat>),
}

/// Time-dependent unitary change of picture `R_t` on `[0, tau]`.
#[derive(Debug, Clone, PartialEq)]
pub struct RotatingFrame {
    dim: usize,
    tau: f64,
    kind: RotatingFrameKind,
}

impl RotatingFrame {
    pub fn constant_generator(b: CMat, tau: f64) -> Result<Self> {
        check_tau(tau)?;
        ensure_hermitian(&b, Tolerance::default().structural, "frame generator")?;
        Ok(RotatingFrame {
            dim: b.nrows(),
            tau,
            kind: RotatingFrameKind::ConstantGenerator(b),
        })
    }

    pub fn identity(dim: usize, tau: f64) -> Result<Self> {
        Self::constant_generator(CMat::zeros(dim, dim), tau)
    }

    pub fn sampled(samples: Vec<CMat>, tau: f64) -> Result<Self> {
        check_tau(tau)?;
        if samples.len() < 2 {
            return Err(Error::Grid("sampled frame needs at least 2 samples".into()));
        }
        let dim = samples[0].nrows();
        for s in &samples {
            check_dim(s, dim, "frame sample")?;
            ensure_unitary(s, Tolerance::default().structural, "frame sample unitarity")?;
        }
        Ok(RotatingFrame {
            dim,
            tau,
            kind: RotatingFrameKind::Sampled(samples),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn kind(&self) -> &RotatingFrameKind {
        &self.kind
    }

    pub fn sample_intervals(&self) -> Option<usize> {
        match &self.kind {
            RotatingFrameKind::Sampled(s) => Some(s.len() - 1),
            _ => None,
        }
    }

    /// `R_t`. Sampled frames are interpolated linearly and projected back
    /// onto the unitary group.
    pub fn at(&self, t: f64) -> CMat {
        match &self.kind {
            RotatingFrameKind::ConstantGenerator(b) => eig_hermitian_unchecked(b).exp_neg_i(-t),
            RotatingFrameKind::Sampled(s) => {
                let (j, f) = interp_index(s.len(), self.tau, t);
                if f == 0.0 {
                    return s[j].clone();
                }
                if f == 1.0 {
                    return s[j + 1].clone();
                }
                let lin = &s[j] * c(1.0 - f, 0.0) + &s[j + 1] * c(f, 0.0);
                polar_unitary(&lin, 1e-12).unwrap_or(lin)
            }
        }
    }

    /// Tabulate `R_t` on `intervals + 1` grid points.
    pub fn tabulate(&self, intervals: usize) -> Vec<CMat> {
        match &self.kind {
            RotatingFrameKind::ConstantGenerator(b) => {
                let eig = eig_hermitian_unchecked(b);
                grid(self.tau, intervals)
                    .iter()
                    .map(|&t| eig.exp_neg_i(-t))
                    .collect()
            }
            RotatingFrameKind::Sampled(s) if s.len() == intervals + 1 => s.clone(),
            RotatingFrameKind::Sampled(_) => grid(self.tau, intervals)
                .iter()
                .map(|&t| self.at(t))
                .collect(),
        }
    }

    pub fn is_identity(&self) -> bool {
        match &self.kind {
            RotatingFrameKind::ConstantGenerator(b) => max_abs(b) == 0.0,
            RotatingFrameKind::Sampled(s) => {
                s.iter().all(|r| max_abs(&(r - identity(self.dim))) == 0.0)
            }
        }
    }
}

/// Frame potential `A_t = i (dR_t/dt) R_t^dag`.
///
/// For `R_t = e^{itB}` this is exactly `-B`. Sampled frames use central
/// differences inside and second-order one-sided stencils at the ends.
pub fn frame_potential(r: &RotatingFrame) -> Result<HamiltonianPath> {
    match &r.kind {
        RotatingFrameKind::ConstantGenerator(b) => HamiltonianPath::constant(-b.clone(), r.tau),
        RotatingFrameKind::Sampled(s) => {
            let n = s.len();
            if n < 3 {
                return Err(Error::Grid(format!(
                    "frame potential needs at least 3 frame samples, got {n}"
                )));
            }
            let h = r.tau / (n - 1) as f64;
            let samples = (0..n)
                .map(|j| {
                    let rdot = if j == 0 {
                        (&s[1] * c(4.0, 0.0) - &s[0] * c(3.0, 0.0) - &s[2]) / c(2.0 * h, 0.0)
                    } else if j == n - 1 {
                        (&s[n - 1] * c(3.0, 0.0) - &s[n - 2] * c(4.0, 0.0) + &s[n - 3])
                            / c(2.0 * h, 0.0)
                    } else {
                        (&s[j + 1] - &s[j - 1]) / c(2.0 * h, 0.0)
                    };
                    hermitian_part(&(rdot * s[j].adjoint() * I))
                })
                .collect();
            HamiltonianPath::sampled(samples, r.tau)
        }
    }
}

fn check_compatible(h: &HamiltonianPath, r: &RotatingFrame) -> Result<()> {
    if h.dim != r.dim {
        return Err(Error::Shape(format!(
            "Hamiltonian dimension {} differs from frame dimension {}",
            h.dim, r.dim
        )));
    }
    if (h.tau - r.tau).abs() > DURATION_MATCH * h.tau.max(r.tau) {
        return Err(Error::Grid(format!(
            "Hamiltonian duration {} differs from frame duration {}",
            h.tau, r.tau
        )));
    }
    Ok(())
}

/// Grid on which a frame transformation is tabulated: the common sample grid
/// of the inputs, or [`DEFAULT_INTERVALS`] when both are in closed form.
fn transform_intervals(h: &HamiltonianPath, r: &RotatingFrame) -> Result<usize> {
    match (h.sample_intervals(), r.sample_intervals()) {
        (Some(a), Some(b)) if a != b => Err(Error::Grid(format!(
            "Hamiltonian has {a} intervals but the frame has {b}"
        ))),
        (Some(a), _) => Ok(a),
        (None, Some(b)) => Ok(b),
        (None, None) => Ok(DEFAULT_INTERVALS),
    }
}

fn commutes(a: &CMat, b: &CMat) -> bool {
    let scale = max_abs(a).max(max_abs(b)).max(1.0);
    max_abs(&(a * b - b * a)) <= 1e-13 * scale * scale
}

/// `H^RF_t = R_t H_t R_t^dag + i (dR_t/dt) R_t^dag`.
pub fn to_rotating_frame(h: &HamiltonianPath, r: &RotatingFrame) -> Result<HamiltonianPath> {
    check_compatible(h, r)?;
    if let RotatingFrameKind::ConstantGenerator(b) = &r.kind {
        let scale = max_abs(b).max(1.0);
        let closed_form = match &h.kind {
            HamiltonianKind::RotatedConstant { h0, b: hb }
                if max_abs(&(hb - b)) <= 1e-13 * scale =>
            {
                Some(h0 - b)
            }
            HamiltonianKind::Constant(m) if commutes(m, b) => Some(m - b),
            _ => None,
        };
        if let Some(m) = closed_form {
            let out = HamiltonianPath::constant(hermitian_part(&m), h.tau)?;
            return Ok(HamiltonianPath {
                offset: h.offset.clone(),
                ..out
            });
        }
    }
    let intervals = transform_intervals(h, r)?;
    let potential = frame_potential(r)?;
    let frames = r.tabulate(intervals);
    let base = strip_offset(h).tabulate(intervals);
    let pot = potential.tabulate(intervals);
    let samples = frames
        .iter()
        .zip(base.iter().zip(&pot))
        .map(|(rt, (ht, at))| hermitian_part(&(rt * ht * rt.adjoint() + at)))
        .collect();
    let out = HamiltonianPath::sampled(samples, h.tau)?;
    reattach_offset(out, h)
}

/// Inverse of [`to_rotating_frame`]: `H_t = R_t^dag (H^RF_t - A_t) R_t`.
pub fn from_rotating_frame(h_rf: &HamiltonianPath, r: &RotatingFrame) -> Result<HamiltonianPath> {
    check_compatible(h_rf, r)?;
    if let (RotatingFrameKind::ConstantGenerator(b), HamiltonianKind::Constant(k)) =
        (&r.kind, &h_rf.kind)
    {
        let out = HamiltonianPath::rotated_constant(hermitian_part(&(k + b)), b.clone(), h_rf.tau)?;
        return Ok(HamiltonianPath {
            offset: h_rf.offset.clone(),
            ..out
        });
    }
    let intervals = transform_intervals(h_rf, r)?;
    let potential = frame_potential(r)?;
    let frames = r.tabulate(intervals);
    let base = strip_offset(h_rf).tabulate(intervals);
    let pot = potential.tabulate(intervals);
    let samples = frames
        .iter()
        .zip(base.iter().zip(&pot))
        .map(|(rt, (ht, at))| hermitian_part(&(rt.adjoint() * (ht - at) * rt)))
        .collect();
    let out = HamiltonianPath::sampled(samples, h_rf.tau)?;
    reattach_offset(out, h_rf)
}

fn strip_offset(h: &HamiltonianPath) -> HamiltonianPath {
    HamiltonianPath {
        offset: None,
        ..h.clone()
    }
}

/// Scalar offsets commute with every frame change, so they carry over
/// unchanged; if the grids disagree they are folded into the samples.
fn reattach_offset(out: HamiltonianPath, original: &HamiltonianPath) -> Result<HamiltonianPath> {
    match &original.offset {
        None => Ok(out),
        Some(eps) if Some(eps.len() - 1) == out.sample_intervals() => out.with_offset(eps),
        Some(_) => {
            let intervals = out.sample_intervals().expect("tabulated output");
            let samples = grid(out.tau, intervals)
                .iter()
                .zip(out.tabulate(intervals))
                .map(|(&t, m)| m + identity(out.dim) * c(original.offset_at(t), 0.0))
                .collect();
            HamiltonianPath::sampled(samples, out.tau)
        }
    }
}

/// Image of a lab-frame subspace path in the rotating picture,
/// `P^RF_t = R_t P_t R_t^dag`, on the path's own grid.
pub fn rotate_projector_path(p: &ProjectorPath, r: &RotatingFrame) -> Result<ProjectorPath> {
    if p.dim() != r.dim {
        return Err(Error::Shape(format!(
            "path dimension {} differs from frame dimension {}",
            p.dim(),
            r.dim
        )));
    }
    let frames = r.tabulate(p.intervals());
    let samples = p
        .samples()
        .iter()
        .zip(&frames)
        .map(|(pt, rt)| {
            Projector::new_unchecked(
                hermitian_part(&(rt * pt.matrix() * rt.adjoint())),
                pt.rank(),
            )
        })
        .collect();
    ProjectorPath::new(p.tau(), samples)
}
