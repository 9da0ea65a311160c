//! Holonomies, curve length, isoholonomic bounds and speed-limit times.
//!
//! Lengths are Grassmann lengths `int sqrt(tr(dP/dt ^2) / 2) dt` and speeds are
//! measured by the skew information `I(H; P) = -tr([H, P]^2) / 2`, whose square
//! root is the instantaneous Grassmann speed of a driven subspace.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::dynamics::{propagate, HamiltonianPath};
use crate::error::{Error, Result};
use crate::frames::{NFrame, ProjectorPath};
use crate::matrixcore::{
    commutator, eig_unitary_unchecked, ensure_unitary, identity, polar_unitary, trace, CMat,
    Tolerance, UnitaryEigen, C64,
};
use crate::transport::{horizontal_lift_with, loop_closure_at, FramePath};

/// Relative slack allowed when asserting `tau >= tau_QSL`.
pub const QSL_SLACK: f64 = 1e-3;

/// Speeds below this are treated as a stationary evolution.
pub const MIN_MEAN_SPEED: f64 = 1e-12;

/// An n x n unitary together with its cached eigendecomposition.
#[derive(Debug, Clone)]
pub struct GateSpec {
    matrix: CMat,
    eigen: UnitaryEigen,
}

impl GateSpec {
    pub fn new(matrix: CMat) -> Result<Self> {
        Self::with_tolerance(matrix, Tolerance::default().structural)
    }

    /// Accepts `matrix` if it is unitary within `tol`.
    pub fn with_tolerance(matrix: CMat, tol: f64) -> Result<Self> {
        ensure_unitary(&matrix, tol, "gate unitarity")?;
        let eigen = eig_unitary_unchecked(&matrix, Tolerance::default().structural);
        Ok(GateSpec { matrix, eigen })
    }

    pub fn identity(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("gate size must be positive".into()));
        }
        Self::new(identity(n))
    }

    /// `diag(e^{i theta_1}, ..., e^{i theta_n})`.
    pub fn from_phases(phases: &[f64]) -> Result<Self> {
        if phases.is_empty() || phases.iter().any(|p| !p.is_finite()) {
            return Err(Error::InvalidParameter(
                "phases must be finite and nonempty".into(),
            ));
        }
        Self::new(crate::matrixcore::diag_phases(phases))
    }

    pub fn n(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMat {
        &self.matrix
    }

    /// Eigenphases in `[0, 2pi)`, ascending.
    pub fn eigenphases(&self) -> &[f64] {
        &self.eigen.phases
    }

    pub fn eigen(&self) -> &UnitaryEigen {
        &self.eigen
    }

    /// `e^{i phi} G`.
    pub fn with_global_phase(&self, phi: f64) -> GateSpec {
        let m = &self.matrix * C64::from_polar(1.0, phi);
        GateSpec::with_tolerance(m, f64::INFINITY).expect("phase keeps unitarity")
    }

    /// `S^dag G S`.
    pub fn conjugated(&self, s: &CMat) -> Result<GateSpec> {
        GateSpec::new(s.adjoint() * &self.matrix * s)
    }
}

/// A gate up to global phase.
#[derive(Debug, Clone)]
pub struct ProjectiveGate {
    representative: GateSpec,
    canonical: GateSpec,
}

impl ProjectiveGate {
    pub fn new(representative: GateSpec) -> Self {
        let n = representative.n();
        let det = representative.matrix.determinant();
        let root = C64::from_polar(1.0, -det.arg() / n as f64);
        let canonical = GateSpec::with_tolerance(&representative.matrix * root, f64::INFINITY)
            .expect("phase keeps unitarity");
        ProjectiveGate {
            representative,
            canonical,
        }
    }

    pub fn representative(&self) -> &GateSpec {
        &self.representative
    }

    /// Representative with unit determinant, using the principal branch of
    /// the n-th root.
    pub fn canonical(&self) -> &GateSpec {
        &self.canonical
    }
}

impl From<GateSpec> for ProjectiveGate {
    fn from(g: GateSpec) -> Self {
        ProjectiveGate::new(g)
    }
}

/// Holonomy of a closed loop: `Gamma = V0^dag V_tau` and the full-space
/// operator `Pi_tau = V_tau V0^dag`.
#[derive(Debug, Clone)]
pub struct Holonomy {
    pub gate: GateSpec,
    pub pi_tau: CMat,
    pub closure_defect: f64,
}

fn finite_difference(samples: &[&CMat], k: usize, h: f64) -> CMat {
    let n = samples.len();
    if n == 2 {
        return (samples[1] - samples[0]) / C64::from(h);
    }
    if k == 0 {
        ((samples[1] - samples[0]) * C64::from(3.0) - (samples[2] - samples[1]))
            / C64::from(2.0 * h)
    } else if k == n - 1 {
        ((samples[n - 1] - samples[n - 2]) * C64::from(3.0) - (samples[n - 2] - samples[n - 3]))
            / C64::from(2.0 * h)
    } else {
        (samples[k + 1] - samples[k - 1]) / C64::from(2.0 * h)
    }
}

/// Composite trapezoid rule on a uniform grid.
pub fn trapezoid(values: &[f64], dt: f64) -> f64 {
    match values.len() {
        0 | 1 => 0.0,
        n => dt * (values[1..n - 1].iter().sum::<f64>() + 0.5 * (values[0] + values[n - 1])),
    }
}

/// Grassmann speed `sqrt(tr(dP/dt^2) / 2)` at every sample.
pub fn grassmann_speeds(p: &ProjectorPath) -> Vec<f64> {
    let mats: Vec<&CMat> = p.samples().iter().map(|s| s.matrix()).collect();
    (0..mats.len())
        .map(|k| {
            let v = finite_difference(&mats, k, p.dt());
            (v.norm_squared() / 2.0).sqrt()
        })
        .collect()
}

pub fn curve_length(p: &ProjectorPath) -> f64 {
    trapezoid(&grassmann_speeds(p), p.dt())
}

/// `Gamma = V0^dag V_tau` for an arbitrary frame path, projected to the
/// nearest unitary after checking it is unitary within `3 x` the integration
/// tolerance.
pub fn holonomy_of_lift(lift: &FramePath, tol: &Tolerance) -> Result<GateSpec> {
    let raw = lift.first().matrix().adjoint() * lift.last().matrix();
    ensure_unitary(&raw, 3.0 * tol.integration, "holonomy")?;
    GateSpec::new(polar_unitary(&raw, tol.structural)?)
}

fn ensure_closed(p: &ProjectorPath, tol: &Tolerance) -> Result<f64> {
    let closure = loop_closure_at(p, tol.integration);
    if !closure.closed {
        return Err(Error::OpenLoop {
            defect: closure.defect,
            tolerance: tol.integration,
        });
    }
    Ok(closure.defect)
}

pub fn holonomy(p: &ProjectorPath, v0: &NFrame, tol: &Tolerance) -> Result<Holonomy> {
    let closure_defect = ensure_closed(p, tol)?;
    let lift = horizontal_lift_with(p, v0, tol)?;
    let gate = holonomy_of_lift(&lift, tol)?;
    let pi_tau = lift.last().matrix() * v0.matrix().adjoint();
    Ok(Holonomy {
        gate,
        pi_tau,
        closure_defect,
    })
}

pub fn projective_holonomy(
    p: &ProjectorPath,
    v0: &NFrame,
    tol: &Tolerance,
) -> Result<ProjectiveGate> {
    Ok(holonomy(p, v0, tol)?.gate.into())
}

fn cone(theta: f64) -> f64 {
    (theta * (TAU - theta)).max(0.0)
}

/// `L(Gamma) = sqrt(sum theta_j (2pi - theta_j))`.
pub fn isoholonomic_bound(g: &GateSpec) -> f64 {
    g.eigenphases().iter().map(|&t| cone(t)).sum::<f64>().sqrt()
}

/// Value of the conventional bound for the representative `e^{-i s} Gamma`.
fn shifted_bound(phases: &[f64], s: f64) -> f64 {
    phases
        .iter()
        .map(|&t| {
            let x = (t - s).abs();
            cone(x.min(TAU))
        })
        .sum::<f64>()
        .sqrt()
}

/// `L(Gamma bar)`: the smallest conventional bound over all global-phase
/// representatives. Between consecutive eigenphases the objective is a sum of
/// concave quadratics, so the minimum sits at a shift `theta_k`, with
/// `theta_0 = 0` included as a candidate. Returns the value and the minimizing
/// index `k` (0 for the zero shift, `l` for the `l`-th ascending eigenphase).
pub fn projective_isoholonomic_bound(g: &ProjectiveGate) -> (f64, usize) {
    let phases = g.representative().eigenphases();
    let mut best = (shifted_bound(phases, 0.0), 0);
    for (l, &s) in phases.iter().enumerate() {
        let v = shifted_bound(phases, s);
        if v < best.0 {
            best = (v, l + 1);
        }
    }
    best
}

/// `I(H; P) = -tr([H, P]^2) / 2`, evaluated as `|[H, P]|_F^2 / 2`.
pub fn skew_information(h: &CMat, p: &CMat) -> Result<f64> {
    if h.shape() != p.shape() || h.nrows() != h.ncols() {
        return Err(Error::Shape(format!(
            "Hamiltonian {:?} and projector {:?} must be square of equal size",
            h.shape(),
            p.shape()
        )));
    }
    Ok(commutator(h, p).norm_squared() / 2.0)
}

/// `sqrt(1 - |tr(G1^dag G2)|^2 / n^2)`, zero iff the gates agree up to phase.
pub fn projective_distance(g1: &GateSpec, g2: &GateSpec) -> Result<f64> {
    let n = g1.n();
    if g2.n() != n {
        return Err(Error::Shape(format!(
            "gate sizes differ: {n} vs {}",
            g2.n()
        )));
    }
    let overlap = trace(&(g1.matrix.adjoint() * &g2.matrix)).norm() / n as f64;
    Ok((1.0 - overlap * overlap).max(0.0).sqrt())
}

/// Which bound a speed-limit report uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundKind {
    Conventional,
    Projective,
}

#[derive(Debug, Clone)]
pub enum Target {
    Gate(GateSpec),
    Projective(ProjectiveGate),
}

impl Target {
    pub fn bound(&self) -> (f64, BoundKind) {
        match self {
            Target::Gate(g) => (isoholonomic_bound(g), BoundKind::Conventional),
            Target::Projective(g) => (projective_isoholonomic_bound(g).0, BoundKind::Projective),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QslReport {
    pub length: f64,
    pub bound: f64,
    pub bound_kind: BoundKind,
    pub mean_speed: f64,
    pub tau: f64,
    pub tau_qsl: f64,
    pub saturation_ratio: f64,
}

/// Everything measured along one propagated loop.
#[derive(Debug, Clone)]
pub struct DrivenLoop {
    pub path: ProjectorPath,
    pub holonomy: Holonomy,
    /// `sqrt(I(H_t; P_t))` at every sample.
    pub speeds: Vec<f64>,
    pub length: f64,
    pub mean_speed: f64,
}

/// Propagate `h` from `span(V0)` and measure the resulting loop.
pub fn drive_loop(
    h: &HamiltonianPath,
    v0: &NFrame,
    steps: usize,
    tol: &Tolerance,
) -> Result<DrivenLoop> {
    if h.dim() != v0.dim() {
        return Err(Error::Shape(format!(
            "Hamiltonian dimension {} differs from frame dimension {}",
            h.dim(),
            v0.dim()
        )));
    }
    let u = propagate(h, steps)?;
    let path = u.projector_path(v0)?;
    let holonomy = holonomy(&path, v0, tol)?;
    let hs = h.tabulate(steps);
    let speeds = hs
        .iter()
        .zip(path.samples())
        .map(|(ht, pt)| skew_information(ht, pt.matrix()).map(f64::sqrt))
        .collect::<Result<Vec<_>>>()?;
    let mean_speed = trapezoid(&speeds, path.dt()) / h.tau();
    let length = curve_length(&path);
    Ok(DrivenLoop {
        path,
        holonomy,
        speeds,
        length,
        mean_speed,
    })
}

impl DrivenLoop {
    /// Speed-limit report against `target`. Fails on a stationary evolution
    /// and when `tau` undercuts `tau_QSL` by more than [`QSL_SLACK`].
    pub fn report(&self, target: &Target) -> Result<QslReport> {
        let tau = self.path.tau();
        if self.mean_speed < MIN_MEAN_SPEED {
            return Err(Error::Degeneracy(format!(
                "mean speed {:.3e} vanishes; the speed limit is undefined",
                self.mean_speed
            )));
        }
        let (bound, bound_kind) = target.bound();
        let tau_qsl = bound / self.mean_speed;
        if tau_qsl > tau * (1.0 + QSL_SLACK) {
            return Err(Error::Verification {
                clause: "speed limit".into(),
                detail: format!("tau {tau} is below tau_QSL {tau_qsl}"),
            });
        }
        Ok(QslReport {
            length: self.length,
            bound,
            bound_kind,
            mean_speed: self.mean_speed,
            tau,
            tau_qsl,
            saturation_ratio: tau_qsl / tau,
        })
    }
}

/// Speed-limit report of the loop driven by `h` from `span(V0)`.
pub fn qsl_report(
    h: &HamiltonianPath,
    v0: &NFrame,
    target: &Target,
    steps: usize,
    tol: &Tolerance,
) -> Result<QslReport> {
    drive_loop(h, v0, steps, tol)?.report(target)
}
