//! Connection, horizontal lifts and parallel-transport condition checkers.
//!
//! Four checkers are provided: conventional and projective, each in the lab
//! frame and in a rotating frame. The conventional condition demands
//! `<v_k,t| H_t |v_l,t> = 0` for the transported frame; the projective one
//! only `<v_k,t| H_t |v_l,t> = eps_t delta_kl` for some real `eps_t`, which makes
//! it invariant under gauge shifts `H_t -> H_t + eps_t 1`.

use serde::{Deserialize, Serialize};

use crate::dynamics::{frame_potential, propagate, HamiltonianPath, RotatingFrame};
use crate::error::{Error, Result};
use crate::frames::{grid, orthonormalize_with, NFrame, ProjectorPath};
use crate::matrixcore::{c, max_abs, op_norm, skew_part, trace, CMat, Tolerance, C64};

/// Uniformly sampled path of n-frames on `[0, tau]`.
#[derive(Debug, Clone)]
pub struct FramePath {
    tau: f64,
    samples: Vec<NFrame>,
}

impl FramePath {
    pub fn new(tau: f64, samples: Vec<NFrame>) -> Result<Self> {
        if samples.len() < 2 {
            return Err(Error::Grid("frame path needs at least 2 samples".into()));
        }
        let (d, n) = (samples[0].dim(), samples[0].n());
        if samples.iter().any(|v| v.dim() != d || v.n() != n) {
            return Err(Error::Shape("all frames must share d and n".into()));
        }
        Ok(FramePath { tau, samples })
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn samples(&self) -> &[NFrame] {
        &self.samples
    }

    pub fn first(&self) -> &NFrame {
        &self.samples[0]
    }

    pub fn last(&self) -> &NFrame {
        self.samples.last().expect("nonempty")
    }

    pub fn dt(&self) -> f64 {
        self.tau / (self.samples.len() - 1) as f64
    }

    /// Finite-difference velocity at sample `k`: central inside, second-order
    /// one-sided at the ends.
    pub fn velocity(&self, k: usize) -> CMat {
        let s = &self.samples;
        let n = s.len();
        let h = self.dt();
        if n == 2 {
            return (s[1].matrix() - s[0].matrix()) / c(h, 0.0);
        }
        if k == 0 {
            (s[1].matrix() * c(4.0, 0.0) - s[0].matrix() * c(3.0, 0.0) - s[2].matrix())
                / c(2.0 * h, 0.0)
        } else if k == n - 1 {
            (s[n - 1].matrix() * c(3.0, 0.0) - s[n - 2].matrix() * c(4.0, 0.0) + s[n - 3].matrix())
                / c(2.0 * h, 0.0)
        } else {
            (s[k + 1].matrix() - s[k - 1].matrix()) / c(2.0 * h, 0.0)
        }
    }

    /// Skew part of `V^dag X` at sample `k`, the connection evaluated on the
    /// finite-difference velocity after removing its (non-tangent) Hermitian
    /// part.
    ///
    /// At the ends a two-point difference is used: the leading error of
    /// `V^dag (V(t+h) - V(t)) / h` is Hermitian, so its skew part is already
    /// second-order accurate.
    fn connection_at(&self, k: usize) -> CMat {
        let n = self.samples.len();
        let h = self.dt();
        let v = self.samples[k].matrix();
        let x = if k == 0 {
            (self.samples[1].matrix() - v) / c(h, 0.0)
        } else if k == n - 1 {
            (v - self.samples[n - 2].matrix()) / c(h, 0.0)
        } else {
            self.velocity(k)
        };
        skew_part(&(v.adjoint() * x))
    }

    /// Per-sample magnitude of the connection.
    pub fn connection_residuals(&self) -> Vec<f64> {
        (0..self.samples.len())
            .map(|k| max_abs(&self.connection_at(k)))
            .collect()
    }

    /// Connection residuals with the central part `i eps_t 1` removed, the
    /// quantity that vanishes along a projectively horizontal path.
    pub fn projective_connection_residuals(&self) -> Vec<f64> {
        (0..self.samples.len())
            .map(|k| {
                let a = self.connection_at(k);
                let m = a.nrows();
                let central = trace(&a) / c(m as f64, 0.0);
                max_abs(&(a - CMat::identity(m, m) * central))
            })
            .collect()
    }

    /// Per-sample `max |V_t V_t^dag - P_t|`.
    pub fn span_defects(&self, p: &ProjectorPath) -> Vec<f64> {
        self.samples
            .iter()
            .zip(p.samples())
            .map(|(v, pt)| max_abs(&(v.matrix() * v.matrix().adjoint() - pt.matrix())))
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

impl Verdict {
    pub fn passed(self) -> bool {
        self == Verdict::Pass
    }
}

/// Outcome of a transport-condition check over the time grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransportReport {
    pub max_residual: f64,
    pub verdict: Verdict,
    #[serde(rename = "residuals")]
    pub residual_trace: Vec<f64>,
    /// Estimated `eps_t`; empty for conventional checks.
    #[serde(rename = "epsilon")]
    pub epsilon_trace: Vec<f64>,
}

impl TransportReport {
    fn from_traces(residual_trace: Vec<f64>, epsilon_trace: Vec<f64>, tol: &Tolerance) -> Self {
        let max_residual = residual_trace.iter().copied().fold(0.0, f64::max);
        let verdict = if max_residual < tol.transport {
            Verdict::Pass
        } else {
            Verdict::Fail
        };
        TransportReport {
            max_residual,
            verdict,
            residual_trace,
            epsilon_trace,
        }
    }
}

/// Real scalar function `eps_t` on a uniform grid over `[0, tau]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShiftFunction {
    pub tau: f64,
    pub values: Vec<f64>,
}

impl ShiftFunction {
    pub fn new(tau: f64, values: Vec<f64>) -> Result<Self> {
        if !tau.is_finite() || tau <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "duration must be positive, got {tau}"
            )));
        }
        if values.len() < 2 {
            return Err(Error::Grid(
                "shift function needs at least 2 samples".into(),
            ));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter(
                "shift values must be finite".into(),
            ));
        }
        Ok(ShiftFunction { tau, values })
    }

    pub fn constant(tau: f64, intervals: usize, value: f64) -> Result<Self> {
        Self::new(tau, vec![value; intervals + 1])
    }

    pub fn from_fn(tau: f64, intervals: usize, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::new(tau, grid(tau, intervals).into_iter().map(f).collect())
    }

    pub fn intervals(&self) -> usize {
        self.values.len() - 1
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |a, v| a.max(v.abs()))
    }

    /// Trapezoidal running integral `int_0^{t_k} eps`.
    pub fn running_integral(&self) -> Vec<f64> {
        let h = self.tau / self.intervals() as f64;
        let mut acc = 0.0;
        let mut out = Vec::with_capacity(self.values.len());
        out.push(0.0);
        for w in self.values.windows(2) {
            acc += 0.5 * h * (w[0] + w[1]);
            out.push(acc);
        }
        out
    }
}

/// Aharonov-Anandan connection `A(X) = V^dag X` for `X` tangent at `V`.
pub fn connection_eval(v: &NFrame, x: &CMat, tol: &Tolerance) -> Result<CMat> {
    if x.shape() != v.matrix().shape() {
        return Err(Error::Shape(format!(
            "tangent vector must be {}x{}",
            v.dim(),
            v.n()
        )));
    }
    let a = v.matrix().adjoint() * x;
    let asym = max_abs(&(&a + a.adjoint()));
    if asym > tol.transport * max_abs(x).max(1.0) {
        return Err(Error::NotTangent(asym));
    }
    Ok(a)
}

fn check_initial_span(p: &ProjectorPath, v0: &NFrame, tol: &Tolerance) -> Result<()> {
    if v0.dim() != p.dim() || v0.n() != p.rank() {
        return Err(Error::Shape(format!(
            "frame is {}x{} but the path lives in G({}, {})",
            v0.dim(),
            v0.n(),
            p.rank(),
            p.dim()
        )));
    }
    let defect = max_abs(&(v0.matrix() * v0.matrix().adjoint() - p.first().matrix()));
    if defect > tol.structural.max(1e-12) * 10.0 {
        return Err(Error::SpanMismatch(defect));
    }
    Ok(())
}

/// Horizontal lift of a sampled subspace path starting at `V0`.
///
/// Between consecutive samples the path is taken to be the Grassmann
/// geodesic, along which the lift ODE `dV/dt = [dP/dt, P] V` integrates in
/// closed form: the lifted frame at the next sample is the polar factor of
/// `P_{k+1} V_k`. Each step is therefore exactly horizontal
/// (`V_k^dag V_{k+1}` is Hermitian positive) and exactly in span.
pub fn horizontal_lift(p: &ProjectorPath, v0: &NFrame) -> Result<FramePath> {
    horizontal_lift_with(p, v0, &Tolerance::default())
}

pub fn horizontal_lift_with(p: &ProjectorPath, v0: &NFrame, tol: &Tolerance) -> Result<FramePath> {
    check_initial_span(p, v0, tol)?;
    let mut samples = Vec::with_capacity(p.samples().len());
    samples.push(v0.clone());
    for (index, next) in p.samples().iter().enumerate().skip(1) {
        let prev = samples.last().expect("seeded");
        let m = next.matrix() * prev.matrix();
        let frame = orthonormalize_with(&m, tol).map_err(|_| Error::UnderResolved {
            index: index - 1,
            jump: op_norm(&(next.matrix() - p.samples()[index - 1].matrix())),
        })?;
        samples.push(frame);
    }
    FramePath::new(p.tau(), samples)
}

/// Projectively horizontal lift: the horizontal lift multiplied by
/// `exp(i int_0^t eps)`, so that `V^dag dV/dt = i eps_t 1`.
pub fn projective_horizontal_lift(
    p: &ProjectorPath,
    v0: &NFrame,
    eps: &ShiftFunction,
) -> Result<FramePath> {
    if eps.values.len() != p.samples().len() {
        return Err(Error::Grid(format!(
            "shift function has {} samples but the path has {}",
            eps.values.len(),
            p.samples().len()
        )));
    }
    if (eps.tau - p.tau()).abs() > 1e-12 * p.tau() {
        return Err(Error::Grid(
            "shift function and path durations differ".into(),
        ));
    }
    let lift = horizontal_lift(p, v0)?;
    let phases = eps.running_integral();
    let samples = lift
        .samples
        .iter()
        .zip(phases)
        .map(|(v, phi)| NFrame::new_unchecked(v.matrix() * C64::from_polar(1.0, phi)))
        .collect();
    FramePath::new(p.tau(), samples)
}

/// Condition matrices `M_t = V_t^dag G_t V_t` folded into a report.
fn report_from_conditions(
    conditions: &[CMat],
    projective: bool,
    tol: &Tolerance,
) -> TransportReport {
    let mut residuals = Vec::with_capacity(conditions.len());
    let mut epsilons = Vec::new();
    for m in conditions {
        if projective {
            let n = m.nrows();
            let eps = trace(m).re / n as f64;
            let shifted = m - CMat::identity(n, n) * c(eps, 0.0);
            residuals.push(max_abs(&shifted));
            epsilons.push(eps);
        } else {
            residuals.push(max_abs(m));
        }
    }
    TransportReport::from_traces(residuals, epsilons, tol)
}

fn check_frame_dim(h: &HamiltonianPath, v0: &NFrame) -> Result<()> {
    if h.dim() != v0.dim() {
        return Err(Error::Shape(format!(
            "Hamiltonian dimension {} differs from frame dimension {}",
            h.dim(),
            v0.dim()
        )));
    }
    Ok(())
}

fn lab_conditions(h: &HamiltonianPath, v0: &NFrame, steps: usize) -> Result<Vec<CMat>> {
    check_frame_dim(h, v0)?;
    let u = propagate(h, steps)?;
    let hs = h.tabulate(steps);
    Ok(u.samples()
        .iter()
        .zip(&hs)
        .map(|(ut, ht)| {
            let vt = ut * v0.matrix();
            vt.adjoint() * ht * vt
        })
        .collect())
}

fn rotating_conditions(
    h_rf: &HamiltonianPath,
    r: &RotatingFrame,
    v0: &NFrame,
    steps: usize,
) -> Result<Vec<CMat>> {
    check_frame_dim(h_rf, v0)?;
    if r.dim() != h_rf.dim() {
        return Err(Error::Shape(
            "frame and Hamiltonian dimensions differ".into(),
        ));
    }
    if (r.tau() - h_rf.tau()).abs() > 1e-12 * h_rf.tau() {
        return Err(Error::Grid("frame and Hamiltonian durations differ".into()));
    }
    if let Some(m) = r.sample_intervals() {
        if !steps.is_multiple_of(m) {
            return Err(Error::Grid(format!(
                "steps ({steps}) must be a multiple of the frame intervals ({m})"
            )));
        }
    }
    let u_rf = propagate(h_rf, steps)?;
    let v_rf0 = r.at(0.0) * v0.matrix();
    let hs = h_rf.tabulate(steps);
    let pot = frame_potential(r)?.tabulate(steps);
    Ok(u_rf
        .samples()
        .iter()
        .zip(hs.iter().zip(&pot))
        .map(|(ut, (ht, at))| {
            let vt = ut * &v_rf0;
            vt.adjoint() * (ht - at) * vt
        })
        .collect())
}

/// Conventional lab-frame condition `<v_k,t| H_t |v_l,t> = 0`.
pub fn check_parallel_lab(
    h: &HamiltonianPath,
    v0: &NFrame,
    steps: usize,
    tol: &Tolerance,
) -> Result<TransportReport> {
    Ok(report_from_conditions(
        &lab_conditions(h, v0, steps)?,
        false,
        tol,
    ))
}

/// Conventional condition in a rotating frame,
/// `<v^RF_k,t| H^RF_t - A_t |v^RF_l,t> = 0`, evaluated on rotating-frame
/// quantities only. `v0` is the lab-frame initial frame.
pub fn check_parallel_rotating(
    h_rf: &HamiltonianPath,
    r: &RotatingFrame,
    v0: &NFrame,
    steps: usize,
    tol: &Tolerance,
) -> Result<TransportReport> {
    Ok(report_from_conditions(
        &rotating_conditions(h_rf, r, v0, steps)?,
        false,
        tol,
    ))
}

/// Projective lab-frame condition `<v_k,t| H_t |v_l,t> = eps_t delta_kl`.
pub fn check_projective_lab(
    h: &HamiltonianPath,
    v0: &NFrame,
    steps: usize,
    tol: &Tolerance,
) -> Result<TransportReport> {
    Ok(report_from_conditions(
        &lab_conditions(h, v0, steps)?,
        true,
        tol,
    ))
}

/// Projective condition in a rotating frame,
/// `<v^RF_k,t| H^RF_t - A_t |v^RF_l,t> = eps_t delta_kl`.
pub fn check_projective_rotating(
    h_rf: &HamiltonianPath,
    r: &RotatingFrame,
    v0: &NFrame,
    steps: usize,
    tol: &Tolerance,
) -> Result<TransportReport> {
    Ok(report_from_conditions(
        &rotating_conditions(h_rf, r, v0, steps)?,
        true,
        tol,
    ))
}

/// `H_t + eps_t 1`.
pub fn gauge_shift(h: &HamiltonianPath, eps: &ShiftFunction) -> Result<HamiltonianPath> {
    if (eps.tau - h.tau()).abs() > 1e-12 * h.tau() {
        return Err(Error::Grid(format!(
            "shift duration {} differs from Hamiltonian duration {}",
            eps.tau,
            h.tau()
        )));
    }
    h.with_offset(&eps.values)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Closure {
    pub closed: bool,
    /// `|P_tau - P_0|` in operator norm.
    pub defect: f64,
}

/// Whether the subspace path returns to its starting point, judged at `tolerance`.
pub fn loop_closure_at(p: &ProjectorPath, tolerance: f64) -> Closure {
    let defect = op_norm(&(p.last().matrix() - p.first().matrix()));
    Closure {
        closed: defect < tolerance,
        defect,
    }
}

/// Loop closure at the transport tolerance.
pub fn loop_closure(p: &ProjectorPath, tol: &Tolerance) -> Closure {
    loop_closure_at(p, tol.transport)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{from_rotating_frame, rotate_projector_path, DEFAULT_STEPS};
    use crate::frames::{projectively_equal, projector_of};
    use crate::matrixcore::{basis, c, diag, identity, pauli_x, pauli_z, CVec};
    use crate::random::{random_frame, random_hermitian, random_transporting_loop, rng};
    use std::f64::consts::PI;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    fn real_great_circle(t: f64) -> CVec {
        CVec::from_column_slice(&[c(t.cos(), 0.0), c(t.sin(), 0.0)])
    }

    /// Pancharatnam phase of a discretized closed loop of states: the phase
    /// acquired by the discrete parallel transport, `arg prod <psi_{k+1}|psi_k>`.
    fn pancharatnam_phase(states: &[CVec]) -> f64 {
        let mut prod = c(1.0, 0.0);
        for w in states.windows(2) {
            prod *= w[1].dotc(&w[0]);
        }
        prod.arg()
    }

    fn cap_state(alpha: f64, phi: f64) -> CVec {
        CVec::from_column_slice(&[
            c((alpha / 2.0).cos(), 0.0),
            C64::from_polar((alpha / 2.0).sin(), phi),
        ])
    }

    #[test]
    fn connection_examples() {
        let mut g = rng(1);
        let v = random_frame(&mut g, 4, 2);
        let zero = CMat::zeros(4, 2);
        assert_eq!(
            connection_eval(&v, &zero, &tol()).unwrap(),
            CMat::zeros(2, 2)
        );

        let h = random_hermitian(&mut g, 2, 1.0);
        let skew = &h * c(0.0, 1.0);
        let vertical = v.matrix() * &skew;
        assert!(max_abs(&(connection_eval(&v, &vertical, &tol()).unwrap() - &skew)) < 1e-14);

        let m = crate::random::gaussian_matrix(&mut g, 4, 2);
        let horizontal = (identity(4) - v.matrix() * v.matrix().adjoint()) * m;
        assert!(max_abs(&connection_eval(&v, &horizontal, &tol()).unwrap()) < 1e-12);

        assert!(matches!(
            connection_eval(&v, &(v.matrix().clone()), &tol()),
            Err(Error::NotTangent(_))
        ));
    }

    #[test]
    fn lift_of_constant_path_is_constant() {
        let v = random_frame(&mut rng(2), 4, 2);
        let p = ProjectorPath::new(1.0, vec![projector_of(&v); 9]).unwrap();
        let lift = horizontal_lift(&p, &v).unwrap();
        assert!(lift
            .samples()
            .iter()
            .all(|w| max_abs(&(w.matrix() - v.matrix())) < 1e-14));
    }

    #[test]
    fn lift_of_real_quarter_circle() {
        let p = ProjectorPath::from_states(PI / 2.0, 1000, real_great_circle).unwrap();
        let v0 = NFrame::standard(2, 1).unwrap();
        let lift = horizontal_lift(&p, &v0).unwrap();
        let end = lift.last().column(0);
        assert!((end[1].norm() - 1.0).abs() < 1e-12);
        // the curve is real and horizontal already, so no phase is picked up
        assert!((end[1] - c(1.0, 0.0)).norm() < 1e-12);
        assert!(lift.connection_residuals().iter().all(|&r| r < 1e-10));
        assert!(lift.span_defects(&p).iter().all(|&d| d < 1e-12));
    }

    #[test]
    fn lift_of_spherical_cap_matches_pancharatnam() {
        let alpha = 1.1;
        let tau = 2.0 * PI;
        let p = ProjectorPath::from_states(tau, 4096, |phi| cap_state(alpha, phi)).unwrap();
        let v0 = NFrame::new(CMat::from_column_slice(
            2,
            1,
            cap_state(alpha, 0.0).as_slice(),
        ))
        .unwrap();
        let lift = horizontal_lift(&p, &v0).unwrap();
        let gamma = v0.matrix().adjoint() * lift.last().matrix();
        let states: Vec<CVec> = (0..=10_000)
            .map(|k| cap_state(alpha, tau * k as f64 / 10_000.0))
            .collect();
        let oracle = pancharatnam_phase(&states);
        let diff = (gamma[(0, 0)] - C64::from_polar(1.0, oracle)).norm();
        assert!(diff < 1e-4, "diff {diff}");
        assert!(lift.connection_residuals().iter().all(|&r| r < 1e-8));
    }

    #[test]
    fn lift_rejects_wrong_start() {
        let p = ProjectorPath::from_states(1.0, 10, real_great_circle).unwrap();
        let wrong =
            NFrame::new(CMat::from_column_slice(2, 1, &[c(0.0, 0.0), c(1.0, 0.0)])).unwrap();
        assert!(matches!(
            horizontal_lift(&p, &wrong),
            Err(Error::SpanMismatch(_))
        ));
    }

    #[test]
    fn projective_lift_examples() {
        let p = ProjectorPath::from_states(PI, 400, |t| cap_state(0.8, 2.0 * t)).unwrap();
        let v0 = NFrame::new(CMat::from_column_slice(
            2,
            1,
            cap_state(0.8, 0.0).as_slice(),
        ))
        .unwrap();
        let plain = horizontal_lift(&p, &v0).unwrap();
        let zero = ShiftFunction::constant(PI, 400, 0.0).unwrap();
        let same = projective_horizontal_lift(&p, &v0, &zero).unwrap();
        assert!(plain
            .samples()
            .iter()
            .zip(same.samples())
            .all(|(a, b)| max_abs(&(a.matrix() - b.matrix())) < 1e-15));

        let wiggly = ShiftFunction::from_fn(PI, 400, |t| (3.0 * t).sin() + 0.5).unwrap();
        let shifted = projective_horizontal_lift(&p, &v0, &wiggly).unwrap();
        assert!(projectively_equal(plain.last(), shifted.last(), 1e-8).is_some());

        let v = random_frame(&mut rng(3), 3, 2);
        let still = ProjectorPath::new(2.0, vec![projector_of(&v); 201]).unwrap();
        let eps = 0.7;
        let lift = projective_horizontal_lift(
            &still,
            &v,
            &ShiftFunction::constant(2.0, 200, eps).unwrap(),
        )
        .unwrap();
        for (k, w) in lift.samples().iter().enumerate() {
            let t = 2.0 * k as f64 / 200.0;
            let expected = v.matrix() * C64::from_polar(1.0, eps * t);
            assert!(max_abs(&(w.matrix() - expected)) < 1e-13);
        }
    }

    #[test]
    fn lab_check_examples() {
        let v0 = NFrame::standard(4, 2).unwrap();
        // pure coupling out of the computational space
        let mut h = CMat::zeros(4, 4);
        h[(0, 2)] = c(1.0, 0.0);
        h[(2, 0)] = c(1.0, 0.0);
        h[(1, 3)] = c(0.0, 0.5);
        h[(3, 1)] = c(0.0, -0.5);
        let path = HamiltonianPath::constant(h, 1.0).unwrap();
        let report = check_parallel_lab(&path, &v0, 64, &tol()).unwrap();
        assert_eq!(report.residual_trace[0], 0.0);
        assert!(report.verdict.passed());

        let eps = 0.3;
        let shifted = HamiltonianPath::constant(identity(4) * c(eps, 0.0), 1.0).unwrap();
        let report = check_parallel_lab(&shifted, &v0, 64, &tol()).unwrap();
        assert!((report.max_residual - eps).abs() < 1e-14);
        assert!(!report.verdict.passed());
    }

    #[test]
    fn projective_lab_examples() {
        let (h, v0) = random_transporting_loop(&mut rng(4), 4, 2, 1.0, 1);
        let conv = check_parallel_lab(&h, &v0, 256, &tol()).unwrap();
        assert!(conv.verdict.passed(), "residual {}", conv.max_residual);
        let proj = check_projective_lab(&h, &v0, 256, &tol()).unwrap();
        assert!(proj.verdict.passed());
        assert!(proj.epsilon_trace.iter().all(|e| e.abs() < tol().transport));

        let eps = ShiftFunction::from_fn(1.0, 256, |t| (5.0 * t).cos()).unwrap();
        let shifted = gauge_shift(&h, &eps).unwrap();
        let proj = check_projective_lab(&shifted, &v0, 256, &tol()).unwrap();
        assert!(proj.verdict.passed());
        for (e, expected) in proj.epsilon_trace.iter().zip(&eps.values) {
            assert!((e - expected).abs() < 1e-9);
        }

        let d = diag(&[c(1.0, 0.0), c(2.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
        let unequal = HamiltonianPath::constant(d, 1.0).unwrap();
        let report =
            check_projective_lab(&unequal, &NFrame::standard(4, 2).unwrap(), 16, &tol()).unwrap();
        assert!(!report.verdict.passed());
        assert!((report.max_residual - 0.5).abs() < 1e-12);
    }

    #[test]
    fn rotating_check_with_identity_frame_matches_lab() {
        let h = crate::random::random_smooth_hamiltonian(&mut rng(5), 3, 1.0, 64, 1.0);
        let v0 = random_frame(&mut rng(6), 3, 1);
        let r = RotatingFrame::identity(3, 1.0).unwrap();
        let lab = check_parallel_lab(&h, &v0, 128, &tol()).unwrap();
        let rot = check_parallel_rotating(&h, &r, &v0, 128, &tol()).unwrap();
        assert_eq!(lab.residual_trace, rot.residual_trace);
        let lab = check_projective_lab(&h, &v0, 128, &tol()).unwrap();
        let rot = check_projective_rotating(&h, &r, &v0, 128, &tol()).unwrap();
        assert_eq!(lab.residual_trace, rot.residual_trace);
    }

    #[test]
    fn pure_potential_has_zero_residual() {
        let b = random_hermitian(&mut rng(7), 3, 1.0);
        let r = RotatingFrame::constant_generator(b, 1.0).unwrap();
        let a = frame_potential(&r).unwrap();
        let v0 = random_frame(&mut rng(8), 3, 2);
        let report = check_parallel_rotating(&a, &r, &v0, 64, &tol()).unwrap();
        assert!(report.max_residual < 1e-14);
    }

    #[test]
    fn rotating_check_matches_pulled_back_lab_check() {
        let mut g = rng(9);
        let h_rf = crate::random::random_smooth_hamiltonian(&mut g, 3, 1.0, 512, 1.0);
        let r = RotatingFrame::constant_generator(random_hermitian(&mut g, 3, 1.0), 1.0).unwrap();
        let v0 = random_frame(&mut g, 3, 1);
        let rot = check_parallel_rotating(&h_rf, &r, &v0, 2048, &tol()).unwrap();
        let lab_h = from_rotating_frame(&h_rf, &r).unwrap();
        let lab = check_parallel_lab(&lab_h, &v0, 2048, &tol()).unwrap();
        let worst = rot
            .residual_trace
            .iter()
            .zip(&lab.residual_trace)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        assert!(worst < 3.0 * tol().integration, "worst {worst}");
    }

    #[test]
    fn gauge_shift_examples() {
        let h = crate::random::random_smooth_hamiltonian(&mut rng(10), 3, 1.0, 128, 1.0);
        let zero = ShiftFunction::constant(1.0, 128, 0.0).unwrap();
        let same = gauge_shift(&h, &zero).unwrap();
        assert_eq!(same.tabulate(128), h.tabulate(128));

        let eps = ShiftFunction::from_fn(1.0, 128, |t| 2.0 * t - 0.3).unwrap();
        let shifted = gauge_shift(&h, &eps).unwrap();
        let u = propagate(&h, DEFAULT_STEPS).unwrap();
        let w = propagate(&shifted, DEFAULT_STEPS).unwrap();
        // int_0^1 (2t - 0.3) dt = 0.7
        let phase = C64::from_polar(1.0, -0.7);
        assert!(max_abs(&(w.last() - u.last() * phase)) < 1e-4);

        for (k, &t) in grid(1.0, 128).iter().enumerate().step_by(16) {
            let a = crate::matrixcore::eig_hermitian(&h.at(t)).unwrap();
            let b = crate::matrixcore::eig_hermitian(&shifted.at(t)).unwrap();
            for (x, y) in a.values.iter().zip(&b.values) {
                assert!((y - x - eps.values[k]).abs() < 1e-12);
            }
        }

        let wrong = ShiftFunction::constant(1.0, 64, 0.1).unwrap();
        assert!(matches!(gauge_shift(&h, &wrong), Err(Error::Grid(_))));
    }

    #[test]
    fn closure_examples() {
        let v = random_frame(&mut rng(11), 3, 1);
        let still = ProjectorPath::new(1.0, vec![projector_of(&v); 5]).unwrap();
        let cl = loop_closure(&still, &tol());
        assert!(cl.closed && cl.defect == 0.0);

        let half = ProjectorPath::from_states(PI / 2.0, 200, real_great_circle).unwrap();
        assert!(!loop_closure(&half, &tol()).closed);
        let full = ProjectorPath::from_states(PI, 400, real_great_circle).unwrap();
        let cl = loop_closure(&full, &tol());
        assert!(cl.closed, "defect {}", cl.defect);
    }

    #[test]
    fn closed_lab_loop_can_be_open_in_rotating_frame() {
        // stationary lab subspace, frame rotating about x by a quarter turn
        let v0 = NFrame::new(CMat::from_column_slice(2, 1, basis(2, 0).as_slice())).unwrap();
        let lab = ProjectorPath::new(1.0, vec![projector_of(&v0); 101]).unwrap();
        let r = RotatingFrame::constant_generator(pauli_x() * c(PI / 4.0, 0.0), 1.0).unwrap();
        let rotated = rotate_projector_path(&lab, &r).unwrap();
        assert!(loop_closure(&lab, &tol()).closed);
        let cl = loop_closure(&rotated, &tol());
        assert!(!cl.closed && cl.defect > 0.5);

        // a frame that closes on itself leaves closure intact
        let r = RotatingFrame::constant_generator(pauli_z() * c(PI, 0.0), 1.0).unwrap();
        assert!(loop_closure(&rotate_projector_path(&lab, &r).unwrap(), &tol()).closed);
    }
}
