//! Tight protocols: parallel-transporting Hamiltonians whose loops saturate
//! the isoholonomic bound for a given target gate.
//!
//! Each eigenvector `|v_k>` of the target (mapped into the ambient space by
//! the computational frame) is paired with an ancilla `|w_k>` orthogonal to
//! the computational space and to every other block. On `E_k = span{v_k, w_k}`
//! the state precesses once around a Rabi axis tilted by
//! `alpha_k = arccos(theta_k / pi - 1)` from its Bloch vector, which traces a
//! cone of constant Fubini-Study speed and returns with phase `theta_k`.

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use crate::dynamics::{HamiltonianPath, RotatingFrame};
use crate::error::{Error, Result};
use crate::frames::{NFrame, ProjectorPath};
use crate::matrixcore::{c, max_abs, outer, CMat, CVec, Tolerance, C64};
use crate::metrics::{
    drive_loop, isoholonomic_bound, projective_distance, BoundKind, GateSpec, QslReport, Target,
    MIN_MEAN_SPEED,
};
use crate::transport::check_projective_lab;

/// Pass thresholds used by [`verify_tight`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TightThresholds {
    pub closure: f64,
    pub holonomy: f64,
    pub length: f64,
    pub saturation: f64,
}

impl Default for TightThresholds {
    fn default() -> Self {
        TightThresholds {
            closure: 1e-6,
            holonomy: 1e-6,
            length: 1e-3,
            saturation: 1e-3,
        }
    }
}

/// One effective qubit of a tight protocol.
#[derive(Debug, Clone)]
pub struct TightBlock {
    pub theta: f64,
    pub code: CVec,
    pub ancilla: CVec,
    pub alpha: f64,
    /// `B_k`, traceless on `E_k` with eigenvalues `+-pi/tau`.
    pub rabi: CMat,
    /// `H_k^RF = (eps - <v|B|v>) |v><v|`.
    pub h_rf: CMat,
}

impl TightBlock {
    fn build(theta: f64, code: CVec, ancilla: CVec, tau: f64, epsilon: f64) -> TightBlock {
        let alpha = (theta / PI - 1.0).clamp(-1.0, 1.0).acos();
        let (vv, ww) = (outer(&code, &code), outer(&ancilla, &ancilla));
        let vw = outer(&code, &ancilla);
        let rabi = ((vv.clone() - ww) * c(alpha.cos(), 0.0)
            + (&vw + vw.adjoint()) * c(alpha.sin(), 0.0))
            * c(PI / tau, 0.0);
        let b = PI / tau * alpha.cos();
        let h_rf = vv * c(epsilon - b, 0.0);
        TightBlock {
            theta,
            code,
            ancilla,
            alpha,
            rabi,
            h_rf,
        }
    }

    /// `H_k = H_k^RF + B_k`.
    pub fn hamiltonian(&self) -> CMat {
        &self.h_rf + &self.rabi
    }

    /// Fubini-Study speed `sqrt(2 pi theta - theta^2) / tau` of the block state.
    pub fn speed(&self, tau: f64) -> f64 {
        (self.theta * (TAU - self.theta)).max(0.0).sqrt() / tau
    }

    /// `|psi_t> = e^{-itB}|v>` in closed form, using `(tau B / pi)^2 = 1` on `E_k`.
    pub fn state(&self, tau: f64, t: f64) -> CVec {
        let w = PI * t / tau;
        let bv = &self.rabi * &self.code * c(tau / PI, 0.0);
        &self.code * c(w.cos(), 0.0) + bv * c(0.0, -w.sin())
    }
}

/// Projector path `rho_t = e^{-itB_k} |v_k><v_k| e^{itB_k}` of one block.
pub fn block_trajectory(block: &TightBlock, tau: f64, steps: usize) -> Result<ProjectorPath> {
    ProjectorPath::from_states(tau, steps, |t| block.state(tau, t))
}

/// A complete tight protocol for one target gate.
#[derive(Debug, Clone)]
pub struct TightProtocol {
    frame: NFrame,
    tau: f64,
    epsilon: f64,
    blocks: Vec<TightBlock>,
    target: GateSpec,
    hamiltonian: HamiltonianPath,
}

/// Orthonormal basis of the complement of `span(V)`, built by Gram-Schmidt on
/// the standard basis, always taking the standard vector with the largest
/// remaining component next (lowest index on ties).
fn complement_basis(v: &CMat, count: usize) -> Vec<CVec> {
    let d = v.nrows();
    let mut accepted: Vec<CVec> = (0..v.ncols()).map(|j| v.column(j).into_owned()).collect();
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let mut best: Option<(f64, CVec)> = None;
        for k in 0..d {
            let mut r = crate::matrixcore::basis(d, k);
            for _ in 0..2 {
                for a in &accepted {
                    let proj = a.dotc(&r);
                    r -= a * proj;
                }
            }
            let norm = r.norm();
            if best.as_ref().is_none_or(|(b, _)| norm > *b + 1e-12) {
                best = Some((norm, r));
            }
        }
        let (norm, r) = best.expect("d > 0");
        let w = r / c(norm, 0.0);
        accepted.push(w.clone());
        out.push(w);
    }
    out
}

/// Build the tight protocol for `target` on the computational space spanned
/// by `frame`, with common projective offset `epsilon` (0 for a conventional
/// parallel-transporting Hamiltonian).
pub fn build_tight(
    target: &GateSpec,
    frame: &NFrame,
    tau: f64,
    epsilon: f64,
) -> Result<TightProtocol> {
    let (d, n) = (frame.dim(), frame.n());
    if target.n() != n {
        return Err(Error::Shape(format!(
            "target is {}x{} but the frame has {n} columns",
            target.n(),
            target.n()
        )));
    }
    if d < 2 * n {
        return Err(Error::Codimension { dim: d, n });
    }
    if !tau.is_finite() || tau <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "duration must be positive, got {tau}"
        )));
    }
    if !epsilon.is_finite() {
        return Err(Error::InvalidParameter("epsilon must be finite".into()));
    }
    let eig = target.eigen();
    let ancillas = complement_basis(frame.matrix(), n);
    let blocks = eig
        .phases
        .iter()
        .zip(ancillas)
        .enumerate()
        .map(|(k, (&theta, w))| {
            let v = frame.matrix() * eig.vectors.column(k);
            TightBlock::build(theta, v, w, tau, epsilon)
        })
        .collect();
    TightProtocol::assemble(frame.clone(), tau, epsilon, blocks, target.clone())
}

impl TightProtocol {
    fn assemble(
        frame: NFrame,
        tau: f64,
        epsilon: f64,
        blocks: Vec<TightBlock>,
        target: GateSpec,
    ) -> Result<TightProtocol> {
        let d = frame.dim();
        let mut h0 = CMat::zeros(d, d);
        let mut b = CMat::zeros(d, d);
        for block in &blocks {
            h0 += block.hamiltonian();
            b += &block.rabi;
        }
        let hamiltonian = HamiltonianPath::rotated_constant(h0, b, tau)?;
        Ok(TightProtocol {
            frame,
            tau,
            epsilon,
            blocks,
            target,
            hamiltonian,
        })
    }

    /// Rebuild a protocol from stored blocks, recomputing the target
    /// `sum_k e^{i theta_k} |u_k><u_k|` with `u_k = V^dag v_k` and checking the
    /// block geometry.
    pub fn from_blocks(
        frame: NFrame,
        tau: f64,
        epsilon: f64,
        blocks: Vec<TightBlock>,
    ) -> Result<TightProtocol> {
        let (d, n) = (frame.dim(), frame.n());
        if blocks.len() != n {
            return Err(Error::Shape(format!(
                "{} blocks for a frame with {n} columns",
                blocks.len()
            )));
        }
        if d < 2 * n {
            return Err(Error::Codimension { dim: d, n });
        }
        if !tau.is_finite() || tau <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "duration must be positive, got {tau}"
            )));
        }
        let tol = Tolerance::default().structural * 100.0;
        let mut support: Vec<&CVec> = Vec::new();
        for block in &blocks {
            if block.code.len() != d || block.ancilla.len() != d {
                return Err(Error::Shape(
                    "block vectors must live in the ambient space".into(),
                ));
            }
            support.push(&block.code);
            support.push(&block.ancilla);
        }
        for (i, a) in support.iter().enumerate() {
            for (j, b) in support.iter().enumerate() {
                let expected = if i == j { 1.0 } else { 0.0 };
                if (a.dotc(b) - c(expected, 0.0)).norm() > tol {
                    return Err(Error::Structural {
                        what: "block vectors",
                        magnitude: (a.dotc(b) - c(expected, 0.0)).norm(),
                        tolerance: tol,
                    });
                }
            }
        }
        let mut gamma = CMat::zeros(n, n);
        for block in &blocks {
            let u = frame.matrix().adjoint() * &block.code;
            gamma += outer(&u, &u) * C64::from_polar(1.0, block.theta);
        }
        let target = GateSpec::with_tolerance(gamma, tol)?;
        let rebuilt: Vec<TightBlock> = blocks
            .into_iter()
            .map(|b| TightBlock::build(b.theta, b.code, b.ancilla, tau, epsilon))
            .collect();
        Self::assemble(frame, tau, epsilon, rebuilt, target)
    }

    pub fn dim(&self) -> usize {
        self.frame.dim()
    }

    pub fn frame(&self) -> &NFrame {
        &self.frame
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn blocks(&self) -> &[TightBlock] {
        &self.blocks
    }

    pub fn target(&self) -> &GateSpec {
        &self.target
    }

    /// `H_t = e^{-itB} (sum_k H_k) e^{itB}` with `B = sum_k B_k`.
    pub fn hamiltonian(&self) -> &HamiltonianPath {
        &self.hamiltonian
    }

    /// Rotating frame `R_t = e^{itB}` in which the protocol is time independent.
    pub fn rotating_frame(&self) -> Result<RotatingFrame> {
        let b = self
            .blocks
            .iter()
            .fold(CMat::zeros(self.dim(), self.dim()), |acc, k| acc + &k.rabi);
        RotatingFrame::constant_generator(b, self.tau)
    }

    /// `sum_k H_k^RF`.
    pub fn rf_hamiltonian(&self) -> Result<HamiltonianPath> {
        let h = self
            .blocks
            .iter()
            .fold(CMat::zeros(self.dim(), self.dim()), |acc, k| acc + &k.h_rf);
        HamiltonianPath::constant(h, self.tau)
    }

    /// Expected instantaneous speed `sqrt(sum_k (2 pi theta_k - theta_k^2)) / tau`.
    pub fn speed(&self) -> f64 {
        self.blocks
            .iter()
            .map(|b| b.speed(self.tau).powi(2))
            .sum::<f64>()
            .sqrt()
    }

    /// Projector onto the block support `E_1 + ... + E_n`.
    pub fn support_projector(&self) -> CMat {
        self.blocks
            .iter()
            .fold(CMat::zeros(self.dim(), self.dim()), |acc, b| {
                acc + outer(&b.code, &b.code) + outer(&b.ancilla, &b.ancilla)
            })
    }
}

/// Outcome of [`verify_tight`].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TightVerification {
    pub report: QslReport,
    pub closure_defect: f64,
    /// Projective distance between the measured holonomy and the target.
    pub holonomy_distance: f64,
    /// `max |Gamma - Gamma*|`, required only for a conventional protocol.
    pub global_phase_error: Option<f64>,
    pub transport_residual: f64,
    pub epsilon_estimate: f64,
    pub passed: bool,
    pub failures: Vec<String>,
}

impl TightVerification {
    /// `Err` naming the first failing clause, if any.
    pub fn into_result(self) -> Result<TightVerification> {
        match self.failures.first() {
            None => Ok(self),
            Some(f) => Err(Error::Verification {
                clause: f.split(':').next().unwrap_or("").to_string(),
                detail: f.clone(),
            }),
        }
    }
}

/// Propagate the assembled Hamiltonian and check the four saturation clauses:
/// loop closure, holonomy, length against the bound, and saturation ratio.
/// The transport residual is reported alongside.
pub fn verify_tight(p: &TightProtocol, steps: usize, tol: &Tolerance) -> Result<TightVerification> {
    verify_tight_with(p, steps, tol, &TightThresholds::default())
}

pub fn verify_tight_with(
    p: &TightProtocol,
    steps: usize,
    tol: &Tolerance,
    th: &TightThresholds,
) -> Result<TightVerification> {
    let driven = drive_loop(p.hamiltonian(), p.frame(), steps, tol)?;
    let bound = isoholonomic_bound(p.target());
    let report = if driven.mean_speed < MIN_MEAN_SPEED && bound == 0.0 {
        QslReport {
            length: driven.length,
            bound,
            bound_kind: BoundKind::Conventional,
            mean_speed: driven.mean_speed,
            tau: p.tau(),
            tau_qsl: 0.0,
            saturation_ratio: 0.0,
        }
    } else {
        driven.report(&Target::Gate(p.target().clone()))?
    };
    let transport = check_projective_lab(p.hamiltonian(), p.frame(), steps, tol)?;
    let epsilon_estimate =
        transport.epsilon_trace.iter().sum::<f64>() / transport.epsilon_trace.len() as f64;

    let measured = &driven.holonomy.gate;
    let holonomy_distance = projective_distance(measured, p.target())?;
    let global_phase_error =
        (p.epsilon() == 0.0).then(|| max_abs(&(measured.matrix() - p.target().matrix())));

    let mut failures = Vec::new();
    let closure_defect = driven.holonomy.closure_defect;
    if closure_defect >= th.closure {
        failures.push(format!(
            "closure: defect {closure_defect:.3e} >= {:.1e}",
            th.closure
        ));
    }
    if holonomy_distance >= th.holonomy {
        failures.push(format!(
            "holonomy: projective distance {holonomy_distance:.3e} >= {:.1e}",
            th.holonomy
        ));
    }
    if let Some(e) = global_phase_error.filter(|&e| e >= th.holonomy) {
        failures.push(format!(
            "holonomy: global-phase mismatch {e:.3e} >= {:.1e}",
            th.holonomy
        ));
    }
    let length_error = (report.length - bound).abs();
    if length_error >= th.length {
        failures.push(format!(
            "length: |{:.9} - {bound:.9}| >= {:.1e}",
            report.length, th.length
        ));
    }
    let stationary = bound == 0.0 && report.mean_speed < MIN_MEAN_SPEED;
    if !stationary && (report.saturation_ratio - 1.0).abs() >= th.saturation {
        failures.push(format!(
            "saturation: ratio {:.9} differs from 1 by >= {:.1e}",
            report.saturation_ratio, th.saturation
        ));
    }
    Ok(TightVerification {
        report,
        closure_defect,
        holonomy_distance,
        global_phase_error,
        transport_residual: transport.max_residual,
        epsilon_estimate,
        passed: failures.is_empty(),
        failures,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{propagate, DEFAULT_STEPS};
    use crate::frames::projector_of;
    use crate::matrixcore::{commutator, identity, op_norm};
    use crate::metrics::{curve_length, grassmann_speeds, skew_information};
    use crate::random::{random_frame, random_unitary, rng};
    use crate::transport::{check_parallel_lab, loop_closure_at};

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    /// Bloch vector of a 2x2 Hermitian operator in the (v, w) basis.
    fn bloch(m: &CMat, v: &CVec, w: &CVec) -> [f64; 3] {
        let vv = v.dotc(&(m * v)).re;
        let ww = w.dotc(&(m * w)).re;
        let vw = v.dotc(&(m * w));
        [2.0 * vw.re, -2.0 * vw.im, vv - ww]
    }

    fn angle(a: [f64; 3], b: [f64; 3]) -> f64 {
        let dot: f64 = a.iter().zip(&b).map(|(x, y)| x * y).sum();
        let na = a.iter().map(|x| x * x).sum::<f64>().sqrt();
        let nb = b.iter().map(|x| x * x).sum::<f64>().sqrt();
        (dot / (na * nb)).clamp(-1.0, 1.0).acos()
    }

    #[test]
    fn identity_target_is_stationary() {
        let p = build_tight(
            &GateSpec::identity(2).unwrap(),
            &NFrame::standard(4, 2).unwrap(),
            1.0,
            0.0,
        )
        .unwrap();
        for b in p.blocks() {
            assert_eq!(b.theta, 0.0);
            assert!((b.alpha - PI).abs() < 1e-12);
        }
        let v = verify_tight(&p, 256, &tol()).unwrap();
        assert!(v.passed, "{:?}", v.failures);
        assert!(v.report.length < 1e-12);
        assert!(v.holonomy_distance < 1e-7);
    }

    #[test]
    fn half_turn_block() {
        let p = build_tight(
            &GateSpec::from_phases(&[PI]).unwrap(),
            &NFrame::standard(2, 1).unwrap(),
            1.0,
            0.0,
        )
        .unwrap();
        let b = &p.blocks()[0];
        assert!((b.alpha - PI / 2.0).abs() < 1e-12);
        assert!((b.speed(1.0) - PI).abs() < 1e-12);
        let v = verify_tight(&p, DEFAULT_STEPS, &tol()).unwrap();
        assert!(v.passed, "{:?}", v.failures);
        assert!((v.report.length - PI).abs() < 1e-3);
    }

    #[test]
    fn block_geometry_invariants() {
        let target = GateSpec::new(random_unitary(&mut rng(1), 3)).unwrap();
        let frame = random_frame(&mut rng(2), 7, 3);
        let p = build_tight(&target, &frame, 2.0, 0.4).unwrap();
        let blocks = p.blocks();
        for (i, a) in blocks.iter().enumerate() {
            assert!(a.code.dotc(&a.ancilla).norm() < 1e-12);
            assert!((frame.matrix().adjoint() * &a.ancilla).norm() < 1e-12);
            let r = bloch(&a.rabi, &a.code, &a.ancilla);
            assert!((angle([0.0, 0.0, 1.0], r) - a.alpha).abs() < 1e-9);
            let hv = &a.h_rf * &a.code;
            let b = a.code.dotc(&(&a.rabi * &a.code)).re;
            assert!((hv - &a.code * c(0.4 - b, 0.0)).norm() < 1e-12);
            let eig = crate::matrixcore::eig_hermitian(&a.rabi).unwrap();
            assert!((eig.values[0] + PI / 2.0).abs() < 1e-12);
            assert!((eig.values[6] - PI / 2.0).abs() < 1e-12);
            for bb in &blocks[i + 1..] {
                for x in [&a.code, &a.ancilla] {
                    for y in [&bb.code, &bb.ancilla] {
                        assert!(x.dotc(y).norm() < 1e-12);
                    }
                }
            }
        }
    }

    #[test]
    fn codimension_and_duration_are_checked() {
        let g = GateSpec::identity(2).unwrap();
        assert!(matches!(
            build_tight(&g, &NFrame::standard(3, 2).unwrap(), 1.0, 0.0),
            Err(Error::Codimension { dim: 3, n: 2 })
        ));
        assert!(build_tight(&g, &NFrame::standard(4, 2).unwrap(), 0.0, 0.0).is_err());
    }

    #[test]
    fn block_trajectories() {
        let frame = NFrame::standard(2, 1).unwrap();
        for (theta, alpha) in [(0.0, PI), (PI, PI / 2.0), (PI / 2.0, 2.0 * PI / 3.0)] {
            let p =
                build_tight(&GateSpec::from_phases(&[theta]).unwrap(), &frame, 1.0, 0.0).unwrap();
            let block = &p.blocks()[0];
            assert!((block.alpha - alpha).abs() < 1e-12);
            let path = block_trajectory(block, 1.0, 2048).unwrap();
            assert!(loop_closure_at(&path, 1e-12).closed);
            let expected = (TAU * theta - theta * theta).sqrt();
            for sample in path.samples() {
                let s = skew_information(&block.rabi, sample.matrix())
                    .unwrap()
                    .sqrt();
                assert!(
                    (s - expected).abs() <= 1e-6 * expected.max(1.0),
                    "{s} vs {expected}"
                );
            }
            let speeds = grassmann_speeds(&path);
            assert!(speeds
                .iter()
                .all(|s| (s - expected).abs() <= 1e-5 * expected.max(1.0)));
            assert!((curve_length(&path) - expected).abs() < 1e-5);
        }
        let half = build_tight(
            &GateSpec::from_phases(&[PI / 2.0]).unwrap(),
            &frame,
            1.0,
            0.0,
        )
        .unwrap();
        assert!((half.blocks()[0].speed(1.0) - PI * 3f64.sqrt() / 2.0).abs() < 1e-12);
    }

    #[test]
    fn two_block_example_passes() {
        let target = GateSpec::from_phases(&[PI / 2.0, PI]).unwrap();
        let p = build_tight(&target, &NFrame::standard(4, 2).unwrap(), 1.0, 0.0).unwrap();
        let h = p.hamiltonian().at(0.37);
        let s = p.support_projector();
        assert!(op_norm(&commutator(&h, &s)) < 1e-12);
        let v = verify_tight(&p, DEFAULT_STEPS, &tol()).unwrap();
        assert!(v.passed, "{:?}", v.failures);
    }

    #[test]
    fn quarter_phase_length() {
        let p = build_tight(
            &GateSpec::from_phases(&[PI / 2.0]).unwrap(),
            &NFrame::standard(2, 1).unwrap(),
            1.0,
            0.0,
        )
        .unwrap();
        let v = verify_tight(&p, DEFAULT_STEPS, &tol()).unwrap();
        assert!((v.report.length - PI / 2.0 * 3f64.sqrt()).abs() < 1e-3);
    }

    #[test]
    fn random_target_in_five_dimensions() {
        let mut r = rng(3);
        let target = GateSpec::new(random_unitary(&mut r, 2)).unwrap();
        let frame = random_frame(&mut r, 5, 2);
        let p = build_tight(&target, &frame, 1.3, 0.0).unwrap();
        let v = verify_tight(&p, DEFAULT_STEPS, &tol()).unwrap();
        assert!(v.passed, "{:?}", v.failures);
        assert!(v.transport_residual < 1e-8);
    }

    #[test]
    fn transport_holds_on_phase_grid() {
        let frame = NFrame::standard(4, 2).unwrap();
        for a in 0..8 {
            for b in 0..8 {
                let g = GateSpec::from_phases(&[a as f64 * PI / 4.0, b as f64 * PI / 4.0]).unwrap();
                let p = build_tight(&g, &frame, 1.0, 0.0).unwrap();
                let report =
                    check_parallel_lab(p.hamiltonian(), &frame, DEFAULT_STEPS, &tol()).unwrap();
                assert!(
                    report.max_residual < 1e-8,
                    "{a} {b}: {}",
                    report.max_residual
                );
            }
        }
    }

    #[test]
    fn offset_changes_only_the_global_phase() {
        let target = GateSpec::new(random_unitary(&mut rng(4), 2)).unwrap();
        let frame = NFrame::standard(4, 2).unwrap();
        let p0 = build_tight(&target, &frame, 1.0, 0.0).unwrap();
        let p1 = build_tight(&target, &frame, 1.0, 0.7).unwrap();
        let v1 = verify_tight(&p1, DEFAULT_STEPS, &tol()).unwrap();
        assert!(v1.passed, "{:?}", v1.failures);
        assert!((v1.epsilon_estimate - 0.7).abs() < 1e-9);
        let gate = |p: &TightProtocol| {
            let u = propagate(p.hamiltonian(), 64).unwrap();
            GateSpec::with_tolerance(frame.matrix().adjoint() * u.last() * frame.matrix(), 1e-9)
                .unwrap()
        };
        assert!(projective_distance(&gate(&p0), &gate(&p1)).unwrap() < 1e-6);
        assert!(
            check_parallel_lab(p1.hamiltonian(), &frame, 256, &tol())
                .unwrap()
                .max_residual
                > 0.5
        );
    }

    #[test]
    fn speed_is_constant_along_the_protocol() {
        let target = GateSpec::from_phases(&[0.5, 2.0, 4.0]).unwrap();
        let frame = NFrame::standard(6, 3).unwrap();
        let p = build_tight(&target, &frame, 1.5, 0.0).unwrap();
        let u = propagate(p.hamiltonian(), 64).unwrap();
        let hs = p.hamiltonian().tabulate(64);
        for (ut, ht) in u.samples().iter().zip(&hs) {
            let pt = projector_of(&frame.transformed(ut));
            let s = skew_information(ht, pt.matrix()).unwrap().sqrt();
            assert!((s - p.speed()).abs() < 1e-6 * p.speed());
        }
    }

    #[test]
    fn blocks_round_trip() {
        let target = GateSpec::new(random_unitary(&mut rng(5), 2)).unwrap();
        let frame = random_frame(&mut rng(6), 5, 2);
        let p = build_tight(&target, &frame, 1.0, 0.2).unwrap();
        let q = TightProtocol::from_blocks(frame, 1.0, 0.2, p.blocks().to_vec()).unwrap();
        assert!(max_abs(&(q.target().matrix() - target.matrix())) < 1e-12);
        assert!(max_abs(&(q.hamiltonian().at(0.3) - p.hamiltonian().at(0.3))) < 1e-14);
        let _ = identity(1);
    }
}
