//! Seeded random generators for scenarios, tests and examples.
//!
//! Every generator draws from a caller-supplied `ChaCha8Rng`, so a scenario is
//! fully determined by its seed.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::dynamics::HamiltonianPath;
use crate::frames::NFrame;
use crate::matrixcore::{c, CMat, CVec, C64};

pub type ScenarioRng = ChaCha8Rng;

pub fn rng(seed: u64) -> ScenarioRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian_complex(rng: &mut ScenarioRng) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    c(re, im)
}

pub fn gaussian_matrix(rng: &mut ScenarioRng, rows: usize, cols: usize) -> CMat {
    CMat::from_fn(rows, cols, |_, _| gaussian_complex(rng))
}

/// Haar-distributed unitary: QR of a complex Gaussian matrix with the phases
/// of `diag(R)` absorbed into `Q`.
pub fn random_unitary(rng: &mut ScenarioRng, n: usize) -> CMat {
    let g = gaussian_matrix(rng, n, n);
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 {
            d / d.norm()
        } else {
            c(1.0, 0.0)
        };
        for i in 0..n {
            q[(i, j)] *= phase;
        }
    }
    q
}

/// Hermitian matrix `scale * (G + G^dag) / 2` with Gaussian `G`.
pub fn random_hermitian(rng: &mut ScenarioRng, d: usize, scale: f64) -> CMat {
    let g = gaussian_matrix(rng, d, d);
    (&g + g.adjoint()) * c(0.5 * scale, 0.0)
}

pub fn random_unit_vector(rng: &mut ScenarioRng, d: usize) -> CVec {
    let v = CVec::from_fn(d, |_, _| gaussian_complex(rng));
    let norm = v.norm();
    v / c(norm, 0.0)
}

pub fn random_frame(rng: &mut ScenarioRng, d: usize, n: usize) -> NFrame {
    let u = random_unitary(rng, d);
    NFrame::new_unchecked(u.columns(0, n).into_owned())
}

pub fn random_phase(rng: &mut ScenarioRng) -> f64 {
    rng.random_range(0.0..std::f64::consts::TAU)
}

/// A random Hamiltonian that parallel transports `span(V0)` around a closed
/// loop in time `tau`, together with the frame `V0`.
///
/// The Hamiltonian has the form `H_t = e^{-itB} H0 e^{itB}` where `B` has
/// spectrum in `(2pi/tau) Z` (so `e^{-i tau B} = 1`) and `K = H0 - B` leaves
/// `span(V0)` invariant with `V0^dag K V0 = -V0^dag B V0`. The computational
/// space then returns to itself at `tau` and `V0^dag H0 V0 = 0`, which makes
/// the lab-frame transport condition hold at all times.
pub fn random_transporting_loop(
    rng: &mut ScenarioRng,
    d: usize,
    n: usize,
    tau: f64,
    max_level: i32,
) -> (HamiltonianPath, NFrame) {
    assert!(d > n && n >= 1, "need a proper subspace");
    let basis_change = random_unitary(rng, d);
    let omega = std::f64::consts::TAU / tau;
    let levels: Vec<C64> = (0..d)
        .map(|_| c(omega * rng.random_range(-max_level..=max_level) as f64, 0.0))
        .collect();
    let b = &basis_change * crate::matrixcore::diag(&levels) * basis_change.adjoint();

    let frame_unitary = random_unitary(rng, d);
    let v0 = frame_unitary.columns(0, n).into_owned();
    let complement = frame_unitary.columns(n, d - n).into_owned();

    let k_code = -(v0.adjoint() * &b * &v0);
    let k_perp = random_hermitian(rng, d - n, 1.0);
    let k = &v0 * k_code * v0.adjoint() + &complement * k_perp * complement.adjoint();
    let h0 = crate::matrixcore::hermitian_part(&(k + &b));
    let b = crate::matrixcore::hermitian_part(&b);

    let path = HamiltonianPath::rotated_constant(h0, b, tau).expect("valid construction");
    (path, NFrame::new_unchecked(v0))
}

/// Smooth random real function sampled on `intervals + 1` uniform points in
/// `[0, tau]`: a short random Fourier series of amplitude about `scale`.
pub fn random_smooth_samples(
    rng: &mut ScenarioRng,
    tau: f64,
    intervals: usize,
    scale: f64,
) -> Vec<f64> {
    let modes: Vec<(f64, f64, f64)> = (0..3)
        .map(|k| {
            let a: f64 = rng.sample(StandardNormal);
            let phi = random_phase(rng);
            (a * scale / (k as f64 + 1.0), (k + 1) as f64, phi)
        })
        .collect();
    let offset: f64 = rng.sample::<f64, _>(StandardNormal) * scale;
    (0..=intervals)
        .map(|j| {
            let t = tau * j as f64 / intervals as f64;
            offset
                + modes
                    .iter()
                    .map(|&(a, k, phi)| a * (std::f64::consts::TAU * k * t / tau + phi).sin())
                    .sum::<f64>()
        })
        .collect()
}

/// Smooth random sampled Hermitian path `H_t = A + sin(w t) B + cos(2 w t) C`.
pub fn random_smooth_hamiltonian(
    rng: &mut ScenarioRng,
    d: usize,
    tau: f64,
    intervals: usize,
    scale: f64,
) -> HamiltonianPath {
    let a = random_hermitian(rng, d, scale);
    let b = random_hermitian(rng, d, scale);
    let cc = random_hermitian(rng, d, scale);
    let w = std::f64::consts::TAU / tau;
    let samples = (0..=intervals)
        .map(|j| {
            let t = tau * j as f64 / intervals as f64;
            &a + &b * c((w * t).sin(), 0.0) + &cc * c((2.0 * w * t).cos(), 0.0)
        })
        .collect();
    HamiltonianPath::sampled(samples, tau).expect("valid construction")
}
