//! Frames, projectors and the gauge freedom between them.

use std::error::Error;

use holotransport::dynamics::{propagate, DEFAULT_STEPS};
use holotransport::frames::{gauge_act, orthonormalize, projectively_equal, projector_of};
use holotransport::matrixcore::{max_abs, Tolerance, C64};
use holotransport::metrics::holonomy;
use holotransport::random::{gaussian_matrix, random_transporting_loop, random_unitary, rng};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let mut r = rng(21);

    // Any full-rank d x n matrix spans a subspace; polar projection picks a frame.
    let raw = gaussian_matrix(&mut r, 5, 2);
    let v = orthonormalize(&raw)?;
    let s = random_unitary(&mut r, 2);
    let w = gauge_act(&v, &s)?;
    let same_subspace = max_abs(&(projector_of(&v).matrix() - projector_of(&w).matrix()));
    println!("V and VS share a projector: {same_subspace:.1e}");

    let phase = gauge_act(&v, &(s.adjoint() * &s * C64::from_polar(1.0, 0.8)))?;
    println!(
        "projective witness: {:?}",
        projectively_equal(&phase, &v, 1e-12)
    );

    // The holonomy transforms by conjugation under a change of initial frame.
    let tol = Tolerance::default();
    let (h, v0) = random_transporting_loop(&mut r, 5, 2, 1.0, 1);
    let path = propagate(&h, DEFAULT_STEPS)?.projector_path(&v0)?;
    let g = holonomy(&path, &v0, &tol)?.gate;
    let g_s = holonomy(&path, &gauge_act(&v0, &s)?, &tol)?.gate;
    let mismatch = max_abs(&(g_s.matrix() - s.adjoint() * g.matrix() * &s));
    println!("holonomy covariance mismatch {mismatch:.1e}");
    assert!(same_subspace < 1e-12 && mismatch < 3.0 * tol.integration);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run_example() {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
