//! Horizontal lift of a spherical-cap loop on the Bloch sphere.
//!
//! The state `cos(a/2)|0> + e^{2 pi i t} sin(a/2)|1>` circles a cap of
//! polar angle `a`. Its lift returns to the start multiplied by the
//! geometric phase, minus half the enclosed solid angle.

use std::error::Error;
use std::f64::consts::{PI, TAU};

use holotransport::frames::{NFrame, ProjectorPath};
use holotransport::matrixcore::{c, CMat, CVec, Tolerance, C64};
use holotransport::metrics::{curve_length, holonomy, isoholonomic_bound};
use holotransport::transport::horizontal_lift;

fn cap(alpha: f64) -> impl Fn(f64) -> CVec {
    move |t| {
        CVec::from_vec(vec![
            c((alpha / 2.0).cos(), 0.0),
            C64::from_polar((alpha / 2.0).sin(), TAU * t),
        ])
    }
}

fn wrap(x: f64) -> f64 {
    x.rem_euclid(TAU)
}

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let tol = Tolerance::default();
    for alpha in [PI / 6.0, PI / 3.0, PI / 2.0, 2.0 * PI / 3.0] {
        let path = ProjectorPath::from_states(1.0, 4096, cap(alpha))?;
        let psi0 = cap(alpha)(0.0);
        let v0 = NFrame::new(CMat::from_column_slice(2, 1, psi0.as_slice()))?;
        let lift = horizontal_lift(&path, &v0)?;
        let hol = holonomy(&path, &v0, &tol)?;

        let phase = hol.gate.eigenphases()[0];
        let expected = wrap(-PI * (1.0 - alpha.cos()));
        let gap = (phase - expected).abs().min(TAU - (phase - expected).abs());
        println!(
            "alpha {alpha:.4}: phase {phase:.6} expected {expected:.6} | length {:.4} >= bound {:.4} | drift {:.1e}",
            curve_length(&path),
            isoholonomic_bound(&hol.gate),
            lift.connection_residuals().iter().cloned().fold(0.0, f64::max),
        );
        assert!(gap < 1e-4);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run_example() {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
