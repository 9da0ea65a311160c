//! The transport condition in a rotating picture.
//!
//! A tight protocol is simplest to write down in the frame `R_t = e^{itB}`
//! where its Hamiltonian is static. The rotating-frame check subtracts the
//! frame potential `A = i dR/dt R^dag` and must agree with the lab check.

use std::error::Error;

use holotransport::dynamics::{from_rotating_frame, to_rotating_frame, DEFAULT_STEPS};
use holotransport::frames::NFrame;
use holotransport::matrixcore::{max_abs, Tolerance};
use holotransport::metrics::GateSpec;
use holotransport::protocols::build_tight;
use holotransport::transport::{check_parallel_lab, check_parallel_rotating};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let tol = Tolerance::default();
    let target = GateSpec::from_phases(&[1.0, 2.5])?;
    let v0 = NFrame::standard(4, 2)?;
    let protocol = build_tight(&target, &v0, 1.0, 0.0)?;

    let r = protocol.rotating_frame()?;
    let h_rf = protocol.rf_hamiltonian()?;
    let rot = check_parallel_rotating(&h_rf, &r, &v0, DEFAULT_STEPS, &tol)?;
    let lab = check_parallel_lab(protocol.hamiltonian(), &v0, DEFAULT_STEPS, &tol)?;
    println!(
        "rotating frame: {:?}, max residual {:.2e}",
        rot.verdict, rot.max_residual
    );
    println!(
        "lab frame:      {:?}, max residual {:.2e}",
        lab.verdict, lab.max_residual
    );

    let gap = rot
        .residual_trace
        .iter()
        .zip(&lab.residual_trace)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    println!("largest trace gap {gap:.2e}");
    assert!(gap < 3.0 * tol.integration);

    // Pulling back and pushing forward again returns the static H^RF.
    let pulled = from_rotating_frame(&h_rf, &r)?;
    let again = to_rotating_frame(&pulled, &r)?;
    let drift = (0..=8)
        .map(|k| max_abs(&(again.at(k as f64 / 8.0) - h_rf.at(k as f64 / 8.0))))
        .fold(0.0, f64::max);
    println!("round trip drift {drift:.2e}");
    assert!(drift < 1e-9);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run_example() {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
