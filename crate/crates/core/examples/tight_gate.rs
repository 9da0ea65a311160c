//! Synthesize a holonomic gate that saturates the isoholonomic bound.
//!
//! Each eigenphase of the target gets its own ancilla and a resonant drive;
//! the computational space is carried around a cap whose area equals the
//! phase. The whole protocol moves at constant speed along a loop of length
//! exactly `L(Gamma)`.

use std::error::Error;

use holotransport::dynamics::DEFAULT_STEPS;
use holotransport::frames::NFrame;
use holotransport::matrixcore::Tolerance;
use holotransport::metrics::{isoholonomic_bound, GateSpec};
use holotransport::protocols::{build_tight, verify_tight};
use holotransport::random::{random_unitary, rng};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let tol = Tolerance::default();
    let target = GateSpec::new(random_unitary(&mut rng(7), 2))?;
    let frame = NFrame::standard(4, 2)?;
    let tau = 2.0;

    let protocol = build_tight(&target, &frame, tau, 0.0)?;
    println!("target eigenphases {:?}", target.eigenphases());
    for (k, b) in protocol.blocks().iter().enumerate() {
        println!(
            "block {k}: theta {:.4}, cap angle {:.4}, speed {:.4}",
            b.theta,
            b.alpha,
            b.speed(tau)
        );
    }

    let check = verify_tight(&protocol, DEFAULT_STEPS, &tol)?;
    let r = &check.report;
    println!(
        "length {:.6} vs L {:.6}, tau_QSL {:.6} / tau {tau}, ratio {:.6}",
        r.length,
        isoholonomic_bound(&target),
        r.tau_qsl,
        r.saturation_ratio
    );
    println!(
        "holonomy distance {:.2e}, closure {:.2e}",
        check.holonomy_distance, check.closure_defect
    );
    assert!(check.passed, "{:?}", check.failures);

    // Same gate up to a global phase, now with every level shifted by 0.7.
    let shifted = build_tight(&target, &frame, tau, 0.7)?;
    let check = verify_tight(&shifted, DEFAULT_STEPS, &tol)?;
    println!(
        "with offset: epsilon estimate {:.6}, passed {}",
        check.epsilon_estimate, check.passed
    );
    assert!(check.passed, "{:?}", check.failures);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run_example() {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
