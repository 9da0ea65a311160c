//! Quantum speed limit for a random parallel-transporting loop.
//!
//! `tau_QSL = L(Gamma) / <sqrt(I)>` never exceeds the run time. A generic
//! loop is far from tight; running it twice as slowly doubles `tau_QSL`
//! along with `tau`.

use std::error::Error;

use holotransport::dynamics::DEFAULT_STEPS;
use holotransport::matrixcore::Tolerance;
use holotransport::metrics::{drive_loop, ProjectiveGate, Target};
use holotransport::random::{random_transporting_loop, rng};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let tol = Tolerance::default();
    let (h, v0) = random_transporting_loop(&mut rng(3), 5, 2, 1.0, 1);

    let run = drive_loop(&h, &v0, DEFAULT_STEPS, &tol)?;
    let gate = run.holonomy.gate.clone();
    println!("holonomy eigenphases {:?}", gate.eigenphases());

    for target in [
        Target::Gate(gate.clone()),
        Target::Projective(ProjectiveGate::new(gate.clone())),
    ] {
        let r = run.report(&target)?;
        println!(
            "{:?}: length {:.4} bound {:.4} mean speed {:.4} tau_QSL {:.4} ratio {:.4}",
            r.bound_kind, r.length, r.bound, r.mean_speed, r.tau_qsl, r.saturation_ratio
        );
        assert!(r.tau_qsl <= r.tau * (1.0 + 1e-3));
    }

    let slow = drive_loop(&h.time_dilated(2.0)?, &v0, DEFAULT_STEPS, &tol)?
        .report(&Target::Gate(gate.clone()))?;
    let fast = run.report(&Target::Gate(gate))?;
    println!(
        "dilated x2: tau_QSL {:.4} -> {:.4}",
        fast.tau_qsl, slow.tau_qsl
    );
    assert!((slow.tau_qsl - 2.0 * fast.tau_qsl).abs() < 1e-3 * slow.tau_qsl);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run_example() {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
