//! A shift `H -> H + eps_t 1` moves every energy level at once. It only
//! changes the global phase of the evolution, yet the conventional transport
//! condition `<v_k|H|v_l> = 0` notices it. The projective condition does not.

use std::error::Error;

use holotransport::dynamics::DEFAULT_STEPS;
use holotransport::matrixcore::Tolerance;
use holotransport::random::{random_transporting_loop, rng};
use holotransport::transport::{
    check_parallel_lab, check_projective_lab, gauge_shift, ShiftFunction,
};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let tol = Tolerance::default();
    let (h, v0) = random_transporting_loop(&mut rng(11), 4, 2, 1.0, 2);
    let eps = ShiftFunction::from_fn(1.0, DEFAULT_STEPS, |t| 0.3 + 0.2 * (6.0 * t).cos())?;
    let shifted = gauge_shift(&h, &eps)?;

    let plain = check_parallel_lab(&h, &v0, DEFAULT_STEPS, &tol)?;
    let plain_shifted = check_parallel_lab(&shifted, &v0, DEFAULT_STEPS, &tol)?;
    let proj = check_projective_lab(&h, &v0, DEFAULT_STEPS, &tol)?;
    let proj_shifted = check_projective_lab(&shifted, &v0, DEFAULT_STEPS, &tol)?;

    println!(
        "conventional: {:?} -> {:?} (max residual {:.2e} -> {:.2e})",
        plain.verdict, plain_shifted.verdict, plain.max_residual, plain_shifted.max_residual
    );
    println!(
        "projective:   {:?} -> {:?} (max residual {:.2e} -> {:.2e})",
        proj.verdict, proj_shifted.verdict, proj.max_residual, proj_shifted.max_residual
    );

    let mid = proj_shifted.epsilon_trace.len() / 2;
    println!(
        "estimated eps at t = 1/2: {:.6} (true {:.6})",
        proj_shifted.epsilon_trace[mid],
        0.3 + 0.2 * 3f64.cos()
    );

    assert!(plain.verdict.passed() && !plain_shifted.verdict.passed());
    assert!(proj.verdict.passed() && proj_shifted.verdict.passed());
    Ok(())
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run_example() {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
