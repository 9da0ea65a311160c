//! Isoholonomic bounds of a few familiar gates.
//!
//! `cargo run --example gate_bounds`

use std::error::Error;
use std::f64::consts::{FRAC_1_SQRT_2, PI};

use holotransport::matrixcore::{c, CMat};
use holotransport::metrics::{
    isoholonomic_bound, projective_isoholonomic_bound, GateSpec, ProjectiveGate,
};

fn hadamard() -> CMat {
    CMat::from_row_slice(2, 2, &[c(1.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(-1.0, 0.0)])
        * c(FRAC_1_SQRT_2, 0.0)
}

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let gates = [
        ("identity", GateSpec::identity(2)?),
        ("hadamard", GateSpec::new(hadamard())?),
        ("pauli-z", GateSpec::from_phases(&[0.0, PI])?),
        ("-1 (global phase)", GateSpec::from_phases(&[PI, PI])?),
        ("T", GateSpec::from_phases(&[0.0, PI / 4.0])?),
    ];
    println!("{:<18} {:>10} {:>12}", "gate", "L", "L_proj");
    for (name, g) in &gates {
        let l = isoholonomic_bound(g);
        let (lp, _) = projective_isoholonomic_bound(&ProjectiveGate::new(g.clone()));
        println!("{name:<18} {l:>10.6} {lp:>12.6}");
        assert!(lp <= l + 1e-12);
    }

    // -1 costs a full pi per dimension conventionally but nothing projectively.
    let minus_one = GateSpec::from_phases(&[PI, PI])?;
    let (lp, shift) = projective_isoholonomic_bound(&ProjectiveGate::new(minus_one.clone()));
    assert!((isoholonomic_bound(&minus_one) - PI * 2f64.sqrt()).abs() < 1e-12);
    assert!(lp < 1e-12, "shift index {shift}");
    Ok(())
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run_example() {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
