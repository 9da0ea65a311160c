//! Acceptance run: one PASS/FAIL line per criterion.
//!
//! `cargo test --test acceptance` (release-grade opt-level is set for tests).

use std::f64::consts::{PI, TAU};
use std::time::{Duration, Instant};

use holotransport::cli;
use holotransport::dynamics::{from_rotating_frame, HamiltonianPath, RotatingFrame, DEFAULT_STEPS};
use holotransport::formats::save;
use holotransport::frames::{NFrame, ProjectorPath};
use holotransport::matrixcore::{c, expm_skew, op_norm, CMat, CVec, Tolerance, C64};
use holotransport::metrics::{
    curve_length, drive_loop, holonomy, isoholonomic_bound, projective_isoholonomic_bound,
    skew_information, GateSpec, ProjectiveGate,
};
use holotransport::protocols::{build_tight, verify_tight_with, TightThresholds};
use holotransport::random::{
    random_frame, random_hermitian, random_phase, random_smooth_hamiltonian, random_smooth_samples,
    random_transporting_loop, random_unitary, rng,
};
use holotransport::transport::{
    check_parallel_lab, check_parallel_rotating, check_projective_lab, gauge_shift, ShiftFunction,
};
use rand::Rng;

const C1_L_TOL: f64 = 1e-9;
const C1_LBAR_TOL: f64 = 1e-6;
const C1_GRID: usize = 100_000;
const C1_TIME: Duration = Duration::from_secs(1);

const C2_GATES: usize = 200;
const C2_PHASES: usize = 20;
const C2_TOL: f64 = 1e-9;
const C2_TIME: Duration = Duration::from_secs(10);

const C3_RANDOM: usize = 50;
const C3_TIME: Duration = Duration::from_secs(120);

const C4_PAIRS: usize = 50;
const C4_TOL: f64 = 1e-9;
const C4_TIME: Duration = Duration::from_secs(30);

const C5_PAIRS: usize = 50;
const C5_TIME: Duration = Duration::from_secs(60);

const C6_ANGLES: usize = 8;
const C6_TOL: f64 = 1e-4;
const C6_TIME: Duration = Duration::from_secs(30);

const C7_LOOPS: usize = 100;
const C7_SLACK: f64 = 1e-3;
const C7_TIME: Duration = Duration::from_secs(120);

const C8_PAIRS: usize = 100;
const C8_REL: f64 = 1e-6;
const C8_DT: f64 = 1e-5;
const C8_TIME: Duration = Duration::from_secs(10);

struct Outcome {
    passed: bool,
    detail: String,
}

fn timed(limit: Duration, f: impl FnOnce() -> Outcome) -> Outcome {
    let start = Instant::now();
    let mut out = f();
    let elapsed = start.elapsed();
    if elapsed > limit {
        out.passed = false;
    }
    out.detail = format!(
        "{}; {:.2} s (limit {} s)",
        out.detail,
        elapsed.as_secs_f64(),
        limit.as_secs_f64()
    );
    out
}

/// Shifted bound evaluated directly, used by the grid oracles.
fn shifted_bound(phases: &[f64], s: f64) -> f64 {
    phases
        .iter()
        .map(|&t| {
            let x = (t - s).rem_euclid(TAU);
            x * (TAU - x)
        })
        .sum::<f64>()
        .sqrt()
}

fn grid_oracle(phases: &[f64], points: usize) -> f64 {
    (0..points)
        .map(|j| shifted_bound(phases, TAU * j as f64 / points as f64))
        .fold(f64::INFINITY, f64::min)
}

fn criterion_1() -> Outcome {
    let dir = tempfile::tempdir().expect("temp dir");
    let gate_path = dir.path().join("gate.json");
    let gate = GateSpec::from_phases(&[PI / 2.0, 3.0 * PI / 2.0]).expect("gate");
    save(&gate_path, &gate).expect("write gate");
    timed(C1_TIME, || {
        let out = cli::run([
            "holotransport",
            "bound",
            "--gate",
            gate_path.to_str().unwrap(),
        ]);
        let report: serde_json::Value = match serde_json::from_str(&out.stdout) {
            Ok(v) => v,
            Err(e) => {
                return Outcome {
                    passed: false,
                    detail: format!("no report (exit {}): {e}; {}", out.code, out.stderr.trim()),
                }
            }
        };
        let l = report["L"].as_f64().unwrap_or(f64::NAN);
        let lbar = report["L_projective"].as_f64().unwrap_or(f64::NAN);
        let l_err = (l - PI * 1.5f64.sqrt()).abs();
        let oracle = grid_oracle(gate.eigenphases(), C1_GRID);
        let lbar_err = (lbar - oracle).abs();
        Outcome {
            passed: out.code == 0 && l_err < C1_L_TOL && lbar_err < C1_LBAR_TOL,
            detail: format!("L = {l:.15} (err {l_err:.1e}), L_projective = {lbar:.12} vs grid {oracle:.12} (err {lbar_err:.1e})"),
        }
    })
}

fn criterion_2() -> Outcome {
    timed(C2_TIME, || {
        let mut r = rng(2002);
        let (mut ordering_violations, mut worst_drift) = (0, 0.0f64);
        for i in 0..C2_GATES {
            let n = 1 + i % 4;
            let g = GateSpec::new(random_unitary(&mut r, n)).expect("gate");
            let (lbar, _) = projective_isoholonomic_bound(&ProjectiveGate::new(g.clone()));
            if lbar > isoholonomic_bound(&g) {
                ordering_violations += 1;
            }
            for _ in 0..C2_PHASES {
                let phi = random_phase(&mut r);
                let shifted =
                    projective_isoholonomic_bound(&ProjectiveGate::new(g.with_global_phase(phi))).0;
                worst_drift = worst_drift.max((shifted - lbar).abs());
            }
        }
        Outcome {
            passed: ordering_violations == 0 && worst_drift < C2_TOL,
            detail: format!(
                "{ordering_violations} ordering violations, worst phase drift {worst_drift:.1e}"
            ),
        }
    })
}

fn criterion_3() -> Outcome {
    timed(C3_TIME, || {
        let th = TightThresholds::default();
        let tol = Tolerance::default();
        let mut cases: Vec<(GateSpec, NFrame)> = (0..8)
            .map(|k| {
                (
                    GateSpec::from_phases(&[k as f64 * PI / 4.0]).expect("gate"),
                    NFrame::standard(2, 1).expect("frame"),
                )
            })
            .collect();
        let mut r = rng(3003);
        for _ in 0..C3_RANDOM {
            cases.push((
                GateSpec::new(random_unitary(&mut r, 2)).expect("gate"),
                NFrame::standard(4, 2).expect("frame"),
            ));
        }
        let mut failures = Vec::new();
        let (mut worst_closure, mut worst_hol, mut worst_len, mut worst_ratio) =
            (0.0f64, 0.0f64, 0.0f64, 0.0f64);
        for (i, (g, v)) in cases.iter().enumerate() {
            let outcome = build_tight(g, v, 1.0, 0.0)
                .and_then(|p| verify_tight_with(&p, DEFAULT_STEPS, &tol, &th));
            match outcome {
                Ok(ver) => {
                    worst_closure = worst_closure.max(ver.closure_defect);
                    worst_hol = worst_hol
                        .max(ver.holonomy_distance)
                        .max(ver.global_phase_error.unwrap_or(0.0));
                    worst_len = worst_len.max((ver.report.length - isoholonomic_bound(g)).abs());
                    if ver.report.bound > 0.0 {
                        worst_ratio = worst_ratio.max((ver.report.saturation_ratio - 1.0).abs());
                    }
                    if !ver.passed {
                        failures.push(format!("case {i}: {}", ver.failures.join("; ")));
                    }
                }
                Err(e) => failures.push(format!("case {i}: {e}")),
            }
        }
        Outcome {
            passed: failures.is_empty(),
            detail: format!(
                "{} cases, {} failed; worst closure {worst_closure:.1e}, holonomy {worst_hol:.1e}, length {worst_len:.1e}, ratio {worst_ratio:.1e}{}",
                cases.len(),
                failures.len(),
                failures.first().map(|f| format!(" [{f}]")).unwrap_or_default()
            ),
        }
    })
}

fn criterion_4() -> Outcome {
    timed(C4_TIME, || {
        let tol = Tolerance::default();
        let mut r = rng(4004);
        let (mut verdict_mismatch, mut worst_trace, mut missed_flips, mut flips) =
            (0, 0.0f64, 0, 0);
        for i in 0..C4_PAIRS {
            let d = 3 + i % 3;
            let n = 1 + i % 2;
            let intervals = 512;
            let (h, v0): (HamiltonianPath, NFrame) = if i % 2 == 0 {
                random_transporting_loop(&mut r, d, n, 1.0, 2)
            } else {
                (
                    random_smooth_hamiltonian(&mut r, d, 1.0, intervals, 1.0),
                    random_frame(&mut r, d, n),
                )
            };
            let amplitude = 10f64.powf(r.random_range(-6.0..0.0));
            let eps = ShiftFunction::new(
                1.0,
                random_smooth_samples(&mut r, 1.0, intervals, amplitude),
            )
            .expect("shift");
            let shifted = gauge_shift(&h, &eps).expect("shift");
            let a = check_projective_lab(&h, &v0, DEFAULT_STEPS, &tol).expect("check");
            let b = check_projective_lab(&shifted, &v0, DEFAULT_STEPS, &tol).expect("check");
            if a.verdict != b.verdict {
                verdict_mismatch += 1;
            }
            let diff = a
                .residual_trace
                .iter()
                .zip(&b.residual_trace)
                .map(|(x, y)| (x - y).abs())
                .fold(0.0, f64::max);
            worst_trace = worst_trace.max(diff);
            if eps.max_abs() > 10.0 * tol.transport {
                flips += 1;
                let conventional =
                    check_parallel_lab(&shifted, &v0, DEFAULT_STEPS, &tol).expect("check");
                if conventional.verdict.passed() {
                    missed_flips += 1;
                }
            }
        }
        Outcome {
            passed: verdict_mismatch == 0 && worst_trace < C4_TOL && missed_flips == 0,
            detail: format!(
                "{verdict_mismatch} verdict mismatches, worst trace difference {worst_trace:.1e}, {missed_flips}/{flips} conventional checks failed to flip"
            ),
        }
    })
}

/// Random Hermitian generator with unit operator norm.
fn unit_generator(r: &mut holotransport::random::ScenarioRng, d: usize) -> CMat {
    let b = random_hermitian(r, d, 1.0);
    let norm = op_norm(&b);
    b / c(norm, 0.0)
}

/// Frames are sampled on the integration grid: the central-difference
/// potential of a sampled frame carries an `h^2 |R'''|` error that the
/// integrator cannot remove.
fn criterion_5() -> Outcome {
    timed(C5_TIME, || {
        let tol = Tolerance::default();
        let limit = 3.0 * tol.integration;
        let mut r = rng(5005);
        let mut worst = 0.0f64;
        for i in 0..C5_PAIRS {
            let d = 2 + i % 5;
            let n = 1 + i % (d - 1);
            let tau = 1.0;
            let intervals = DEFAULT_STEPS;
            let frame = if i % 2 == 0 {
                RotatingFrame::constant_generator(unit_generator(&mut r, d), tau).expect("frame")
            } else {
                let b1 = unit_generator(&mut r, d);
                let b2 = unit_generator(&mut r, d);
                let samples = (0..=intervals)
                    .map(|j| {
                        let t = tau * j as f64 / intervals as f64;
                        expm_skew(&b1, -t).unwrap() * expm_skew(&b2, -(TAU * t).sin()).unwrap()
                    })
                    .collect();
                RotatingFrame::sampled(samples, tau).expect("frame")
            };
            let h_rf = if i % 3 == 0 {
                HamiltonianPath::constant(random_hermitian(&mut r, d, 1.0), tau).expect("H")
            } else {
                random_smooth_hamiltonian(&mut r, d, tau, intervals, 1.0)
            };
            let v0 = random_frame(&mut r, d, n);
            let lab = from_rotating_frame(&h_rf, &frame).expect("pull back");
            let rot =
                check_parallel_rotating(&h_rf, &frame, &v0, DEFAULT_STEPS, &tol).expect("check");
            let direct = check_parallel_lab(&lab, &v0, DEFAULT_STEPS, &tol).expect("check");
            let diff = rot
                .residual_trace
                .iter()
                .zip(&direct.residual_trace)
                .map(|(x, y)| (x - y).abs())
                .fold(0.0, f64::max);
            worst = worst.max(diff);
        }
        Outcome {
            passed: worst < limit,
            detail: format!("worst trace difference {worst:.1e} (limit {limit:.0e})"),
        }
    })
}

fn cap_state(alpha: f64, t: f64) -> CVec {
    CVec::from_vec(vec![
        c((alpha / 2.0).cos(), 0.0),
        C64::from_polar((alpha / 2.0).sin(), TAU * t),
    ])
}

/// Phase of `prod_k <psi_{k+1}|psi_k>` around the closed discretized loop.
fn pancharatnam(alpha: f64, points: usize) -> f64 {
    let mut prod = c(1.0, 0.0);
    for k in 0..points {
        let a = cap_state(alpha, k as f64 / points as f64);
        let b = cap_state(alpha, (k + 1) as f64 / points as f64);
        prod *= b.dotc(&a);
    }
    prod.arg()
}

fn cap_phase(alpha: f64) -> Option<f64> {
    let tol = Tolerance::default();
    let path = ProjectorPath::from_states(1.0, DEFAULT_STEPS, |t| cap_state(alpha, t)).ok()?;
    let v0 = NFrame::new(CMat::from_column_slice(
        2,
        1,
        cap_state(alpha, 0.0).as_slice(),
    ))
    .ok()?;
    Some(holonomy(&path, &v0, &tol).ok()?.gate.matrix()[(0, 0)].arg())
}

fn phase_gap(a: f64, b: f64) -> f64 {
    let x = (a - b).rem_euclid(TAU);
    x.min(TAU - x)
}

fn criterion_6() -> Outcome {
    timed(C6_TIME, || {
        let mut worst_oracle = 0.0f64;
        for k in 0..C6_ANGLES {
            let alpha = PI * (k as f64 + 0.5) / C6_ANGLES as f64;
            let gap = cap_phase(alpha)
                .map_or(f64::INFINITY, |p| phase_gap(p, pancharatnam(alpha, 20_000)));
            worst_oracle = worst_oracle.max(gap);
        }
        let mut worst_theta = 0.0f64;
        for theta in [PI / 4.0, PI / 2.0, PI, 3.0 * PI / 2.0] {
            let alpha = (theta / PI - 1.0).acos();
            let gap = cap_phase(alpha).map_or(f64::INFINITY, |p| phase_gap(p, theta));
            worst_theta = worst_theta.max(gap);
        }
        Outcome {
            passed: worst_oracle < C6_TOL && worst_theta < C6_TOL,
            detail: format!("worst gap to product oracle {worst_oracle:.1e}, worst gap to theta {worst_theta:.1e}"),
        }
    })
}

fn criterion_7() -> Outcome {
    timed(C7_TIME, || {
        let tol = Tolerance::default();
        let mut r = rng(7007);
        let (mut violations, mut errors, mut min_gap) = (0, 0, f64::INFINITY);
        for i in 0..C7_LOOPS {
            let n = 1 + i % 2;
            let d = r.random_range(n + 1..=5);
            let (h, v0) = random_transporting_loop(&mut r, d, n, 1.0, 2);
            match drive_loop(&h, &v0, DEFAULT_STEPS, &tol) {
                Ok(l) => {
                    let g = &l.holonomy.gate;
                    let conventional = isoholonomic_bound(g);
                    let projective =
                        projective_isoholonomic_bound(&ProjectiveGate::new(g.clone())).0;
                    debug_assert!((curve_length(&l.path) - l.length).abs() < 1e-12);
                    min_gap = min_gap
                        .min(l.length - conventional)
                        .min(l.length - projective);
                    if l.length < conventional - C7_SLACK || l.length < projective - C7_SLACK {
                        violations += 1;
                    }
                }
                Err(_) => errors += 1,
            }
        }
        Outcome {
            passed: violations == 0 && errors == 0,
            detail: format!(
                "{violations} violations, {errors} errors, smallest length - bound {min_gap:.2e}"
            ),
        }
    })
}

fn criterion_8() -> Outcome {
    timed(C8_TIME, || {
        let mut r = rng(8008);
        let mut worst = 0.0f64;
        for _ in 0..C8_PAIRS {
            let d = r.random_range(2..=6);
            let n = r.random_range(1..d);
            let h = random_hermitian(&mut r, d, 1.0);
            let p = {
                let v = random_frame(&mut r, d, n);
                v.matrix() * v.matrix().adjoint()
            };
            let evolve = |t: f64| {
                let u = expm_skew(&h, t).unwrap();
                &u * &p * u.adjoint()
            };
            let dp = (evolve(C8_DT) - evolve(-C8_DT)) / c(2.0 * C8_DT, 0.0);
            let speed2 = (&dp * &dp).trace().re / 2.0;
            let i = skew_information(&h, &p).unwrap();
            worst = worst.max((i - speed2).abs() / i);
        }
        Outcome {
            passed: worst < C8_REL,
            detail: format!("worst relative deviation {worst:.1e}"),
        }
    })
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 8] = [
        ("isoholonomic bound values", criterion_1),
        ("projective bound ordering and invariance", criterion_2),
        ("tight synthesis end to end", criterion_3),
        ("gauge invariance", criterion_4),
        ("frame covariance", criterion_5),
        ("geometric-phase oracle", criterion_6),
        ("isoholonomic inequality", criterion_7),
        ("skew-information consistency", criterion_8),
    ];
    let mut failed = 0;
    for (k, (name, f)) in criteria.iter().enumerate() {
        let out = f();
        if !out.passed {
            failed += 1;
        }
        println!(
            "criterion {} ({name}): {} | {}",
            k + 1,
            if out.passed { "PASS" } else { "FAIL" },
            out.detail
        );
    }
    println!(
        "acceptance: {}/{} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
