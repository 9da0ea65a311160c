//! Command-line interface: `bound`, `lift`, `check`, `tight` and `verify`.
//!
//! Reports are JSON on stdout (or `--out`), a one-line summary goes to
//! stderr. Exit codes: 0 pass, 1 verification failure, 2 input error,
//! 3 numerical degeneracy.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::Value;

use crate::dynamics::{HamiltonianPath, RotatingFrame, DEFAULT_STEPS};
use crate::error::{Error, Result};
use crate::formats::{load, matrix_to_wire, save, WireMatrix};
use crate::frames::{grid, NFrame, ProjectorPath};
use crate::matrixcore::{CMat, Tolerance};
use crate::metrics::{
    drive_loop, grassmann_speeds, isoholonomic_bound, projective_isoholonomic_bound, trapezoid,
    GateSpec, ProjectiveGate, QslReport, Target,
};
use crate::protocols::{build_tight, verify_tight, TightProtocol, TightVerification};
use crate::random::{random_unitary, rng};
use crate::transport::{
    check_parallel_lab, check_parallel_rotating, check_projective_lab, check_projective_rotating,
    horizontal_lift_with, loop_closure_at, projective_horizontal_lift, ShiftFunction,
    TransportReport,
};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_DEGENERATE: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "holotransport",
    version,
    about = "Holonomies, isoholonomic bounds and tight holonomic gates"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Option<Command>,

    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Propagation steps.
    #[arg(long, global = true, default_value_t = DEFAULT_STEPS)]
    pub steps: usize,
    #[arg(long, global = true, default_value_t = 1e-10)]
    pub tol_structural: f64,
    #[arg(long, global = true, default_value_t = 1e-8)]
    pub tol_transport: f64,
    #[arg(long, global = true, default_value_t = 1e-4)]
    pub tol_integration: f64,
    /// Use projective (global-phase-insensitive) conditions and bounds.
    #[arg(long, global = true)]
    pub projective: bool,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Write the JSON report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Write CSV traces here.
    #[arg(long, global = true)]
    pub plot: Option<PathBuf>,
    /// JSON array of argument lists, run concurrently.
    #[arg(long, global = true)]
    pub batch: Option<PathBuf>,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Isoholonomic bounds of a gate.
    Bound {
        #[arg(long)]
        gate: PathBuf,
    },
    /// Horizontal lift and holonomy of a projector path.
    Lift {
        #[arg(long)]
        path: PathBuf,
        #[arg(long)]
        frame: PathBuf,
        /// Shift function for a projective lift.
        #[arg(long)]
        eps: Option<PathBuf>,
    },
    /// Parallel-transport condition of a Hamiltonian.
    Check {
        #[arg(long)]
        hamiltonian: PathBuf,
        #[arg(long)]
        frame: PathBuf,
        /// Check in this rotating frame; the Hamiltonian is then given in that frame.
        #[arg(long)]
        rotating_frame: Option<PathBuf>,
    },
    /// Build and verify a tight protocol for a gate.
    Tight {
        #[arg(
            long,
            conflicts_with = "random_target",
            required_unless_present = "random_target"
        )]
        gate: Option<PathBuf>,
        /// Draw a Haar-random n x n target from --seed instead of reading one.
        #[arg(long)]
        random_target: Option<usize>,
        #[arg(long)]
        dim: usize,
        #[arg(long, default_value_t = 1.0)]
        tau: f64,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        epsilon: f64,
        /// Computational frame; defaults to the first n standard basis vectors.
        #[arg(long)]
        frame: Option<PathBuf>,
        /// Where to write the protocol file.
        #[arg(long)]
        protocol: PathBuf,
        /// Also export the assembled Hamiltonian.
        #[arg(long)]
        hamiltonian_out: Option<PathBuf>,
        /// Export the Hamiltonian sampled on this many intervals instead of in closed form.
        #[arg(long)]
        sampled: Option<usize>,
    },
    /// Speed-limit report of the loop driven by a Hamiltonian.
    Verify {
        #[arg(long)]
        hamiltonian: PathBuf,
        #[arg(long)]
        frame: PathBuf,
        /// Target gate; defaults to the measured holonomy.
        #[arg(long)]
        gate: Option<PathBuf>,
    },
}

impl Common {
    pub fn tolerance(&self) -> Result<Tolerance> {
        Tolerance::new(
            self.tol_structural,
            self.tol_transport,
            self.tol_integration,
        )
    }
}

/// Result of one invocation, with everything that would be printed.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Verification { .. } | Error::OpenLoop { .. } => EXIT_FAIL,
        Error::Degenerate { .. } | Error::Degeneracy(_) => EXIT_DEGENERATE,
        _ => EXIT_INPUT,
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundReport {
    pub eigenphases: Vec<f64>,
    #[serde(rename = "L")]
    pub l: f64,
    #[serde(rename = "L_projective")]
    pub l_projective: f64,
    /// Index `k` of the minimizing shift; 0 is the zero shift, `l` the `l`-th eigenphase.
    pub argmin_shift: usize,
    /// The minimizing shift itself.
    pub shift: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub canonical: Option<WireMatrix>,
}

pub fn cmd_bound(gate: &GateSpec, projective: bool) -> BoundReport {
    let pg = ProjectiveGate::new(gate.clone());
    let (l_projective, k) = projective_isoholonomic_bound(&pg);
    BoundReport {
        eigenphases: gate.eigenphases().to_vec(),
        l: isoholonomic_bound(gate),
        l_projective,
        argmin_shift: k,
        shift: if k == 0 {
            0.0
        } else {
            gate.eigenphases()[k - 1]
        },
        canonical: projective.then(|| matrix_to_wire(pg.canonical().matrix())),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct LiftReport {
    /// `V0^dag V_tau`, unprojected.
    pub holonomy: WireMatrix,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eigenphases: Option<Vec<f64>>,
    pub closure_defect: f64,
    pub closed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub caveat: Option<String>,
    pub connection_residual: f64,
    pub length: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub canonical: Option<WireMatrix>,
    #[serde(skip)]
    pub residual_trace: Vec<f64>,
    #[serde(skip)]
    pub speed_trace: Vec<f64>,
}

pub fn cmd_lift(
    path: &ProjectorPath,
    frame: &NFrame,
    projective: bool,
    eps: Option<&ShiftFunction>,
    tol: &Tolerance,
) -> Result<LiftReport> {
    let lift = match eps {
        Some(e) => projective_horizontal_lift(path, frame, e)?,
        None => horizontal_lift_with(path, frame, tol)?,
    };
    let closure = loop_closure_at(path, tol.integration);
    let raw = lift.first().matrix().adjoint() * lift.last().matrix();
    let gate = if closure.closed {
        GateSpec::with_tolerance(raw.clone(), 3.0 * tol.integration).ok()
    } else {
        None
    };
    let residual_trace = if projective {
        lift.projective_connection_residuals()
    } else {
        lift.connection_residuals()
    };
    let speed_trace = grassmann_speeds(path);
    Ok(LiftReport {
        holonomy: matrix_to_wire(&raw),
        eigenphases: gate.as_ref().map(|g| g.eigenphases().to_vec()),
        closure_defect: closure.defect,
        closed: closure.closed,
        caveat: (!closure.closed).then(|| {
            format!(
                "open loop: closure defect {:.3e} exceeds {:.1e}; the matrix is not a holonomy",
                closure.defect, tol.integration
            )
        }),
        connection_residual: residual_trace.iter().copied().fold(0.0, f64::max),
        length: trapezoid(&speed_trace, path.dt()),
        canonical: gate
            .filter(|_| projective)
            .map(|g| matrix_to_wire(ProjectiveGate::new(g).canonical().matrix())),
        residual_trace,
        speed_trace,
    })
}

/// `rotating`, when given, is the frame in which `h` is expressed.
pub fn cmd_check(
    h: &HamiltonianPath,
    frame: &NFrame,
    rotating: Option<&RotatingFrame>,
    projective: bool,
    steps: usize,
    tol: &Tolerance,
) -> Result<TransportReport> {
    match (rotating, projective) {
        (None, false) => check_parallel_lab(h, frame, steps, tol),
        (None, true) => check_projective_lab(h, frame, steps, tol),
        (Some(r), false) => check_parallel_rotating(h, r, frame, steps, tol),
        (Some(r), true) => check_projective_rotating(h, r, frame, steps, tol),
    }
}

pub fn cmd_tight(
    gate: &GateSpec,
    frame: &NFrame,
    tau: f64,
    epsilon: f64,
    steps: usize,
    tol: &Tolerance,
) -> Result<(TightProtocol, TightVerification)> {
    let protocol = build_tight(gate, frame, tau, epsilon)?;
    let verification = verify_tight(&protocol, steps, tol)?;
    Ok((protocol, verification))
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    #[serde(flatten)]
    pub qsl: QslReport,
    /// `"file"` or `"measured"`.
    pub target: String,
    pub holonomy: WireMatrix,
    pub eigenphases: Vec<f64>,
    pub closure_defect: f64,
    #[serde(skip)]
    pub speed_trace: Vec<f64>,
    #[serde(skip)]
    pub bloch_trace: Option<Vec<[f64; 3]>>,
}

fn bloch_components(p: &CMat) -> [f64; 3] {
    let off = p[(0, 1)];
    [2.0 * off.re, -2.0 * off.im, p[(0, 0)].re - p[(1, 1)].re]
}

pub fn cmd_verify(
    h: &HamiltonianPath,
    frame: &NFrame,
    gate: Option<&GateSpec>,
    projective: bool,
    steps: usize,
    tol: &Tolerance,
) -> Result<VerifyReport> {
    let driven = drive_loop(h, frame, steps, tol)?;
    let measured = driven.holonomy.gate.clone();
    let chosen = gate.cloned().unwrap_or_else(|| measured.clone());
    if chosen.n() != frame.n() {
        return Err(Error::Shape(format!(
            "gate is {0}x{0} but the frame has {1} columns",
            chosen.n(),
            frame.n()
        )));
    }
    let target = if projective {
        Target::Projective(chosen.into())
    } else {
        Target::Gate(chosen)
    };
    let qsl = driven.report(&target)?;
    let bloch_trace = (frame.dim() == 2 && frame.n() == 1).then(|| {
        driven
            .path
            .samples()
            .iter()
            .map(|p| bloch_components(p.matrix()))
            .collect()
    });
    Ok(VerifyReport {
        qsl,
        target: if gate.is_some() { "file" } else { "measured" }.into(),
        holonomy: matrix_to_wire(measured.matrix()),
        eigenphases: measured.eigenphases().to_vec(),
        closure_defect: driven.holonomy.closure_defect,
        speed_trace: driven.speeds,
        bloch_trace,
    })
}

fn write_csv(path: &Path, header: &[&str], rows: impl Iterator<Item = Vec<f64>>) -> Result<()> {
    let io = |e: csv::Error| Error::Io(format!("{}: {e}", path.display()));
    let mut w = csv::Writer::from_path(path).map_err(io)?;
    w.write_record(header).map_err(io)?;
    for row in rows {
        w.write_record(row.iter().map(|x| format!("{x:e}")))
            .map_err(io)?;
    }
    w.flush().map_err(|e| Error::Io(e.to_string()))
}

struct Report {
    value: Value,
    passed: bool,
    summary: String,
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("reports serialize")
}

fn execute(command: &Command, common: &Common) -> Result<Report> {
    let tol = common.tolerance()?;
    let steps = common.steps;
    match command {
        Command::Bound { gate } => {
            let g: GateSpec = load(gate, &tol)?;
            let r = cmd_bound(&g, common.projective);
            Ok(Report {
                summary: format!("L = {:.12}, L_projective = {:.12}", r.l, r.l_projective),
                value: to_value(&r),
                passed: true,
            })
        }
        Command::Lift { path, frame, eps } => {
            let p: ProjectorPath = load(path, &tol)?;
            let v: NFrame = load(frame, &tol)?;
            let e: Option<ShiftFunction> = eps.as_deref().map(|f| load(f, &tol)).transpose()?;
            let r = cmd_lift(&p, &v, common.projective, e.as_ref(), &tol)?;
            if let Some(plot) = &common.plot {
                let times = p.times();
                let bloch = p.dim() == 2 && p.rank() == 1;
                let mut header = vec!["t", "speed", "connection_residual"];
                if bloch {
                    header.extend(["bloch_x", "bloch_y", "bloch_z"]);
                }
                write_csv(
                    plot,
                    &header,
                    (0..times.len()).map(|k| {
                        let mut row = vec![times[k], r.speed_trace[k], r.residual_trace[k]];
                        if bloch {
                            row.extend(bloch_components(p.samples()[k].matrix()));
                        }
                        row
                    }),
                )?;
            }
            Ok(Report {
                summary: match &r.caveat {
                    Some(c) => format!("warning: {c}"),
                    None => format!(
                        "closed loop, length {:.9}, residual {:.3e}",
                        r.length, r.connection_residual
                    ),
                },
                value: to_value(&r),
                passed: true,
            })
        }
        Command::Check {
            hamiltonian,
            frame,
            rotating_frame,
        } => {
            let h: HamiltonianPath = load(hamiltonian, &tol)?;
            let v: NFrame = load(frame, &tol)?;
            let r: Option<RotatingFrame> = rotating_frame
                .as_deref()
                .map(|f| load(f, &tol))
                .transpose()?;
            let report = cmd_check(&h, &v, r.as_ref(), common.projective, steps, &tol)?;
            if let Some(plot) = &common.plot {
                let times = grid(h.tau(), report.residual_trace.len() - 1);
                let header: &[&str] = if common.projective {
                    &["t", "residual", "epsilon"]
                } else {
                    &["t", "residual"]
                };
                write_csv(
                    plot,
                    header,
                    (0..times.len()).map(|k| {
                        let mut row = vec![times[k], report.residual_trace[k]];
                        if let Some(e) = report.epsilon_trace.get(k) {
                            row.push(*e);
                        }
                        row
                    }),
                )?;
            }
            Ok(Report {
                summary: format!(
                    "{:?}: max residual {:.3e}",
                    report.verdict, report.max_residual
                ),
                passed: report.verdict.passed(),
                value: to_value(&report),
            })
        }
        Command::Tight {
            gate,
            random_target,
            dim,
            tau,
            epsilon,
            frame,
            protocol,
            hamiltonian_out,
            sampled,
        } => {
            let g: GateSpec = match (gate, random_target) {
                (Some(path), _) => load(path, &tol)?,
                (None, Some(n)) if *n > 0 => {
                    GateSpec::new(random_unitary(&mut rng(common.seed), *n))?
                }
                _ => {
                    return Err(Error::InvalidParameter(
                        "need --gate or a positive --random-target".into(),
                    ))
                }
            };
            let v = match frame {
                Some(f) => load(f, &tol)?,
                None => NFrame::standard(*dim, g.n())?,
            };
            if v.dim() != *dim {
                return Err(Error::Shape(format!(
                    "frame dimension {} differs from --dim {dim}",
                    v.dim()
                )));
            }
            let (p, verification) = cmd_tight(&g, &v, *tau, *epsilon, steps, &tol)?;
            save(protocol, &p)?;
            if let Some(out) = hamiltonian_out {
                match sampled {
                    Some(m) => save(out, &p.hamiltonian().to_sampled(*m)?)?,
                    None => save(out, p.hamiltonian())?,
                }
            }
            if let Some(plot) = &common.plot {
                let driven = drive_loop(p.hamiltonian(), p.frame(), steps, &tol)?;
                let times = driven.path.times();
                write_csv(
                    plot,
                    &["t", "speed"],
                    times.iter().zip(&driven.speeds).map(|(t, s)| vec![*t, *s]),
                )?;
            }
            let mut value = to_value(&verification);
            value["protocol"] = Value::String(protocol.display().to_string());
            value["target"] = to_value(&matrix_to_wire(g.matrix()));
            Ok(Report {
                summary: if verification.passed {
                    format!(
                        "tight protocol verified: length {:.9}, ratio {:.9}",
                        verification.report.length, verification.report.saturation_ratio
                    )
                } else {
                    format!("verification failed: {}", verification.failures.join("; "))
                },
                passed: verification.passed,
                value,
            })
        }
        Command::Verify {
            hamiltonian,
            frame,
            gate,
        } => {
            let h: HamiltonianPath = load(hamiltonian, &tol)?;
            let v: NFrame = load(frame, &tol)?;
            let g: Option<GateSpec> = gate.as_deref().map(|f| load(f, &tol)).transpose()?;
            let r = cmd_verify(&h, &v, g.as_ref(), common.projective, steps, &tol)?;
            if let Some(plot) = &common.plot {
                let times = grid(h.tau(), r.speed_trace.len() - 1);
                let mut header = vec!["t", "speed"];
                if r.bloch_trace.is_some() {
                    header.extend(["bloch_x", "bloch_y", "bloch_z"]);
                }
                write_csv(
                    plot,
                    &header,
                    (0..times.len()).map(|k| {
                        let mut row = vec![times[k], r.speed_trace[k]];
                        if let Some(b) = &r.bloch_trace {
                            row.extend(b[k]);
                        }
                        row
                    }),
                )?;
            }
            Ok(Report {
                summary: format!(
                    "tau_QSL = {:.9}, tau = {:.9}, ratio {:.9}",
                    r.qsl.tau_qsl, r.qsl.tau, r.qsl.saturation_ratio
                ),
                value: to_value(&r),
                passed: true,
            })
        }
    }
}

fn render(value: &Value) -> String {
    serde_json::to_string_pretty(value).expect("values serialize") + "\n"
}

/// Run one scenario; `--out` is honoured, nothing is printed.
fn run_command(command: &Command, common: &Common) -> (i32, Option<Value>, String) {
    match execute(command, common) {
        Ok(report) => {
            let code = if report.passed { EXIT_PASS } else { EXIT_FAIL };
            (code, Some(report.value), report.summary)
        }
        Err(e) => (exit_code(&e), None, format!("error: {e}")),
    }
}

fn finish(code: i32, value: Option<Value>, summary: String, out: Option<&Path>) -> Outcome {
    let mut stderr = summary + "\n";
    let mut stdout = String::new();
    let mut code = code;
    if let Some(v) = value {
        let text = render(&v);
        match out {
            Some(path) => {
                if let Err(e) = fs::write(path, text) {
                    stderr.push_str(&format!("error: {}: {e}\n", path.display()));
                    code = EXIT_INPUT;
                }
            }
            None => stdout = text,
        }
    }
    Outcome {
        code,
        stdout,
        stderr,
    }
}

fn run_batch(list: &Path, common: &Common) -> Outcome {
    let scenarios: Vec<Vec<String>> = match fs::read_to_string(list)
        .map_err(Error::from)
        .and_then(|t| serde_json::from_str(&t).map_err(Error::from))
    {
        Ok(s) => s,
        Err(e) => {
            return finish(
                EXIT_INPUT,
                None,
                format!("error: {}: {e}", list.display()),
                None,
            )
        }
    };
    let outcomes: Vec<(Vec<String>, i32, Option<Value>, String)> = std::thread::scope(|scope| {
        let handles: Vec<_> = scenarios
            .iter()
            .map(|args| {
                scope.spawn(move || {
                    let argv =
                        std::iter::once("holotransport".to_string()).chain(args.iter().cloned());
                    let (code, value, summary) = match Cli::try_parse_from(argv) {
                        Ok(Cli {
                            command: Some(cmd),
                            common: c,
                        }) if c.batch.is_none() => run_command(&cmd, &c),
                        Ok(_) => (
                            EXIT_INPUT,
                            None,
                            "error: a batch entry needs a subcommand and no --batch".into(),
                        ),
                        Err(e) => (EXIT_INPUT, None, format!("error: {e}")),
                    };
                    (args.clone(), code, value, summary)
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("scenario thread"))
            .collect()
    });
    let code = outcomes.iter().map(|o| o.1).max().unwrap_or(EXIT_PASS);
    let summary = outcomes
        .iter()
        .map(|(args, code, _, s)| format!("[{code}] {}: {s}", args.join(" ")))
        .collect::<Vec<_>>()
        .join("\n");
    let value = Value::Array(
        outcomes
            .into_iter()
            .map(|(args, code, report, summary)| {
                serde_json::json!({ "args": args, "exit_code": code, "report": report, "summary": summary })
            })
            .collect(),
    );
    finish(code, Some(value), summary, common.out.as_deref())
}

/// Parse `args` (including the program name) and run.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                EXIT_INPUT
            } else {
                EXIT_PASS
            };
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome {
                    code,
                    stdout: String::new(),
                    stderr: text,
                }
            } else {
                Outcome {
                    code,
                    stdout: text,
                    stderr: String::new(),
                }
            };
        }
    };
    match (&cli.command, &cli.common.batch) {
        (_, Some(list)) => run_batch(list, &cli.common),
        (Some(cmd), None) => {
            let (code, value, summary) = run_command(cmd, &cli.common);
            finish(code, value, summary, cli.common.out.as_deref())
        }
        (None, None) => finish(
            EXIT_INPUT,
            None,
            "error: no subcommand given (try --help)".into(),
            None,
        ),
    }
}
