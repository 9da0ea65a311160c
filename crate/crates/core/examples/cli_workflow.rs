//! End-to-end use of the command line through `cli::run`, with every input
//! written as a JSON file. Same as invoking the `holotransport` binary.
//!
//! ```text
//! holotransport tight --gate g.json --dim 4 --protocol p.json --hamiltonian-out h.json
//! holotransport verify --hamiltonian h.json --frame v0.json --gate g.json
//! holotransport check --hamiltonian h.json --frame v0.json --plot trace.csv
//! ```

use std::error::Error;
use std::f64::consts::PI;

use holotransport::cli::{run, EXIT_PASS};
use holotransport::formats::{load, save};
use holotransport::frames::NFrame;
use holotransport::matrixcore::Tolerance;
use holotransport::metrics::GateSpec;
use holotransport::protocols::TightProtocol;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let dir = tempfile::tempdir()?;
    let file = |name: &str| dir.path().join(name).to_string_lossy().into_owned();

    save(
        dir.path().join("g.json").as_path(),
        &GateSpec::from_phases(&[PI / 2.0, PI])?,
    )?;
    save(
        dir.path().join("v0.json").as_path(),
        &NFrame::standard(4, 2)?,
    )?;

    let steps: Vec<Vec<String>> = vec![
        vec!["bound".into(), "--gate".into(), file("g.json")],
        vec![
            "tight".into(),
            "--gate".into(),
            file("g.json"),
            "--dim".into(),
            "4".into(),
            "--protocol".into(),
            file("p.json"),
            "--hamiltonian-out".into(),
            file("h.json"),
        ],
        vec![
            "verify".into(),
            "--hamiltonian".into(),
            file("h.json"),
            "--frame".into(),
            file("v0.json"),
            "--gate".into(),
            file("g.json"),
        ],
        vec![
            "check".into(),
            "--hamiltonian".into(),
            file("h.json"),
            "--frame".into(),
            file("v0.json"),
            "--plot".into(),
            file("trace.csv"),
        ],
    ];
    for args in steps {
        let out = run(std::iter::once("holotransport".to_string()).chain(args.clone()));
        println!("$ holotransport {}", args[0]);
        println!("  exit {} | {}", out.code, out.stderr.trim());
        assert_eq!(out.code, EXIT_PASS, "{}", out.stderr);
    }

    let protocol: TightProtocol = load(dir.path().join("p.json").as_path(), &Tolerance::default())?;
    println!(
        "reloaded protocol: {} blocks, tau {}",
        protocol.blocks().len(),
        protocol.tau()
    );
    let csv = std::fs::read_to_string(dir.path().join("trace.csv"))?;
    println!("trace.csv header: {}", csv.lines().next().unwrap_or(""));
    Ok(())
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run_example() {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
