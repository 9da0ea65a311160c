//! JSON file formats.
//!
//! A complex number is written as `[re, im]` and a matrix as an array of row
//! arrays. Floats are emitted in shortest round-trip form, so matrices survive
//! a write/read cycle bit for bit.

use std::fs;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::dynamics::{HamiltonianKind, HamiltonianPath, RotatingFrame, RotatingFrameKind};
use crate::error::{Error, Result};
use crate::frames::{NFrame, Projector, ProjectorPath};
use crate::matrixcore::{c, max_abs, CMat, CVec, Tolerance};
use crate::metrics::GateSpec;
use crate::protocols::{TightBlock, TightProtocol};
use crate::transport::ShiftFunction;

pub type WireComplex = [f64; 2];
pub type WireVector = Vec<WireComplex>;
pub type WireMatrix = Vec<Vec<WireComplex>>;

pub fn matrix_to_wire(m: &CMat) -> WireMatrix {
    (0..m.nrows())
        .map(|i| {
            (0..m.ncols())
                .map(|j| [m[(i, j)].re, m[(i, j)].im])
                .collect()
        })
        .collect()
}

pub fn matrix_from_wire(w: &WireMatrix) -> Result<CMat> {
    let rows = w.len();
    let cols = w.first().map_or(0, Vec::len);
    if rows == 0 || cols == 0 {
        return Err(Error::Parse("matrix must be nonempty".into()));
    }
    if w.iter().any(|r| r.len() != cols) {
        return Err(Error::Parse("matrix rows have different lengths".into()));
    }
    Ok(CMat::from_fn(rows, cols, |i, j| c(w[i][j][0], w[i][j][1])))
}

pub fn vector_to_wire(v: &CVec) -> WireVector {
    v.iter().map(|z| [z.re, z.im]).collect()
}

pub fn vector_from_wire(w: &WireVector) -> Result<CVec> {
    if w.is_empty() {
        return Err(Error::Parse("vector must be nonempty".into()));
    }
    Ok(CVec::from_iterator(
        w.len(),
        w.iter().map(|z| c(z[0], z[1])),
    ))
}

fn expect_dim(what: &str, declared: usize, actual: usize) -> Result<()> {
    if declared != actual {
        return Err(Error::Parse(format!(
            "{what}: declared {declared}, found {actual}"
        )));
    }
    Ok(())
}

/// A value with a JSON file representation.
pub trait WireFormat: Sized {
    type Wire: Serialize + DeserializeOwned;

    fn to_wire(&self) -> Self::Wire;

    fn from_wire(wire: Self::Wire, tol: &Tolerance) -> Result<Self>;
}

pub fn to_json<T: WireFormat>(value: &T) -> String {
    serde_json::to_string_pretty(&value.to_wire()).expect("wire types serialize")
}

pub fn from_json<T: WireFormat>(text: &str, tol: &Tolerance) -> Result<T> {
    T::from_wire(serde_json::from_str(text)?, tol)
}

pub fn load<T: WireFormat>(path: &Path, tol: &Tolerance) -> Result<T> {
    let text =
        fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    from_json(&text, tol).map_err(|e| match e {
        Error::Parse(m) => Error::Parse(format!("{}: {m}", path.display())),
        other => other,
    })
}

pub fn save<T: WireFormat>(path: &Path, value: &T) -> Result<()> {
    fs::write(path, to_json(value) + "\n")
        .map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FrameFile {
    pub dim: usize,
    pub n: usize,
    /// The `n` frame vectors, each of length `dim`.
    pub columns: Vec<WireVector>,
}

impl WireFormat for NFrame {
    type Wire = FrameFile;

    fn to_wire(&self) -> FrameFile {
        FrameFile {
            dim: self.dim(),
            n: self.n(),
            columns: (0..self.n())
                .map(|k| vector_to_wire(&self.column(k)))
                .collect(),
        }
    }

    fn from_wire(w: FrameFile, tol: &Tolerance) -> Result<NFrame> {
        expect_dim("frame columns", w.n, w.columns.len())?;
        let cols = w
            .columns
            .iter()
            .map(vector_from_wire)
            .collect::<Result<Vec<_>>>()?;
        for col in &cols {
            expect_dim("frame column length", w.dim, col.len())?;
        }
        NFrame::with_tolerance(CMat::from_columns(&cols), tol)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProjectorPathFile {
    pub dim: usize,
    pub rank: usize,
    pub tau: f64,
    pub samples: Vec<WireMatrix>,
}

impl WireFormat for ProjectorPath {
    type Wire = ProjectorPathFile;

    fn to_wire(&self) -> ProjectorPathFile {
        ProjectorPathFile {
            dim: self.dim(),
            rank: self.rank(),
            tau: self.tau(),
            samples: self
                .samples()
                .iter()
                .map(|p| matrix_to_wire(p.matrix()))
                .collect(),
        }
    }

    fn from_wire(w: ProjectorPathFile, tol: &Tolerance) -> Result<ProjectorPath> {
        let samples = w
            .samples
            .iter()
            .map(|m| {
                let p = Projector::with_tolerance(matrix_from_wire(m)?, tol)?;
                expect_dim("projector dimension", w.dim, p.dim())?;
                expect_dim("projector rank", w.rank, p.rank())?;
                Ok(p)
            })
            .collect::<Result<Vec<_>>>()?;
        ProjectorPath::new(w.tau, samples)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HamiltonianFile {
    pub dim: usize,
    pub tau: f64,
    pub kind: String,
    #[serde(rename = "H", default, skip_serializing_if = "Option::is_none")]
    pub h: Option<WireMatrix>,
    #[serde(rename = "H0", default, skip_serializing_if = "Option::is_none")]
    pub h0: Option<WireMatrix>,
    #[serde(rename = "B", default, skip_serializing_if = "Option::is_none")]
    pub b: Option<WireMatrix>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<Vec<WireMatrix>>,
    /// Optional scalar offset `eps_t` on its own uniform grid.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<Vec<f64>>,
}

fn required<T>(field: Option<T>, name: &str, kind: &str) -> Result<T> {
    field.ok_or_else(|| Error::Parse(format!("kind \"{kind}\" requires field \"{name}\"")))
}

fn hermitian_within(m: CMat, tol: &Tolerance) -> Result<CMat> {
    crate::matrixcore::ensure_hermitian(&m, tol.structural, "Hamiltonian")?;
    Ok(crate::matrixcore::hermitian_part(&m))
}

impl WireFormat for HamiltonianPath {
    type Wire = HamiltonianFile;

    fn to_wire(&self) -> HamiltonianFile {
        let mut w = HamiltonianFile {
            dim: self.dim(),
            tau: self.tau(),
            kind: String::new(),
            h: None,
            h0: None,
            b: None,
            samples: None,
            epsilon: self.offset().map(<[f64]>::to_vec),
        };
        match self.kind() {
            HamiltonianKind::Constant(h) => {
                w.kind = "constant".into();
                w.h = Some(matrix_to_wire(h));
            }
            HamiltonianKind::RotatedConstant { h0, b } => {
                w.kind = "rotated_constant".into();
                w.h0 = Some(matrix_to_wire(h0));
                w.b = Some(matrix_to_wire(b));
            }
            HamiltonianKind::Sampled(s) => {
                w.kind = "sampled".into();
                w.samples = Some(s.iter().map(matrix_to_wire).collect());
            }
        }
        w
    }

    fn from_wire(w: HamiltonianFile, tol: &Tolerance) -> Result<HamiltonianPath> {
        let load = |m: &WireMatrix| -> Result<CMat> {
            let m = hermitian_within(matrix_from_wire(m)?, tol)?;
            expect_dim("Hamiltonian dimension", w.dim, m.nrows())?;
            Ok(m)
        };
        let path = match w.kind.as_str() {
            "constant" => {
                HamiltonianPath::constant(load(&required(w.h.clone(), "H", &w.kind)?)?, w.tau)?
            }
            "rotated_constant" => HamiltonianPath::rotated_constant(
                load(&required(w.h0.clone(), "H0", &w.kind)?)?,
                load(&required(w.b.clone(), "B", &w.kind)?)?,
                w.tau,
            )?,
            "sampled" => {
                let samples = required(w.samples.clone(), "samples", &w.kind)?
                    .iter()
                    .map(load)
                    .collect::<Result<Vec<_>>>()?;
                HamiltonianPath::sampled(samples, w.tau)?
            }
            other => {
                return Err(Error::Parse(format!(
                    "unknown Hamiltonian kind \"{other}\""
                )))
            }
        };
        match &w.epsilon {
            Some(eps) => path.with_offset(eps),
            None => Ok(path),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RotatingFrameFile {
    pub dim: usize,
    pub tau: f64,
    /// `"generator"` for `R_t = e^{itB}`, `"sampled"` for explicit samples.
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generator: Option<WireMatrix>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<Vec<WireMatrix>>,
}

impl WireFormat for RotatingFrame {
    type Wire = RotatingFrameFile;

    fn to_wire(&self) -> RotatingFrameFile {
        let (kind, generator, samples) = match self.kind() {
            RotatingFrameKind::ConstantGenerator(b) => ("generator", Some(matrix_to_wire(b)), None),
            RotatingFrameKind::Sampled(s) => (
                "sampled",
                None,
                Some(s.iter().map(matrix_to_wire).collect()),
            ),
        };
        RotatingFrameFile {
            dim: self.dim(),
            tau: self.tau(),
            kind: kind.into(),
            generator,
            samples,
        }
    }

    fn from_wire(w: RotatingFrameFile, tol: &Tolerance) -> Result<RotatingFrame> {
        let frame = match w.kind.as_str() {
            "generator" => {
                let b = hermitian_within(
                    matrix_from_wire(&required(w.generator, "generator", "generator")?)?,
                    tol,
                )?;
                RotatingFrame::constant_generator(b, w.tau)?
            }
            "sampled" => {
                let samples = required(w.samples, "samples", "sampled")?
                    .iter()
                    .map(matrix_from_wire)
                    .collect::<Result<Vec<_>>>()?;
                RotatingFrame::sampled(samples, w.tau)?
            }
            other => {
                return Err(Error::Parse(format!(
                    "unknown rotating-frame kind \"{other}\""
                )))
            }
        };
        expect_dim("rotating-frame dimension", w.dim, frame.dim())?;
        Ok(frame)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GateFile {
    pub n: usize,
    pub matrix: WireMatrix,
}

impl WireFormat for GateSpec {
    type Wire = GateFile;

    fn to_wire(&self) -> GateFile {
        GateFile {
            n: self.n(),
            matrix: matrix_to_wire(self.matrix()),
        }
    }

    fn from_wire(w: GateFile, tol: &Tolerance) -> Result<GateSpec> {
        let m = matrix_from_wire(&w.matrix)?;
        expect_dim("gate size", w.n, m.nrows())?;
        GateSpec::with_tolerance(m, tol.structural)
    }
}

impl WireFormat for ShiftFunction {
    type Wire = ShiftFunction;

    fn to_wire(&self) -> ShiftFunction {
        self.clone()
    }

    fn from_wire(w: ShiftFunction, _tol: &Tolerance) -> Result<ShiftFunction> {
        ShiftFunction::new(w.tau, w.values)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BlockFile {
    pub theta: f64,
    pub v: WireVector,
    pub w: WireVector,
    #[serde(rename = "B")]
    pub b: WireMatrix,
    #[serde(rename = "H_rf")]
    pub h_rf: WireMatrix,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProtocolFile {
    pub dim: usize,
    pub tau: f64,
    pub epsilon: f64,
    pub frame: FrameFile,
    pub blocks: Vec<BlockFile>,
}

impl WireFormat for TightProtocol {
    type Wire = ProtocolFile;

    fn to_wire(&self) -> ProtocolFile {
        ProtocolFile {
            dim: self.dim(),
            tau: self.tau(),
            epsilon: self.epsilon(),
            frame: self.frame().to_wire(),
            blocks: self
                .blocks()
                .iter()
                .map(|b| BlockFile {
                    theta: b.theta,
                    v: vector_to_wire(&b.code),
                    w: vector_to_wire(&b.ancilla),
                    b: matrix_to_wire(&b.rabi),
                    h_rf: matrix_to_wire(&b.h_rf),
                })
                .collect(),
        }
    }

    /// Blocks are rebuilt from `theta`, `v` and `w`; the stored `B` and
    /// `H_rf` must agree with the rebuilt operators.
    fn from_wire(w: ProtocolFile, tol: &Tolerance) -> Result<TightProtocol> {
        let frame = NFrame::from_wire(w.frame.clone(), tol)?;
        expect_dim("protocol dimension", w.dim, frame.dim())?;
        let blocks = w
            .blocks
            .iter()
            .map(|b| {
                Ok(TightBlock {
                    theta: b.theta,
                    code: vector_from_wire(&b.v)?,
                    ancilla: vector_from_wire(&b.w)?,
                    alpha: 0.0,
                    rabi: matrix_from_wire(&b.b)?,
                    h_rf: matrix_from_wire(&b.h_rf)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let protocol = TightProtocol::from_blocks(frame, w.tau, w.epsilon, blocks.clone())?;
        for (stored, rebuilt) in blocks.iter().zip(protocol.blocks()) {
            let scale = (std::f64::consts::PI / w.tau).max(1.0);
            let defect = max_abs(&(&stored.rabi - &rebuilt.rabi))
                .max(max_abs(&(&stored.h_rf - &rebuilt.h_rf)));
            if defect > tol.structural * 100.0 * scale {
                return Err(Error::Parse(format!(
                    "stored block operators disagree with theta, v, w (deviation {defect:.3e})"
                )));
            }
        }
        Ok(protocol)
    }
}
