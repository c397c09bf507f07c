//! File formats: OFF meshes and the JSON documents exchanged with the CLI.
//!
//! All floating-point output uses 17 significant digits in exponent form, so
//! identical inputs produce byte-identical files and every value round-trips.

use std::io;

use serde::{Deserialize, Serialize};
use serde_json::ser::{CompactFormatter, Formatter};

use crate::configspace::ProbeReport;
use crate::family5::{Coefficients, FamilyClassification, PerimeterVector};
use crate::geometry::{GeometryError, Polytope, UnitVector};
use crate::minkowski::{MinkowskiProblem, MinkowskiSolution};

/// `v` with 17 significant digits, e.g. `1.2500000000000000e0`.
pub fn fmt17(v: f64) -> String {
    // no "-0" in output
    let v = if v == 0.0 { 0.0 } else { v };
    format!("{v:.16e}")
}

/// Compact JSON with [`fmt17`] numbers.
struct FixedDigits;

impl Formatter for FixedDigits {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        if value.is_finite() {
            writer.write_all(fmt17(value).as_bytes())
        } else {
            CompactFormatter.write_null(writer)
        }
    }
}

/// Deterministic JSON encoding (struct field order, 17-digit numbers).
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, FixedDigits);
    value.serialize(&mut ser).expect("in-memory JSON serialization");
    String::from_utf8(out).expect("JSON is UTF-8")
}

/// OFF mesh: vertices, then faces as counterclockwise index cycles.
pub fn to_off(p: &Polytope) -> String {
    let mut s = format!("OFF\n{} {} 0\n", p.vertices().len(), p.faces().len());
    for v in p.vertices() {
        s.push_str(&format!("{} {} {}\n", fmt17(v.x), fmt17(v.y), fmt17(v.z)));
    }
    for f in p.faces() {
        s.push_str(&f.vertex_indices.len().to_string());
        for i in &f.vertex_indices {
            s.push_str(&format!(" {i}"));
        }
        s.push('\n');
    }
    s
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FaceReport {
    pub normal: [f64; 3],
    pub vertex_indices: Vec<usize>,
    pub perimeter: f64,
    pub area: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolytopeReport {
    pub vertices: Vec<[f64; 3]>,
    pub faces: Vec<FaceReport>,
    pub volume: f64,
}

impl From<&Polytope> for PolytopeReport {
    fn from(p: &Polytope) -> Self {
        Self {
            vertices: p.vertices().iter().map(|v| [v.x, v.y, v.z]).collect(),
            faces: p
                .faces()
                .iter()
                .map(|f| FaceReport {
                    normal: f.normal.as_array(),
                    vertex_indices: f.vertex_indices.clone(),
                    perimeter: f.perimeter,
                    area: f.area,
                })
                .collect(),
            volume: p.volume(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SampleRecord {
    pub t: f64,
    pub verdict: String,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProbeRecord {
    pub center: PerimeterVector,
    pub direction: PerimeterVector,
    pub samples: Vec<SampleRecord>,
    pub half_branch_count: usize,
}

impl From<&ProbeReport> for ProbeRecord {
    fn from(r: &ProbeReport) -> Self {
        Self {
            center: r.center,
            direction: r.direction,
            samples: r
                .samples
                .iter()
                .map(|s| SampleRecord { t: s.t, verdict: s.verdict.verdict.to_string(), residual: s.verdict.residual })
                .collect(),
            half_branch_count: r.half_branch_count,
        }
    }
}

/// Plot table `t,member,type` for a probe.
pub fn probe_csv(r: &ProbeReport) -> String {
    let mut s = String::from("t,member,type\n");
    for sample in &r.samples {
        let v = sample.verdict.verdict;
        s.push_str(&format!("{},{},{}\n", fmt17(sample.t), u8::from(v.is_member()), v));
    }
    s
}

/// Verdict with its basis coordinates, named after the basis pair.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassificationRecord {
    pub verdict: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    pub residual: f64,
}

impl From<&FamilyClassification> for ClassificationRecord {
    fn from(c: &FamilyClassification) -> Self {
        let mut r = Self {
            verdict: c.verdict.to_string(),
            alpha: None,
            beta: None,
            gamma: None,
            delta: None,
            epsilon: None,
            residual: c.residual,
        };
        match c.coeffs {
            Some(Coefficients::LambdaI { alpha, beta }) => {
                r.alpha = Some(alpha);
                r.beta = Some(beta);
            }
            Some(Coefficients::Ray { gamma }) => r.gamma = Some(gamma),
            Some(Coefficients::LambdaIII { delta, epsilon }) => {
                r.delta = Some(delta);
                r.epsilon = Some(epsilon);
            }
            None => {}
        }
        r
    }
}

/// `{ "normals": [[x,y,z],..], "areas": [F1,..] }`. Unknown fields are
/// ignored, so richer documents carrying these two keys also parse.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProblemFile {
    pub normals: Vec<[f64; 3]>,
    pub areas: Vec<f64>,
}

impl ProblemFile {
    pub fn from_problem(p: &MinkowskiProblem) -> Self {
        Self { normals: p.normals.iter().map(UnitVector::as_array).collect(), areas: p.target_areas.clone() }
    }

    /// Normals are rescaled to unit length.
    pub fn to_problem(&self) -> Result<MinkowskiProblem, GeometryError> {
        let normals =
            self.normals.iter().map(|[x, y, z]| UnitVector::from_xyz(*x, *y, *z)).collect::<Result<Vec<_>, _>>()?;
        Ok(MinkowskiProblem::new(normals, self.areas.clone()))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolutionFile {
    pub normals: Vec<[f64; 3]>,
    pub areas: Vec<f64>,
    pub support: Vec<f64>,
    pub area_residual: f64,
    pub iterations: usize,
    pub polytope: PolytopeReport,
}

impl SolutionFile {
    pub fn new(p: &MinkowskiProblem, s: &MinkowskiSolution) -> Self {
        let ProblemFile { normals, areas } = ProblemFile::from_problem(p);
        Self {
            normals,
            areas,
            support: s.support.clone(),
            area_residual: s.area_residual,
            iterations: s.iterations,
            polytope: PolytopeReport::from(&s.polytope),
        }
    }
}
