//! Numerical witnesses about the perimeter configuration space of the
//! five-normal family, and the closure residual of the area space.

use nalgebra::{DMatrix, Matrix3};
use serde::Serialize;
use thiserror::Error;

use crate::family5::{basis_vectors, classify, FamilyClassification, PerimeterVector, Verdict, EPS_CLASS};
use crate::geometry::{UnitVector, Vec3};

/// Relative singular-value threshold for every rank decision here.
pub const RANK_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnalysisError {
    #[error("probe direction has norm {0:e}")]
    DegenerateDirection(f64),
    #[error("invalid probe: {0}")]
    InvalidProbe(String),
    #[error("vectors are linearly dependent")]
    Dependent,
    #[error("normals and areas differ in length ({0} vs {1})")]
    LengthMismatch(usize, usize),
}

fn as_matrix(vectors: &[PerimeterVector]) -> DMatrix<f64> {
    // padded with zero columns so the SVD always yields a full right basis
    let cols = vectors.len().max(5);
    DMatrix::from_fn(cols, vectors.len(), |r, c| if r < 5 { vectors[c][r] } else { 0.0 }).transpose()
}

fn singular_values(vectors: &[PerimeterVector]) -> Vec<f64> {
    if vectors.is_empty() {
        return Vec::new();
    }
    as_matrix(vectors).singular_values().iter().copied().collect()
}

/// Number of singular values above [`RANK_TOL`] times the largest.
pub fn numerical_rank(vectors: &[PerimeterVector]) -> usize {
    let sv = singular_values(vectors);
    let top = sv.iter().copied().fold(0.0_f64, f64::max);
    if top == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > RANK_TOL * top).count()
}

/// Linearly independent spanning set of a subspace of R^5.
#[derive(Debug, Clone, PartialEq)]
pub struct SubspaceBasis {
    vectors: Vec<PerimeterVector>,
}

impl SubspaceBasis {
    pub fn new(vectors: Vec<PerimeterVector>) -> Result<Self, AnalysisError> {
        if numerical_rank(&vectors) != vectors.len() {
            return Err(AnalysisError::Dependent);
        }
        Ok(Self { vectors })
    }

    pub fn vectors(&self) -> &[PerimeterVector] {
        &self.vectors
    }

    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    /// `span{vI, vII}`.
    pub fn lambda_i() -> Self {
        let b = basis_vectors();
        Self { vectors: vec![b.v_i, b.v_ii] }
    }

    /// `span{vII}`.
    pub fn lambda_ii() -> Self {
        Self { vectors: vec![basis_vectors().v_ii] }
    }

    /// `span{vIII, vII}`.
    pub fn lambda_iii() -> Self {
        let b = basis_vectors();
        Self { vectors: vec![b.v_iii, b.v_ii] }
    }
}

/// Orthonormal basis of `span(a) ∩ span(b)`.
///
/// Solves `A c = B d` through the null space of `[A | -B]`; the images `A c`
/// of a null-space basis span the intersection.
pub fn subspace_intersection(a: &SubspaceBasis, b: &SubspaceBasis) -> SubspaceBasis {
    let (ka, kb) = (a.dim(), b.dim());
    if ka == 0 || kb == 0 {
        return SubspaceBasis { vectors: Vec::new() };
    }
    let n = ka + kb;
    let rows = n.max(5);
    let stacked = DMatrix::from_fn(rows, n, |r, c| {
        if r >= 5 {
            0.0
        } else if c < ka {
            a.vectors[c][r]
        } else {
            -b.vectors[c - ka][r]
        }
    });
    let svd = stacked.svd(false, true);
    let v_t = svd.v_t.expect("requested right singular vectors");
    let top = svd.singular_values.iter().copied().fold(0.0_f64, f64::max);

    let mut found: Vec<[f64; 5]> = Vec::new();
    for (i, s) in svd.singular_values.iter().enumerate() {
        if *s > RANK_TOL * top {
            continue;
        }
        let coeff = v_t.row(i);
        let image: [f64; 5] = std::array::from_fn(|r| (0..ka).map(|c| coeff[c] * a.vectors[c][r]).sum());
        found.push(image);
    }

    // Gram-Schmidt for an orthonormal result
    let mut out: Vec<PerimeterVector> = Vec::new();
    for v in found {
        let mut w = PerimeterVector(v);
        for q in &out {
            w = w - w.dot(q) * *q;
        }
        let len = w.norm();
        if len > RANK_TOL {
            out.push((1.0 / len) * w);
        }
    }
    SubspaceBasis { vectors: out }
}

/// Determinant of the 3x3 submatrix of the rows `(vI; vII; vIII)` taken at
/// the given column indices (0-based).
pub fn minor(cols: [usize; 3]) -> f64 {
    let b = basis_vectors();
    let rows = [b.v_i, b.v_ii, b.v_iii];
    Matrix3::from_fn(|r, c| rows[r][cols[c]]).determinant()
}

/// Minor on the first, third and fifth columns; non-zero, which makes
/// `vI, vII, vIII` independent.
pub fn minor_check() -> f64 {
    minor([0, 2, 4])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Negative,
    Positive,
}

/// Maximal run of consecutive samples on one side of `t = 0` sharing a
/// membership status; `t_near` is the end closest to 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BranchInterval {
    pub side: Side,
    pub t_near: f64,
    pub t_far: f64,
    pub member: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProbeSample {
    pub t: f64,
    pub verdict: FamilyClassification,
}

/// Membership of `center + t direction` sampled on both sides of `t = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbeReport {
    pub center: PerimeterVector,
    pub direction: PerimeterVector,
    pub samples: Vec<ProbeSample>,
    /// Number of sides of `t = 0` whose innermost sample is a member.
    pub half_branch_count: usize,
    pub branch_intervals: Vec<BranchInterval>,
}

/// [`probe_line_with_tol`] at the default membership band.
pub fn probe_line(
    center: &PerimeterVector,
    direction: &PerimeterVector,
    radius: f64,
    steps: usize,
) -> Result<ProbeReport, AnalysisError> {
    probe_line_with_tol(center, direction, radius, steps, EPS_CLASS)
}

/// Classifies `center + t direction` at `t = k radius / steps` for
/// `k = ±1 .. ±steps`.
pub fn probe_line_with_tol(
    center: &PerimeterVector,
    direction: &PerimeterVector,
    radius: f64,
    steps: usize,
    tol: f64,
) -> Result<ProbeReport, AnalysisError> {
    if !(radius.is_finite() && radius > 0.0) {
        return Err(AnalysisError::InvalidProbe(format!("radius must be positive, got {radius}")));
    }
    if steps < 8 {
        return Err(AnalysisError::InvalidProbe(format!("steps must be at least 8, got {steps}")));
    }
    let len = direction.norm();
    if len.is_nan() || len < 1e-12 {
        return Err(AnalysisError::DegenerateDirection(len));
    }
    let dt = radius / steps as f64;
    let sample = |k: i64| {
        let t = k as f64 * dt;
        ProbeSample { t, verdict: classify(&(*center + t * *direction), tol) }
    };
    let n = steps as i64;
    let samples: Vec<ProbeSample> = (-n..=-1).chain(1..=n).map(sample).collect();

    let (neg, pos) = samples.split_at(steps);
    let mut branch_intervals = Vec::new();
    let mut half_branch_count = 0;
    for (side, outward) in
        [(Side::Negative, neg.iter().rev().collect::<Vec<_>>()), (Side::Positive, pos.iter().collect::<Vec<_>>())]
    {
        if outward[0].verdict.verdict.is_member() {
            half_branch_count += 1;
        }
        let mut start = 0;
        for i in 1..=outward.len() {
            let boundary = i == outward.len()
                || outward[i].verdict.verdict.is_member() != outward[start].verdict.verdict.is_member();
            if boundary {
                branch_intervals.push(BranchInterval {
                    side,
                    t_near: outward[start].t,
                    t_far: outward[i - 1].t,
                    member: outward[start].verdict.verdict.is_member(),
                });
                start = i;
            }
        }
    }

    Ok(ProbeReport { center: *center, direction: *direction, samples, half_branch_count, branch_intervals })
}

/// Two members and their midpoint, which is not a member.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvexityWitness {
    pub p1: PerimeterVector,
    pub p2: PerimeterVector,
    pub mid: PerimeterVector,
    pub verdicts: [FamilyClassification; 3],
}

impl ConvexityWitness {
    /// True when the verdicts are Type I, Type III and not-a-member.
    pub fn holds(&self) -> bool {
        self.verdicts.map(|v| v.verdict) == [Verdict::TypeI, Verdict::TypeIII, Verdict::NotMember]
    }
}

pub const WITNESS_OFFSET: f64 = 0.1;

/// `p1 = vII + 0.1 vI`, `p2 = vII + 0.1 vIII` and their midpoint.
pub fn convexity_witness() -> ConvexityWitness {
    let b = basis_vectors();
    let p1 = b.v_ii + WITNESS_OFFSET * b.v_i;
    let p2 = b.v_ii + WITNESS_OFFSET * b.v_iii;
    let mid = 0.5 * (p1 + p2);
    let verdicts = [p1, p2, mid].map(|p| classify(&p, EPS_CLASS));
    ConvexityWitness { p1, p2, mid, verdicts }
}

/// `|Σ F_k n_k|²`, the quadratic whose zero set contains every tuple of face
/// areas of a polytope with these normals.
pub fn area_closure_residual(normals: &[UnitVector], areas: &[f64]) -> Result<f64, AnalysisError> {
    if normals.len() != areas.len() {
        return Err(AnalysisError::LengthMismatch(normals.len(), areas.len()));
    }
    let sum: Vec3 = normals.iter().zip(areas).map(|(n, f)| **n * *f).sum();
    Ok(sum.norm_squared())
}
