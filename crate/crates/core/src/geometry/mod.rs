//! H-polytope kernel for small inputs.
//!
//! Polytopes are built from a list of halfspaces `{ p : <p, n> <= h }` by
//! brute-force vertex enumeration over normal triples. Every geometric
//! predicate uses the tolerance [`EPS_GEOM`] scaled by the largest support
//! number of the input, so the kernel behaves the same on a unit-sized body
//! and on the same body scaled or translated.

mod kernel;
mod metrics;

use std::ops::Deref;

use nalgebra::Vector3;
use thiserror::Error;

pub use kernel::{face_normal_set, intersect_halfspaces};
pub use metrics::{equal_up_to_translation, support_touch_dimension, volume};

/// Point or direction in R^3.
pub type Vec3 = Vector3<f64>;

/// Base geometric tolerance on unit-scale inputs.
pub const EPS_GEOM: f64 = 1e-9;

/// Accepted deviation of a [`UnitVector`] from unit length.
pub const UNIT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("halfspace intersection is empty")]
    Infeasible,
    #[error("halfspace intersection is unbounded")]
    Unbounded,
    #[error("halfspace intersection has affine dimension {0} < 3")]
    Degenerate(usize),
    #[error("non-finite value in geometric input")]
    NonFinite,
    #[error("vector has norm {0}, expected a unit vector")]
    NotUnit(f64),
}

/// A direction of length one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitVector(Vec3);

impl UnitVector {
    /// Accepts `v` only if it already has unit norm within [`UNIT_TOL`].
    pub fn new(v: Vec3) -> Result<Self, GeometryError> {
        if !v.iter().all(|c| c.is_finite()) {
            return Err(GeometryError::NonFinite);
        }
        let norm = v.norm();
        if (norm - 1.0).abs() > UNIT_TOL {
            return Err(GeometryError::NotUnit(norm));
        }
        Ok(Self(v))
    }

    /// Rescales any finite non-zero vector to unit length.
    pub fn normalize(v: Vec3) -> Result<Self, GeometryError> {
        if !v.iter().all(|c| c.is_finite()) {
            return Err(GeometryError::NonFinite);
        }
        let norm = v.norm();
        if norm < 1e-300 {
            return Err(GeometryError::NotUnit(norm));
        }
        Ok(Self(v / norm))
    }

    pub fn from_xyz(x: f64, y: f64, z: f64) -> Result<Self, GeometryError> {
        Self::normalize(Vec3::new(x, y, z))
    }

    pub fn into_inner(self) -> Vec3 {
        self.0
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.0.x, self.0.y, self.0.z]
    }
}

impl Deref for UnitVector {
    type Target = Vec3;

    fn deref(&self) -> &Vec3 {
        &self.0
    }
}

/// Closed halfspace `{ p : <p, normal> <= offset }`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HalfSpace {
    pub normal: UnitVector,
    /// Support number of the bounding plane in direction `normal`.
    pub offset: f64,
}

impl HalfSpace {
    pub fn new(normal: UnitVector, offset: f64) -> Self {
        Self { normal, offset }
    }

    /// Signed amount by which `p` violates the inequality (negative inside).
    pub fn excess(&self, p: &Vec3) -> f64 {
        self.normal.dot(p) - self.offset
    }

    pub fn translated(&self, t: &Vec3) -> Self {
        Self::new(self.normal, self.offset + self.normal.dot(t))
    }
}

/// Planar face of a [`Polytope`].
///
/// `vertices` run counterclockwise when seen from outside, i.e. looking
/// along `-normal`.
#[derive(Debug, Clone, PartialEq)]
pub struct Face {
    /// Index of the generating halfspace in [`Polytope::halfspaces`].
    pub halfspace: usize,
    pub normal: UnitVector,
    pub vertex_indices: Vec<usize>,
    pub vertices: Vec<Vec3>,
    pub perimeter: f64,
    pub area: f64,
}

/// Bounded convex body with non-empty interior.
///
/// Holds the input halfspaces (redundant ones included) and the derived
/// vertex and face lists. Construct with [`intersect_halfspaces`].
#[derive(Debug, Clone, PartialEq)]
pub struct Polytope {
    halfspaces: Vec<HalfSpace>,
    vertices: Vec<Vec3>,
    faces: Vec<Face>,
    tol: f64,
}

impl Polytope {
    pub fn halfspaces(&self) -> &[HalfSpace] {
        &self.halfspaces
    }

    pub fn vertices(&self) -> &[Vec3] {
        &self.vertices
    }

    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    /// Absolute tolerance used when this polytope was built.
    pub fn tolerance(&self) -> f64 {
        self.tol
    }

    /// The 2-face cut out by halfspace `k`, if there is one.
    pub fn face_for_halfspace(&self, k: usize) -> Option<&Face> {
        self.faces.iter().find(|f| f.halfspace == k)
    }

    /// The 2-face whose outward normal is within 1e-9 of `n`.
    pub fn face_with_normal(&self, n: &Vec3) -> Option<&Face> {
        self.faces.iter().find(|f| (f.normal.0 - n).norm() <= 1e-9)
    }

    pub fn edge_count(&self) -> usize {
        self.faces.iter().map(|f| f.vertex_indices.len()).sum::<usize>() / 2
    }

    /// Mean of the vertices.
    pub fn centroid(&self) -> Vec3 {
        let sum: Vec3 = self.vertices.iter().sum();
        sum / self.vertices.len() as f64
    }

    pub fn diameter(&self) -> f64 {
        let mut d: f64 = 0.0;
        for (i, a) in self.vertices.iter().enumerate() {
            for b in &self.vertices[i + 1..] {
                d = d.max((a - b).norm());
            }
        }
        d
    }

    pub fn volume(&self) -> f64 {
        volume(self)
    }

    /// One halfspace per 2-face, offset read off the face plane.
    pub fn supporting_halfspaces(&self) -> Vec<HalfSpace> {
        self.faces.iter().map(|f| HalfSpace::new(f.normal, f.normal.dot(&f.vertices[0]))).collect()
    }

    pub fn translated(&self, t: &Vec3) -> Result<Polytope, GeometryError> {
        let hs: Vec<HalfSpace> = self.halfspaces.iter().map(|h| h.translated(t)).collect();
        intersect_halfspaces(&hs)
    }
}

/// Sum of the edge lengths of the face cycle.
pub fn face_perimeter(f: &Face) -> f64 {
    cycle_perimeter(&f.vertices)
}

/// Area of the face polygon.
pub fn face_area(f: &Face) -> f64 {
    cycle_area(&f.vertices, &f.normal)
}

pub(crate) fn cycle_perimeter(cycle: &[Vec3]) -> f64 {
    let n = cycle.len();
    (0..n).map(|i| (cycle[(i + 1) % n] - cycle[i]).norm()).sum()
}

/// Planar shoelace area of a cycle oriented counterclockwise about `normal`.
pub(crate) fn cycle_area(cycle: &[Vec3], normal: &Vec3) -> f64 {
    let n = cycle.len();
    let origin = cycle[0];
    let twice: Vec3 = (1..n.saturating_sub(1)).map(|i| (cycle[i] - origin).cross(&(cycle[i + 1] - origin))).sum();
    0.5 * twice.dot(normal)
}
