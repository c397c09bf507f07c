//! Convex polytopes with prescribed face normals.
//!
//! The crate is organised around one small convex-geometry kernel and three
//! consumers of it:
//!
//! - [`geometry`]: halfspace intersection in R^3, face extraction, perimeter,
//!   area and volume measurement.
//! - [`family5`]: the polytopes whose outward normals are exactly the five
//!   canonical directions `(0,0,-1)`, `(±1,0,1)/√2`, `(0,±1,1)/√2`, their
//!   closed-form perimeter map and the membership test for the space of
//!   realizable perimeter vectors.
//! - [`configspace`]: numerical witnesses about that space (subspace
//!   intersection, line probes, non-convexity) and the area closure residual.
//! - [`minkowski`]: recovery of a polytope from face normals and face areas.
//!
//! [`export`] holds the OFF and JSON writers shared by the CLI and the Python
//! bindings.

pub mod configspace;
pub mod export;
pub mod family5;
pub mod geometry;
pub mod minkowski;

pub use configspace::{
    area_closure_residual, convexity_witness, minor_check, probe_line, subspace_intersection, ConvexityWitness,
    ProbeReport, SubspaceBasis,
};
pub use family5::{
    basis_vectors, build_polytope, canonical_normals, classify, decompose, perimeters_from_xy, xy_from_perimeters,
    xy_from_perimeters_with_tol, BasisVectors, FamilyClassification, FamilyParams, PerimeterVector, Verdict,
};
pub use geometry::{intersect_halfspaces, Face, GeometryError, HalfSpace, Polytope, UnitVector, Vec3};
pub use minkowski::{MinkowskiProblem, MinkowskiSolution};
