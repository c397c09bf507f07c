//! Polytopes whose outward face normals are exactly the five canonical
//! directions.
//!
//! Face 1 (normal `(0,0,-1)`) is always a rectangle `ABCD` with `|AB| = 2x`
//! (parallel to `e2`) and `|BC| = 2y` (parallel to `e1`); the four roof
//! planes meet it at dihedral angle π/4. The shape is a roof with ridge
//! parallel to `BC` when `x < y` (Type I), a square-based pyramid when
//! `x = y` (Type II) and a roof with ridge parallel to `AB` when `x > y`
//! (Type III).
//!
//! Perimeter vectors of Type I fill an open angle in the plane spanned by
//! `vI` and `vII`, those of Type III an open angle in the plane spanned by
//! `vIII` and `vII`; Type II is the ray through `vII` where both angles meet.

use std::fmt;
use std::ops::{Add, Index, Mul, Sub};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{intersect_halfspaces, GeometryError, HalfSpace, Polytope, UnitVector, Vec3};

/// Relative band for the equality constraints of the membership test.
pub const EPS_CLASS: f64 = 1e-9;

const SQRT_3: f64 = 1.732_050_807_568_877_2;
/// `3 + 2√3`, the slope bounding the Type I and Type III angles.
pub const RAY_SLOPE: f64 = 3.0 + 2.0 * SQRT_3;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FamilyError {
    #[error("invalid family parameters: {0}")]
    InvalidParams(String),
    #[error("perimeter vector is not realized by any polytope of the family")]
    NotInFamily,
    #[error("vector is not in the requested plane (relative residual {0:e})")]
    NotInPlane(f64),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

/// The five normals, in order `n1 .. n5`.
pub fn canonical_normals() -> [UnitVector; 5] {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    [
        Vec3::new(0.0, 0.0, -1.0),
        Vec3::new(s, 0.0, s),
        Vec3::new(-s, 0.0, s),
        Vec3::new(0.0, s, s),
        Vec3::new(0.0, -s, s),
    ]
    .map(|v| UnitVector::new(v).expect("canonical normals have unit length"))
}

/// A point `(L1, .., L5)` of R^5.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PerimeterVector(pub [f64; 5]);

impl PerimeterVector {
    pub const fn new(components: [f64; 5]) -> Self {
        Self(components)
    }

    pub fn dot(&self, other: &Self) -> f64 {
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0_f64, |m, c| m.max(c.abs()))
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|c| c.is_finite())
    }

    /// Swaps the roles of the face pairs (2,3) and (4,5), i.e. the effect of
    /// a quarter turn about `e3` on the perimeter vector.
    pub fn swap_pairs(&self) -> Self {
        let [l1, l2, l3, l4, l5] = self.0;
        Self([l1, l4, l5, l2, l3])
    }
}

impl Index<usize> for PerimeterVector {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl Add for PerimeterVector {
    type Output = Self;

    fn add(self, rhs: Self) -> Self {
        Self(std::array::from_fn(|i| self.0[i] + rhs.0[i]))
    }
}

impl Sub for PerimeterVector {
    type Output = Self;

    fn sub(self, rhs: Self) -> Self {
        Self(std::array::from_fn(|i| self.0[i] - rhs.0[i]))
    }
}

impl Mul<PerimeterVector> for f64 {
    type Output = PerimeterVector;

    fn mul(self, rhs: PerimeterVector) -> PerimeterVector {
        PerimeterVector(rhs.0.map(|c| self * c))
    }
}

/// Half-lengths of the base rectangle plus a placement anchor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FamilyParams {
    /// Half of `|AB|` (the base edge parallel to `e2`).
    pub x: f64,
    /// Half of `|BC|` (the base edge parallel to `e1`).
    pub y: f64,
    /// Centre of the base rectangle.
    pub base_center: Vec3,
}

impl FamilyParams {
    pub fn new(x: f64, y: f64) -> Result<Self, FamilyError> {
        let p = Self { x, y, base_center: Vec3::zeros() };
        p.validate()?;
        Ok(p)
    }

    pub fn with_center(mut self, center: Vec3) -> Self {
        self.base_center = center;
        self
    }

    pub fn validate(&self) -> Result<(), FamilyError> {
        if !(self.x.is_finite() && self.x > 0.0) {
            return Err(FamilyError::InvalidParams(format!("x > 0 required, got {}", self.x)));
        }
        if !(self.y.is_finite() && self.y > 0.0) {
            return Err(FamilyError::InvalidParams(format!("y > 0 required, got {}", self.y)));
        }
        if !self.base_center.iter().all(|c| c.is_finite()) {
            return Err(FamilyError::InvalidParams("base centre must be finite".into()));
        }
        Ok(())
    }

    /// Support numbers of the five planes: the base plane through the centre
    /// and each roof plane through its base edge.
    pub fn support_numbers(&self) -> [f64; 5] {
        let c = self.base_center;
        let s = std::f64::consts::FRAC_1_SQRT_2;
        [
            -c.z,
            s * (c.x + self.y + c.z),
            s * (-(c.x - self.y) + c.z),
            s * (c.y + self.x + c.z),
            s * (-(c.y - self.x) + c.z),
        ]
    }

    pub fn halfspaces(&self) -> Vec<HalfSpace> {
        canonical_normals().into_iter().zip(self.support_numbers()).map(|(n, h)| HalfSpace::new(n, h)).collect()
    }
}

/// Builds the polytope with base rectangle `2y x 2x` in the plane
/// `z = base_center.z`.
pub fn build_polytope(p: &FamilyParams) -> Result<Polytope, FamilyError> {
    p.validate()?;
    let poly = intersect_halfspaces(&p.halfspaces())?;
    debug_assert_eq!(poly.faces().len(), 5);
    Ok(poly)
}

/// Closed-form face perimeters.
///
/// For `x <= y`: `L1 = 4x + 4y`, `L2 = L3 = 2(1+√3)x`,
/// `L4 = L5 = 2(√3-1)x + 4y`. For `x > y` the polytope is a quarter turn of
/// the one with `(y, x)`, so the formula is applied to the swapped
/// parameters and the face pairs are swapped back.
pub fn perimeters_from_xy(p: &FamilyParams) -> Result<PerimeterVector, FamilyError> {
    p.validate()?;
    let roof = |x: f64, y: f64| {
        let tri = 2.0 * (1.0 + SQRT_3) * x;
        let trap = 2.0 * (SQRT_3 - 1.0) * x + 4.0 * y;
        PerimeterVector([4.0 * x + 4.0 * y, tri, tri, trap, trap])
    };
    if p.x <= p.y {
        Ok(roof(p.x, p.y))
    } else {
        Ok(roof(p.y, p.x).swap_pairs())
    }
}

/// Recovers `(x, y)` from a member perimeter vector (base centred at the
/// origin).
pub fn xy_from_perimeters(l: &PerimeterVector) -> Result<FamilyParams, FamilyError> {
    xy_from_perimeters_with_tol(l, EPS_CLASS)
}

/// [`xy_from_perimeters`] with the membership band of [`classify`].
pub fn xy_from_perimeters_with_tol(l: &PerimeterVector, tol: f64) -> Result<FamilyParams, FamilyError> {
    let inverse = |l2: f64, l4: f64| ((SQRT_3 - 1.0) * l2 / 4.0, (SQRT_3 - 2.0) * l2 / 4.0 + l4 / 4.0);
    let (x, y) = match classify(l, tol).verdict {
        Verdict::TypeI | Verdict::TypeII => inverse(l[1], l[3]),
        Verdict::TypeIII => {
            let (x, y) = inverse(l[3], l[1]);
            (y, x)
        }
        Verdict::NotMember => return Err(FamilyError::NotInFamily),
    };
    FamilyParams::new(x, y)
}

/// Kernel-measured perimeters, matched to the canonical normals by direction
/// (0 for a normal without a face).
pub fn measure_perimeters(p: &Polytope) -> PerimeterVector {
    PerimeterVector(canonical_normals().map(|n| p.face_with_normal(&n).map_or(0.0, |f| f.perimeter)))
}

/// Kernel-measured face areas, in canonical normal order.
pub fn measure_areas(p: &Polytope) -> [f64; 5] {
    canonical_normals().map(|n| p.face_with_normal(&n).map_or(0.0, |f| f.area))
}

/// The three distinguished perimeter vectors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BasisVectors {
    pub v_i: PerimeterVector,
    pub v_ii: PerimeterVector,
    pub v_iii: PerimeterVector,
}

pub fn basis_vectors() -> BasisVectors {
    let a = RAY_SLOPE;
    BasisVectors {
        v_i: PerimeterVector([2.0, -a, -a, 5.0, 5.0]),
        v_ii: PerimeterVector([2.0 * (SQRT_3 - 1.0), 1.0, 1.0, 1.0, 1.0]),
        v_iii: PerimeterVector([2.0, 5.0, 5.0, -a, -a]),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Verdict {
    TypeI,
    TypeII,
    TypeIII,
    NotMember,
}

impl Verdict {
    pub fn is_member(self) -> bool {
        self != Verdict::NotMember
    }

    pub fn label(self) -> &'static str {
        match self {
            Verdict::TypeI => "Type I",
            Verdict::TypeII => "Type II",
            Verdict::TypeIII => "Type III",
            Verdict::NotMember => "not a member",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Verdict::TypeI => "TypeI",
            Verdict::TypeII => "TypeII",
            Verdict::TypeIII => "TypeIII",
            Verdict::NotMember => "NotMember",
        };
        f.write_str(s)
    }
}

/// Coordinates of a member in its basis pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Coefficients {
    /// `L = alpha vI + beta vII`.
    LambdaI { alpha: f64, beta: f64 },
    /// `L = gamma vII`.
    Ray { gamma: f64 },
    /// `L = delta vIII + epsilon vII`.
    LambdaIII { delta: f64, epsilon: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FamilyClassification {
    pub verdict: Verdict,
    pub coeffs: Option<Coefficients>,
    /// Largest violation of the defining equalities of the reported type
    /// (smallest over the three types for non-members), relative to
    /// `max(max |L_k|, 1)`.
    pub residual: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Plane {
    LambdaI,
    LambdaIII,
}

fn scale_of(l: &PerimeterVector) -> f64 {
    l.max_abs().max(1.0)
}

fn type_i_residual(l: &PerimeterVector) -> f64 {
    let r = [l[0] - ((2.0 * SQRT_3 - 3.0) * l[1] + l[3]), l[1] - l[2], l[3] - l[4]];
    r.iter().fold(0.0_f64, |m, v| m.max(v.abs())) / scale_of(l)
}

fn type_ii_residual(l: &PerimeterVector) -> f64 {
    let r = [l[0] - 2.0 * (SQRT_3 - 1.0) * l[1], l[1] - l[2], l[1] - l[3], l[1] - l[4]];
    r.iter().fold(0.0_f64, |m, v| m.max(v.abs())) / scale_of(l)
}

fn type_iii_residual(l: &PerimeterVector) -> f64 {
    type_i_residual(&l.swap_pairs())
}

/// `L1 = (2√3-3) L2 + L4`, `L2 = L3`, `L4 = L5`, `L4 > L2 > 0`.
pub fn satisfies_type_i(l: &PerimeterVector, tol: f64) -> bool {
    let s = scale_of(l);
    type_i_residual(l) <= tol && (l[3] - l[1]) / s > tol && l[1] / s > tol
}

/// `L1 = 2(√3-1) L2`, `L2 = L3 = L4 = L5 > 0`.
pub fn satisfies_type_ii(l: &PerimeterVector, tol: f64) -> bool {
    type_ii_residual(l) <= tol && l[1] / scale_of(l) > tol
}

/// `L1 = L2 + (2√3-3) L4`, `L2 = L3`, `L4 = L5`, `L2 > L4 > 0`.
pub fn satisfies_type_iii(l: &PerimeterVector, tol: f64) -> bool {
    satisfies_type_i(&l.swap_pairs(), tol)
}

fn project(l: &PerimeterVector, a: &PerimeterVector, b: &PerimeterVector) -> (f64, f64) {
    (l.dot(a) / a.dot(a), l.dot(b) / b.dot(b))
}

/// Decides which type, if any, realizes `l`.
///
/// Type II is tested first, so points within `tol` of the shared ray are
/// attributed to it.
pub fn classify(l: &PerimeterVector, tol: f64) -> FamilyClassification {
    let basis = basis_vectors();
    if !l.is_finite() {
        return FamilyClassification { verdict: Verdict::NotMember, coeffs: None, residual: f64::INFINITY };
    }
    if satisfies_type_ii(l, tol) {
        let gamma = l.dot(&basis.v_ii) / basis.v_ii.dot(&basis.v_ii);
        return FamilyClassification {
            verdict: Verdict::TypeII,
            coeffs: Some(Coefficients::Ray { gamma }),
            residual: type_ii_residual(l),
        };
    }
    if satisfies_type_i(l, tol) {
        let (alpha, beta) = project(l, &basis.v_i, &basis.v_ii);
        return FamilyClassification {
            verdict: Verdict::TypeI,
            coeffs: Some(Coefficients::LambdaI { alpha, beta }),
            residual: type_i_residual(l),
        };
    }
    if satisfies_type_iii(l, tol) {
        let (delta, epsilon) = project(l, &basis.v_iii, &basis.v_ii);
        return FamilyClassification {
            verdict: Verdict::TypeIII,
            coeffs: Some(Coefficients::LambdaIII { delta, epsilon }),
            residual: type_iii_residual(l),
        };
    }
    FamilyClassification {
        verdict: Verdict::NotMember,
        coeffs: None,
        residual: type_i_residual(l).min(type_ii_residual(l)).min(type_iii_residual(l)),
    }
}

/// Coordinates of `l` in the orthogonal pair spanning `plane`.
pub fn decompose(l: &PerimeterVector, plane: Plane) -> Result<(f64, f64), FamilyError> {
    let basis = basis_vectors();
    let first = match plane {
        Plane::LambdaI => basis.v_i,
        Plane::LambdaIII => basis.v_iii,
    };
    let (a, b) = project(l, &first, &basis.v_ii);
    let residual = (*l - (a * first + b * basis.v_ii)).max_abs() / scale_of(l);
    if residual > EPS_CLASS {
        return Err(FamilyError::NotInPlane(residual));
    }
    Ok((a, b))
}
