use super::kernel::affine_dimension;
use super::{Polytope, UnitVector, Vec3};

/// Volume by fanning tetrahedra from the vertex centroid over each face.
pub fn volume(p: &Polytope) -> f64 {
    let c = p.centroid();
    p.faces()
        .iter()
        .map(|f| {
            let v = &f.vertices;
            let a = v[0] - c;
            (1..v.len() - 1).map(|i| a.dot(&(v[i] - c).cross(&(v[i + 1] - c))) / 6.0).sum::<f64>()
        })
        .sum()
}

/// Dimension (0, 1 or 2) of the set where `<., n>` attains its maximum on `p`.
pub fn support_touch_dimension(p: &Polytope, n: &UnitVector) -> usize {
    let heights: Vec<f64> = p.vertices().iter().map(|v| n.dot(v)).collect();
    let top = heights.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let touching: Vec<Vec3> =
        p.vertices().iter().zip(&heights).filter(|(_, &h)| top - h <= p.tolerance()).map(|(v, _)| *v).collect();
    affine_dimension(&touching, p.tolerance()).min(2)
}

/// Whether `q`, moved so its vertex centroid lands on that of `p`, has the
/// same vertex set as `p` within `tol` (nearest-neighbour match, both ways).
pub fn equal_up_to_translation(p: &Polytope, q: &Polytope, tol: f64) -> bool {
    let shift = p.centroid() - q.centroid();
    let moved: Vec<Vec3> = q.vertices().iter().map(|v| v + shift).collect();
    let covered = |from: &[Vec3], to: &[Vec3]| {
        from.iter().all(|a| to.iter().map(|b| (a - b).norm()).fold(f64::INFINITY, f64::min) <= tol)
    };
    covered(p.vertices(), &moved) && covered(&moved, p.vertices())
}
