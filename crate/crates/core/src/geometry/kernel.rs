use std::cmp::Ordering;

use nalgebra::Matrix3;

use super::{cycle_area, cycle_perimeter, Face, GeometryError, HalfSpace, Polytope, UnitVector, Vec3, EPS_GEOM};

/// Normal triples with a smaller determinant are treated as parallel.
const MIN_TRIPLE_DET: f64 = 1e-10;
/// Slack for the recession-cone test `<n_k, d> <= 0`.
const RECESSION_TOL: f64 = 1e-12;

/// Intersects the halfspaces and derives vertices and faces.
///
/// Vertices are the feasible solutions of the 3x3 systems formed by every
/// triple of bounding planes, merged when closer than the kernel tolerance.
/// Faces are grouped by halfspace; a halfspace that only touches an edge or
/// a vertex contributes no face.
pub fn intersect_halfspaces(hs: &[HalfSpace]) -> Result<Polytope, GeometryError> {
    if hs.iter().any(|h| !h.offset.is_finite()) {
        return Err(GeometryError::NonFinite);
    }
    if has_recession_direction(hs) {
        return Err(GeometryError::Unbounded);
    }
    let scale = hs.iter().map(|h| h.offset.abs()).fold(0.0_f64, f64::max);
    let tol = EPS_GEOM * scale.max(f64::MIN_POSITIVE);

    let vertices = enumerate_vertices(hs, tol);
    if vertices.is_empty() {
        return Err(GeometryError::Infeasible);
    }
    let dim = affine_dimension(&vertices, tol);
    if dim < 3 {
        return Err(GeometryError::Degenerate(dim));
    }

    let mut faces: Vec<Face> = Vec::new();
    for (k, h) in hs.iter().enumerate() {
        let active: Vec<usize> = (0..vertices.len()).filter(|&i| h.excess(&vertices[i]).abs() <= tol).collect();
        if active.len() < 3 {
            continue;
        }
        let points: Vec<Vec3> = active.iter().map(|&i| vertices[i]).collect();
        if affine_dimension(&points, tol) < 2 {
            continue;
        }
        // duplicated halfspace
        if faces.iter().any(|f| f.vertex_indices.len() == active.len() && (f.normal.0 - h.normal.0).norm() <= 1e-12) {
            continue;
        }
        let order = ccw_order(&points, &h.normal);
        let vertex_indices: Vec<usize> = order.iter().map(|&j| active[j]).collect();
        let cycle: Vec<Vec3> = vertex_indices.iter().map(|&i| vertices[i]).collect();
        faces.push(Face {
            halfspace: k,
            normal: h.normal,
            perimeter: cycle_perimeter(&cycle),
            area: cycle_area(&cycle, &h.normal),
            vertex_indices,
            vertices: cycle,
        });
    }

    Ok(Polytope { halfspaces: hs.to_vec(), vertices, faces, tol })
}

/// Normals of the halfspaces that attain a 2-dimensional face, in input order.
pub fn face_normal_set(p: &Polytope) -> Vec<UnitVector> {
    p.faces().iter().map(|f| f.normal).collect()
}

fn enumerate_vertices(hs: &[HalfSpace], tol: f64) -> Vec<Vec3> {
    let m = hs.len();
    let mut out: Vec<Vec3> = Vec::new();
    for i in 0..m {
        for j in i + 1..m {
            for k in j + 1..m {
                let (a, b, c) = (&hs[i].normal, &hs[j].normal, &hs[k].normal);
                let mat = Matrix3::new(a.x, a.y, a.z, b.x, b.y, b.z, c.x, c.y, c.z);
                if mat.determinant().abs() < MIN_TRIPLE_DET {
                    continue;
                }
                let rhs = Vec3::new(hs[i].offset, hs[j].offset, hs[k].offset);
                let Some(p) = mat.lu().solve(&rhs) else {
                    continue;
                };
                if hs.iter().all(|h| h.excess(&p) <= tol) && !out.iter().any(|v| (v - p).norm() <= tol) {
                    out.push(p);
                }
            }
        }
    }
    out
}

/// True when some `d != 0` has `<n_k, d> <= 0` for every normal.
///
/// If the normals span R^3 the recession cone is pointed, so it is
/// non-trivial exactly when one of its candidate extreme rays `±(n_i x n_j)`
/// lies in it.
fn has_recession_direction(hs: &[HalfSpace]) -> bool {
    let normals: Vec<Vec3> = hs.iter().map(|h| h.normal.0).collect();
    if !spans_space(&normals) {
        return true;
    }
    for (i, a) in normals.iter().enumerate() {
        for b in &normals[i + 1..] {
            let c = a.cross(b);
            let len = c.norm();
            if len < RECESSION_TOL {
                continue;
            }
            let d = c / len;
            for dir in [d, -d] {
                if normals.iter().all(|n| n.dot(&dir) <= RECESSION_TOL) {
                    return true;
                }
            }
        }
    }
    false
}

/// Whether some triple of the directions is linearly independent.
fn spans_space(dirs: &[Vec3]) -> bool {
    dirs.iter().enumerate().any(|(i, a)| {
        dirs.iter().enumerate().skip(i + 1).any(|(j, b)| {
            let c = a.cross(b);
            dirs[j + 1..].iter().any(|d| c.dot(d).abs() > MIN_TRIPLE_DET)
        })
    })
}

/// Affine dimension of a point set: 0 for a point, up to 3 for a solid.
pub(crate) fn affine_dimension(points: &[Vec3], tol: f64) -> usize {
    let Some(p0) = points.first() else {
        return 0;
    };
    let farthest = |dist: &dyn Fn(&Vec3) -> f64| -> (f64, Vec3) {
        points.iter().map(|p| (dist(p), *p)).max_by(|a, b| a.0.total_cmp(&b.0)).unwrap()
    };
    let (d1, p1) = farthest(&|p| (p - p0).norm());
    if d1 <= tol {
        return 0;
    }
    let u = (p1 - p0) / d1;
    let (d2, p2) = farthest(&|p| {
        let r = p - p0;
        (r - u * r.dot(&u)).norm()
    });
    if d2 <= tol {
        return 1;
    }
    let n = u.cross(&(p2 - p0)).normalize();
    let (d3, _) = farthest(&|p| (p - p0).dot(&n).abs());
    if d3 <= tol {
        2
    } else {
        3
    }
}

/// Permutation sorting coplanar points counterclockwise about `normal`.
fn ccw_order(points: &[Vec3], normal: &Vec3) -> Vec<usize> {
    let c: Vec3 = points.iter().sum::<Vec3>() / points.len() as f64;
    let far = points.iter().max_by(|a, b| (*a - c).norm().total_cmp(&(*b - c).norm())).unwrap();
    let u = {
        let r = far - c;
        (r - normal * r.dot(normal)).normalize()
    };
    let w = normal.cross(&u);
    let angle = |p: &Vec3| {
        let r = p - c;
        r.dot(&w).atan2(r.dot(&u))
    };
    let mut idx: Vec<usize> = (0..points.len()).collect();
    idx.sort_by(|&a, &b| angle(&points[a]).partial_cmp(&angle(&points[b])).unwrap_or(Ordering::Equal));
    idx
}

#[cfg(test)]
mod tests {
    use super::*;

    fn axis(i: usize, sign: f64) -> UnitVector {
        let mut v = Vec3::zeros();
        v[i] = sign;
        UnitVector::new(v).unwrap()
    }

    fn cube(half: f64) -> Vec<HalfSpace> {
        (0..3).flat_map(|i| [HalfSpace::new(axis(i, 1.0), half), HalfSpace::new(axis(i, -1.0), half)]).collect()
    }

    #[test]
    fn unit_cube() {
        let p = intersect_halfspaces(&cube(0.5)).unwrap();
        assert_eq!(p.vertices().len(), 8);
        assert_eq!(p.faces().len(), 6);
        for f in p.faces() {
            assert!((f.perimeter - 4.0).abs() < 1e-12);
            assert!((f.area - 1.0).abs() < 1e-12);
        }
        assert_eq!(p.edge_count(), 12);
    }

    #[test]
    fn slab_is_unbounded() {
        let hs = [HalfSpace::new(axis(2, 1.0), 1.0), HalfSpace::new(axis(2, -1.0), 1.0)];
        assert_eq!(intersect_halfspaces(&hs), Err(GeometryError::Unbounded));
    }

    #[test]
    fn open_prism_is_unbounded() {
        // five normals with a common orthogonal direction
        let hs: Vec<HalfSpace> = cube(1.0).into_iter().filter(|h| h.normal.z.abs() < 0.5).collect();
        assert_eq!(intersect_halfspaces(&hs), Err(GeometryError::Unbounded));
        let mut hs = cube(1.0);
        hs.remove(5);
        assert_eq!(intersect_halfspaces(&hs), Err(GeometryError::Unbounded));
    }

    #[test]
    fn contradictory_box_is_infeasible() {
        let mut hs = cube(1.0);
        hs[0].offset = -2.0;
        assert_eq!(intersect_halfspaces(&hs), Err(GeometryError::Infeasible));
    }

    #[test]
    fn flat_box_is_degenerate() {
        let mut hs = cube(1.0);
        hs[4].offset = 0.0;
        hs[5].offset = 0.0;
        assert_eq!(intersect_halfspaces(&hs), Err(GeometryError::Degenerate(2)));
    }

    #[test]
    fn redundant_halfspace_has_no_face() {
        let mut hs = cube(0.5);
        hs.push(HalfSpace::new(axis(2, 1.0), 2.0));
        let p = intersect_halfspaces(&hs).unwrap();
        assert_eq!(face_normal_set(&p).len(), 6);
        assert!(p.face_for_halfspace(6).is_none());
    }

    #[test]
    fn duplicated_halfspace_yields_one_face() {
        let mut hs = cube(0.5);
        hs.push(hs[0]);
        let p = intersect_halfspaces(&hs).unwrap();
        assert_eq!(p.faces().len(), 6);
    }

    #[test]
    fn faces_are_counterclockwise_from_outside() {
        let p = intersect_halfspaces(&cube(0.5)).unwrap();
        for f in p.faces() {
            let v = &f.vertices;
            let turn = (v[1] - v[0]).cross(&(v[2] - v[1]));
            assert!(turn.dot(&f.normal) > 0.0);
        }
    }

    #[test]
    fn coincident_vertices_merge_at_four_valent_apex() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let n = |x: f64, y: f64, z: f64| UnitVector::new(Vec3::new(x, y, z)).unwrap();
        // square pyramid: base [-1,1]^2, apex at height 1
        let hs = vec![
            HalfSpace::new(n(0.0, 0.0, -1.0), 0.0),
            HalfSpace::new(n(s, 0.0, s), s),
            HalfSpace::new(n(-s, 0.0, s), s),
            HalfSpace::new(n(0.0, s, s), s),
            HalfSpace::new(n(0.0, -s, s), s),
        ];
        let p = intersect_halfspaces(&hs).unwrap();
        assert_eq!(p.vertices().len(), 5);
        assert_eq!(p.faces().len(), 5);
    }

    #[test]
    fn affine_dimension_counts() {
        let pts = [Vec3::zeros(), Vec3::x(), Vec3::y(), Vec3::z()];
        assert_eq!(affine_dimension(&pts[..1], 1e-9), 0);
        assert_eq!(affine_dimension(&pts[..2], 1e-9), 1);
        assert_eq!(affine_dimension(&pts[..3], 1e-9), 2);
        assert_eq!(affine_dimension(&pts, 1e-9), 3);
    }
}
