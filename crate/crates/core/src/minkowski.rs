//! Polytopes from prescribed face normals and face areas.
//!
//! The solver maximizes the volume `V(h)` over support vectors `h` on the
//! plane `Σ F_k h_k = 1`. The gradient of `V` is the vector of face areas,
//! so a maximizer satisfies `areas(h) = μ F` for a multiplier `μ > 0`, and
//! `h / √μ` realizes the targets exactly. The iteration is projected
//! gradient ascent with a Barzilai-Borwein step and a non-monotone
//! backtracking line search.

use std::collections::VecDeque;

use nalgebra::DMatrix;
use serde::Serialize;
use thiserror::Error;

use crate::configspace::area_closure_residual;
use crate::geometry::{intersect_halfspaces, GeometryError, HalfSpace, Polytope, UnitVector};

/// Closure tolerance, relative to `(Σ F_k)²`.
pub const EPS_CLOSURE: f64 = 1e-9;
pub const DEFAULT_TOL: f64 = 1e-6;
pub const DEFAULT_MAX_ITER: usize = 10_000;

/// Smallest accepted angle between two normals.
const MIN_NORMAL_ANGLE: f64 = 1e-8;
const ARMIJO: f64 = 1e-4;
const MEMORY: usize = 10;
/// Relative accuracy assumed for a computed volume.
const VOLUME_NOISE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MinkowskiError {
    #[error("existence conditions violated: {0:?}")]
    ConditionsViolated(ValidationReport),
    #[error("no convergence after {iterations} iterations (area residual {residual:e})")]
    NonConvergence { iterations: usize, residual: f64 },
    #[error("{0} normals but {1} values")]
    LengthMismatch(usize, usize),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct MinkowskiProblem {
    pub normals: Vec<UnitVector>,
    pub target_areas: Vec<f64>,
}

impl MinkowskiProblem {
    pub fn new(normals: Vec<UnitVector>, target_areas: Vec<f64>) -> Self {
        Self { normals, target_areas }
    }
}

/// Outcome of the three existence conditions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ValidationReport {
    /// (i): at least four normals, not coplanar, pairwise distinct.
    pub normals_admissible: bool,
    /// (ii): every target area positive.
    pub areas_positive: bool,
    /// (iii): `|Σ F_k n_k|² <= EPS_CLOSURE (Σ F_k)²`.
    pub closed: bool,
    pub closure_residual: f64,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.normals_admissible && self.areas_positive && self.closed
    }
}

fn normals_admissible(normals: &[UnitVector]) -> bool {
    if normals.len() < 4 {
        return false;
    }
    let distinct = normals
        .iter()
        .enumerate()
        .all(|(i, a)| normals[i + 1..].iter().all(|b| a.cross(b).norm().atan2(a.dot(b)) > MIN_NORMAL_ANGLE));
    let m = DMatrix::from_fn(3, normals.len(), |r, c| normals[c][r]);
    distinct && m.rank(1e-10) == 3
}

pub fn check_conditions(p: &MinkowskiProblem) -> ValidationReport {
    let same_len = p.normals.len() == p.target_areas.len();
    let areas_positive = same_len && p.target_areas.iter().all(|f| f.is_finite() && *f > 0.0);
    let closure_residual = area_closure_residual(&p.normals, &p.target_areas).unwrap_or(f64::INFINITY);
    let total: f64 = p.target_areas.iter().sum();
    ValidationReport {
        normals_admissible: normals_admissible(&p.normals),
        areas_positive,
        closed: same_len && closure_residual <= EPS_CLOSURE * total * total,
        closure_residual,
    }
}

fn halfspaces(normals: &[UnitVector], h: &[f64]) -> Vec<HalfSpace> {
    normals.iter().zip(h).map(|(n, h)| HalfSpace::new(*n, *h)).collect()
}

fn areas_of(p: &Polytope, m: usize) -> Vec<f64> {
    (0..m).map(|k| p.face_for_halfspace(k).map_or(0.0, |f| f.area)).collect()
}

/// Face area per normal of `∩ {<p, n_k> <= h_k}`; 0 where a normal attains no
/// 2-face.
pub fn areas_from_support(normals: &[UnitVector], h: &[f64]) -> Result<Vec<f64>, MinkowskiError> {
    if normals.len() != h.len() {
        return Err(MinkowskiError::LengthMismatch(normals.len(), h.len()));
    }
    let p = intersect_halfspaces(&halfspaces(normals, h))?;
    Ok(areas_of(&p, normals.len()))
}

/// Support numbers realizing the target areas, with the polytope they cut
/// out. The vertex centroid sits at the origin.
#[derive(Debug, Clone, PartialEq)]
pub struct MinkowskiSolution {
    pub support: Vec<f64>,
    pub polytope: Polytope,
    /// Largest `|achieved_k - target_k| / target_k`.
    pub area_residual: f64,
    pub iterations: usize,
}

struct Iterate {
    h: Vec<f64>,
    volume: f64,
    areas: Vec<f64>,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn evaluate(normals: &[UnitVector], h: Vec<f64>) -> Option<Iterate> {
    let p = intersect_halfspaces(&halfspaces(normals, &h)).ok()?;
    Some(Iterate { volume: p.volume(), areas: areas_of(&p, normals.len()), h })
}

fn relative_residual(areas: &[f64], targets: &[f64], scale: f64) -> f64 {
    areas.iter().zip(targets).map(|(a, f)| (scale * a - f).abs() / f).fold(0.0, f64::max)
}

/// Recovers a polytope with the given normals and face areas.
///
/// Stops once the areas, rescaled onto the targets, agree within `tol`
/// relative, or fails with [`MinkowskiError::NonConvergence`] after
/// `max_iter` iterations.
pub fn solve(p: &MinkowskiProblem, tol: f64, max_iter: usize) -> Result<MinkowskiSolution, MinkowskiError> {
    let report = check_conditions(p);
    if !report.passed() {
        return Err(MinkowskiError::ConditionsViolated(report));
    }
    let normals = &p.normals;
    let targets = &p.target_areas;
    let m = normals.len();
    let ff = dot(targets, targets);
    let project = |g: &[f64]| -> Vec<f64> {
        let mu = dot(g, targets) / ff;
        g.iter().zip(targets).map(|(g, f)| g - mu * f).collect()
    };
    let multiplier = |areas: &[f64]| dot(areas, targets) / ff;

    let total: f64 = targets.iter().sum();
    let mut cur = evaluate(normals, vec![1.0 / total; m]).ok_or(GeometryError::Infeasible)?;
    let mut history: VecDeque<f64> = VecDeque::from([cur.volume]);
    let mut step = 1.0;
    let mut residual = f64::INFINITY;

    for iter in 0..max_iter {
        debug_assert!((dot(&cur.h, targets) - 1.0).abs() < 1e-9);
        let mu = multiplier(&cur.areas);
        residual = relative_residual(&cur.areas, targets, 1.0 / mu);
        if residual <= tol {
            return finish(p, &cur.h, mu, iter);
        }

        let g = project(&cur.areas);
        let gg = dot(&g, &g);
        let reference = history.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let noise = VOLUME_NOISE * cur.volume;
        let h_norm = dot(&cur.h, &cur.h).sqrt();
        let mut s = step;
        let next = loop {
            let trial: Vec<f64> = cur.h.iter().zip(&g).map(|(h, g)| h + s * g).collect();
            if let Some(t) = evaluate(normals, trial) {
                let wanted = ARMIJO * s * gg;
                // near the optimum the volume gain drowns in round-off, mostly
                // from the part of g the projection leaves along the targets;
                // the trapezoid rule on the projected areas still resolves it
                let gain = 0.5 * s * (gg + dot(&project(&t.areas), &g));
                if t.volume >= reference + wanted || (t.volume >= cur.volume - noise && gain >= wanted) {
                    break t;
                }
            }
            s *= 0.5;
            if s * gg.sqrt() <= f64::EPSILON * h_norm {
                return Err(MinkowskiError::NonConvergence { iterations: iter, residual });
            }
        };

        let dh: Vec<f64> = next.h.iter().zip(&cur.h).map(|(a, b)| a - b).collect();
        let dg: Vec<f64> = project(&next.areas).iter().zip(&g).map(|(a, b)| a - b).collect();
        let curvature = -dot(&dh, &dg);
        step = if curvature > 0.0 { dot(&dh, &dh) / curvature } else { 2.0 * s };

        // keep the iterate on the constraint plane against round-off drift
        let drift = dot(&next.h, targets);
        cur = if (drift - 1.0).abs() > 1e-14 {
            evaluate(normals, next.h.iter().map(|h| h / drift).collect()).unwrap_or(next)
        } else {
            next
        };
        history.push_back(cur.volume);
        if history.len() > MEMORY {
            history.pop_front();
        }
    }
    Err(MinkowskiError::NonConvergence { iterations: max_iter, residual })
}

fn finish(p: &MinkowskiProblem, h: &[f64], mu: f64, iterations: usize) -> Result<MinkowskiSolution, MinkowskiError> {
    let scale = mu.sqrt().recip();
    let scaled: Vec<f64> = h.iter().map(|h| h * scale).collect();
    let shifted = intersect_halfspaces(&halfspaces(&p.normals, &scaled))?;
    let c = shifted.centroid();
    let support: Vec<f64> = p.normals.iter().zip(&scaled).map(|(n, h)| h - n.dot(&c)).collect();
    let polytope = intersect_halfspaces(&halfspaces(&p.normals, &support))?;
    let area_residual = relative_residual(&areas_of(&polytope, p.normals.len()), &p.target_areas, 1.0);
    Ok(MinkowskiSolution { support, polytope, area_residual, iterations })
}
