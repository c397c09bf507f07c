//! Python bindings for `polyconf`.

use pyo3::create_exception;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use polyconf::configspace::{self, AnalysisError, SubspaceBasis};
use polyconf::export;
use polyconf::family5::{self, Coefficients, FamilyError, FamilyParams, PerimeterVector, EPS_CLASS};
use polyconf::geometry::{self, GeometryError, HalfSpace, UnitVector};
use polyconf::minkowski::{self, MinkowskiError, MinkowskiProblem, DEFAULT_MAX_ITER, DEFAULT_TOL};

create_exception!(polyconf_py, NonConvergenceError, PyRuntimeError, "The Minkowski solver ran out of iterations.");
create_exception!(polyconf_py, ConditionsError, PyValueError, "Normals and areas violate an existence condition.");

fn geometry_err(e: GeometryError) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn family_err(e: FamilyError) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn analysis_err(e: AnalysisError) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn minkowski_err(e: MinkowskiError) -> PyErr {
    match e {
        MinkowskiError::NonConvergence { .. } => NonConvergenceError::new_err(e.to_string()),
        MinkowskiError::ConditionsViolated(_) => ConditionsError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn unit_vectors(normals: &[[f64; 3]]) -> PyResult<Vec<UnitVector>> {
    normals.iter().map(|[x, y, z]| UnitVector::from_xyz(*x, *y, *z)).collect::<Result<_, _>>().map_err(geometry_err)
}

fn perimeter_vector(values: Vec<f64>) -> PyResult<PerimeterVector> {
    let arr: [f64; 5] = values
        .try_into()
        .map_err(|v: Vec<f64>| PyValueError::new_err(format!("expected 5 values, got {}", v.len())))?;
    Ok(PerimeterVector(arr))
}

/// Convex polytope given as an intersection of halfspaces.
#[pyclass(name = "Polytope", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyPolytope(geometry::Polytope);

#[pymethods]
impl PyPolytope {
    #[getter]
    fn vertices(&self) -> Vec<[f64; 3]> {
        self.0.vertices().iter().map(|v| [v.x, v.y, v.z]).collect()
    }

    /// Counterclockwise vertex index cycles, one per face.
    #[getter]
    fn faces(&self) -> Vec<Vec<usize>> {
        self.0.faces().iter().map(|f| f.vertex_indices.clone()).collect()
    }

    #[getter]
    fn face_normals(&self) -> Vec<[f64; 3]> {
        self.0.faces().iter().map(|f| f.normal.as_array()).collect()
    }

    #[getter]
    fn face_areas(&self) -> Vec<f64> {
        self.0.faces().iter().map(|f| f.area).collect()
    }

    #[getter]
    fn face_perimeters(&self) -> Vec<f64> {
        self.0.faces().iter().map(|f| f.perimeter).collect()
    }

    #[getter]
    fn edge_count(&self) -> usize {
        self.0.edge_count()
    }

    fn volume(&self) -> f64 {
        self.0.volume()
    }

    fn centroid(&self) -> [f64; 3] {
        let c = self.0.centroid();
        [c.x, c.y, c.z]
    }

    fn diameter(&self) -> f64 {
        self.0.diameter()
    }

    /// Five perimeters in the order of the family normals.
    fn family_perimeters(&self) -> Vec<f64> {
        family5::measure_perimeters(&self.0).0.to_vec()
    }

    fn equal_up_to_translation(&self, other: &PyPolytope, tol: f64) -> bool {
        geometry::equal_up_to_translation(&self.0, &other.0, tol)
    }

    fn to_off(&self) -> String {
        export::to_off(&self.0)
    }

    fn to_json(&self) -> String {
        export::to_json(&export::PolytopeReport::from(&self.0))
    }

    fn __repr__(&self) -> String {
        format!("Polytope(vertices={}, faces={})", self.0.vertices().len(), self.0.faces().len())
    }
}

/// Membership verdict for a perimeter vector.
#[pyclass(name = "Classification", frozen)]
struct PyClassification {
    #[pyo3(get)]
    verdict: String,
    #[pyo3(get)]
    label: String,
    #[pyo3(get)]
    residual: f64,
    /// Basis coordinates keyed `alpha`/`beta`, `gamma` or `delta`/`epsilon`.
    #[pyo3(get)]
    coefficients: Vec<(String, f64)>,
}

impl From<&family5::FamilyClassification> for PyClassification {
    fn from(c: &family5::FamilyClassification) -> Self {
        let coefficients = match c.coeffs {
            Some(Coefficients::LambdaI { alpha, beta }) => vec![("alpha".into(), alpha), ("beta".into(), beta)],
            Some(Coefficients::Ray { gamma }) => vec![("gamma".into(), gamma)],
            Some(Coefficients::LambdaIII { delta, epsilon }) => {
                vec![("delta".into(), delta), ("epsilon".into(), epsilon)]
            }
            None => Vec::new(),
        };
        Self {
            verdict: c.verdict.to_string(),
            label: c.verdict.label().to_string(),
            residual: c.residual,
            coefficients,
        }
    }
}

#[pymethods]
impl PyClassification {
    #[getter]
    fn is_member(&self) -> bool {
        self.verdict != "NotMember"
    }

    fn __repr__(&self) -> String {
        format!("Classification({}, residual={:e})", self.verdict, self.residual)
    }
}

#[pyclass(name = "ProbeReport", frozen)]
struct PyProbeReport {
    #[pyo3(get)]
    center: Vec<f64>,
    #[pyo3(get)]
    direction: Vec<f64>,
    /// `(t, verdict)` pairs in increasing `t`.
    #[pyo3(get)]
    samples: Vec<(f64, String)>,
    #[pyo3(get)]
    half_branch_count: usize,
    json: String,
    csv: String,
}

#[pymethods]
impl PyProbeReport {
    fn to_json(&self) -> String {
        self.json.clone()
    }

    fn to_csv(&self) -> String {
        self.csv.clone()
    }
}

#[pyclass(name = "MinkowskiSolution", frozen)]
struct PyMinkowskiSolution {
    #[pyo3(get)]
    support: Vec<f64>,
    #[pyo3(get)]
    polytope: PyPolytope,
    #[pyo3(get)]
    area_residual: f64,
    #[pyo3(get)]
    iterations: usize,
}

#[pyfunction]
fn intersect_halfspaces(normals: Vec<[f64; 3]>, offsets: Vec<f64>) -> PyResult<PyPolytope> {
    if normals.len() != offsets.len() {
        return Err(PyValueError::new_err("normals and offsets differ in length"));
    }
    let hs: Vec<HalfSpace> =
        unit_vectors(&normals)?.into_iter().zip(offsets).map(|(n, h)| HalfSpace::new(n, h)).collect();
    geometry::intersect_halfspaces(&hs).map(PyPolytope).map_err(geometry_err)
}

#[pyfunction]
#[pyo3(signature = (x, y, base_center = [0.0, 0.0, 0.0]))]
fn build_polytope(x: f64, y: f64, base_center: [f64; 3]) -> PyResult<PyPolytope> {
    let p = FamilyParams::new(x, y).map_err(family_err)?.with_center(base_center.into());
    family5::build_polytope(&p).map(PyPolytope).map_err(family_err)
}

#[pyfunction]
fn canonical_normals() -> Vec<[f64; 3]> {
    family5::canonical_normals().iter().map(UnitVector::as_array).collect()
}

#[pyfunction]
fn perimeters_from_xy(x: f64, y: f64) -> PyResult<Vec<f64>> {
    let p = FamilyParams::new(x, y).map_err(family_err)?;
    Ok(family5::perimeters_from_xy(&p).map_err(family_err)?.0.to_vec())
}

#[pyfunction]
fn xy_from_perimeters(perimeters: Vec<f64>) -> PyResult<(f64, f64)> {
    let p = family5::xy_from_perimeters(&perimeter_vector(perimeters)?).map_err(family_err)?;
    Ok((p.x, p.y))
}

#[pyfunction]
#[pyo3(signature = (perimeters, tol = EPS_CLASS))]
fn classify(perimeters: Vec<f64>, tol: f64) -> PyResult<PyClassification> {
    Ok(PyClassification::from(&family5::classify(&perimeter_vector(perimeters)?, tol)))
}

/// `{"vI": [...], "vII": [...], "vIII": [...]}`.
#[pyfunction]
fn basis_vectors() -> Vec<(String, Vec<f64>)> {
    let b = family5::basis_vectors();
    vec![("vI".into(), b.v_i.0.to_vec()), ("vII".into(), b.v_ii.0.to_vec()), ("vIII".into(), b.v_iii.0.to_vec())]
}

/// Orthonormal basis of the intersection of the two family planes.
#[pyfunction]
fn plane_intersection() -> Vec<Vec<f64>> {
    configspace::subspace_intersection(&SubspaceBasis::lambda_i(), &SubspaceBasis::lambda_iii())
        .vectors()
        .iter()
        .map(|v| v.0.to_vec())
        .collect()
}

#[pyfunction]
fn minor_check() -> f64 {
    configspace::minor_check()
}

#[pyfunction]
#[pyo3(signature = (center, direction, radius = 0.12, steps = 240, tol = EPS_CLASS))]
fn probe_line(center: Vec<f64>, direction: Vec<f64>, radius: f64, steps: usize, tol: f64) -> PyResult<PyProbeReport> {
    let r =
        configspace::probe_line_with_tol(&perimeter_vector(center)?, &perimeter_vector(direction)?, radius, steps, tol)
            .map_err(analysis_err)?;
    Ok(PyProbeReport {
        center: r.center.0.to_vec(),
        direction: r.direction.0.to_vec(),
        samples: r.samples.iter().map(|s| (s.t, s.verdict.verdict.to_string())).collect(),
        half_branch_count: r.half_branch_count,
        json: export::to_json(&export::ProbeRecord::from(&r)),
        csv: export::probe_csv(&r),
    })
}

/// `(p1, p2, mid, verdicts)`.
#[pyfunction]
fn convexity_witness() -> (Vec<f64>, Vec<f64>, Vec<f64>, Vec<String>) {
    let w = configspace::convexity_witness();
    (w.p1.0.to_vec(), w.p2.0.to_vec(), w.mid.0.to_vec(), w.verdicts.iter().map(|v| v.verdict.to_string()).collect())
}

#[pyfunction]
fn area_closure_residual(normals: Vec<[f64; 3]>, areas: Vec<f64>) -> PyResult<f64> {
    configspace::area_closure_residual(&unit_vectors(&normals)?, &areas).map_err(analysis_err)
}

/// `(normals_admissible, areas_positive, closed, closure_residual)`.
#[pyfunction]
fn check_conditions(normals: Vec<[f64; 3]>, areas: Vec<f64>) -> PyResult<(bool, bool, bool, f64)> {
    let r = minkowski::check_conditions(&MinkowskiProblem::new(unit_vectors(&normals)?, areas));
    Ok((r.normals_admissible, r.areas_positive, r.closed, r.closure_residual))
}

#[pyfunction]
#[pyo3(signature = (normals, areas, tol = DEFAULT_TOL, max_iter = DEFAULT_MAX_ITER))]
fn solve_minkowski(
    normals: Vec<[f64; 3]>,
    areas: Vec<f64>,
    tol: f64,
    max_iter: usize,
) -> PyResult<PyMinkowskiSolution> {
    let problem = MinkowskiProblem::new(unit_vectors(&normals)?, areas);
    let s = minkowski::solve(&problem, tol, max_iter).map_err(minkowski_err)?;
    Ok(PyMinkowskiSolution {
        support: s.support,
        polytope: PyPolytope(s.polytope),
        area_residual: s.area_residual,
        iterations: s.iterations,
    })
}

#[pymodule]
fn polyconf_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyPolytope>()?;
    m.add_class::<PyClassification>()?;
    m.add_class::<PyProbeReport>()?;
    m.add_class::<PyMinkowskiSolution>()?;
    m.add("NonConvergenceError", m.py().get_type::<NonConvergenceError>())?;
    m.add("ConditionsError", m.py().get_type::<ConditionsError>())?;
    m.add("EPS_CLASS", EPS_CLASS)?;
    m.add_function(wrap_pyfunction!(intersect_halfspaces, m)?)?;
    m.add_function(wrap_pyfunction!(build_polytope, m)?)?;
    m.add_function(wrap_pyfunction!(canonical_normals, m)?)?;
    m.add_function(wrap_pyfunction!(perimeters_from_xy, m)?)?;
    m.add_function(wrap_pyfunction!(xy_from_perimeters, m)?)?;
    m.add_function(wrap_pyfunction!(classify, m)?)?;
    m.add_function(wrap_pyfunction!(basis_vectors, m)?)?;
    m.add_function(wrap_pyfunction!(plane_intersection, m)?)?;
    m.add_function(wrap_pyfunction!(minor_check, m)?)?;
    m.add_function(wrap_pyfunction!(probe_line, m)?)?;
    m.add_function(wrap_pyfunction!(convexity_witness, m)?)?;
    m.add_function(wrap_pyfunction!(area_closure_residual, m)?)?;
    m.add_function(wrap_pyfunction!(check_conditions, m)?)?;
    m.add_function(wrap_pyfunction!(solve_minkowski, m)?)?;
    Ok(())
}
