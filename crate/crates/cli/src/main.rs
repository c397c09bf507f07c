//! `polyconf` command-line front end.

use std::fs;
use std::io::{self, Read};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use polyconf::configspace::{convexity_witness, probe_line_with_tol};
use polyconf::export::{
    probe_csv, to_json, to_off, ClassificationRecord, PolytopeReport, ProbeRecord, ProblemFile, SolutionFile,
};
use polyconf::family5::{
    basis_vectors, build_polytope, canonical_normals, classify, measure_areas, perimeters_from_xy,
    xy_from_perimeters_with_tol, FamilyParams, PerimeterVector, EPS_CLASS,
};
use polyconf::minkowski::{check_conditions, solve, MinkowskiError, ValidationReport, DEFAULT_MAX_ITER, DEFAULT_TOL};
use polyconf::UnitVector;

const EXIT_NEGATIVE: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_DIVERGED: u8 = 3;

const TYPED_TOL: f64 = 1e-6;

#[derive(Parser, Debug)]
#[command(name = "polyconf", version, about = "Five-normal polytopes, their perimeter space and a Minkowski solver")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Off,
    Csv,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build the family polytope with base half-lengths x and y.
    ///
    /// Prints a JSON summary (verdict, perimeters, normals, areas) that can be
    /// piped into `minkowski --problem -`. The polytope itself goes to --out.
    Build {
        #[arg(long, allow_negative_numbers = true)]
        x: f64,
        #[arg(long, allow_negative_numbers = true)]
        y: f64,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Decide membership of a perimeter vector.
    Classify {
        /// Five comma-separated perimeters.
        #[arg(long = "L", value_delimiter = ',', num_args = 1.., allow_negative_numbers = true, required = true)]
        l: Vec<f64>,
        /// Membership band, relative. The default suits values typed with
        /// about eight digits.
        #[arg(long, default_value_t = TYPED_TOL)]
        tol: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Classify samples along a line through a perimeter vector.
    Probe {
        #[arg(long, default_value_t = 0.12)]
        radius: f64,
        #[arg(long, default_value_t = 240)]
        steps: usize,
        /// vI, vII, vIII or five comma-separated numbers.
        #[arg(long, default_value = "vI")]
        direction: String,
        /// Same forms as --direction.
        #[arg(long, default_value = "vII")]
        center: String,
        #[arg(long, default_value_t = EPS_CLASS)]
        tol: f64,
        /// JSON report; the CSV is written next to it. With --format csv only
        /// the CSV is written, to this path.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Two members whose midpoint is not a member.
    WitnessNonconvex {
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Recover a polytope from normals and face areas.
    Minkowski {
        /// Problem JSON, `-` for stdin.
        #[arg(long)]
        problem: String,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        #[arg(long, default_value_t = DEFAULT_MAX_ITER)]
        max_iter: usize,
        /// Solution JSON; the OFF mesh is written next to it. With --format off
        /// only the mesh is written, to this path.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Report the closure residual of a problem file.
    CheckClosure {
        /// Problem JSON, `-` for stdin.
        #[arg(long)]
        problem: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Failure carrying the exit code.
#[derive(Debug)]
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self { code: EXIT_USAGE, message: message.into() }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Self::usage(e.to_string())
    }
}

type Outcome = Result<ExitCode, Failure>;

#[derive(Serialize)]
struct Params {
    x: f64,
    y: f64,
}

#[derive(Serialize)]
struct BuildSummary<'a> {
    verdict: String,
    label: &'static str,
    params: Params,
    perimeters: PerimeterVector,
    vertex_count: usize,
    face_count: usize,
    normals: Vec<[f64; 3]>,
    areas: [f64; 5],
    #[serde(skip_serializing_if = "Option::is_none")]
    polytope: Option<&'a PolytopeReport>,
}

#[derive(Serialize)]
struct ClassifyOutput {
    #[serde(flatten)]
    record: ClassificationRecord,
    label: &'static str,
    perimeters: PerimeterVector,
    #[serde(skip_serializing_if = "Option::is_none")]
    params: Option<Params>,
}

#[derive(Serialize)]
struct WitnessOutput {
    p1: PerimeterVector,
    p2: PerimeterVector,
    mid: PerimeterVector,
    verdicts: Vec<ClassificationRecord>,
    holds: bool,
}

#[derive(Serialize)]
struct ConditionsOutput {
    #[serde(flatten)]
    report: ValidationReport,
    passed: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(command: Command) -> Outcome {
    match command {
        Command::Build { x, y, format, out } => build(x, y, format, out.as_deref()),
        Command::Classify { l, tol, out } => classify_cmd(&l, tol, out.as_deref()),
        Command::Probe { radius, steps, direction, center, tol, out, format } => {
            probe(radius, steps, &direction, &center, tol, out.as_deref(), format)
        }
        Command::WitnessNonconvex { out } => witness(out.as_deref()),
        Command::Minkowski { problem, tol, max_iter, out, format } => {
            minkowski(&problem, tol, max_iter, out.as_deref(), format)
        }
        Command::CheckClosure { problem, out } => check_closure(&problem, out.as_deref()),
    }
}

fn positive(name: &str, v: f64) -> Result<(), Failure> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Failure::usage(format!("--{name} must be positive, got {v}")))
    }
}

/// Prints `json` and mirrors it to `out` when given.
fn emit(json: &str, out: Option<&Path>) -> Result<(), Failure> {
    println!("{json}");
    if let Some(path) = out {
        fs::write(path, format!("{json}\n"))?;
    }
    Ok(())
}

fn build(x: f64, y: f64, format: Format, out: Option<&Path>) -> Outcome {
    let params = FamilyParams::new(x, y).map_err(|e| Failure::usage(e.to_string()))?;
    let poly = build_polytope(&params).map_err(|e| Failure::usage(e.to_string()))?;
    let perimeters = perimeters_from_xy(&params).map_err(|e| Failure::usage(e.to_string()))?;
    let verdict = classify(&perimeters, EPS_CLASS).verdict;
    let report = PolytopeReport::from(&poly);

    let embed = match (format, out) {
        (Format::Json, None) => true,
        (Format::Json, Some(path)) => {
            fs::write(path, format!("{}\n", to_json(&report)))?;
            false
        }
        (Format::Off, Some(path)) => {
            fs::write(path, to_off(&poly))?;
            false
        }
        (Format::Off, None) => return Err(Failure::usage("--format off needs --out")),
        (Format::Csv, _) => return Err(Failure::usage("build writes json or off")),
    };
    let summary = BuildSummary {
        verdict: verdict.to_string(),
        label: verdict.label(),
        params: Params { x, y },
        perimeters,
        vertex_count: poly.vertices().len(),
        face_count: poly.faces().len(),
        normals: canonical_normals().iter().map(UnitVector::as_array).collect(),
        areas: measure_areas(&poly),
        polytope: embed.then_some(&report),
    };
    println!("{}", to_json(&summary));
    Ok(ExitCode::SUCCESS)
}

fn perimeter_vector(values: &[f64]) -> Result<PerimeterVector, Failure> {
    let arr: [f64; 5] =
        values.try_into().map_err(|_| Failure::usage(format!("expected 5 values, got {}", values.len())))?;
    let v = PerimeterVector(arr);
    if !v.is_finite() {
        return Err(Failure::usage("values must be finite"));
    }
    Ok(v)
}

fn classify_cmd(values: &[f64], tol: f64, out: Option<&Path>) -> Outcome {
    positive("tol", tol)?;
    let l = perimeter_vector(values)?;
    let c = classify(&l, tol);
    let params = xy_from_perimeters_with_tol(&l, tol).ok().map(|p| Params { x: p.x, y: p.y });
    let output = ClassifyOutput {
        record: ClassificationRecord::from(&c),
        label: c.verdict.label(),
        perimeters: l,
        params: params.filter(|_| c.verdict.is_member()),
    };
    emit(&to_json(&output), out)?;
    Ok(if c.verdict.is_member() { ExitCode::SUCCESS } else { ExitCode::from(EXIT_NEGATIVE) })
}

fn named_vector(name: &str) -> Result<PerimeterVector, Failure> {
    let b = basis_vectors();
    match name {
        "vI" => Ok(b.v_i),
        "vII" => Ok(b.v_ii),
        "vIII" => Ok(b.v_iii),
        list => {
            let values = list
                .split(',')
                .map(|s| s.trim().parse::<f64>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| Failure::usage(format!("bad vector {list:?}: {e}")))?;
            perimeter_vector(&values)
        }
    }
}

fn probe(
    radius: f64,
    steps: usize,
    direction: &str,
    center: &str,
    tol: f64,
    out: Option<&Path>,
    format: Format,
) -> Outcome {
    positive("tol", tol)?;
    let direction = named_vector(direction)?;
    let center = named_vector(center)?;
    let report =
        probe_line_with_tol(&center, &direction, radius, steps, tol).map_err(|e| Failure::usage(e.to_string()))?;
    match (format, out) {
        (Format::Json, Some(path)) => {
            fs::write(path, format!("{}\n", to_json(&ProbeRecord::from(&report))))?;
            fs::write(path.with_extension("csv"), probe_csv(&report))?;
        }
        (Format::Csv, Some(path)) => fs::write(path, probe_csv(&report))?,
        (Format::Off, _) => return Err(Failure::usage("probe writes json or csv")),
        (_, None) => {}
    }
    println!("half_branch_count: {}", report.half_branch_count);
    Ok(ExitCode::SUCCESS)
}

fn witness(out: Option<&Path>) -> Outcome {
    let w = convexity_witness();
    let output = WitnessOutput {
        p1: w.p1,
        p2: w.p2,
        mid: w.mid,
        verdicts: w.verdicts.iter().map(ClassificationRecord::from).collect(),
        holds: w.holds(),
    };
    emit(&to_json(&output), out)?;
    Ok(if w.holds() { ExitCode::SUCCESS } else { ExitCode::from(EXIT_NEGATIVE) })
}

fn read_problem(source: &str) -> Result<ProblemFile, Failure> {
    let text = if source == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s)?;
        s
    } else {
        fs::read_to_string(source).map_err(|e| Failure::usage(format!("{source}: {e}")))?
    };
    serde_json::from_str(&text).map_err(|e| Failure::usage(format!("{source}: {e}")))
}

fn describe(r: &ValidationReport) -> String {
    let mark = |ok: bool| if ok { "ok" } else { "FAILED" };
    format!(
        "(i) normals admissible: {}\n(ii) areas positive: {}\n(iii) areas close up: {} (residual {:.6e})",
        mark(r.normals_admissible),
        mark(r.areas_positive),
        mark(r.closed),
        r.closure_residual
    )
}

fn minkowski(source: &str, tol: f64, max_iter: usize, out: Option<&Path>, format: Format) -> Outcome {
    positive("tol", tol)?;
    let file = read_problem(source)?;
    let problem = file.to_problem().map_err(|e| Failure::usage(e.to_string()))?;
    let solution = match solve(&problem, tol, max_iter) {
        Ok(s) => s,
        Err(MinkowskiError::ConditionsViolated(r)) => {
            println!("{}", describe(&r));
            return Ok(ExitCode::from(EXIT_NEGATIVE));
        }
        Err(e @ MinkowskiError::NonConvergence { .. }) => {
            return Err(Failure { code: EXIT_DIVERGED, message: e.to_string() })
        }
        Err(e) => return Err(Failure::usage(e.to_string())),
    };
    let json = to_json(&SolutionFile::new(&problem, &solution));
    match (format, out) {
        (Format::Json, Some(path)) => {
            fs::write(path, format!("{json}\n"))?;
            fs::write(path.with_extension("off"), to_off(&solution.polytope))?;
            println!("iterations: {}, area_residual: {:.6e}", solution.iterations, solution.area_residual);
        }
        (Format::Off, Some(path)) => {
            fs::write(path, to_off(&solution.polytope))?;
            println!("iterations: {}, area_residual: {:.6e}", solution.iterations, solution.area_residual);
        }
        (Format::Json, None) => println!("{json}"),
        (Format::Off, None) => print!("{}", to_off(&solution.polytope)),
        (Format::Csv, _) => return Err(Failure::usage("minkowski writes json or off")),
    }
    Ok(ExitCode::SUCCESS)
}

fn check_closure(source: &str, out: Option<&Path>) -> Outcome {
    let problem = read_problem(source)?.to_problem().map_err(|e| Failure::usage(e.to_string()))?;
    let report = check_conditions(&problem);
    eprintln!("{}", describe(&report));
    emit(&to_json(&ConditionsOutput { report, passed: report.passed() }), out)?;
    Ok(if report.passed() { ExitCode::SUCCESS } else { ExitCode::from(EXIT_NEGATIVE) })
}
