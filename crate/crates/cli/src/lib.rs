//! Front-end logic for the `dequant` binary.

pub mod config;

use std::fmt;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use dequant::checks::{self, CheckOutcome, Suite, SuiteOptions};
use dequant::contraction;
use dequant::flow::{self, Trajectory};
use dequant::operator::{gellmann_basis, structure_constants};
use dequant::quantum::{self, DensityMatrix, QuantumGeometry};
use dequant::serialize::{fmt17, json_array1, json_array3, json_number};
use dequant::simplex;
use dequant::{Error, Poly, PolyVectorField};

use config::{Format, RunConfig, System};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVARIANT: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_DIVERGENCE: i32 = 3;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Io(String),
    Divergence { at: f64, partial_written: Option<PathBuf> },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Io(_) => EXIT_USAGE,
            CliError::Divergence { .. } => EXIT_DIVERGENCE,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "error: {m}"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
            CliError::Divergence { at, partial_written } => {
                write!(f, "error: integration diverged at t = {at}")?;
                if let Some(p) = partial_written {
                    write!(f, "; partial trajectory written to {}", p.display())?;
                }
                Ok(())
            }
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

/// Writes through a temporary sibling file and renames it into place.
pub fn write_atomic(path: &Path, contents: &str) -> Result<(), CliError> {
    let io = |e: std::io::Error| CliError::Io(format!("{}: {e}", path.display()));
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d.to_path_buf(),
        _ => PathBuf::from("."),
    };
    let name = path.file_name().ok_or_else(|| CliError::Usage(format!("not a file path: {}", path.display())))?;
    let tmp = dir.join(format!(".{}.tmp-{}", name.to_string_lossy(), std::process::id()));
    let mut f = fs::File::create(&tmp).map_err(io)?;
    f.write_all(contents.as_bytes()).map_err(io)?;
    f.sync_all().map_err(io)?;
    drop(f);
    fs::rename(&tmp, path).map_err(|e| {
        let _ = fs::remove_file(&tmp);
        io(e)
    })
}

/// Sends `contents` to `out`, or to stdout when no path is given.
pub fn emit(out: Option<&Path>, contents: &str) -> Result<(), CliError> {
    match out {
        Some(p) => write_atomic(p, contents),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(contents.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| CliError::Io(format!("stdout: {e}")))
        }
    }
}

/// `{"n": n, "c": [[[...]]], "d": [[[...]]]}` with `c[μ][ν][σ] = c^{μν}_σ`.
pub fn structure_constants_json(n: usize) -> Result<String, CliError> {
    if !(2..=8).contains(&n) {
        return Err(CliError::Usage(format!("n must be in 2..=8, got {n}")));
    }
    let sc = structure_constants(&gellmann_basis(n)?)?;
    Ok(format!(
        "{{\"n\":{n},\"c\":{},\"d\":{}}}\n",
        json_array3(&sc.c_nested()),
        json_array3(&sc.d_nested())
    ))
}

/// The integrated field, its start point and a description for the metadata.
pub struct FlowProblem {
    pub field: PolyVectorField,
    pub start: Vec<f64>,
    pub generator: String,
    quantum: Option<QuantumSetup>,
}

struct QuantumSetup {
    a: dequant::operator::HermitianOperator,
    b: dequant::operator::HermitianOperator,
    rho: DensityMatrix,
    geometry: QuantumGeometry,
}

fn coefficients(v: &[f64], len: usize) -> Vec<f64> {
    if v.is_empty() {
        vec![0.0; len]
    } else {
        v.to_vec()
    }
}

pub fn build_problem(cfg: &RunConfig) -> Result<FlowProblem, CliError> {
    cfg.validate()?;
    let len = cfg.coefficient_len();
    let a = coefficients(&cfg.a, len);
    let b = coefficients(&cfg.b, len);
    let generator = format!("{} a={} b={}", cfg.system, json_array1(&a), json_array1(&b));
    match cfg.system {
        System::Quantum => {
            let n = cfg.dim();
            let geometry = QuantumGeometry::new(n)?;
            let basis = geometry.basis();
            let (a_op, b_op) = (basis.operator(&a)?, basis.operator(&b)?);
            let rho = match &cfg.start {
                Some(x) => DensityMatrix::new(basis.operator(x)?)?,
                None => DensityMatrix::maximally_mixed(n),
            };
            let field = geometry.hamiltonian_field(&a_op)?.add(&geometry.r_gradient_field(&b_op)?);
            let start = geometry.coordinates(&rho.as_dual_point())?;
            Ok(FlowProblem {
                field,
                start,
                generator: format!("{generator} n={n}"),
                quantum: Some(QuantumSetup { a: a_op, b: b_op, rho, geometry }),
            })
        }
        System::Simplex => {
            let field = simplex::hamiltonian_field_simplex(&Poly::linear(&a))?
                .add(&simplex::gradient_field_simplex(&Poly::linear(&b))?);
            let start = cfg.start.clone().unwrap_or_else(|| vec![1.0 / 3.0; 3]);
            Ok(FlowProblem { field, start, generator, quantum: None })
        }
        System::Pi => {
            let field = simplex::pi_hamiltonian(&[a[0], a[1], a[2]]);
            let start = cfg.start.clone().unwrap_or_else(|| vec![1.0 / 3.0; 3]);
            Ok(FlowProblem { field, start, generator, quantum: None })
        }
        System::Contraction => {
            let lambda = cfg.lambda.unwrap_or(1.0);
            let field = contraction::bivector_from_casimir(lambda).field_of(&Poly::linear(&a));
            let start = cfg.start.clone().unwrap_or_else(|| vec![1.0 / 3.0; 3]);
            Ok(FlowProblem { field, start, generator: format!("{generator} lambda={}", fmt17(lambda)), quantum: None })
        }
    }
}

pub fn render(traj: &Trajectory, format: Format) -> String {
    match format {
        Format::Csv => traj.to_csv(),
        Format::Json => traj.to_json(),
    }
}

/// Path of the closed-form endpoint file written next to a quantum trajectory.
pub fn closed_form_path(out: &Path) -> PathBuf {
    let stem = out.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    out.with_file_name(format!("{stem}.closed-form.json"))
}

fn closed_form_json(setup: &QuantumSetup, t: f64, rk4_endpoint: &[f64]) -> Result<String, CliError> {
    let exact = quantum::closed_form_flow(&setup.a, &setup.b, &setup.rho, t)?;
    let coords = setup.geometry.coordinates(&exact.as_dual_point())?;
    let distance = coords.iter().zip(rk4_endpoint).map(|(u, v)| (u - v).powi(2)).sum::<f64>().sqrt();
    Ok(format!(
        "{{\"t\":{},\"closed_form\":{},\"rk4\":{},\"distance\":{}}}\n",
        json_number(t),
        json_array1(&coords),
        json_array1(rk4_endpoint),
        json_number(distance)
    ))
}

/// Integrates the configured flow and writes the outputs.
pub fn run_flow(cfg: &RunConfig) -> Result<(), CliError> {
    let problem = build_problem(cfg)?;
    let out = cfg.out.as_deref();
    match flow::integrate(&problem.field, &problem.start, cfg.t_max, cfg.steps) {
        Ok(traj) => {
            let traj = traj.with_generator(problem.generator);
            emit(out, &render(&traj, cfg.format))?;
            if let Some(setup) = &problem.quantum {
                let json = closed_form_json(setup, cfg.t_max, traj.endpoint())?;
                match out {
                    Some(p) => write_atomic(&closed_form_path(p), &json)?,
                    None => eprint!("closed-form endpoint: {json}"),
                }
            }
            Ok(())
        }
        Err(Error::Divergence { at, partial }) => {
            let partial = partial.with_generator(problem.generator);
            emit(out, &render(&partial, cfg.format))?;
            Err(CliError::Divergence { at, partial_written: out.map(Path::to_path_buf) })
        }
        Err(e) => Err(e.into()),
    }
}

pub fn run_check(suite: Suite, opts: &SuiteOptions) -> (Vec<CheckOutcome>, bool) {
    let outcomes = checks::run_suite(suite, opts);
    let ok = outcomes.iter().all(|o| o.passed);
    (outcomes, ok)
}

pub fn parse_lambda_grid(text: &str) -> Result<Vec<f64>, CliError> {
    let values: Vec<f64> = text
        .split(',')
        .map(|s| s.trim().parse::<f64>().map_err(|e| CliError::Usage(format!("bad lambda {s:?}: {e}"))))
        .collect::<Result<_, _>>()?;
    if values.is_empty() || values.iter().any(|l| !(0.0..=1.0).contains(l)) {
        return Err(CliError::Usage("lambda values must lie in [0, 1]".into()));
    }
    Ok(values)
}

/// `(λ, deviation)` rows for the flatness profile, plus excluded-point counts.
pub fn contract_profile(lambdas: &[f64], grid: usize, format: Format) -> Result<(String, usize), CliError> {
    let profiles: Vec<_> = lambdas
        .iter()
        .map(|&l| contraction::flatness_profile(l, grid))
        .collect::<Result<_, _>>()?;
    let excluded = profiles.iter().map(|p| p.excluded).sum();
    let text = match format {
        Format::Csv => {
            let mut s = String::from("lambda,deviation\n");
            for p in &profiles {
                s.push_str(&format!("{},{}\n", fmt17(p.lambda), fmt17(p.max_deviation)));
            }
            s
        }
        Format::Json => {
            let l: Vec<f64> = profiles.iter().map(|p| p.lambda).collect();
            let d: Vec<f64> = profiles.iter().map(|p| p.max_deviation).collect();
            format!("{{\"grid\":{grid},\"lambda\":{},\"deviation\":{}}}\n", json_array1(&l), json_array1(&d))
        }
    };
    Ok((text, excluded))
}
