//! Invariant suites run by `dequant check`.
//!
//! Every check reports a measured residual against a tolerance; boolean
//! checks report the number of violations against tolerance 0.

use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::algebra::{self, ComplexFunctional, LinearFunctional};
use crate::contraction;
use crate::error::{Error, Result};
use crate::field::PolyVectorField;
use crate::flow::{self, ClosureOptions};
use crate::linalg;
use crate::operator;
use crate::poly::Poly;
use crate::quantum::{self, QuantumGeometry, DEFAULT_RANK_TOL};
use crate::simplex::{self, Chart, ProbabilityVector};
use crate::stochastic::{self, RealMatrix3};

pub const DEFAULT_SEED: u64 = 0x5eed_2024;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    All,
    Quantum,
    Simplex,
    Algebra,
    Stochastic,
    Contraction,
}

impl Suite {
    pub const NAMES: [&'static str; 6] = ["all", "quantum", "simplex", "algebra", "stochastic", "contraction"];
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "all" => Ok(Suite::All),
            "quantum" => Ok(Suite::Quantum),
            "simplex" => Ok(Suite::Simplex),
            "algebra" => Ok(Suite::Algebra),
            "stochastic" => Ok(Suite::Stochastic),
            "contraction" => Ok(Suite::Contraction),
            other => Err(Error::InvalidArgument(format!(
                "unknown suite {other:?}; expected one of {}",
                Suite::NAMES.join(", ")
            ))),
        }
    }
}

/// Shift of a single Lie structure constant, for sensitivity testing.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Perturbation {
    pub mu: usize,
    pub nu: usize,
    pub sigma: usize,
    pub delta: f64,
}

#[derive(Clone, Debug, Default)]
pub struct SuiteOptions {
    pub seed: Option<u64>,
    #[doc(hidden)]
    pub perturbation: Option<Perturbation>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckOutcome {
    pub name: String,
    pub passed: bool,
    pub residual: f64,
    pub tolerance: f64,
}

impl fmt::Display for CheckOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {} residual={:.3e} tol={:.1e}",
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.residual,
            self.tolerance
        )
    }
}

struct Ctx {
    rng: ChaCha8Rng,
    perturbation: Option<Perturbation>,
}

impl Ctx {
    fn geometry(&self, n: usize) -> Result<QuantumGeometry> {
        let g = QuantumGeometry::new(n)?;
        match self.perturbation {
            Some(p) if n == 2 => {
                let mut sc = g.constants().clone();
                sc.perturb_c(p.mu, p.nu, p.sigma, p.delta);
                QuantumGeometry::with_constants(g.basis().clone(), sc)
            }
            _ => Ok(g),
        }
    }

    fn uniform(&mut self) -> f64 {
        self.rng.random::<f64>() * 2.0 - 1.0
    }

    fn vec3(&mut self) -> [f64; 3] {
        [self.uniform(), self.uniform(), self.uniform()]
    }

    fn interior_point(&mut self) -> [f64; 3] {
        let w = [0.1 + self.rng.random::<f64>(), 0.1 + self.rng.random::<f64>(), 0.1 + self.rng.random::<f64>()];
        let s: f64 = w.iter().sum();
        w.map(|x| x / s)
    }

    fn quadratic(&mut self, dim: usize) -> Poly {
        let mut p = Poly::constant(dim, self.uniform());
        for i in 0..dim {
            p = &p + &Poly::var(dim, i).scale(self.uniform());
            for j in i..dim {
                p = &p + &(&Poly::var(dim, i) * &Poly::var(dim, j)).scale(self.uniform());
            }
        }
        p
    }

    fn complex_functional(&mut self) -> ComplexFunctional {
        ComplexFunctional::new(LinearFunctional::new(self.vec3()), LinearFunctional::new(self.vec3()))
    }
}

type CheckFn = fn(&mut Ctx) -> Result<f64>;

struct Check {
    name: &'static str,
    tolerance: f64,
    run: CheckFn,
}

const fn check(name: &'static str, tolerance: f64, run: CheckFn) -> Check {
    Check { name, tolerance, run }
}

fn checks_for(suite: Suite) -> Vec<Check> {
    match suite {
        Suite::All => [Suite::Quantum, Suite::Simplex, Suite::Algebra, Suite::Stochastic, Suite::Contraction]
            .into_iter()
            .flat_map(checks_for)
            .collect(),
        Suite::Quantum => vec![
            check("quantum/identity-row", 1e-12, q_identity_row),
            check("quantum/product-reconstruction", 1e-12, q_reconstruction),
            check("quantum/unitary-invariance", 1e-9, q_unitary_invariance),
            check("quantum/lambda-jacobi", 1e-10, q_jacobi),
            check("quantum/flow-vs-closed-form", 1e-8, q_flow_oracle),
            check("quantum/rank-preserved", 0.0, q_rank_preserved),
            check("quantum/hamiltonian-tangency", 0.0, q_hamiltonian_tangency),
            check("quantum/gradient-non-tangency-witness", 1e-12, q_gradient_witness),
            check("quantum/r-gradient-leaf-tangency", 1e-10, q_r_gradient_tangency),
            check("quantum/gl-closure", 1e-10, q_gl_closure),
            check("quantum/hamiltonian-closure-matches-c", 1e-10, q_hamiltonian_closure),
        ],
        Suite::Simplex => vec![
            check("simplex/lambda-jacobi", 1e-10, s_jacobi),
            check("simplex/p1-p2-bracket", 1e-15, s_bracket),
            check("simplex/x-chart-pushforward", 1e-12, s_pushforward),
            check("simplex/killing", 1e-12, s_killing),
            check("simplex/linear-fields-commute", 1e-12, s_commute),
            check("simplex/casimir-drift", 1e-12, s_casimir_drift),
            check("simplex/sl2-closure", 1e-10, s_sl2_closure),
            check("simplex/isl2-closure", 1e-10, s_isl2_closure),
            check("simplex/leaf-transitivity", 1e-10, s_transitivity),
            check("pi/jacobi", 1e-10, pi_jacobi),
            check("pi/casimir-conserved", 1e-8, pi_casimir),
            check("pi/faces-invariant", 1e-10, pi_faces),
            check("pi/log-chart-constant", 1e-8, pi_log_chart),
            check("simplex/fisher-rao-consistency", 1e-10, s_fisher_rao),
            check("simplex/general-n-casimir", 1e-12, s_general_casimir),
            check("simplex/general-n-commute", 1e-12, s_general_commute),
            check("simplex/general-n3-fixture", 1e-15, s_general_fixture),
        ],
        Suite::Algebra => vec![
            check("algebra/lie-table", 1e-15, a_lie_table),
            check("algebra/jordan-table", 1e-15, a_jordan_table),
            check("algebra/star-table", 1e-15, a_star_table),
            check("algebra/star-associativity", 1e-12, a_associativity),
            check("algebra/jordan-identity", 1e-12, a_jordan_identity),
            check("algebra/derivation", 1e-12, a_derivation),
            check("algebra/associator-identity", 1e-12, a_associator),
            check("algebra/no-unit", 0.0, a_no_unit),
        ],
        Suite::Stochastic => vec![
            check("stochastic/classification-fixtures", 0.0, st_fixtures),
            check("stochastic/sl2-unit-determinant", 1e-10, st_unit_det),
            check("stochastic/hyperplane-preserved", 1e-10, st_hyperplane),
            check("stochastic/composition-law", 1e-9, st_composition),
            check("stochastic/escape-witness", 0.0, st_escape),
            check("stochastic/semigroup-closure", 0.0, st_semigroup),
            check("stochastic/birkhoff-inverse", 0.0, st_birkhoff),
            check("stochastic/tangent-dimension", 0.0, st_dimension),
        ],
        Suite::Contraction => vec![
            check("contraction/lambda0-is-simplex", 0.0, c_lambda0),
            check("contraction/lambda1-is-su2", 0.0, c_lambda1),
            check("contraction/casimir-central", 1e-12, c_central),
            check("contraction/jacobi", 1e-10, c_jacobi),
            check("contraction/flatness", 1e-15, c_flatness),
            check("contraction/casimir-conserved", 1e-8, c_conservation),
            check("contraction/closure-interpolation", 1e-10, c_closure),
        ],
    }
}

pub fn run_suite(suite: Suite, opts: &SuiteOptions) -> Vec<CheckOutcome> {
    let mut ctx = Ctx {
        rng: ChaCha8Rng::seed_from_u64(opts.seed.unwrap_or(DEFAULT_SEED)),
        perturbation: opts.perturbation,
    };
    checks_for(suite)
        .into_iter()
        .map(|c| {
            let residual = (c.run)(&mut ctx).unwrap_or(f64::INFINITY);
            CheckOutcome {
                name: c.name.to_string(),
                passed: residual.is_finite() && residual <= c.tolerance,
                residual,
                tolerance: c.tolerance,
            }
        })
        .collect()
}

fn count(violations: usize) -> f64 {
    violations as f64
}

// ---------------------------------------------------------------- quantum

fn q_identity_row(ctx: &mut Ctx) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for n in [2, 3, 4] {
        let g = ctx.geometry(n)?;
        let sc = g.constants();
        let m = g.size();
        let s = 1.0 / (n as f64).sqrt();
        for mu in 0..m {
            for nu in 0..m {
                let expected = if mu == nu { s } else { 0.0 };
                worst = worst.max((sc.d(mu, nu, 0) - expected).abs());
                worst = worst.max(sc.c(0, nu, mu).abs()).max(sc.c(nu, 0, mu).abs());
            }
        }
    }
    Ok(worst)
}

fn q_reconstruction(ctx: &mut Ctx) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for n in [2, 3, 4] {
        let g = ctx.geometry(n)?;
        worst = worst.max(g.constants().reconstruction_residual(g.basis()));
    }
    Ok(worst)
}

fn q_unitary_invariance(ctx: &mut Ctx) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for k in 0..20 {
        let n = 2 + k % 2;
        let g = ctx.geometry(n)?;
        let u = linalg::random_unitary(n, &mut ctx.rng);
        let conj = operator::conjugated_structure_constants(g.basis(), &u)?;
        worst = worst.max(conj.max_abs_diff(g.constants()));
    }
    Ok(worst)
}

fn q_jacobi(ctx: &mut Ctx) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for n in [2, 3] {
        let g = ctx.geometry(n)?;
        let lambda = g.lambda_tensor();
        let m = g.size();
        let x = |i| Poly::var(m, i);
        for i in 0..m {
            for j in 0..m {
                for k in 0..m {
                    worst = worst.max(lambda.jacobiator(&x(i), &x(j), &x(k)).max_abs_coeff());
                }
            }
        }
    }
    Ok(worst)
}

const QUANTUM_CASES: usize = 25;
const QUANTUM_STEPS: usize = 1000;

/// Runs `X_a + 𝕐_b` with RK4 and the closed form on random data; returns
/// (max endpoint distance, number of rank changes).
fn quantum_flow_cases(ctx: &mut Ctx) -> Result<(f64, usize)> {
    let mut worst: f64 = 0.0;
    let mut rank_changes = 0;
    for k in 0..QUANTUM_CASES {
        let n = 2 + k % 2;
        let g = ctx.geometry(n)?;
        let a = quantum::random_observable(n, &mut ctx.rng);
        let b = quantum::random_observable(n, &mut ctx.rng);
        let rank = 1 + k % n;
        let rho = quantum::random_density_matrix(n, rank, &mut ctx.rng);
        let field = g.hamiltonian_field(&a)?.add(&g.r_gradient_field(&b)?);
        let x0 = g.coordinates(&rho.as_dual_point())?;
        let numeric = flow::flow_endpoint(&field, &x0, 1.0, QUANTUM_STEPS)?;
        let exact_rho = quantum::closed_form_flow(&a, &b, &rho, 1.0)?;
        let exact = g.coordinates(&exact_rho.as_dual_point())?;
        let dist = numeric.iter().zip(&exact).map(|(u, v)| (u - v).powi(2)).sum::<f64>().sqrt();
        worst = worst.max(dist);
        let numeric_rho = quantum::DensityMatrix::new(g.point(&numeric)?.operator().clone());
        let before = quantum::rank_of_state(&rho, DEFAULT_RANK_TOL).rank;
        let after = match numeric_rho {
            Ok(r) => quantum::rank_of_state(&r, DEFAULT_RANK_TOL).rank,
            Err(_) => usize::MAX,
        };
        if before != after || quantum::rank_of_state(&exact_rho, DEFAULT_RANK_TOL).rank != before {
            rank_changes += 1;
        }
    }
    Ok((worst, rank_changes))
}

fn q_flow_oracle(ctx: &mut Ctx) -> Result<f64> {
    Ok(quantum_flow_cases(ctx)?.0)
}

fn q_rank_preserved(ctx: &mut Ctx) -> Result<f64> {
    Ok(count(quantum_flow_cases(ctx)?.1))
}

fn q_hamiltonian_tangency(ctx: &mut Ctx) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for n in [2, 3] {
        let g = ctx.geometry(n)?;
        let x0 = Poly::var(g.size(), 0);
        for a in g.basis().elements() {
            worst = worst.max(g.hamiltonian_field(a)?.apply(&x0).max_abs_coeff());
        }
    }
    Ok(worst)
}

fn q_gradient_witness(ctx: &mut Ctx) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for n in [2, 3] {
        let (_, _, y0) = ctx.geometry(n)?.gradient_non_tangency_witness()?;
        worst = worst.max((y0 - 1.0 / (n as f64).sqrt()).abs());
    }
    Ok(worst)
}

fn q_r_gradient_tangency(ctx: &mut Ctx) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for k in 0..50 {
        let n = 2 + k % 2;
        let g = ctx.geometry(n)?;
        let b = quantum::random_observable(n, &mut ctx.rng);
        let mut x: Vec<f64> = (0..g.size()).map(|_| ctx.uniform()).collect();
        x[0] = g.trace_one_x0();
        worst = worst.max(g.r_gradient_field(&b)?.component(0).eval(&x).abs());
    }
    Ok(worst)
}

fn q_gl_closure(ctx: &mut Ctx) -> Result<f64> {
    let g = ctx.geometry(2)?;
    let mut fields = Vec::new();
    for e in g.basis().elements() {
        fields.push(g.hamiltonian_field(e)?);
    }
    for e in g.basis().elements() {
        fields.push(g.gradient_field(e)?);
    }
    Ok(flow::closure_fit(&fields, &ClosureOptions::default())?.max_residual)
}

/// Fitted constants of `{X_{e^μ}}` for n = 2 against `k · c` with the best `k`.
pub fn hamiltonian_closure_scale(g: &QuantumGeometry) -> Result<(f64, f64)> {
    let fields: Vec<PolyVectorField> =
        g.basis().elements().iter().map(|e| g.hamiltonian_field(e)).collect::<Result<_>>()?;
    let report = flow::closure_fit(&fields, &ClosureOptions::default())?;
    let m = g.size();
    let sc = g.constants();
    // X_{e^0} vanishes, so only σ ≥ 1 is determined by the fit
    let (mut num, mut den) = (0.0, 0.0);
    for mu in 0..m {
        for nu in 0..m {
            for s in 1..m {
                num += report.constants[mu][nu][s] * sc.c(mu, nu, s);
                den += sc.c(mu, nu, s) * sc.c(mu, nu, s);
            }
        }
    }
    let k = num / den;
    let mut worst = report.max_residual;
    for mu in 0..m {
        for nu in 0..m {
            for s in 1..m {
                worst = worst.max((report.constants[mu][nu][s] - k * sc.c(mu, nu, s)).abs());
            }
        }
    }
    Ok((k, worst))
}

fn q_hamiltonian_closure(ctx: &mut Ctx) -> Result<f64> {
    let (k, worst) = hamiltonian_closure_scale(&ctx.geometry(2)?)?;
    if k.abs() < 1e-6 {
        return Ok(f64::INFINITY);
    }
    Ok(worst)
}

// ---------------------------------------------------------------- simplex

fn s_jacobi(ctx: &mut Ctx) -> Result<f64> {
    let lambda = simplex::simplex_lambda();
    let mut worst: f64 = 0.0;
    for _ in 0..200 {
        let (f, g, h) = (ctx.quadratic(3), ctx.quadratic(3), ctx.quadratic(3));
        worst = worst.max(lambda.jacobiator(&f, &g, &h).max_abs_coeff());
    }
    Ok(worst)
}

fn s_bracket(_: &mut Ctx) -> Result<f64> {
    let b = simplex::simplex_lambda().pair(&Poly::var(3, 0), &Poly::var(3, 1));
    Ok(b.max_abs_diff(&simplex::casimir(3)))
}

fn s_pushforward(_: &mut Ctx) -> Result<f64> {
    let l = simplex::x_chart_lambda();
    let expected = simplex::x_chart_casimir();
    let mut worst = l.component(0, 1).max_abs_diff(&expected);
    for i in 0..3 {
        for j in 0..3 {
            if (i, j) != (0, 1) && (i, j) != (1, 0) {
                worst = worst.max(l.component(i, j).max_abs_coeff());
            }
        }
    }
    Ok(worst)
}

fn s_killing(ctx: &mut Ctx) -> Result<f64> {
    let g = simplex::simplex_g();
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let x = simplex::hamiltonian_field_simplex(&Poly::linear(&ctx.vec3()))?;
        worst = worst.max(flow::lie_derivative_tensor(&x, &g).max_abs_coeff());
    }
    Ok(worst)
}

fn s_commute(ctx: &mut Ctx) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let (a, b) = (Poly::linear(&ctx.vec3()), Poly::linear(&ctx.vec3()));
        let (xa, xb) = (simplex::hamiltonian_field_simplex(&a)?, simplex::hamiltonian_field_simplex(&b)?);
        let (ya, yb) = (simplex::gradient_field_simplex(&a)?, simplex::gradient_field_simplex(&b)?);
        for (v, w) in [(&xa, &xb), (&xa, &yb), (&ya, &yb)] {
            worst = worst.max(flow::commutator(v, w).max_abs_coeff());
        }
    }
    Ok(worst)
}

fn s_casimir_drift(ctx: &mut Ctx) -> Result<f64> {
    let c = simplex::casimir(3);
    let mut worst: f64 = 0.0;
    for _ in 0..5 {
        let x = simplex::hamiltonian_field_simplex(&Poly::linear(&ctx.vec3()))?;
        let p0 = ctx.interior_point();
        let traj = flow::integrate(&x, &p0, 1.0, 1000)?;
        for p in traj.points() {
            worst = worst.max((c.eval(p) - 1.0).abs());
        }
    }
    Ok(worst)
}

/// Structure constants of the 2×2 matrices `A_i` under `[A x, B x] = (BA − AB) x`.
pub fn sl2_matrix_constants() -> Vec<Vec<Vec<f64>>> {
    let a = [
        DMatrix::from_row_slice(2, 2, &[0.0, -1.0, 1.0, 0.0]),
        DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0]),
        DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, -1.0]),
    ];
    let basis = DMatrix::from_columns(&a.iter().map(|m| DVector::from_column_slice(m.as_slice())).collect::<Vec<_>>());
    let mut out = vec![vec![vec![0.0; 3]; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            let comm = &a[j] * &a[i] - &a[i] * &a[j];
            let (x, _) = linalg::lstsq(&basis, &DVector::from_column_slice(comm.as_slice()));
            out[i][j] = x.iter().copied().collect();
        }
    }
    out
}

/// Fits the x-chart sl(2) triple on the leaf `x₃ = 0`; returns the worst of
/// the fit residual and the deviation from `C′ ·` the 2×2 matrix constants.
pub fn sl2_closure_deviation() -> Result<f64> {
    let fields: Vec<PolyVectorField> = simplex::quadratic_hamiltonians().into();
    let report = flow::closure_fit(&fields, &ClosureOptions { leaf: Some((2, 0.0)), prefactor: None })?;
    let c_prime = simplex::x_chart_casimir().eval(&[0.0, 0.0, 0.0]);
    let oracle = sl2_matrix_constants();
    let mut worst = report.max_residual;
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                worst = worst.max((report.constants[i][j][k] - c_prime * oracle[i][j][k]).abs());
            }
        }
    }
    Ok(worst)
}

fn s_sl2_closure(_: &mut Ctx) -> Result<f64> {
    sl2_closure_deviation()
}

fn s_isl2_closure(_: &mut Ctx) -> Result<f64> {
    let report = flow::closure_fit(&simplex::isl2_family(), &ClosureOptions { leaf: Some((2, 0.0)), prefactor: None })?;
    Ok(report.max_residual)
}

fn s_transitivity(ctx: &mut Ctx) -> Result<f64> {
    let [x1, x2] = simplex::translation_hamiltonians();
    let mut worst: f64 = 0.0;
    for _ in 0..5 {
        let start = [ctx.uniform(), ctx.uniform(), 0.0];
        let target = [ctx.uniform(), ctx.uniform(), 0.0];
        let (t1, t2) = simplex::leaf_translation_times(&start, &target)?;
        let mid = flow::flow_endpoint(&x1, &start, t1, 100)?;
        let end = flow::flow_endpoint(&x2, &mid, t2, 100)?;
        for k in 0..3 {
            worst = worst.max((end[k] - target[k]).abs());
        }
    }
    Ok(worst)
}

fn pi_jacobi(ctx: &mut Ctx) -> Result<f64> {
    let pi = simplex::pi_tensor();
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let (f, g, h) = (ctx.quadratic(3), ctx.quadratic(3), ctx.quadratic(3));
        worst = worst.max(pi.jacobiator(&f, &g, &h).max_abs_coeff());
    }
    Ok(worst)
}

fn pi_casimir(ctx: &mut Ctx) -> Result<f64> {
    let c = simplex::pi_casimir();
    let mut worst: f64 = 0.0;
    for _ in 0..5 {
        let x = simplex::pi_hamiltonian(&ctx.vec3());
        let p0 = ctx.interior_point();
        let end = flow::flow_endpoint(&x, &p0, 1.0, 1000)?;
        worst = worst.max((c.eval(&end) - c.eval(&p0)).abs());
    }
    Ok(worst)
}

fn pi_faces(ctx: &mut Ctx) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for j in 0..3 {
        let x = simplex::pi_hamiltonian(&ctx.vec3());
        let mut p0 = ctx.interior_point();
        p0[j] = 0.0;
        let traj = flow::integrate(&x, &p0, 1.0, 1000)?;
        for p in traj.points() {
            worst = worst.max(p[j].abs());
        }
    }
    Ok(worst)
}

fn pi_log_chart(ctx: &mut Ctx) -> Result<f64> {
    let pi = simplex::pi_tensor();
    let target = simplex::constant_cyclic_bivector();
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let p = ctx.interior_point();
        let t = simplex::pushforward_at(&pi, &Chart::Log(3), &p)?;
        worst = worst.max((t - &target).amax());
    }
    Ok(worst)
}

fn s_fisher_rao(ctx: &mut Ctx) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let p = ProbabilityVector::new(ctx.interior_point().to_vec())?;
        let gp = simplex::fisher_rao(&p, &Chart::P(3))?;
        let gl = simplex::fisher_rao(&p, &Chart::Log(3))?;
        let k = Chart::Log(3).inverse_jacobian(p.values())?;
        worst = worst.max((k.transpose() * gp * k - gl).amax());
    }
    Ok(worst)
}

fn s_general_casimir(_: &mut Ctx) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for n in [3, 4, 5] {
        let c = simplex::casimir(n);
        for t in [simplex::general_lambda_n(n)?, simplex::general_g_n(n)?] {
            worst = worst.max(t.field_of(&c).max_abs_coeff());
        }
    }
    Ok(worst)
}

fn s_general_commute(ctx: &mut Ctx) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for n in [3, 4, 5] {
        let (l, g) = (simplex::general_lambda_n(n)?, simplex::general_g_n(n)?);
        for _ in 0..5 {
            let a = Poly::linear(&(0..n).map(|_| ctx.uniform()).collect::<Vec<_>>());
            let b = Poly::linear(&(0..n).map(|_| ctx.uniform()).collect::<Vec<_>>());
            let fields = [l.field_of(&a), l.field_of(&b), g.field_of(&a), g.field_of(&b)];
            for v in &fields {
                for w in &fields {
                    worst = worst.max(flow::commutator(v, w).max_abs_coeff());
                }
            }
        }
    }
    Ok(worst)
}

/// `Λ₃ = 3Λ` and `G₃ = −G` for the cyclic-pair construction.
pub const GENERAL_N3_LAMBDA_FACTOR: f64 = 3.0;
pub const GENERAL_N3_G_FACTOR: f64 = -1.0;

fn s_general_fixture(_: &mut Ctx) -> Result<f64> {
    let l = simplex::general_lambda_n(3)?.max_abs_diff(&simplex::simplex_lambda().scale(GENERAL_N3_LAMBDA_FACTOR));
    let g = simplex::general_g_n(3)?.max_abs_diff(&simplex::simplex_g().scale(GENERAL_N3_G_FACTOR));
    Ok(l.max(g))
}

// ---------------------------------------------------------------- algebra

fn a_lie_table(_: &mut Ctx) -> Result<f64> {
    let e = algebra::e_basis();
    let zero = LinearFunctional::zero();
    Ok([
        algebra::lie_bracket_fn(&e[0], &e[1]).max_abs_diff(&e[2]),
        algebra::lie_bracket_fn(&e[0], &e[2]).max_abs_diff(&zero),
        algebra::lie_bracket_fn(&e[1], &e[2]).max_abs_diff(&zero),
    ]
    .into_iter()
    .fold(0.0, f64::max))
}

fn a_jordan_table(_: &mut Ctx) -> Result<f64> {
    let e = algebra::e_basis();
    let mut worst = algebra::jordan_fn(&e[0], &e[0]).max_abs_diff(&e[2].scale(2.0));
    worst = worst.max(algebra::jordan_fn(&e[1], &e[1]).max_abs_diff(&e[2].scale(2.0)));
    worst = worst.max(algebra::jordan_fn(&e[0], &e[1]).max_abs_diff(&e[2].scale(-1.0)));
    for ej in &e {
        worst = worst.max(algebra::jordan_fn(&e[2], ej).max_abs_diff(&LinearFunctional::zero()));
    }
    Ok(worst)
}

fn a_star_table(_: &mut Ctx) -> Result<f64> {
    let e = algebra::e_basis().map(ComplexFunctional::real);
    let half_e3 = e[2].scale(Complex64::new(0.5, 0.0));
    let expected = half_e3.scale(Complex64::new(-1.0, 1.0));
    let zero = ComplexFunctional::real(LinearFunctional::zero());
    let mut worst = algebra::star_product(&e[0], &e[1]).max_abs_diff(&expected);
    for ej in &e {
        worst = worst.max(algebra::star_product(&e[2], ej).max_abs_diff(&zero));
        worst = worst.max(algebra::star_product(ej, &e[2]).max_abs_diff(&zero));
    }
    Ok(worst)
}

fn a_associativity(ctx: &mut Ctx) -> Result<f64> {
    let zero = ComplexFunctional::real(LinearFunctional::zero());
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let (f, g, h) = (ctx.complex_functional(), ctx.complex_functional(), ctx.complex_functional());
        worst = worst.max(algebra::star_associator(&f, &g, &h).max_abs_diff(&zero));
    }
    Ok(worst)
}

fn random_real(ctx: &mut Ctx) -> LinearFunctional {
    LinearFunctional::new(ctx.vec3())
}

fn a_jordan_identity(ctx: &mut Ctx) -> Result<f64> {
    use algebra::jordan_fn as j;
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let (f, g) = (random_real(ctx), random_real(ctx));
        let ff = j(&f, &f);
        worst = worst.max(j(&j(&f, &g), &ff).max_abs_diff(&j(&f, &j(&g, &ff))));
    }
    Ok(worst)
}

fn a_derivation(ctx: &mut Ctx) -> Result<f64> {
    use algebra::{jordan_fn as j, lie_bracket_fn as l};
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let (f, g, h) = (random_real(ctx), random_real(ctx), random_real(ctx));
        let lhs = l(&f, &j(&g, &h));
        let rhs = j(&l(&f, &g), &h).add(&j(&g, &l(&f, &h)));
        worst = worst.max(lhs.max_abs_diff(&rhs));
    }
    Ok(worst)
}

fn a_associator(ctx: &mut Ctx) -> Result<f64> {
    use algebra::{jordan_fn as j, lie_bracket_fn as l};
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let (f, g, h) = (random_real(ctx), random_real(ctx), random_real(ctx));
        let lhs = j(&j(&f, &g), &h).add(&j(&f, &j(&g, &h)).scale(-1.0));
        worst = worst.max(lhs.max_abs_diff(&l(&g, &l(&h, &f))));
    }
    Ok(worst)
}

fn a_no_unit(_: &mut Ctx) -> Result<f64> {
    Ok(if algebra::no_unit_certificate().proves_no_unit() { 0.0 } else { 1.0 })
}

// ---------------------------------------------------------------- stochastic

fn st_fixtures(_: &mut Ctx) -> Result<f64> {
    let mut bad = 0;
    let id = stochastic::classify(&RealMatrix3::identity());
    bad += usize::from(!(id.pseudo_stochastic && id.stochastic && id.bistochastic && id.invertible && id.unit_determinant));
    for p in stochastic::permutation_matrices() {
        let c = stochastic::classify(&p);
        bad += usize::from(!(c.bistochastic && c.invertible));
    }
    let a = RealMatrix3::new(1.5, 0.0, 0.0, -0.5, 1.0, 0.0, 0.0, 0.0, 1.0);
    let c = stochastic::classify(&a);
    bad += usize::from(!(c.pseudo_stochastic && !c.stochastic));
    Ok(count(bad))
}

fn column_sum_defect(a: &RealMatrix3) -> f64 {
    (0..3).map(|j| (a.column(j).sum() - 1.0).abs()).fold(0.0, f64::max)
}

fn st_unit_det(_: &mut Ctx) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for g in simplex::quadratic_hamiltonians() {
        let a = stochastic::isl2_exponential(&g, 1.0)?;
        worst = worst.max((a.determinant() - 1.0).abs()).max(column_sum_defect(&a));
    }
    Ok(worst)
}

fn st_hyperplane(ctx: &mut Ctx) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for g in simplex::isl2_family() {
        let a = stochastic::isl2_exponential(&g, ctx.uniform())?;
        for _ in 0..5 {
            let p = nalgebra::Vector3::from(ctx.vec3());
            let p = p.add_scalar((1.0 - p.sum()) / 3.0);
            worst = worst.max(((a * p).sum() - 1.0).abs());
        }
    }
    Ok(worst)
}

fn st_composition(ctx: &mut Ctx) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for g in simplex::isl2_family() {
        let (t1, t2) = (0.5 * ctx.uniform(), 0.5 * ctx.uniform());
        let lhs = stochastic::isl2_exponential(&g, t1)? * stochastic::isl2_exponential(&g, t2)?;
        let rhs = stochastic::isl2_exponential(&g, t1 + t2)?;
        worst = worst.max((lhs - rhs).amax());
    }
    Ok(worst)
}

fn random_pseudo_stochastic(ctx: &mut Ctx) -> RealMatrix3 {
    let mut a = RealMatrix3::from_fn(|_, _| 2.0 * ctx.uniform());
    for j in 0..3 {
        let s = a.column(j).sum();
        a[(2, j)] += 1.0 - s;
    }
    a
}

fn st_escape(ctx: &mut Ctx) -> Result<f64> {
    let mut bad = 0;
    for _ in 0..50 {
        let a = random_pseudo_stochastic(ctx);
        let stochastic = stochastic::classify(&a).stochastic;
        match stochastic::positivity_escape_witness(&a) {
            Some(p) => {
                let image = a * nalgebra::Vector3::from_column_slice(p.values());
                bad += usize::from(stochastic || image.min() >= 0.0 || !p.in_simplex());
            }
            None => bad += usize::from(!stochastic),
        }
    }
    Ok(count(bad))
}

fn random_stochastic(ctx: &mut Ctx) -> RealMatrix3 {
    let mut a = RealMatrix3::from_fn(|_, _| ctx.rng.random::<f64>());
    for j in 0..3 {
        let s = a.column(j).sum();
        a.column_mut(j).scale_mut(1.0 / s);
    }
    a
}

fn st_semigroup(ctx: &mut Ctx) -> Result<f64> {
    let mut bad = 0;
    for _ in 0..50 {
        let (a, b) = (random_stochastic(ctx), random_stochastic(ctx));
        let w = ctx.rng.random::<f64>();
        bad += usize::from(!stochastic::classify(&(a * b)).stochastic);
        bad += usize::from(!stochastic::classify(&(a * w + b * (1.0 - w))).stochastic);
        let (p, q) = (random_pseudo_stochastic(ctx), random_pseudo_stochastic(ctx));
        bad += usize::from(!stochastic::classify(&(p * q)).pseudo_stochastic);
    }
    Ok(count(bad))
}

fn st_birkhoff(_: &mut Ctx) -> Result<f64> {
    let mesh = stochastic::birkhoff_mesh(6);
    let mut bad = stochastic::birkhoff_inverse_violations(&mesh).len();
    let b = RealMatrix3::from_element(1.0 / 9.0) + RealMatrix3::identity() * (2.0 / 3.0);
    bad += usize::from(stochastic::bistochastic_inverse_probe(&b)?.inverse_bistochastic);
    Ok(count(bad))
}

fn st_dimension(_: &mut Ctx) -> Result<f64> {
    Ok(count(stochastic::pseudo_stochastic_tangent_dimension().abs_diff(6)))
}

// ---------------------------------------------------------------- contraction

fn c_lambda0(_: &mut Ctx) -> Result<f64> {
    Ok(contraction::bivector_from_casimir(0.0).max_abs_diff(&simplex::simplex_lambda()))
}

fn c_lambda1(_: &mut Ctx) -> Result<f64> {
    let t = contraction::bivector_from_casimir(1.0);
    let mut worst: f64 = 0.0;
    for (i, j, k) in [(0, 1, 2), (1, 2, 0), (2, 0, 1)] {
        worst = worst.max(t.component(i, j).max_abs_diff(&Poly::var(3, k)));
    }
    Ok(worst)
}

const LAMBDA_SAMPLES: [f64; 5] = [0.0, 0.25, 0.5, 0.75, 1.0];

fn c_central(_: &mut Ctx) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for l in LAMBDA_SAMPLES {
        let t = contraction::bivector_from_casimir(l);
        worst = worst.max(t.field_of(&contraction::casimir_poly(l)).max_abs_coeff());
    }
    Ok(worst)
}

fn c_jacobi(ctx: &mut Ctx) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for l in [0.0, 0.3, 0.7, 1.0] {
        let t = contraction::bivector_from_casimir(l);
        for _ in 0..20 {
            let (f, g, h) = (ctx.quadratic(3), ctx.quadratic(3), ctx.quadratic(3));
            worst = worst.max(t.jacobiator(&f, &g, &h).max_abs_coeff());
        }
    }
    Ok(worst)
}

pub const FLATNESS_GRID: usize = 12;

/// Deviation at `λ = 0` plus the largest increase of the profile as `λ` decreases.
fn c_flatness(_: &mut Ctx) -> Result<f64> {
    let profile: Vec<f64> = LAMBDA_SAMPLES
        .iter()
        .map(|&l| contraction::flatness_profile(l, FLATNESS_GRID).map(|p| p.max_deviation))
        .collect::<Result<_>>()?;
    let increase = profile.windows(2).map(|w| (w[0] - w[1]).max(0.0)).fold(0.0, f64::max);
    Ok(profile[0].abs().max(increase))
}

fn c_conservation(ctx: &mut Ctx) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for l in LAMBDA_SAMPLES {
        let t = contraction::bivector_from_casimir(l);
        let c = contraction::casimir_poly(l);
        let x = t.field_of(&Poly::linear(&ctx.vec3()));
        let x0 = ctx.vec3();
        let end = flow::flow_endpoint(&x, &x0, 1.0, 1000)?;
        worst = worst.max((c.eval(&end) - c.eval(&x0)).abs());
    }
    Ok(worst)
}

/// λ = 1: `[X_{x_i}, X_{x_j}] = ±ε_{ijk} X_{x_k}`; λ = 0: the fields commute.
pub fn contraction_closure_constants(lambda: f64) -> Result<flow::ClosureReport> {
    let fields: Vec<PolyVectorField> = contraction::coordinate_hamiltonians(lambda).into();
    flow::closure_fit(&fields, &ClosureOptions::default())
}

fn c_closure(_: &mut Ctx) -> Result<f64> {
    let su2 = contraction_closure_constants(1.0)?;
    let heis = contraction_closure_constants(0.0)?;
    let mut worst = su2.max_residual.max(heis.max_residual);
    // fix the overall sign from one entry, then compare with ε
    let sign = su2.constants[0][1][2].signum();
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                let eps = match (i, j, k) {
                    (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1.0,
                    (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -1.0,
                    _ => 0.0,
                };
                worst = worst.max((su2.constants[i][j][k] - sign * eps).abs());
                worst = worst.max(heis.constants[i][j][k].abs());
            }
        }
    }
    Ok(worst)
}
