//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on failure.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use dequant::algebra::{self, ComplexFunctional, LinearFunctional};
use dequant::checks::{self, Suite, SuiteOptions};
use dequant::contraction;
use dequant::field::PolyVectorField;
use dequant::flow::{self, ClosureOptions};
use dequant::linalg;
use dequant::operator;
use dequant::quantum::{self, QuantumGeometry, DEFAULT_RANK_TOL};
use dequant::simplex::{self, Chart, ProbabilityVector};
use dequant::Poly;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Verdict {
    passed: bool,
    detail: String,
}

fn verdict(passed: bool, detail: impl Into<String>) -> Verdict {
    Verdict { passed, detail: detail.into() }
}

fn uniform(r: &mut ChaCha8Rng) -> f64 {
    r.random::<f64>() * 2.0 - 1.0
}

/// Multiples of 1/8 in [-2, 2]: products and sums of these stay exact.
fn dyadic(r: &mut ChaCha8Rng) -> f64 {
    r.random_range(-16i32..=16) as f64 / 8.0
}

fn quadratic(r: &mut ChaCha8Rng) -> Poly {
    let mut p = Poly::constant(3, uniform(r));
    for i in 0..3 {
        p = &p + &Poly::var(3, i).scale(uniform(r));
        for j in i..3 {
            p = &p + &(&Poly::var(3, i) * &Poly::var(3, j)).scale(uniform(r));
        }
    }
    p
}

fn interior(r: &mut ChaCha8Rng) -> [f64; 3] {
    let w = [0.1 + r.random::<f64>(), 0.1 + r.random::<f64>(), 0.1 + r.random::<f64>()];
    let s: f64 = w.iter().sum();
    w.map(|x| x / s)
}

fn structure_constant_fixtures() -> Verdict {
    let mut identity_row: f64 = 0.0;
    for n in [2, 3, 4] {
        let sc = operator::structure_constants(&operator::gellmann_basis(n).unwrap()).unwrap();
        let m = n * n;
        let s = 1.0 / (n as f64).sqrt();
        for mu in 0..m {
            for nu in 0..m {
                identity_row = identity_row.max((sc.d(mu, nu, 0) - if mu == nu { s } else { 0.0 }).abs());
                identity_row = identity_row.max(sc.c(0, mu, nu).abs());
            }
        }
    }
    let mut r = ChaCha8Rng::seed_from_u64(1);
    let mut invariance: f64 = 0.0;
    for k in 0..20 {
        let n = [2, 3, 4][k % 3];
        let basis = operator::gellmann_basis(n).unwrap();
        let sc = operator::structure_constants(&basis).unwrap();
        let u = linalg::random_unitary(n, &mut r);
        invariance = invariance.max(operator::conjugated_structure_constants(&basis, &u).unwrap().max_abs_diff(&sc));
    }
    verdict(
        identity_row < 1e-12 && invariance < 1e-9,
        format!("identity row {identity_row:.2e} (<1e-12), unitary invariance {invariance:.2e} (<1e-9)"),
    )
}

fn quantum_flow_oracle() -> Verdict {
    let mut r = ChaCha8Rng::seed_from_u64(2);
    let mut worst: f64 = 0.0;
    let mut rank_changes = 0;
    for k in 0..25 {
        let n = 2 + k % 2;
        let g = QuantumGeometry::new(n).unwrap();
        let a = quantum::random_observable(n, &mut r);
        let b = quantum::random_observable(n, &mut r);
        let rank = 1 + k % n;
        let rho = quantum::random_density_matrix(n, rank, &mut r);
        let field = g.hamiltonian_field(&a).unwrap().add(&g.r_gradient_field(&b).unwrap());
        let x0 = g.coordinates(&rho.as_dual_point()).unwrap();
        let numeric = flow::flow_endpoint(&field, &x0, 1.0, 1000).unwrap();
        let exact_rho = quantum::closed_form_flow(&a, &b, &rho, 1.0).unwrap();
        let exact = g.coordinates(&exact_rho.as_dual_point()).unwrap();
        worst = worst.max(numeric.iter().zip(&exact).map(|(u, v)| (u - v).powi(2)).sum::<f64>().sqrt());
        let numeric_rho = quantum::DensityMatrix::new(g.point(&numeric).unwrap().operator().clone()).unwrap();
        let ranks = [&rho, &exact_rho, &numeric_rho].map(|s| quantum::rank_of_state(s, DEFAULT_RANK_TOL).rank);
        if ranks.iter().any(|&x| x != rank) {
            rank_changes += 1;
        }
    }
    verdict(
        worst < 1e-8 && rank_changes == 0,
        format!("max endpoint distance {worst:.2e} (<1e-8), rank changes {rank_changes}/25"),
    )
}

fn tangency_dichotomy() -> Verdict {
    let mut hamiltonian: f64 = 0.0;
    let mut witnesses = Vec::new();
    let mut leaf: f64 = 0.0;
    let mut r = ChaCha8Rng::seed_from_u64(3);
    for n in [2, 3] {
        let g = QuantumGeometry::new(n).unwrap();
        let x0 = Poly::var(g.size(), 0);
        for a in g.basis().elements() {
            hamiltonian = hamiltonian.max(g.hamiltonian_field(a).unwrap().apply(&x0).max_abs_coeff());
        }
        let (_, xi, y0) = g.gradient_non_tangency_witness().unwrap();
        // independent evaluation: Y_𝕀(x⁰) at ξ = 𝕀/n is Tr(ξ)/√n
        let oracle = xi.operator().trace() / (n as f64).sqrt();
        witnesses.push((y0, oracle));
        for _ in 0..25 {
            let b = quantum::random_observable(n, &mut r);
            let mut x: Vec<f64> = (0..g.size()).map(|_| uniform(&mut r)).collect();
            x[0] = g.trace_one_x0();
            leaf = leaf.max(g.r_gradient_field(&b).unwrap().component(0).eval(&x).abs());
        }
    }
    let witness_ok = witnesses.iter().all(|(y, o)| y.abs() > 0.1 && (y - o).abs() < 1e-12);
    verdict(
        hamiltonian == 0.0 && witness_ok && leaf < 1e-10,
        format!(
            "X_a(x0) max coeff {hamiltonian:.1e} (exact 0), witness Y^0 = {:.6} / {:.6} (n=2/3), R-gradient on leaf {leaf:.2e} (<1e-10, 50 points)",
            witnesses[0].0, witnesses[1].0
        ),
    )
}

fn simplex_poisson_suite() -> Verdict {
    let lambda = simplex::simplex_lambda();
    let mut r = ChaCha8Rng::seed_from_u64(4);
    let mut jacobi: f64 = 0.0;
    for _ in 0..200 {
        let (f, g, h) = (quadratic(&mut r), quadratic(&mut r), quadratic(&mut r));
        jacobi = jacobi.max(lambda.jacobiator(&f, &g, &h).max_abs_coeff());
    }
    let c = Poly::linear(&[1.0, 1.0, 1.0]);
    let bracket = lambda.pair(&Poly::var(3, 0), &Poly::var(3, 1)).max_abs_diff(&c);
    let pushed = simplex::x_chart_lambda();
    let three_quarters = Poly::affine(0.75, &[0.0, 0.0, 0.75]);
    let mut push_err = pushed.component(0, 1).max_abs_diff(&three_quarters);
    for i in 0..3 {
        for j in 0..3 {
            if i != j && (i, j) != (0, 1) && (i, j) != (1, 0) || i == j {
                push_err = push_err.max(pushed.component(i, j).max_abs_coeff());
            }
        }
    }
    verdict(
        jacobi < 1e-10 && bracket == 0.0 && push_err < 1e-12,
        format!("Jacobi {jacobi:.2e} (<1e-10, 200 triples), {{p1,p2}} - C = {bracket:.1e}, x-chart pushforward error {push_err:.1e} (<1e-12)"),
    )
}

fn closure_fits() -> Verdict {
    let leaf = ClosureOptions { leaf: Some((2, 0.0)), prefactor: None };
    let triple = flow::closure_fit(&simplex::quadratic_hamiltonians().to_vec(), &leaf).unwrap();
    // oracle: 2×2 matrix commutators of the linear parts, scaled by C′ = 3/4 on the leaf
    let oracle = checks::sl2_matrix_constants();
    let mut sl2_dev: f64 = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                sl2_dev = sl2_dev.max((triple.constants[i][j][k] - 0.75 * oracle[i][j][k]).abs());
            }
        }
    }
    let isl2 = flow::closure_fit(&simplex::isl2_family(), &leaf).unwrap();
    let g = QuantumGeometry::new(2).unwrap();
    let mut fields: Vec<PolyVectorField> = g.basis().elements().iter().map(|e| g.hamiltonian_field(e).unwrap()).collect();
    fields.extend(g.basis().elements().iter().map(|e| g.gradient_field(e).unwrap()));
    let gl = flow::closure_fit(&fields, &ClosureOptions::default()).unwrap();
    verdict(
        triple.max_residual < 1e-10 && sl2_dev < 1e-10 && isl2.max_residual < 1e-10 && gl.max_residual < 1e-10,
        format!(
            "sl(2) residual {:.1e}, deviation from matrix oracle {sl2_dev:.1e}; isl(2) residual {:.1e}; quantum X/Y residual {:.1e} (all <1e-10)",
            triple.max_residual, isl2.max_residual, gl.max_residual
        ),
    )
}

fn killing_and_commutativity() -> Verdict {
    let g = simplex::simplex_g();
    let mut r = ChaCha8Rng::seed_from_u64(6);
    let mut nonzero = 0;
    for _ in 0..50 {
        let a = Poly::linear(&[dyadic(&mut r), dyadic(&mut r), dyadic(&mut r)]);
        let b = Poly::linear(&[dyadic(&mut r), dyadic(&mut r), dyadic(&mut r)]);
        let xa = simplex::hamiltonian_field_simplex(&a).unwrap();
        let xb = simplex::hamiltonian_field_simplex(&b).unwrap();
        let ya = simplex::gradient_field_simplex(&a).unwrap();
        let yb = simplex::gradient_field_simplex(&b).unwrap();
        nonzero += usize::from(!flow::lie_derivative_tensor(&xa, &g).is_zero());
        for (v, w) in [(&xa, &xb), (&xa, &yb), (&ya, &yb)] {
            nonzero += usize::from(!flow::commutator(v, w).is_zero());
        }
    }
    verdict(nonzero == 0, format!("{nonzero} nonzero coefficient arrays among 200 exact evaluations"))
}

fn lie_jordan_fixtures() -> Verdict {
    let e = algebra::e_basis();
    let ce = e.map(ComplexFunctional::real);
    let tables = [
        algebra::lie_bracket_fn(&e[0], &e[1]).max_abs_diff(&e[2]),
        algebra::jordan_fn(&e[0], &e[0]).max_abs_diff(&e[2].scale(2.0)),
        algebra::jordan_fn(&e[0], &e[1]).max_abs_diff(&e[2].scale(-1.0)),
        algebra::star_product(&ce[0], &ce[1]).max_abs_diff(&ComplexFunctional::new(e[2].scale(-0.5), e[2].scale(0.5))),
    ]
    .into_iter()
    .fold(0.0, f64::max);
    let mut r = ChaCha8Rng::seed_from_u64(7);
    let random = |r: &mut ChaCha8Rng| {
        ComplexFunctional::from_coefficients([0, 1, 2].map(|_| Complex64::new(uniform(r), uniform(r))))
    };
    let zero = ComplexFunctional::real(LinearFunctional::zero());
    let mut assoc: f64 = 0.0;
    for _ in 0..100 {
        let (f, g, h) = (random(&mut r), random(&mut r), random(&mut r));
        assoc = assoc.max(algebra::star_associator(&f, &g, &h).max_abs_diff(&zero));
    }
    let cert = algebra::no_unit_certificate();
    verdict(
        tables < 1e-15 && assoc < 1e-12 && cert.proves_no_unit(),
        format!(
            "table error {tables:.1e} (1/sqrt(3) rounding only), associator {assoc:.1e} (<1e-12), no-unit ranks {} < {}",
            cert.rank_system, cert.rank_augmented
        ),
    )
}

fn pi_suite() -> Verdict {
    let mut r = ChaCha8Rng::seed_from_u64(8);
    let casimir = simplex::pi_casimir();
    let mut drift: f64 = 0.0;
    let mut face: f64 = 0.0;
    for k in 0..6 {
        let a = [uniform(&mut r), uniform(&mut r), uniform(&mut r)];
        let x = simplex::pi_hamiltonian(&a);
        let mut p0 = interior(&mut r);
        if k >= 3 {
            p0[k - 3] = 0.0;
        }
        let traj = flow::integrate(&x, &p0, 1.0, 1000).unwrap();
        for p in traj.points() {
            drift = drift.max((casimir.eval(p) - casimir.eval(&p0)).abs());
            if k >= 3 {
                face = face.max(p[k - 3].abs());
            }
        }
    }
    let pi = simplex::pi_tensor();
    let constant = nalgebra::DMatrix::from_row_slice(3, 3, &[0.0, 1.0, -1.0, -1.0, 0.0, 1.0, 1.0, -1.0, 0.0]);
    let mut log_err: f64 = 0.0;
    let mut fisher: f64 = 0.0;
    for _ in 0..20 {
        let p = interior(&mut r);
        log_err = log_err.max((simplex::pushforward_at(&pi, &Chart::Log(3), &p).unwrap() - &constant).amax());
        let pv = ProbabilityVector::new(p.to_vec()).unwrap();
        let gp = simplex::fisher_rao(&pv, &Chart::P(3)).unwrap();
        let gl = simplex::fisher_rao(&pv, &Chart::Log(3)).unwrap();
        let k = nalgebra::DMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(&p));
        fisher = fisher.max((k.transpose() * gp * k - gl).amax());
    }
    verdict(
        drift < 1e-8 && face < 1e-10 && log_err < 1e-8 && fisher < 1e-10,
        format!("Casimir drift {drift:.1e} (<1e-8), face drift {face:.1e} (<1e-10), log chart {log_err:.1e} (<1e-8), Fisher-Rao {fisher:.1e} (<1e-10)"),
    )
}

fn general_n() -> Verdict {
    let mut r = ChaCha8Rng::seed_from_u64(9);
    let mut casimir: f64 = 0.0;
    let mut commute: f64 = 0.0;
    for n in [3, 4, 5] {
        let c = Poly::linear(&vec![1.0; n]);
        let (l, g) = (simplex::general_lambda_n(n).unwrap(), simplex::general_g_n(n).unwrap());
        casimir = casimir.max(l.field_of(&c).max_abs_coeff()).max(g.field_of(&c).max_abs_coeff());
        for _ in 0..5 {
            let a = Poly::linear(&(0..n).map(|_| uniform(&mut r)).collect::<Vec<_>>());
            let b = Poly::linear(&(0..n).map(|_| uniform(&mut r)).collect::<Vec<_>>());
            let fields = [l.field_of(&a), l.field_of(&b), g.field_of(&a), g.field_of(&b)];
            for v in &fields {
                for w in &fields {
                    commute = commute.max(flow::commutator(v, w).max_abs_coeff());
                }
            }
        }
    }
    let l3 = simplex::general_lambda_n(3).unwrap().max_abs_diff(&simplex::simplex_lambda().scale(3.0));
    let g3 = simplex::general_g_n(3).unwrap().max_abs_diff(&simplex::simplex_g().scale(-1.0));
    verdict(
        casimir < 1e-12 && commute < 1e-12 && l3 == 0.0 && g3 == 0.0,
        format!("dC annihilation {casimir:.1e}, commutators {commute:.1e}, n=3 fixture: Lambda_3 = 3 Lambda ({l3:.0e}), G_3 = -G ({g3:.0e})"),
    )
}

fn contraction_endpoints() -> Verdict {
    let lambda0 = contraction::bivector_from_casimir(0.0).max_abs_diff(&simplex::simplex_lambda());
    let su2 = contraction::bivector_from_casimir(1.0);
    let mut lambda1: f64 = 0.0;
    for (i, j, k) in [(0, 1, 2), (1, 2, 0), (2, 0, 1)] {
        lambda1 = lambda1.max(su2.component(i, j).max_abs_diff(&Poly::var(3, k)));
    }
    let profile: Vec<f64> = [0.0, 0.25, 0.5, 0.75, 1.0]
        .iter()
        .map(|&l| contraction::flatness_profile(l, 12).unwrap().max_deviation)
        .collect();
    let monotone = profile.windows(2).all(|w| w[0] <= w[1]);
    // scalar bisection along the normal through the barycenter at λ = 1
    let mut lo = 0.0;
    let mut hi = 1.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let x = 1.0 / 3.0 + mid / 3f64.sqrt();
        if contraction::casimir_value(1.0, &[x, x, x]) < 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let barycenter = (profile[4] - lo).abs();
    let start = Instant::now();
    let outcomes = checks::run_suite(Suite::All, &SuiteOptions::default());
    let elapsed = start.elapsed();
    let suite_ok = outcomes.iter().all(|o| o.passed);
    verdict(
        lambda0 == 0.0 && lambda1 == 0.0 && profile[0] == 0.0 && monotone && barycenter < 1e-12 && suite_ok
            && elapsed < Duration::from_secs(120),
        format!(
            "lambda=0 diff {lambda0:.0e}, lambda=1 diff {lambda1:.0e}, profile {:?}, barycenter oracle {barycenter:.1e}, check all: {}/{} pass in {:.2} s (<120 s)",
            profile.iter().map(|d| format!("{d:.4}")).collect::<Vec<_>>(),
            outcomes.iter().filter(|o| o.passed).count(),
            outcomes.len(),
            elapsed.as_secs_f64()
        ),
    )
}

fn main() -> ExitCode {
    let criteria: [(&str, Option<u64>, fn() -> Verdict); 10] = [
        ("structure-constant fixtures", Some(5), structure_constant_fixtures),
        ("quantum flow oracle", Some(30), quantum_flow_oracle),
        ("tangency dichotomy", None, tangency_dichotomy),
        ("simplex Poisson suite", None, simplex_poisson_suite),
        ("closure fits", None, closure_fits),
        ("Killing and commutativity", None, killing_and_commutativity),
        ("Lie-Jordan fixtures", None, lie_jordan_fixtures),
        ("Pi suite", None, pi_suite),
        ("generalization to n outcomes", None, general_n),
        ("contraction endpoints", Some(120), contraction_endpoints),
    ];
    let mut failures = 0;
    for (i, (name, budget, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let v = run();
        let secs = start.elapsed().as_secs_f64();
        let in_time = budget.is_none_or(|b| secs < b as f64);
        let passed = v.passed && in_time;
        failures += usize::from(!passed);
        let budget_note = budget.map(|b| format!(", budget {b} s")).unwrap_or_default();
        println!(
            "{} [{}] {name}: {} ({secs:.2} s{budget_note})",
            if passed { "PASS" } else { "FAIL" },
            i + 1,
            v.detail
        );
    }
    println!("{} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
