//! Numerical oracles for the exact coefficient calculus and the closed-form flows.

use dequant::field::{PolyTensorField, PolyVectorField};
use dequant::flow::{self, ClosureOptions};
use dequant::operator::HermitianOperator;
use dequant::quantum::{self, QuantumGeometry};
use dequant::{simplex, Poly};
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn uniform(r: &mut ChaCha8Rng) -> f64 {
    r.random::<f64>() * 2.0 - 1.0
}

fn random_quadratic_field(dim: usize, r: &mut ChaCha8Rng) -> PolyVectorField {
    let comps = (0..dim)
        .map(|_| {
            let mut p = Poly::constant(dim, uniform(r));
            for i in 0..dim {
                p = &p + &Poly::var(dim, i).scale(uniform(r));
                for j in i..dim {
                    p = &p + &(&Poly::var(dim, i) * &Poly::var(dim, j)).scale(0.5 * uniform(r));
                }
            }
            p
        })
        .collect();
    PolyVectorField::new(comps)
}

fn step(v: &PolyVectorField, x: &[f64], t: f64) -> Vec<f64> {
    flow::flow_endpoint(v, x, t, 20).unwrap()
}

/// `(φ^W_{-h} φ^V_{-h} φ^W_h φ^V_h(x) − x) / h²`.
fn group_commutator_quotient(v: &PolyVectorField, w: &PolyVectorField, x: &[f64], h: f64) -> Vec<f64> {
    let y = step(w, &step(v, &step(w, &step(v, x, h), h), -h), -h);
    y.iter().zip(x).map(|(a, b)| (a - b) / (h * h)).collect()
}

#[test]
fn commutator_matches_composed_flows() {
    let mut r = rng(11);
    for _ in 0..5 {
        let v = random_quadratic_field(3, &mut r);
        let w = random_quadratic_field(3, &mut r);
        let x: Vec<f64> = (0..3).map(|_| 0.5 * uniform(&mut r)).collect();
        let h = 1e-3;
        let coarse = group_commutator_quotient(&v, &w, &x, h);
        let fine = group_commutator_quotient(&v, &w, &x, h / 2.0);
        let exact = flow::commutator(&v, &w).eval(&x);
        for i in 0..3 {
            let richardson = 2.0 * fine[i] - coarse[i];
            assert!((richardson - exact[i]).abs() < 1e-5, "{richardson} vs {}", exact[i]);
        }
    }
}

#[test]
fn linear_commutator_is_matrix_commutator() {
    let mut r = rng(12);
    let m = DMatrix::from_fn(3, 3, |_, _| uniform(&mut r));
    let n = DMatrix::from_fn(3, 3, |_, _| uniform(&mut r));
    let got = flow::commutator(&PolyVectorField::linear(&m), &PolyVectorField::linear(&n));
    let expected = PolyVectorField::linear(&(&n * &m - &m * &n));
    assert!(got.max_abs_diff(&expected) < 1e-15);
    assert!(flow::commutator(&got, &got).is_zero());
}

/// Lifts a polynomial on `ℝ^m` to `ℝ^{m + m²}` (first `m` coordinates).
fn lift(p: &Poly, total: usize) -> Poly {
    let images: Vec<Poly> = (0..p.dim()).map(|i| Poly::var(total, i)).collect();
    p.compose(&images)
}

/// `ẏ = V(y)`, `Ṁ = DV(y) M` on `(y, M)` with `M` stored row-major.
fn variational_system(v: &PolyVectorField) -> PolyVectorField {
    let m = v.dim();
    let total = m + m * m;
    let dv = v.jacobian();
    let mut comps: Vec<Poly> = v.components().iter().map(|p| lift(p, total)).collect();
    for i in 0..m {
        for k in 0..m {
            let mut acc = Poly::zero(total);
            for j in 0..m {
                acc = &acc + &(&lift(&dv[i][j], total) * &Poly::var(total, m + j * m + k));
            }
            comps.push(acc);
        }
    }
    PolyVectorField::new(comps)
}

/// `M(t)⁻¹ T(φ_t x) M(t)⁻ᵀ`: the tensor pulled back along the flow.
fn pulled_back(v: &PolyVectorField, t_field: &PolyTensorField, x: &[f64], t: f64) -> DMatrix<f64> {
    let m = v.dim();
    let mut start = x.to_vec();
    start.extend(DMatrix::<f64>::identity(m, m).iter());
    let end = flow::flow_endpoint(&variational_system(v), &start, t, 10).unwrap();
    let jac = DMatrix::from_row_slice(m, m, &end[m..]);
    let inv = jac.try_inverse().unwrap();
    &inv * t_field.eval(&end[..m]) * inv.transpose()
}

#[test]
fn lie_derivative_matches_flow_pullback() {
    let mut r = rng(13);
    let tensors = [simplex::simplex_g(), simplex::pi_tensor(), simplex::simplex_lambda()];
    for t_field in &tensors {
        let v = random_quadratic_field(3, &mut r);
        let x: Vec<f64> = (0..3).map(|_| uniform(&mut r)).collect();
        let h = 1e-5;
        let fd = (pulled_back(&v, t_field, &x, h) - pulled_back(&v, t_field, &x, -h)) / (2.0 * h);
        let exact = flow::lie_derivative_tensor(&v, t_field).eval(&x);
        let err = (fd - exact).amax();
        assert!(err < 1e-6, "{err}");
    }
}

#[test]
fn killing_fields_have_exact_zero_lie_derivative() {
    // integer coefficients keep every intermediate exactly representable
    let g = simplex::simplex_g();
    for a in [[1.0, 0.0, 0.0], [2.0, -3.0, 5.0], [-1.0, 4.0, 7.0]] {
        let x = simplex::hamiltonian_field_simplex(&Poly::linear(&a)).unwrap();
        assert!(flow::lie_derivative_tensor(&x, &g).is_zero());
    }
}

fn endpoint_error(g: &QuantumGeometry, a: &HermitianOperator, b: &HermitianOperator, rho: &quantum::DensityMatrix, steps: usize) -> f64 {
    let field = g.hamiltonian_field(a).unwrap().add(&g.r_gradient_field(b).unwrap());
    let x0 = g.coordinates(&rho.as_dual_point()).unwrap();
    let numeric = flow::flow_endpoint(&field, &x0, 1.0, steps).unwrap();
    let exact = g.coordinates(&quantum::closed_form_flow(a, b, rho, 1.0).unwrap().as_dual_point()).unwrap();
    numeric.iter().zip(&exact).map(|(u, v)| (u - v).powi(2)).sum::<f64>().sqrt()
}

#[test]
fn rk4_convergence_order() {
    let mut r = rng(14);
    let g = QuantumGeometry::new(2).unwrap();
    let a = quantum::random_observable(2, &mut r).scale(3.0);
    let b = quantum::random_observable(2, &mut r).scale(3.0);
    let rho = quantum::random_density_matrix(2, 2, &mut r);
    let (e1, e2) = (endpoint_error(&g, &a, &b, &rho, 20), endpoint_error(&g, &a, &b, &rho, 40));
    let order = (e1 / e2).log2();
    assert!((3.7..=4.3).contains(&order), "order {order} from {e1:e} {e2:e}");
}

#[test]
fn closed_form_velocity_matches_field() {
    // fixes the Hamiltonian and gradient flow scale constants
    let mut r = rng(15);
    for n in [2, 3] {
        let g = QuantumGeometry::new(n).unwrap();
        let a = quantum::random_observable(n, &mut r);
        let b = quantum::random_observable(n, &mut r);
        let rho = quantum::random_density_matrix(n, n, &mut r);
        let h = 1e-5;
        let at = |t| g.coordinates(&quantum::closed_form_flow(&a, &b, &rho, t).unwrap().as_dual_point()).unwrap();
        let (plus, minus) = (at(h), at(-h));
        let x0 = g.coordinates(&rho.as_dual_point()).unwrap();
        let field = g.hamiltonian_field(&a).unwrap().add(&g.r_gradient_field(&b).unwrap());
        let v = field.eval(&x0);
        for i in 0..g.size() {
            assert!(((plus[i] - minus[i]) / (2.0 * h) - v[i]).abs() < 1e-8);
        }
    }
}

#[test]
fn closed_form_flow_matches_rk4() {
    let mut r = rng(16);
    for n in [2, 3] {
        let g = QuantumGeometry::new(n).unwrap();
        for rank in 1..=n {
            let a = quantum::random_observable(n, &mut r);
            let b = quantum::random_observable(n, &mut r);
            let rho = quantum::random_density_matrix(n, rank, &mut r);
            assert!(endpoint_error(&g, &a, &b, &rho, 1000) < 1e-8);
        }
    }
}

#[test]
fn trajectories_are_bit_identical() {
    let mut r = rng(17);
    let v = random_quadratic_field(3, &mut r);
    let x = [0.1, -0.2, 0.3];
    let one = flow::integrate(&v, &x, 0.5, 200).unwrap();
    let two = flow::integrate(&v, &x, 0.5, 200).unwrap();
    assert_eq!(one, two);
    assert_eq!(one.to_csv(), two.to_csv());
}

#[test]
fn commuting_family_has_zero_constants() {
    let fields: Vec<PolyVectorField> = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.3, 0.3, -0.1]]
        .iter()
        .map(|a| simplex::hamiltonian_field_simplex(&Poly::linear(a)).unwrap())
        .collect();
    let report = flow::closure_fit(&fields, &ClosureOptions::default()).unwrap();
    assert_eq!(report.max_residual, 0.0);
    assert!(report.constants.iter().flatten().flatten().all(|&c| c == 0.0));
}

#[test]
fn quantum_hamiltonian_fields_close_with_c() {
    let g = QuantumGeometry::new(2).unwrap();
    let fields: Vec<PolyVectorField> = g.basis().elements().iter().map(|e| g.hamiltonian_field(e).unwrap()).collect();
    assert!(fields[0].is_zero());
    let sc = g.constants();
    for mu in 0..4 {
        for nu in 0..4 {
            let comm = flow::commutator(&fields[mu], &fields[nu]);
            let combo = (0..4).fold(PolyVectorField::zero(4), |acc, s| acc.add(&fields[s].scale(sc.c(mu, nu, s))));
            assert!(comm.max_abs_diff(&combo) < 1e-15);
        }
    }
    let report = flow::closure_fit(&fields, &ClosureOptions::default()).unwrap();
    assert!(report.rank_deficient);
    assert_eq!(report.rank, 3);
}

#[test]
fn sl2_triple_fixture_on_leaf() {
    let fields: Vec<PolyVectorField> = simplex::quadratic_hamiltonians().into();
    let report = flow::closure_fit(&fields, &ClosureOptions { leaf: Some((2, 0.0)), prefactor: None }).unwrap();
    assert!(report.max_residual < 1e-10);
    // [X_{f₁}, X_{f₂}] = 2 C′ X_{f₃} with C′ = 3/4 on x₃ = 0
    assert!((report.constants[0][1][2] - 1.5).abs() < 1e-12);
    assert!(report.constants[0][1][0].abs() < 1e-12 && report.constants[0][1][1].abs() < 1e-12);
}

#[test]
fn casimir_is_conserved_to_roundoff_along_simplex_flow() {
    let x = simplex::hamiltonian_field_simplex(&Poly::linear(&[0.7, -1.3, 0.4])).unwrap();
    let traj = flow::integrate(&x, &[0.2, 0.3, 0.5], 1.0, 1000).unwrap();
    let c = simplex::casimir(3);
    assert!(traj.points().iter().all(|p| (c.eval(p) - 1.0).abs() < 1e-12));
}
