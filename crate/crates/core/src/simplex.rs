//! Tensor structures on the space `E = ℝⁿ` containing the probability simplex.
//!
//! * `Λ = C (∂₁∧∂₂ + ∂₂∧∂₃ + ∂₃∧∂₁)` with `C = p₁+p₂+p₃`, so `{p₁,p₂} = C`
//! * `G = 2C Σ ∂ᵢ⊗∂ᵢ − C (∂₁⊗_S∂₂ + ∂₂⊗_S∂₃ + ∂₃⊗_S∂₁)`
//! * `Π = p₁p₂ ∂₁∧∂₂ + p₂p₃ ∂₂∧∂₃ + p₃p₁ ∂₃∧∂₁` with Casimir `p₁p₂p₃`
//! * `Λ_n`, `G_n` built from `X_{jk} = ∂_j − ∂_k` over consecutive cyclic pairs
//!
//! `C` is a Casimir of `Λ`, `G`, `Λ_n`, `G_n`; their leaves are the planes
//! `C = c`. On the leaf `C = 0` the tensors vanish and flows are constant.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::field::{PolyTensorField, PolyVectorField};
use crate::poly::Poly;

/// Tolerances for the simplex membership predicate.
pub const NONNEG_TOL: f64 = 1e-12;
pub const SUM_TOL: f64 = 1e-12;
/// Largest degree accepted when building fields from user functions.
pub const MAX_FUNCTION_DEGREE: usize = 2;

/// A point of `ℝⁿ` with simplex predicates. Points off the simplex are valid values.
#[derive(Clone, Debug, PartialEq)]
pub struct ProbabilityVector {
    p: Vec<f64>,
}

impl ProbabilityVector {
    pub fn new(p: Vec<f64>) -> Result<Self> {
        if p.len() < 2 {
            return Err(Error::InvalidDimension(format!("need at least 2 outcomes, got {}", p.len())));
        }
        Ok(ProbabilityVector { p })
    }

    pub fn uniform(n: usize) -> Self {
        ProbabilityVector { p: vec![1.0 / n as f64; n] }
    }

    pub fn values(&self) -> &[f64] {
        &self.p
    }

    pub fn len(&self) -> usize {
        self.p.len()
    }

    pub fn is_empty(&self) -> bool {
        self.p.is_empty()
    }

    pub fn is_nonnegative(&self) -> bool {
        self.p.iter().all(|&x| x >= -NONNEG_TOL)
    }

    pub fn has_unit_sum(&self) -> bool {
        (self.p.iter().sum::<f64>() - 1.0).abs() <= SUM_TOL
    }

    pub fn in_simplex(&self) -> bool {
        self.is_nonnegative() && self.has_unit_sum()
    }
}

/// `C = Σ p_j` on `ℝⁿ`.
pub fn casimir(n: usize) -> Poly {
    Poly::linear(&vec![1.0; n])
}

fn unit(n: usize, i: usize) -> Vec<f64> {
    let mut v = vec![0.0; n];
    v[i] = 1.0;
    v
}

const CYCLIC3: [(usize, usize); 3] = [(0, 1), (1, 2), (2, 0)];

pub fn simplex_lambda() -> PolyTensorField {
    let c = casimir(3);
    CYCLIC3
        .iter()
        .map(|&(i, j)| PolyTensorField::wedge(&unit(3, i), &unit(3, j), &c))
        .reduce(|a, b| a.add(&b))
        .expect("three terms")
}

pub fn simplex_g() -> PolyTensorField {
    let c = casimir(3);
    let diag = (0..3)
        .map(|i| PolyTensorField::square(&unit(3, i), &c.scale(2.0)))
        .reduce(|a, b| a.add(&b))
        .expect("three terms");
    CYCLIC3.iter().fold(diag, |acc, &(i, j)| {
        acc.add(&PolyTensorField::sym_product(&unit(3, i), &unit(3, j), &c.scale(-1.0)))
    })
}

/// `T(df, ·)` for `f` of degree at most two.
pub fn field_from_function(tensor: &PolyTensorField, f: &Poly) -> Result<PolyVectorField> {
    if f.dim() != tensor.dim() {
        return Err(Error::DimensionMismatch { expected: tensor.dim(), got: f.dim() });
    }
    if f.degree() > MAX_FUNCTION_DEGREE {
        return Err(Error::DegreeOverflow { degree: f.degree(), max: MAX_FUNCTION_DEGREE });
    }
    Ok(tensor.field_of(f))
}

/// `X_f = Λ(df, ·)`.
pub fn hamiltonian_field_simplex(f: &Poly) -> Result<PolyVectorField> {
    field_from_function(&simplex_lambda(), f)
}

/// `Y_f = G(df, ·)`.
pub fn gradient_field_simplex(f: &Poly) -> Result<PolyVectorField> {
    field_from_function(&simplex_g(), f)
}

/// Coordinate systems on `E`.
#[derive(Clone, Debug, PartialEq)]
pub enum Chart {
    /// The defining coordinates `p_j` on `ℝⁿ`.
    P(usize),
    /// `x₁ = (p₁−p₃)/2`, `x₂ = (p₂−p₁)/2`, `x₃ = p₁+p₂+p₃−1` on `ℝ³`.
    X,
    /// `x_j = ln p_j` on the open positive orthant of `ℝⁿ`.
    Log(usize),
}

impl Chart {
    pub fn name(&self) -> &'static str {
        match self {
            Chart::P(_) => "p-chart",
            Chart::X => "x-chart",
            Chart::Log(_) => "log-chart",
        }
    }

    pub fn dim(&self) -> usize {
        match *self {
            Chart::P(n) | Chart::Log(n) => n,
            Chart::X => 3,
        }
    }

    fn check_len(&self, v: &[f64]) -> Result<()> {
        if v.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: v.len() });
        }
        Ok(())
    }

    /// `p ↦ x`.
    pub fn forward(&self, p: &[f64]) -> Result<Vec<f64>> {
        self.check_len(p)?;
        match self {
            Chart::P(_) => Ok(p.to_vec()),
            Chart::X => Ok(vec![0.5 * (p[0] - p[2]), 0.5 * (p[1] - p[0]), p[0] + p[1] + p[2] - 1.0]),
            Chart::Log(_) => {
                if let Some((i, &v)) = p.iter().enumerate().find(|(_, &v)| v <= 0.0) {
                    return Err(Error::OutsideChart(format!("log chart needs p[{i}] > 0, got {v}")));
                }
                Ok(p.iter().map(|v| v.ln()).collect())
            }
        }
    }

    /// `x ↦ p`.
    pub fn inverse(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.check_len(x)?;
        match self {
            Chart::P(_) => Ok(x.to_vec()),
            Chart::X => {
                let p = x_chart_inverse_polys();
                Ok(p.iter().map(|q| q.eval(x)).collect())
            }
            Chart::Log(_) => Ok(x.iter().map(|v| v.exp()).collect()),
        }
    }

    /// `∂x^a/∂p^i` at the point `p`.
    pub fn jacobian(&self, p: &[f64]) -> Result<DMatrix<f64>> {
        self.check_len(p)?;
        match self {
            Chart::P(n) => Ok(DMatrix::identity(*n, *n)),
            Chart::X => Ok(x_chart_jacobian()),
            Chart::Log(n) => {
                if let Some((i, &v)) = p.iter().enumerate().find(|(_, &v)| v <= 0.0) {
                    return Err(Error::OutsideChart(format!("log chart Jacobian is singular at p[{i}] = {v}")));
                }
                Ok(DMatrix::from_fn(*n, *n, |a, i| if a == i { 1.0 / p[i] } else { 0.0 }))
            }
        }
    }

    /// `∂p^i/∂x^a` at the point `p`.
    pub fn inverse_jacobian(&self, p: &[f64]) -> Result<DMatrix<f64>> {
        let j = self.jacobian(p)?;
        let det = j.determinant();
        j.try_inverse().ok_or(Error::Singular(det))
    }
}

fn x_chart_jacobian() -> DMatrix<f64> {
    DMatrix::from_row_slice(3, 3, &[0.5, 0.0, -0.5, -0.5, 0.5, 0.0, 1.0, 1.0, 1.0])
}

/// `p` as affine polynomials in the x-chart coordinates.
fn x_chart_inverse_polys() -> Vec<Poly> {
    let jinv = x_chart_jacobian().try_inverse().expect("x-chart is invertible");
    // x = J p − (0, 0, 1)  ⇒  p = J⁻¹ (x + (0, 0, 1))
    (0..3)
        .map(|i| {
            let row: Vec<f64> = (0..3).map(|a| jinv[(i, a)]).collect();
            Poly::affine(jinv[(i, 2)], &row)
        })
        .collect()
}

/// The x-chart forward map as polynomials in `p`.
fn x_chart_forward_polys() -> Vec<Poly> {
    let j = x_chart_jacobian();
    (0..3)
        .map(|a| {
            let row: Vec<f64> = (0..3).map(|i| j[(a, i)]).collect();
            Poly::affine(if a == 2 { -1.0 } else { 0.0 }, &row)
        })
        .collect()
}

pub fn x_chart() -> Chart {
    Chart::X
}

/// Exact pushforward of a tensor given in the p-chart to an affine chart.
pub fn pushforward(t: &PolyTensorField, chart: &Chart) -> Result<PolyTensorField> {
    if t.dim() != chart.dim() {
        return Err(Error::DimensionMismatch { expected: chart.dim(), got: t.dim() });
    }
    match chart {
        Chart::P(_) => Ok(t.clone()),
        Chart::X => Ok(t.transform_affine(&x_chart_jacobian(), &x_chart_inverse_polys())),
        Chart::Log(_) => Err(Error::InvalidArgument(
            "the log chart is not polynomial; use pushforward_at".into(),
        )),
    }
}

/// Inverse of [`pushforward`]: components given in `chart` back to the p-chart.
pub fn pullback(t: &PolyTensorField, chart: &Chart) -> Result<PolyTensorField> {
    if t.dim() != chart.dim() {
        return Err(Error::DimensionMismatch { expected: chart.dim(), got: t.dim() });
    }
    match chart {
        Chart::P(_) => Ok(t.clone()),
        Chart::X => {
            let jinv = x_chart_jacobian().try_inverse().expect("x-chart is invertible");
            Ok(t.transform_affine(&jinv, &x_chart_forward_polys()))
        }
        Chart::Log(_) => Err(Error::InvalidArgument(
            "the log chart is not polynomial; use pushforward_at".into(),
        )),
    }
}

/// Components `J^a_i J^b_j T^{ij}(p)` of a p-chart tensor in `chart` at the point `p`.
pub fn pushforward_at(t: &PolyTensorField, chart: &Chart, p: &[f64]) -> Result<DMatrix<f64>> {
    if t.dim() != chart.dim() {
        return Err(Error::DimensionMismatch { expected: chart.dim(), got: t.dim() });
    }
    let j = chart.jacobian(p)?;
    Ok(&j * t.eval(p) * j.transpose())
}

/// `Λ` in the x-chart: `(3/4)(x₃+1) ∂x₁∧∂x₂`.
pub fn x_chart_lambda() -> PolyTensorField {
    pushforward(&simplex_lambda(), &Chart::X).expect("dimensions agree")
}

/// `C′ = (3/4)(x₃ + 1)`, the Casimir prefactor in the x-chart.
pub fn x_chart_casimir() -> Poly {
    Poly::affine(0.75, &[0.0, 0.0, 0.75])
}

/// `f₁ = (x₁²+x₂²)/2`, `f₂ = (x₁²−x₂²)/2`, `f₃ = −x₁x₂` in the x-chart.
pub fn quadratic_functions() -> [Poly; 3] {
    let x1 = Poly::var(3, 0);
    let x2 = Poly::var(3, 1);
    let x11 = &x1 * &x1;
    let x22 = &x2 * &x2;
    [(&x11 + &x22).scale(0.5), (&x11 - &x22).scale(0.5), (&x1 * &x2).scale(-1.0)]
}

/// `X_{f₁}, X_{f₂}, X_{f₃}` in the x-chart; on each leaf they span sl(2,ℝ).
pub fn quadratic_hamiltonians() -> [PolyVectorField; 3] {
    let lambda = x_chart_lambda();
    quadratic_functions().map(|f| lambda.field_of(&f))
}

/// `X₁, X₂`: Hamiltonian fields of the coordinate functions `x₁`, `x₂`.
pub fn translation_hamiltonians() -> [PolyVectorField; 2] {
    let lambda = x_chart_lambda();
    [lambda.field_of(&Poly::var(3, 0)), lambda.field_of(&Poly::var(3, 1))]
}

/// The five fields realizing isl(2,ℝ): `X_{f₁}, X_{f₂}, X_{f₃}, X₁, X₂`.
pub fn isl2_family() -> Vec<PolyVectorField> {
    let mut v: Vec<PolyVectorField> = quadratic_hamiltonians().into();
    v.extend(translation_hamiltonians());
    v
}

/// Flow times `(t₁, t₂)` such that flowing `X₁` for `t₁` and then `X₂` for
/// `t₂` carries `start` to `target` on the leaf `x₃ = start[2]`.
///
/// `X₁ = C′∂₂` and `X₂ = −C′∂₁` are translations on a leaf.
pub fn leaf_translation_times(start: &[f64], target: &[f64]) -> Result<(f64, f64)> {
    if start.len() != 3 || target.len() != 3 {
        return Err(Error::DimensionMismatch { expected: 3, got: start.len().min(target.len()) });
    }
    if (start[2] - target[2]).abs() > 0.0 {
        return Err(Error::InvalidArgument("start and target lie on different leaves".into()));
    }
    let c = x_chart_casimir().eval(start);
    if c == 0.0 {
        return Err(Error::InvalidArgument("the leaf C = 0 is degenerate".into()));
    }
    Ok(((target[1] - start[1]) / c, -(target[0] - start[0]) / c))
}

pub fn pi_tensor() -> PolyTensorField {
    let p = |i| Poly::var(3, i);
    CYCLIC3
        .iter()
        .map(|&(i, j)| PolyTensorField::wedge(&unit(3, i), &unit(3, j), &(&p(i) * &p(j))))
        .reduce(|a, b| a.add(&b))
        .expect("three terms")
}

/// `p₁p₂p₃`.
pub fn pi_casimir() -> Poly {
    &(&Poly::var(3, 0) * &Poly::var(3, 1)) * &Poly::var(3, 2)
}

/// `X_a = Π(df_a, ·)` for `f_a = a^j p_j`.
pub fn pi_hamiltonian(a: &[f64; 3]) -> PolyVectorField {
    pi_tensor().field_of(&Poly::linear(a))
}

/// The constant bivector `∂₁∧∂₂ + ∂₂∧∂₃ + ∂₃∧∂₁`, i.e. `Π` in the log chart.
pub fn constant_cyclic_bivector() -> DMatrix<f64> {
    DMatrix::from_row_slice(3, 3, &[0.0, 1.0, -1.0, -1.0, 0.0, 1.0, 1.0, -1.0, 0.0])
}

/// Fisher–Rao metric components (covariant) in `chart` at `p`.
///
/// p-chart: `δ_ij/p_j`; log-chart: `diag(e^{x_j})`; the x-chart uses the
/// change-of-variables rule `g′ = Kᵀ g K` with `K = ∂p/∂x`.
pub fn fisher_rao(p: &ProbabilityVector, chart: &Chart) -> Result<DMatrix<f64>> {
    let v = p.values();
    if let Some((index, &value)) = v.iter().enumerate().find(|(_, &x)| x <= 0.0) {
        return Err(Error::Boundary { index, value });
    }
    if v.len() != chart.dim() {
        return Err(Error::DimensionMismatch { expected: chart.dim(), got: v.len() });
    }
    let n = v.len();
    match chart {
        Chart::P(_) => Ok(DMatrix::from_fn(n, n, |i, j| if i == j { 1.0 / v[i] } else { 0.0 })),
        Chart::Log(_) => {
            let x = chart.forward(v)?;
            Ok(DMatrix::from_fn(n, n, |i, j| if i == j { x[i].exp() } else { 0.0 }))
        }
        Chart::X => {
            let g = fisher_rao(p, &Chart::P(n))?;
            let k = chart.inverse_jacobian(v)?;
            Ok(k.transpose() * g * k)
        }
    }
}

fn cyclic_differences(n: usize) -> Vec<Vec<f64>> {
    (0..n)
        .map(|j| {
            let mut v = vec![0.0; n];
            v[j] += 1.0;
            v[(j + 1) % n] -= 1.0;
            v
        })
        .collect()
}

fn check_general_n(n: usize) -> Result<()> {
    if n < 3 {
        return Err(Error::InvalidDimension(format!("the general construction needs n >= 3, got {n}")));
    }
    Ok(())
}

/// `Λ_n = C Σ_k X_{k,k+1} ∧ X_{k+1,k+2}` (indices cyclic).
pub fn general_lambda_n(n: usize) -> Result<PolyTensorField> {
    check_general_n(n)?;
    let x = cyclic_differences(n);
    let c = casimir(n);
    Ok((0..n)
        .map(|k| PolyTensorField::wedge(&x[k], &x[(k + 1) % n], &c))
        .reduce(|a, b| a.add(&b))
        .expect("n >= 3 terms"))
}

/// `G_n = C Σ_k X_{k,k+1} ⊗_S X_{k+1,k+2}` (indices cyclic).
pub fn general_g_n(n: usize) -> Result<PolyTensorField> {
    check_general_n(n)?;
    let x = cyclic_differences(n);
    let c = casimir(n);
    Ok((0..n)
        .map(|k| PolyTensorField::sym_product(&x[k], &x[(k + 1) % n], &c))
        .reduce(|a, b| a.add(&b))
        .expect("n >= 3 terms"))
}
