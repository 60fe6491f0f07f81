//! Tensors `Λ`, `G`, `R` on the dual of the observable space, their
//! Hamiltonian and gradient-like fields, and the closed-form flow on density
//! matrices.
//!
//! Coordinates are `x^μ(ξ) = Tr(ξ e^μ)` in the orthonormal Gell-Mann basis,
//! so the trace-one hyperplane is `x⁰ = 1/√n`. On linear functions
//! `f_a(ξ) = Tr(ξ a)`:
//!
//! * `Λ(df_a, df_b) = f_{(i/2)[a,b]}`, components `Λ^{μν} = c^{μν}_σ x^σ`
//! * `G(df_a, df_b) = f_{{a,b}/2}`, components `G^{μν} = d^{μν}_σ x^σ`
//! * `R(df_a, df_b) = f_{{a,b}/2} − f_a f_b`
//!
//! The coordinate form of `Λ` is a sum over `μ<ν` of `c^{μν}_σ x^σ ∂_μ ∧ ∂_ν`
//! with `u ∧ v = u⊗v − v⊗u`, which gives the full antisymmetric components
//! above with no extra factor of two.

use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::field::{PolyTensorField, PolyVectorField, Symmetry};
use crate::linalg::{self, CMatrix};
use crate::operator::{
    gellmann_basis, jordan_product, lie_product, structure_constants, HermitianOperator, OperatorBasis,
    StructureConstants,
};
use crate::poly::Poly;

/// Scale applied to `a` in `exp((i ā + b̄) t)` so the curve is the flow of `X_a + 𝕐_b`.
///
/// `X_a` moves `ξ` by `(i/2)[ξ, a] = i[−a/2, ξ]`, hence `ā = −a/2`.
pub const HAMILTONIAN_FLOW_SCALE: f64 = -0.5;
/// Scale applied to `b`: `𝕐_b` moves `ξ` by `{b,ξ}/2 − Tr(ξb) ξ`, hence `b̄ = b/2`.
pub const GRADIENT_FLOW_SCALE: f64 = 0.5;

/// Relative eigenvalue threshold used by [`rank_of_state`] by default.
pub const DEFAULT_RANK_TOL: f64 = 1e-8;
/// Tolerance for density-matrix validity (eigenvalues and trace).
pub const STATE_TOL: f64 = 1e-10;
/// Normalizations at or below this are degenerate.
pub const DEGENERATE_NORM: f64 = 1e-14;

/// A point of the dual space, stored as its Hermitian operator `ξ = Σ x^μ e^μ`.
#[derive(Clone, Debug, PartialEq)]
pub struct DualPoint {
    xi: HermitianOperator,
}

impl DualPoint {
    pub fn from_operator(xi: HermitianOperator) -> Self {
        DualPoint { xi }
    }

    pub fn from_coordinates(basis: &OperatorBasis, x: &[f64]) -> Result<Self> {
        Ok(DualPoint { xi: basis.operator(x)? })
    }

    pub fn operator(&self) -> &HermitianOperator {
        &self.xi
    }

    pub fn dim(&self) -> usize {
        self.xi.dim()
    }

    pub fn coordinates(&self, basis: &OperatorBasis) -> Result<Vec<f64>> {
        basis.coordinates(&self.xi)
    }
}

/// Positive semidefinite, unit-trace Hermitian operator.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    rho: HermitianOperator,
}

impl DensityMatrix {
    pub fn new(rho: HermitianOperator) -> Result<Self> {
        let tr = rho.trace();
        if (tr - 1.0).abs() > STATE_TOL {
            return Err(Error::InvalidState(format!("trace {tr} != 1")));
        }
        let min = rho.eigenvalues()[0];
        if min < -STATE_TOL {
            return Err(Error::InvalidState(format!("negative eigenvalue {min:.3e}")));
        }
        Ok(DensityMatrix { rho })
    }

    pub fn maximally_mixed(n: usize) -> Self {
        DensityMatrix { rho: HermitianOperator::identity(n).scale(1.0 / n as f64) }
    }

    /// `|k⟩⟨k|`.
    pub fn basis_state(n: usize, k: usize) -> Self {
        DensityMatrix { rho: HermitianOperator::basis_projector(n, k) }
    }

    pub fn operator(&self) -> &HermitianOperator {
        &self.rho
    }

    pub fn dim(&self) -> usize {
        self.rho.dim()
    }

    pub fn as_dual_point(&self) -> DualPoint {
        DualPoint::from_operator(self.rho.clone())
    }
}

fn check_dims(expected: usize, got: usize) -> Result<()> {
    if expected != got {
        return Err(Error::DimensionMismatch { expected, got });
    }
    Ok(())
}

/// `Λ(df_a, df_b)(ξ) = Tr(ξ · (i/2)[a, b])`.
pub fn lambda_eval(a: &HermitianOperator, b: &HermitianOperator, xi: &DualPoint) -> Result<f64> {
    check_dims(a.dim(), xi.dim())?;
    Ok(xi.operator().trace_product(&lie_product(a, b)?))
}

/// `G(df_a, df_b)(ξ) = Tr(ξ · {a, b}/2)`.
pub fn g_eval(a: &HermitianOperator, b: &HermitianOperator, xi: &DualPoint) -> Result<f64> {
    check_dims(a.dim(), xi.dim())?;
    Ok(xi.operator().trace_product(&jordan_product(a, b)?))
}

/// `R(df_a, df_b)(ξ) = G(df_a, df_b)(ξ) − Tr(ξa) Tr(ξb)`; the variance of `a` when `a = b`.
pub fn r_eval(a: &HermitianOperator, b: &HermitianOperator, xi: &DualPoint) -> Result<f64> {
    let g = g_eval(a, b, xi)?;
    Ok(g - xi.operator().trace_product(a) * xi.operator().trace_product(b))
}

/// Basis and structure constants for an `n`-level system, with the tensors
/// and fields they define on `ℝ^{n²}`.
#[derive(Clone, Debug)]
pub struct QuantumGeometry {
    basis: OperatorBasis,
    sc: StructureConstants,
}

impl QuantumGeometry {
    pub fn new(n: usize) -> Result<Self> {
        let basis = gellmann_basis(n)?;
        let sc = structure_constants(&basis)?;
        Ok(QuantumGeometry { basis, sc })
    }

    /// Uses caller-supplied constants, e.g. deliberately corrupted ones.
    pub fn with_constants(basis: OperatorBasis, sc: StructureConstants) -> Result<Self> {
        check_dims(basis.len(), sc.size())?;
        Ok(QuantumGeometry { basis, sc })
    }

    pub fn dim(&self) -> usize {
        self.basis.dim()
    }

    /// Ambient dimension `n²`.
    pub fn size(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &OperatorBasis {
        &self.basis
    }

    pub fn constants(&self) -> &StructureConstants {
        &self.sc
    }

    pub fn coordinates(&self, xi: &DualPoint) -> Result<Vec<f64>> {
        xi.coordinates(&self.basis)
    }

    pub fn point(&self, x: &[f64]) -> Result<DualPoint> {
        DualPoint::from_coordinates(&self.basis, x)
    }

    /// The coordinate function `f_a = Σ a_μ x^μ`.
    pub fn linear_function(&self, a: &HermitianOperator) -> Result<Poly> {
        Ok(Poly::linear(&self.basis.coordinates(a)?))
    }

    /// Value of `x⁰` on the trace-one hyperplane.
    pub fn trace_one_x0(&self) -> f64 {
        1.0 / (self.dim() as f64).sqrt()
    }

    fn linear_tensor(&self, sym: Symmetry, coeff: impl Fn(usize, usize, usize) -> f64) -> PolyTensorField {
        let m = self.size();
        let comps: Vec<Vec<Poly>> = (0..m)
            .map(|mu| {
                (0..m)
                    .map(|nu| Poly::linear(&(0..m).map(|s| coeff(mu, nu, s)).collect::<Vec<_>>()))
                    .collect()
            })
            .collect();
        // corrupted constants lose the exact symmetry; keep the raw components then
        PolyTensorField::from_components(comps.clone(), sym).unwrap_or_else(|_| {
            PolyTensorField::from_components(comps, Symmetry::General).expect("general tensors always build")
        })
    }

    /// `Λ^{μν} = c^{μν}_σ x^σ`.
    pub fn lambda_tensor(&self) -> PolyTensorField {
        self.linear_tensor(Symmetry::Antisymmetric, |m, n, s| self.sc.c(m, n, s))
    }

    /// `G^{μν} = d^{μν}_σ x^σ`.
    pub fn g_tensor(&self) -> PolyTensorField {
        self.linear_tensor(Symmetry::Symmetric, |m, n, s| self.sc.d(m, n, s))
    }

    /// `R^{μν} = d^{μν}_σ x^σ − x^μ x^ν`.
    pub fn r_tensor(&self) -> PolyTensorField {
        let m = self.size();
        let g = self.g_tensor();
        let mut comps = g.components().to_vec();
        for (mu, row) in comps.iter_mut().enumerate() {
            for (nu, p) in row.iter_mut().enumerate() {
                *p = &*p - &(&Poly::var(m, mu) * &Poly::var(m, nu));
            }
        }
        PolyTensorField::from_components(comps, g.symmetry()).expect("x^μ x^ν keeps the symmetry")
    }

    /// `X_a = Λ(df_a, ·)`, linear in `x`.
    pub fn hamiltonian_field(&self, a: &HermitianOperator) -> Result<PolyVectorField> {
        Ok(self.lambda_tensor().field_of(&self.linear_function(a)?))
    }

    /// `Y_b = G(df_b, ·)`, linear in `x`.
    pub fn gradient_field(&self, b: &HermitianOperator) -> Result<PolyVectorField> {
        Ok(self.g_tensor().field_of(&self.linear_function(b)?))
    }

    /// `𝕐_b = R(df_b, ·)`, quadratic in `x`.
    pub fn r_gradient_field(&self, b: &HermitianOperator) -> Result<PolyVectorField> {
        Ok(self.r_tensor().field_of(&self.linear_function(b)?))
    }

    /// A point and generator at which `Y_b` has a nonzero `x⁰`-component:
    /// `b = 𝕀`, `ξ = 𝕀/n`, where `Y_𝕀^0 = Tr(ξ)/√n = 1/√n`.
    pub fn gradient_non_tangency_witness(&self) -> Result<(HermitianOperator, DualPoint, f64)> {
        let n = self.dim();
        let b = HermitianOperator::identity(n);
        let xi = DensityMatrix::maximally_mixed(n).as_dual_point();
        let x = self.coordinates(&xi)?;
        let y0 = self.gradient_field(&b)?.component(0).eval(&x);
        Ok((b, xi, y0))
    }
}

/// Generator `i ā + b̄` of the group element `g_t = exp((i ā + b̄) t)`.
fn flow_generator(a: &HermitianOperator, b: &HermitianOperator) -> CMatrix {
    let i = Complex64::new(0.0, HAMILTONIAN_FLOW_SCALE);
    a.matrix() * i + b.matrix().scale(GRADIENT_FLOW_SCALE)
}

/// `g_t ξ g_t†` without normalization: the linear `GL(H)` action.
pub fn unnormalized_flow(
    a: &HermitianOperator,
    b: &HermitianOperator,
    xi: &HermitianOperator,
    t: f64,
) -> Result<HermitianOperator> {
    check_dims(a.dim(), b.dim())?;
    check_dims(a.dim(), xi.dim())?;
    let z = flow_generator(a, b) * Complex64::new(t, 0.0);
    let g = linalg::expm(&z);
    Ok(HermitianOperator::new(&g * xi.matrix() * g.adjoint())?)
}

/// `g_t ξ g_t† / Tr(g_t ξ g_t†)` for arbitrary dual points; fails where the
/// trace vanishes, which can happen for indefinite `ξ`.
pub fn normalized_flow(a: &HermitianOperator, b: &HermitianOperator, xi: &DualPoint, t: f64) -> Result<DualPoint> {
    let n = unnormalized_flow(a, b, xi.operator(), t)?;
    let tr = n.trace();
    if tr.abs() <= DEGENERATE_NORM {
        return Err(Error::DegenerateFlow(tr));
    }
    Ok(DualPoint::from_operator(n.scale(1.0 / tr)))
}

/// Integral curve of `X_a + 𝕐_b` through `ρ` at time `t`.
pub fn closed_form_flow(a: &HermitianOperator, b: &HermitianOperator, rho: &DensityMatrix, t: f64) -> Result<DensityMatrix> {
    let out = normalized_flow(a, b, &rho.as_dual_point(), t)?;
    DensityMatrix::new(out.xi)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RankReport {
    pub rank: usize,
    /// Some eigenvalue lies within a factor 10 of the threshold.
    pub near_threshold: bool,
}

/// Number of eigenvalues above `tol · λ_max`.
pub fn rank_of_state(rho: &DensityMatrix, tol: f64) -> RankReport {
    let ev = rho.operator().eigenvalues();
    let top = ev.last().copied().unwrap_or(0.0).max(0.0);
    let cut = tol * top;
    let rank = ev.iter().filter(|&&l| l > cut).count();
    let near_threshold = ev.iter().any(|&l| l > cut / 10.0 && l < cut * 10.0);
    RankReport { rank, near_threshold }
}

/// Random density matrix of the given rank: `U diag(w) U†` with random
/// weights and a Haar-random `U`.
pub fn random_density_matrix<R: Rng + ?Sized>(n: usize, rank: usize, rng: &mut R) -> DensityMatrix {
    assert!(rank >= 1 && rank <= n);
    let mut w: Vec<f64> = (0..n).map(|k| if k < rank { 0.2 + rng.random::<f64>() } else { 0.0 }).collect();
    let s: f64 = w.iter().sum();
    w.iter_mut().for_each(|x| *x /= s);
    let u = linalg::random_unitary(n, rng);
    let rho = HermitianOperator::diagonal(&w).conjugate_by(&u);
    DensityMatrix::new(rho).expect("conjugated probability vector is a state")
}

pub fn random_observable<R: Rng + ?Sized>(n: usize, rng: &mut R) -> HermitianOperator {
    HermitianOperator::new(linalg::random_hermitian(n, rng)).expect("symmetrized matrix is Hermitian")
}

/// Random traceless observable.
pub fn random_traceless_observable<R: Rng + ?Sized>(n: usize, rng: &mut R) -> HermitianOperator {
    let a = random_observable(n, rng);
    let shift = a.trace() / n as f64;
    a.sub(&HermitianOperator::identity(n).scale(shift))
}
