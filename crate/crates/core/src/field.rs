//! Vector fields and contravariant 2-tensor fields with polynomial components.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::poly::Poly;

/// A vector field `V = V^i ∂_i` on ℝᵐ.
#[derive(Clone, Debug, PartialEq)]
pub struct PolyVectorField {
    comps: Vec<Poly>,
}

impl PolyVectorField {
    pub fn new(comps: Vec<Poly>) -> Self {
        let m = comps.len();
        assert!(comps.iter().all(|p| p.dim() == m), "component ambient dim must equal field dim");
        PolyVectorField { comps }
    }

    pub fn zero(dim: usize) -> Self {
        PolyVectorField { comps: vec![Poly::zero(dim); dim] }
    }

    /// Constant field with the given components.
    pub fn constant(v: &[f64]) -> Self {
        let m = v.len();
        PolyVectorField::new(v.iter().map(|&c| Poly::constant(m, c)).collect())
    }

    /// Linear field `x ↦ M x`.
    pub fn linear(m: &DMatrix<f64>) -> Self {
        assert!(m.is_square());
        let comps = (0..m.nrows())
            .map(|i| Poly::linear(&m.row(i).iter().copied().collect::<Vec<_>>()))
            .collect();
        PolyVectorField::new(comps)
    }

    pub fn dim(&self) -> usize {
        self.comps.len()
    }

    pub fn component(&self, i: usize) -> &Poly {
        &self.comps[i]
    }

    pub fn components(&self) -> &[Poly] {
        &self.comps
    }

    pub fn degree(&self) -> usize {
        self.comps.iter().map(Poly::degree).max().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(Poly::is_zero)
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.comps.iter().map(Poly::max_abs_coeff).fold(0.0, f64::max)
    }

    pub fn eval(&self, x: &[f64]) -> Vec<f64> {
        self.comps.iter().map(|p| p.eval(x)).collect()
    }

    /// Action on a function as a derivation: `V(f) = V^i ∂_i f`.
    pub fn apply(&self, f: &Poly) -> Poly {
        self.comps
            .iter()
            .enumerate()
            .fold(Poly::zero(self.dim()), |acc, (i, v)| &acc + &(v * &f.derivative(i)))
    }

    pub fn add(&self, other: &PolyVectorField) -> PolyVectorField {
        assert_eq!(self.dim(), other.dim());
        PolyVectorField::new(self.comps.iter().zip(&other.comps).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &PolyVectorField) -> PolyVectorField {
        assert_eq!(self.dim(), other.dim());
        PolyVectorField::new(self.comps.iter().zip(&other.comps).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, s: f64) -> PolyVectorField {
        PolyVectorField::new(self.comps.iter().map(|p| p.scale(s)).collect())
    }

    /// Multiplies every component by the function `f`.
    pub fn mul_fn(&self, f: &Poly) -> PolyVectorField {
        PolyVectorField::new(self.comps.iter().map(|p| p * f).collect())
    }

    /// Fixes coordinate `i` to `value` in every component.
    pub fn restrict(&self, i: usize, value: f64) -> PolyVectorField {
        PolyVectorField::new(self.comps.iter().map(|p| p.restrict(i, value)).collect())
    }

    pub fn max_abs_diff(&self, other: &PolyVectorField) -> f64 {
        self.sub(other).max_abs_coeff()
    }

    /// Jacobian matrix `∂_j V^i` as polynomials.
    pub fn jacobian(&self) -> Vec<Vec<Poly>> {
        self.comps.iter().map(Poly::gradient).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Symmetry {
    Antisymmetric,
    Symmetric,
    General,
}

/// A contravariant rank-2 tensor field `T = T^{ij} ∂_i ⊗ ∂_j`.
///
/// Wedge convention: `u ∧ v = u⊗v − v⊗u`; symmetrized product
/// `u ⊗_S v = u⊗v + v⊗u`. With these, `{f, g} = T(df, dg) = T^{ij} ∂_i f ∂_j g`.
#[derive(Clone, Debug, PartialEq)]
pub struct PolyTensorField {
    comps: Vec<Vec<Poly>>,
    symmetry: Symmetry,
}

impl PolyTensorField {
    pub fn zero(dim: usize, symmetry: Symmetry) -> Self {
        PolyTensorField { comps: vec![vec![Poly::zero(dim); dim]; dim], symmetry }
    }

    /// Builds a tensor from full component rows, verifying the declared symmetry exactly.
    pub fn from_components(comps: Vec<Vec<Poly>>, symmetry: Symmetry) -> Result<Self> {
        let m = comps.len();
        if comps.iter().any(|row| row.len() != m || row.iter().any(|p| p.dim() != m)) {
            return Err(Error::InvalidDimension(format!("tensor components must be {m}x{m} over ℝ^{m}")));
        }
        let t = PolyTensorField { comps, symmetry };
        let dev = t.symmetry_defect();
        if dev > 0.0 {
            return Err(Error::InvalidArgument(format!(
                "components violate {symmetry:?} symmetry (defect {dev:.3e})"
            )));
        }
        Ok(t)
    }

    fn symmetry_defect(&self) -> f64 {
        let m = self.dim();
        let mut worst: f64 = 0.0;
        for i in 0..m {
            for j in 0..m {
                let d = match self.symmetry {
                    Symmetry::Antisymmetric => (&self.comps[i][j] + &self.comps[j][i]).max_abs_coeff(),
                    Symmetry::Symmetric => (&self.comps[i][j] - &self.comps[j][i]).max_abs_coeff(),
                    Symmetry::General => 0.0,
                };
                worst = worst.max(d);
            }
        }
        worst
    }

    /// `coeff · (u ∧ v)` with constant directions `u`, `v`.
    pub fn wedge(u: &[f64], v: &[f64], coeff: &Poly) -> Self {
        let mut t = Self::outer(u, v, coeff, Symmetry::Antisymmetric);
        t.accumulate_outer(v, u, &coeff.scale(-1.0));
        t
    }

    /// `coeff · (u ⊗_S v)`.
    pub fn sym_product(u: &[f64], v: &[f64], coeff: &Poly) -> Self {
        let mut t = Self::outer(u, v, coeff, Symmetry::Symmetric);
        t.accumulate_outer(v, u, coeff);
        t
    }

    /// `coeff · (u ⊗ u)`.
    pub fn square(u: &[f64], coeff: &Poly) -> Self {
        Self::outer(u, u, coeff, Symmetry::Symmetric)
    }

    fn outer(u: &[f64], v: &[f64], coeff: &Poly, symmetry: Symmetry) -> Self {
        let mut t = PolyTensorField::zero(u.len(), symmetry);
        t.accumulate_outer(u, v, coeff);
        t
    }

    fn accumulate_outer(&mut self, u: &[f64], v: &[f64], coeff: &Poly) {
        for (i, &ui) in u.iter().enumerate() {
            for (j, &vj) in v.iter().enumerate() {
                let w = ui * vj;
                if w != 0.0 {
                    self.comps[i][j] = &self.comps[i][j] + &coeff.scale(w);
                }
            }
        }
    }

    pub fn dim(&self) -> usize {
        self.comps.len()
    }

    pub fn symmetry(&self) -> Symmetry {
        self.symmetry
    }

    pub fn component(&self, i: usize, j: usize) -> &Poly {
        &self.comps[i][j]
    }

    pub fn components(&self) -> &[Vec<Poly>] {
        &self.comps
    }

    pub fn degree(&self) -> usize {
        self.comps.iter().flatten().map(Poly::degree).max().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().flatten().all(Poly::is_zero)
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.comps.iter().flatten().map(Poly::max_abs_coeff).fold(0.0, f64::max)
    }

    pub fn add(&self, other: &PolyTensorField) -> PolyTensorField {
        assert_eq!(self.dim(), other.dim());
        let symmetry = if self.symmetry == other.symmetry { self.symmetry } else { Symmetry::General };
        let comps = self
            .comps
            .iter()
            .zip(&other.comps)
            .map(|(r, s)| r.iter().zip(s).map(|(a, b)| a + b).collect())
            .collect();
        PolyTensorField { comps, symmetry }
    }

    pub fn sub(&self, other: &PolyTensorField) -> PolyTensorField {
        self.add(&other.scale(-1.0))
    }

    pub fn scale(&self, s: f64) -> PolyTensorField {
        let comps = self.comps.iter().map(|r| r.iter().map(|p| p.scale(s)).collect()).collect();
        PolyTensorField { comps, symmetry: self.symmetry }
    }

    pub fn max_abs_diff(&self, other: &PolyTensorField) -> f64 {
        self.sub(other).max_abs_coeff()
    }

    pub fn eval(&self, x: &[f64]) -> DMatrix<f64> {
        let m = self.dim();
        DMatrix::from_fn(m, m, |i, j| self.comps[i][j].eval(x))
    }

    /// `T(α, ·)` for a covector field `α = α_i dx^i`: components `α_i T^{ij}`.
    pub fn contract(&self, covector: &[Poly]) -> PolyVectorField {
        let m = self.dim();
        assert_eq!(covector.len(), m);
        let comps = (0..m)
            .map(|j| {
                covector
                    .iter()
                    .enumerate()
                    .fold(Poly::zero(m), |acc, (i, a)| &acc + &(a * &self.comps[i][j]))
            })
            .collect();
        PolyVectorField::new(comps)
    }

    /// The field `T(df, ·)`: Hamiltonian for antisymmetric `T`, gradient-like for symmetric `T`.
    pub fn field_of(&self, f: &Poly) -> PolyVectorField {
        self.contract(&f.gradient())
    }

    /// `T(df, dg)`.
    pub fn pair(&self, f: &Poly, g: &Poly) -> Poly {
        self.field_of(f).apply(g)
    }

    /// `true` when `T(df, ·)` vanishes at the coefficient level.
    pub fn annihilates(&self, f: &Poly) -> bool {
        self.field_of(f).is_zero()
    }

    /// Cyclic sum `{f,{g,h}} + {g,{h,f}} + {h,{f,g}}`.
    pub fn jacobiator(&self, f: &Poly, g: &Poly, h: &Poly) -> Poly {
        let a = self.pair(f, &self.pair(g, h));
        let b = self.pair(g, &self.pair(h, f));
        let c = self.pair(h, &self.pair(f, g));
        &(&a + &b) + &c
    }

    pub fn restrict(&self, i: usize, value: f64) -> PolyTensorField {
        let comps = self
            .comps
            .iter()
            .map(|r| r.iter().map(|p| p.restrict(i, value)).collect())
            .collect();
        PolyTensorField { comps, symmetry: self.symmetry }
    }

    /// Transforms components under the affine change of coordinates `y = J x + c`.
    ///
    /// `inverse` gives the old coordinates as polynomials in the new ones; the
    /// new components are `J^a_i J^b_j T^{ij}` re-expressed in `y`.
    pub fn transform_affine(&self, jacobian: &DMatrix<f64>, inverse: &[Poly]) -> PolyTensorField {
        let m = self.dim();
        let in_y: Vec<Vec<Poly>> = self
            .comps
            .iter()
            .map(|r| r.iter().map(|p| p.compose(inverse)).collect())
            .collect();
        let mut comps = vec![vec![Poly::zero(m); m]; m];
        for a in 0..m {
            for b in 0..m {
                let mut acc = Poly::zero(m);
                for i in 0..m {
                    for j in 0..m {
                        let w = jacobian[(a, i)] * jacobian[(b, j)];
                        if w != 0.0 {
                            acc = &acc + &in_y[i][j].scale(w);
                        }
                    }
                }
                comps[a][b] = acc;
            }
        }
        PolyTensorField { comps, symmetry: self.symmetry }
    }
}
