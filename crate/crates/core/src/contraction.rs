//! The family `C_λ = λ|x|² + (1−λ)(x₁+x₂+x₃)²` and the bivector it induces.
//!
//! `{x_i, x_j} = ½ ε_{ijk} ∂_k C_λ` gives su(2) brackets at `λ = 1` and the
//! simplex `Λ` (Heisenberg–Weyl) at `λ = 0`.

use nalgebra::{Matrix3, Vector3};

use crate::error::{Error, Result};
use crate::field::{PolyTensorField, PolyVectorField, Symmetry};
use crate::poly::Poly;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ContractionParameter {
    lambda: f64,
}

impl ContractionParameter {
    pub fn new(lambda: f64) -> Result<Self> {
        if !lambda.is_finite() || !(0.0..=1.0).contains(&lambda) {
            return Err(Error::InvalidArgument(format!("lambda must lie in [0, 1], got {lambda}")));
        }
        Ok(ContractionParameter { lambda })
    }

    pub fn value(&self) -> f64 {
        self.lambda
    }
}

/// Quadratic form matrix `M` with `C_λ(x) = xᵀMx`.
fn form(lambda: f64) -> Matrix3<f64> {
    Matrix3::identity() * lambda + Matrix3::from_element(1.0 - lambda)
}

pub fn casimir_value(lambda: f64, x: &[f64; 3]) -> f64 {
    let v = Vector3::from_column_slice(x);
    v.dot(&(form(lambda) * v))
}

pub fn casimir_poly(lambda: f64) -> Poly {
    let m = form(lambda);
    let mut c = Poly::zero(3);
    for i in 0..3 {
        for j in 0..3 {
            c = &c + &(&Poly::var(3, i) * &Poly::var(3, j)).scale(m[(i, j)]);
        }
    }
    c
}

fn levi_civita(i: usize, j: usize, k: usize) -> f64 {
    match (i, j, k) {
        (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1.0,
        (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -1.0,
        _ => 0.0,
    }
}

pub fn bivector_from_casimir(lambda: f64) -> PolyTensorField {
    let grad = casimir_poly(lambda).gradient();
    let comps = (0..3)
        .map(|i| {
            (0..3)
                .map(|j| (0..3).fold(Poly::zero(3), |acc, k| &acc + &grad[k].scale(0.5 * levi_civita(i, j, k))))
                .collect()
        })
        .collect();
    PolyTensorField::from_components(comps, Symmetry::Antisymmetric).expect("ε-contraction is antisymmetric")
}

/// `X_{x_i}` for the three coordinate functions.
pub fn coordinate_hamiltonians(lambda: f64) -> [PolyVectorField; 3] {
    let t = bivector_from_casimir(lambda);
    [0, 1, 2].map(|i| t.field_of(&Poly::var(3, i)))
}

/// Signed distance along `n = (1,1,1)/√3` from `b` to the level set
/// `C_λ = 1`, taking the root closest to the plane.
///
/// `b` is taken to lie on `Σx = 1`, which is used exactly so that the
/// `λ = 0` level set coincides with the plane without roundoff.
pub fn level_set_height(lambda: f64, b: &[f64; 3]) -> Option<f64> {
    let sqrt3 = 3f64.sqrt();
    let b = Vector3::from_column_slice(b);
    // C_λ(b + s n) − 1 = qa s² + qb s + qc
    let qa = 3.0 - 2.0 * lambda;
    let qb = 2.0 * (lambda * b.sum() / sqrt3 + (1.0 - lambda) * sqrt3);
    let qc = lambda * (b.norm_squared() - 1.0);
    let disc = qb * qb - 4.0 * qa * qc;
    if disc < 0.0 {
        return None;
    }
    let sq = disc.sqrt();
    // numerically stable pair of roots
    let q = -0.5 * (qb + qb.signum() * sq);
    let roots = [if q != 0.0 { qc / q } else { 0.0 }, if qa != 0.0 { q / qa } else { f64::INFINITY }];
    roots.into_iter().filter(|r| r.is_finite()).min_by(|x, y| x.abs().total_cmp(&y.abs()))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FlatnessProfile {
    pub lambda: f64,
    pub max_deviation: f64,
    pub evaluated: usize,
    /// Grid points where the level set has no real intersection with the normal line.
    pub excluded: usize,
}

/// Maximum `|height|` over the barycentric grid `{(i, j, k)/grid : i+j+k = grid}`.
pub fn flatness_profile(lambda: f64, grid: usize) -> Result<FlatnessProfile> {
    ContractionParameter::new(lambda)?;
    if grid < 2 {
        return Err(Error::InvalidArgument(format!("grid must be at least 2, got {grid}")));
    }
    let g = grid as f64;
    let mut profile = FlatnessProfile { lambda, max_deviation: 0.0, evaluated: 0, excluded: 0 };
    for i in 0..=grid {
        for j in 0..=grid - i {
            let k = grid - i - j;
            match level_set_height(lambda, &[i as f64 / g, j as f64 / g, k as f64 / g]) {
                Some(h) => {
                    profile.evaluated += 1;
                    profile.max_deviation = profile.max_deviation.max(h.abs());
                }
                None => profile.excluded += 1,
            }
        }
    }
    Ok(profile)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simplex::simplex_lambda;

    #[test]
    fn casimir_fixtures() {
        for l in [0.0, 0.3, 1.0] {
            assert_eq!(casimir_value(l, &[1.0, 0.0, 0.0]), 1.0);
        }
        assert_eq!(casimir_value(1.0, &[1.0, 1.0, 1.0]), 3.0);
        let (a, b, c) = (0.3, -1.1, 2.0);
        assert!((casimir_value(0.0, &[a, b, c]) - (a + b + c) * (a + b + c)).abs() < 1e-14);
        assert!((casimir_poly(0.4).eval(&[a, b, c]) - casimir_value(0.4, &[a, b, c])).abs() < 1e-14);
    }

    #[test]
    fn endpoints() {
        assert!(bivector_from_casimir(0.0).max_abs_diff(&simplex_lambda()) == 0.0);
        let su2 = bivector_from_casimir(1.0);
        for (i, j, k) in [(0, 1, 2), (1, 2, 0), (2, 0, 1)] {
            assert_eq!(su2.component(i, j), &Poly::var(3, k));
        }
    }

    #[test]
    fn casimir_is_central() {
        for l in [0.0, 0.3, 0.7, 1.0] {
            assert!(bivector_from_casimir(l).annihilates(&casimir_poly(l)));
        }
    }

    #[test]
    fn flatness_endpoints() {
        assert_eq!(flatness_profile(0.0, 6).unwrap().max_deviation, 0.0);
        let one = flatness_profile(1.0, 6).unwrap();
        assert!((one.max_deviation - (1.0 - 1.0 / 3f64.sqrt())).abs() < 1e-14, "{one:?}");
        assert_eq!(one.excluded, 0);
        assert!(flatness_profile(0.5, 1).is_err());
        assert!(flatness_profile(1.5, 4).is_err());
    }

    #[test]
    fn vertices_lie_on_every_level_set() {
        for l in [0.0, 0.25, 0.5, 1.0] {
            assert!(level_set_height(l, &[0.0, 1.0, 0.0]).unwrap().abs() < 1e-15);
        }
    }
}
