//! Pseudo-stochastic, stochastic and bistochastic 3×3 matrices.
//!
//! Convention: matrices act on column vectors `p`, and normalization is
//! preserved when `(1,1,1)A = (1,1,1)`, i.e. every **column** sums to one.
//! Much of the Markov-chain literature uses the transpose.

use nalgebra::{DMatrix, Matrix3, Vector3};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::PolyVectorField;
use crate::flow;
use crate::linalg;
use crate::simplex::{Chart, ProbabilityVector};

pub type RealMatrix3 = Matrix3<f64>;

pub const COLUMN_SUM_TOL: f64 = 1e-10;
pub const ENTRY_TOL: f64 = 1e-12;
pub const SINGULAR_TOL: f64 = 1e-12;
pub const UNIT_DET_TOL: f64 = 1e-10;
/// RK4 steps per unit time when exponentiating a generator.
pub const STEPS_PER_UNIT_TIME: f64 = 1000.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub pseudo_stochastic: bool,
    pub stochastic: bool,
    pub bistochastic: bool,
    pub invertible: bool,
    pub unit_determinant: bool,
}

pub fn classify(a: &RealMatrix3) -> Classification {
    let columns_ok = (0..3).all(|j| (a.column(j).sum() - 1.0).abs() <= COLUMN_SUM_TOL);
    let rows_ok = (0..3).all(|i| (a.row(i).sum() - 1.0).abs() <= COLUMN_SUM_TOL);
    let nonneg = a.iter().all(|&x| x >= -ENTRY_TOL);
    let det = a.determinant();
    Classification {
        pseudo_stochastic: columns_ok,
        stochastic: columns_ok && nonneg,
        bistochastic: columns_ok && nonneg && rows_ok,
        invertible: det.abs() > SINGULAR_TOL,
        unit_determinant: (det - 1.0).abs() <= UNIT_DET_TOL,
    }
}

pub fn is_permutation(a: &RealMatrix3) -> bool {
    let binary = a.iter().all(|&x| x.abs() <= ENTRY_TOL || (x - 1.0).abs() <= ENTRY_TOL);
    binary && classify(a).bistochastic
}

pub fn permutation_matrices() -> [RealMatrix3; 6] {
    [[0, 1, 2], [1, 0, 2], [0, 2, 1], [2, 1, 0], [1, 2, 0], [2, 0, 1]].map(|perm| {
        let mut m = RealMatrix3::zeros();
        for (j, &i) in perm.iter().enumerate() {
            m[(i, j)] = 1.0;
        }
        m
    })
}

/// Time-`t` flow of an x-chart generator on the leaf `x₃ = 0`, written as
/// the matrix whose columns are the images of the three simplex vertices.
pub fn isl2_exponential(generator: &PolyVectorField, t: f64) -> Result<RealMatrix3> {
    if generator.dim() != 3 {
        return Err(Error::DimensionMismatch { expected: 3, got: generator.dim() });
    }
    if generator.restrict(2, 0.0).degree() > 1 {
        return Err(Error::NotAffine);
    }
    if !t.is_finite() {
        return Err(Error::InvalidArgument(format!("time must be finite, got {t}")));
    }
    if t == 0.0 {
        return Ok(RealMatrix3::identity());
    }
    let steps = (t.abs() * STEPS_PER_UNIT_TIME).ceil() as usize;
    let mut a = RealMatrix3::zeros();
    for j in 0..3 {
        let mut vertex = [0.0; 3];
        vertex[j] = 1.0;
        let x0 = Chart::X.forward(&vertex)?;
        let x1 = flow::flow_endpoint(generator, &x0, t, steps)?;
        let p1 = Chart::X.inverse(&x1)?;
        a.set_column(j, &Vector3::from_column_slice(&p1));
    }
    Ok(a)
}

/// A simplex point whose image under `a` has a negative entry, if any.
///
/// The smallest image entry is linear in `p`, so its minimum over the
/// triangle sits at a vertex.
pub fn positivity_escape_witness(a: &RealMatrix3) -> Option<ProbabilityVector> {
    let (j, min) = (0..3)
        .map(|j| (j, a.column(j).min()))
        .min_by(|x, y| x.1.total_cmp(&y.1))
        .expect("three columns");
    if min >= -ENTRY_TOL {
        return None;
    }
    let mut p = vec![0.0; 3];
    p[j] = 1.0;
    Some(ProbabilityVector::new(p).expect("three entries"))
}

#[derive(Clone, Debug, PartialEq)]
pub struct InverseProbe {
    pub inverse: RealMatrix3,
    pub inverse_bistochastic: bool,
    pub is_permutation: bool,
}

pub fn bistochastic_inverse_probe(b: &RealMatrix3) -> Result<InverseProbe> {
    if !classify(b).bistochastic {
        return Err(Error::NotBistochastic);
    }
    let det = b.determinant();
    if det.abs() <= SINGULAR_TOL {
        return Err(Error::Singular(det));
    }
    let inverse = b.try_inverse().ok_or(Error::Singular(det))?;
    Ok(InverseProbe {
        inverse,
        inverse_bistochastic: classify(&inverse).bistochastic,
        is_permutation: is_permutation(b),
    })
}

/// Convex combinations `Σ w_k P_k` of the six permutations with weights on a
/// grid of `resolution` steps, over every pair and triple of permutations.
pub fn birkhoff_mesh(resolution: usize) -> Vec<RealMatrix3> {
    let perms = permutation_matrices();
    let m = resolution.max(1);
    let mut out = Vec::new();
    for i in 0..6 {
        for j in i + 1..6 {
            for k in j..6 {
                for a in 0..=m {
                    for b in 0..=m - a {
                        let c = m - a - b;
                        if k == j && c > 0 {
                            continue;
                        }
                        let w = |x: usize| x as f64 / m as f64;
                        out.push(perms[i] * w(a) + perms[j] * w(b) + perms[k] * w(c));
                    }
                }
            }
        }
    }
    out
}

/// Mesh samples whose inverse is bistochastic although they are not
/// permutations. Singular samples are skipped.
pub fn birkhoff_inverse_violations(samples: &[RealMatrix3]) -> Vec<RealMatrix3> {
    samples
        .iter()
        .filter_map(|b| bistochastic_inverse_probe(b).ok())
        .filter(|r| r.inverse_bistochastic && !r.is_permutation)
        .map(|r| r.inverse.try_inverse().expect("inverse of an inverse"))
        .collect()
}

/// `9 − rank` of the linear map `A ↦ (1,1,1)A` on 3×3 matrices.
pub fn pseudo_stochastic_tangent_dimension() -> usize {
    let mut map = DMatrix::zeros(3, 9);
    for col in 0..3 {
        for row in 0..3 {
            map[(col, 3 * col + row)] = 1.0;
        }
    }
    9 - linalg::rank(&map)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simplex::{isl2_family, quadratic_hamiltonians};

    fn example() -> RealMatrix3 {
        RealMatrix3::new(1.5, 0.0, 0.0, -0.5, 1.0, 0.0, 0.0, 0.0, 1.0)
    }

    #[test]
    fn classification_fixtures() {
        let id = classify(&RealMatrix3::identity());
        assert!(id.pseudo_stochastic && id.stochastic && id.bistochastic && id.invertible && id.unit_determinant);
        for p in permutation_matrices() {
            let c = classify(&p);
            assert!(c.bistochastic && c.invertible);
            assert!(is_permutation(&p));
        }
        let c = classify(&example());
        assert!(c.pseudo_stochastic && !c.stochastic);
    }

    #[test]
    fn escape_witness_fixture() {
        let w = positivity_escape_witness(&example()).unwrap();
        assert_eq!(w.values(), &[1.0, 0.0, 0.0]);
        let image = example() * Vector3::new(1.0, 0.0, 0.0);
        assert_eq!(image, Vector3::new(1.5, -0.5, 0.0));
        assert!(positivity_escape_witness(&RealMatrix3::identity()).is_none());
    }

    #[test]
    fn inverse_probe_fixtures() {
        // uniform bistochastic matrix J/3 mixed with the identity
        let j = RealMatrix3::from_element(1.0);
        let b = j / 9.0 + RealMatrix3::identity() * (2.0 / 3.0);
        let r = bistochastic_inverse_probe(&b).unwrap();
        let expected = (RealMatrix3::identity() - j / 9.0) * 1.5;
        assert!((r.inverse - expected).amax() < 1e-14);
        assert!(r.inverse.min() < 0.0 && !r.inverse_bistochastic);

        let p = permutation_matrices();
        assert!(bistochastic_inverse_probe(&p[1]).unwrap().inverse_bistochastic);
        let half = (RealMatrix3::identity() + p[1]) * 0.5;
        assert!(matches!(bistochastic_inverse_probe(&half), Err(Error::Singular(_))));
        assert!(matches!(bistochastic_inverse_probe(&example()), Err(Error::NotBistochastic)));
    }

    #[test]
    fn tangent_dimension_is_six() {
        assert_eq!(pseudo_stochastic_tangent_dimension(), 6);
    }

    #[test]
    fn exponential_fixtures() {
        let [_, _, f3] = quadratic_hamiltonians();
        assert_eq!(isl2_exponential(&f3, 0.0).unwrap(), RealMatrix3::identity());
        let a = isl2_exponential(&f3, 1.0).unwrap();
        let c = classify(&a);
        assert!(c.pseudo_stochastic && c.unit_determinant, "{a}");
        for g in isl2_family() {
            assert!(classify(&isl2_exponential(&g, 0.7).unwrap()).pseudo_stochastic);
        }
    }

    #[test]
    fn non_affine_generator_rejected() {
        let x = crate::Poly::var(3, 0);
        let quad = PolyVectorField::new(vec![&x * &x, crate::Poly::zero(3), crate::Poly::zero(3)]);
        assert!(matches!(isl2_exponential(&quad, 1.0), Err(Error::NotAffine)));
    }

    #[test]
    fn birkhoff_mesh_has_no_violations() {
        let mesh = birkhoff_mesh(4);
        assert!(mesh.iter().all(|b| classify(b).bistochastic));
        assert!(birkhoff_inverse_violations(&mesh).is_empty());
    }
}
