//! Lie–Jordan algebra of linear functions `f_a = a^j p_j` on `ℝ³`.
//!
//! Products come from the simplex tensors: `[[f,g]] = Λ(df,dg)` and
//! `f⊙g = G(df,dg)`. Both are proportional to `C`, so every product lands
//! on the `e₃` line and the complexified `⋆ = ½(⊙ + i[[·,·]])` is
//! associative for trivial reasons.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::linalg;
use crate::poly::Poly;
use crate::simplex;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LinearFunctional {
    a: [f64; 3],
}

impl LinearFunctional {
    pub fn new(a: [f64; 3]) -> Self {
        LinearFunctional { a }
    }

    pub fn zero() -> Self {
        Self::new([0.0; 3])
    }

    pub fn coefficients(&self) -> [f64; 3] {
        self.a
    }

    pub fn eval(&self, p: &[f64; 3]) -> f64 {
        self.a.iter().zip(p).map(|(a, p)| a * p).sum()
    }

    pub fn to_poly(&self) -> Poly {
        Poly::linear(&self.a)
    }

    /// Reads back a homogeneous linear polynomial.
    fn from_poly(f: &Poly) -> Self {
        debug_assert!(f.degree() <= 1 && f.coeff(&[0, 0, 0]) == 0.0);
        let mut a = [0.0; 3];
        for (j, aj) in a.iter_mut().enumerate() {
            let mut e = vec![0u8; 3];
            e[j] = 1;
            *aj = f.coeff(&e);
        }
        Self::new(a)
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::new([self.a[0] + other.a[0], self.a[1] + other.a[1], self.a[2] + other.a[2]])
    }

    pub fn scale(&self, s: f64) -> Self {
        Self::new(self.a.map(|x| s * x))
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        (0..3).map(|j| (self.a[j] - other.a[j]).abs()).fold(0.0, f64::max)
    }
}

/// `e₁ = (p₁−p₂)/√3`, `e₂ = (p₂−p₃)/√3`, `e₃ = C`.
pub fn e_basis() -> [LinearFunctional; 3] {
    let s = 1.0 / 3f64.sqrt();
    [
        LinearFunctional::new([s, -s, 0.0]),
        LinearFunctional::new([0.0, s, -s]),
        LinearFunctional::new([1.0, 1.0, 1.0]),
    ]
}

pub fn lie_bracket_fn(f: &LinearFunctional, g: &LinearFunctional) -> LinearFunctional {
    LinearFunctional::from_poly(&simplex::simplex_lambda().pair(&f.to_poly(), &g.to_poly()))
}

pub fn jordan_fn(f: &LinearFunctional, g: &LinearFunctional) -> LinearFunctional {
    LinearFunctional::from_poly(&simplex::simplex_g().pair(&f.to_poly(), &g.to_poly()))
}

/// Element of the complexification, stored as real and imaginary parts.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ComplexFunctional {
    re: LinearFunctional,
    im: LinearFunctional,
}

impl ComplexFunctional {
    pub fn new(re: LinearFunctional, im: LinearFunctional) -> Self {
        ComplexFunctional { re, im }
    }

    pub fn from_coefficients(a: [Complex64; 3]) -> Self {
        Self::new(
            LinearFunctional::new(a.map(|z| z.re)),
            LinearFunctional::new(a.map(|z| z.im)),
        )
    }

    pub fn real(f: LinearFunctional) -> Self {
        Self::new(f, LinearFunctional::zero())
    }

    pub fn re(&self) -> LinearFunctional {
        self.re
    }

    pub fn im(&self) -> LinearFunctional {
        self.im
    }

    pub fn coefficients(&self) -> [Complex64; 3] {
        let (r, i) = (self.re.coefficients(), self.im.coefficients());
        [0, 1, 2].map(|j| Complex64::new(r[j], i[j]))
    }

    pub fn eval(&self, p: &[f64; 3]) -> Complex64 {
        Complex64::new(self.re.eval(p), self.im.eval(p))
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::new(self.re.add(&other.re), self.im.add(&other.im))
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self::new(
            self.re.scale(s.re).add(&self.im.scale(-s.im)),
            self.re.scale(s.im).add(&self.im.scale(s.re)),
        )
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.re.max_abs_diff(&other.re).max(self.im.max_abs_diff(&other.im))
    }
}

fn complexify(
    product: fn(&LinearFunctional, &LinearFunctional) -> LinearFunctional,
    f: &ComplexFunctional,
    g: &ComplexFunctional,
) -> ComplexFunctional {
    let re = product(&f.re, &g.re).add(&product(&f.im, &g.im).scale(-1.0));
    let im = product(&f.re, &g.im).add(&product(&f.im, &g.re));
    ComplexFunctional::new(re, im)
}

/// `f⋆g = ½(f⊙g + i[[f,g]])`, extended complex-bilinearly.
pub fn star_product(f: &ComplexFunctional, g: &ComplexFunctional) -> ComplexFunctional {
    let jordan = complexify(jordan_fn, f, g);
    let lie = complexify(lie_bracket_fn, f, g);
    jordan.add(&lie.scale(Complex64::i())).scale(Complex64::new(0.5, 0.0))
}

pub fn star_associator(f: &ComplexFunctional, g: &ComplexFunctional, h: &ComplexFunctional) -> ComplexFunctional {
    star_product(&star_product(f, g), h).add(&star_product(f, &star_product(g, h)).scale(Complex64::new(-1.0, 0.0)))
}

/// Outcome of solving `u⋆e_j = e_j` (j = 1,2,3) for `u` in the complexification.
#[derive(Clone, Debug, PartialEq)]
pub struct NoUnitCertificate {
    pub rank_system: usize,
    pub rank_augmented: usize,
}

impl NoUnitCertificate {
    /// An inconsistent system proves that no unit exists.
    pub fn proves_no_unit(&self) -> bool {
        self.rank_augmented > self.rank_system
    }
}

/// The map `u ↦ u⋆e_j` is complex-linear in `u`; the system is written over
/// the reals as 18 equations in the 6 unknowns `(Re u, Im u)`.
pub fn no_unit_certificate() -> NoUnitCertificate {
    let basis = e_basis().map(ComplexFunctional::real);
    let unknowns: Vec<ComplexFunctional> = (0..6)
        .map(|k| {
            let mut a = [Complex64::new(0.0, 0.0); 3];
            a[k % 3] = if k < 3 { Complex64::new(1.0, 0.0) } else { Complex64::i() };
            ComplexFunctional::from_coefficients(a)
        })
        .collect();
    let mut m = DMatrix::zeros(18, 6);
    let mut t = DVector::zeros(18);
    for (j, ej) in basis.iter().enumerate() {
        let target = ej.coefficients();
        for c in 0..3 {
            t[6 * j + c] = target[c].re;
            t[6 * j + 3 + c] = target[c].im;
        }
        for (k, u) in unknowns.iter().enumerate() {
            let image = star_product(u, ej).coefficients();
            for c in 0..3 {
                m[(6 * j + c, k)] = image[c].re;
                m[(6 * j + 3 + c, k)] = image[c].im;
            }
        }
    }
    let mut augmented = m.clone().insert_column(6, 0.0);
    augmented.set_column(6, &t);
    NoUnitCertificate { rank_system: linalg::rank(&m), rank_augmented: linalg::rank(&augmented) }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(i: usize) -> LinearFunctional {
        e_basis()[i]
    }

    #[test]
    fn lie_table() {
        assert!(lie_bracket_fn(&e(0), &e(1)).max_abs_diff(&e(2)) < 1e-15);
        assert!(lie_bracket_fn(&e(1), &e(0)).max_abs_diff(&e(2).scale(-1.0)) < 1e-15);
        assert_eq!(lie_bracket_fn(&e(0), &e(2)), LinearFunctional::zero());
        assert_eq!(lie_bracket_fn(&e(1), &e(2)), LinearFunctional::zero());
    }

    #[test]
    fn jordan_table() {
        assert!(jordan_fn(&e(0), &e(0)).max_abs_diff(&e(2).scale(2.0)) < 1e-15);
        assert!(jordan_fn(&e(1), &e(1)).max_abs_diff(&e(2).scale(2.0)) < 1e-15);
        assert!(jordan_fn(&e(0), &e(1)).max_abs_diff(&e(2).scale(-1.0)) < 1e-15);
        for j in 0..3 {
            assert_eq!(jordan_fn(&e(2), &e(j)), LinearFunctional::zero());
        }
    }

    #[test]
    fn star_table() {
        let c = |f| ComplexFunctional::real(f);
        let got = star_product(&c(e(0)), &c(e(1)));
        let expected = ComplexFunctional::new(e(2).scale(-0.5), e(2).scale(0.5));
        assert!(got.max_abs_diff(&expected) < 1e-15);
        for j in 0..3 {
            assert!(star_product(&c(e(2)), &c(e(j))).max_abs_diff(&c(LinearFunctional::zero())) == 0.0);
            assert!(star_product(&c(e(j)), &c(e(2))).max_abs_diff(&c(LinearFunctional::zero())) == 0.0);
        }
    }

    #[test]
    fn complex_scale_matches_coefficients() {
        let f = ComplexFunctional::from_coefficients([Complex64::new(1.0, 2.0), Complex64::new(0.0, -1.0), Complex64::new(3.0, 0.5)]);
        let s = Complex64::new(0.3, -0.7);
        let scaled = f.scale(s).coefficients();
        for (got, z) in scaled.iter().zip(f.coefficients()) {
            assert!((got - s * z).norm() < 1e-15);
        }
    }

    #[test]
    fn no_unit() {
        let cert = no_unit_certificate();
        assert!(cert.proves_no_unit(), "{cert:?}");
    }
}
