//! Sparse multivariate polynomials with real coefficients.
//!
//! Every field and tensor in this crate has polynomial components, so the
//! identities we check (Casimirs, Jacobi, commutators, Lie derivatives) are
//! decided by exact coefficient arithmetic. Degrees are unbounded here; the
//! degree cap lives at the constructors that accept user functions.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// Exponent vector of a monomial, one entry per ambient coordinate.
pub type Monomial = Vec<u8>;

#[derive(Clone, PartialEq)]
pub struct Poly {
    dim: usize,
    terms: BTreeMap<Monomial, f64>,
}

impl Poly {
    pub fn zero(dim: usize) -> Self {
        Poly { dim, terms: BTreeMap::new() }
    }

    pub fn constant(dim: usize, c: f64) -> Self {
        let mut p = Poly::zero(dim);
        p.add_term(vec![0; dim], c);
        p
    }

    /// The coordinate function `x_i`.
    pub fn var(dim: usize, i: usize) -> Self {
        assert!(i < dim, "variable index {i} out of range for dim {dim}");
        let mut e = vec![0; dim];
        e[i] = 1;
        let mut p = Poly::zero(dim);
        p.add_term(e, 1.0);
        p
    }

    /// `Σ a_i x_i`.
    pub fn linear(coeffs: &[f64]) -> Self {
        let dim = coeffs.len();
        let mut p = Poly::zero(dim);
        for (i, &a) in coeffs.iter().enumerate() {
            let mut e = vec![0; dim];
            e[i] = 1;
            p.add_term(e, a);
        }
        p
    }

    /// `c + Σ a_i x_i`.
    pub fn affine(c: f64, coeffs: &[f64]) -> Self {
        &Poly::linear(coeffs) + &Poly::constant(coeffs.len(), c)
    }

    pub fn from_terms(dim: usize, terms: impl IntoIterator<Item = (Monomial, f64)>) -> Self {
        let mut p = Poly::zero(dim);
        for (e, c) in terms {
            assert_eq!(e.len(), dim, "monomial length must equal dim");
            p.add_term(e, c);
        }
        p
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, f64)> {
        self.terms.iter().map(|(e, &c)| (e, c))
    }

    pub fn coeff(&self, e: &[u8]) -> f64 {
        self.terms.get(e).copied().unwrap_or(0.0)
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    fn add_term(&mut self, e: Monomial, c: f64) {
        if c == 0.0 {
            return;
        }
        match self.terms.entry(e) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                // drop exact cancellations so `is_zero` is a coefficient-level test
                if *o.get() == 0.0 {
                    o.remove();
                }
            }
        }
    }

    /// Exact zero test: no nonzero coefficient remains.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.terms.values().fold(0.0, |m, c| m.max(c.abs()))
    }

    /// Total degree; the zero polynomial has degree 0.
    pub fn degree(&self) -> usize {
        self.terms
            .keys()
            .map(|e| e.iter().map(|&k| k as usize).sum())
            .max()
            .unwrap_or(0)
    }

    pub fn scale(&self, s: f64) -> Poly {
        let mut p = Poly::zero(self.dim);
        for (e, &c) in &self.terms {
            p.add_term(e.clone(), c * s);
        }
        p
    }

    pub fn derivative(&self, i: usize) -> Poly {
        let mut p = Poly::zero(self.dim);
        for (e, &c) in &self.terms {
            if e[i] == 0 {
                continue;
            }
            let mut d = e.clone();
            d[i] -= 1;
            p.add_term(d, c * e[i] as f64);
        }
        p
    }

    pub fn gradient(&self) -> Vec<Poly> {
        (0..self.dim).map(|i| self.derivative(i)).collect()
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        assert_eq!(x.len(), self.dim, "point dimension mismatch");
        self.terms
            .iter()
            .map(|(e, &c)| {
                e.iter()
                    .zip(x)
                    .fold(c, |acc, (&k, &xi)| acc * xi.powi(k as i32))
            })
            .sum()
    }

    /// Substitutes `x_i -> images[i]`. All images must share one ambient dimension,
    /// which becomes the dimension of the result.
    pub fn compose(&self, images: &[Poly]) -> Poly {
        assert_eq!(images.len(), self.dim, "one image per variable");
        let out_dim = images.first().map(|p| p.dim).unwrap_or(0);
        let mut out = Poly::zero(out_dim);
        for (e, &c) in &self.terms {
            let mut term = Poly::constant(out_dim, c);
            for (i, &k) in e.iter().enumerate() {
                for _ in 0..k {
                    term = &term * &images[i];
                }
            }
            out = &out + &term;
        }
        out
    }

    /// Fixes `x_i = value`, keeping the ambient dimension.
    pub fn restrict(&self, i: usize, value: f64) -> Poly {
        let mut p = Poly::zero(self.dim);
        for (e, &c) in &self.terms {
            let mut r = e.clone();
            r[i] = 0;
            p.add_term(r, c * value.powi(e[i] as i32));
        }
        p
    }

    /// Drops coefficients with magnitude `<= tol`.
    pub fn chop(&self, tol: f64) -> Poly {
        let mut p = Poly::zero(self.dim);
        for (e, &c) in &self.terms {
            if c.abs() > tol {
                p.add_term(e.clone(), c);
            }
        }
        p
    }

    /// Largest coefficient difference against `other`.
    pub fn max_abs_diff(&self, other: &Poly) -> f64 {
        (self - other).max_abs_coeff()
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{c}")?;
            for (i, &k) in e.iter().enumerate() {
                match k {
                    0 => {}
                    1 => write!(f, "*x{i}")?,
                    _ => write!(f, "*x{i}^{k}")?,
                }
            }
        }
        Ok(())
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        assert_eq!(self.dim, rhs.dim, "polynomial dimension mismatch");
        let mut p = self.clone();
        for (e, &c) in &rhs.terms {
            p.add_term(e.clone(), c);
        }
        p
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        assert_eq!(self.dim, rhs.dim, "polynomial dimension mismatch");
        let mut p = self.clone();
        for (e, &c) in &rhs.terms {
            p.add_term(e.clone(), -c);
        }
        p
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        assert_eq!(self.dim, rhs.dim, "polynomial dimension mismatch");
        let mut p = Poly::zero(self.dim);
        for (e1, &c1) in &self.terms {
            for (e2, &c2) in &rhs.terms {
                let e: Monomial = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                p.add_term(e, c1 * c2);
            }
        }
        p
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.scale(-1.0)
    }
}
