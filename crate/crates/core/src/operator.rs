//! Hermitian operators, the orthonormal generalized Gell-Mann basis, and the
//! Lie and Jordan structure constants of the observable algebra.
//!
//! The Lie product is `(i/2)[a, b]` and the Jordan product `(1/2){a, b}`;
//! both map Hermitian operators to Hermitian operators. With respect to an
//! orthonormal basis `{e^μ}` (`Tr(e^μ e^ν) = δ^{μν}`) the structure constants
//! are `c^{μν}_σ = Tr(lie(e^μ, e^ν) e^σ)` and `d^{μν}_σ = Tr(jordan(e^μ, e^ν) e^σ)`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};

/// Absolute Hermiticity tolerance (scaled by the largest entry above one).
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Orthonormality tolerance for operator bases.
pub const BASIS_TOL: f64 = 1e-12;
/// Unitarity tolerance for conjugating matrices.
pub const UNITARY_TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq)]
pub struct HermitianOperator {
    m: CMatrix,
}

impl HermitianOperator {
    pub fn new(m: CMatrix) -> Result<Self> {
        if !m.is_square() || m.nrows() == 0 {
            return Err(Error::InvalidDimension(format!("{}x{} is not a square operator", m.nrows(), m.ncols())));
        }
        let defect = linalg::hermitian_defect(&m);
        if defect > linalg::scaled_tol(&m, HERMITIAN_TOL) {
            return Err(Error::NotHermitian(defect));
        }
        Ok(HermitianOperator { m: linalg::symmetrize(&m) })
    }

    /// Wraps a matrix that is Hermitian by theory, removing roundoff drift.
    pub(crate) fn from_symmetrized(m: CMatrix) -> Self {
        HermitianOperator { m: linalg::symmetrize(&m) }
    }

    pub fn identity(n: usize) -> Self {
        HermitianOperator { m: CMatrix::identity(n, n) }
    }

    pub fn zero(n: usize) -> Self {
        HermitianOperator { m: CMatrix::zeros(n, n) }
    }

    pub fn diagonal(values: &[f64]) -> Self {
        let n = values.len();
        HermitianOperator {
            m: CMatrix::from_fn(n, n, |i, j| if i == j { Complex64::new(values[i], 0.0) } else { Complex64::new(0.0, 0.0) }),
        }
    }

    /// Pauli matrices `σ₁, σ₂, σ₃` for `k = 1, 2, 3`.
    pub fn pauli(k: usize) -> Self {
        let z = Complex64::new(0.0, 0.0);
        let one = Complex64::new(1.0, 0.0);
        let i = Complex64::new(0.0, 1.0);
        let data = match k {
            1 => [z, one, one, z],
            2 => [z, -i, i, z],
            3 => [one, z, z, -one],
            _ => panic!("pauli index must be 1, 2 or 3"),
        };
        HermitianOperator { m: CMatrix::from_row_slice(2, 2, &data) }
    }

    /// Projector onto the computational basis vector `|k⟩`.
    pub fn basis_projector(n: usize, k: usize) -> Self {
        let mut v = vec![0.0; n];
        v[k] = 1.0;
        HermitianOperator::diagonal(&v)
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.m
    }

    pub fn into_matrix(self) -> CMatrix {
        self.m
    }

    pub fn trace(&self) -> f64 {
        linalg::trace_re(&self.m)
    }

    /// `Tr(self · other)`, real for Hermitian arguments.
    pub fn trace_product(&self, other: &HermitianOperator) -> f64 {
        // Σ_ij a_ij b_ji without forming the product
        let n = self.dim();
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                s += (self.m[(i, j)] * other.m[(j, i)]).re;
            }
        }
        s
    }

    pub fn add(&self, other: &HermitianOperator) -> HermitianOperator {
        HermitianOperator { m: &self.m + &other.m }
    }

    pub fn sub(&self, other: &HermitianOperator) -> HermitianOperator {
        HermitianOperator { m: &self.m - &other.m }
    }

    pub fn scale(&self, s: f64) -> HermitianOperator {
        HermitianOperator { m: self.m.scale(s) }
    }

    pub fn max_abs_diff(&self, other: &HermitianOperator) -> f64 {
        linalg::max_abs(&(&self.m - &other.m))
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        linalg::hermitian_eigenvalues(&self.m)
    }

    /// `U self U†`.
    pub fn conjugate_by(&self, u: &CMatrix) -> HermitianOperator {
        HermitianOperator::from_symmetrized(u * &self.m * u.adjoint())
    }
}

fn check_same_dim(a: &HermitianOperator, b: &HermitianOperator) -> Result<()> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch { expected: a.dim(), got: b.dim() });
    }
    Ok(())
}

/// `(i/2)(ab − ba)`.
pub fn lie_product(a: &HermitianOperator, b: &HermitianOperator) -> Result<HermitianOperator> {
    check_same_dim(a, b)?;
    let comm = &a.m * &b.m - &b.m * &a.m;
    Ok(HermitianOperator::from_symmetrized(comm * Complex64::new(0.0, 0.5)))
}

/// `(1/2)(ab + ba)`.
pub fn jordan_product(a: &HermitianOperator, b: &HermitianOperator) -> Result<HermitianOperator> {
    check_same_dim(a, b)?;
    let anti = &a.m * &b.m + &b.m * &a.m;
    Ok(HermitianOperator::from_symmetrized(anti.scale(0.5)))
}

/// Ordered list of `n²` Hermitian operators; orthonormality is checked where it matters.
#[derive(Clone, Debug)]
pub struct OperatorBasis {
    dim: usize,
    elements: Vec<HermitianOperator>,
}

impl OperatorBasis {
    pub fn from_elements(elements: Vec<HermitianOperator>) -> Result<Self> {
        let n = elements.first().map(HermitianOperator::dim).unwrap_or(0);
        if n == 0 || elements.len() != n * n {
            return Err(Error::InvalidDimension(format!(
                "an operator basis in dimension {n} needs {} elements, got {}",
                n * n,
                elements.len()
            )));
        }
        for e in &elements {
            check_same_dim(&elements[0], e)?;
        }
        Ok(OperatorBasis { dim: n, elements })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[HermitianOperator] {
        &self.elements
    }

    pub fn element(&self, mu: usize) -> &HermitianOperator {
        &self.elements[mu]
    }

    /// `max |Tr(e^μ e^ν) − δ^{μν}|`.
    pub fn orthonormality_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for (mu, a) in self.elements.iter().enumerate() {
            for (nu, b) in self.elements.iter().enumerate() {
                let target = if mu == nu { 1.0 } else { 0.0 };
                worst = worst.max((a.trace_product(b) - target).abs());
            }
        }
        worst
    }

    /// Coordinates `x^μ = Tr(op e^μ)`.
    pub fn coordinates(&self, op: &HermitianOperator) -> Result<Vec<f64>> {
        check_same_dim(&self.elements[0], op)?;
        Ok(self.elements.iter().map(|e| op.trace_product(e)).collect())
    }

    /// `Σ x^μ e^μ`.
    pub fn operator(&self, x: &[f64]) -> Result<HermitianOperator> {
        if x.len() != self.len() {
            return Err(Error::DimensionMismatch { expected: self.len(), got: x.len() });
        }
        let n = self.dim;
        let mut m = CMatrix::zeros(n, n);
        for (xi, e) in x.iter().zip(&self.elements) {
            m += e.matrix().scale(*xi);
        }
        Ok(HermitianOperator::from_symmetrized(m))
    }

    /// The basis `{U e^μ U†}`.
    pub fn conjugated(&self, u: &CMatrix) -> Result<OperatorBasis> {
        check_unitary(u, self.dim)?;
        Ok(OperatorBasis { dim: self.dim, elements: self.elements.iter().map(|e| e.conjugate_by(u)).collect() })
    }
}

fn check_unitary(u: &CMatrix, n: usize) -> Result<()> {
    if u.nrows() != n || u.ncols() != n {
        return Err(Error::DimensionMismatch { expected: n, got: u.nrows() });
    }
    let defect = linalg::max_abs(&(u * u.adjoint() - CMatrix::identity(n, n)));
    if defect > UNITARY_TOL {
        return Err(Error::NotUnitary(defect));
    }
    Ok(())
}

/// Orthonormal generalized Gell-Mann basis.
///
/// Ordering: `𝕀/√n`; symmetric pairs `(E_jk + E_kj)/√2` for `j<k` in
/// lexicographic order; antisymmetric pairs `−i(E_jk − E_kj)/√2`; then the
/// diagonal traceless elements `(Σ_{j<l} E_jj − l E_ll)/√(l(l+1))` for
/// `l = 1..n−1`. For `n = 2` this is `(𝕀, σ₁, σ₂, σ₃)/√2`.
pub fn gellmann_basis(n: usize) -> Result<OperatorBasis> {
    if n < 2 {
        return Err(Error::InvalidDimension(format!("operator basis needs n >= 2, got {n}")));
    }
    let z = Complex64::new(0.0, 0.0);
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut elements = Vec::with_capacity(n * n);
    elements.push(HermitianOperator::identity(n).scale(1.0 / (n as f64).sqrt()));
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|j| (j + 1..n).map(move |k| (j, k))).collect();
    for &(j, k) in &pairs {
        let mut m = CMatrix::from_element(n, n, z);
        m[(j, k)] = Complex64::new(s, 0.0);
        m[(k, j)] = Complex64::new(s, 0.0);
        elements.push(HermitianOperator { m });
    }
    for &(j, k) in &pairs {
        let mut m = CMatrix::from_element(n, n, z);
        m[(j, k)] = Complex64::new(0.0, -s);
        m[(k, j)] = Complex64::new(0.0, s);
        elements.push(HermitianOperator { m });
    }
    for l in 1..n {
        let norm = 1.0 / ((l * (l + 1)) as f64).sqrt();
        let mut diag = vec![0.0; n];
        for d in diag.iter_mut().take(l) {
            *d = norm;
        }
        diag[l] = -(l as f64) * norm;
        elements.push(HermitianOperator::diagonal(&diag));
    }
    OperatorBasis::from_elements(elements)
}

/// Lie (`c`) and Jordan (`d`) structure constants, indexed `[μ][ν][σ]`.
#[derive(Clone, Debug, PartialEq)]
pub struct StructureConstants {
    dim: usize,
    size: usize,
    c: Vec<f64>,
    d: Vec<f64>,
}

impl StructureConstants {
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of basis elements, `n²`.
    pub fn size(&self) -> usize {
        self.size
    }

    fn idx(&self, mu: usize, nu: usize, sigma: usize) -> usize {
        (mu * self.size + nu) * self.size + sigma
    }

    pub fn c(&self, mu: usize, nu: usize, sigma: usize) -> f64 {
        self.c[self.idx(mu, nu, sigma)]
    }

    pub fn d(&self, mu: usize, nu: usize, sigma: usize) -> f64 {
        self.d[self.idx(mu, nu, sigma)]
    }

    pub fn c_nested(&self) -> Vec<Vec<Vec<f64>>> {
        self.nested(&self.c)
    }

    pub fn d_nested(&self) -> Vec<Vec<Vec<f64>>> {
        self.nested(&self.d)
    }

    fn nested(&self, flat: &[f64]) -> Vec<Vec<Vec<f64>>> {
        flat.chunks(self.size * self.size)
            .map(|plane| plane.chunks(self.size).map(<[f64]>::to_vec).collect())
            .collect()
    }

    /// Largest elementwise difference in either array.
    pub fn max_abs_diff(&self, other: &StructureConstants) -> f64 {
        self.c
            .iter()
            .zip(&other.c)
            .chain(self.d.iter().zip(&other.d))
            .fold(0.0, |m, (a, b)| m.max((a - b).abs()))
    }

    /// Adds `delta` to one Lie structure constant. Used to check that the
    /// invariant suites are sensitive to corrupted constants.
    #[doc(hidden)]
    pub fn perturb_c(&mut self, mu: usize, nu: usize, sigma: usize, delta: f64) {
        let i = self.idx(mu, nu, sigma);
        self.c[i] += delta;
    }

    /// Largest elementwise deviation of `Σ_σ c^{μν}_σ e^σ` from `lie(e^μ, e^ν)`
    /// and of the analogous Jordan expansion.
    pub fn reconstruction_residual(&self, basis: &OperatorBasis) -> f64 {
        let mut worst: f64 = 0.0;
        let size = self.size;
        for mu in 0..size {
            for nu in 0..size {
                let (a, b) = (basis.element(mu), basis.element(nu));
                let lie = lie_product(a, b).expect("basis elements share a dimension");
                let jor = jordan_product(a, b).expect("basis elements share a dimension");
                let cs: Vec<f64> = (0..size).map(|s| self.c(mu, nu, s)).collect();
                let ds: Vec<f64> = (0..size).map(|s| self.d(mu, nu, s)).collect();
                let lie_rec = basis.operator(&cs).expect("coefficient count matches");
                let jor_rec = basis.operator(&ds).expect("coefficient count matches");
                worst = worst.max(lie.max_abs_diff(&lie_rec)).max(jor.max_abs_diff(&jor_rec));
            }
        }
        worst
    }
}

pub fn structure_constants(basis: &OperatorBasis) -> Result<StructureConstants> {
    let defect = basis.orthonormality_defect();
    if defect > BASIS_TOL {
        return Err(Error::InvalidBasis(defect));
    }
    let size = basis.len();
    let mut c = vec![0.0; size * size * size];
    let mut d = vec![0.0; size * size * size];
    for mu in 0..size {
        for nu in 0..size {
            let (a, b) = (basis.element(mu), basis.element(nu));
            let lie = lie_product(a, b)?;
            let jor = jordan_product(a, b)?;
            for sigma in 0..size {
                let e = basis.element(sigma);
                let i = (mu * size + nu) * size + sigma;
                c[i] = lie.trace_product(e);
                d[i] = jor.trace_product(e);
            }
        }
    }
    Ok(StructureConstants { dim: basis.dim(), size, c, d })
}

/// Structure constants of the conjugated basis `{U e^μ U†}`.
pub fn conjugated_structure_constants(basis: &OperatorBasis, u: &CMatrix) -> Result<StructureConstants> {
    structure_constants(&basis.conjugated(u)?)
}
