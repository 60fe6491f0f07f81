//! Exact calculus on polynomial fields and fixed-step RK4 integration.
//!
//! Commutators and Lie derivatives are computed coefficient by coefficient,
//! so identities such as `[X_a, Y_b] = 0` are decided exactly. Numerical
//! integration is only used to cross-check closed-form flows.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{PolyTensorField, PolyVectorField, Symmetry};
use crate::linalg;
use crate::poly::{Monomial, Poly};
use crate::serialize::{fmt17, json_array1, json_array2};

/// `[V, W]^i = V^j ∂_j W^i − W^j ∂_j V^i`.
pub fn commutator(v: &PolyVectorField, w: &PolyVectorField) -> PolyVectorField {
    assert_eq!(v.dim(), w.dim(), "fields live on different spaces");
    let comps = (0..v.dim())
        .map(|i| &v.apply(w.component(i)) - &w.apply(v.component(i)))
        .collect();
    PolyVectorField::new(comps)
}

/// `(L_V T)^{ij} = V^k ∂_k T^{ij} − T^{kj} ∂_k V^i − T^{ik} ∂_k V^j`.
pub fn lie_derivative_tensor(v: &PolyVectorField, t: &PolyTensorField) -> PolyTensorField {
    let m = t.dim();
    assert_eq!(v.dim(), m, "field and tensor live on different spaces");
    let dv = v.jacobian();
    let entry = |i: usize, j: usize| {
        let mut acc = v.apply(t.component(i, j));
        for k in 0..m {
            acc = &acc - &(t.component(k, j) * &dv[i][k]);
            acc = &acc - &(t.component(i, k) * &dv[j][k]);
        }
        acc
    };
    let mut comps = vec![vec![Poly::zero(m); m]; m];
    for i in 0..m {
        for j in 0..m {
            // mirror the upper triangle so the symmetry type survives roundoff
            comps[i][j] = match (t.symmetry(), j < i) {
                (Symmetry::Symmetric, true) => comps[j][i].clone(),
                (Symmetry::Antisymmetric, true) => comps[j][i].scale(-1.0),
                _ => entry(i, j),
            };
        }
    }
    PolyTensorField::from_components(comps, t.symmetry())
        .expect("Lie derivative preserves the symmetry type")
}

/// A field flattened for fast repeated evaluation.
struct CompiledField {
    comps: Vec<Vec<(f64, Vec<(usize, i32)>)>>,
}

impl CompiledField {
    fn new(field: &PolyVectorField) -> Self {
        let comps = field
            .components()
            .iter()
            .map(|p| {
                p.terms()
                    .map(|(e, c)| {
                        let powers = e
                            .iter()
                            .enumerate()
                            .filter(|(_, &k)| k > 0)
                            .map(|(i, &k)| (i, k as i32))
                            .collect();
                        (c, powers)
                    })
                    .collect()
            })
            .collect();
        CompiledField { comps }
    }

    fn eval_into(&self, x: &[f64], out: &mut [f64]) {
        for (o, terms) in out.iter_mut().zip(&self.comps) {
            *o = terms
                .iter()
                .map(|(c, powers)| powers.iter().fold(*c, |acc, &(i, k)| acc * x[i].powi(k)))
                .sum();
        }
    }
}

struct Rk4 {
    field: CompiledField,
    k: [Vec<f64>; 4],
    tmp: Vec<f64>,
}

impl Rk4 {
    fn new(field: &PolyVectorField) -> Self {
        let m = field.dim();
        Rk4 { field: CompiledField::new(field), k: std::array::from_fn(|_| vec![0.0; m]), tmp: vec![0.0; m] }
    }

    fn step(&mut self, x: &mut [f64], h: f64) {
        let [k1, k2, k3, k4] = &mut self.k;
        let tmp = &mut self.tmp;
        let shifted = |tmp: &mut Vec<f64>, k: &[f64], frac: f64| {
            for ((t, xi), ki) in tmp.iter_mut().zip(x.iter()).zip(k) {
                *t = xi + frac * h * ki;
            }
        };
        self.field.eval_into(x, k1);
        shifted(tmp, k1, 0.5);
        self.field.eval_into(tmp, k2);
        shifted(tmp, k2, 0.5);
        self.field.eval_into(tmp, k3);
        shifted(tmp, k3, 1.0);
        self.field.eval_into(tmp, k4);
        for i in 0..x.len() {
            x[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryMeta {
    pub generator: String,
    pub method: String,
    pub step: f64,
}

/// Time-stamped flow samples. Times strictly increase; every point has the same dimension.
#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory {
    times: Vec<f64>,
    points: Vec<Vec<f64>>,
    meta: TrajectoryMeta,
}

impl Trajectory {
    pub fn new(times: Vec<f64>, points: Vec<Vec<f64>>, meta: TrajectoryMeta) -> Result<Self> {
        if times.len() != points.len() || times.is_empty() {
            return Err(Error::InvalidArgument("trajectory needs one point per time".into()));
        }
        if times.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidArgument("trajectory times must strictly increase".into()));
        }
        let m = points[0].len();
        if let Some(p) = points.iter().find(|p| p.len() != m) {
            return Err(Error::DimensionMismatch { expected: m, got: p.len() });
        }
        Ok(Trajectory { times, points, meta })
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    pub fn meta(&self) -> &TrajectoryMeta {
        &self.meta
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.points[0].len()
    }

    pub fn endpoint(&self) -> &[f64] {
        self.points.last().expect("trajectory is never empty")
    }

    pub fn with_generator(mut self, generator: impl Into<String>) -> Self {
        self.meta.generator = generator.into();
        self
    }

    /// CSV with header `t,x0,x1,...`, 17 significant digits, `\n` line endings.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t");
        for i in 0..self.dim() {
            out.push_str(&format!(",x{i}"));
        }
        out.push('\n');
        for (t, p) in self.times.iter().zip(&self.points) {
            out.push_str(&fmt17(*t));
            for x in p {
                out.push(',');
                out.push_str(&fmt17(*x));
            }
            out.push('\n');
        }
        out
    }

    /// JSON object `{"meta": {...}, "times": [...], "points": [[...]]}`.
    pub fn to_json(&self) -> String {
        let meta = serde_json::to_string(&self.meta).expect("metadata is plain data");
        format!(
            "{{\"meta\":{meta},\"times\":{},\"points\":{}}}\n",
            json_array1(&self.times),
            json_array2(&self.points)
        )
    }
}

/// Classical fixed-step RK4 over `[0, t_max]` with `steps` steps.
///
/// A non-finite state aborts with [`Error::Divergence`] carrying the
/// trajectory up to the last finite point.
pub fn integrate(field: &PolyVectorField, x0: &[f64], t_max: f64, steps: usize) -> Result<Trajectory> {
    if steps == 0 {
        return Err(Error::InvalidArgument("steps must be at least 1".into()));
    }
    if !(t_max.is_finite() && t_max > 0.0) {
        return Err(Error::InvalidArgument(format!("t_max must be finite and positive, got {t_max}")));
    }
    if x0.len() != field.dim() {
        return Err(Error::DimensionMismatch { expected: field.dim(), got: x0.len() });
    }
    let h = t_max / steps as f64;
    let meta = TrajectoryMeta { generator: "unnamed".into(), method: "rk4".into(), step: h };
    let mut rk = Rk4::new(field);
    let mut x = x0.to_vec();
    let mut times = Vec::with_capacity(steps + 1);
    let mut points = Vec::with_capacity(steps + 1);
    times.push(0.0);
    points.push(x.clone());
    for s in 1..=steps {
        rk.step(&mut x, h);
        let t = if s == steps { t_max } else { s as f64 * h };
        if x.iter().any(|v| !v.is_finite()) {
            let partial = Trajectory { times, points, meta };
            return Err(Error::Divergence { at: t, partial: Box::new(partial) });
        }
        times.push(t);
        points.push(x.clone());
    }
    Trajectory::new(times, points, meta)
}

/// Endpoint of the RK4 flow for time `t` of either sign.
pub fn flow_endpoint(field: &PolyVectorField, x0: &[f64], t: f64, steps: usize) -> Result<Vec<f64>> {
    if steps == 0 || !t.is_finite() {
        return Err(Error::InvalidArgument("need steps >= 1 and finite t".into()));
    }
    if x0.len() != field.dim() {
        return Err(Error::DimensionMismatch { expected: field.dim(), got: x0.len() });
    }
    let h = t / steps as f64;
    let mut rk = Rk4::new(field);
    let mut x = x0.to_vec();
    for s in 1..=steps {
        rk.step(&mut x, h);
        if x.iter().any(|v| !v.is_finite()) {
            let partial = Trajectory::new(vec![0.0], vec![x0.to_vec()], TrajectoryMeta {
                generator: "unnamed".into(),
                method: "rk4".into(),
                step: h,
            })?;
            return Err(Error::Divergence { at: s as f64 * h, partial: Box::new(partial) });
        }
    }
    Ok(x)
}

/// How to compare commutators against the span of a family.
#[derive(Clone, Debug, Default)]
pub struct ClosureOptions {
    /// Restrict everything to the leaf `x_i = value` before fitting.
    pub leaf: Option<(usize, f64)>,
    /// Fit onto `prefactor · V_k` instead of `V_k`.
    pub prefactor: Option<Poly>,
}

#[derive(Clone, Debug)]
pub struct ClosureReport {
    /// `[V_i, V_j] ≈ Σ_k constants[i][j][k] V_k` (minimum-norm solution).
    pub constants: Vec<Vec<Vec<f64>>>,
    /// Largest coefficient of the fit remainder, per pair.
    pub residuals: Vec<Vec<f64>>,
    pub max_residual: f64,
    /// Numerical rank of the fit basis.
    pub rank: usize,
    pub rank_deficient: bool,
}

/// Fits every pairwise commutator of `fields` onto their span.
pub fn closure_fit(fields: &[PolyVectorField], opts: &ClosureOptions) -> Result<ClosureReport> {
    if fields.len() < 2 {
        return Err(Error::InvalidArgument("closure fit needs at least two fields".into()));
    }
    let m = fields[0].dim();
    if let Some(f) = fields.iter().find(|f| f.dim() != m) {
        return Err(Error::DimensionMismatch { expected: m, got: f.dim() });
    }
    let project = |f: &PolyVectorField| match opts.leaf {
        Some((i, v)) => f.restrict(i, v),
        None => f.clone(),
    };
    let basis: Vec<PolyVectorField> = fields
        .iter()
        .map(|f| match &opts.prefactor {
            Some(p) => project(&f.mul_fn(p)),
            None => project(f),
        })
        .collect();
    let k = fields.len();
    let mut comms = vec![vec![PolyVectorField::zero(m); k]; k];
    for i in 0..k {
        for j in (i + 1)..k {
            let c = project(&commutator(&fields[i], &fields[j]));
            comms[j][i] = c.scale(-1.0);
            comms[i][j] = c;
        }
    }

    // common coordinate system: (component, monomial)
    let mut keys: Vec<(usize, Monomial)> = Vec::new();
    {
        let mut seen = std::collections::BTreeSet::new();
        let all = basis.iter().chain(comms.iter().flatten());
        for f in all {
            for (ci, p) in f.components().iter().enumerate() {
                for (e, _) in p.terms() {
                    seen.insert((ci, e.clone()));
                }
            }
        }
        keys.extend(seen);
    }
    let flatten = |f: &PolyVectorField| -> DVector<f64> {
        DVector::from_iterator(keys.len(), keys.iter().map(|(ci, e)| f.component(*ci).coeff(e)))
    };
    let a = DMatrix::from_columns(&basis.iter().map(flatten).collect::<Vec<_>>());
    let rank = linalg::rank(&a);

    let mut constants = vec![vec![vec![0.0; k]; k]; k];
    let mut residuals = vec![vec![0.0; k]; k];
    let mut max_residual: f64 = 0.0;
    for i in 0..k {
        for j in 0..k {
            if i == j {
                continue;
            }
            let b = flatten(&comms[i][j]);
            let (x, _) = linalg::lstsq(&a, &b);
            let r = (&a * &x - &b).amax();
            constants[i][j] = x.iter().copied().collect();
            residuals[i][j] = r;
            max_residual = max_residual.max(r);
        }
    }
    Ok(ClosureReport { constants, residuals, max_residual, rank, rank_deficient: rank < k })
}
