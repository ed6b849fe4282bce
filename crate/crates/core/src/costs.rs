//! Benchmark objective families and their centralized optimum.
//!
//! * `quartic`: `f_i(x) = a_i (x - b_i)^4`, convex, one parameter pair per node.
//! * `mlloss`: `f_i(x) = sum_j 2x^2 + 3 sin^2 x + a_ij cos x + b_ij x`, locally
//!   nonconvex; the `a` and `b` arrays each sum to zero over the whole network.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{CompensatedSum, Scalar};

pub const QUARTIC_A_MAX: f64 = 0.025;
pub const QUARTIC_B_MAX: f64 = 10.0;
pub const MLLOSS_POINTS: usize = 20;

const SAMPLER_ROUNDS: usize = 1000;
const BISECTION_WIDTH: f64 = 1e-12;
const BISECTION_MAX_ITER: usize = 200;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuarticModel<T> {
    pub a: Vec<T>,
    pub b: Vec<T>,
}

impl<T: Scalar> QuarticModel<T> {
    pub fn new(a: Vec<T>, b: Vec<T>) -> Result<Self> {
        let model = Self { a, b };
        model.validate()?;
        Ok(model)
    }

    fn validate(&self) -> Result<()> {
        if self.a.len() != self.b.len() {
            return Err(Error::DimensionMismatch { expected: self.a.len(), got: self.b.len() });
        }
        if self.a.is_empty() {
            return Err(Error::InvalidParams("quartic model needs at least one node".into()));
        }
        if let Some(i) = self.a.iter().position(|&v| !(v > T::zero()) || !v.is_finite()) {
            return Err(Error::InvalidParams(format!("a[{i}] = {} must be positive", self.a[i])));
        }
        if let Some(i) = self.b.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidParams(format!("b[{i}] is not finite")));
        }
        Ok(())
    }
}

/// Per-node data-fitting loss with `m` samples per node. Rows of `a`/`b` are
/// nodes; `a_sum`/`b_sum` cache the row sums.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(into = "MlLossDoc<T>", try_from = "MlLossDoc<T>")]
#[serde(bound(serialize = "T: Scalar + Serialize", deserialize = "T: Scalar + Deserialize<'de>"))]
pub struct MlLossModel<T> {
    a: Vec<Vec<T>>,
    b: Vec<Vec<T>>,
    m: usize,
    a_sum: Vec<T>,
    b_sum: Vec<T>,
}

#[derive(Serialize, Deserialize)]
struct MlLossDoc<T> {
    m: usize,
    a: Vec<Vec<T>>,
    b: Vec<Vec<T>>,
}

impl<T: Scalar> From<MlLossModel<T>> for MlLossDoc<T> {
    fn from(v: MlLossModel<T>) -> Self {
        Self { m: v.m, a: v.a, b: v.b }
    }
}

impl<T: Scalar> TryFrom<MlLossDoc<T>> for MlLossModel<T> {
    type Error = Error;

    fn try_from(d: MlLossDoc<T>) -> Result<Self> {
        Self::new(d.a, d.b)
    }
}

impl<T: Scalar> MlLossModel<T> {
    pub fn new(a: Vec<Vec<T>>, b: Vec<Vec<T>>) -> Result<Self> {
        if a.len() != b.len() || a.is_empty() {
            return Err(Error::DimensionMismatch { expected: a.len(), got: b.len() });
        }
        let m = a[0].len();
        if m == 0 || a.iter().chain(&b).any(|row| row.len() != m) {
            return Err(Error::InvalidParams("every node needs the same positive number of points".into()));
        }
        let a_sum = a.iter().map(|r| r.iter().copied().sum()).collect();
        let b_sum = b.iter().map(|r| r.iter().copied().sum()).collect();
        Ok(Self { a, b, m, a_sum, b_sum })
    }

    pub fn points_per_node(&self) -> usize {
        self.m
    }

    pub fn a(&self) -> &[Vec<T>] {
        &self.a
    }

    pub fn b(&self) -> &[Vec<T>] {
        &self.b
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase")]
#[serde(bound(serialize = "T: Scalar + Serialize", deserialize = "T: Scalar + Deserialize<'de>"))]
pub enum CostModel<T> {
    Quartic(QuarticModel<T>),
    #[serde(rename = "mlloss")]
    MlLoss(MlLossModel<T>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OptimumMethod {
    ClosedForm,
    Bisection,
    GridRefine,
}

/// Minimizer `x*` and value `F*` of the aggregate cost `F = sum_i f_i`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OptimumCertificate<T> {
    pub x_star: T,
    pub f_star: T,
    pub method: OptimumMethod,
    /// `|F'(x*)|`
    pub residual: T,
}

impl<T: Scalar> CostModel<T> {
    pub fn n(&self) -> usize {
        match self {
            CostModel::Quartic(q) => q.a.len(),
            CostModel::MlLoss(ml) => ml.a.len(),
        }
    }

    pub fn family(&self) -> &'static str {
        match self {
            CostModel::Quartic(_) => "quartic",
            CostModel::MlLoss(_) => "mlloss",
        }
    }

    fn check(&self, i: usize) -> Result<()> {
        if i >= self.n() {
            return Err(Error::IndexOutOfRange { index: i, len: self.n() });
        }
        Ok(())
    }

    pub fn value(&self, i: usize, x: T) -> Result<T> {
        self.check(i)?;
        Ok(self.value_unchecked(i, x))
    }

    pub fn gradient(&self, i: usize, x: T) -> Result<T> {
        self.check(i)?;
        Ok(self.gradient_unchecked(i, x))
    }

    pub fn hessian(&self, i: usize, x: T) -> Result<T> {
        self.check(i)?;
        Ok(self.hessian_unchecked(i, x))
    }

    #[inline]
    pub(crate) fn value_unchecked(&self, i: usize, x: T) -> T {
        match self {
            CostModel::Quartic(q) => {
                let d = x - q.b[i];
                q.a[i] * d * d * d * d
            }
            CostModel::MlLoss(ml) => {
                let s = x.sin();
                T::of_usize(ml.m) * (T::of(2.0) * x * x + T::of(3.0) * s * s) + ml.a_sum[i] * x.cos() + ml.b_sum[i] * x
            }
        }
    }

    #[inline]
    pub(crate) fn gradient_unchecked(&self, i: usize, x: T) -> T {
        match self {
            CostModel::Quartic(q) => {
                let d = x - q.b[i];
                T::of(4.0) * q.a[i] * d * d * d
            }
            CostModel::MlLoss(ml) => {
                T::of_usize(ml.m) * (T::of(4.0) * x + T::of(3.0) * (x + x).sin()) - ml.a_sum[i] * x.sin() + ml.b_sum[i]
            }
        }
    }

    #[inline]
    pub(crate) fn hessian_unchecked(&self, i: usize, x: T) -> T {
        match self {
            CostModel::Quartic(q) => {
                let d = x - q.b[i];
                T::of(12.0) * q.a[i] * d * d
            }
            CostModel::MlLoss(ml) => T::of_usize(ml.m) * (T::of(4.0) + T::of(6.0) * (x + x).cos()) - ml.a_sum[i] * x.cos(),
        }
    }

    /// Per-node gradients at the per-node states `x`.
    pub fn gradients(&self, x: &[T]) -> Vec<T> {
        x.iter().enumerate().map(|(i, &xi)| self.gradient_unchecked(i, xi)).collect()
    }

    pub fn gradients_into(&self, x: &[T], out: &mut [T]) {
        for (i, (o, &xi)) in out.iter_mut().zip(x).enumerate() {
            *o = self.gradient_unchecked(i, xi);
        }
    }

    /// Per-node curvatures with every node evaluated at the same point.
    pub fn hessians_at(&self, x: T) -> Vec<T> {
        (0..self.n()).map(|i| self.hessian_unchecked(i, x)).collect()
    }

    pub fn aggregate_value(&self, x: T) -> T {
        (0..self.n()).map(|i| self.value_unchecked(i, x)).collect::<CompensatedSum<T>>().value()
    }

    pub fn aggregate_gradient(&self, x: T) -> T {
        (0..self.n()).map(|i| self.gradient_unchecked(i, x)).collect::<CompensatedSum<T>>().value()
    }

    pub fn aggregate_hessian(&self, x: T) -> T {
        (0..self.n()).map(|i| self.hessian_unchecked(i, x)).collect::<CompensatedSum<T>>().value()
    }

    /// Centralized optimum of the aggregate cost.
    pub fn aggregate_optimum(&self) -> Result<OptimumCertificate<T>> {
        match self {
            CostModel::Quartic(q) => quartic_optimum(self, q),
            // the zero-sum parameters cancel: F(x) = nm (2x^2 + 3 sin^2 x)
            CostModel::MlLoss(_) => Ok(OptimumCertificate {
                x_star: T::zero(),
                f_star: T::zero(),
                method: OptimumMethod::ClosedForm,
                residual: self.aggregate_gradient(T::zero()).abs(),
            }),
        }
    }
}

fn quartic_optimum<T: Scalar>(model: &CostModel<T>, q: &QuarticModel<T>) -> Result<OptimumCertificate<T>> {
    let mut lo = q.b.iter().copied().fold(T::infinity(), T::min);
    let mut hi = q.b.iter().copied().fold(T::neg_infinity(), T::max);
    let grad = |x: T| model.aggregate_gradient(x);
    if grad(lo) > T::zero() || grad(hi) < T::zero() {
        return Err(Error::BracketFailure(lo.f64(), hi.f64()));
    }
    let width = T::of(BISECTION_WIDTH);
    let half = T::of(0.5);
    for _ in 0..BISECTION_MAX_ITER {
        if hi - lo <= width {
            break;
        }
        let mid = lo + (hi - lo) * half;
        if mid <= lo || mid >= hi {
            break;
        }
        if grad(mid) > T::zero() {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let mut x = lo + (hi - lo) * half;
    // Newton polish inside the final bracket
    for _ in 0..4 {
        let g = grad(x);
        let h = model.aggregate_hessian(x);
        if g == T::zero() || !(h > T::zero()) {
            break;
        }
        let next = x - g / h;
        if !(next >= lo && next <= hi) || grad(next).abs() >= g.abs() {
            break;
        }
        x = next;
    }
    Ok(OptimumCertificate { x_star: x, f_star: model.aggregate_value(x), method: OptimumMethod::Bisection, residual: grad(x).abs() })
}

/// Quartic model with `a_i ~ U(0, 0.025]` and non-zero `b_i ~ U[-10, 10]`.
pub fn sample_quartic<T: Scalar, R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<QuarticModel<T>> {
    if n == 0 {
        return Err(Error::InvalidParams("quartic model needs at least one node".into()));
    }
    let mut a = Vec::with_capacity(n);
    let mut b = Vec::with_capacity(n);
    for _ in 0..n {
        a.push(T::of(QUARTIC_A_MAX * (1.0 - rng.gen::<f64>())));
        let mut bi = 0.0;
        while bi == 0.0 {
            bi = rng.gen_range(-QUARTIC_B_MAX..=QUARTIC_B_MAX);
        }
        b.push(T::of(bi));
    }
    QuarticModel::new(a, b)
}

/// Zero-sum array of `len` non-zero entries in `(-1, 1)`.
fn sample_zero_sum<R: Rng + ?Sized>(len: usize, rng: &mut R) -> Result<Vec<f64>> {
    let mut v: Vec<f64> = (0..len).map(|_| rng.gen_range(-1.0..1.0)).collect();
    for _ in 0..SAMPLER_ROUNDS {
        let mean = v.iter().sum::<f64>() / len as f64;
        for e in v.iter_mut() {
            *e -= mean;
        }
        // make the sequential sum exactly zero
        let rest: f64 = v[..len - 1].iter().sum();
        v[len - 1] = -rest;
        let bad: Vec<usize> = (0..len).filter(|&k| v[k] == 0.0 || v[k].abs() >= 1.0).collect();
        if bad.is_empty() {
            return Ok(v);
        }
        for k in bad {
            v[k] = rng.gen_range(-1.0..1.0);
        }
    }
    Err(Error::SamplerFailure(SAMPLER_ROUNDS))
}

/// Loss model with `m` points per node and network-wide zero-sum parameters.
pub fn sample_mlloss<T: Scalar, R: Rng + ?Sized>(n: usize, m: usize, rng: &mut R) -> Result<MlLossModel<T>> {
    if n == 0 || m == 0 || n * m < 2 {
        return Err(Error::InvalidParams(format!("need n*m >= 2, got n={n} m={m}")));
    }
    let a = sample_zero_sum(n * m, rng)?;
    let b = sample_zero_sum(n * m, rng)?;
    let rows = |flat: Vec<f64>| -> Vec<Vec<T>> { flat.chunks(m).map(|c| c.iter().map(|&v| T::of(v)).collect()).collect() };
    MlLossModel::new(rows(a), rows(b))
}

/// Which family to sample and with what size parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum CostSpec {
    Quartic,
    #[serde(rename = "mlloss")]
    MlLoss {
        #[serde(default = "default_points")]
        m: usize,
    },
}

fn default_points() -> usize {
    MLLOSS_POINTS
}

impl CostSpec {
    pub fn sample<T: Scalar, R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> Result<CostModel<T>> {
        Ok(match *self {
            CostSpec::Quartic => CostModel::Quartic(sample_quartic(n, rng)?),
            CostSpec::MlLoss { m } => CostModel::MlLoss(sample_mlloss(n, m, rng)?),
        })
    }
}
