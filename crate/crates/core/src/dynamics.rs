//! Explicit-Euler integration of continuous-time gradient tracking.
//!
//! Each node keeps a state `x_i` and a tracker `y_i`:
//!
//! ```text
//! x_i' = -sum_j W_ij (x_i - x_j) - alpha y_i
//! y_i' = -sum_j W_ij (y_i - y_j) + d/dt grad f_i(x_i)
//! ```
//!
//! The time derivative of the local gradient is discretized as the exact
//! gradient increment between iterates, so `sum_i y_i - sum_i grad f_i(x_i)`
//! is conserved step by step.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::costs::{CostModel, OptimumCertificate};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::scalar::{CompensatedSum, Scalar};

pub const DEFAULT_X_INIT_RANGE: (f64, f64) = (-5.0, 5.0);
/// Fraction of [`stability_max_step`] used when no step is configured.
pub const DEFAULT_STEP_FRACTION: f64 = 0.5;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Scalar + Serialize", deserialize = "T: Scalar + Deserialize<'de>"))]
pub struct SimConfig<T> {
    /// Gradient-tracking rate.
    pub alpha: T,
    /// Integration step; `None` picks `DEFAULT_STEP_FRACTION * stability_max_step`
    /// at the initial state.
    #[serde(default)]
    pub h: Option<T>,
    pub steps: usize,
    #[serde(default = "one")]
    pub record_stride: usize,
    /// Stop once the optimality gap falls to or below this value (0 disables).
    #[serde(default)]
    pub gap_tolerance: T,
    #[serde(default = "default_init_range")]
    pub x_init_range: (T, T),
}

fn one() -> usize {
    1
}

fn default_init_range<T: Scalar>() -> (T, T) {
    (T::of(DEFAULT_X_INIT_RANGE.0), T::of(DEFAULT_X_INIT_RANGE.1))
}

impl<T: Scalar> SimConfig<T> {
    pub fn new(alpha: T, steps: usize) -> Self {
        Self { alpha, h: None, steps, record_stride: 1, gap_tolerance: T::zero(), x_init_range: default_init_range() }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > T::zero()) {
            return Err(Error::InvalidParams(format!("alpha must be positive, got {}", self.alpha)));
        }
        if let Some(h) = self.h {
            if !(h > T::zero()) || !h.is_finite() {
                return Err(Error::InvalidParams(format!("step h must be positive, got {h}")));
            }
        }
        if self.record_stride == 0 {
            return Err(Error::InvalidParams("record_stride must be at least 1".into()));
        }
        if self.gap_tolerance < T::zero() {
            return Err(Error::InvalidParams("gap_tolerance must be non-negative".into()));
        }
        let (lo, hi) = self.x_init_range;
        if !(lo <= hi) || !lo.is_finite() || !hi.is_finite() {
            return Err(Error::InvalidRange { low: lo.f64(), high: hi.f64() });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NodeState<T> {
    pub x: Vec<T>,
    pub y: Vec<T>,
}

impl<T: Scalar> NodeState<T> {
    /// Standard tracking initialization `y_i(0) = grad f_i(x_i(0))`.
    pub fn tracking(model: &CostModel<T>, x: Vec<T>) -> Self {
        let y = model.gradients(&x);
        Self { x, y }
    }

    pub fn is_finite(&self) -> bool {
        self.x.iter().chain(&self.y).all(|v| v.is_finite())
    }

    pub fn mean_x(&self) -> T {
        self.x.iter().copied().collect::<CompensatedSum<T>>().value() / T::of_usize(self.x.len())
    }

    /// Node `i` becomes node `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        let mut x = vec![T::zero(); self.x.len()];
        let mut y = vec![T::zero(); self.y.len()];
        for (i, &p) in perm.iter().enumerate() {
            x[p] = self.x[i];
            y[p] = self.y[i];
        }
        Self { x, y }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialTrace<T> {
    pub recorded_steps: Vec<usize>,
    /// `F(mean x) - F*`
    pub gap: Vec<T>,
    /// `(|x - x* 1|^2 + |y|^2) / 2`
    pub lyapunov: Vec<T>,
    /// `sum_i (x_i - mean x)^2`
    pub consensus_residual: Vec<T>,
    /// `|sum_i y_i - sum_i grad f_i(x_i)|`
    pub tracking_residual: Vec<T>,
    pub diverged: bool,
    pub h: T,
    pub final_state: NodeState<T>,
}

impl<T: Scalar> TrialTrace<T> {
    fn with_capacity(cap: usize, h: T, state: NodeState<T>) -> Self {
        Self {
            recorded_steps: Vec::with_capacity(cap),
            gap: Vec::with_capacity(cap),
            lyapunov: Vec::with_capacity(cap),
            consensus_residual: Vec::with_capacity(cap),
            tracking_residual: Vec::with_capacity(cap),
            diverged: false,
            h,
            final_state: state,
        }
    }

    pub fn len(&self) -> usize {
        self.recorded_steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.recorded_steps.is_empty()
    }

    pub fn final_gap(&self) -> Option<T> {
        self.gap.last().copied()
    }

    fn record(&mut self, step: usize, model: &CostModel<T>, opt: &OptimumCertificate<T>, s: &NodeState<T>, grads: &[T]) {
        let xbar = s.mean_x();
        let gap = model.aggregate_value(xbar) - opt.f_star;
        let dev: T = s.x.iter().map(|&x| (x - opt.x_star) * (x - opt.x_star)).collect::<CompensatedSum<T>>().value();
        let ysq: T = s.y.iter().map(|&y| y * y).collect::<CompensatedSum<T>>().value();
        let cons: T = s.x.iter().map(|&x| (x - xbar) * (x - xbar)).collect::<CompensatedSum<T>>().value();
        let sum_y = s.y.iter().copied().collect::<CompensatedSum<T>>().value();
        let sum_g = grads.iter().copied().collect::<CompensatedSum<T>>().value();
        self.recorded_steps.push(step);
        self.gap.push(gap);
        self.lyapunov.push(T::of(0.5) * (dev + ysq));
        self.consensus_residual.push(cons);
        self.tracking_residual.push((sum_y - sum_g).abs());
    }
}

/// Step bound `1.8 / rho`, where `rho = 2 max_i D_ii + alpha max_i |f_i''(x_i)|`
/// bounds the spectral radius of the linearized dynamics at `probe`
/// (Gershgorin discs of the Laplacian blocks plus the curvature term).
/// Returns `+inf` when `rho` is zero.
pub fn stability_max_step<T: Scalar>(g: &Graph<T>, alpha: T, model: &CostModel<T>, probe: &NodeState<T>) -> T {
    let max_deg = (0..g.n()).map(|i| g.weighted_degree(i)).fold(T::zero(), T::max);
    let max_h = probe.x.iter().enumerate().map(|(i, &x)| model.hessian_unchecked(i, x).abs()).fold(T::zero(), T::max);
    let rho = T::of(2.0) * max_deg + alpha * max_h;
    if rho == T::zero() {
        T::infinity()
    } else {
        T::of(1.8) / rho
    }
}

fn check_dims<T: Scalar>(g: &Graph<T>, model: &CostModel<T>) -> Result<()> {
    if model.n() != g.n() {
        return Err(Error::DimensionMismatch { expected: g.n(), got: model.n() });
    }
    Ok(())
}

/// Random initial states in `cfg.x_init_range` with tracking initialization.
pub fn initialize<T: Scalar, R: Rng + ?Sized>(g: &Graph<T>, model: &CostModel<T>, cfg: &SimConfig<T>, rng: &mut R) -> Result<NodeState<T>> {
    check_dims(g, model)?;
    cfg.validate()?;
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let (lo, hi) = (cfg.x_init_range.0.f64(), cfg.x_init_range.1.f64());
    let x: Vec<T> = (0..g.n()).map(|_| if lo == hi { cfg.x_init_range.0 } else { T::of(rng.gen_range(lo..hi)) }).collect();
    Ok(NodeState::tracking(model, x))
}

/// Reusable buffers for repeated Euler steps on one graph and model.
pub struct Integrator<'a, T> {
    g: &'a Graph<T>,
    model: &'a CostModel<T>,
    alpha: T,
    h: T,
    lx: Vec<T>,
    ly: Vec<T>,
    grad: Vec<T>,
    grad_next: Vec<T>,
}

impl<'a, T: Scalar> Integrator<'a, T> {
    pub fn new(g: &'a Graph<T>, model: &'a CostModel<T>, alpha: T, h: T, state: &NodeState<T>) -> Self {
        let n = g.n();
        Self {
            g,
            model,
            alpha,
            h,
            lx: vec![T::zero(); n],
            ly: vec![T::zero(); n],
            grad: model.gradients(&state.x),
            grad_next: vec![T::zero(); n],
        }
    }

    /// Gradients at the current state.
    pub fn gradients(&self) -> &[T] {
        &self.grad
    }

    pub fn step(&mut self, s: &mut NodeState<T>) -> bool {
        self.g.laplacian_apply(&s.x, &mut self.lx);
        self.g.laplacian_apply(&s.y, &mut self.ly);
        let (h, alpha) = (self.h, self.alpha);
        for i in 0..s.x.len() {
            s.x[i] += h * (-self.lx[i] - alpha * s.y[i]);
        }
        self.model.gradients_into(&s.x, &mut self.grad_next);
        for i in 0..s.y.len() {
            s.y[i] = s.y[i] - h * self.ly[i] + (self.grad_next[i] - self.grad[i]);
        }
        std::mem::swap(&mut self.grad, &mut self.grad_next);
        s.is_finite()
    }
}

/// One explicit-Euler step of size `h`.
pub fn euler_step<T: Scalar>(g: &Graph<T>, model: &CostModel<T>, s: &NodeState<T>, alpha: T, h: T) -> Result<NodeState<T>> {
    check_dims(g, model)?;
    let mut next = s.clone();
    if !Integrator::new(g, model, alpha, h, s).step(&mut next) {
        return Err(Error::NumericalDivergence(1));
    }
    Ok(next)
}

/// Step size used for a run: the configured one, or the default fraction of
/// the stability bound at `state`.
pub fn resolve_step<T: Scalar>(g: &Graph<T>, model: &CostModel<T>, cfg: &SimConfig<T>, state: &NodeState<T>) -> T {
    let bound = stability_max_step(g, cfg.alpha, model, state);
    match cfg.h {
        Some(h) => {
            if h > bound {
                log::warn!("step {h} exceeds the stability bound {bound}");
            }
            h
        }
        None if bound.is_finite() => T::of(DEFAULT_STEP_FRACTION) * bound,
        None => T::one(),
    }
}

/// Integrates from a given initial state.
pub fn simulate<T: Scalar>(g: &Graph<T>, model: &CostModel<T>, cfg: &SimConfig<T>, initial: NodeState<T>) -> Result<TrialTrace<T>> {
    check_dims(g, model)?;
    cfg.validate()?;
    if initial.x.len() != g.n() || initial.y.len() != g.n() {
        return Err(Error::DimensionMismatch { expected: g.n(), got: initial.x.len() });
    }
    let opt = model.aggregate_optimum()?;
    let h = resolve_step(g, model, cfg, &initial);
    let mut state = initial;
    let mut integ = Integrator::new(g, model, cfg.alpha, h, &state);
    let mut trace = TrialTrace::with_capacity(cfg.steps / cfg.record_stride + 2, h, state.clone());
    trace.record(0, model, &opt, &state, integ.gradients());
    let tol = cfg.gap_tolerance;

    let mut done = tol > T::zero() && trace.gap[0] <= tol;
    let mut k = 0;
    while !done && k < cfg.steps {
        k += 1;
        if !integ.step(&mut state) {
            trace.diverged = true;
            log::warn!("trajectory diverged at step {k}");
            break;
        }
        let last = k == cfg.steps;
        let on_stride = k % cfg.record_stride == 0;
        if on_stride || last || tol > T::zero() {
            let xbar = state.mean_x();
            let gap = model.aggregate_value(xbar) - opt.f_star;
            done = tol > T::zero() && gap <= tol;
            if on_stride || last || done {
                trace.record(k, model, &opt, &state, integ.gradients());
            }
        }
    }
    trace.final_state = state;
    Ok(trace)
}

/// Random initialization followed by [`simulate`].
pub fn run<T: Scalar, R: Rng + ?Sized>(g: &Graph<T>, model: &CostModel<T>, cfg: &SimConfig<T>, rng: &mut R) -> Result<TrialTrace<T>> {
    let init = initialize(g, model, cfg, rng)?;
    simulate(g, model, cfg, init)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::costs::QuarticModel;
    use crate::rng;

    fn quartic(a: &[f64], b: &[f64]) -> CostModel<f64> {
        CostModel::Quartic(QuarticModel::new(a.to_vec(), b.to_vec()).unwrap())
    }

    fn path2() -> Graph<f64> {
        Graph::build(2, &[(0, 1, 1.0)]).unwrap()
    }

    fn k4() -> Graph<f64> {
        let edges: Vec<_> = (0..4).flat_map(|i| (i + 1..4).map(move |j| (i, j, 1.0))).collect();
        Graph::build(4, &edges).unwrap()
    }

    #[test]
    fn tracking_initialization() {
        let g = Graph::<f64>::build(1, &[]).unwrap();
        let m = quartic(&[0.01], &[0.0]);
        let mut cfg = SimConfig::new(1.0, 0);
        cfg.x_init_range = (2.0, 2.0);
        let s = initialize(&g, &m, &cfg, &mut rng::from_seed(0)).unwrap();
        assert!((s.y[0] - 0.32).abs() < 1e-15);

        let m = quartic(&[0.01, 0.02], &[1.5, -2.0]);
        let at_own_min = NodeState::tracking(&m, vec![1.5, -2.0]);
        assert_eq!(at_own_min.y, vec![0.0, 0.0]);
    }

    #[test]
    fn initialize_is_deterministic_and_checks_connectivity() {
        let m = quartic(&[0.01; 4], &[1.0, 2.0, 3.0, 4.0]);
        let cfg = SimConfig::new(1.0, 10);
        let a = initialize(&k4(), &m, &cfg, &mut rng::from_seed(5)).unwrap();
        let b = initialize(&k4(), &m, &cfg, &mut rng::from_seed(5)).unwrap();
        assert_eq!(a, b);
        assert!(a.x.iter().all(|x| (-5.0..5.0).contains(x)));
        let split = Graph::build(4, &[(0, 1, 1.0), (2, 3, 1.0)]).unwrap();
        assert!(matches!(initialize(&split, &m, &cfg, &mut rng::from_seed(5)), Err(Error::Disconnected)));
    }

    #[test]
    fn euler_step_on_an_edge() {
        let m = quartic(&[0.01, 0.01], &[0.0, 0.0]);
        let s = NodeState { x: vec![1.0, 0.0], y: vec![0.0, 0.0] };
        let next = euler_step(&path2(), &m, &s, 7.0, 0.1).unwrap();
        assert!((next.x[0] - 0.9).abs() < 1e-15 && (next.x[1] - 0.1).abs() < 1e-15);
    }

    #[test]
    fn equilibrium_is_fixed() {
        let m = quartic(&[0.02, 0.02], &[-3.0, 3.0]);
        let s = NodeState { x: vec![0.0, 0.0], y: vec![0.0, 0.0] };
        let next = euler_step(&path2(), &m, &s, 1.0, 0.05).unwrap();
        assert_eq!(next, s);
    }

    #[test]
    fn step_conserves_tracking_sum() {
        let m = quartic(&[0.01, 0.02, 0.015, 0.005], &[1.0, -2.0, 3.0, 0.5]);
        let s = NodeState { x: vec![0.3, -1.0, 2.0, 4.0], y: vec![0.1, 0.2, -0.4, 0.05] };
        let before: f64 = s.y.iter().sum::<f64>() - m.gradients(&s.x).iter().sum::<f64>();
        let next = euler_step(&k4(), &m, &s, 1.0, 0.01).unwrap();
        let after: f64 = next.y.iter().sum::<f64>() - m.gradients(&next.x).iter().sum::<f64>();
        assert!((before - after).abs() < 1e-14);
    }

    #[test]
    fn divergence_is_reported() {
        let m = quartic(&[0.02, 0.02], &[-3.0, 3.0]);
        let s = NodeState { x: vec![f64::MAX, 0.0], y: vec![0.0, 0.0] };
        assert!(matches!(euler_step(&path2(), &m, &s, 1.0, 1.0), Err(Error::NumericalDivergence(_))));

        let mut cfg = SimConfig::new(1.0, 100);
        cfg.h = Some(50.0);
        let t = simulate(&path2(), &m, &cfg, NodeState::tracking(&m, vec![5.0, -5.0])).unwrap();
        assert!(t.diverged);
    }

    #[test]
    fn stability_bounds() {
        let zero = quartic(&[0.01; 4], &[0.0; 4]);
        let probe = NodeState { x: vec![0.0; 4], y: vec![0.0; 4] };
        assert!((stability_max_step(&k4(), 0.0, &zero, &probe) - 0.3).abs() < 1e-15);

        let empty = Graph::<f64>::build(3, &[]).unwrap();
        let m3 = quartic(&[0.01; 3], &[0.0; 3]);
        let p3 = NodeState { x: vec![0.0; 3], y: vec![0.0; 3] };
        assert_eq!(stability_max_step(&empty, 0.0, &m3, &p3), f64::INFINITY);

        let path = Graph::build(3, &[(0, 1, 1.0)]).unwrap();
        let more = Graph::build(3, &[(0, 1, 1.0), (1, 2, 1.0)]).unwrap();
        assert!(stability_max_step(&more, 1.0, &m3, &p3) <= stability_max_step(&path, 1.0, &m3, &p3));
    }

    #[test]
    fn zero_steps_records_initial_state() {
        let m = quartic(&[0.02, 0.02], &[-5.0, 5.0]);
        let cfg = SimConfig::new(1.0, 0);
        let t = run(&path2(), &m, &cfg, &mut rng::from_seed(1)).unwrap();
        assert_eq!(t.recorded_steps, vec![0]);
        assert_eq!(t.len(), 1);
    }

    #[test]
    fn stride_and_final_record() {
        let m = quartic(&[0.02, 0.02], &[-5.0, 5.0]);
        let mut cfg = SimConfig::new(1.0, 10);
        cfg.record_stride = 4;
        let t = run(&path2(), &m, &cfg, &mut rng::from_seed(1)).unwrap();
        assert_eq!(t.recorded_steps, vec![0, 4, 8, 10]);
    }

    #[test]
    fn gap_tolerance_stops_early() {
        let m = quartic(&[0.02, 0.02], &[-5.0, 5.0]);
        let mut cfg = SimConfig::new(1.0, 100_000);
        cfg.h = Some(1e-2);
        cfg.record_stride = 1000;
        cfg.gap_tolerance = 1e-3;
        let t = run(&path2(), &m, &cfg, &mut rng::from_seed(2)).unwrap();
        assert!(*t.recorded_steps.last().unwrap() < 100_000);
        assert!(t.final_gap().unwrap() <= 1e-3);
    }

    #[test]
    fn config_validation() {
        let mut cfg = SimConfig::<f64>::new(0.0, 1);
        assert!(cfg.validate().is_err());
        cfg.alpha = 1.0;
        cfg.record_stride = 0;
        assert!(cfg.validate().is_err());
        cfg.record_stride = 1;
        cfg.x_init_range = (1.0, -1.0);
        assert!(matches!(cfg.validate(), Err(Error::InvalidRange { .. })));
    }
}
