mod common;

use rand::Rng;
use sfconv::costs::{sample_mlloss, sample_quartic, CostSpec, OptimumMethod};
use sfconv::CostModel;

const FD_STEP: f64 = 1e-5;

/// Central difference with a magnitude floor so that a zero derivative does
/// not turn cancellation noise into a huge relative error.
fn check(analytic: f64, fd: f64, scale: f64) {
    let err = (analytic - fd).abs() / analytic.abs().max(scale);
    assert!(err < 1e-6, "analytic {analytic} vs fd {fd} (rel {err:e})");
}

fn sweep(model: &CostModel, seed: u64) {
    let mut r = common::rng(seed);
    for _ in 0..100 {
        let i = r.gen_range(0..model.n());
        let x = r.gen_range(-6.0..6.0);
        let f = |x: f64| model.value(i, x).unwrap();
        let g = |x: f64| model.gradient(i, x).unwrap();
        let fd_grad = (f(x + FD_STEP) - f(x - FD_STEP)) / (2.0 * FD_STEP);
        let fd_hess = (g(x + FD_STEP) - g(x - FD_STEP)) / (2.0 * FD_STEP);
        let scale = 1e-3 * (1.0 + f(x).abs());
        check(g(x), fd_grad, scale);
        check(model.hessian(i, x).unwrap(), fd_hess, scale);
    }
}

#[test]
fn quartic_derivatives() {
    let m = CostModel::Quartic(sample_quartic(30, &mut common::rng(1)).unwrap());
    sweep(&m, 2);
}

#[test]
fn mlloss_derivatives() {
    let m = CostModel::MlLoss(sample_mlloss(10, 20, &mut common::rng(3)).unwrap());
    sweep(&m, 4);
}

#[test]
fn aggregate_derivatives() {
    for spec in [CostSpec::Quartic, CostSpec::MlLoss { m: 20 }] {
        let m: CostModel = spec.sample(15, &mut common::rng(5)).unwrap();
        let mut r = common::rng(6);
        for _ in 0..50 {
            let x = r.gen_range(-4.0..4.0);
            let fd = (m.aggregate_value(x + FD_STEP) - m.aggregate_value(x - FD_STEP)) / (2.0 * FD_STEP);
            check(m.aggregate_gradient(x), fd, 1e-3 * (1.0 + m.aggregate_value(x).abs()));
            let fd2 = (m.aggregate_gradient(x + FD_STEP) - m.aggregate_gradient(x - FD_STEP)) / (2.0 * FD_STEP);
            check(m.aggregate_hessian(x), fd2, 1e-3 * (1.0 + m.aggregate_value(x).abs()));
        }
    }
}

#[test]
fn quartic_optimum_is_a_global_minimum() {
    for seed in 0..10 {
        let m: CostModel = CostSpec::Quartic.sample(25, &mut common::rng(seed)).unwrap();
        let opt = m.aggregate_optimum().unwrap();
        assert!(m.aggregate_gradient(opt.x_star).abs() < 1e-9);
        for k in -200..=200 {
            let x = k as f64 * 0.05;
            assert!(m.aggregate_value(x) >= opt.f_star - 1e-12);
        }
    }
}

#[test]
fn mlloss_optimum_is_zero() {
    let m: CostModel = CostSpec::MlLoss { m: 20 }.sample(40, &mut common::rng(8)).unwrap();
    let opt = m.aggregate_optimum().unwrap();
    assert_eq!(opt.method, OptimumMethod::ClosedForm);
    assert_eq!((opt.x_star, opt.f_star), (0.0, 0.0));
    assert!(m.aggregate_gradient(0.0).abs() < 1e-9);
    for k in -100..=100 {
        assert!(m.aggregate_value(k as f64 * 0.1) >= -1e-9);
    }
}
