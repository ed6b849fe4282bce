//! Laplacian spectra and the linearized gradient-tracking system matrix.
//!
//! The state `(x, y)` of the tracking dynamics evolves as
//! `x' = -L x - a y`, `y' = -L y + d/dt grad f(x)`. Linearizing at an
//! equilibrium with local curvatures `H = diag(f_i'')` gives the Jacobian
//!
//! ```text
//! [ -L        -a I     ]
//! [ -H L      -L - a H ]
//! ```
//!
//! whose rightmost non-zero eigenvalue governs the exponential decay rate of
//! the optimality gap.

mod general;
mod matrix;
mod symmetric;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

pub use matrix::Matrix;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::scalar::Scalar;

/// Largest matrix dimension the dense solvers accept by default.
pub const DEFAULT_SIZE_LIMIT: usize = 20_000;

/// Relative tolerance for the symmetry check of [`eig_symmetric`].
const SYMMETRY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy)]
pub struct EigenOptions {
    pub size_limit: usize,
}

impl Default for EigenOptions {
    fn default() -> Self {
        Self { size_limit: DEFAULT_SIZE_LIMIT }
    }
}

fn check_square<T: Scalar>(m: &Matrix<T>, opts: EigenOptions) -> Result<()> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch { expected: m.rows(), got: m.cols() });
    }
    if m.rows() > opts.size_limit {
        return Err(Error::SizeLimitExceeded { dim: m.rows(), limit: opts.size_limit });
    }
    Ok(())
}

/// Ascending eigenvalues of a symmetric matrix.
pub fn eig_symmetric<T: Scalar>(m: &Matrix<T>) -> Result<Vec<T>> {
    eig_symmetric_with(m, EigenOptions::default())
}

pub fn eig_symmetric_with<T: Scalar>(m: &Matrix<T>, opts: EigenOptions) -> Result<Vec<T>> {
    check_square(m, opts)?;
    let asym = m.max_asymmetry().f64();
    let scale = 1.0 + m.norm_inf().f64();
    if asym > SYMMETRY_TOL * scale {
        return Err(Error::NotSymmetric(asym));
    }
    symmetric::eigenvalues(m)
}

/// Eigenvalues of a general square matrix, ordered by decreasing real part
/// (ties by decreasing imaginary part).
pub fn eig_general<T: Scalar>(m: &Matrix<T>) -> Result<Vec<Complex<T>>> {
    eig_general_with(m, EigenOptions::default())
}

pub fn eig_general_with<T: Scalar>(m: &Matrix<T>, opts: EigenOptions) -> Result<Vec<Complex<T>>> {
    check_square(m, opts)?;
    if m.row(0).iter().chain((1..m.rows()).flat_map(|i| m.row(i))).any(|v| !v.is_finite()) {
        return Err(Error::ConvergenceFailure("non-finite matrix entry".into()));
    }
    let mut ev = general::eigenvalues(m)?;
    ev.sort_by(|a, b| b.re.partial_cmp(&a.re).expect("finite").then(b.im.partial_cmp(&a.im).expect("finite")));
    Ok(ev)
}

/// Algebraic connectivity: second-smallest eigenvalue of the weighted
/// Laplacian. Exactly zero for disconnected graphs and graphs with fewer than
/// two nodes.
pub fn lambda2_laplacian<T: Scalar>(g: &Graph<T>) -> Result<T> {
    if g.n() < 2 || !g.is_connected() {
        return Ok(T::zero());
    }
    let ev = eig_symmetric(&g.laplacian())?;
    Ok(ev[1].max(T::zero()))
}

/// Inputs of the linearized tracking dynamics.
#[derive(Debug, Clone)]
pub struct JacobianSpec<T> {
    pub laplacian: Matrix<T>,
    pub alpha: T,
    pub hessian_diag: Vec<T>,
}

impl<T: Scalar> JacobianSpec<T> {
    pub fn new(g: &Graph<T>, alpha: T, hessian_diag: Vec<T>) -> Self {
        Self { laplacian: g.laplacian(), alpha, hessian_diag }
    }

    fn validate(&self) -> Result<usize> {
        let n = self.laplacian.rows();
        if !self.laplacian.is_square() {
            return Err(Error::DimensionMismatch { expected: n, got: self.laplacian.cols() });
        }
        if self.hessian_diag.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: self.hessian_diag.len() });
        }
        if !(self.alpha > T::zero()) {
            return Err(Error::InvalidParams(format!("alpha must be positive, got {}", self.alpha)));
        }
        Ok(n)
    }

    /// `1e-9 * (1 + ||L||_inf)`.
    pub fn default_zero_tol(&self) -> T {
        T::of(1e-9) * (T::one() + self.laplacian.norm_inf())
    }
}

/// The `2n x 2n` Jacobian of the tracking dynamics, state ordered `(x, y)`.
pub fn build_jacobian<T: Scalar>(spec: &JacobianSpec<T>) -> Result<Matrix<T>> {
    let n = spec.validate()?;
    let l = &spec.laplacian;
    let a = spec.alpha;
    let h = &spec.hessian_diag;
    let mut j = Matrix::zeros(2 * n, 2 * n);
    for r in 0..n {
        for c in 0..n {
            let lrc = l[(r, c)];
            j[(r, c)] = -lrc;
            j[(n + r, c)] = -h[r] * lrc;
            j[(n + r, n + c)] = -lrc;
        }
        j[(r, n + r)] = -a;
        j[(n + r, n + r)] -= a * h[r];
    }
    Ok(j)
}

/// Eigenvalues of the Jacobian. With all curvatures zero the matrix is block
/// upper triangular with `-L` on both diagonal blocks, and the (defective)
/// doubled spectrum is taken from the symmetric solver directly.
pub fn jacobian_eigenvalues<T: Scalar>(spec: &JacobianSpec<T>) -> Result<Vec<Complex<T>>> {
    spec.validate()?;
    if spec.hessian_diag.iter().all(|&v| v == T::zero()) {
        let ev = eig_symmetric(&spec.laplacian)?;
        let mut out: Vec<Complex<T>> = ev.iter().flat_map(|&v| [Complex::new(-v, T::zero()), Complex::new(-v, T::zero())]).collect();
        out.sort_by(|a, b| b.re.partial_cmp(&a.re).expect("finite"));
        return Ok(out);
    }
    eig_general(&build_jacobian(spec)?)
}

/// Decay-rate measure `-max Re(mu)` over Jacobian eigenvalues `mu` with
/// `|Re mu| >= zero_tol`. Positive means the optimality gap decays; larger is
/// faster.
pub fn convergence_rate<T: Scalar>(spec: &JacobianSpec<T>, zero_tol: T) -> Result<T> {
    if !(zero_tol > T::zero()) {
        return Err(Error::InvalidParams("zero_tol must be positive".into()));
    }
    let ev = jacobian_eigenvalues(spec)?;
    ev.iter()
        .filter(|mu| mu.re.abs() >= zero_tol)
        .map(|mu| mu.re)
        .fold(None, |acc: Option<T>, re| Some(acc.map_or(re, |a| a.max(re))))
        .map(|re| -re)
        .ok_or(Error::AllZero)
}

/// One row of the real-network comparison table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralReport<T> {
    pub lambda2_laplacian: T,
    pub rate: T,
    pub alpha: T,
    pub n: usize,
}

/// Algebraic connectivity and decay rate of a connected graph, with the
/// curvatures `hessian_diag` evaluated at the linearization point.
pub fn spectral_report<T: Scalar>(g: &Graph<T>, alpha: T, hessian_diag: Vec<T>) -> Result<SpectralReport<T>> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let lambda2 = lambda2_laplacian(g)?;
    let spec = JacobianSpec::new(g, alpha, hessian_diag);
    let rate = convergence_rate(&spec, spec.default_zero_tol())?;
    Ok(SpectralReport { lambda2_laplacian: lambda2, rate, alpha, n: g.n() })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn complete(n: usize) -> Graph<f64> {
        let edges: Vec<_> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j, 1.0))).collect();
        Graph::build(n, &edges).unwrap()
    }

    fn cycle(n: usize) -> Graph<f64> {
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n, 1.0)).collect();
        Graph::build(n, &edges).unwrap()
    }

    #[test]
    fn lambda2_small_graphs() {
        assert!((lambda2_laplacian(&complete(4)).unwrap() - 4.0).abs() < 1e-12);
        assert!((lambda2_laplacian(&cycle(4)).unwrap() - 2.0).abs() < 1e-12);
        let two = Graph::build(4, &[(0, 1, 1.0), (2, 3, 1.0)]).unwrap();
        assert_eq!(lambda2_laplacian(&two).unwrap(), 0.0);
    }

    #[test]
    fn symmetric_rejects_asymmetric_input() {
        let m = Matrix::from_rows(&[vec![1.0, 2.0], vec![0.0, 1.0]]);
        assert!(matches!(eig_symmetric(&m), Err(Error::NotSymmetric(_))));
        let rect = Matrix::<f64>::zeros(2, 3);
        assert!(matches!(eig_general(&rect), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn size_limit() {
        let m = Matrix::<f64>::identity(5);
        let opts = EigenOptions { size_limit: 4 };
        assert!(matches!(eig_symmetric_with(&m, opts), Err(Error::SizeLimitExceeded { dim: 5, limit: 4 })));
        assert!(matches!(eig_general_with(&m, opts), Err(Error::SizeLimitExceeded { .. })));
    }

    #[test]
    fn scalar_jacobian() {
        let spec = JacobianSpec { laplacian: Matrix::<f64>::zeros(1, 1), alpha: 0.5, hessian_diag: vec![3.0] };
        let j = build_jacobian(&spec).unwrap();
        assert_eq!(j, Matrix::from_rows(&[vec![0.0, -0.5], vec![0.0, -1.5]]));
        let ev = jacobian_eigenvalues(&spec).unwrap();
        assert!((ev[0].re).abs() < 1e-15 && (ev[1].re + 1.5).abs() < 1e-15);
        assert!((convergence_rate(&spec, 1e-9).unwrap() - 1.5).abs() < 1e-14);
    }

    #[test]
    fn jacobian_dimension_checks() {
        let spec = JacobianSpec { laplacian: Matrix::zeros(2, 2), alpha: 1.0, hessian_diag: vec![1.0] };
        assert!(matches!(build_jacobian(&spec), Err(Error::DimensionMismatch { expected: 2, got: 1 })));
        let spec = JacobianSpec { laplacian: Matrix::zeros(1, 1), alpha: 0.0, hessian_diag: vec![1.0] };
        assert!(matches!(build_jacobian(&spec), Err(Error::InvalidParams(_))));
    }

    #[test]
    fn zero_curvature_rate_is_algebraic_connectivity() {
        let g = cycle(6);
        let spec = JacobianSpec::new(&g, 0.3, vec![0.0; 6]);
        let rate = convergence_rate(&spec, spec.default_zero_tol()).unwrap();
        assert!((rate - lambda2_laplacian(&g).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn edgeless_zero_curvature_is_all_zero() {
        let g = Graph::<f64>::build(3, &[]).unwrap();
        let spec = JacobianSpec::new(&g, 1.0, vec![0.0; 3]);
        assert!(matches!(convergence_rate(&spec, 1e-9), Err(Error::AllZero)));
    }

    #[test]
    fn report_requires_connectivity() {
        let two = Graph::build(4, &[(0, 1, 1.0), (2, 3, 1.0)]).unwrap();
        assert!(matches!(spectral_report(&two, 0.1, vec![1.0; 4]), Err(Error::Disconnected)));
        let r = spectral_report(&complete(5), 0.1, vec![0.0; 5]).unwrap();
        assert!((r.lambda2_laplacian - 5.0).abs() < 1e-12 && (r.rate - 5.0).abs() < 1e-12);
    }
}
