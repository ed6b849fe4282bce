//! Real symmetric eigenvalues: Householder reduction to tridiagonal form
//! followed by implicit QL with Wilkinson shifts.

use super::Matrix;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

const MAX_SWEEPS_PER_EIGENVALUE: usize = 60;

/// Ascending eigenvalues of a symmetric matrix. Only the lower triangle is read.
pub(super) fn eigenvalues<T: Scalar>(m: &Matrix<T>) -> Result<Vec<T>> {
    let n = m.rows();
    let mut a: Vec<T> = (0..n).flat_map(|i| m.row(i).to_vec()).collect();
    let (mut d, mut e) = tridiagonalize(&mut a, n);
    tridiagonal_ql(&mut d, &mut e)?;
    d.sort_by(|x, y| x.partial_cmp(y).expect("finite eigenvalues"));
    Ok(d)
}

/// Reduces the row-major `a` in place; returns (diagonal, subdiagonal) with
/// `e[i]` coupling rows `i - 1` and `i` (`e[0] = 0`).
fn tridiagonalize<T: Scalar>(a: &mut [T], n: usize) -> (Vec<T>, Vec<T>) {
    let mut d = vec![T::zero(); n];
    let mut e = vec![T::zero(); n];
    for i in (1..n).rev() {
        let l = i - 1;
        let mut h = T::zero();
        if l > 0 {
            let scale: T = (0..=l).map(|k| a[i * n + k].abs()).sum();
            if scale == T::zero() {
                e[i] = a[i * n + l];
            } else {
                for k in 0..=l {
                    a[i * n + k] /= scale;
                    h += a[i * n + k] * a[i * n + k];
                }
                let f = a[i * n + l];
                let g = if f >= T::zero() { -h.sqrt() } else { h.sqrt() };
                e[i] = scale * g;
                h -= f * g;
                a[i * n + l] = f - g;
                let mut f = T::zero();
                for j in 0..=l {
                    let mut g = T::zero();
                    for k in 0..=j {
                        g += a[j * n + k] * a[i * n + k];
                    }
                    for k in j + 1..=l {
                        g += a[k * n + j] * a[i * n + k];
                    }
                    e[j] = g / h;
                    f += e[j] * a[i * n + j];
                }
                let hh = f / (h + h);
                for j in 0..=l {
                    let f = a[i * n + j];
                    let g = e[j] - hh * f;
                    e[j] = g;
                    for k in 0..=j {
                        a[j * n + k] -= f * e[k] + g * a[i * n + k];
                    }
                }
            }
        } else {
            e[i] = a[i * n + l];
        }
        d[i] = h;
    }
    for i in 0..n {
        d[i] = a[i * n + i];
    }
    if n > 0 {
        e[0] = T::zero();
    }
    (d, e)
}

/// Eigenvalues of the symmetric tridiagonal matrix (diagonal `d`, subdiagonal
/// `e[1..]`), overwriting `d`.
pub(super) fn tridiagonal_ql<T: Scalar>(d: &mut [T], e: &mut [T]) -> Result<()> {
    let n = d.len();
    if n == 0 {
        return Ok(());
    }
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = T::zero();
    let eps = T::epsilon();
    let two = T::of(2.0);
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= eps * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > MAX_SWEEPS_PER_EIGENVALUE {
                return Err(Error::ConvergenceFailure(format!("QL sweep limit at index {l}")));
            }
            let mut g = (d[l + 1] - d[l]) / (two * e[l]);
            let mut r = g.hypot(T::one());
            g = d[m] - d[l] + e[l] / (g + if g >= T::zero() { r.abs() } else { -r.abs() });
            let (mut s, mut c, mut p) = (T::one(), T::one(), T::zero());
            let mut underflow = false;
            for i in (l..m).rev() {
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == T::zero() {
                    d[i + 1] -= p;
                    e[m] = T::zero();
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + two * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = T::zero();
        }
    }
    Ok(())
}
