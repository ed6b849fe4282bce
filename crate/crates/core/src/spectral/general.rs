//! Eigenvalues of a general real matrix: diagonal balancing, Householder
//! reduction to upper Hessenberg form, and Francis double-shift QR on the
//! active window (eigenvalues only, no Schur vectors).

use num_complex::Complex;

use super::Matrix;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

const MAX_ITER_PER_EIGENVALUE: usize = 100;

pub(super) fn eigenvalues<T: Scalar>(m: &Matrix<T>) -> Result<Vec<Complex<T>>> {
    let n = m.rows();
    let mut h: Vec<Vec<T>> = (0..n).map(|i| m.row(i).to_vec()).collect();
    balance(&mut h);
    hessenberg(&mut h);
    hqr(&mut h)
}

/// Radix-2 row/column scaling that equalizes off-diagonal norms; a diagonal
/// similarity, so the spectrum is unchanged.
fn balance<T: Scalar>(a: &mut [Vec<T>]) {
    let n = a.len();
    let radix = T::of(2.0);
    let sqrdx = radix * radix;
    let mut done = false;
    while !done {
        done = true;
        for i in 0..n {
            let (mut r, mut c) = (T::zero(), T::zero());
            for j in 0..n {
                if j != i {
                    c += a[j][i].abs();
                    r += a[i][j].abs();
                }
            }
            if c == T::zero() || r == T::zero() {
                continue;
            }
            let s = c + r;
            let mut f = T::one();
            let mut g = r / radix;
            while c < g {
                f *= radix;
                c *= sqrdx;
            }
            g = r * radix;
            while c > g {
                f /= radix;
                c /= sqrdx;
            }
            if (c + r) / f < T::of(0.95) * s {
                done = false;
                let g = T::one() / f;
                for j in 0..n {
                    a[i][j] *= g;
                }
                for row in a.iter_mut() {
                    row[i] *= f;
                }
            }
        }
    }
}

/// Orthogonal similarity reduction to upper Hessenberg form; entries below
/// the first subdiagonal are zeroed.
fn hessenberg<T: Scalar>(a: &mut [Vec<T>]) {
    let n = a.len();
    if n < 3 {
        return;
    }
    let high = n - 1;
    let mut ort = vec![T::zero(); n];
    for m in 1..high {
        let scale: T = (m..=high).map(|i| a[i][m - 1].abs()).sum();
        if scale == T::zero() {
            continue;
        }
        let mut h = T::zero();
        for i in (m..=high).rev() {
            ort[i] = a[i][m - 1] / scale;
            h += ort[i] * ort[i];
        }
        let mut g = h.sqrt();
        if ort[m] > T::zero() {
            g = -g;
        }
        h -= ort[m] * g;
        ort[m] -= g;

        for j in m..n {
            let mut f = T::zero();
            for i in (m..=high).rev() {
                f += ort[i] * a[i][j];
            }
            f /= h;
            for i in m..=high {
                a[i][j] -= f * ort[i];
            }
        }
        for row in a.iter_mut() {
            let mut f = T::zero();
            for j in (m..=high).rev() {
                f += ort[j] * row[j];
            }
            f /= h;
            for j in m..=high {
                row[j] -= f * ort[j];
            }
        }
        a[m][m - 1] = scale * g;
    }
    for i in 2..n {
        for j in 0..i - 1 {
            a[i][j] = T::zero();
        }
    }
}

fn hqr<T: Scalar>(h: &mut [Vec<T>]) -> Result<Vec<Complex<T>>> {
    let nn = h.len();
    let mut out = vec![Complex::new(T::zero(), T::zero()); nn];
    if nn == 0 {
        return Ok(out);
    }
    let eps = T::epsilon();
    let zero = T::zero();
    let half = T::of(0.5);

    let mut norm = zero;
    for i in 0..nn {
        for j in i.saturating_sub(1)..nn {
            norm += h[i][j].abs();
        }
    }

    let mut exshift = zero;
    let (mut p, mut q, mut r, mut s, mut z);
    let (mut w, mut x, mut y);
    let mut n = nn as isize - 1;
    let mut iter = 0usize;

    while n >= 0 {
        let nu = n as usize;
        let mut l = nu;
        while l > 0 {
            s = h[l - 1][l - 1].abs() + h[l][l].abs();
            if s == zero {
                s = norm;
            }
            if h[l][l - 1].abs() < eps * s {
                break;
            }
            l -= 1;
        }

        if l == nu {
            out[nu] = Complex::new(h[nu][nu] + exshift, zero);
            n -= 1;
            iter = 0;
        } else if l + 1 == nu {
            w = h[nu][nu - 1] * h[nu - 1][nu];
            p = (h[nu - 1][nu - 1] - h[nu][nu]) * half;
            q = p * p + w;
            z = q.abs().sqrt();
            x = h[nu][nu] + exshift;
            if q >= zero {
                z = if p >= zero { p + z } else { p - z };
                let hi = x + z;
                let lo = if z != zero { x - w / z } else { hi };
                out[nu - 1] = Complex::new(hi, zero);
                out[nu] = Complex::new(lo, zero);
            } else {
                out[nu - 1] = Complex::new(x + p, z);
                out[nu] = Complex::new(x + p, -z);
            }
            n -= 2;
            iter = 0;
        } else {
            x = h[nu][nu];
            y = h[nu - 1][nu - 1];
            w = h[nu][nu - 1] * h[nu - 1][nu];

            if iter == 10 {
                exshift += x;
                for i in 0..=nu {
                    h[i][i] -= x;
                }
                s = h[nu][nu - 1].abs() + h[nu - 1][nu - 2].abs();
                x = T::of(0.75) * s;
                y = x;
                w = T::of(-0.4375) * s * s;
            }
            if iter == 30 {
                s = (y - x) * half;
                s = s * s + w;
                if s > zero {
                    s = s.sqrt();
                    if y < x {
                        s = -s;
                    }
                    s = x - w / ((y - x) * half + s);
                    for i in 0..=nu {
                        h[i][i] -= s;
                    }
                    exshift += s;
                    x = T::of(0.964);
                    y = x;
                    w = x;
                }
            }
            iter += 1;
            if iter > MAX_ITER_PER_EIGENVALUE {
                return Err(Error::ConvergenceFailure(format!("QR iteration limit at index {nu}")));
            }

            // two consecutive small subdiagonal elements
            let mut m = nu - 2;
            loop {
                z = h[m][m];
                r = x - z;
                s = y - z;
                p = (r * s - w) / h[m + 1][m] + h[m][m + 1];
                q = h[m + 1][m + 1] - z - r - s;
                r = h[m + 2][m + 1];
                s = p.abs() + q.abs() + r.abs();
                p /= s;
                q /= s;
                r /= s;
                if m == l {
                    break;
                }
                let lhs = h[m][m - 1].abs() * (q.abs() + r.abs());
                let rhs = eps * (p.abs() * (h[m - 1][m - 1].abs() + z.abs() + h[m + 1][m + 1].abs()));
                if lhs < rhs {
                    break;
                }
                m -= 1;
            }

            for i in m + 2..=nu {
                h[i][i - 2] = zero;
                if i > m + 2 {
                    h[i][i - 3] = zero;
                }
            }

            let mut xk = x;
            for k in m..nu {
                let notlast = k != nu - 1;
                if k != m {
                    p = h[k][k - 1];
                    q = h[k + 1][k - 1];
                    r = if notlast { h[k + 2][k - 1] } else { zero };
                    xk = p.abs() + q.abs() + r.abs();
                    if xk == zero {
                        continue;
                    }
                    p /= xk;
                    q /= xk;
                    r /= xk;
                }
                s = (p * p + q * q + r * r).sqrt();
                if p < zero {
                    s = -s;
                }
                if s == zero {
                    continue;
                }
                if k != m {
                    h[k][k - 1] = -s * xk;
                } else if l != m {
                    h[k][k - 1] = -h[k][k - 1];
                }
                p += s;
                let xs = p / s;
                let ys = q / s;
                let zs = r / s;
                q /= p;
                r /= p;

                // rows of the active window only
                for j in k..=nu {
                    let mut pp = h[k][j] + q * h[k + 1][j];
                    if notlast {
                        pp += r * h[k + 2][j];
                        h[k + 2][j] -= pp * zs;
                    }
                    h[k][j] -= pp * xs;
                    h[k + 1][j] -= pp * ys;
                }
                for i in l..=nu.min(k + 3) {
                    let mut pp = xs * h[i][k] + ys * h[i][k + 1];
                    if notlast {
                        pp += zs * h[i][k + 2];
                        h[i][k + 2] -= pp * r;
                    }
                    h[i][k] -= pp;
                    h[i][k + 1] -= pp * q;
                }
            }
        }
    }
    Ok(out)
}
