//! Symmetric tridiagonal eigenproblems: implicit QL with Wilkinson shifts and
//! inverse iteration for selected eigenvectors.

use crate::error::{Error, Result};
use crate::scalar::Real;

use super::SplitMix;

const MAX_QL_SWEEPS: usize = 60;

/// Symmetric tridiagonal matrix with diagonal `diag` and sub/super-diagonal
/// `off` (`off.len() == diag.len() - 1`).
#[derive(Debug, Clone, PartialEq)]
pub struct SymTridiagonal<T> {
    pub diag: Vec<T>,
    pub off: Vec<T>,
}

impl<T: Real> SymTridiagonal<T> {
    pub fn new(diag: Vec<T>, off: Vec<T>) -> Self {
        assert!(
            diag.is_empty() && off.is_empty() || off.len() + 1 == diag.len(),
            "off-diagonal length must be n - 1"
        );
        Self { diag, off }
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    /// Max-row-sum norm.
    pub fn norm_inf(&self) -> T {
        let n = self.len();
        (0..n)
            .map(|i| {
                let mut s = self.diag[i].abs();
                if i > 0 {
                    s += self.off[i - 1].abs();
                }
                if i + 1 < n {
                    s += self.off[i].abs();
                }
                s
            })
            .fold(T::zero(), T::max)
    }

    /// All eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Result<Vec<T>> {
        let mut d = self.diag.clone();
        let mut e = self.off.clone();
        e.push(T::zero());
        ql_implicit(&mut d, &mut e, None)?;
        d.sort_by(|a, b| a.partial_cmp(b).expect("finite eigenvalues"));
        Ok(d)
    }

    /// Full eigendecomposition; vectors are returned column-wise as
    /// `vectors[j]`, matching ascending `values[j]`.
    pub fn eigen_full(&self) -> Result<(Vec<T>, Vec<Vec<T>>)> {
        let n = self.len();
        let mut d = self.diag.clone();
        let mut e = self.off.clone();
        e.push(T::zero());
        let mut z = vec![T::zero(); n * n];
        for i in 0..n {
            z[i * n + i] = T::one();
        }
        ql_implicit(&mut d, &mut e, Some(&mut z))?;
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| d[a].partial_cmp(&d[b]).expect("finite eigenvalues"));
        let values = order.iter().map(|&j| d[j]).collect();
        let vectors = order
            .iter()
            .map(|&j| (0..n).map(|i| z[i * n + j]).collect())
            .collect();
        Ok((values, vectors))
    }

    /// Eigenvectors for the given (ascending) eigenvalues by inverse
    /// iteration, reorthogonalizing inside clusters.
    pub fn inverse_iteration(&self, values: &[T]) -> Vec<Vec<T>> {
        let n = self.len();
        let norm = self.norm_inf().max(T::min_positive_value());
        let eps = T::epsilon();
        let cluster_gap = T::lit(1e-3) * norm;
        let mut rng = SplitMix::new(0x5eed_1a2b);
        let mut out: Vec<Vec<T>> = Vec::with_capacity(values.len());
        let mut cluster_start = 0usize;
        for (j, &theta) in values.iter().enumerate() {
            if j > 0 && theta - values[j - 1] > cluster_gap {
                cluster_start = j;
            }
            // Separate coincident shifts so each solve stays well defined.
            let shift = theta + T::of_usize(j - cluster_start) * T::lit(10.0) * eps * norm;
            let lu = TridiagLu::factor(self, shift, eps * norm);
            let mut x: Vec<T> = (0..n).map(|_| T::lit(rng.next_f64() - 0.5)).collect();
            normalize(&mut x);
            for _ in 0..6 {
                let mut y = lu.solve(&x);
                for prev in &out[cluster_start..j] {
                    let p = dot(prev, &y);
                    axpy(-p, prev, &mut y);
                }
                let growth = normalize(&mut y);
                x = y;
                if growth > T::one() / (T::lit(1e3) * eps) {
                    break;
                }
            }
            // One more sweep of orthogonalization for stability.
            for prev in &out[cluster_start..j] {
                let p = dot(prev, &x);
                axpy(-p, prev, &mut x);
            }
            normalize(&mut x);
            out.push(x);
        }
        out
    }
}

/// LU factorization of `T - shift I` with partial pivoting; `U` has two
/// superdiagonals.
struct TridiagLu<T> {
    u0: Vec<T>,
    u1: Vec<T>,
    u2: Vec<T>,
    mult: Vec<T>,
    swapped: Vec<bool>,
}

impl<T: Real> TridiagLu<T> {
    fn factor(t: &SymTridiagonal<T>, shift: T, tiny: T) -> Self {
        let n = t.len();
        let mut u0 = vec![T::zero(); n];
        let mut u1 = vec![T::zero(); n];
        let mut u2 = vec![T::zero(); n];
        let mut mult = vec![T::zero(); n];
        let mut swapped = vec![false; n];
        if n == 0 {
            return Self { u0, u1, u2, mult, swapped };
        }
        // Row i of the active matrix: (a, b, c) at columns (i, i+1, i+2).
        let mut a = t.diag[0] - shift;
        let mut b = if n > 1 { t.off[0] } else { T::zero() };
        let mut c = T::zero();
        for i in 0..n {
            if i + 1 == n {
                u0[i] = if a.abs() < tiny { tiny } else { a };
                break;
            }
            let low = t.off[i];
            let next_a = t.diag[i + 1] - shift;
            let next_b = if i + 2 < n { t.off[i + 1] } else { T::zero() };
            if low.abs() > a.abs() {
                // Swap rows i and i+1.
                swapped[i] = true;
                let m = a / low;
                mult[i] = m;
                u0[i] = low;
                u1[i] = next_a;
                u2[i] = next_b;
                a = b - m * next_a;
                b = c - m * next_b;
                c = T::zero();
            } else {
                let piv = if a.abs() < tiny { tiny } else { a };
                let m = low / piv;
                mult[i] = m;
                u0[i] = piv;
                u1[i] = b;
                u2[i] = c;
                a = next_a - m * b;
                b = next_b - m * c;
                c = T::zero();
            }
        }
        Self { u0, u1, u2, mult, swapped }
    }

    fn solve(&self, rhs: &[T]) -> Vec<T> {
        let n = rhs.len();
        let mut y = rhs.to_vec();
        for i in 0..n.saturating_sub(1) {
            if self.swapped[i] {
                y.swap(i, i + 1);
            }
            let m = self.mult[i];
            y[i + 1] = y[i + 1] - m * y[i];
        }
        for i in (0..n).rev() {
            let mut s = y[i];
            if i + 1 < n {
                s -= self.u1[i] * y[i + 1];
            }
            if i + 2 < n {
                s -= self.u2[i] * y[i + 2];
            }
            y[i] = s / self.u0[i];
        }
        y
    }
}

/// Implicit QL with Wilkinson shifts (tqli). `e[n-1]` is scratch. When `z`
/// is given (row-major `n x n`), the rotations are accumulated into its
/// columns.
pub(crate) fn ql_implicit<T: Real>(d: &mut [T], e: &mut [T], mut z: Option<&mut [T]>) -> Result<()> {
    let n = d.len();
    if n == 0 {
        return Ok(());
    }
    let two = T::lit(2.0);
    for l in 0..n {
        let mut iter = 0usize;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= T::epsilon() * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > MAX_QL_SWEEPS {
                return Err(Error::Convergence {
                    iterations: iter,
                    converged: l,
                    wanted: n,
                    worst_residual: e[l].abs().to_f64_lossy(),
                });
            }
            let mut g = (d[l + 1] - d[l]) / (two * e[l]);
            let mut r = g.hypot(T::one());
            g = d[m] - d[l] + e[l] / (g + r.abs().copysign(g));
            let mut s = T::one();
            let mut c = T::one();
            let mut p = T::zero();
            let mut i = m;
            let mut early = false;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == T::zero() {
                    d[i + 1] -= p;
                    e[m] = T::zero();
                    early = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + two * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                if let Some(z) = z.as_deref_mut() {
                    for k in 0..n {
                        let zk1 = z[k * n + i + 1];
                        let zk = z[k * n + i];
                        z[k * n + i + 1] = s * zk + c * zk1;
                        z[k * n + i] = c * zk - s * zk1;
                    }
                }
            }
            if early {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = T::zero();
        }
    }
    Ok(())
}

pub(crate) fn dot<T: Real>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).map(|(&x, &y)| x * y).sum()
}

pub(crate) fn axpy<T: Real>(alpha: T, x: &[T], y: &mut [T]) {
    for (yi, &xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

/// Normalizes in place and returns the previous norm.
pub(crate) fn normalize<T: Real>(x: &mut [T]) -> T {
    let nrm = dot(x, x).sqrt();
    if nrm > T::zero() {
        for v in x.iter_mut() {
            *v /= nrm;
        }
    }
    nrm
}
