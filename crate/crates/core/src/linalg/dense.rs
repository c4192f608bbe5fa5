//! Dense real symmetric eigensolver: Householder reduction to tridiagonal
//! form, implicit QL for the eigenvalues, and either full accumulation or
//! inverse iteration plus back-transformation for the eigenvectors.

use crate::error::Result;
use crate::scalar::Real;

use super::tridiag::{ql_implicit, SymTridiagonal};

/// Row-major square matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix<T> {
    n: usize,
    data: Vec<T>,
}

impl<T: Real> DenseMatrix<T> {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![T::zero(); n * n],
        }
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m.data[i * n + j] = f(i, j);
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> T {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.n + j] = v;
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn matvec(&self, x: &[T]) -> Vec<T> {
        (0..self.n)
            .map(|i| self.row(i).iter().zip(x).map(|(&a, &b)| a * b).sum())
            .collect()
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }
}

/// Householder reflectors `H_j = I - beta_j v_j v_j^T` acting on rows
/// `j+1..n`, together with the resulting tridiagonal matrix.
struct Tridiagonalization<T> {
    tri: SymTridiagonal<T>,
    reflectors: Vec<(Vec<T>, T)>,
}

fn tridiagonalize<T: Real>(a: &DenseMatrix<T>) -> Tridiagonalization<T> {
    let n = a.n;
    let mut m = a.data.clone();
    let mut reflectors = Vec::with_capacity(n.saturating_sub(2));
    let mut off = Vec::with_capacity(n.saturating_sub(1));
    let two = T::lit(2.0);
    for j in 0..n.saturating_sub(2) {
        let len = n - j - 1;
        let x: Vec<T> = (0..len).map(|i| m[(j + 1 + i) * n + j]).collect();
        let sigma: T = x[1..].iter().map(|&v| v * v).sum();
        if sigma == T::zero() {
            off.push(x[0]);
            reflectors.push((Vec::new(), T::zero()));
            continue;
        }
        let alpha = -(x[0] * x[0] + sigma).sqrt().copysign(x[0]);
        let mut v = x;
        v[0] -= alpha;
        let vnorm2: T = v.iter().map(|&t| t * t).sum();
        let beta = two / vnorm2;
        // p = beta * A22 v ; w = p - (beta/2)(v^T p) v ; A22 -= v w^T + w v^T
        let base = j + 1;
        let mut p = vec![T::zero(); len];
        for r in 0..len {
            let row = &m[(base + r) * n + base..(base + r) * n + n];
            p[r] = beta * row.iter().zip(&v).map(|(&a, &b)| a * b).sum::<T>();
        }
        let k = beta / two * v.iter().zip(&p).map(|(&a, &b)| a * b).sum::<T>();
        for r in 0..len {
            p[r] -= k * v[r];
        }
        for r in 0..len {
            let vr = v[r];
            let pr = p[r];
            let row = &mut m[(base + r) * n + base..(base + r) * n + n];
            for (c, e) in row.iter_mut().enumerate() {
                *e -= vr * p[c] + pr * v[c];
            }
        }
        off.push(alpha);
        reflectors.push((v, beta));
    }
    if n >= 2 {
        off.push(m[(n - 1) * n + (n - 2)]);
    }
    let diag = (0..n).map(|i| m[i * n + i]).collect();
    Tridiagonalization {
        tri: SymTridiagonal::new(diag, off),
        reflectors,
    }
}

impl<T: Real> Tridiagonalization<T> {
    /// Maps an eigenvector of the tridiagonal matrix back to the original
    /// basis: `x = H_0 H_1 ... H_{n-3} y`.
    fn back_transform(&self, y: &mut [T]) {
        for (j, (v, beta)) in self.reflectors.iter().enumerate().rev() {
            if v.is_empty() {
                continue;
            }
            let seg = &mut y[j + 1..];
            let s: T = seg.iter().zip(v).map(|(&a, &b)| a * b).sum();
            let f = *beta * s;
            for (yi, &vi) in seg.iter_mut().zip(v) {
                *yi -= f * vi;
            }
        }
    }
}

/// All eigenpairs of a symmetric matrix, ascending.
pub fn symmetric_eigen<T: Real>(a: &DenseMatrix<T>) -> Result<(Vec<T>, Vec<Vec<T>>)> {
    let td = tridiagonalize(a);
    let n = a.n;
    let mut d = td.tri.diag.clone();
    let mut e = td.tri.off.clone();
    e.push(T::zero());
    let mut z = vec![T::zero(); n * n];
    for i in 0..n {
        z[i * n + i] = T::one();
    }
    ql_implicit(&mut d, &mut e, Some(&mut z))?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| d[x].partial_cmp(&d[y]).expect("finite eigenvalues"));
    let values = order.iter().map(|&j| d[j]).collect();
    let vectors = order
        .iter()
        .map(|&j| {
            let mut col: Vec<T> = (0..n).map(|i| z[i * n + j]).collect();
            td.back_transform(&mut col);
            col
        })
        .collect();
    Ok((values, vectors))
}

/// All eigenvalues of a symmetric matrix, ascending.
pub fn symmetric_eigenvalues<T: Real>(a: &DenseMatrix<T>) -> Result<Vec<T>> {
    tridiagonalize(a).tri.eigenvalues()
}

/// The `k` lowest eigenpairs of a symmetric matrix.
///
/// Costs one Householder reduction plus `O(k n^2)`; the eigenvectors of the
/// tridiagonal form come from inverse iteration.
pub fn lowest_eigenpairs<T: Real>(a: &DenseMatrix<T>, k: usize) -> Result<(Vec<T>, Vec<Vec<T>>)> {
    let td = tridiagonalize(a);
    let values = td.tri.eigenvalues()?;
    let k = k.min(values.len());
    let wanted = &values[..k];
    let mut vectors = td.tri.inverse_iteration(wanted);
    for v in vectors.iter_mut() {
        td.back_transform(v);
    }
    Ok((wanted.to_vec(), vectors))
}
