//! Block Lanczos with full reorthogonalization and thick restarts, for the
//! lowest eigenpairs of a real symmetric operator given only as a
//! matrix-vector product.
//!
//! The basis is extended with the residuals of the current Ritz vectors,
//! which span the next Krylov block. Keeping the basis explicitly
//! orthonormal (two Gram-Schmidt passes) lets the projected matrix be formed
//! as `V^T H V` directly; a restart keeps the lowest Ritz vectors and
//! continues from their residuals. A block size at least the multiplicity of
//! the wanted eigenvalues is needed to resolve exact degeneracies.

use crate::error::{Error, Result};
use crate::scalar::Real;

use super::dense::{symmetric_eigen, DenseMatrix};
use super::tridiag::{axpy, dot, normalize};
use super::SplitMix;

#[derive(Debug, Clone)]
pub struct KrylovOptions<T> {
    pub block_size: usize,
    /// Basis size that triggers a thick restart.
    pub max_basis: usize,
    pub max_restarts: usize,
    /// Absolute residual tolerance `||Hv - theta v||`.
    pub tol: T,
    pub seed: u64,
}

impl<T: Real> Default for KrylovOptions<T> {
    fn default() -> Self {
        Self {
            block_size: 4,
            max_basis: 160,
            max_restarts: 400,
            tol: T::lit(1e-10),
            seed: 0x1a2c_3b4d,
        }
    }
}

#[derive(Debug, Clone)]
pub struct KrylovResult<T> {
    pub values: Vec<T>,
    pub vectors: Vec<Vec<T>>,
    pub residuals: Vec<T>,
    pub restarts: usize,
    pub matvecs: usize,
}

struct Basis<T> {
    v: Vec<Vec<T>>,
    hv: Vec<Vec<T>>,
    /// Projected matrix `V^T H V`, grown incrementally.
    g: Vec<Vec<T>>,
}

impl<T: Real> Basis<T> {
    fn new() -> Self {
        Self {
            v: Vec::new(),
            hv: Vec::new(),
            g: Vec::new(),
        }
    }

    fn len(&self) -> usize {
        self.v.len()
    }

    /// Orthogonalizes `x` against the basis (twice) and appends it. Returns
    /// false if nothing independent was left.
    fn push<F: Fn(&[T], &mut [T])>(&mut self, mut x: Vec<T>, apply: &F, matvecs: &mut usize) -> bool {
        let before = dot(&x, &x).sqrt();
        if before == T::zero() {
            return false;
        }
        for _ in 0..2 {
            for q in &self.v {
                let p = dot(q, &x);
                axpy(-p, q, &mut x);
            }
        }
        let after = normalize(&mut x);
        if after <= T::lit(1e-10) * before {
            return false;
        }
        let mut hx = vec![T::zero(); x.len()];
        apply(&x, &mut hx);
        *matvecs += 1;
        let mut row: Vec<T> = self.v.iter().map(|q| dot(q, &hx)).collect();
        // Symmetrize the new row against the existing column entries.
        for (i, gi) in self.g.iter_mut().enumerate() {
            let avg = (row[i] + dot(&x, &self.hv[i])) * T::lit(0.5);
            row[i] = avg;
            gi.push(avg);
        }
        row.push(dot(&x, &hx));
        self.g.push(row);
        self.v.push(x);
        self.hv.push(hx);
        true
    }
}

struct Ritz<T> {
    values: Vec<T>,
    vectors: Vec<Vec<T>>,
    residuals: Vec<Vec<T>>,
    norms: Vec<T>,
}

fn rayleigh_ritz<T: Real>(basis: &Basis<T>, count: usize) -> Result<Ritz<T>> {
    let m = basis.len();
    let g = DenseMatrix::from_fn(m, |i, j| basis.g[i][j]);
    let (theta, s) = symmetric_eigen(&g)?;
    let count = count.min(m);
    let dim = basis.v[0].len();
    let mut out = Ritz {
        values: Vec::with_capacity(count),
        vectors: Vec::with_capacity(count),
        residuals: Vec::with_capacity(count),
        norms: Vec::with_capacity(count),
    };
    for j in 0..count {
        let mut x = vec![T::zero(); dim];
        let mut hx = vec![T::zero(); dim];
        for (i, &c) in s[j].iter().enumerate() {
            axpy(c, &basis.v[i], &mut x);
            axpy(c, &basis.hv[i], &mut hx);
        }
        let mut r = hx;
        axpy(-theta[j], &x, &mut r);
        out.norms.push(dot(&r, &r).sqrt());
        out.values.push(theta[j]);
        out.vectors.push(x);
        out.residuals.push(r);
    }
    Ok(out)
}

/// Lowest `k` eigenpairs of the symmetric operator `apply` on `R^dim`.
pub fn lowest_eigenpairs<T, F>(dim: usize, k: usize, apply: F, opts: &KrylovOptions<T>) -> Result<KrylovResult<T>>
where
    T: Real,
    F: Fn(&[T], &mut [T]),
{
    assert!(k >= 1 && k <= dim, "need 1 <= k <= dim");
    let p = opts.block_size.max(1);
    let max_basis = opts.max_basis.max(k + 2 * p).min(dim);
    let mut rng = SplitMix::new(opts.seed);
    let mut basis = Basis::new();
    let mut matvecs = 0usize;
    let random_vec = |rng: &mut SplitMix| -> Vec<T> { (0..dim).map(|_| T::lit(rng.next_f64() - 0.5)).collect() };

    for _ in 0..p {
        let x = random_vec(&mut rng);
        basis.push(x, &apply, &mut matvecs);
    }

    let mut restarts = 0usize;
    let mut last_worst = T::infinity();
    loop {
        // Track one block beyond k so the next residual block has p members.
        let track = (k + p).min(basis.len());
        let ritz = rayleigh_ritz(&basis, track)?;
        let converged = ritz.norms[..k.min(track)]
            .iter()
            .take_while(|&&r| r <= opts.tol)
            .count();
        if track >= k && converged >= k {
            return Ok(KrylovResult {
                values: ritz.values[..k].to_vec(),
                vectors: ritz.vectors[..k].to_vec(),
                residuals: ritz.norms[..k].to_vec(),
                restarts,
                matvecs,
            });
        }
        if basis.len() == dim {
            // The basis spans the whole space; Ritz pairs are exact up to
            // rounding, so whatever residual remains is the attainable one.
            let worst = ritz.norms[..k].iter().copied().fold(T::zero(), T::max);
            return Err(Error::Convergence {
                iterations: restarts,
                converged,
                wanted: k,
                worst_residual: worst.to_f64_lossy(),
            });
        }
        last_worst = ritz.norms[..k.min(track)]
            .iter()
            .copied()
            .fold(T::zero(), T::max)
            .min(last_worst);

        // Next block: residuals of the lowest unconverged Ritz pairs.
        let mut block: Vec<Vec<T>> = (0..track)
            .filter(|&j| ritz.norms[j] > opts.tol)
            .take(p)
            .map(|j| ritz.residuals[j].clone())
            .collect();
        while block.len() < p {
            block.push(random_vec(&mut rng));
        }

        if basis.len() + p > max_basis {
            restarts += 1;
            if restarts > opts.max_restarts {
                return Err(Error::Convergence {
                    iterations: restarts,
                    converged,
                    wanted: k,
                    worst_residual: last_worst.to_f64_lossy(),
                });
            }
            // Keep the lowest Ritz vectors; pushing them again restores exact
            // orthonormality and rebuilds the projected matrix.
            let mut kept = Basis::new();
            for x in ritz.vectors {
                kept.push(x, &apply, &mut matvecs);
            }
            basis = kept;
        }
        for x in block {
            if basis.len() >= dim {
                break;
            }
            if !basis.push(x, &apply, &mut matvecs) {
                let y = random_vec(&mut rng);
                basis.push(y, &apply, &mut matvecs);
            }
        }
    }
}
