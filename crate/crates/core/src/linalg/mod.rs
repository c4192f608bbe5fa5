//! Real symmetric eigensolvers used by the spectrum module.

pub mod dense;
pub mod krylov;
pub mod tridiag;

pub use dense::{lowest_eigenpairs as dense_lowest_eigenpairs, symmetric_eigen, symmetric_eigenvalues, DenseMatrix};
pub use krylov::{lowest_eigenpairs as krylov_lowest_eigenpairs, KrylovOptions, KrylovResult};
pub use tridiag::SymTridiagonal;

/// Small deterministic generator for start vectors (SplitMix64).
#[derive(Debug, Clone)]
pub(crate) struct SplitMix(u64);

impl SplitMix {
    pub(crate) fn new(seed: u64) -> Self {
        Self(seed)
    }

    pub(crate) fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }

    /// Uniform in `[0, 1)`.
    pub(crate) fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }
}
