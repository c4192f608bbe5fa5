//! Physical parameters, the truncated block-tridiagonal Hamiltonian, and the
//! mapping between the L and polar-Lambda configurations.
//!
//! Units: `hbar = 1`. The basis is ordered `|g1,0>, |g2,0>, |e,0>, |g1,1>, ...`
//! so the Hamiltonian is block tridiagonal in 3x3 blocks: block `(N, N)`
//! carries the qutrit energies plus `omega (N + 1/2)`, block `(N, N+1)` is
//! `sqrt(N+1)` times the qutrit coupling matrix multiplying `(a^+ + a)`.

use std::ops::{Add, Mul};

use num_complex::Complex;
use num_traits::Zero;

use crate::diagnostics::Diagnostic;
use crate::error::{Error, Result};
use crate::linalg::DenseMatrix;
use crate::scalar::Real;
use crate::state::StateVector;

pub type Block<T> = [[T; 3]; 3];

/// Parameters of the polar-Lambda qutrit coupled to one oscillator mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams<T> {
    /// Mode frequency.
    pub omega: T,
    /// Energy of both lower levels.
    pub eps_g: T,
    /// Energy of the excited level.
    pub eps_e: T,
    /// Tunnel coupling between `g1` and `g2`.
    pub delta: T,
    /// Mean-dipole (diagonal) coupling.
    pub mu: T,
    /// Transition coupling between the lower levels and `e`.
    pub lam: T,
}

impl<T: Real> ModelParams<T> {
    pub fn new(omega: T, eps_g: T, eps_e: T, delta: T, mu: T, lam: T) -> Result<Self> {
        let p = Self {
            omega,
            eps_g,
            eps_e,
            delta,
            mu,
            lam,
        };
        p.validate()?;
        Ok(p)
    }

    /// Dimensionless parameters with `omega = 1`, `eps_g = 0`, `eps_e = omega0`.
    pub fn from_ratios(lambda: T, mu: T, omega0: T, delta: T) -> Result<Self> {
        Self::new(T::one(), T::zero(), omega0, delta, mu, lambda)
    }

    /// Dimensionless parameters tuned to exact `n`-photon resonance,
    /// `omega0 + mu^2/omega = n omega` with `omega = 1`.
    pub fn at_resonance(n: usize, lambda: T, mu: T, delta: T) -> Result<Self> {
        Self::from_ratios(lambda, mu, T::of_usize(n) - mu * mu, delta)
    }

    pub fn validate(&self) -> Result<()> {
        let all = [self.omega, self.eps_g, self.eps_e, self.delta, self.mu, self.lam];
        if all.iter().any(|v| !v.is_finite()) {
            return Err(Error::Domain("model parameters must be finite".into()));
        }
        if self.omega <= T::zero() {
            return Err(Error::Domain(format!("omega must be positive, got {}", self.omega)));
        }
        if self.omega0() < T::zero() {
            return Err(Error::Domain(format!(
                "eps_e - eps_g must be non-negative, got {}",
                self.omega0()
            )));
        }
        Ok(())
    }

    /// Bare qutrit gap `eps_e - eps_g`.
    pub fn omega0(&self) -> T {
        self.eps_e - self.eps_g
    }

    /// Gap between the excited ladder and the displaced lower ladders,
    /// `omega0 + mu^2 / omega`.
    pub fn omega_eg(&self) -> T {
        self.omega0() + self.mu * self.mu / self.omega
    }

    /// Displacement `mu / omega` of the lower-level oscillators.
    pub fn displacement(&self) -> T {
        self.mu / self.omega
    }

    /// Reference energy `eps_g + omega / 2` from which spectra are counted.
    pub fn energy_offset(&self) -> T {
        self.eps_g + self.omega * T::lit(0.5)
    }

    /// Checks `|Delta| << omega < eps_e - eps_g` (with "<<" read as a
    /// factor of ten, inclusive).
    pub fn regime_diagnostics(&self) -> Vec<Diagnostic> {
        let ok = self.delta.abs() <= T::lit(0.1) * self.omega && self.omega < self.omega0();
        if ok {
            Vec::new()
        } else {
            vec![Diagnostic::OutsideThreeLevelRegime {
                delta: self.delta.to_f64_lossy(),
                omega: self.omega.to_f64_lossy(),
                omega0: self.omega0().to_f64_lossy(),
            }]
        }
    }

    /// Qutrit coupling matrix multiplying `(a^+ + a)`: `mu S_L + lambda S_t`.
    pub fn coupling_matrix(&self) -> Block<T> {
        let (mu, lam, z) = (self.mu, self.lam, T::zero());
        [[-mu, z, lam], [z, mu, -lam], [lam, -lam, z]]
    }

    /// Bare qutrit Hamiltonian.
    pub fn qutrit_matrix(&self) -> Block<T> {
        let z = T::zero();
        [[self.eps_g, self.delta, z], [self.delta, self.eps_g, z], [z, z, self.eps_e]]
    }
}

/// Photon-number cutoff of the Fock basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TruncationScheme {
    pub n_max: usize,
}

/// Floor of the default truncation.
pub const DEFAULT_MIN_N_MAX: usize = 200;

/// Ground-energy shift under doubling that certifies a truncation.
pub const CONVERGENCE_CERTIFICATE_TOL: f64 = 1e-8;

impl TruncationScheme {
    pub fn new(n_max: usize) -> Result<Self> {
        if n_max < 1 {
            return Err(Error::Dimension("n_max must be at least 1".into()));
        }
        Ok(Self { n_max })
    }

    /// `max(200, ceil(10 r^2 + 10 r + 5 n))` with `r = |mu| / omega` and `n`
    /// the resonance order (0 if none).
    pub fn default_for<T: Real>(params: &ModelParams<T>, resonance: usize) -> Self {
        let r = params.displacement().abs().to_f64_lossy();
        let est = (10.0 * r * r + 10.0 * r + 5.0 * resonance as f64).ceil() as usize;
        Self {
            n_max: est.max(DEFAULT_MIN_N_MAX),
        }
    }

    pub fn dim(&self) -> usize {
        3 * (self.n_max + 1)
    }

    pub fn doubled(&self) -> Self {
        Self { n_max: 2 * self.n_max }
    }
}

/// Real symmetric block-tridiagonal Hamiltonian with 3x3 blocks.
///
/// Only the diagonal blocks and the upper off-diagonal blocks are stored; the
/// lower blocks are their transposes, so the matrix is symmetric by
/// construction.
#[derive(Debug, Clone, PartialEq)]
pub struct HamiltonianMatrix<T> {
    omega: T,
    diag: Vec<Block<T>>,
    upper: Vec<Block<T>>,
}

impl<T: Real> HamiltonianMatrix<T> {
    /// Assembles the matrix from a qutrit Hamiltonian `h0`, mode frequency and
    /// a symmetric coupling `c` multiplying `(a^+ + a)`.
    pub fn from_qutrit_parts(h0: Block<T>, omega: T, coupling: Block<T>, trunc: TruncationScheme) -> Result<Self> {
        if trunc.n_max < 1 {
            return Err(Error::Dimension("n_max must be at least 1".into()));
        }
        let half = T::lit(0.5);
        let diag = (0..=trunc.n_max)
            .map(|n| {
                let mut b = h0;
                let shift = omega * (T::of_usize(n) + half);
                for (i, row) in b.iter_mut().enumerate() {
                    row[i] += shift;
                }
                b
            })
            .collect();
        let upper = (0..trunc.n_max)
            .map(|n| {
                let s = T::of_usize(n + 1).sqrt();
                coupling.map(|row| row.map(|c| c * s))
            })
            .collect();
        Ok(Self { omega, diag, upper })
    }

    pub fn n_max(&self) -> usize {
        self.diag.len() - 1
    }

    /// Mode frequency; the natural unit for tolerances.
    pub fn omega(&self) -> T {
        self.omega
    }

    pub fn dim(&self) -> usize {
        3 * self.diag.len()
    }

    pub fn diagonal_block(&self, n: usize) -> &Block<T> {
        &self.diag[n]
    }

    /// Block coupling photon number `n` to `n + 1`.
    pub fn upper_block(&self, n: usize) -> &Block<T> {
        &self.upper[n]
    }

    /// Entry `(i, j)` of the full matrix.
    pub fn get(&self, i: usize, j: usize) -> T {
        let (bi, si) = (i / 3, i % 3);
        let (bj, sj) = (j / 3, j % 3);
        if bi == bj {
            self.diag[bi][si][sj]
        } else if bj == bi + 1 {
            self.upper[bi][si][sj]
        } else if bi == bj + 1 {
            self.upper[bj][sj][si]
        } else {
            T::zero()
        }
    }

    pub fn to_dense(&self) -> DenseMatrix<T> {
        let d = self.dim();
        let mut m = DenseMatrix::zeros(d);
        for i in 0..d {
            let lo = (i / 3).saturating_sub(1) * 3;
            let hi = ((i / 3 + 2) * 3).min(d);
            for j in lo..hi {
                m.set(i, j, self.get(i, j));
            }
        }
        m
    }

    /// `y = H x` for any amplitude type that real entries can scale.
    pub fn apply_into<S>(&self, x: &[S], y: &mut [S])
    where
        S: Copy + Zero + Add<Output = S> + Mul<T, Output = S>,
    {
        let nb = self.diag.len();
        debug_assert_eq!(x.len(), 3 * nb);
        debug_assert_eq!(y.len(), 3 * nb);
        for n in 0..nb {
            let d = &self.diag[n];
            let xb = &x[3 * n..3 * n + 3];
            let mut out = [S::zero(); 3];
            for (r, o) in out.iter_mut().enumerate() {
                *o = xb[0] * d[r][0] + xb[1] * d[r][1] + xb[2] * d[r][2];
            }
            if n + 1 < nb {
                let u = &self.upper[n];
                let xn = &x[3 * n + 3..3 * n + 6];
                for (r, o) in out.iter_mut().enumerate() {
                    *o = *o + xn[0] * u[r][0] + xn[1] * u[r][1] + xn[2] * u[r][2];
                }
            }
            if n > 0 {
                let u = &self.upper[n - 1];
                let xp = &x[3 * n - 3..3 * n];
                for (r, o) in out.iter_mut().enumerate() {
                    *o = *o + xp[0] * u[0][r] + xp[1] * u[1][r] + xp[2] * u[2][r];
                }
            }
            y[3 * n..3 * n + 3].copy_from_slice(&out);
        }
    }

    /// Gershgorin enclosure `[lo, hi]` of the spectrum.
    pub fn gershgorin_interval(&self) -> (T, T) {
        let d = self.dim();
        let mut lo = T::infinity();
        let mut hi = T::neg_infinity();
        for i in 0..d {
            let lo_j = (i / 3).saturating_sub(1) * 3;
            let hi_j = ((i / 3 + 2) * 3).min(d);
            let radius: T = (lo_j..hi_j).filter(|&j| j != i).map(|j| self.get(i, j).abs()).sum();
            let c = self.get(i, i);
            lo = lo.min(c - radius);
            hi = hi.max(c + radius);
        }
        (lo, hi)
    }

    /// Gershgorin bound on the spectral radius.
    pub fn spectral_radius_bound(&self) -> T {
        let (lo, hi) = self.gershgorin_interval();
        lo.abs().max(hi.abs())
    }

    /// `<psi|H|psi>` (not normalized).
    pub fn expectation(&self, psi: &StateVector<T>) -> Result<T> {
        let hpsi = apply_hamiltonian(self, psi)?;
        Ok(psi.inner(&hpsi)?.re)
    }
}

/// Truncated polar-Lambda Hamiltonian.
pub fn build_hamiltonian<T: Real>(params: &ModelParams<T>, trunc: TruncationScheme) -> Result<HamiltonianMatrix<T>> {
    params.validate()?;
    HamiltonianMatrix::from_qutrit_parts(params.qutrit_matrix(), params.omega, params.coupling_matrix(), trunc)
}

/// `H v` using the block structure.
pub fn apply_hamiltonian<T: Real>(h: &HamiltonianMatrix<T>, v: &StateVector<T>) -> Result<StateVector<T>> {
    if v.dim() != h.dim() {
        return Err(Error::Dimension(format!(
            "state has dimension {} but the Hamiltonian has {}",
            v.dim(),
            h.dim()
        )));
    }
    let mut out = vec![Complex::new(T::zero(), T::zero()); h.dim()];
    h.apply_into(v.amplitudes(), &mut out);
    StateVector::from_amplitudes(out)
}

/// Parameters of the L configuration: `g1 <-> g2` and `g2 <-> e` dipole
/// transitions with no permanent dipoles.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LConfigParams<T> {
    pub eps_g1: T,
    pub eps_g2: T,
    pub eps_e: T,
    /// Field amplitude times `d_{g1 g2}`.
    pub g12: T,
    /// Field amplitude times `d_{g2 e}`.
    pub g2e: T,
    pub omega: T,
}

impl<T: Real> LConfigParams<T> {
    /// Also requires `eps_e` not below the mean of the lower levels, so the
    /// mapped polar-Lambda parameters are valid.
    pub fn new(eps_g1: T, eps_g2: T, eps_e: T, g12: T, g2e: T, omega: T) -> Result<Self> {
        let p = Self {
            eps_g1,
            eps_g2,
            eps_e,
            g12,
            g2e,
            omega,
        };
        if [eps_g1, eps_g2, eps_e, g12, g2e, omega].iter().any(|v| !v.is_finite()) {
            return Err(Error::Domain("L-configuration parameters must be finite".into()));
        }
        if omega <= T::zero() {
            return Err(Error::Domain(format!("omega must be positive, got {omega}")));
        }
        if eps_e < (eps_g1 + eps_g2) * T::lit(0.5) {
            return Err(Error::Domain("eps_e must not lie below the mean lower-level energy".into()));
        }
        Ok(p)
    }
}

/// Polar-Lambda parameters unitarily equivalent to an L configuration.
pub fn map_l_to_polar_lambda<T: Real>(lp: &LConfigParams<T>) -> ModelParams<T> {
    let half = T::lit(0.5);
    ModelParams {
        omega: lp.omega,
        eps_g: (lp.eps_g1 + lp.eps_g2) * half,
        eps_e: lp.eps_e,
        delta: (lp.eps_g1 - lp.eps_g2) * half,
        mu: lp.g12,
        lam: -lp.g2e / T::lit(2.0).sqrt(),
    }
}

/// Truncated L-configuration Hamiltonian in the `|g1,N>, |g2,N>, |e,N>` order.
pub fn build_l_hamiltonian<T: Real>(lp: &LConfigParams<T>, trunc: TruncationScheme) -> Result<HamiltonianMatrix<T>> {
    let z = T::zero();
    let h0 = [[lp.eps_g1, z, z], [z, lp.eps_g2, z], [z, z, lp.eps_e]];
    let c = [[z, lp.g12, z], [lp.g12, z, lp.g2e], [z, lp.g2e, z]];
    HamiltonianMatrix::from_qutrit_parts(h0, lp.omega, c, trunc)
}
