//! Product-basis state vectors `C_{sigma,N}` over `{g1, g2, e} x Fock`.

use std::fmt;

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Qutrit level, in basis order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Level {
    G1,
    G2,
    E,
}

impl Level {
    pub const ALL: [Level; 3] = [Level::G1, Level::G2, Level::E];

    #[inline]
    pub fn index(self) -> usize {
        match self {
            Level::G1 => 0,
            Level::G2 => 1,
            Level::E => 2,
        }
    }

    pub fn from_index(i: usize) -> Option<Self> {
        Self::ALL.get(i).copied()
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Level::G1 => "g1",
            Level::G2 => "g2",
            Level::E => "e",
        })
    }
}

impl std::str::FromStr for Level {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "g1" => Ok(Level::G1),
            "g2" => Ok(Level::G2),
            "e" => Ok(Level::E),
            other => Err(format!("unknown qutrit level '{other}' (expected g1, g2 or e)")),
        }
    }
}

/// Flat index of `|level, n>` in the ordering `|g1,0>, |g2,0>, |e,0>, |g1,1>, ...`.
#[inline]
pub fn basis_index(level: Level, n: usize) -> usize {
    3 * n + level.index()
}

/// Complex amplitudes over the truncated product basis.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector<T> {
    amps: Vec<Complex<T>>,
}

impl<T: Real> StateVector<T> {
    pub fn zeros(n_max: usize) -> Self {
        Self {
            amps: vec![Complex::new(T::zero(), T::zero()); 3 * (n_max + 1)],
        }
    }

    /// The basis state `|level, n>`.
    pub fn basis(level: Level, n: usize, n_max: usize) -> Result<Self> {
        if n > n_max {
            return Err(Error::Dimension(format!("Fock index {n} above n_max = {n_max}")));
        }
        let mut s = Self::zeros(n_max);
        s.amps[basis_index(level, n)] = Complex::new(T::one(), T::zero());
        Ok(s)
    }

    pub fn from_amplitudes(amps: Vec<Complex<T>>) -> Result<Self> {
        if amps.is_empty() || !amps.len().is_multiple_of(3) {
            return Err(Error::Dimension(format!(
                "state length {} is not a positive multiple of 3",
                amps.len()
            )));
        }
        Ok(Self { amps })
    }

    pub fn from_real(values: &[T]) -> Result<Self> {
        Self::from_amplitudes(values.iter().map(|&v| Complex::new(v, T::zero())).collect())
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn n_max(&self) -> usize {
        self.amps.len() / 3 - 1
    }

    pub fn amp(&self, level: Level, n: usize) -> Complex<T> {
        self.amps[basis_index(level, n)]
    }

    pub fn set_amp(&mut self, level: Level, n: usize, value: Complex<T>) {
        self.amps[basis_index(level, n)] = value;
    }

    pub fn amplitudes(&self) -> &[Complex<T>] {
        &self.amps
    }

    pub fn amplitudes_mut(&mut self) -> &mut [Complex<T>] {
        &mut self.amps
    }

    pub fn into_amplitudes(self) -> Vec<Complex<T>> {
        self.amps
    }

    pub fn norm_sqr(&self) -> T {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn normalize(&mut self) {
        let n = self.norm_sqr().sqrt();
        if n > T::zero() {
            for a in &mut self.amps {
                *a = *a / n;
            }
        }
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &Self) -> Result<Complex<T>> {
        if self.dim() != other.dim() {
            return Err(Error::Dimension(format!("{} vs {}", self.dim(), other.dim())));
        }
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .fold(Complex::new(T::zero(), T::zero()), |acc, (a, b)| acc + a.conj() * b))
    }

    /// Three amplitudes `(g1, g2, e)` of photon number `n`.
    pub fn block(&self, n: usize) -> [Complex<T>; 3] {
        [self.amps[3 * n], self.amps[3 * n + 1], self.amps[3 * n + 2]]
    }

    /// Same state embedded in a larger (or equal) truncation.
    pub fn extended(&self, n_max: usize) -> Result<Self> {
        if n_max < self.n_max() {
            return Err(Error::Dimension(format!(
                "cannot shrink state from n_max = {} to {n_max}",
                self.n_max()
            )));
        }
        let mut out = Self::zeros(n_max);
        out.amps[..self.dim()].copy_from_slice(&self.amps);
        Ok(out)
    }
}
