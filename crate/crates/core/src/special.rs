//! Generalized Laguerre polynomials, Laguerre functions and the Fock-basis
//! expansion of displaced Fock states.
//!
//! The Laguerre function
//!
//! ```text
//! I_{s,s'}(a) = sqrt(s'!/s!) exp(-a/2) a^{(s-s')/2} L_{s'}^{s-s'}(a)
//! ```
//!
//! is the matrix element `<s| D(sqrt a) |s'>` of the displacement operator
//! `D(b) = exp(b (a^+ - a))` for `b >= 0`. It obeys
//! `I_{s,s'} = (-1)^{s-s'} I_{s',s}`, which is how the `s < s'` branch is
//! evaluated; negative Laguerre superscripts never reach the recurrence.

use num_traits::{FromPrimitive, Num};

use crate::error::{Error, Result};
use crate::scalar::{ln_factorial, Real};

/// Tail mass above which a displaced-Fock expansion is considered truncated.
pub const DEFAULT_TAIL_TOLERANCE: f64 = 1e-10;

/// Argument `a = mu^2 / omega^2` of the Laguerre functions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LaguerreArg<T>(T);

impl<T: Real> LaguerreArg<T> {
    pub fn new(alpha: T) -> Result<Self> {
        if !alpha.is_finite() || alpha < T::zero() {
            return Err(Error::Domain(format!(
                "Laguerre argument must be finite and non-negative, got {alpha}"
            )));
        }
        Ok(Self(alpha))
    }

    /// Argument of a displacement by `beta`, i.e. `beta^2`.
    pub fn from_displacement(beta: T) -> Result<Self> {
        Self::new(beta * beta)
    }

    pub fn value(self) -> T {
        self.0
    }
}

/// Generalized Laguerre polynomial `L_n^l(alpha)`.
///
/// Evaluated with the three-term recurrence in `n`, so it is exact for any
/// scalar with exact field arithmetic (e.g. big rationals).
pub fn laguerre_poly<T>(n: usize, l: i64, alpha: T) -> T
where
    T: Clone + Num + FromPrimitive,
{
    let c = |x: i64| T::from_i64(x).expect("integer coefficient representable");
    let mut prev = T::one();
    if n == 0 {
        return prev;
    }
    let mut cur = c(1 + l) - alpha.clone();
    for k in 1..n as i64 {
        let next = ((c(2 * k + 1 + l) - alpha.clone()) * cur.clone() - c(k + l) * prev) / c(k + 1);
        prev = cur;
        cur = next;
    }
    cur
}

/// Laguerre function `I_{s,s'}(alpha)`; zero when either index is negative.
pub fn laguerre_fn<T: Real>(s: i64, s_prime: i64, alpha: T) -> T {
    if s < 0 || s_prime < 0 {
        return T::zero();
    }
    if s >= s_prime {
        laguerre_fn_lower(s_prime as usize, (s - s_prime) as usize, alpha)
    } else {
        let v = laguerre_fn_lower(s as usize, (s_prime - s) as usize, alpha);
        if (s_prime - s) % 2 == 0 {
            v
        } else {
            -v
        }
    }
}

/// `I_{n+l,n}(alpha)` for `l >= 0`.
///
/// Runs the recurrence on `g_k = sqrt(k!/(k+l)!) e^{-a/2} a^{l/2} L_k^l(a)`,
/// which satisfies
/// `g_{k+1} sqrt((k+1)(k+l+1)) = (2k+1+l-a) g_k - sqrt(k(k+l)) g_{k-1}`.
/// The starting value is formed in log space and the running pair is
/// rescaled whenever it leaves `[1e-100, 1e100]`.
fn laguerre_fn_lower<T: Real>(n: usize, l: usize, alpha: T) -> T {
    if alpha == T::zero() {
        return if l == 0 { T::one() } else { T::zero() };
    }
    let half = T::lit(0.5);
    let log_g0 = -alpha * half + T::of_usize(l) * half * alpha.ln() - half * ln_factorial::<T>(l);

    // Keep g_0 at unit scale and carry the exponent separately.
    let mut log_scale = log_g0;
    let mut prev = T::zero();
    let mut cur = T::one();
    let big = T::lit(1e100).min(T::max_value().sqrt());
    let small = T::one() / big;
    let lf = T::of_usize(l);
    for k in 0..n {
        let kf = T::of_usize(k);
        let a = (T::lit(2.0) * kf + T::one() + lf - alpha) * cur;
        let b = (kf * (kf + lf)).sqrt() * prev;
        let next = (a - b) / ((kf + T::one()) * (kf + lf + T::one())).sqrt();
        prev = cur;
        cur = next;
        let mag = cur.abs().max(prev.abs());
        if mag > big || (mag < small && mag > T::zero()) {
            let ln_mag = mag.ln();
            log_scale += ln_mag;
            prev /= mag;
            cur /= mag;
        }
    }
    if cur == T::zero() {
        return T::zero();
    }
    cur.signum() * (cur.abs().ln() + log_scale).exp()
}

/// Fock-basis expansion of the displaced Fock state `exp(beta (a^+ - a)) |N>`.
#[derive(Debug, Clone, PartialEq)]
pub struct DisplacedFockCoeffs<T> {
    pub source_n: usize,
    pub beta: T,
    /// Amplitude of `|M>` for `M = 0..=m_max`.
    pub coeffs: Vec<T>,
}

impl<T: Real> DisplacedFockCoeffs<T> {
    pub fn norm_sqr(&self) -> T {
        self.coeffs.iter().map(|&c| c * c).sum()
    }

    /// Probability mass lost above `m_max`.
    pub fn tail_mass(&self) -> T {
        (T::one() - self.norm_sqr()).max(T::zero())
    }

    pub fn m_max(&self) -> usize {
        self.coeffs.len() - 1
    }
}

/// Amplitude `<M| exp(beta (a^+ - a)) |N>`.
///
/// Equal to `I_{M,N}(beta^2)` for `beta >= 0` and `I_{N,M}(beta^2)` for
/// `beta < 0`.
pub fn displaced_fock_amplitude<T: Real>(m: usize, n: usize, beta: T) -> T {
    let alpha = beta * beta;
    if beta >= T::zero() {
        laguerre_fn(m as i64, n as i64, alpha)
    } else {
        laguerre_fn(n as i64, m as i64, alpha)
    }
}

/// Expansion coefficients of `exp(beta (a^+ - a)) |source_n>` over
/// `|0>..|m_max>`, with the truncated tail checked against
/// [`DEFAULT_TAIL_TOLERANCE`].
pub fn displaced_fock_coeffs<T: Real>(
    source_n: usize,
    beta: T,
    m_max: usize,
) -> Result<DisplacedFockCoeffs<T>> {
    displaced_fock_coeffs_with_tolerance(source_n, beta, m_max, T::lit(DEFAULT_TAIL_TOLERANCE))
}

pub fn displaced_fock_coeffs_with_tolerance<T: Real>(
    source_n: usize,
    beta: T,
    m_max: usize,
    tail_tol: T,
) -> Result<DisplacedFockCoeffs<T>> {
    LaguerreArg::from_displacement(beta)?;
    let coeffs = (0..=m_max)
        .map(|m| displaced_fock_amplitude(m, source_n, beta))
        .collect();
    let out = DisplacedFockCoeffs {
        source_n,
        beta,
        coeffs,
    };
    let tail = out.tail_mass();
    if tail > tail_tol {
        return Err(Error::Truncation(format!(
            "displaced Fock state |{source_n}> by {beta}: tail mass {:e} above m_max = {m_max}", tail.to_f64_lossy()
        )));
    }
    Ok(out)
}
