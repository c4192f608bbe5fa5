//! Secular (resonant) approximation at an `n`-photon resonance.
//!
//! The `mu` coupling is diagonalized exactly by displacing the two lower
//! oscillator ladders by `-/+ mu/omega`; the remaining transition coupling
//! mixes the nearly degenerate triple `|g1,N^(->>, |g2,N^(+)>, |e,N-n>`.
//! Everything here is closed form.

use num_complex::Complex;

use crate::diagnostics::Diagnostic;
use crate::error::{Error, Result};
use crate::model::ModelParams;
use crate::scalar::Real;
use crate::special::displaced_fock_amplitude;
use crate::state::{Level, StateVector};

/// Threshold on `|V_N| / omega` above which the approximation is flagged.
pub const VALIDITY_THRESHOLD: f64 = 0.1;

/// Threshold on `|delta_n| / omega` above which the resonance is flagged.
pub const DETUNING_THRESHOLD: f64 = 0.1;

/// Default Poisson tail dropped from coherent sums.
pub const DEFAULT_POISSON_TAIL: f64 = 1e-12;

/// An `n`-photon resonance and its detuning.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResonanceSpec<T> {
    pub n: usize,
    pub detuning: T,
}

impl<T: Real> ResonanceSpec<T> {
    pub fn new(params: &ModelParams<T>, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Domain("resonance order must be at least 1".into()));
        }
        Ok(Self {
            n,
            detuning: resonance_detuning(params, n),
        })
    }

    pub fn diagnostics(&self, params: &ModelParams<T>) -> Vec<Diagnostic> {
        let d = self.detuning.to_f64_lossy();
        let w = params.omega.to_f64_lossy();
        let mut out = Vec::new();
        if d.abs() >= DETUNING_THRESHOLD * w {
            out.push(Diagnostic::OffResonance { n: self.n, detuning: d });
        } else if d != 0.0 {
            out.push(Diagnostic::NotExactlyResonant { n: self.n, detuning: d });
        }
        out
    }
}

/// `delta_n = omega0 + mu^2/omega - n omega`.
pub fn resonance_detuning<T: Real>(params: &ModelParams<T>, n: usize) -> T {
    params.omega_eg() - T::of_usize(n) * params.omega
}

fn check_manifold(manifold_n: usize, n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::Domain("resonance order must be at least 1".into()));
    }
    if manifold_n < n {
        return Err(Error::Domain(format!(
            "manifold N = {manifold_n} lies below the resonance order n = {n}"
        )));
    }
    Ok(())
}

/// Signed matrix element `V_N(n) = <g1,N^(-)| V |e,N-n>`.
///
/// Equals `lambda [sqrt(N-n) I_{N-n-1,N} + sqrt(N-n+1) I_{N-n+1,N}]` at
/// argument `(mu/omega)^2`; for `mu < 0` the displacement sign is carried by
/// the amplitudes.
pub fn transition_matrix_element<T: Real>(params: &ModelParams<T>, manifold_n: usize, n: usize) -> Result<T> {
    check_manifold(manifold_n, n)?;
    let beta = params.displacement();
    let m = manifold_n - n;
    let lower = if m >= 1 {
        T::of_usize(m).sqrt() * displaced_fock_amplitude(m - 1, manifold_n, beta)
    } else {
        T::zero()
    };
    let upper = T::of_usize(m + 1).sqrt() * displaced_fock_amplitude(m + 1, manifold_n, beta);
    Ok(params.lam * (lower + upper))
}

/// Multiphoton Rabi frequency `2 sqrt(2) |V_N(n)|`.
pub fn rabi_frequency<T: Real>(params: &ModelParams<T>, manifold_n: usize, n: usize) -> Result<T> {
    let v = transition_matrix_element(params, manifold_n, n)?;
    Ok(T::lit(8.0).sqrt() * v.abs())
}

/// Dressed triplet of manifold `N >= n`.
///
/// `states[a]` holds the coefficients of dressed state `a+1` over
/// `(|g1,N^(->>, |g2,N^(+)>, |e,N-n>)`. With real couplings the phase of
/// `V_N` is `0` or `pi`, so the coefficients are real.
#[derive(Debug, Clone, PartialEq)]
pub struct ResonantEigensystem<T> {
    pub manifold_n: usize,
    pub n: usize,
    pub energies: [T; 3],
    pub v_n: T,
    pub phase: T,
    pub states: [[T; 3]; 3],
}

impl<T: Real> ResonantEigensystem<T> {
    /// `e^{-i phi}` as a real sign.
    pub fn phase_sign(&self) -> T {
        if self.v_n < T::zero() {
            -T::one()
        } else {
            T::one()
        }
    }
}

/// Manifolds below the resonance order keep the two displaced lower states,
/// degenerate at `E_1`.
#[derive(Debug, Clone, PartialEq)]
pub struct DegenerateDoublet<T> {
    pub manifold_n: usize,
    pub energy: T,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ResonantManifold<T> {
    Triplet(ResonantEigensystem<T>),
    Doublet(DegenerateDoublet<T>),
}

/// `E_1 = eps_g + omega (N + 1/2) - mu^2/omega`.
pub fn displaced_ladder_energy<T: Real>(params: &ModelParams<T>, manifold_n: usize) -> T {
    params.eps_g + params.omega * (T::of_usize(manifold_n) + T::lit(0.5)) - params.mu * params.mu / params.omega
}

/// Energies and states of the triplet `N >= n`, assuming exact resonance.
pub fn resonant_eigensystem<T: Real>(
    params: &ModelParams<T>,
    manifold_n: usize,
    n: usize,
) -> Result<ResonantEigensystem<T>> {
    let v = transition_matrix_element(params, manifold_n, n)?;
    let e1 = displaced_ladder_energy(params, manifold_n);
    let split = T::lit(2.0).sqrt() * v.abs();
    let half = T::lit(0.5);
    let r = half.sqrt();
    let parity = if n.is_multiple_of(2) { T::one() } else { -T::one() };
    let phase = if v < T::zero() { T::PI() } else { T::zero() };
    let s = if v < T::zero() { -T::one() } else { T::one() };
    Ok(ResonantEigensystem {
        manifold_n,
        n,
        energies: [e1, e1 + split, e1 - split],
        v_n: v,
        phase,
        states: [
            [r, -parity * r, T::zero()],
            [half, parity * half, s * r],
            [half, parity * half, -s * r],
        ],
    })
}

/// Triplet for `N >= n`, doublet below.
pub fn resonant_manifold<T: Real>(params: &ModelParams<T>, manifold_n: usize, n: usize) -> Result<ResonantManifold<T>> {
    if n == 0 {
        return Err(Error::Domain("resonance order must be at least 1".into()));
    }
    if manifold_n < n {
        Ok(ResonantManifold::Doublet(DegenerateDoublet {
            manifold_n,
            energy: displaced_ladder_energy(params, manifold_n),
        }))
    } else {
        resonant_eigensystem(params, manifold_n, n).map(ResonantManifold::Triplet)
    }
}

/// Diagnostics for using the approximation on manifolds `n..=n + extra`.
pub fn validity_diagnostics<T: Real>(params: &ModelParams<T>, n: usize, extra: usize) -> Result<Vec<Diagnostic>> {
    let mut out = ResonanceSpec::new(params, n)?.diagnostics(params);
    for big_n in n..=n + extra {
        let ratio = (transition_matrix_element(params, big_n, n)?.abs() / params.omega).to_f64_lossy();
        if ratio > VALIDITY_THRESHOLD {
            out.push(Diagnostic::StrongTransitionElement { manifold: big_n, ratio });
            break;
        }
    }
    Ok(out)
}

/// `W(t) = cos(Omega_n(n) t)` for the start `|e,0>`.
pub fn inversion_fock<T: Real>(params: &ModelParams<T>, n: usize, t_grid: &[T]) -> Result<Vec<T>> {
    let omega = rabi_frequency(params, n, n)?;
    Ok(t_grid.iter().map(|&t| (omega * t).cos()).collect())
}

/// Poisson weights `e^{-nbar} nbar^k / k!` up to the point where the
/// remaining mass is below `tail_eps`.
pub fn poisson_weights<T: Real>(nbar: T, tail_eps: T) -> Vec<T> {
    if nbar <= T::zero() {
        return vec![T::one()];
    }
    let mut out = Vec::new();
    let mut log_p = -nbar;
    let mut cum = T::zero();
    let ln_nbar = nbar.ln();
    let mut k = 0usize;
    loop {
        let p = log_p.exp();
        out.push(p);
        cum += p;
        k += 1;
        // Stop once past the mode and the remainder is negligible.
        if T::of_usize(k) > nbar && T::one() - cum < tail_eps {
            break;
        }
        // Guard against a tail that rounding keeps above tail_eps.
        if T::of_usize(k) > nbar && p < tail_eps * T::lit(1e-6) {
            break;
        }
        log_p += ln_nbar - T::of_usize(k).ln();
    }
    out
}

/// `W(t) = sum_N P(N) cos(Omega_{N+n}(n) t)` for `|e> x |coherent nbar>`.
pub fn inversion_coherent<T: Real>(
    params: &ModelParams<T>,
    n: usize,
    nbar: T,
    t_grid: &[T],
    tail_eps: T,
) -> Result<Vec<T>> {
    if !(nbar >= T::zero()) || !nbar.is_finite() {
        return Err(Error::Domain(format!("mean photon number must be finite and non-negative, got {nbar}")));
    }
    let weights = poisson_weights(nbar, tail_eps);
    let freqs = (0..weights.len())
        .map(|k| rabi_frequency(params, k + n, n))
        .collect::<Result<Vec<_>>>()?;
    Ok(t_grid
        .iter()
        .map(|&t| weights.iter().zip(&freqs).map(|(&p, &w)| p * (w * t).cos()).sum())
        .collect())
}

/// Collapse-time estimate `pi / (2 sqrt(nbar)) / (dOmega_N/dN)` with the
/// derivative taken as a centred difference at `N = round(nbar) + n`.
pub fn collapse_time<T: Real>(params: &ModelParams<T>, n: usize, nbar: T) -> Result<T> {
    if !(nbar > T::zero()) || !nbar.is_finite() {
        return Err(Error::Domain(format!("mean photon number must be positive, got {nbar}")));
    }
    check_manifold(n, n)?;
    if nbar < T::lit(10.0) {
        log::warn!("{}", Diagnostic::FewPhotons { nbar: nbar.to_f64_lossy() });
    }
    let centre = nbar.round().to_usize().unwrap_or(0) + n;
    // One-sided at the lowest manifold.
    let (lo_n, step) = if centre > n { (centre - 1, T::lit(2.0)) } else { (centre, T::one()) };
    let lo = rabi_frequency(params, lo_n, n)?;
    let hi = rabi_frequency(params, centre + 1, n)?;
    let deriv = (hi - lo) / step;
    if deriv.abs() < T::lit(1e-15) * params.omega {
        return Err(Error::DegenerateDerivative(deriv.to_f64_lossy()));
    }
    Ok(T::PI() / (T::lit(2.0) * nbar.sqrt()) / deriv.abs())
}

/// Initial states covered by the closed-form evolution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ResonantInitial<T> {
    ExcitedVacuum,
    ExcitedCoherent { nbar: T },
}

/// Dressed-state amplitudes of one manifold at one time.
#[derive(Debug, Clone, PartialEq)]
pub struct DressedAmplitudes<T> {
    pub system: ResonantEigensystem<T>,
    pub amps: [Complex<T>; 3],
}

impl<T: Real> DressedAmplitudes<T> {
    /// Amplitudes over `(|g1,N^(->>, |g2,N^(+)>, |e,N-n>)`.
    pub fn bare(&self) -> [Complex<T>; 3] {
        let mut out = [Complex::new(T::zero(), T::zero()); 3];
        for (a, st) in self.amps.iter().zip(&self.system.states) {
            for (o, &c) in out.iter_mut().zip(st) {
                *o = *o + *a * c;
            }
        }
        out
    }
}

/// Dressed-basis state at time `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct ResonantSnapshot<T> {
    pub t: T,
    pub manifolds: Vec<DressedAmplitudes<T>>,
}

impl<T: Real> ResonantSnapshot<T> {
    pub fn inversion(&self) -> T {
        self.manifolds
            .iter()
            .map(|m| {
                let b = m.bare();
                b[2].norm_sqr() - b[0].norm_sqr() - b[1].norm_sqr()
            })
            .sum()
    }

    /// Expands the displaced ladders in the Fock basis up to `n_max`.
    pub fn to_state_vector(&self, params: &ModelParams<T>, n_max: usize) -> Result<StateVector<T>> {
        let beta = params.displacement();
        let mut out = StateVector::zeros(n_max);
        for m in &self.manifolds {
            let b = m.bare();
            let big_n = m.system.manifold_n;
            let e_n = big_n - m.system.n;
            if e_n > n_max {
                return Err(Error::Truncation(format!("manifold {big_n} needs n_max >= {e_n}")));
            }
            let cur = out.amp(Level::E, e_n);
            out.set_amp(Level::E, e_n, cur + b[2]);
            for k in 0..=n_max {
                let d = displaced_fock_amplitude(k, big_n, beta);
                // g2 is displaced the other way: flips the odd-distance terms.
                let d2 = if (k + big_n) % 2 == 0 { d } else { -d };
                let g1 = out.amp(Level::G1, k) + b[0] * d;
                let g2 = out.amp(Level::G2, k) + b[1] * d2;
                out.set_amp(Level::G1, k, g1);
                out.set_amp(Level::G2, k, g2);
            }
        }
        Ok(out)
    }
}

/// Closed-form evolution in the dressed basis.
pub fn resonant_evolution<T: Real>(
    params: &ModelParams<T>,
    n: usize,
    initial: ResonantInitial<T>,
    t_grid: &[T],
) -> Result<Vec<ResonantSnapshot<T>>> {
    let weights = match initial {
        ResonantInitial::ExcitedVacuum => vec![T::one()],
        ResonantInitial::ExcitedCoherent { nbar } => {
            if !(nbar >= T::zero()) || !nbar.is_finite() {
                return Err(Error::Domain(format!("mean photon number must be finite and non-negative, got {nbar}")));
            }
            poisson_weights(nbar, T::lit(DEFAULT_POISSON_TAIL))
        }
    };
    let diags = validity_diagnostics(params, n, weights.len().saturating_sub(1))?;
    for d in diags {
        log::warn!("{d}");
    }
    let systems = (0..weights.len())
        .map(|k| resonant_eigensystem(params, k + n, n))
        .collect::<Result<Vec<_>>>()?;
    // |e, k> = e^{i phi} (|2> - |3>) / sqrt(2), times sqrt(P(k)) for a real
    // coherent amplitude.
    let r = T::lit(0.5).sqrt();
    Ok(t_grid
        .iter()
        .map(|&t| ResonantSnapshot {
            t,
            manifolds: systems
                .iter()
                .zip(&weights)
                .map(|(sys, &p)| {
                    let c = p.sqrt() * r * sys.phase_sign();
                    let ph = |e: T| Complex::new((e * t).cos(), -(e * t).sin());
                    DressedAmplitudes {
                        system: sys.clone(),
                        amps: [
                            Complex::new(T::zero(), T::zero()),
                            ph(sys.energies[1]) * c,
                            ph(sys.energies[2]) * (-c),
                        ],
                    }
                })
                .collect(),
        })
        .collect())
}
