//! Time evolution of the truncated system with classical fourth-order
//! Runge-Kutta, and the photon/qutrit observables recorded along the way.
//!
//! The integrator propagates with `H - c`, `c = <psi0|H|psi0>`, and restores
//! the global phase `e^{-ict}` at the end. The shift leaves every observable
//! unchanged but shrinks `dt |E - c|`, which is what controls the RK4
//! amplitude error (`~ (dt |E - c|)^6 / 72` norm loss per step).

use num_complex::Complex;

use crate::diagnostics::Diagnostic;
use crate::error::{Error, Result};
use crate::model::{HamiltonianMatrix, ModelParams, TruncationScheme};
use crate::scalar::{ln_factorial, Real};
use crate::state::{Level, StateVector};

/// `dt rho(H)` must not exceed this.
pub const STABILITY_LIMIT: f64 = 0.1;
/// Norm drift that aborts a run.
pub const NORM_DRIFT_TOL: f64 = 1e-8;

/// [`NORM_DRIFT_TOL`], widened to `1e4` ulps for scalars too coarse to meet it.
pub fn norm_drift_tol<T: Real>() -> T {
    T::lit(NORM_DRIFT_TOL).max(T::lit(1e4) * T::epsilon())
}
/// Population of the top Fock state that flags a run.
pub const TRUNCATION_TAIL_TOL: f64 = 1e-8;
/// Coherent amplitudes beyond `n_max` may carry at most this much weight.
pub const COHERENT_TAIL_TOL: f64 = 1e-10;
/// Norm drift budget used when choosing a default step.
const DRIFT_BUDGET: f64 = 1e-9;

/// `sqrt(e^{-nbar} nbar^N / N!)` placed on `level`.
pub fn coherent_initial_state<T: Real>(nbar: T, level: Level, trunc: TruncationScheme) -> Result<StateVector<T>> {
    if !(nbar >= T::zero()) || !nbar.is_finite() {
        return Err(Error::Domain(format!("mean photon number must be finite and non-negative, got {nbar}")));
    }
    let mut psi = StateVector::zeros(trunc.n_max);
    if nbar == T::zero() {
        psi.set_amp(level, 0, Complex::new(T::one(), T::zero()));
        return Ok(psi);
    }
    let half = T::lit(0.5);
    let ln_nbar = nbar.ln();
    let mut mass = T::zero();
    for k in 0..=trunc.n_max {
        let ln_a = half * (-nbar + T::of_usize(k) * ln_nbar - ln_factorial::<T>(k));
        let a = ln_a.exp();
        mass += a * a;
        psi.set_amp(level, k, Complex::new(a, T::zero()));
    }
    let tail = T::one() - mass;
    if tail > T::lit(COHERENT_TAIL_TOL) {
        return Err(Error::Truncation(format!(
            "coherent state with nbar = {nbar} loses {:e} beyond n_max = {}",
            tail.to_f64_lossy(),
            trunc.n_max
        )));
    }
    Ok(psi)
}

/// Smallest `n_max` whose Poisson(nbar) tail is below `tail`.
pub fn poisson_cutoff(nbar: f64, tail: f64) -> usize {
    if nbar <= 0.0 {
        return 0;
    }
    let mut ln_p = -nbar;
    let mut cum = 0.0;
    let mut k = 0usize;
    loop {
        cum += ln_p.exp();
        if (k as f64) > nbar && 1.0 - cum < tail {
            return k;
        }
        k += 1;
        ln_p += nbar.ln() - (k as f64).ln();
        if k > 100_000 {
            return k;
        }
    }
}

/// Truncation sized for a run from `|level> x |coherent nbar>`: the
/// Poisson cutoff, the displacement scale of the lower ladders and the
/// photons an `n`-photon exchange can add, with a fixed margin.
pub fn suggested_n_max<T: Real>(params: &ModelParams<T>, nbar: f64, n: usize) -> usize {
    let r = params.displacement().abs().to_f64_lossy();
    let spread = (10.0 * r * r + 10.0 * r).ceil() as usize;
    poisson_cutoff(nbar, 1e-14) + 2 * n + spread + 10
}

/// `W = sum_N |C_e,N|^2 - |C_g1,N|^2 - |C_g2,N|^2`.
pub fn inversion<T: Real>(psi: &StateVector<T>) -> T {
    psi.amplitudes()
        .chunks_exact(3)
        .map(|b| b[2].norm_sqr() - b[0].norm_sqr() - b[1].norm_sqr())
        .sum()
}

/// `P_N = sum_sigma |C_sigma,N|^2`.
pub fn photon_distribution<T: Real>(psi: &StateVector<T>) -> Vec<T> {
    psi.amplitudes()
        .chunks_exact(3)
        .map(|b| b.iter().map(|a| a.norm_sqr()).sum())
        .collect()
}

pub fn mean_photons<T: Real>(p: &[T]) -> T {
    p.iter().enumerate().map(|(k, &pk)| T::of_usize(k) * pk).sum()
}

/// Mandel `Q = (<N^2> - <N>^2 - <N>) / <N>`, defined as 0 below
/// `<N> = 1e-12`.
pub fn mandel_q<T: Real>(p: &[T]) -> T {
    let mean = mean_photons(p);
    if mean < T::lit(1e-12) {
        return T::zero();
    }
    let second: T = p
        .iter()
        .enumerate()
        .map(|(k, &pk)| {
            let kf = T::of_usize(k);
            kf * kf * pk
        })
        .sum();
    (second - mean * mean - mean) / mean
}

/// Observables sampled along a run. Times are in units of `1/omega`.
#[derive(Debug, Clone, PartialEq)]
pub struct ObservableSeries<T> {
    pub t: Vec<T>,
    pub w: Vec<T>,
    pub p_n: Vec<Vec<T>>,
    pub q: Vec<T>,
    pub norm: Vec<T>,
    pub energy: Vec<T>,
    /// Population of the top Fock state.
    pub tail: Vec<T>,
    pub dt: T,
    pub steps: usize,
    pub diagnostics: Vec<Diagnostic>,
}

impl<T: Real> ObservableSeries<T> {
    fn with_capacity(n: usize, dt: T, steps: usize) -> Self {
        Self {
            t: Vec::with_capacity(n),
            w: Vec::with_capacity(n),
            p_n: Vec::with_capacity(n),
            q: Vec::with_capacity(n),
            norm: Vec::with_capacity(n),
            energy: Vec::with_capacity(n),
            tail: Vec::with_capacity(n),
            dt,
            steps,
            diagnostics: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }

    /// `max |norm(t) - norm(0)|`.
    pub fn max_norm_drift(&self) -> T {
        let n0 = self.norm[0];
        self.norm.iter().map(|&n| (n - n0).abs()).fold(T::zero(), T::max)
    }

    /// `max |E(t) - E(0)| / max(|E(0)|, omega-scale 1)`.
    pub fn max_energy_drift(&self) -> T {
        let e0 = self.energy[0];
        let scale = e0.abs().max(T::one());
        self.energy.iter().map(|&e| (e - e0).abs() / scale).fold(T::zero(), T::max)
    }

    pub fn max_tail(&self) -> T {
        self.tail.iter().copied().fold(T::zero(), T::max)
    }

    /// Largest difference in `W`, `Q` or any `P_N` between two series on the
    /// same sample times.
    pub fn max_observable_difference(&self, other: &Self) -> Result<T> {
        if self.len() != other.len() {
            return Err(Error::Dimension(format!("{} vs {} samples", self.len(), other.len())));
        }
        let mut worst = T::zero();
        for i in 0..self.len() {
            worst = worst.max((self.w[i] - other.w[i]).abs());
            worst = worst.max((self.q[i] - other.q[i]).abs());
            for (a, b) in self.p_n[i].iter().zip(&other.p_n[i]) {
                worst = worst.max((*a - *b).abs());
            }
        }
        Ok(worst)
    }

    /// Photon probability `P_k` along the run.
    pub fn photon_series(&self, k: usize) -> Vec<T> {
        self.p_n.iter().map(|p| p.get(k).copied().unwrap_or(T::zero())).collect()
    }
}

/// Result of [`evolve`].
#[derive(Debug, Clone)]
pub struct Evolution<T> {
    pub series: ObservableSeries<T>,
    pub final_state: StateVector<T>,
}

/// Step-size bounds for a run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeStepPlan<T> {
    /// Gershgorin bound on the spectral radius of `H`.
    pub rho: T,
    /// `STABILITY_LIMIT / rho`.
    pub stability_dt: T,
    /// Largest step keeping the predicted norm drift within budget.
    pub drift_dt: T,
}

impl<T: Real> TimeStepPlan<T> {
    pub fn dt(&self) -> T {
        self.stability_dt.min(self.drift_dt)
    }
}

fn shift_of<T: Real>(h: &HamiltonianMatrix<T>, psi: &StateVector<T>) -> Result<T> {
    let n2 = psi.norm_sqr();
    if n2 == T::zero() {
        return Err(Error::Domain("initial state has zero norm".into()));
    }
    Ok(h.expectation(psi)? / n2)
}

/// Default step: the stability bound, tightened so the predicted RK4 norm
/// loss `t_final dt^5 ||(H-c)^3 psi0||^2 / 72` stays within budget.
pub fn plan_time_step<T: Real>(h: &HamiltonianMatrix<T>, psi0: &StateVector<T>, t_final: T) -> Result<TimeStepPlan<T>> {
    let rho = h.spectral_radius_bound();
    let stability_dt = T::lit(STABILITY_LIMIT) / rho;
    let c = shift_of(h, psi0)?;
    let mut x = psi0.amplitudes().to_vec();
    let mut y = vec![Complex::new(T::zero(), T::zero()); x.len()];
    for _ in 0..3 {
        h.apply_into(&x, &mut y);
        for (yi, xi) in y.iter_mut().zip(&x) {
            *yi = *yi - *xi * c;
        }
        std::mem::swap(&mut x, &mut y);
    }
    let moment: T = x.iter().map(|a| a.norm_sqr()).sum::<T>() / psi0.norm_sqr();
    let drift_dt = if moment > T::zero() && t_final > T::zero() {
        (T::lit(72.0 * DRIFT_BUDGET) / (t_final * moment)).powf(T::lit(0.2))
    } else {
        T::infinity()
    };
    Ok(TimeStepPlan {
        rho,
        stability_dt,
        drift_dt,
    })
}

/// Integrates `i dC/dt = H C` from `psi0` to `t_final` with steps no larger
/// than `dt`, sampling every `sample_every` steps and at the end.
///
/// The step is shortened uniformly so that an integer number of steps lands
/// on `t_final`.
pub fn evolve<T: Real>(
    h: &HamiltonianMatrix<T>,
    psi0: &StateVector<T>,
    t_final: T,
    dt: T,
    sample_every: usize,
) -> Result<Evolution<T>> {
    if psi0.dim() != h.dim() {
        return Err(Error::Dimension(format!(
            "state has dimension {} but the Hamiltonian has {}",
            psi0.dim(),
            h.dim()
        )));
    }
    if !(t_final >= T::zero()) || !t_final.is_finite() {
        return Err(Error::Domain(format!("t_final must be finite and non-negative, got {t_final}")));
    }
    if !(dt > T::zero()) || !dt.is_finite() {
        return Err(Error::Domain(format!("dt must be positive, got {dt}")));
    }
    let rho = h.spectral_radius_bound();
    // Slack of a few ulps so the planned step `limit / rho` is accepted.
    if dt * rho > T::lit(STABILITY_LIMIT) * (T::one() + T::lit(8.0) * T::epsilon()) {
        return Err(Error::Stability {
            dt: dt.to_f64_lossy(),
            rho: rho.to_f64_lossy(),
            limit: STABILITY_LIMIT,
        });
    }
    let sample_every = sample_every.max(1);
    let steps = (t_final / dt).ceil().to_usize().unwrap_or(0);
    let step = if steps == 0 { T::zero() } else { t_final / T::of_usize(steps) };

    let c = shift_of(h, psi0)?;
    let dim = h.dim();
    let zero = Complex::new(T::zero(), T::zero());
    let mut phi = psi0.amplitudes().to_vec();
    let mut k1 = vec![zero; dim];
    let mut k2 = vec![zero; dim];
    let mut k3 = vec![zero; dim];
    let mut k4 = vec![zero; dim];
    let mut tmp = vec![zero; dim];

    // k = -i (H - c) x
    let rhs = |x: &[Complex<T>], out: &mut [Complex<T>]| {
        h.apply_into(x, out);
        for (o, xi) in out.iter_mut().zip(x) {
            let v = *o - *xi * c;
            *o = Complex::new(v.im, -v.re);
        }
    };

    let n_samples = steps / sample_every + 2;
    let mut series = ObservableSeries::with_capacity(n_samples, step, steps);
    let norm0 = psi0.norm_sqr();
    let top = h.n_max();
    let mut scratch = vec![zero; dim];
    let mut record = |series: &mut ObservableSeries<T>, phi: &[Complex<T>], t: T| -> Result<()> {
        let psi = StateVector::from_amplitudes(phi.to_vec())?;
        let norm = psi.norm_sqr();
        let p = photon_distribution(&psi);
        h.apply_into(phi, &mut scratch);
        let e: T = phi
            .iter()
            .zip(&scratch)
            .map(|(a, b)| (a.conj() * b).re)
            .sum::<T>()
            / norm;
        let drift = (norm - norm0).abs() / norm0;
        let q = mandel_q(&p);
        series.t.push(t);
        series.w.push(inversion(&psi) / norm);
        series.tail.push(p[top] / norm);
        series.q.push(q);
        series.p_n.push(p);
        series.norm.push(norm);
        series.energy.push(e);
        if drift > norm_drift_tol::<T>() {
            return Err(Error::NormDrift {
                drift: drift.to_f64_lossy(),
                tol: norm_drift_tol::<T>().to_f64_lossy(),
                t: t.to_f64_lossy(),
            });
        }
        Ok(())
    };

    record(&mut series, &phi, T::zero())?;
    let half = step * T::lit(0.5);
    let sixth = step / T::lit(6.0);
    let two = T::lit(2.0);
    for s in 1..=steps {
        rhs(&phi, &mut k1);
        for i in 0..dim {
            tmp[i] = phi[i] + k1[i] * half;
        }
        rhs(&tmp, &mut k2);
        for i in 0..dim {
            tmp[i] = phi[i] + k2[i] * half;
        }
        rhs(&tmp, &mut k3);
        for i in 0..dim {
            tmp[i] = phi[i] + k3[i] * step;
        }
        rhs(&tmp, &mut k4);
        for i in 0..dim {
            phi[i] = phi[i] + (k1[i] + (k2[i] + k3[i]) * two + k4[i]) * sixth;
        }
        if s % sample_every == 0 || s == steps {
            record(&mut series, &phi, T::of_usize(s) * step)?;
        }
    }

    let max_tail = series.max_tail();
    if max_tail > T::lit(TRUNCATION_TAIL_TOL) {
        let d = Diagnostic::TruncationTail {
            max_tail: max_tail.to_f64_lossy(),
        };
        log::warn!("{d}");
        series.diagnostics.push(d);
    }

    // Undo the spectral shift.
    let (sin, cos) = (c * t_final).sin_cos();
    let phase = Complex::new(cos, -sin);
    for a in &mut phi {
        *a = *a * phase;
    }
    Ok(Evolution {
        series,
        final_state: StateVector::from_amplitudes(phi)?,
    })
}

/// Outcome of [`evolve_converged`].
#[derive(Debug, Clone)]
pub struct ConvergedEvolution<T> {
    pub evolution: Evolution<T>,
    /// Largest observable change between the accepted step and its half.
    pub change: T,
    pub halvings: usize,
}

/// Runs at the default step and at half of it, halving further until the
/// sampled observables change by less than `tol`. Returns the finer run.
pub fn evolve_converged<T: Real>(
    h: &HamiltonianMatrix<T>,
    psi0: &StateVector<T>,
    t_final: T,
    samples: usize,
    tol: T,
    max_halvings: usize,
) -> Result<ConvergedEvolution<T>> {
    let dt = plan_time_step(h, psi0, t_final)?.dt();
    let steps = (t_final / dt).ceil().to_usize().unwrap_or(1).max(1);
    // Round the step count to a multiple of the sample count so that halving
    // keeps the sample times aligned.
    let samples = samples.max(1);
    let every = steps.div_ceil(samples);
    let steps = samples * every;
    let mut dt = t_final / T::of_usize(steps);
    let mut every = every;
    let mut coarse = evolve(h, psi0, t_final, dt, every)?;
    for halvings in 1..=max_halvings.max(1) {
        dt *= T::lit(0.5);
        every *= 2;
        let fine = evolve(h, psi0, t_final, dt, every)?;
        let change = coarse.series.max_observable_difference(&fine.series)?;
        if change < tol || halvings == max_halvings.max(1) {
            return Ok(ConvergedEvolution {
                evolution: fine,
                change,
                halvings,
            });
        }
        coarse = fine;
    }
    unreachable!("loop returns on its last iteration")
}

/// Exact propagation in an eigenbasis, used to cross-check the integrator.
pub fn propagate_in_eigenbasis<T: Real>(
    values: &[T],
    vectors: &[StateVector<T>],
    psi0: &StateVector<T>,
    t: T,
) -> Result<StateVector<T>> {
    let mut out = StateVector::zeros(psi0.n_max());
    for (e, v) in values.iter().zip(vectors) {
        let c = v.inner(psi0)?;
        let (s, co) = (*e * t).sin_cos();
        let c = c * Complex::new(co, -s);
        for (o, a) in out.amplitudes_mut().iter_mut().zip(v.amplitudes()) {
            *o = *o + *a * c;
        }
    }
    Ok(out)
}

/// Basis state `|level, n>` in a truncation.
pub fn fock_initial_state<T: Real>(level: Level, n: usize, trunc: TruncationScheme) -> Result<StateVector<T>> {
    StateVector::basis(level, n, trunc.n_max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::build_hamiltonian;

    #[test]
    fn coherent_state_statistics() {
        let trunc = TruncationScheme::new(60).unwrap();
        let psi = coherent_initial_state(9.0f64, Level::E, trunc).unwrap();
        assert!((psi.norm_sqr() - 1.0).abs() < 1e-10);
        let p = photon_distribution(&psi);
        assert!((mean_photons(&p) - 9.0).abs() < 1e-10);
        assert!(mandel_q(&p).abs() < 1e-10);
        assert_eq!(inversion(&psi), psi.norm_sqr());
        let vac = coherent_initial_state(0.0f64, Level::E, trunc).unwrap();
        assert_eq!(vac.amp(Level::E, 0).re, 1.0);
        assert!(matches!(
            coherent_initial_state(9.0f64, Level::E, TruncationScheme::new(10).unwrap()),
            Err(Error::Truncation(_))
        ));
    }

    #[test]
    fn observables_of_simple_states() {
        let e0 = StateVector::<f64>::basis(Level::E, 0, 8).unwrap();
        assert_eq!(inversion(&e0), 1.0);
        let g7 = StateVector::<f64>::basis(Level::G1, 7, 8).unwrap();
        assert_eq!(inversion(&g7), -1.0);
        let p = photon_distribution(&g7);
        assert_eq!(p[7], 1.0);
        assert_eq!(mandel_q(&p), -1.0);
        let r = 1.0 / 3f64.sqrt();
        let mix = StateVector::from_real(&[r, r, r, 0.0, 0.0, 0.0]).unwrap();
        assert!((inversion(&mix) + 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn thermal_q_equals_mean() {
        let nbar = 2.5f64;
        let x = nbar / (1.0 + nbar);
        let p: Vec<f64> = (0..400).map(|k| x.powi(k) / (1.0 + nbar)).collect();
        assert!((mandel_q(&p) - nbar).abs() < 1e-10);
        assert_eq!(mandel_q(&[1.0, 0.0]), 0.0);
    }

    #[test]
    fn free_evolution_only_rotates_phases() {
        let p = ModelParams::<f64>::new(1.0, 0.0, 2.0, 0.0, 0.0, 0.0).unwrap();
        let trunc = TruncationScheme::new(4).unwrap();
        let h = build_hamiltonian(&p, trunc).unwrap();
        let psi0 = StateVector::basis(Level::E, 0, 4).unwrap();
        let t_final = 3.0;
        let dt = plan_time_step(&h, &psi0, t_final).unwrap().dt();
        let ev = evolve(&h, &psi0, t_final, dt, 50).unwrap();
        assert!(ev.series.w.iter().all(|&w| (w - 1.0).abs() < 1e-14));
        let c = ev.final_state.amp(Level::E, 0);
        let expect = Complex::new((2.5f64 * t_final).cos(), -(2.5f64 * t_final).sin());
        assert!((c - expect).norm() < 1e-12, "{c}");
    }

    #[test]
    fn stability_bound_is_enforced() {
        let p = ModelParams::<f64>::from_ratios(0.02, 0.1, 2.0, 0.0).unwrap();
        let h = build_hamiltonian(&p, TruncationScheme::new(10).unwrap()).unwrap();
        let psi0 = StateVector::basis(Level::E, 0, 10).unwrap();
        let rho = h.spectral_radius_bound();
        assert!(matches!(evolve(&h, &psi0, 1.0, 0.2 / rho, 1), Err(Error::Stability { .. })));
        assert!(evolve(&h, &psi0, 1.0, 0.1 / rho, 1).is_ok());
    }

    #[test]
    fn matches_exact_propagation() {
        let p = ModelParams::<f64>::from_ratios(0.3, 0.4, 1.5, 0.05).unwrap();
        let trunc = TruncationScheme::new(12).unwrap();
        let h = build_hamiltonian(&p, trunc).unwrap();
        let (vals, vecs) = crate::linalg::symmetric_eigen(&h.to_dense()).unwrap();
        let vecs: Vec<_> = vecs.iter().map(|v| StateVector::from_real(v).unwrap()).collect();
        let psi0 = coherent_initial_state(0.5, Level::G2, trunc).unwrap();
        let t = 7.0;
        let dt = plan_time_step(&h, &psi0, t).unwrap().dt();
        let ev = evolve(&h, &psi0, t, dt, 1000).unwrap();
        let exact = propagate_in_eigenbasis(&vals, &vecs, &psi0, t).unwrap();
        let err: f64 = ev
            .final_state
            .amplitudes()
            .iter()
            .zip(exact.amplitudes())
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt();
        assert!(err < 1e-7, "{err}");
        assert!(ev.series.max_norm_drift() < 1e-9);
        assert!(ev.series.max_energy_drift() < 1e-9);
    }

    #[test]
    fn halving_converges() {
        let p = ModelParams::<f64>::from_ratios(0.05, 0.1, 1.0, 0.0).unwrap();
        let h = build_hamiltonian(&p, TruncationScheme::new(15).unwrap()).unwrap();
        let psi0 = StateVector::basis(Level::E, 0, 15).unwrap();
        let out = evolve_converged(&h, &psi0, 40.0, 100, 1e-6, 4).unwrap();
        assert!(out.change < 1e-6);
        assert_eq!(out.evolution.series.len(), 101);
    }

    #[test]
    fn poisson_cutoff_monotone() {
        assert_eq!(poisson_cutoff(0.0, 1e-10), 0);
        assert!(poisson_cutoff(20.0, 1e-12) > poisson_cutoff(20.0, 1e-6));
        assert!(poisson_cutoff(20.0, 1e-12) > 40);
    }
}
