//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each,
//! and exits non-zero if any fails.

mod oracles;

use std::cell::RefCell;
use std::f64::consts::PI;
use std::time::Instant;

use qutrit_core::dynamics::{suggested_n_max, ObservableSeries};
use qutrit_core::resonant::displaced_ladder_energy;
use qutrit_core::signal::dominant_frequency;
use qutrit_core::spectrum::{lowest_eigenvalues, EigenMethod};
use qutrit_core::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

// Tolerances.
const LAGUERRE_REL_TOL: f64 = 1e-10;
const JC_FREQ_TOL: f64 = 0.02;
const TWO_PHOTON_FREQ_TOL: f64 = 0.05;
const TWO_PHOTON_MIN_W: f64 = -0.9;
const COLLAPSE_LEVEL: f64 = 0.2;
const REVIVAL_LEVEL: f64 = 0.5;
const COLLAPSE_MAX_DEV: f64 = 0.15;
const TRIPLET_SPLIT_TOL: f64 = 0.05;
const TRIPLET_MID_TOL: f64 = 1e-3;
const LADDER_ENERGY_TOL: f64 = 1e-8;
const LADDER_POISSON_TOL: f64 = 1e-8;
const Q_RANGE: (f64, f64) = (0.0, 0.1);
const PEAK_FRACTION: f64 = 0.5;
const EQUIVALENCE_TOL: f64 = 1e-8;
const NORM_DRIFT_TOL: f64 = 1e-8;
const ENERGY_DRIFT_TOL: f64 = 1e-8;
const RESIDUAL_TOL: f64 = 1e-9;
const DISTRIBUTION_SUM_TOL: f64 = 1e-8;

/// Conservation figures collected from every run in the suite.
#[derive(Default)]
struct Ledger {
    runs: usize,
    norm_drift: f64,
    energy_drift: f64,
    residual: f64,
    pairs: usize,
    distribution_error: f64,
    distributions: usize,
}

thread_local! {
    static LEDGER: RefCell<Ledger> = RefCell::new(Ledger::default());
}

fn log_series(s: &ObservableSeries<f64>) {
    LEDGER.with(|l| {
        let mut l = l.borrow_mut();
        l.runs += 1;
        l.norm_drift = l.norm_drift.max(s.max_norm_drift());
        l.energy_drift = l.energy_drift.max(s.max_energy_drift());
        for (p, n) in s.p_n.iter().zip(&s.norm) {
            let sum: f64 = p.iter().sum();
            l.distribution_error = l.distribution_error.max((sum / n - 1.0).abs());
            l.distributions += 1;
        }
    });
}

fn log_residuals(r: &[f64]) {
    LEDGER.with(|l| {
        let mut l = l.borrow_mut();
        l.pairs += r.len();
        l.residual = r.iter().copied().fold(l.residual, f64::max);
    });
}

fn log_distribution(p: &[f64]) {
    LEDGER.with(|l| {
        let mut l = l.borrow_mut();
        let sum: f64 = p.iter().sum();
        l.distribution_error = l.distribution_error.max((sum - 1.0).abs());
        l.distributions += 1;
    });
}

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn run_fock(params: &Params, n_max: usize, t_final: f64, samples: usize) -> Series {
    let trunc = TruncationScheme::new(n_max).unwrap();
    let h = build_hamiltonian(params, trunc).unwrap();
    let psi0 = State::basis(Level::E, 0, n_max).unwrap();
    let dt = plan_time_step(&h, &psi0, t_final).unwrap().dt();
    let steps = (t_final / dt).ceil() as usize;
    let ev = evolve(&h, &psi0, t_final, dt, (steps / samples).max(1)).unwrap();
    log_series(&ev.series);
    ev.series
}

fn run_coherent(params: &Params, nbar: f64, n_max: usize, t_final: f64, samples: usize) -> Series {
    let trunc = TruncationScheme::new(n_max).unwrap();
    let h = build_hamiltonian(params, trunc).unwrap();
    let psi0 = coherent_initial_state(nbar, Level::E, trunc).unwrap();
    let dt = plan_time_step(&h, &psi0, t_final).unwrap().dt();
    let steps = (t_final / dt).ceil() as usize;
    let ev = evolve(&h, &psi0, t_final, dt, (steps / samples).max(1)).unwrap();
    log_series(&ev.series);
    ev.series
}

fn c1_laguerre_oracle() -> Outcome {
    let alphas = [(1, 100), (1, 1), (9, 1), (25, 1)];
    let mut worst = 0.0f64;
    let mut at = (0, 0, 0.0);
    for &(num, den) in &alphas {
        let a = num as f64 / den as f64;
        for s in 0..=30i64 {
            for sp in 0..=30i64 {
                let exact = oracles::laguerre_fn_exact(s, sp, num, den);
                let got = laguerre_fn(s, sp, a);
                let rel = (got - exact).abs() / exact.abs().max(f64::MIN_POSITIVE);
                if rel > worst {
                    worst = rel;
                    at = (s, sp, a);
                }
            }
        }
    }
    outcome(
        worst <= LAGUERRE_REL_TOL,
        format!("worst relative error {worst:.2e} at (s, s', alpha) = {at:?}"),
    )
}

fn c2_jaynes_cummings() -> Outcome {
    let lam = 0.02;
    let p = Params::from_ratios(lam, 0.0, 1.0, 0.0).unwrap();
    let expect = 8f64.sqrt() * lam;
    let t_final = 6.0 * 2.0 * PI / expect;
    let s = run_fock(&p, 10, t_final, 3000);
    let f = dominant_frequency(&s.t, &s.w).unwrap();
    let rel = (f / expect - 1.0).abs();
    outcome(
        rel <= JC_FREQ_TOL,
        format!("W frequency {f:.6} vs 2 sqrt(2) lambda = {expect:.6} (rel {rel:.2e})"),
    )
}

fn c3_two_photon_rabi() -> Outcome {
    let p = Params::at_resonance(2, 0.02, 0.1, 0.0).unwrap();
    let omega = rabi_frequency(&p, 2, 2).unwrap();
    let t_final = 4.0 * 2.0 * PI / omega;
    let s = run_fock(&p, 20, t_final, 4000);
    let p2 = s.photon_series(2);
    let f = dominant_frequency(&s.t, &p2).unwrap();
    let rel = (f / omega - 1.0).abs();
    let w_min = s.w.iter().copied().fold(f64::INFINITY, f64::min);
    outcome(
        rel <= TWO_PHOTON_FREQ_TOL && w_min < TWO_PHOTON_MIN_W,
        format!(
            "omega0 = {:.4}: P_2 frequency {f:.6} vs Omega_2(2) = {omega:.6} (rel {rel:.2e}); min W = {w_min:.4}",
            p.omega0()
        ),
    )
}

fn c4_collapse_revival() -> Outcome {
    let (n, nbar) = (2, 20.0);
    let p = Params::at_resonance(n, 0.02, 0.1, 0.0).unwrap();
    let tc = collapse_time(&p, n, nbar).unwrap();
    let centre = rabi_frequency(&p, nbar as usize + n, n).unwrap();
    let period = 2.0 * PI / centre;

    // Analytic envelope: forward running max of |W| over one Rabi period.
    let dt = 0.5;
    let t: Vec<f64> = (0..=(3000.0 / dt) as usize).map(|i| i as f64 * dt).collect();
    let w = inversion_coherent(&p, n, nbar, &t, 1e-12).unwrap();
    let width = (period / dt).ceil() as usize;
    let env: Vec<f64> = (0..t.len())
        .map(|i| w[i..(i + width).min(t.len())].iter().fold(0.0f64, |m, x| m.max(x.abs())))
        .collect();
    let collapsed_at = t
        .iter()
        .zip(&env)
        .find(|(&ti, &e)| ti >= tc / 2.0 && ti <= 2.0 * tc && e < COLLAPSE_LEVEL)
        .map(|(&ti, _)| ti);
    let revival_at = t
        .iter()
        .zip(&env)
        .find(|(&ti, &e)| ti > 2.0 * tc && e > REVIVAL_LEVEL)
        .map(|(&ti, _)| ti);

    let n_max = suggested_n_max(&p, nbar, n).max(90);
    let s = run_coherent(&p, nbar, n_max, 2.0 * tc, 2000);
    let analytic = inversion_coherent(&p, n, nbar, &s.t, 1e-12).unwrap();
    let mut dev_window = 0.0f64;
    let mut dev_all = 0.0f64;
    for ((&ti, &wn), &wa) in s.t.iter().zip(&s.w).zip(&analytic) {
        let d = (wn - wa).abs();
        dev_all = dev_all.max(d);
        if ti >= tc / 2.0 {
            dev_window = dev_window.max(d);
        }
    }
    let pass = collapsed_at.is_some() && revival_at.is_some() && dev_window <= COLLAPSE_MAX_DEV;
    outcome(
        pass,
        format!(
            "t_c = {tc:.2}; envelope < {COLLAPSE_LEVEL} at t = {collapsed_at:?}; revival at t = {revival_at:?}; \
             max |W_num - W_series| = {dev_window:.3} on [t_c/2, 2t_c] ({dev_all:.3} on [0, 2t_c]), n_max = {n_max}"
        ),
    )
}

fn c5_antibunching() -> Outcome {
    let (n, nbar) = (3, 30.0);
    let p = Params::at_resonance(n, 0.02, 0.2, 0.0).unwrap();
    let n_max = suggested_n_max(&p, nbar, n);
    let s = run_coherent(&p, nbar, n_max, 200.0, 2000);
    let (i, q_min) = s
        .q
        .iter()
        .copied()
        .enumerate()
        .fold((0, f64::INFINITY), |a, (i, q)| if q < a.1 { (i, q) } else { a });
    outcome(
        q_min < 0.0,
        format!("min Q = {q_min:.4} at t = {:.1}, n_max = {n_max}", s.t[i]),
    )
}

fn c6_triplets() -> Outcome {
    let n = 2;
    let mut worst_split = 0.0f64;
    let mut worst_mid = 0.0f64;
    let mut failures = Vec::new();
    for lam in [0.01, 0.02, 0.03, 0.04, 0.05] {
        let p = Params::at_resonance(n, lam, 0.3, 0.01).unwrap();
        let h = build_hamiltonian(&p, TruncationScheme::new(60).unwrap()).unwrap();
        let eig = eigen_spectrum(&h, 13).unwrap();
        log_residuals(&eig.residuals);
        for big_n in 2..=4usize {
            let e1 = displaced_ladder_energy(&p, big_n);
            let mut near: Vec<f64> = eig.values.clone();
            near.sort_by(|a, b| (a - e1).abs().partial_cmp(&(b - e1).abs()).unwrap());
            let mut trip = near[..3].to_vec();
            trip.sort_by(|a, b| a.partial_cmp(b).unwrap());
            let split = trip[2] - trip[0];
            let expect = rabi_frequency(&p, big_n, n).unwrap();
            let rel = (split / expect - 1.0).abs();
            let mid = trip.iter().sum::<f64>() / 3.0 - e1;
            worst_split = worst_split.max(rel);
            worst_mid = worst_mid.max(mid.abs());
            if rel > TRIPLET_SPLIT_TOL || mid.abs() > TRIPLET_MID_TOL {
                failures.push(format!("lambda={lam} N={big_n}: split rel {rel:.3}, centre {mid:+.2e}"));
            }
        }
    }
    outcome(
        failures.is_empty(),
        format!(
            "worst splitting error {worst_split:.3}, worst centre offset {worst_mid:.2e}{}",
            if failures.is_empty() {
                String::new()
            } else {
                format!("; out of tolerance: {}", failures.join(", "))
            }
        ),
    )
}

fn c7_displaced_ladder() -> Outcome {
    let p = Params::from_ratios(0.0, 3.0, 10.0, 0.0).unwrap();
    let trunc = TruncationScheme::default_for(&p, 0);
    let r = ground_state_report(&p, trunc).unwrap();
    log_residuals(&[r.eigen_residual]);
    log_distribution(&r.p_n);
    let de = (r.energy + 9.0).abs();
    let mut dp = 0.0f64;
    let mut ln_p = -9.0f64;
    for (k, &pk) in r.p_n.iter().enumerate() {
        if k > 0 {
            ln_p += 9f64.ln() - (k as f64).ln();
        }
        dp = dp.max((pk - ln_p.exp()).abs());
    }
    outcome(
        de <= LADDER_ENERGY_TOL && dp <= LADDER_POISSON_TOL,
        format!(
            "E0 = {:.12} (|E0 + 9| = {de:.1e}); max |P_N - Poisson(9)| = {dp:.1e}; n_max = {}",
            r.energy, r.n_max
        ),
    )
}

fn c8_deep_strong_ground() -> Outcome {
    let base = Params::from_ratios(1.0, 3.0, 10.0, 0.1).unwrap();
    let trunc = TruncationScheme::default_for(&base, 0);
    let mut reports = Vec::new();
    for lam in [1.0, 2.0] {
        let p = Params { lam, ..base };
        let r = ground_state_report(&p, trunc).unwrap();
        log_residuals(&[r.eigen_residual]);
        log_distribution(&r.p_n);
        reports.push(r);
    }
    let q_ok = reports.iter().all(|r| r.q > Q_RANGE.0 && r.q < Q_RANGE.1);
    let grows = reports[1].mean_photons > reports[0].mean_photons;
    outcome(
        q_ok && grows,
        format!(
            "lambda=1: Q = {:.4}, <N> = {:.3}; lambda=2: Q = {:.4}, <N> = {:.3}",
            reports[0].q, reports[0].mean_photons, reports[1].q, reports[1].mean_photons
        ),
    )
}

fn c9_entropy_landscape() -> Outcome {
    let opts = GroundOptions::default();
    let lam_base = Params::from_ratios(0.0, 3.0, 10.0, 0.1).unwrap();
    let lam_grid: Vec<f64> = (0..=12).map(|i| i as f64 * 0.5).collect();
    let lam_table = entropy_sweep(&lam_base, SweepAxis::Lambda, &lam_grid, TruncationScheme::new(100).unwrap(), &opts).unwrap();
    let mu_base = Params::from_ratios(2.0, 0.0, 10.0, 0.1).unwrap();
    let mu_grid: Vec<f64> = (0..=8).map(|i| i as f64 * 0.5).collect();
    let mu_table = entropy_sweep(&mu_base, SweepAxis::Mu, &mu_grid, TruncationScheme::new(100).unwrap(), &opts).unwrap();
    for r in lam_table.reports.iter().chain(&mu_table.reports) {
        log_residuals(&[r.eigen_residual]);
        log_distribution(&r.p_n);
    }

    let s = lam_table.entropies();
    let bounded = s.iter().chain(&mu_table.entropies()).all(|&x| (0.0..=1.0).contains(&x));
    let (imax, smax) = s
        .iter()
        .copied()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |a, (i, x)| if x > a.1 { (i, x) } else { a });
    let interior = imax > 0 && imax < s.len() - 1;
    let last = s[s.len() - 1];
    let decays = last < PEAK_FRACTION * smax;
    outcome(
        bounded && interior && decays,
        format!(
            "S3 in [0,1]: {bounded}; peak {smax:.3e} at lambda = {}; S3(lambda = {}) = {last:.3e} ({:.1}% of peak)",
            lam_grid[imax],
            lam_grid[lam_grid.len() - 1],
            100.0 * last / smax
        ),
    )
}

fn c10_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut worst = 0.0f64;
    let mut worst_conv = 0.0f64;
    let k = 20;
    for _ in 0..20 {
        let eps_g1: f64 = rng.gen_range(-0.3..0.3);
        let eps_g2: f64 = rng.gen_range(-0.3..0.3);
        let eps_e: f64 = rng.gen_range(0.5..3.0);
        let g12: f64 = rng.gen_range(-0.5..0.5);
        let g2e: f64 = rng.gen_range(-0.5..0.5);
        let lp = LParams::new(eps_g1, eps_g2, eps_e, g12, g2e, 1.0).unwrap();
        let mapped = map_l_to_polar_lambda(&lp);
        let n_max = 40;
        let spec = |h: &Hamiltonian| lowest_eigenvalues(h, k, EigenMethod::Dense).unwrap();
        let el = spec(&build_l_hamiltonian(&lp, TruncationScheme::new(n_max).unwrap()).unwrap());
        let ep = spec(&build_hamiltonian(&mapped, TruncationScheme::new(n_max).unwrap()).unwrap());
        let ep2 = spec(&build_hamiltonian(&mapped, TruncationScheme::new(2 * n_max).unwrap()).unwrap());
        for j in 0..k {
            worst = worst.max((el[j] - ep[j]).abs());
            worst_conv = worst_conv.max((ep[j] - ep2[j]).abs());
        }
    }
    outcome(
        worst <= EQUIVALENCE_TOL && worst_conv <= EQUIVALENCE_TOL,
        format!("max |E_L - E_polar| over lowest {k} = {worst:.1e}; truncation shift {worst_conv:.1e}"),
    )
}

fn c11_conservation() -> Outcome {
    LEDGER.with(|l| {
        let l = l.borrow();
        let pass = l.runs > 0
            && l.norm_drift <= NORM_DRIFT_TOL
            && l.energy_drift <= ENERGY_DRIFT_TOL
            && l.residual <= RESIDUAL_TOL
            && l.distribution_error <= DISTRIBUTION_SUM_TOL;
        outcome(
            pass,
            format!(
                "{} runs: norm drift {:.1e}, energy drift {:.1e}; {} eigenpairs: residual {:.1e}; {} distributions: |sum - 1| {:.1e}",
                l.runs, l.norm_drift, l.energy_drift, l.pairs, l.residual, l.distributions, l.distribution_error
            ),
        )
    })
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 11] = [
        ("laguerre recurrence vs exact oracle", c1_laguerre_oracle),
        ("Jaynes-Cummings limit frequency", c2_jaynes_cummings),
        ("two-photon vacuum Rabi oscillation", c3_two_photon_rabi),
        ("collapse and revival", c4_collapse_revival),
        ("antibunching during collapse", c5_antibunching),
        ("two-photon spectral triplets", c6_triplets),
        ("displaced-ladder ground state", c7_displaced_ladder),
        ("deep-strong ground statistics", c8_deep_strong_ground),
        ("ground-state entropy landscape", c9_entropy_landscape),
        ("L / polar-Lambda spectral equivalence", c10_equivalence),
        ("conservation suite", c11_conservation),
    ];
    let filter: Option<String> = std::env::args().skip(1).find(|a| !a.starts_with('-'));
    let mut failed = Vec::new();
    for (i, (name, f)) in criteria.iter().enumerate() {
        let id = i + 1;
        if let Some(ref pat) = filter {
            if !name.contains(pat.as_str()) && pat != &id.to_string() {
                continue;
            }
        }
        let start = Instant::now();
        let o = f();
        let verdict = if o.pass { "PASS" } else { "FAIL" };
        println!(
            "criterion {id:>2} {verdict} [{:>6.2}s] {name}: {}",
            start.elapsed().as_secs_f64(),
            o.detail
        );
        if !o.pass {
            failed.push(id);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all criteria passed");
    } else {
        println!("acceptance: failed criteria {failed:?}");
        std::process::exit(1);
    }
}
