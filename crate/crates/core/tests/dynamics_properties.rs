use proptest::prelude::*;
use qutrit_core::dynamics::propagate_in_eigenbasis;
use qutrit_core::resonant::{poisson_weights, resonant_manifold, ResonantManifold};
use qutrit_core::*;

fn run(p: &Params, n_max: usize, psi0: &State, t_final: f64) -> Series {
    let h = build_hamiltonian(p, TruncationScheme::new(n_max).unwrap()).unwrap();
    let dt = plan_time_step(&h, psi0, t_final).unwrap().dt();
    evolve(&h, psi0, t_final, dt, 50).unwrap().series
}

#[test]
fn integrator_matches_exact_propagation() {
    let p = Params::from_ratios(0.4, 0.8, 2.5, 0.05).unwrap();
    let n_max = 40;
    let h = build_hamiltonian(&p, TruncationScheme::new(n_max).unwrap()).unwrap();
    let psi0 = coherent_initial_state(2.0, Level::E, TruncationScheme::new(n_max).unwrap()).unwrap();
    let t = 30.0;
    let dt = plan_time_step(&h, &psi0, t).unwrap().dt();
    let ev = evolve(&h, &psi0, t, dt, 1000).unwrap();
    let eig = eigen_spectrum(&h, h.dim()).unwrap();
    let exact = propagate_in_eigenbasis(&eig.values, &eig.vectors, &psi0, t).unwrap();
    let overlap = exact.inner(&ev.final_state).unwrap().norm();
    assert!((overlap - 1.0).abs() < 1e-8, "fidelity {overlap}");
    assert!((inversion(&exact) - ev.series.w.last().unwrap()).abs() < 1e-7);
}

#[test]
fn step_above_stability_limit_is_rejected() {
    let p = Params::from_ratios(0.1, 0.1, 2.0, 0.0).unwrap();
    let h = build_hamiltonian(&p, TruncationScheme::new(20).unwrap()).unwrap();
    let psi0 = State::basis(Level::E, 0, 20).unwrap();
    let dt = 0.2 / h.spectral_radius_bound();
    assert!(matches!(evolve(&h, &psi0, 1.0, dt, 1), Err(Error::Stability { .. })));
}

#[test]
fn halving_the_step_converges() {
    let p = Params::at_resonance(2, 0.05, 0.1, 0.0).unwrap();
    let h = build_hamiltonian(&p, TruncationScheme::new(20).unwrap()).unwrap();
    let psi0 = State::basis(Level::E, 0, 20).unwrap();
    let c = evolve_converged(&h, &psi0, 100.0, 100, 1e-8, 4).unwrap();
    assert!(c.change < 1e-8, "{}", c.change);
    assert_eq!(c.evolution.series.len(), 101);
}

#[test]
fn literal_two_photon_frequency_is_detuned_by_the_ladder_shift() {
    // With omega0 = 2 exactly the longitudinal shift -mu^2/omega leaves the
    // |e,0> -> |g,2> transition off resonance and the inversion never
    // completes; the shifted value restores it.
    let (lam, mu) = (0.02, 0.1);
    let omega = rabi_frequency(&Params::at_resonance(2, lam, mu, 0.0).unwrap(), 2, 2).unwrap();
    let t = 2.0 * std::f64::consts::PI / omega;
    let psi0 = State::basis(Level::E, 0, 20).unwrap();
    let min_w = |p: &Params| run(p, 20, &psi0, t).w.iter().copied().fold(f64::INFINITY, f64::min);
    let literal = min_w(&Params::from_ratios(lam, mu, 2.0, 0.0).unwrap());
    let shifted = min_w(&Params::at_resonance(2, lam, mu, 0.0).unwrap());
    assert!(literal > -0.5, "literal {literal}");
    assert!(shifted < -0.95, "shifted {shifted}");
    assert!(resonance_detuning(&Params::from_ratios(lam, mu, 2.0, 0.0).unwrap(), 2).abs() > 0.1 * omega);
}

#[test]
fn resonant_dynamics_reproduce_the_analytic_inversion() {
    let p = Params::at_resonance(2, 0.02, 0.1, 0.0).unwrap();
    let t: Vec<f64> = (0..=40).map(|i| i as f64 * 20.0).collect();
    let analytic = inversion_fock(&p, 2, &t).unwrap();
    let snaps = resonant_evolution(&p, 2, ResonantInitial::ExcitedVacuum, &t).unwrap();
    for (s, w) in snaps.iter().zip(&analytic) {
        assert!((s.inversion() - w).abs() < 1e-12);
    }
}

#[test]
fn single_precision_evolution_tracks_double() {
    let p64 = Params::at_resonance(1, 0.05, 0.1, 0.0).unwrap();
    let p32 = ParamsF32::at_resonance(1, 0.05, 0.1, 0.0).unwrap();
    let t = 60.0;
    let h64 = build_hamiltonian(&p64, TruncationScheme::new(12).unwrap()).unwrap();
    let h32 = build_hamiltonian(&p32, TruncationScheme::new(12).unwrap()).unwrap();
    let s64 = State::basis(Level::E, 0, 12).unwrap();
    let s32 = StateF32::basis(Level::E, 0, 12).unwrap();
    let dt = 0.05 / h64.spectral_radius_bound();
    let a = evolve(&h64, &s64, t, dt, 100).unwrap().series;
    let b = evolve(&h32, &s32, t as f32, dt as f32, 100).unwrap().series;
    assert_eq!(a.len(), b.len());
    for (x, y) in a.w.iter().zip(&b.w) {
        assert!((x - *y as f64).abs() < 1e-3, "{x} vs {y}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn dressed_states_are_orthonormal(n in 1usize..4, big_n in 0usize..30, lam in -0.1f64..0.1, mu in -0.5f64..0.5) {
        prop_assume!(lam.abs() > 1e-6);
        let p = Params::at_resonance(n, lam, mu, 0.0).unwrap();
        if let ResonantManifold::Triplet(sys) = resonant_manifold(&p, big_n, n).unwrap() {
            for i in 0..3 {
                for j in 0..3 {
                    let d: f64 = (0..3).map(|k| sys.states[i][k] * sys.states[j][k]).sum();
                    let delta = if i == j { 1.0 } else { 0.0 };
                    prop_assert!((d - delta).abs() < 1e-14);
                }
            }
            prop_assert!((sys.energies[1] - sys.energies[2] - 2.0 * 2f64.sqrt() * sys.v_n.abs()).abs() < 1e-14);
        } else {
            prop_assert!(big_n < n);
        }
    }

    #[test]
    fn analytic_inversion_is_bounded(n in 1usize..4, nbar in 0.0f64..40.0, t in 0.0f64..5000.0) {
        let p = Params::at_resonance(n, 0.02, 0.1, 0.0).unwrap();
        let w = inversion_coherent(&p, n, nbar, &[t], 1e-12).unwrap()[0];
        prop_assert!((-1.0 - 1e-12..=1.0 + 1e-12).contains(&w));
    }

    #[test]
    fn poisson_weights_sum_to_one(nbar in 0.0f64..200.0) {
        let w = poisson_weights(nbar, 1e-12);
        prop_assert!((w.iter().sum::<f64>() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn evolution_conserves_norm_and_energy(
        lam in -0.5f64..0.5, mu in -1.0f64..1.0, w0 in 0.5f64..3.0, nbar in 0.0f64..4.0,
    ) {
        let p = Params::from_ratios(lam, mu, w0, 0.05).unwrap();
        let trunc = TruncationScheme::new(40).unwrap();
        let psi0 = coherent_initial_state(nbar, Level::G1, trunc).unwrap();
        let s = run(&p, 40, &psi0, 20.0);
        prop_assert!(s.max_norm_drift() <= 1e-8);
        prop_assert!(s.max_energy_drift() <= 1e-8);
        for p_n in &s.p_n {
            prop_assert!((p_n.iter().sum::<f64>() - 1.0).abs() <= 1e-8);
        }
        prop_assert!(s.w.iter().all(|w| w.abs() <= 1.0 + 1e-9));
        prop_assert!(s.q.iter().all(|q| *q >= -1.0 - 1e-9));
    }
}
