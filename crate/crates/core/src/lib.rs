//! A three-level qutrit in the polar-Lambda configuration coupled to one
//! quantized oscillator mode.
//!
//! The crate covers the closed-form multiphoton resonant solution
//! ([`resonant`]), exact Runge-Kutta dynamics of the truncated system
//! ([`dynamics`]), and low-lying spectra, ground-state statistics and
//! qutrit-field entanglement ([`spectrum`]). All numerical code is generic
//! over [`Real`] (`f32` or `f64`); the aliases below fix `f64`.
//!
//! ```
//! use qutrit_core::{build_hamiltonian, eigen_spectrum, Params, TruncationScheme};
//!
//! let p = Params::from_ratios(0.0, 0.1, 2.0, 0.0).unwrap();
//! let h = build_hamiltonian(&p, TruncationScheme::new(40).unwrap()).unwrap();
//! let e = eigen_spectrum(&h, 1).unwrap();
//! assert!((e.values[0] - p.energy_offset() + 0.01).abs() < 1e-12);
//! ```

// NaN must fail validation checks, so `!(x > 0)` is intentional.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod diagnostics;
pub mod dynamics;
pub mod error;
pub mod linalg;
pub mod model;
pub mod resonant;
pub mod scalar;
pub mod signal;
pub mod special;
pub mod spectrum;
pub mod state;

pub use diagnostics::Diagnostic;
pub use dynamics::{
    coherent_initial_state, evolve, evolve_converged, inversion, mandel_q, mean_photons, photon_distribution,
    plan_time_step, Evolution, ObservableSeries,
};
pub use error::{Error, Result};
pub use model::{
    apply_hamiltonian, build_hamiltonian, build_l_hamiltonian, map_l_to_polar_lambda, HamiltonianMatrix, LConfigParams,
    ModelParams, TruncationScheme,
};
pub use resonant::{
    collapse_time, inversion_coherent, inversion_fock, rabi_frequency, resonance_detuning, resonant_eigensystem,
    resonant_evolution, transition_matrix_element, ResonantEigensystem, ResonantInitial,
};
pub use scalar::Real;
pub use special::{displaced_fock_coeffs, laguerre_fn, laguerre_poly, DisplacedFockCoeffs, LaguerreArg};
pub use spectrum::{
    eigen_spectrum, eigen_spectrum_with, entropy3, entropy_sweep, ground_state_report, ground_state_report_with,
    level_sweep, reduced_density, EigenMethod, EigenResult, GroundOptions, GroundResolution, GroundStateReport,
    SweepAxis,
};
pub use state::{Level, StateVector};

/// Crate version, echoed into output metadata.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Double-precision model parameters.
pub type Params = ModelParams<f64>;
/// Double-precision L-configuration parameters.
pub type LParams = LConfigParams<f64>;
/// Double-precision Hamiltonian.
pub type Hamiltonian = HamiltonianMatrix<f64>;
/// Double-precision state vector.
pub type State = StateVector<f64>;
/// Double-precision observable series.
pub type Series = ObservableSeries<f64>;
/// Double-precision ground-state report.
pub type GroundReport = GroundStateReport<f64>;
/// Double-precision eigenpairs.
pub type Eigen = EigenResult<f64>;
/// Single-precision model parameters.
pub type ParamsF32 = ModelParams<f32>;
/// Single-precision state vector.
pub type StateF32 = StateVector<f32>;
