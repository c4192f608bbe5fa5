//! Low-lying spectrum, ground-state photon statistics and qutrit-field
//! entanglement.

use num_complex::Complex;
use rayon::prelude::*;

use crate::dynamics::{mandel_q, mean_photons, photon_distribution};
use crate::error::{Error, Result};
use crate::linalg::{dense_lowest_eigenpairs, krylov_lowest_eigenpairs, symmetric_eigen, symmetric_eigenvalues};
use crate::linalg::{DenseMatrix, KrylovOptions};
use crate::model::{build_hamiltonian, HamiltonianMatrix, ModelParams, TruncationScheme, CONVERGENCE_CERTIFICATE_TOL};
use crate::scalar::Real;
use crate::state::StateVector;

/// Largest dimension handled by the dense solver under [`EigenMethod::Auto`].
pub const DENSE_LIMIT: usize = 2000;
/// Largest eigenpair residual accepted, in units of `omega`.
pub const RESIDUAL_TOL: f64 = 1e-9;
/// Levels closer than this to the lowest one (in units of `omega`) are
/// treated as a degenerate ground manifold.
pub const GROUND_DEGENERACY_TOL: f64 = 1e-6;
/// Eigenvalues of a density matrix may dip this far below zero.
pub const PSD_TOL: f64 = 1e-12;
/// Allowed deviation of a density matrix from unit trace and Hermiticity.
pub const TRACE_TOL: f64 = 1e-10;
/// Truncations above this certify with the Krylov solver.
const CERTIFICATE_DENSE_LIMIT: usize = 900;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EigenMethod {
    /// Dense up to [`DENSE_LIMIT`], Krylov above.
    #[default]
    Auto,
    Dense,
    Krylov,
}

impl EigenMethod {
    fn resolve(self, dim: usize) -> Self {
        match self {
            EigenMethod::Auto if dim <= DENSE_LIMIT => EigenMethod::Dense,
            EigenMethod::Auto => EigenMethod::Krylov,
            m => m,
        }
    }
}

/// The `k` lowest eigenpairs of a Hamiltonian.
#[derive(Debug, Clone)]
pub struct EigenResult<T> {
    pub values: Vec<T>,
    pub vectors: Vec<StateVector<T>>,
    pub residuals: Vec<T>,
    pub method: EigenMethod,
}

impl<T: Real> EigenResult<T> {
    pub fn max_residual(&self) -> T {
        self.residuals.iter().copied().fold(T::zero(), T::max)
    }
}

fn krylov_options<T: Real>(h: &HamiltonianMatrix<T>) -> KrylovOptions<T> {
    KrylovOptions {
        tol: T::lit(0.1 * RESIDUAL_TOL) * h.omega(),
        ..KrylovOptions::default()
    }
}

fn residual_norm<T: Real>(h: &HamiltonianMatrix<T>, value: T, v: &[T]) -> T {
    let mut hv = vec![T::zero(); v.len()];
    h.apply_into(v, &mut hv);
    hv.iter()
        .zip(v)
        .map(|(&a, &b)| {
            let r = a - value * b;
            r * r
        })
        .sum::<T>()
        .sqrt()
}

fn check_k<T: Real>(h: &HamiltonianMatrix<T>, k: usize) -> Result<()> {
    if k == 0 || k > h.dim() {
        return Err(Error::Dimension(format!("asked for {k} eigenpairs of a {}-dimensional matrix", h.dim())));
    }
    Ok(())
}

/// `k` lowest eigenpairs, choosing the solver by dimension.
pub fn eigen_spectrum<T: Real>(h: &HamiltonianMatrix<T>, k: usize) -> Result<EigenResult<T>> {
    eigen_spectrum_with(h, k, EigenMethod::Auto)
}

/// `k` lowest eigenpairs with an explicit solver choice.
pub fn eigen_spectrum_with<T: Real>(h: &HamiltonianMatrix<T>, k: usize, method: EigenMethod) -> Result<EigenResult<T>> {
    check_k(h, k)?;
    let method = method.resolve(h.dim());
    let (values, vectors) = match method {
        EigenMethod::Dense => dense_lowest_eigenpairs(&h.to_dense(), k)?,
        _ => {
            let res = krylov_lowest_eigenpairs(h.dim(), k, |x, y| h.apply_into(x, y), &krylov_options(h))?;
            log::debug!("krylov: {} restarts, {} products", res.restarts, res.matvecs);
            (res.values, res.vectors)
        }
    };
    let residuals: Vec<T> = values.iter().zip(&vectors).map(|(&e, v)| residual_norm(h, e, v)).collect();
    let tol = T::lit(RESIDUAL_TOL) * h.omega();
    let bad = residuals.iter().filter(|&&r| !(r <= tol)).count();
    if bad > 0 {
        let worst = residuals.iter().copied().fold(T::zero(), T::max);
        return Err(Error::Convergence {
            iterations: 0,
            converged: k - bad,
            wanted: k,
            worst_residual: worst.to_f64_lossy(),
        });
    }
    let vectors = vectors.iter().map(|v| StateVector::from_real(v)).collect::<Result<Vec<_>>>()?;
    Ok(EigenResult {
        values,
        vectors,
        residuals,
        method,
    })
}

/// `k` lowest eigenvalues only.
pub fn lowest_eigenvalues<T: Real>(h: &HamiltonianMatrix<T>, k: usize, method: EigenMethod) -> Result<Vec<T>> {
    check_k(h, k)?;
    match method.resolve(h.dim()) {
        EigenMethod::Dense => {
            let mut all = symmetric_eigenvalues(&h.to_dense())?;
            all.truncate(k);
            Ok(all)
        }
        _ => Ok(krylov_lowest_eigenpairs(h.dim(), k, |x, y| h.apply_into(x, y), &krylov_options(h))?.values),
    }
}

/// Coupling parameter varied in a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepAxis {
    Lambda,
    Mu,
}

impl SweepAxis {
    pub fn apply<T: Real>(self, base: &ModelParams<T>, value: T) -> ModelParams<T> {
        match self {
            SweepAxis::Lambda => ModelParams { lam: value, ..*base },
            SweepAxis::Mu => ModelParams { mu: value, ..*base },
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            SweepAxis::Lambda => "lambda",
            SweepAxis::Mu => "mu",
        }
    }
}

fn check_grid<T: Real>(grid: &[T]) -> Result<()> {
    if grid.iter().any(|v| !v.is_finite()) {
        return Err(Error::Domain("sweep grid must be finite".into()));
    }
    if grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::Domain("sweep grid must be strictly ascending".into()));
    }
    Ok(())
}

/// Lowest `k` levels at each grid point.
#[derive(Debug, Clone, PartialEq)]
pub struct LevelTable<T> {
    pub axis: SweepAxis,
    pub grid: Vec<T>,
    /// `energies[i][j]` is level `j` at `grid[i]`.
    pub energies: Vec<Vec<T>>,
    /// Whether `eps_g + omega/2` was subtracted.
    pub offset: bool,
}

/// Low-lying levels along a coupling sweep. Grid points run in parallel;
/// rows come back in grid order.
pub fn level_sweep<T: Real>(
    base: &ModelParams<T>,
    axis: SweepAxis,
    grid: &[T],
    k: usize,
    trunc: TruncationScheme,
    offset: bool,
) -> Result<LevelTable<T>> {
    check_grid(grid)?;
    let energies = grid
        .par_iter()
        .map(|&g| {
            let p = axis.apply(base, g);
            let h = build_hamiltonian(&p, trunc)?;
            let shift = if offset { p.energy_offset() } else { T::zero() };
            Ok(lowest_eigenvalues(&h, k, EigenMethod::Auto)?
                .into_iter()
                .map(|e| e - shift)
                .collect())
        })
        .collect::<Result<Vec<Vec<T>>>>()?;
    Ok(LevelTable {
        axis,
        grid: grid.to_vec(),
        energies,
        offset,
    })
}

/// Qutrit density matrix, rows and columns in `(g1, g2, e)` order.
pub type Density3<T> = [[Complex<T>; 3]; 3];

/// `rho_{s s'} = sum_N C_{s,N} conj(C_{s',N})`.
pub fn reduced_density<T: Real>(psi: &StateVector<T>) -> Density3<T> {
    let zero = Complex::new(T::zero(), T::zero());
    let mut rho = [[zero; 3]; 3];
    for b in psi.amplitudes().chunks_exact(3) {
        for i in 0..3 {
            for j in 0..3 {
                rho[i][j] = rho[i][j] + b[i] * b[j].conj();
            }
        }
    }
    rho
}

/// Eigenvalues of a 3x3 Hermitian matrix, ascending, via its real 6x6
/// embedding `[[Re, -Im], [Im, Re]]` (each eigenvalue appears twice).
pub fn hermitian3_eigenvalues<T: Real>(rho: &Density3<T>) -> Result<[T; 3]> {
    let m = DenseMatrix::from_fn(6, |i, j| {
        let (a, b) = (rho[i % 3][j % 3].re, rho[i % 3][j % 3].im);
        match (i < 3, j < 3) {
            (true, true) | (false, false) => a,
            (true, false) => -b,
            (false, true) => b,
        }
    });
    let v = symmetric_eigenvalues(&m)?;
    Ok([v[0], v[2], v[4]])
}

/// `S_3 = -sum p log_3 p` over the eigenvalues of `rho`.
pub fn entropy3<T: Real>(rho: &Density3<T>) -> Result<T> {
    let tol = T::lit(TRACE_TOL);
    let trace = rho[0][0].re + rho[1][1].re + rho[2][2].re;
    if !((trace - T::one()).abs() <= tol) {
        return Err(Error::InvalidDensityMatrix(format!("trace {trace} differs from 1")));
    }
    for i in 0..3 {
        for j in 0..3 {
            if !((rho[i][j] - rho[j][i].conj()).norm() <= tol) {
                return Err(Error::InvalidDensityMatrix(format!("not Hermitian at ({i}, {j})")));
            }
        }
    }
    let ev = hermitian3_eigenvalues(rho)?;
    let ln3 = T::lit(3.0).ln();
    let mut s = T::zero();
    for &p in &ev {
        if p < -T::lit(PSD_TOL) {
            return Err(Error::InvalidDensityMatrix(format!("negative eigenvalue {p}")));
        }
        if p > T::zero() {
            s -= p * p.ln() / ln3;
        }
    }
    Ok(s.max(T::zero()).min(T::one()))
}

/// `(a + a^+) psi`.
pub fn apply_position<T: Real>(psi: &[T]) -> Vec<T> {
    let nb = psi.len() / 3;
    let mut out = vec![T::zero(); psi.len()];
    for n in 0..nb {
        for s in 0..3 {
            let mut acc = T::zero();
            if n > 0 {
                acc += T::of_usize(n).sqrt() * psi[3 * (n - 1) + s];
            }
            if n + 1 < nb {
                acc += T::of_usize(n + 1).sqrt() * psi[3 * (n + 1) + s];
            }
            out[3 * n + s] = acc;
        }
    }
    out
}

/// Generalized parity: swap `g1 <-> g2` and multiply by `(-1)^N`. Commutes
/// with the polar-Lambda Hamiltonian.
pub fn apply_parity<T: Real>(psi: &[T]) -> Vec<T> {
    let mut out = vec![T::zero(); psi.len()];
    for (n, (o, b)) in out.chunks_exact_mut(3).zip(psi.chunks_exact(3)).enumerate() {
        let s = if n % 2 == 0 { T::one() } else { -T::one() };
        o[0] = s * b[1];
        o[1] = s * b[0];
        o[2] = s * b[2];
    }
    out
}

/// How a degenerate ground manifold is reduced to one state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum GroundResolution {
    /// Lowest `<a + a^+>` state of the manifold: the symmetry-broken,
    /// field-localized ground state.
    #[default]
    Localized,
    /// Even eigenstate of the generalized parity.
    ParityEven,
    /// Whatever the eigensolver returns first.
    Raw,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GroundOptions {
    pub resolution: GroundResolution,
    pub method: EigenMethod,
    /// Double `n_max` until the certificate passes, up to this cutoff.
    pub max_n_max: usize,
    /// Levels requested when probing for ground degeneracy.
    pub probe_levels: usize,
}

impl Default for GroundOptions {
    fn default() -> Self {
        Self {
            resolution: GroundResolution::Localized,
            method: EigenMethod::Auto,
            max_n_max: 3200,
            probe_levels: 4,
        }
    }
}

/// Ground-state properties at a certified truncation.
#[derive(Debug, Clone)]
pub struct GroundStateReport<T> {
    /// Ground energy relative to `eps_g + omega/2`.
    pub energy: T,
    pub raw_energy: T,
    pub n_max: usize,
    /// `|E0(2 n_max) - E0(n_max)|`.
    pub certificate_shift: T,
    pub p_n: Vec<T>,
    pub mean_photons: T,
    pub q: T,
    pub rho_r: Density3<T>,
    pub entropy_s3: T,
    /// Number of levels within the degeneracy tolerance of the lowest.
    pub multiplicity: usize,
    /// Spread of the degenerate ground manifold.
    pub splitting: T,
    /// `||H v - E v||` of the reported state. For a resolved doublet this is
    /// of the order of `splitting`, since the state mixes two eigenvectors.
    pub residual: T,
    /// Largest residual of the probed eigenpairs.
    pub eigen_residual: T,
    pub resolution: GroundResolution,
    pub state: StateVector<T>,
}

fn ground_energy<T: Real>(params: &ModelParams<T>, n_max: usize, method: EigenMethod) -> Result<T> {
    let h = build_hamiltonian(params, TruncationScheme::new(n_max)?)?;
    let method = match method {
        EigenMethod::Auto if h.dim() > 3 * (CERTIFICATE_DENSE_LIMIT + 1) => EigenMethod::Krylov,
        m => m,
    };
    // Two levels so a near-degenerate pair cannot stall the Krylov block.
    Ok(lowest_eigenvalues(&h, 2, method)?[0])
}

/// Ground-state report with default options.
pub fn ground_state_report<T: Real>(params: &ModelParams<T>, trunc: TruncationScheme) -> Result<GroundStateReport<T>> {
    ground_state_report_with(params, trunc, &GroundOptions::default())
}

/// Certifies the truncation by doubling, then analyses the ground state.
pub fn ground_state_report_with<T: Real>(
    params: &ModelParams<T>,
    trunc: TruncationScheme,
    opts: &GroundOptions,
) -> Result<GroundStateReport<T>> {
    params.validate()?;
    let tol = T::lit(CONVERGENCE_CERTIFICATE_TOL) * params.omega;
    let mut n_max = trunc.n_max;
    let mut e_lo = ground_energy(params, n_max, opts.method)?;
    let shift = loop {
        if 2 * n_max > opts.max_n_max {
            return Err(Error::Truncation(format!(
                "ground energy not converged below n_max = {}",
                opts.max_n_max
            )));
        }
        let e_hi = ground_energy(params, 2 * n_max, opts.method)?;
        let shift = (e_lo - e_hi).abs();
        if shift <= tol {
            break shift;
        }
        n_max *= 2;
        e_lo = e_hi;
    };

    let h = build_hamiltonian(params, TruncationScheme::new(n_max)?)?;
    let k = opts.probe_levels.max(1).min(h.dim());
    let eig = eigen_spectrum_with(&h, k, opts.method)?;
    let e0 = eig.values[0];
    let deg_tol = T::lit(GROUND_DEGENERACY_TOL) * params.omega;
    let multiplicity = eig.values.iter().take_while(|&&e| e - e0 <= deg_tol).count();
    if multiplicity == k && k < h.dim() {
        log::warn!("ground manifold fills all {k} probed levels; raise probe_levels");
    }
    let splitting = eig.values[multiplicity - 1] - e0;

    let real: Vec<Vec<T>> = eig.vectors[..multiplicity]
        .iter()
        .map(|v| v.amplitudes().iter().map(|a| a.re).collect())
        .collect();
    let chosen = resolve_ground(&real, opts.resolution)?;
    let raw_energy = {
        let mut hv = vec![T::zero(); chosen.len()];
        h.apply_into(&chosen, &mut hv);
        chosen.iter().zip(&hv).map(|(&a, &b)| a * b).sum::<T>()
    };
    let residual = residual_norm(&h, raw_energy, &chosen);
    let state = StateVector::from_real(&chosen)?;
    let p_n = photon_distribution(&state);
    let rho_r = reduced_density(&state);
    let entropy_s3 = entropy3(&rho_r)?;
    Ok(GroundStateReport {
        energy: raw_energy - params.energy_offset(),
        raw_energy,
        n_max,
        certificate_shift: shift,
        mean_photons: mean_photons(&p_n),
        q: mandel_q(&p_n),
        p_n,
        rho_r,
        entropy_s3,
        multiplicity,
        splitting,
        residual,
        eigen_residual: eig.max_residual(),
        resolution: opts.resolution,
        state,
    })
}

/// Picks one state from an orthonormal degenerate manifold.
fn resolve_ground<T: Real>(basis: &[Vec<T>], how: GroundResolution) -> Result<Vec<T>> {
    if basis.len() == 1 || how == GroundResolution::Raw {
        return Ok(basis[0].clone());
    }
    let op: fn(&[T]) -> Vec<T> = match how {
        GroundResolution::Localized => apply_position,
        _ => apply_parity,
    };
    let images: Vec<Vec<T>> = basis.iter().map(|v| op(v)).collect();
    let m = basis.len();
    let g = DenseMatrix::from_fn(m, |i, j| {
        let a: T = basis[i].iter().zip(&images[j]).map(|(&x, &y)| x * y).sum();
        let b: T = basis[j].iter().zip(&images[i]).map(|(&x, &y)| x * y).sum();
        (a + b) * T::lit(0.5)
    });
    let (_, vecs) = symmetric_eigen(&g)?;
    // Lowest position, or highest parity.
    let coeffs = if how == GroundResolution::Localized {
        &vecs[0]
    } else {
        &vecs[m - 1]
    };
    let mut out = vec![T::zero(); basis[0].len()];
    for (c, v) in coeffs.iter().zip(basis) {
        for (o, &x) in out.iter_mut().zip(v) {
            *o += *c * x;
        }
    }
    let norm = out.iter().map(|&x| x * x).sum::<T>().sqrt();
    for o in &mut out {
        *o /= norm;
    }
    Ok(out)
}

/// Ground-state reports along a coupling sweep.
#[derive(Debug, Clone)]
pub struct EntropyTable<T> {
    pub axis: SweepAxis,
    pub grid: Vec<T>,
    pub reports: Vec<GroundStateReport<T>>,
}

impl<T: Real> EntropyTable<T> {
    pub fn entropies(&self) -> Vec<T> {
        self.reports.iter().map(|r| r.entropy_s3).collect()
    }
}

/// `S_3` of the ground state at each grid point. The truncation is the
/// starting point of each certificate.
pub fn entropy_sweep<T: Real>(
    base: &ModelParams<T>,
    axis: SweepAxis,
    grid: &[T],
    trunc: TruncationScheme,
    opts: &GroundOptions,
) -> Result<EntropyTable<T>> {
    check_grid(grid)?;
    let reports = grid
        .par_iter()
        .map(|&g| ground_state_report_with(&axis.apply(base, g), trunc, opts))
        .collect::<Result<Vec<_>>>()?;
    Ok(EntropyTable {
        axis,
        grid: grid.to_vec(),
        reports,
    })
}
