//! Scenario runners. Each one computes every table in memory before
//! anything is written.

use std::f64::consts::PI;

use qutrit_core::dynamics::{suggested_n_max, TRUNCATION_TAIL_TOL};
use qutrit_core::resonant::{validity_diagnostics, DEFAULT_POISSON_TAIL};
use qutrit_core::spectrum::{level_sweep, lowest_eigenvalues, EigenMethod};
use qutrit_core::{
    build_hamiltonian, build_l_hamiltonian, coherent_initial_state, collapse_time, entropy_sweep, evolve,
    ground_state_report_with, inversion_coherent, inversion_fock, map_l_to_polar_lambda, plan_time_step,
    rabi_frequency, Diagnostic, GroundOptions, LParams, Params, TruncationScheme,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::{
    AnalyticConfig, EquivalenceConfig, EvolveConfig, GroundConfig, Physics, RunConfig, SweepEntropyConfig,
    SweepLevelsConfig,
};
use crate::output::{Cell, Metadata, Table};
use crate::recipes::Recipe;
use crate::RunError;

const TIME_UNIT: &str = "omega t / 2 pi";
/// Bound on the spectral deviation and truncation shift in the equivalence check.
const EQUIVALENCE_TOL: f64 = 1e-8;

pub struct Outcome {
    pub meta: Metadata,
    pub tables: Vec<Table>,
    /// One-line summary for the terminal.
    pub summary: String,
}

pub fn run(cfg: &RunConfig, recipe: Option<&Recipe>) -> Result<Outcome, RunError> {
    let mut config = cfg.echo();
    if let Some(r) = recipe {
        config.pairs.insert(1, ("recipe".into(), r.name.into()));
    }
    let mut meta = Metadata {
        config,
        info: Vec::new(),
    };
    if let Some(n) = recipe.and_then(|r| r.note) {
        meta.info("note", n);
    }
    let (tables, summary) = match cfg {
        RunConfig::Evolve(c) => evolve_run(c, &mut meta)?,
        RunConfig::SweepLevels(c) => sweep_levels(c, &mut meta)?,
        RunConfig::Ground(c) => ground(c, &mut meta)?,
        RunConfig::SweepEntropy(c) => sweep_entropy(c, &mut meta)?,
        RunConfig::Equivalence(c) => equivalence(c, &mut meta)?,
        RunConfig::Analytic(c) => analytic(c, &mut meta)?,
    };
    Ok(Outcome { meta, tables, summary })
}

fn params(p: &Physics) -> Result<Params, RunError> {
    Ok(Params::from_ratios(p.lambda, p.mu, p.omega0, p.delta)?)
}

fn warn(meta: &mut Metadata, diagnostics: &[Diagnostic]) {
    for d in diagnostics {
        eprintln!("warning: {d}");
        meta.info("diagnostic", d);
    }
}

fn p_columns(k: usize) -> impl Iterator<Item = String> {
    (0..=k).map(|n| format!("P_{n}"))
}

fn evolve_run(c: &EvolveConfig, meta: &mut Metadata) -> Result<(Vec<Table>, String), RunError> {
    let p = params(&c.physics)?;
    let mut diags = p.regime_diagnostics();
    if let Some(n) = c.physics.resonance {
        let spread = (c.nbar + 4.0 * c.nbar.sqrt()).ceil() as usize;
        diags.extend(validity_diagnostics(&p, n, spread)?);
    }
    warn(meta, &diags);

    let n_max = c
        .n_max
        .unwrap_or_else(|| suggested_n_max(&p, c.nbar, c.physics.resonance.unwrap_or(0)));
    let trunc = TruncationScheme::new(n_max)?;
    let h = build_hamiltonian(&p, trunc)?;
    let psi0 = coherent_initial_state(c.nbar, c.initial, trunc)?;
    let t_final = 2.0 * PI * c.tmax;
    let dt = match c.dt {
        Some(dt) => dt,
        None => plan_time_step(&h, &psi0, t_final)?.dt(),
    };
    meta.config.int("n_max", n_max);
    meta.config.float("dt", dt);

    let steps = (t_final / dt).ceil().max(1.0) as usize;
    let every = steps.div_ceil(c.samples).max(1);
    let ev = evolve(&h, &psi0, t_final, dt, every)?;
    let s = ev.series;
    warn(meta, &s.diagnostics);
    let tail = s.max_tail();
    meta.info("time_unit", TIME_UNIT);
    meta.info_float("dt_used", s.dt);
    meta.info("steps", s.steps);
    meta.info_float("max_norm_drift", s.max_norm_drift());
    meta.info_float("max_energy_drift", s.max_energy_drift());
    meta.info_float("max_tail", tail);
    if tail > TRUNCATION_TAIL_TOL {
        return Err(RunError::NotConverged(format!(
            "top Fock state reached population {tail:e} (limit {TRUNCATION_TAIL_TOL:e}); raise n_max above {n_max}"
        )));
    }

    let pk = c.pk.min(n_max);
    let columns = ["t", "W", "Q"].iter().map(|s| s.to_string()).chain(p_columns(pk)).collect();
    let mut table = Table::new("series.csv", columns);
    for i in 0..s.len() {
        let mut row = vec![Cell::Float(s.t[i] / (2.0 * PI)), Cell::Float(s.w[i]), Cell::Float(s.q[i])];
        row.extend(s.p_n[i][..=pk].iter().map(|&x| Cell::Float(x / s.norm[i])));
        table.push(row);
    }
    let w_min = s.w.iter().copied().fold(f64::INFINITY, f64::min);
    let summary = format!("{} samples, n_max = {n_max}, min W = {w_min:.6}", s.len());
    Ok((vec![table], summary))
}

fn sweep_levels(c: &SweepLevelsConfig, meta: &mut Metadata) -> Result<(Vec<Table>, String), RunError> {
    let base = params(&c.physics)?;
    let grid = c.grid.values();
    let table = level_sweep(&base, c.grid.axis, &grid, c.k, TruncationScheme::new(c.n_max)?, c.offset)?;
    meta.info("coupling", c.grid.axis.name());
    if c.offset {
        meta.info("energy_origin", "eps_g + omega / 2");
    }
    let columns = std::iter::once("coupling".to_string())
        .chain((1..=c.k).map(|j| format!("E_{j}")))
        .collect();
    let mut out = Table::new("levels.csv", columns);
    for (g, row) in table.grid.iter().zip(&table.energies) {
        out.push(std::iter::once(*g).chain(row.iter().copied()).map(Cell::Float).collect());
    }
    let summary = format!("{} grid points x {} levels", grid.len(), c.k);
    Ok((vec![out], summary))
}

/// Highest photon number with non-negligible weight.
fn photon_cutoff(p: &[f64], pk: Option<usize>) -> usize {
    let last = p.len() - 1;
    if let Some(k) = pk {
        return k.min(last);
    }
    let mut mass = 0.0;
    for (k, x) in p.iter().enumerate() {
        mass += x;
        if 1.0 - mass < 1e-12 {
            return k;
        }
    }
    last
}

fn ground(c: &GroundConfig, meta: &mut Metadata) -> Result<(Vec<Table>, String), RunError> {
    let p = params(&c.physics)?;
    warn(meta, &p.regime_diagnostics());
    let trunc = match c.n_max {
        Some(n) => TruncationScheme::new(n)?,
        None => TruncationScheme::default_for(&p, c.physics.resonance.unwrap_or(0)),
    };
    meta.config.int("n_max", trunc.n_max);
    let opts = GroundOptions {
        resolution: c.resolution,
        ..GroundOptions::default()
    };
    let r = ground_state_report_with(&p, trunc, &opts)?;
    meta.info("certified_n_max", r.n_max);
    meta.info("energy_origin", "eps_g + omega / 2");

    let k = photon_cutoff(&r.p_n, c.pk);
    let columns = [
        "energy",
        "mean_photons",
        "Q",
        "S3",
        "n_max",
        "certificate_shift",
        "multiplicity",
        "splitting",
        "residual",
        "eigen_residual",
    ]
    .iter()
    .map(|s| s.to_string())
    .chain(p_columns(k))
    .collect();
    let mut g = Table::new("ground.csv", columns);
    let mut row = vec![
        Cell::Float(r.energy),
        Cell::Float(r.mean_photons),
        Cell::Float(r.q),
        Cell::Float(r.entropy_s3),
        Cell::Int(r.n_max),
        Cell::Float(r.certificate_shift),
        Cell::Int(r.multiplicity),
        Cell::Float(r.splitting),
        Cell::Float(r.residual),
        Cell::Float(r.eigen_residual),
    ];
    row.extend(r.p_n[..=k].iter().map(|&x| Cell::Float(x)));
    g.push(row);

    let names = ["g1", "g2", "e"];
    let mut rho = Table::new("rho.csv", ["row", "col", "re", "im"].iter().map(|s| s.to_string()).collect());
    for (i, a) in names.iter().enumerate() {
        for (j, b) in names.iter().enumerate() {
            let z = r.rho_r[i][j];
            rho.push(vec![Cell::Text(a), Cell::Text(b), Cell::Float(z.re), Cell::Float(z.im)]);
        }
    }
    let summary = format!(
        "E0 = {:.10}, <N> = {:.6}, Q = {:.6}, S3 = {:.6}, n_max = {}",
        r.energy, r.mean_photons, r.q, r.entropy_s3, r.n_max
    );
    Ok((vec![g, rho], summary))
}

fn sweep_entropy(c: &SweepEntropyConfig, meta: &mut Metadata) -> Result<(Vec<Table>, String), RunError> {
    let base = params(&c.physics)?;
    let grid = c.grid.values();
    let opts = GroundOptions {
        resolution: c.resolution,
        ..GroundOptions::default()
    };
    let t = entropy_sweep(&base, c.grid.axis, &grid, TruncationScheme::new(c.n_max)?, &opts)?;
    meta.info("coupling", c.grid.axis.name());
    let columns = ["coupling", "S3", "energy", "mean_photons", "Q", "n_max"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    let mut out = Table::new("entropy.csv", columns);
    for (g, r) in t.grid.iter().zip(&t.reports) {
        out.push(vec![
            Cell::Float(*g),
            Cell::Float(r.entropy_s3),
            Cell::Float(r.energy),
            Cell::Float(r.mean_photons),
            Cell::Float(r.q),
            Cell::Int(r.n_max),
        ]);
    }
    let s = t.entropies();
    let (i, peak) = s
        .iter()
        .copied()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |a, (i, x)| if x > a.1 { (i, x) } else { a });
    let summary = format!("peak S3 = {peak:.6} at {} = {}", c.grid.axis.name(), grid[i]);
    Ok((vec![out], summary))
}

fn equivalence(c: &EquivalenceConfig, meta: &mut Metadata) -> Result<(Vec<Table>, String), RunError> {
    let mut rng = ChaCha8Rng::seed_from_u64(c.seed);
    let g = c.coupling;
    let columns = ["config", "level", "E_L", "E_polar", "deviation"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    let mut out = Table::new("equivalence.csv", columns);
    let mut worst = 0.0f64;
    let mut shift = 0.0f64;
    let trunc = TruncationScheme::new(c.n_max)?;
    let k = c.k.min(trunc.dim());
    for i in 0..c.configs {
        let eps_g1: f64 = rng.gen_range(-0.3..=0.3);
        let eps_g2: f64 = rng.gen_range(-0.3..=0.3);
        let gap: f64 = rng.gen_range(0.5..=3.0);
        let g12: f64 = rng.gen_range(-g..=g);
        let g2e: f64 = rng.gen_range(-g..=g);
        let lp = LParams::new(eps_g1, eps_g2, 0.5 * (eps_g1 + eps_g2) + gap, g12, g2e, 1.0)?;
        let polar = map_l_to_polar_lambda(&lp);
        let el = lowest_eigenvalues(&build_l_hamiltonian(&lp, trunc)?, k, EigenMethod::Auto)?;
        let ep = lowest_eigenvalues(&build_hamiltonian(&polar, trunc)?, k, EigenMethod::Auto)?;
        let ep2 = lowest_eigenvalues(&build_hamiltonian(&polar, trunc.doubled())?, k, EigenMethod::Auto)?;
        for j in 0..k {
            let d = (el[j] - ep[j]).abs();
            worst = worst.max(d);
            shift = shift.max((ep[j] - ep2[j]).abs());
            out.push(vec![Cell::Int(i), Cell::Int(j), Cell::Float(el[j]), Cell::Float(ep[j]), Cell::Float(d)]);
        }
    }
    meta.info_float("max_deviation", worst);
    meta.info_float("truncation_shift", shift);
    if worst > EQUIVALENCE_TOL || shift > EQUIVALENCE_TOL {
        return Err(RunError::NotConverged(format!(
            "max deviation {worst:e}, truncation shift {shift:e} (limit {EQUIVALENCE_TOL:e}); raise n_max above {}",
            c.n_max
        )));
    }
    let summary = format!("max deviation = {worst:e} over {} configurations x {k} levels", c.configs);
    Ok((vec![out], summary))
}

fn analytic(c: &AnalyticConfig, meta: &mut Metadata) -> Result<(Vec<Table>, String), RunError> {
    let n = c.resonance;
    let p = Params::at_resonance(n, c.lambda, c.mu, 0.0)?;
    let spread = (c.nbar + 4.0 * c.nbar.sqrt()).ceil() as usize;
    warn(meta, &validity_diagnostics(&p, n, spread)?);
    let omega = rabi_frequency(&p, n, n)?;
    meta.info("time_unit", TIME_UNIT);
    meta.info_float("omega0", p.omega0());
    meta.info_float("rabi_frequency", omega);
    let scaled: Vec<f64> = (0..=c.samples).map(|i| c.tmax * i as f64 / c.samples as f64).collect();
    let t: Vec<f64> = scaled.iter().map(|s| 2.0 * PI * s).collect();
    let w = if c.nbar > 0.0 {
        meta.info_float("collapse_time", collapse_time(&p, n, c.nbar)? / (2.0 * PI));
        inversion_coherent(&p, n, c.nbar, &t, DEFAULT_POISSON_TAIL)?
    } else {
        inversion_fock(&p, n, &t)?
    };
    let mut out = Table::new("analytic.csv", vec!["t".into(), "W".into()]);
    for (s, w) in scaled.iter().zip(&w) {
        out.push(vec![Cell::Float(*s), Cell::Float(*w)]);
    }
    let summary = format!("{} samples, Omega_{n}({n}) = {omega:e}", scaled.len());
    Ok((vec![out], summary))
}
