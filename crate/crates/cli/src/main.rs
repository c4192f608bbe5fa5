//! `qutrit`: command-line front end for qutrit-core.

mod config;
mod output;
mod recipes;
mod scenarios;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::{ConfigError, Layers, Origin, RunConfig, Scenario};

#[derive(Parser)]
#[command(name = "qutrit", version, about = "Polar-Lambda qutrit coupled to an oscillator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Time evolution from |level> x |coherent nbar>; writes series.csv.
    Evolve(RunArgs),
    /// Lowest levels along a coupling sweep; writes levels.csv.
    SweepLevels(RunArgs),
    /// Certified ground state; writes ground.csv and rho.csv.
    Ground(RunArgs),
    /// Ground-state qutrit entropy along a coupling sweep; writes entropy.csv.
    SweepEntropy(RunArgs),
    /// L versus polar-Lambda spectra for random configurations; writes equivalence.csv.
    Equivalence(RunArgs),
    /// Resonant closed-form inversion; writes analytic.csv.
    Analytic(RunArgs),
    /// List the built-in figure recipes.
    Recipes,
}

/// Every parameter is read as text and validated by the config layer, so
/// flags, files and recipes share one set of checks and messages.
#[derive(Args, Default)]
struct RunArgs {
    /// Built-in recipe providing defaults.
    #[arg(long)]
    recipe: Option<String>,
    /// `key = value` file; overrides the recipe.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Re-run the configuration echoed in an earlier output file.
    #[arg(long, conflicts_with = "config")]
    replay: Option<PathBuf>,
    /// Output directory.
    #[arg(long, short, default_value = ".")]
    out: PathBuf,

    #[arg(long, allow_hyphen_values = true)]
    lambda: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    mu: Option<String>,
    #[arg(long)]
    omega0: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    delta: Option<String>,
    /// Multiphoton order; without --omega0 it sets omega0 = n - mu^2.
    #[arg(long)]
    resonance: Option<String>,
    #[arg(long)]
    nbar: Option<String>,
    /// Initial qutrit level: e, g1 or g2.
    #[arg(long)]
    initial: Option<String>,
    /// Final time in units of omega t / 2 pi.
    #[arg(long)]
    tmax: Option<String>,
    #[arg(long)]
    n_max: Option<String>,
    #[arg(long)]
    dt: Option<String>,
    #[arg(long)]
    samples: Option<String>,
    /// Highest photon number written as a P_N column.
    #[arg(long)]
    pk: Option<String>,
    /// Swept coupling: lambda or mu.
    #[arg(long)]
    sweep: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    from: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    to: Option<String>,
    #[arg(long)]
    points: Option<String>,
    /// Number of levels.
    #[arg(long)]
    k: Option<String>,
    /// Subtract eps_g + omega/2 from the levels.
    #[arg(long)]
    offset: Option<String>,
    /// Ground doublet resolution: localized, parity or raw.
    #[arg(long)]
    resolution: Option<String>,
    #[arg(long)]
    seed: Option<String>,
    #[arg(long)]
    configs: Option<String>,
    /// Bound on the random L-configuration couplings.
    #[arg(long)]
    coupling: Option<String>,
}

impl RunArgs {
    fn flags(&self) -> [(&'static str, &Option<String>); 22] {
        [
            ("lambda", &self.lambda),
            ("mu", &self.mu),
            ("omega0", &self.omega0),
            ("delta", &self.delta),
            ("resonance", &self.resonance),
            ("nbar", &self.nbar),
            ("initial", &self.initial),
            ("tmax", &self.tmax),
            ("n_max", &self.n_max),
            ("dt", &self.dt),
            ("samples", &self.samples),
            ("pk", &self.pk),
            ("sweep", &self.sweep),
            ("from", &self.from),
            ("to", &self.to),
            ("points", &self.points),
            ("k", &self.k),
            ("offset", &self.offset),
            ("resolution", &self.resolution),
            ("seed", &self.seed),
            ("configs", &self.configs),
            ("coupling", &self.coupling),
        ]
    }

    fn layers(&self, scenario: Scenario) -> Result<Layers, ConfigError> {
        let mut l = Layers::new(scenario);
        if let Some(r) = &self.recipe {
            l.apply_recipe(r)?;
        }
        if let Some(path) = &self.config {
            l.apply_file(path)?;
        }
        if let Some(path) = &self.replay {
            l.apply_replay(path)?;
        }
        for (key, value) in self.flags() {
            if let Some(v) = value {
                l.set(key, v, Origin::Flag)?;
            }
        }
        Ok(l)
    }
}

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error("configuration error: {0}")]
    Config(#[from] ConfigError),
    #[error("{0}")]
    Numeric(#[from] qutrit_core::Error),
    #[error("not converged: {0}")]
    NotConverged(String),
    #[error("cannot write output: {0}")]
    Io(#[from] std::io::Error),
}

impl RunError {
    fn exit_code(&self) -> u8 {
        use qutrit_core::Error as E;
        match self {
            RunError::Config(_) => 2,
            RunError::Numeric(E::Domain(_) | E::Dimension(_) | E::Stability { .. }) => 2,
            RunError::Numeric(_) | RunError::NotConverged(_) => 3,
            RunError::Io(_) => 1,
        }
    }
}

fn run_scenario(scenario: Scenario, args: &RunArgs) -> Result<(), RunError> {
    let layers = args.layers(scenario)?;
    let cfg = RunConfig::from_layers(&layers)?;
    let outcome = scenarios::run(&cfg, layers.recipe())?;
    let written = output::write_all(&args.out, &outcome.meta, &outcome.tables)?;
    println!("{scenario}: {}", outcome.summary);
    for path in written {
        println!("wrote {}", path.display());
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let (scenario, args) = match &cli.command {
        Command::Recipes => {
            print!("{}", recipes::listing());
            return ExitCode::SUCCESS;
        }
        Command::Evolve(a) => (Scenario::Evolve, a),
        Command::SweepLevels(a) => (Scenario::SweepLevels, a),
        Command::Ground(a) => (Scenario::Ground, a),
        Command::SweepEntropy(a) => (Scenario::SweepEntropy, a),
        Command::Equivalence(a) => (Scenario::Equivalence, a),
        Command::Analytic(a) => (Scenario::Analytic, a),
    };
    match run_scenario(scenario, args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
