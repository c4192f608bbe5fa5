//! Layered run configuration. Values come from a recipe, then a config file
//! (or the metadata of an earlier output), then command-line flags; each
//! later layer overrides the earlier ones.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};

use qutrit_core::{GroundResolution, Level, SweepAxis};

use crate::recipes;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scenario {
    Evolve,
    SweepLevels,
    Ground,
    SweepEntropy,
    Equivalence,
    Analytic,
}

const PHYSICS: &[&str] = &["lambda", "mu", "omega0", "resonance", "delta"];

impl Scenario {
    pub const ALL: [Scenario; 6] = [
        Scenario::Evolve,
        Scenario::SweepLevels,
        Scenario::Ground,
        Scenario::SweepEntropy,
        Scenario::Equivalence,
        Scenario::Analytic,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Scenario::Evolve => "evolve",
            Scenario::SweepLevels => "sweep-levels",
            Scenario::Ground => "ground",
            Scenario::SweepEntropy => "sweep-entropy",
            Scenario::Equivalence => "equivalence",
            Scenario::Analytic => "analytic",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|sc| sc.name() == s)
    }

    /// Keys accepted for this scenario, besides `scenario` itself.
    pub fn keys(self) -> Vec<&'static str> {
        let own: &[&str] = match self {
            Scenario::Evolve => &["nbar", "initial", "tmax", "n_max", "dt", "samples", "pk"],
            Scenario::SweepLevels => &["sweep", "from", "to", "points", "k", "n_max", "offset"],
            Scenario::Ground => &["n_max", "resolution", "pk"],
            Scenario::SweepEntropy => &["sweep", "from", "to", "points", "n_max", "resolution"],
            Scenario::Equivalence => &["seed", "configs", "coupling", "n_max", "k"],
            Scenario::Analytic => &["lambda", "mu", "resonance", "nbar", "tmax", "samples"],
        };
        let physics: &[&str] = match self {
            Scenario::Equivalence | Scenario::Analytic => &[],
            _ => PHYSICS,
        };
        physics.iter().chain(own).copied().collect()
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Where a configuration value came from.
#[derive(Debug, Clone, PartialEq)]
pub enum Origin {
    Recipe(&'static str),
    File { path: PathBuf, line: usize },
    Flag,
}

impl fmt::Display for Origin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Origin::Recipe(name) => write!(f, "recipe {name}"),
            Origin::File { path, line } => write!(f, "{}:{line}", path.display()),
            Origin::Flag => f.write_str("command line"),
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("{origin}: unknown key `{key}` for {scenario}")]
    UnknownKey { key: String, origin: Origin, scenario: Scenario },
    #[error("{origin}: invalid value `{value}` for `{key}`: {reason}")]
    Invalid { key: String, value: String, origin: Origin, reason: String },
    #[error("missing required key `{key}`")]
    Missing { key: String },
    #[error("{origin}: expected `key = value`")]
    Syntax { origin: Origin },
    #[error("cannot read {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("unknown recipe `{0}`; run `qutrit recipes` for the list")]
    UnknownRecipe(String),
    #[error("{origin}: this is a {found} configuration, not {expected}")]
    WrongScenario { origin: Origin, found: String, expected: Scenario },
}

/// Raw key-value pairs with their origins, before type checking.
#[derive(Debug, Clone)]
pub struct Layers {
    scenario: Scenario,
    values: BTreeMap<String, (String, Origin)>,
    recipe: Option<&'static recipes::Recipe>,
}

impl Layers {
    pub fn new(scenario: Scenario) -> Self {
        Self {
            scenario,
            values: BTreeMap::new(),
            recipe: None,
        }
    }

    pub fn recipe(&self) -> Option<&'static recipes::Recipe> {
        self.recipe
    }

    pub fn set(&mut self, key: &str, value: &str, origin: Origin) -> Result<(), ConfigError> {
        let key = key.trim().replace('-', "_");
        let value = value.trim();
        if key == "scenario" {
            if value != self.scenario.name() {
                return Err(ConfigError::WrongScenario {
                    origin,
                    found: value.to_string(),
                    expected: self.scenario,
                });
            }
            return Ok(());
        }
        if key == "recipe" {
            return self.apply_recipe(value).map_err(|e| match e {
                ConfigError::UnknownRecipe(_) | ConfigError::WrongScenario { .. } => ConfigError::Invalid {
                    key,
                    value: value.to_string(),
                    origin,
                    reason: e.to_string(),
                },
                e => e,
            });
        }
        if !self.scenario.keys().contains(&key.as_str()) {
            return Err(ConfigError::UnknownKey {
                key,
                origin,
                scenario: self.scenario,
            });
        }
        self.values.insert(key, (value.to_string(), origin));
        Ok(())
    }

    /// Recipe values fill in keys not yet set and never override a file
    /// or flag, whatever the order they are applied in.
    pub fn apply_recipe(&mut self, name: &str) -> Result<(), ConfigError> {
        let recipe = recipes::find(name).ok_or_else(|| ConfigError::UnknownRecipe(name.to_string()))?;
        if recipe.scenario != self.scenario {
            return Err(ConfigError::WrongScenario {
                origin: Origin::Recipe(recipe.name),
                found: recipe.scenario.name().to_string(),
                expected: self.scenario,
            });
        }
        if let Some(prev) = self.recipe.filter(|r| r.name != recipe.name) {
            return Err(ConfigError::Invalid {
                key: "recipe".into(),
                value: recipe.name.into(),
                origin: Origin::Recipe(recipe.name),
                reason: format!("conflicts with recipe {}", prev.name),
            });
        }
        self.recipe = Some(recipe);
        for (k, v) in recipe.values {
            if !self.values.contains_key(*k) {
                self.values.insert(k.to_string(), (v.to_string(), Origin::Recipe(recipe.name)));
            }
        }
        Ok(())
    }

    /// Reads a `key = value` file. Blank lines and `#` comments are skipped.
    pub fn apply_file(&mut self, path: &Path) -> Result<(), ConfigError> {
        let text = read(path)?;
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            self.apply_line(line, path, i + 1)?;
        }
        Ok(())
    }

    /// Reads the effective configuration echoed as `# key = value` lines at
    /// the top of an output file. `#!` lines are informational and skipped.
    pub fn apply_replay(&mut self, path: &Path) -> Result<(), ConfigError> {
        let text = read(path)?;
        for (i, raw) in text.lines().enumerate() {
            if !raw.starts_with('#') {
                break;
            }
            if raw.starts_with("#!") {
                continue;
            }
            self.apply_line(raw[1..].trim(), path, i + 1)?;
        }
        Ok(())
    }

    fn apply_line(&mut self, line: &str, path: &Path, number: usize) -> Result<(), ConfigError> {
        let origin = Origin::File {
            path: path.to_path_buf(),
            line: number,
        };
        match line.split_once('=') {
            Some((k, v)) if !k.trim().is_empty() && !v.trim().is_empty() => self.set(k, v, origin),
            _ => Err(ConfigError::Syntax { origin }),
        }
    }

    fn raw(&self, key: &str) -> Option<&(String, Origin)> {
        self.values.get(key)
    }

    fn invalid(&self, key: &str, reason: impl Into<String>) -> ConfigError {
        let (value, origin) = self.raw(key).cloned().expect("only called for present keys");
        ConfigError::Invalid {
            key: key.to_string(),
            value,
            origin,
            reason: reason.into(),
        }
    }

    fn parse<T: std::str::FromStr>(&self, key: &str, what: &str) -> Result<Option<T>, ConfigError> {
        match self.raw(key) {
            None => Ok(None),
            Some((v, _)) => v.parse().map(Some).map_err(|_| self.invalid(key, format!("expected {what}"))),
        }
    }

    pub fn f64(&self, key: &str) -> Result<Option<f64>, ConfigError> {
        match self.parse::<f64>(key, "a number")? {
            Some(x) if !x.is_finite() => Err(self.invalid(key, "must be finite")),
            x => Ok(x),
        }
    }

    pub fn positive(&self, key: &str) -> Result<Option<f64>, ConfigError> {
        match self.f64(key)? {
            Some(x) if x <= 0.0 => Err(self.invalid(key, "must be positive")),
            x => Ok(x),
        }
    }

    pub fn non_negative(&self, key: &str) -> Result<Option<f64>, ConfigError> {
        match self.f64(key)? {
            Some(x) if x < 0.0 => Err(self.invalid(key, "must not be negative")),
            x => Ok(x),
        }
    }

    pub fn count(&self, key: &str, min: usize) -> Result<Option<usize>, ConfigError> {
        match self.parse::<usize>(key, "a non-negative integer")? {
            Some(x) if x < min => Err(self.invalid(key, format!("must be at least {min}"))),
            x => Ok(x),
        }
    }

    pub fn bool(&self, key: &str) -> Result<Option<bool>, ConfigError> {
        self.parse(key, "true or false")
    }

    fn choice<T: Copy>(&self, key: &str, options: &[(&str, T)]) -> Result<Option<T>, ConfigError> {
        match self.raw(key) {
            None => Ok(None),
            Some((v, _)) => options
                .iter()
                .find(|(name, _)| name.eq_ignore_ascii_case(v))
                .map(|&(_, t)| Some(t))
                .ok_or_else(|| {
                    let names: Vec<&str> = options.iter().map(|(n, _)| *n).collect();
                    self.invalid(key, format!("expected one of {}", names.join(", ")))
                }),
        }
    }

    pub fn has(&self, key: &str) -> bool {
        self.values.contains_key(key)
    }
}

fn read(path: &Path) -> Result<String, ConfigError> {
    std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn required<T>(key: &str, v: Option<T>) -> Result<T, ConfigError> {
    v.ok_or_else(|| ConfigError::Missing { key: key.to_string() })
}

/// Dimensionless couplings in units of the mode frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Physics {
    pub lambda: f64,
    pub mu: f64,
    pub omega0: f64,
    pub delta: f64,
    /// Multiphoton order the run is tuned to, if any.
    pub resonance: Option<usize>,
}

impl Physics {
    /// Reads the couplings, leaving out the swept one. Without `omega0`, a
    /// `resonance = n` sets the exact `n`-photon value `n - mu^2`.
    fn from_layers(l: &Layers, swept: Option<SweepAxis>) -> Result<Self, ConfigError> {
        let swept_key = swept.map(|a| a.name());
        if let Some(key) = swept_key.filter(|k| l.has(k)) {
            return Err(l.invalid(key, "is the swept coupling"));
        }
        let get = |key: &str| -> Result<f64, ConfigError> {
            if swept_key == Some(key) {
                Ok(0.0)
            } else {
                required(key, l.f64(key)?)
            }
        };
        let lambda = get("lambda")?;
        let mu = get("mu")?;
        let delta = l.f64("delta")?.unwrap_or(0.0);
        let resonance = l.count("resonance", 1)?;
        let omega0 = match (l.f64("omega0")?, resonance) {
            (Some(w), _) => w,
            (None, Some(n)) if swept_key != Some("mu") => n as f64 - mu * mu,
            _ => return Err(ConfigError::Missing { key: "omega0".into() }),
        };
        Ok(Self {
            lambda,
            mu,
            omega0,
            delta,
            resonance,
        })
    }

    fn echo(&self, e: &mut Echo, swept: Option<SweepAxis>) {
        let swept = swept.map(|a| a.name());
        for (k, v) in [("lambda", self.lambda), ("mu", self.mu)] {
            if swept != Some(k) {
                e.float(k, v);
            }
        }
        e.float("omega0", self.omega0);
        e.float("delta", self.delta);
        if let Some(n) = self.resonance {
            e.int("resonance", n);
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvolveConfig {
    pub physics: Physics,
    pub nbar: f64,
    pub initial: Level,
    /// Final time in units of `omega t / 2 pi`.
    pub tmax: f64,
    pub n_max: Option<usize>,
    pub dt: Option<f64>,
    pub samples: usize,
    pub pk: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    pub axis: SweepAxis,
    pub from: f64,
    pub to: f64,
    pub points: usize,
}

impl Grid {
    pub fn values(&self) -> Vec<f64> {
        let span = self.to - self.from;
        let last = (self.points - 1) as f64;
        (0..self.points).map(|i| self.from + span * i as f64 / last).collect()
    }

    fn from_layers(l: &Layers) -> Result<Self, ConfigError> {
        let axis = required(
            "sweep",
            l.choice("sweep", &[("lambda", SweepAxis::Lambda), ("mu", SweepAxis::Mu)])?,
        )?;
        let from = required("from", l.f64("from")?)?;
        let to = required("to", l.f64("to")?)?;
        if to <= from {
            return Err(l.invalid("to", "must exceed `from`"));
        }
        let points = l.count("points", 2)?.unwrap_or(101);
        Ok(Self { axis, from, to, points })
    }

    fn echo(&self, e: &mut Echo) {
        e.text("sweep", self.axis.name());
        e.float("from", self.from);
        e.float("to", self.to);
        e.int("points", self.points);
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepLevelsConfig {
    pub physics: Physics,
    pub grid: Grid,
    pub k: usize,
    pub n_max: usize,
    pub offset: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GroundConfig {
    pub physics: Physics,
    pub n_max: Option<usize>,
    pub resolution: GroundResolution,
    pub pk: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepEntropyConfig {
    pub physics: Physics,
    pub grid: Grid,
    pub n_max: usize,
    pub resolution: GroundResolution,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EquivalenceConfig {
    pub seed: u64,
    pub configs: usize,
    /// Bound on `|g12|` and `|g2e|`.
    pub coupling: f64,
    pub n_max: usize,
    pub k: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AnalyticConfig {
    pub lambda: f64,
    pub mu: f64,
    pub resonance: usize,
    pub nbar: f64,
    pub tmax: f64,
    pub samples: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub enum RunConfig {
    Evolve(EvolveConfig),
    SweepLevels(SweepLevelsConfig),
    Ground(GroundConfig),
    SweepEntropy(SweepEntropyConfig),
    Equivalence(EquivalenceConfig),
    Analytic(AnalyticConfig),
}

const RESOLUTIONS: &[(&str, GroundResolution)] = &[
    ("localized", GroundResolution::Localized),
    ("parity", GroundResolution::ParityEven),
    ("raw", GroundResolution::Raw),
];

pub fn resolution_name(r: GroundResolution) -> &'static str {
    RESOLUTIONS.iter().find(|(_, v)| *v == r).map(|(n, _)| *n).unwrap_or("localized")
}

fn level_name(l: Level) -> &'static str {
    match l {
        Level::G1 => "g1",
        Level::G2 => "g2",
        Level::E => "e",
    }
}

impl RunConfig {
    /// Type-checks the merged layers.
    pub fn from_layers(l: &Layers) -> Result<Self, ConfigError> {
        Ok(match l.scenario {
            Scenario::Evolve => RunConfig::Evolve(EvolveConfig {
                physics: Physics::from_layers(l, None)?,
                nbar: l.non_negative("nbar")?.unwrap_or(0.0),
                initial: l
                    .choice("initial", &[("e", Level::E), ("g1", Level::G1), ("g2", Level::G2)])?
                    .unwrap_or(Level::E),
                tmax: required("tmax", l.positive("tmax")?)?,
                n_max: l.count("n_max", 1)?,
                dt: l.positive("dt")?,
                samples: l.count("samples", 1)?.unwrap_or(1000),
                pk: l.count("pk", 0)?.unwrap_or(10),
            }),
            Scenario::SweepLevels => {
                let grid = Grid::from_layers(l)?;
                RunConfig::SweepLevels(SweepLevelsConfig {
                    physics: Physics::from_layers(l, Some(grid.axis))?,
                    grid,
                    k: l.count("k", 1)?.unwrap_or(13),
                    n_max: l.count("n_max", 1)?.unwrap_or(60),
                    offset: l.bool("offset")?.unwrap_or(true),
                })
            }
            Scenario::Ground => RunConfig::Ground(GroundConfig {
                physics: Physics::from_layers(l, None)?,
                n_max: l.count("n_max", 1)?,
                resolution: l.choice("resolution", RESOLUTIONS)?.unwrap_or_default(),
                pk: l.count("pk", 0)?,
            }),
            Scenario::SweepEntropy => {
                let grid = Grid::from_layers(l)?;
                RunConfig::SweepEntropy(SweepEntropyConfig {
                    physics: Physics::from_layers(l, Some(grid.axis))?,
                    grid,
                    n_max: l.count("n_max", 1)?.unwrap_or(100),
                    resolution: l.choice("resolution", RESOLUTIONS)?.unwrap_or_default(),
                })
            }
            Scenario::Equivalence => RunConfig::Equivalence(EquivalenceConfig {
                seed: l.parse("seed", "a non-negative integer")?.unwrap_or(1),
                configs: l.count("configs", 1)?.unwrap_or(20),
                coupling: l.non_negative("coupling")?.unwrap_or(0.5),
                n_max: l.count("n_max", 2)?.unwrap_or(40),
                k: l.count("k", 1)?.unwrap_or(20),
            }),
            Scenario::Analytic => RunConfig::Analytic(AnalyticConfig {
                lambda: required("lambda", l.f64("lambda")?)?,
                mu: required("mu", l.f64("mu")?)?,
                resonance: required("resonance", l.count("resonance", 1)?)?,
                nbar: l.non_negative("nbar")?.unwrap_or(0.0),
                tmax: required("tmax", l.positive("tmax")?)?,
                samples: l.count("samples", 1)?.unwrap_or(1000),
            }),
        })
    }

    pub fn scenario(&self) -> Scenario {
        match self {
            RunConfig::Evolve(_) => Scenario::Evolve,
            RunConfig::SweepLevels(_) => Scenario::SweepLevels,
            RunConfig::Ground(_) => Scenario::Ground,
            RunConfig::SweepEntropy(_) => Scenario::SweepEntropy,
            RunConfig::Equivalence(_) => Scenario::Equivalence,
            RunConfig::Analytic(_) => Scenario::Analytic,
        }
    }

    /// The configuration as replayable `key = value` pairs. Values resolved
    /// at run time (`n_max`, `dt`) are added by the scenario.
    pub fn echo(&self) -> Echo {
        let mut e = Echo::default();
        e.text("scenario", self.scenario().name());
        match self {
            RunConfig::Evolve(c) => {
                c.physics.echo(&mut e, None);
                e.float("nbar", c.nbar);
                e.text("initial", level_name(c.initial));
                e.float("tmax", c.tmax);
                e.int("samples", c.samples);
                e.int("pk", c.pk);
            }
            RunConfig::SweepLevels(c) => {
                c.physics.echo(&mut e, Some(c.grid.axis));
                c.grid.echo(&mut e);
                e.int("k", c.k);
                e.int("n_max", c.n_max);
                e.text("offset", if c.offset { "true" } else { "false" });
            }
            RunConfig::Ground(c) => {
                c.physics.echo(&mut e, None);
                e.text("resolution", resolution_name(c.resolution));
                if let Some(pk) = c.pk {
                    e.int("pk", pk);
                }
            }
            RunConfig::SweepEntropy(c) => {
                c.physics.echo(&mut e, Some(c.grid.axis));
                c.grid.echo(&mut e);
                e.int("n_max", c.n_max);
                e.text("resolution", resolution_name(c.resolution));
            }
            RunConfig::Equivalence(c) => {
                e.int("seed", c.seed as usize);
                e.int("configs", c.configs);
                e.float("coupling", c.coupling);
                e.int("n_max", c.n_max);
                e.int("k", c.k);
            }
            RunConfig::Analytic(c) => {
                e.float("lambda", c.lambda);
                e.float("mu", c.mu);
                e.int("resonance", c.resonance);
                e.float("nbar", c.nbar);
                e.float("tmax", c.tmax);
                e.int("samples", c.samples);
            }
        }
        e
    }
}

/// Ordered `key = value` pairs for output metadata.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Echo {
    pub pairs: Vec<(String, String)>,
}

impl Echo {
    pub fn text(&mut self, key: &str, value: &str) {
        self.pairs.push((key.to_string(), value.to_string()));
    }

    pub fn float(&mut self, key: &str, value: f64) {
        self.text(key, &format_float(value));
    }

    pub fn int(&mut self, key: &str, value: usize) {
        self.text(key, &value.to_string());
    }
}

/// Shortest representation that parses back to the same `f64`.
pub fn format_float(x: f64) -> String {
    let a = x.abs();
    if x == 0.0 || (1e-4..1e15).contains(&a) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}
