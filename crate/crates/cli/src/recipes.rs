//! Built-in parameter sets for the reference plots.
//!
//! Resonant time evolutions are tuned with `resonance = n`, which places the
//! bare transition at `n - mu^2` so the displaced ladder is exactly resonant.
//! The level sweeps keep the nominal `omega0 = n`.

use crate::config::Scenario;

#[derive(Debug)]
pub struct Recipe {
    pub name: &'static str,
    pub scenario: Scenario,
    /// Plot parameters, as listed by `qutrit recipes`.
    pub summary: &'static str,
    pub values: &'static [(&'static str, &'static str)],
    /// Caveat copied into output metadata.
    pub note: Option<&'static str>,
}

const DEEP_STRONG_DELTA: &str = "delta = 0.1 is the value fixed for the deep-strong coupling study";
const WEAK_SWEEP_DELTA: &str = "delta = 0.01 for the weak-coupling level sweeps; the deep-strong runs use delta = 0.1";

pub const RECIPES: &[Recipe] = &[
    Recipe {
        name: "fig2",
        scenario: Scenario::Evolve,
        summary: "two-photon resonance, lambda=0.02, mu=0.1, |e,0>, P_N(t)",
        values: &[("lambda", "0.02"), ("mu", "0.1"), ("resonance", "2"), ("nbar", "0"), ("tmax", "500"), ("pk", "4")],
        note: None,
    },
    Recipe {
        name: "fig3",
        scenario: Scenario::Evolve,
        summary: "three-photon resonance, lambda=0.02, mu=0.2, |e,0>, P_N(t)",
        values: &[("lambda", "0.02"), ("mu", "0.2"), ("resonance", "3"), ("nbar", "0"), ("tmax", "1500"), ("pk", "5")],
        note: None,
    },
    Recipe {
        name: "fig4a",
        scenario: Scenario::Evolve,
        summary: "collapse and revival, two-photon, lambda=0.02, mu=0.1, nbar=20",
        values: &[("lambda", "0.02"), ("mu", "0.1"), ("resonance", "2"), ("nbar", "20"), ("tmax", "250"), ("pk", "0")],
        note: None,
    },
    Recipe {
        name: "fig4b",
        scenario: Scenario::Evolve,
        summary: "collapse and revival, three-photon, lambda=0.02, mu=0.2, nbar=30",
        values: &[("lambda", "0.02"), ("mu", "0.2"), ("resonance", "3"), ("nbar", "30"), ("tmax", "250"), ("pk", "0")],
        note: None,
    },
    Recipe {
        name: "fig4c",
        scenario: Scenario::Evolve,
        summary: "collapse and revival, four-photon, lambda=0.02, mu=0.2, nbar=50",
        values: &[("lambda", "0.02"), ("mu", "0.2"), ("resonance", "4"), ("nbar", "50"), ("tmax", "300"), ("pk", "0")],
        note: None,
    },
    Recipe {
        name: "fig5",
        scenario: Scenario::Evolve,
        summary: "Mandel Q for the fig4b setup",
        values: &[("lambda", "0.02"), ("mu", "0.2"), ("resonance", "3"), ("nbar", "30"), ("tmax", "250"), ("pk", "0")],
        note: None,
    },
    Recipe {
        name: "fig6",
        scenario: Scenario::SweepLevels,
        summary: "omega0=2, mu=0.3, delta=0.01, sweep lambda 0..0.1, k=13",
        values: &[
            ("omega0", "2"),
            ("mu", "0.3"),
            ("delta", "0.01"),
            ("sweep", "lambda"),
            ("from", "0"),
            ("to", "0.1"),
            ("points", "101"),
            ("k", "13"),
            ("n_max", "60"),
        ],
        note: Some(WEAK_SWEEP_DELTA),
    },
    Recipe {
        name: "fig7",
        scenario: Scenario::SweepLevels,
        summary: "omega0=3, mu=0.3, delta=0.01, sweep lambda 0..0.1, k=12",
        values: &[
            ("omega0", "3"),
            ("mu", "0.3"),
            ("delta", "0.01"),
            ("sweep", "lambda"),
            ("from", "0"),
            ("to", "0.1"),
            ("points", "101"),
            ("k", "12"),
            ("n_max", "60"),
        ],
        note: Some(WEAK_SWEEP_DELTA),
    },
    Recipe {
        name: "fig8",
        scenario: Scenario::SweepLevels,
        summary: "omega0=10, mu=3, delta=0.1, sweep lambda 0..4, ground energy",
        values: &[
            ("omega0", "10"),
            ("mu", "3"),
            ("delta", "0.1"),
            ("sweep", "lambda"),
            ("from", "0"),
            ("to", "4"),
            ("points", "81"),
            ("k", "1"),
            ("n_max", "200"),
        ],
        note: Some(DEEP_STRONG_DELTA),
    },
    Recipe {
        name: "fig9",
        scenario: Scenario::Ground,
        summary: "omega0=10, mu=3, lambda=1, delta=0.1",
        values: &[("omega0", "10"), ("mu", "3"), ("lambda", "1"), ("delta", "0.1")],
        note: Some(DEEP_STRONG_DELTA),
    },
    Recipe {
        name: "fig10",
        scenario: Scenario::Ground,
        summary: "omega0=10, mu=3, lambda=2, delta=0.1",
        values: &[("omega0", "10"), ("mu", "3"), ("lambda", "2"), ("delta", "0.1")],
        note: Some(DEEP_STRONG_DELTA),
    },
    Recipe {
        name: "fig11",
        scenario: Scenario::SweepEntropy,
        summary: "omega0=10, mu=3, delta=0.1, sweep lambda 0..6, S3",
        values: &[
            ("omega0", "10"),
            ("mu", "3"),
            ("delta", "0.1"),
            ("sweep", "lambda"),
            ("from", "0"),
            ("to", "6"),
            ("points", "61"),
        ],
        note: Some(DEEP_STRONG_DELTA),
    },
    Recipe {
        name: "fig12",
        scenario: Scenario::SweepEntropy,
        summary: "omega0=10, lambda=2, delta=0.1, sweep mu 0..4, S3",
        values: &[
            ("omega0", "10"),
            ("lambda", "2"),
            ("delta", "0.1"),
            ("sweep", "mu"),
            ("from", "0"),
            ("to", "4"),
            ("points", "41"),
        ],
        note: Some(DEEP_STRONG_DELTA),
    },
];

pub fn find(name: &str) -> Option<&'static Recipe> {
    RECIPES.iter().find(|r| r.name == name)
}

/// One line per recipe: `name: summary (scenario)`.
pub fn listing() -> String {
    RECIPES
        .iter()
        .map(|r| format!("{}: {} ({})\n", r.name, r.summary, r.scenario))
        .collect()
}
