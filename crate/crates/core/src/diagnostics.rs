use std::fmt;

/// Non-fatal conditions that make a result less trustworthy.
#[derive(Debug, Clone, PartialEq)]
pub enum Diagnostic {
    /// `|Delta| << omega < eps_e - eps_g` does not hold.
    OutsideThreeLevelRegime { delta: f64, omega: f64, omega0: f64 },
    /// `|delta_n| < 0.1 omega` does not hold.
    OffResonance { n: usize, detuning: f64 },
    /// The resonant solution was used away from exact resonance.
    NotExactlyResonant { n: usize, detuning: f64 },
    /// `|V_N(n)| / omega` above the validity threshold.
    StrongTransitionElement { manifold: usize, ratio: f64 },
    /// Collapse-time estimate used with a small mean photon number.
    FewPhotons { nbar: f64 },
    /// Truncation tail above the safety threshold during a run.
    TruncationTail { max_tail: f64 },
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Diagnostic::OutsideThreeLevelRegime { delta, omega, omega0 } => write!(
                f,
                "regime |Delta| << omega < omega0 not satisfied (Delta = {delta}, omega = {omega}, omega0 = {omega0})"
            ),
            Diagnostic::OffResonance { n, detuning } => {
                write!(f, "{n}-photon detuning {detuning} is not small compared with omega")
            }
            Diagnostic::NotExactlyResonant { n, detuning } => write!(
                f,
                "resonant solution assumes exact {n}-photon resonance but detuning is {detuning}"
            ),
            Diagnostic::StrongTransitionElement { manifold, ratio } => write!(
                f,
                "|V_N|/omega = {ratio} at N = {manifold}; resonant approximation needs |V_N| << omega"
            ),
            Diagnostic::FewPhotons { nbar } => {
                write!(f, "collapse-time estimate needs a large mean photon number (nbar = {nbar})")
            }
            Diagnostic::TruncationTail { max_tail } => {
                write!(f, "population of the highest Fock state reached {max_tail:e}")
            }
        }
    }
}
