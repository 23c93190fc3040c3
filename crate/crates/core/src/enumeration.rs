//! Locate every solution by repeated interference runs.
//!
//! Each round runs the two-arm circuit on the uniform spread, confirms any
//! measured candidate classically, and excludes newly found solutions so
//! they cancel in later rounds. In exact mode the loop stops once the
//! analytic post-selection weight falls below [`RESIDUAL_TOL`]; in sampled
//! mode it stops after a streak of failed post-selections.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::interferometer::{ancilla_circuit, measure_joint, uniform_spread};
use crate::oracle::{verify_candidate, Oracle, SolutionSet};
use crate::state::BasisState;

pub const RESIDUAL_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnumerationConfig {
    pub max_rounds: u64,
    /// Consecutive post-selection failures that end a sampled-mode run.
    pub failure_streak_limit: u32,
    pub exact_mode: bool,
    pub seed: u64,
}

impl Default for EnumerationConfig {
    fn default() -> Self {
        Self {
            max_rounds: 10_000,
            failure_streak_limit: 20,
            exact_mode: true,
            seed: 0,
        }
    }
}

impl EnumerationConfig {
    pub fn validate(&self) -> Result<()> {
        if self.max_rounds == 0 {
            return Err(Error::argument("max_rounds must be positive"));
        }
        if self.failure_streak_limit == 0 {
            return Err(Error::argument("failure_streak_limit must be positive"));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Termination {
    ResidualZero,
    FailureStreak,
    RoundBudget,
}

impl Termination {
    pub fn as_str(&self) -> &'static str {
        match self {
            Termination::ResidualZero => "ResidualZero",
            Termination::FailureStreak => "FailureStreak",
            Termination::RoundBudget => "RoundBudget",
        }
    }
}

impl std::str::FromStr for Termination {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ResidualZero" => Ok(Termination::ResidualZero),
            "FailureStreak" => Ok(Termination::FailureStreak),
            "RoundBudget" => Ok(Termination::RoundBudget),
            _ => Err(Error::argument(format!("unknown termination '{s}'"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RoundRecord {
    /// 1-based.
    pub round: u64,
    pub success_probability: f64,
    pub post_selected: bool,
    pub measured: Option<BasisState>,
    pub verified: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EnumerationReport {
    pub n_qubits: usize,
    pub seed: u64,
    pub found: SolutionSet,
    pub rounds: Vec<RoundRecord>,
    pub termination: Termination,
}

impl EnumerationReport {
    /// Post-selected rounds whose verified outcome had already been found.
    pub fn repeat_count(&self) -> usize {
        let mut seen = SolutionSet::new();
        self.rounds
            .iter()
            .filter_map(|r| r.measured.filter(|_| r.verified))
            .filter(|m| !seen.insert(*m).unwrap_or(false))
            .count()
    }

    /// Equality with probabilities compared to relative tolerance `rel_tol`;
    /// every other field must match exactly.
    pub fn matches_within(&self, other: &EnumerationReport, rel_tol: f64) -> bool {
        self.n_qubits == other.n_qubits
            && self.seed == other.seed
            && self.found == other.found
            && self.termination == other.termination
            && self.rounds.len() == other.rounds.len()
            && self.rounds.iter().zip(&other.rounds).all(|(a, b)| {
                let scale = a.success_probability.abs().max(b.success_probability.abs());
                a.round == b.round
                    && a.post_selected == b.post_selected
                    && a.measured == b.measured
                    && a.verified == b.verified
                    && (a.success_probability - b.success_probability).abs() <= rel_tol * scale
            })
    }

    /// Rounds that contributed a new solution, in order.
    pub fn discovery_rounds(&self) -> Vec<&RoundRecord> {
        let mut seen = SolutionSet::new();
        self.rounds
            .iter()
            .filter(|r| match r.measured {
                Some(m) if r.verified => seen.insert(m).unwrap_or(false),
                _ => false,
            })
            .collect()
    }
}

/// Runs the enumeration with a generator seeded from `cfg.seed`.
pub fn enumerate_solutions(o: &Oracle, cfg: &EnumerationConfig) -> Result<EnumerationReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    enumerate_solutions_with_rng(o, cfg, &mut rng)
}

pub fn enumerate_solutions_with_rng<R: Rng + ?Sized>(
    o: &Oracle,
    cfg: &EnumerationConfig,
    rng: &mut R,
) -> Result<EnumerationReport> {
    cfg.validate()?;
    let psi = uniform_spread(o.n_vars())?;
    let mut current = o.clone();
    let mut found = SolutionSet::new();
    let mut rounds = Vec::new();
    let mut streak = 0u32;

    let termination = loop {
        if rounds.len() as u64 >= cfg.max_rounds {
            break Termination::RoundBudget;
        }
        let round = rounds.len() as u64 + 1;
        let joint = ancilla_circuit(&psi, &current)?;
        let weight = joint.branch_weight(false);

        if cfg.exact_mode && weight < RESIDUAL_TOL {
            rounds.push(RoundRecord {
                round,
                success_probability: weight.max(0.0),
                post_selected: false,
                measured: None,
                verified: false,
            });
            break Termination::ResidualZero;
        }

        let outcome = measure_joint(&joint, rng)?;
        let verified = match &outcome.measured {
            Some(m) => verify_candidate(o, m)?,
            None => false,
        };
        if outcome.post_selected {
            streak = 0;
            if let (Some(m), true) = (outcome.measured, verified) {
                if found.insert(m)? {
                    current = current.exclude(&m)?;
                }
            }
        } else {
            streak += 1;
        }
        rounds.push(RoundRecord {
            round,
            success_probability: outcome.success_probability,
            post_selected: outcome.post_selected,
            measured: outcome.measured,
            verified,
        });
        if !cfg.exact_mode && streak >= cfg.failure_streak_limit {
            break Termination::FailureStreak;
        }
    };

    Ok(EnumerationReport {
        n_qubits: o.n_vars(),
        seed: cfg.seed,
        found,
        rounds,
        termination,
    })
}
