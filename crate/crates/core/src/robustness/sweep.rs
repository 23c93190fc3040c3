//! Noisy interference trials and parameter sweeps.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::interferometer::{
    ancilla_circuit, mark_arm, measure_joint, recombine, split_arms, uniform_spread,
    InterferenceOutcome,
};
use crate::oracle::{verify_candidate, Oracle};

use super::noise::NoiseSpec;

/// Where the noise channel acts in the interference pipeline.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum NoiseInsertion {
    /// On the data register right after the Hadamard spread. The two-arm
    /// sum projects onto the solution subspace afterwards, so disturbances
    /// here change the post-selection rate but never the post-selected support.
    AfterSpread,
    /// On the whole joint register after the marked arm, before recombination.
    #[default]
    AfterOracle,
}

impl NoiseInsertion {
    pub fn as_str(&self) -> &'static str {
        match self {
            NoiseInsertion::AfterSpread => "after-spread",
            NoiseInsertion::AfterOracle => "after-oracle",
        }
    }
}

impl fmt::Display for NoiseInsertion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for NoiseInsertion {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "after-spread" => Ok(NoiseInsertion::AfterSpread),
            "after-oracle" => Ok(NoiseInsertion::AfterOracle),
            _ => Err(Error::argument(format!(
                "unknown insertion point '{s}', expected after-spread or after-oracle"
            ))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrialRecord {
    pub noise: NoiseSpec,
    pub post_selected: bool,
    /// Post-selected and the measured state satisfies the predicate.
    pub hit: bool,
    pub seed: u64,
}

/// One noisy interference run. Uses the generator exactly as
/// [`crate::interferometer::interfere_and_measure`] does, plus whatever the
/// noise channel draws (nothing at magnitude zero).
pub fn run_noise_trial_with_rng<R: Rng + ?Sized>(
    o: &Oracle,
    noise: &NoiseSpec,
    insertion: NoiseInsertion,
    rng: &mut R,
) -> Result<InterferenceOutcome> {
    let psi = uniform_spread(o.n_vars())?;
    let joint = match insertion {
        NoiseInsertion::AfterSpread => {
            let noisy = noise.apply(&psi, rng)?;
            ancilla_circuit(&noisy, o)?
        }
        NoiseInsertion::AfterOracle => {
            let mut joint = split_arms(&psi);
            mark_arm(&mut joint, o)?;
            let noisy = noise.apply(joint.state(), rng)?;
            *joint.state_mut() = noisy;
            recombine(&mut joint);
            joint
        }
    };
    measure_joint(&joint, rng)
}

pub fn run_noise_trial(
    o: &Oracle,
    noise: &NoiseSpec,
    insertion: NoiseInsertion,
    seed: u64,
) -> Result<TrialRecord> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let out = run_noise_trial_with_rng(o, noise, insertion, &mut rng)?;
    let hit = match &out.measured {
        Some(m) => verify_candidate(o, m)?,
        None => false,
    };
    Ok(TrialRecord {
        noise: *noise,
        post_selected: out.post_selected,
        hit,
        seed,
    })
}

/// Per-trial seed for grid point `point`, trial `trial` under `root`:
/// two rounds of SplitMix64 finalization over the mixed coordinates.
pub fn trial_seed(root: u64, point: u64, trial: u64) -> u64 {
    let a = splitmix64(root ^ splitmix64(point.wrapping_add(0x632b_e59b_d9b4_e019)));
    splitmix64(a ^ trial.wrapping_mul(0x9e37_79b9_7f4a_7c15))
}

fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepPoint {
    pub noise: NoiseSpec,
    pub trials: u64,
    pub post_selected: u64,
    pub hits: u64,
}

impl SweepPoint {
    pub fn post_rate(&self) -> f64 {
        self.post_selected as f64 / self.trials as f64
    }

    /// Hits among post-selected trials; 0 when nothing was post-selected.
    pub fn hit_rate(&self) -> f64 {
        if self.post_selected == 0 {
            0.0
        } else {
            self.hits as f64 / self.post_selected as f64
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepConfig {
    pub trials: u64,
    pub seed: u64,
    pub insertion: NoiseInsertion,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepResult {
    pub seed: u64,
    pub insertion: NoiseInsertion,
    pub points: Vec<SweepPoint>,
}

/// Runs `cfg.trials` seeded trials per grid point. Trials run in parallel;
/// the result depends only on the inputs.
pub fn sweep(o: &Oracle, grid: &[NoiseSpec], cfg: &SweepConfig) -> Result<SweepResult> {
    if grid.is_empty() {
        return Err(Error::argument("sweep grid is empty"));
    }
    if cfg.trials == 0 {
        return Err(Error::argument("trials must be positive"));
    }
    let points = grid
        .iter()
        .enumerate()
        .map(|(i, noise)| {
            let records = (0..cfg.trials)
                .into_par_iter()
                .map(|t| {
                    run_noise_trial(o, noise, cfg.insertion, trial_seed(cfg.seed, i as u64, t))
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(SweepPoint {
                noise: *noise,
                trials: cfg.trials,
                post_selected: records.iter().filter(|r| r.post_selected).count() as u64,
                hits: records.iter().filter(|r| r.hit).count() as u64,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepResult {
        seed: cfg.seed,
        insertion: cfg.insertion,
        points,
    })
}
