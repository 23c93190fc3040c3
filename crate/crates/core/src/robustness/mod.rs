//! Noise experiments on the interference pipeline and a Grover baseline.
//!
//! Analogue noise (Gaussian amplitude jitter) and digital noise (independent
//! bit flips) are compared at matched state disturbance: the bit-flip
//! probability is calibrated so that the expected l2 distance it causes on
//! the noisy stage equals that of a given amplitude jitter.

pub mod grover;
pub mod noise;
pub mod sweep;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub use grover::{
    analytic_success, grover_search, grover_shots, grover_state, optimal_grover_iterations,
    GroverOutcome, GroverShots, Iterations,
};
pub use noise::{amplitude_noise, bitflip_noise, NoiseModel, NoiseSpec};
pub use sweep::{
    run_noise_trial, sweep, trial_seed, NoiseInsertion, SweepConfig, SweepPoint, SweepResult,
    TrialRecord,
};

use crate::error::{Error, Result};
use crate::interferometer::{mark_arm, split_arms, uniform_spread};
use crate::oracle::Oracle;
use crate::state::Statevector;

/// The state the noise channel acts on for a given insertion point.
pub fn noisy_stage_state(o: &Oracle, insertion: NoiseInsertion) -> Result<Statevector> {
    let psi = uniform_spread(o.n_vars())?;
    match insertion {
        NoiseInsertion::AfterSpread => Ok(psi),
        NoiseInsertion::AfterOracle => {
            let mut joint = split_arms(&psi);
            mark_arm(&mut joint, o)?;
            Ok(joint.into_state())
        }
    }
}

/// Monte Carlo mean of `‖noise(φ) − φ‖` for the amplitude channel.
pub fn mean_amplitude_disturbance(
    phi: &Statevector,
    epsilon: f64,
    draws: u64,
    seed: u64,
) -> Result<f64> {
    if draws == 0 {
        return Err(Error::argument("draws must be positive"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut total = 0.0;
    for _ in 0..draws {
        total += amplitude_noise(phi, epsilon, &mut rng)?.l2_distance(phi)?;
    }
    Ok(total / draws as f64)
}

/// Exact `E‖X_f φ − φ‖` over all flip patterns `f` at per-qubit probability `p`.
pub fn expected_bitflip_disturbance(phi: &Statevector, p: f64) -> Result<f64> {
    let n = phi.n_qubits();
    if n > 16 {
        return Err(Error::QubitCap {
            requested: n,
            limit: 16,
        });
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::argument(format!(
            "flip probability {p} outside [0, 1]"
        )));
    }
    let mut expected = 0.0;
    for pattern in 1u64..1 << n {
        let flips = pattern.count_ones() as i32;
        let weight = p.powi(flips) * (1.0 - p).powi(n as i32 - flips);
        if weight == 0.0 {
            continue;
        }
        let mut flipped = phi.clone();
        for q in (0..n).filter(|q| pattern >> q & 1 == 1) {
            flipped.x_mut(q);
        }
        expected += weight * flipped.l2_distance(phi)?;
    }
    Ok(expected)
}

#[derive(Clone, Debug, PartialEq)]
pub struct Calibration {
    pub epsilon: f64,
    pub flip_probability: f64,
    /// Matched expected l2 disturbance.
    pub disturbance: f64,
}

/// Finds the bit-flip probability in `[0, ½]` whose expected disturbance on
/// the noisy stage matches amplitude jitter `epsilon`, by bisection.
pub fn calibrate_bitflip(
    o: &Oracle,
    epsilon: f64,
    insertion: NoiseInsertion,
    draws: u64,
    seed: u64,
) -> Result<Calibration> {
    let phi = noisy_stage_state(o, insertion)?;
    let target = mean_amplitude_disturbance(&phi, epsilon, draws, seed)?;
    let (mut lo, mut hi) = (0.0f64, 0.5f64);
    if expected_bitflip_disturbance(&phi, hi)? < target {
        return Err(Error::argument(format!(
            "no flip probability up to 0.5 reaches disturbance {target}"
        )));
    }
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if expected_bitflip_disturbance(&phi, mid)? < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(Calibration {
        epsilon,
        flip_probability: 0.5 * (lo + hi),
        disturbance: target,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::SolutionSet;
    use crate::state::BasisState;

    #[test]
    fn bitflip_disturbance_of_basis_state() {
        // Any nonempty flip pattern moves a basis state to an orthogonal one: distance √2.
        let phi = Statevector::basis("01".parse::<BasisState>().unwrap());
        let p = 0.2;
        let d = expected_bitflip_disturbance(&phi, p).unwrap();
        let expected = (1.0 - (1.0 - p) * (1.0 - p)) * 2f64.sqrt();
        assert!((d - expected).abs() < 1e-12);
        assert_eq!(expected_bitflip_disturbance(&phi, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn uniform_spread_is_flip_invariant() {
        let phi = uniform_spread(4).unwrap();
        assert!(expected_bitflip_disturbance(&phi, 0.3).unwrap() < 1e-12);
    }

    #[test]
    fn calibration_matches_disturbance() {
        let o =
            Oracle::from_truth_table(&SolutionSet::from_bitstrings(&["001", "011"]).unwrap(), 3)
                .unwrap();
        let cal = calibrate_bitflip(&o, 0.05, NoiseInsertion::AfterOracle, 2000, 1).unwrap();
        let phi = noisy_stage_state(&o, NoiseInsertion::AfterOracle).unwrap();
        let d = expected_bitflip_disturbance(&phi, cal.flip_probability).unwrap();
        assert!((d - cal.disturbance).abs() < 1e-9);
        assert!(cal.flip_probability > 0.0 && cal.flip_probability < 0.5);
        // The uniform spread cannot be disturbed by flips at all.
        assert!(calibrate_bitflip(&o, 0.05, NoiseInsertion::AfterSpread, 100, 1).is_err());
    }
}
