//! Textbook Grover search, used as a baseline.
//!
//! [`Oracle`] marks non-solutions with −1. The textbook oracle marks
//! solutions instead; the two differ by a global phase of −1, so
//! [`textbook_oracle`] is a negation of [`Oracle::apply_phase_oracle`].
//! Excluded states count as non-solutions here as everywhere else.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::interferometer::uniform_spread;
use crate::oracle::Oracle;
use crate::state::{BasisState, ShotHistogram, Statevector};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Iterations {
    Auto,
    Fixed(u64),
}

#[derive(Clone, Debug, PartialEq)]
pub struct GroverOutcome {
    pub iterations: u64,
    /// Closed form `sin²((2k+1)θ)`, `sin θ = √(M/N)`.
    pub success_probability: f64,
    /// Weight on solutions in the simulated final state.
    pub simulated_probability: f64,
    pub measured: BasisState,
    pub hit: bool,
}

/// Solutions pick up −1, everything else +1.
pub fn textbook_oracle(o: &Oracle, psi: &Statevector) -> Result<Statevector> {
    let mut out = o.apply_phase_oracle(psi)?;
    out.scale(-1.0);
    Ok(out)
}

/// Inversion about the mean, `2|s⟩⟨s| − I`.
pub fn diffuse(psi: &Statevector) -> Statevector {
    let mean: Complex64 = psi.amplitudes().iter().sum::<Complex64>() / psi.dim() as f64;
    let mut out = psi.clone();
    for a in out.amps_mut() {
        *a = mean * 2.0 - *a;
    }
    out
}

pub fn analytic_success(n_states: u64, n_solutions: u64, iterations: u64) -> f64 {
    let theta = (n_solutions as f64 / n_states as f64).sqrt().asin();
    ((2 * iterations + 1) as f64 * theta).sin().powi(2)
}

/// `round(π / (4θ) − ½)` floored at zero.
pub fn optimal_grover_iterations(n_states: u64, n_solutions: u64) -> Result<u64> {
    if n_solutions == 0 {
        return Err(Error::argument(
            "optimal iteration count needs at least one solution",
        ));
    }
    if n_solutions > n_states {
        return Err(Error::argument(format!(
            "{n_solutions} solutions exceed {n_states} states"
        )));
    }
    let theta = (n_solutions as f64 / n_states as f64).sqrt().asin();
    Ok((PI / (4.0 * theta) - 0.5).round().max(0.0) as u64)
}

/// Uniform spread followed by `k` Grover iterations.
pub fn grover_state(o: &Oracle, k: u64) -> Result<Statevector> {
    let mut psi = uniform_spread(o.n_vars())?;
    for _ in 0..k {
        psi = diffuse(&textbook_oracle(o, &psi)?);
    }
    Ok(psi)
}

pub fn resolve_iterations(o: &Oracle, iterations: Iterations) -> Result<u64> {
    match iterations {
        Iterations::Fixed(k) => Ok(k),
        Iterations::Auto => {
            optimal_grover_iterations(1 << o.n_vars(), o.remaining_solution_count()?)
        }
    }
}

pub fn grover_search<R: Rng + ?Sized>(
    o: &Oracle,
    iterations: Iterations,
    rng: &mut R,
) -> Result<GroverOutcome> {
    let k = resolve_iterations(o, iterations)?;
    let psi = grover_state(o, k)?;
    let simulated_probability = solution_weight(o, &psi);
    let measured = psi.measure_all(rng)?;
    Ok(GroverOutcome {
        iterations: k,
        success_probability: analytic_success(1 << o.n_vars(), o.remaining_solution_count()?, k),
        simulated_probability,
        measured,
        hit: !o.flips_index(measured.index()),
    })
}

/// Many measurements of one Grover state.
#[derive(Clone, Debug, PartialEq)]
pub struct GroverShots {
    pub iterations: u64,
    pub success_probability: f64,
    pub simulated_probability: f64,
    pub histogram: ShotHistogram,
    /// Shots that landed on a (non-excluded) solution.
    pub hits: u64,
}

pub fn grover_shots<R: Rng + ?Sized>(
    o: &Oracle,
    iterations: Iterations,
    shots: u64,
    rng: &mut R,
) -> Result<GroverShots> {
    let k = resolve_iterations(o, iterations)?;
    let psi = grover_state(o, k)?;
    let histogram = psi.sample(shots, rng)?;
    let hits = histogram
        .counts
        .iter()
        .filter(|(s, _)| !o.flips_index(s.index()))
        .map(|(_, c)| *c)
        .sum();
    Ok(GroverShots {
        iterations: k,
        success_probability: analytic_success(1 << o.n_vars(), o.remaining_solution_count()?, k),
        simulated_probability: solution_weight(o, &psi),
        histogram,
        hits,
    })
}

pub fn solution_weight(o: &Oracle, psi: &Statevector) -> f64 {
    psi.amplitudes()
        .iter()
        .enumerate()
        .filter(|(x, _)| !o.flips_index(*x as u64))
        .map(|(_, a)| a.norm_sqr())
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::SolutionSet;
    use crate::state::EXACT_TOL;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn oracle(bits: &[&str], n: usize) -> Oracle {
        Oracle::from_truth_table(&SolutionSet::from_bitstrings(bits).unwrap(), n).unwrap()
    }

    #[test]
    fn three_qubits_two_iterations() {
        let o = oracle(&["101"], 3);
        let psi = grover_state(&o, 2).unwrap();
        let sim = solution_weight(&o, &psi);
        let closed = analytic_success(8, 1, 2);
        assert!((closed - 0.9453125).abs() < 1e-9, "{closed}");
        assert!((sim - closed).abs() < 1e-9);
    }

    #[test]
    fn two_qubits_one_iteration_is_certain() {
        let o = oracle(&["10"], 2);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let out = grover_search(&o, Iterations::Fixed(1), &mut rng).unwrap();
        assert!((out.success_probability - 1.0).abs() < EXACT_TOL);
        assert!((out.simulated_probability - 1.0).abs() < EXACT_TOL);
        assert!(out.hit);
    }

    #[test]
    fn zero_iterations_is_uniform_guess() {
        let o = oracle(&["001", "011", "111"], 3);
        assert!((analytic_success(8, 3, 0) - 3.0 / 8.0).abs() < EXACT_TOL);
        let psi = grover_state(&o, 0).unwrap();
        assert!((solution_weight(&o, &psi) - 3.0 / 8.0).abs() < EXACT_TOL);
    }

    #[test]
    fn optimal_iterations() {
        assert_eq!(optimal_grover_iterations(8, 1).unwrap(), 2);
        assert_eq!(optimal_grover_iterations(4, 1).unwrap(), 1);
        assert_eq!(optimal_grover_iterations(16, 16).unwrap(), 0);
        assert!(optimal_grover_iterations(8, 0).is_err());
    }

    #[test]
    fn optimum_maximizes_simulated_success() {
        // Cross-check the closed form against simulated success over k in 0..=5.
        for (bits, n) in [(vec!["011"], 3), (vec!["01"], 2)] {
            let o = oracle(&bits, n);
            let probs: Vec<f64> = (0..=5u64)
                .map(|k| solution_weight(&o, &grover_state(&o, k).unwrap()))
                .collect();
            let max = probs.iter().cloned().fold(0.0, f64::max);
            // first maximizer; for N = 4 the success is periodic and ties at k = 4
            let best = probs.iter().position(|&p| p > max - 1e-12).unwrap() as u64;
            assert_eq!(best, optimal_grover_iterations(1 << n, 1).unwrap());
        }
    }

    #[test]
    fn auto_without_solutions_is_an_error() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert!(grover_search(&oracle(&[], 3), Iterations::Auto, &mut rng).is_err());
        let out = grover_search(&oracle(&["110"], 3), Iterations::Auto, &mut rng).unwrap();
        assert_eq!(out.iterations, 2);
    }

    #[test]
    fn textbook_oracle_is_global_negation() {
        let o = oracle(&["01"], 2);
        let psi = uniform_spread(2).unwrap();
        let t = textbook_oracle(&o, &psi).unwrap();
        let signs: Vec<f64> = t.amplitudes().iter().map(|a| a.re.signum()).collect();
        assert_eq!(signs, [1.0, -1.0, 1.0, 1.0]);
    }
}
