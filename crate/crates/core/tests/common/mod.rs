#![allow(dead_code)]

use iqc::oracle::{CnfFormula, Oracle, SolutionSet};
use iqc::BasisState;
use rand::Rng;

pub fn table_oracle(bits: &[&str], n: usize) -> Oracle {
    Oracle::from_truth_table(&SolutionSet::from_bitstrings(bits).unwrap(), n).unwrap()
}

pub fn worked_example() -> Oracle {
    table_oracle(&["001", "011"], 3)
}

/// Truth-table oracle where each state is a solution with probability `density`.
pub fn random_table<R: Rng>(n: usize, density: f64, rng: &mut R) -> Oracle {
    let sols = SolutionSet::from_states(
        (0..1u64 << n)
            .filter(|_| rng.random_bool(density))
            .map(|x| BasisState::new(x, n).unwrap()),
    )
    .unwrap();
    Oracle::from_truth_table(&sols, n).unwrap()
}

pub fn random_cnf<R: Rng>(n: usize, rng: &mut R) -> Oracle {
    let n_clauses = rng.random_range(0..=2 * n);
    let clauses = (0..n_clauses)
        .map(|_| {
            (0..rng.random_range(1..=3))
                .map(|_| {
                    let v = rng.random_range(1..=n as i32);
                    if rng.random_bool(0.5) {
                        -v
                    } else {
                        v
                    }
                })
                .collect()
        })
        .collect();
    Oracle::from_cnf(&CnfFormula::new(n, clauses).unwrap()).unwrap()
}

/// Excludes a random subset of the oracle's solutions.
pub fn with_random_exclusions<R: Rng>(o: Oracle, rng: &mut R) -> Oracle {
    let sols = o.brute_force_solutions().unwrap();
    sols.iter().fold(o, |acc, s| {
        if rng.random_bool(0.3) {
            acc.exclude(s).unwrap()
        } else {
            acc
        }
    })
}

/// |count - n p| within `k` binomial standard deviations.
pub fn within_binomial(count: u64, trials: u64, p: f64, k: f64) -> bool {
    let sd = (trials as f64 * p * (1.0 - p)).sqrt();
    (count as f64 - trials as f64 * p).abs() <= k * sd
}
