//! Decision functions over n-bit strings and their sign-marking action.
//!
//! The marking convention follows the interference scheme rather than the
//! textbook Grover oracle: states that fail the predicate (and solutions that
//! have been excluded) pick up a factor −1, accepted states keep +1.

mod dimacs;
mod table;

use std::collections::{BTreeSet, HashSet};
use std::sync::Arc;

use num_complex::Complex64;

pub use dimacs::{parse_dimacs, CnfFormula};
pub use table::{parse_truth_table, to_truth_table};

use crate::error::{Error, Result};
use crate::state::{check_cap, max_qubits, BasisState, Statevector};

/// Set of equal-width basis states.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SolutionSet {
    members: BTreeSet<BasisState>,
}

impl SolutionSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_states<I: IntoIterator<Item = BasisState>>(states: I) -> Result<Self> {
        let mut set = Self::new();
        for s in states {
            set.insert(s)?;
        }
        Ok(set)
    }

    /// Convenience constructor from bitstrings such as `["001", "011"]`.
    pub fn from_bitstrings<S: AsRef<str>>(bits: &[S]) -> Result<Self> {
        Self::from_states(
            bits.iter()
                .map(|b| b.as_ref().parse::<BasisState>())
                .collect::<Result<Vec<_>>>()?,
        )
    }

    /// Inserts `state`; returns false if it was already present.
    pub fn insert(&mut self, state: BasisState) -> Result<bool> {
        if let Some(first) = self.members.iter().next() {
            if first.n_qubits() != state.n_qubits() {
                return Err(Error::DimensionMismatch {
                    expected: first.n_qubits(),
                    found: state.n_qubits(),
                });
            }
        }
        Ok(self.members.insert(state))
    }

    pub fn contains(&self, state: &BasisState) -> bool {
        self.members.contains(state)
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &BasisState> {
        self.members.iter()
    }
}

impl<'a> IntoIterator for &'a SolutionSet {
    type Item = &'a BasisState;
    type IntoIter = std::collections::btree_set::Iter<'a, BasisState>;

    fn into_iter(self) -> Self::IntoIter {
        self.members.iter()
    }
}

/// A clause compiled to index bitmasks: satisfied iff `x & pos != 0` or `!x & neg != 0`.
#[derive(Clone, Debug)]
struct MaskClause {
    pos: u64,
    neg: u64,
}

#[derive(Clone, Debug)]
enum Predicate {
    /// Bitset over all 2^n indices.
    Table(Vec<u64>),
    Cnf {
        formula: CnfFormula,
        clauses: Vec<MaskClause>,
    },
}

#[derive(Clone, Debug)]
pub struct Oracle {
    n_vars: usize,
    predicate: Arc<Predicate>,
    excluded: HashSet<u64>,
}

impl Oracle {
    /// Predicate true exactly on `solutions`.
    pub fn from_truth_table(solutions: &SolutionSet, n_vars: usize) -> Result<Self> {
        if n_vars == 0 || n_vars > 63 {
            return Err(Error::argument(format!("n_vars {n_vars} outside 1..=63")));
        }
        if let Some(bad) = solutions.iter().find(|s| s.n_qubits() != n_vars) {
            return Err(Error::argument(format!(
                "solution {bad} has width {}, expected {n_vars}",
                bad.n_qubits()
            )));
        }
        Ok(Self {
            n_vars,
            predicate: Arc::new(Predicate::Table(table_bits(solutions, n_vars)?)),
            excluded: HashSet::new(),
        })
    }

    /// Conjunction of the formula's clauses, variable `i` bound to qubit `i - 1`.
    pub fn from_cnf(formula: &CnfFormula) -> Result<Self> {
        let n = formula.n_vars();
        if n > 63 {
            return Err(Error::QubitCap {
                requested: n,
                limit: 63,
            });
        }
        let clauses = formula
            .clauses()
            .iter()
            .map(|clause| {
                let mut mc = MaskClause { pos: 0, neg: 0 };
                for &lit in clause {
                    let bit = 1u64 << (n - lit.unsigned_abs() as usize);
                    if lit > 0 {
                        mc.pos |= bit;
                    } else {
                        mc.neg |= bit;
                    }
                }
                mc
            })
            .collect();
        Ok(Self {
            n_vars: n,
            predicate: Arc::new(Predicate::Cnf {
                formula: formula.clone(),
                clauses,
            }),
            excluded: HashSet::new(),
        })
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn cnf(&self) -> Option<&CnfFormula> {
        match &*self.predicate {
            Predicate::Cnf { formula, .. } => Some(formula),
            Predicate::Table(_) => None,
        }
    }

    #[inline]
    pub(crate) fn accepts_index(&self, x: u64) -> bool {
        match &*self.predicate {
            Predicate::Table(bits) => bits[(x >> 6) as usize] >> (x & 63) & 1 == 1,
            Predicate::Cnf { clauses, .. } => clauses
                .iter()
                .all(|c| (x & c.pos) != 0 || (!x & c.neg) != 0),
        }
    }

    /// Whether the marked arm flips this index: predicate false or excluded.
    #[inline]
    pub(crate) fn flips_index(&self, x: u64) -> bool {
        !self.accepts_index(x) || (!self.excluded.is_empty() && self.excluded.contains(&x))
    }

    /// The raw predicate, ignoring exclusions.
    pub fn accepts(&self, x: &BasisState) -> Result<bool> {
        self.check_width(x.n_qubits())?;
        Ok(self.accepts_index(x.index()))
    }

    pub fn is_excluded(&self, x: &BasisState) -> bool {
        x.n_qubits() == self.n_vars && self.excluded.contains(&x.index())
    }

    pub fn excluded(&self) -> SolutionSet {
        SolutionSet {
            members: self
                .excluded
                .iter()
                .map(|&i| BasisState::new(i, self.n_vars).expect("excluded index fits"))
                .collect(),
        }
    }

    /// Returns a copy that also flips the sign of the known solution `s`.
    pub fn exclude(&self, s: &BasisState) -> Result<Oracle> {
        if !self.accepts(s)? {
            return Err(Error::argument(format!(
                "cannot exclude {s}: it does not satisfy the predicate"
            )));
        }
        let mut next = self.clone();
        next.excluded.insert(s.index());
        Ok(next)
    }

    /// Every state accepted by the predicate, exclusions ignored.
    pub fn brute_force_solutions(&self) -> Result<SolutionSet> {
        check_cap(self.n_vars, max_qubits())?;
        let members = (0..1u64 << self.n_vars)
            .filter(|&x| self.accepts_index(x))
            .map(|x| BasisState::new(x, self.n_vars).expect("index in range"))
            .collect();
        Ok(SolutionSet { members })
    }

    /// Number of accepted states not yet excluded.
    pub fn remaining_solution_count(&self) -> Result<u64> {
        check_cap(self.n_vars, max_qubits())?;
        Ok((0..1u64 << self.n_vars)
            .filter(|&x| !self.flips_index(x))
            .count() as u64)
    }

    pub fn apply_phase_oracle(&self, psi: &Statevector) -> Result<Statevector> {
        self.check_width(psi.n_qubits())?;
        let mut out = psi.clone();
        self.mark_in_place(out.amps_mut());
        Ok(out)
    }

    /// Negates `amps[x]` wherever the marked arm flips `x`.
    pub(crate) fn mark_in_place(&self, amps: &mut [Complex64]) {
        debug_assert_eq!(amps.len(), 1 << self.n_vars);
        for (x, a) in amps.iter_mut().enumerate() {
            if self.flips_index(x as u64) {
                *a = -*a;
            }
        }
    }

    pub(crate) fn check_width(&self, n: usize) -> Result<()> {
        if n != self.n_vars {
            return Err(Error::DimensionMismatch {
                expected: self.n_vars,
                found: n,
            });
        }
        Ok(())
    }
}

fn table_bits(solutions: &SolutionSet, n_vars: usize) -> Result<Vec<u64>> {
    check_cap(n_vars, max_qubits())?;
    let mut bits = vec![0u64; (1usize << n_vars).div_ceil(64)];
    for s in solutions {
        let x = s.index();
        bits[(x >> 6) as usize] |= 1 << (x & 63);
    }
    Ok(bits)
}

/// Classical confirmation of a measured candidate; exclusions are ignored.
pub fn verify_candidate(o: &Oracle, x: &BasisState) -> Result<bool> {
    o.accepts(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::EXACT_TOL;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn example() -> Oracle {
        let sols = SolutionSet::from_bitstrings(&["001", "011"]).unwrap();
        Oracle::from_truth_table(&sols, 3).unwrap()
    }

    fn bits(set: &SolutionSet) -> Vec<String> {
        set.iter().map(|s| s.to_string()).collect()
    }

    /// Independent oracle: decode the bitstring characters and evaluate clause by clause.
    fn clause_by_clause(f: &CnfFormula, x: &BasisState) -> bool {
        let assignment: Vec<bool> = x.to_string().chars().map(|c| c == '1').collect();
        f.evaluate(&assignment)
    }

    #[test]
    fn truth_table_oracles() {
        let o = example();
        assert_eq!(bits(&o.brute_force_solutions().unwrap()), ["001", "011"]);
        let empty = Oracle::from_truth_table(&SolutionSet::new(), 3).unwrap();
        assert!(empty.brute_force_solutions().unwrap().is_empty());
        let all = Oracle::from_truth_table(&SolutionSet::from_bitstrings(&["0", "1"]).unwrap(), 1)
            .unwrap();
        assert_eq!(all.brute_force_solutions().unwrap().len(), 2);
        let err = Oracle::from_truth_table(&SolutionSet::from_bitstrings(&["01"]).unwrap(), 3);
        assert!(err.is_err());
    }

    #[test]
    fn cnf_oracles() {
        // Brute force by hand over the 8 assignments: x1 = 1 and x2 = 0.
        let f = parse_dimacs("p cnf 3 2\n1 0\n-2 0\n").unwrap();
        let o = Oracle::from_cnf(&f).unwrap();
        assert_eq!(bits(&o.brute_force_solutions().unwrap()), ["100", "101"]);
        assert!(verify_candidate(&o, &"100".parse().unwrap()).unwrap());

        let taut = Oracle::from_cnf(&CnfFormula::new(2, vec![]).unwrap()).unwrap();
        assert_eq!(taut.brute_force_solutions().unwrap().len(), 4);

        let contra =
            Oracle::from_cnf(&CnfFormula::new(1, vec![vec![1], vec![-1]]).unwrap()).unwrap();
        assert!(contra.brute_force_solutions().unwrap().is_empty());
    }

    #[test]
    fn phase_oracle_matches_worked_example() {
        let psi = Statevector::zero(3).unwrap().hadamard_all();
        let marked = example().apply_phase_oracle(&psi).unwrap();
        let expected_signs = [-1.0, 1.0, -1.0, 1.0, -1.0, -1.0, -1.0, -1.0];
        let mag = 1.0 / 8f64.sqrt();
        for (a, s) in marked.amplitudes().iter().zip(expected_signs) {
            assert!((a.re - s * mag).abs() < EXACT_TOL && a.im == 0.0);
        }
    }

    #[test]
    fn phase_oracle_with_all_solutions_is_identity() {
        let all = SolutionSet::from_states((0..8).map(|i| BasisState::new(i, 3).unwrap())).unwrap();
        let o = Oracle::from_truth_table(&all, 3).unwrap();
        let psi = Statevector::random(3, &mut ChaCha8Rng::seed_from_u64(4)).unwrap();
        assert_eq!(o.apply_phase_oracle(&psi).unwrap(), psi);
    }

    #[test]
    fn exclusion_flips_known_solution() {
        let o = example().exclude(&"001".parse().unwrap()).unwrap();
        let psi = Statevector::zero(3).unwrap().hadamard_all();
        let marked = o.apply_phase_oracle(&psi).unwrap();
        let positive: Vec<usize> = marked
            .amplitudes()
            .iter()
            .enumerate()
            .filter(|(_, a)| a.re > 0.0)
            .map(|(i, _)| i)
            .collect();
        assert_eq!(positive, [3]);
        assert_eq!(o.remaining_solution_count().unwrap(), 1);
        assert_eq!(bits(&o.excluded()), ["001"]);
    }

    #[test]
    fn exclude_is_idempotent_and_checked() {
        let o = example();
        let s: BasisState = "001".parse().unwrap();
        let once = o.exclude(&s).unwrap();
        let twice = once.exclude(&s).unwrap();
        assert_eq!(once.excluded(), twice.excluded());
        assert!(o.excluded().is_empty(), "original must be unchanged");
        assert!(matches!(
            o.exclude(&"000".parse().unwrap()),
            Err(Error::Argument(_))
        ));
        assert!(o.exclude(&"00".parse().unwrap()).is_err());
    }

    #[test]
    fn dimension_mismatch() {
        let psi = Statevector::zero(2).unwrap();
        assert!(matches!(
            example().apply_phase_oracle(&psi),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn verify_ignores_exclusions() {
        let s: BasisState = "001".parse().unwrap();
        let o = example().exclude(&s).unwrap();
        assert!(verify_candidate(&o, &s).unwrap());
        assert!(!verify_candidate(&o, &"000".parse().unwrap()).unwrap());
    }

    fn arb_formula() -> impl Strategy<Value = CnfFormula> {
        (1usize..=12).prop_flat_map(|n| {
            let lit = (1..=n as i32, any::<bool>()).prop_map(|(v, neg)| if neg { -v } else { v });
            prop::collection::vec(prop::collection::vec(lit, 1..4), 0..6)
                .prop_map(move |clauses| CnfFormula::new(n, clauses).unwrap())
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn compiled_cnf_agrees_with_clause_evaluation(f in arb_formula()) {
            let o = Oracle::from_cnf(&f).unwrap();
            for x in 0..1u64 << f.n_vars() {
                let b = BasisState::new(x, f.n_vars()).unwrap();
                prop_assert_eq!(o.accepts(&b).unwrap(), clause_by_clause(&f, &b));
            }
        }

        #[test]
        fn phase_oracle_involution_and_magnitudes(n in 1usize..=8, seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let psi = Statevector::random(n, &mut rng).unwrap();
            let sols = SolutionSet::from_states(
                (0..1u64 << n).filter(|_| rand::Rng::random_bool(&mut rng, 0.4))
                    .map(|x| BasisState::new(x, n).unwrap()),
            ).unwrap();
            let o = Oracle::from_truth_table(&sols, n).unwrap();
            let once = o.apply_phase_oracle(&psi).unwrap();
            for (a, b) in once.amplitudes().iter().zip(psi.amplitudes()) {
                prop_assert_eq!(a.norm(), b.norm());
            }
            let twice = o.apply_phase_oracle(&once).unwrap();
            prop_assert!(twice.l2_distance(&psi).unwrap() < EXACT_TOL);
        }
    }
}
