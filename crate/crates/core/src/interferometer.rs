//! Two-arm interference of a marked and an unmarked copy of a state.
//!
//! Two constructions are provided and must agree on the post-selected branch:
//!
//! * [`arm_sum`] overlaps the arms literally, `χ = (ψ + Oψ) / 2`, and
//!   renormalizes. This is not a unitary map.
//! * [`ancilla_circuit`] realizes the same sum unitarily with one extra qubit:
//!   a Hadamard on the ancilla splits the arms, the oracle acts only on the
//!   ancilla = 1 branch, and a second Hadamard recombines them. The second
//!   Hadamard is the recombination step, not an extra output beam splitter.
//!
//! The ancilla is the rightmost qubit (index `n_vars`), so data bitstrings read
//! exactly as they do without it. With the marking convention of
//! [`Oracle`], `(I + O) / 2` is the projector onto the accepted, non-excluded
//! states, which is why non-solutions cancel.

use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::oracle::Oracle;
use crate::state::{BasisState, Statevector};

/// Branch weights at or below this are treated as exactly zero.
pub const BRANCH_ZERO_TOL: f64 = 1e-24;

/// Data register plus one ancilla qubit in the rightmost position.
#[derive(Clone, Debug, PartialEq)]
pub struct JointState {
    n_vars: usize,
    state: Statevector,
}

impl JointState {
    /// `ψ ⊗ |ancilla⟩`.
    pub fn tensor(psi: &Statevector, ancilla: bool) -> Self {
        let n_vars = psi.n_qubits();
        let mut amps = vec![Complex64::new(0.0, 0.0); psi.dim() << 1];
        let offset = ancilla as usize;
        for (x, a) in psi.amplitudes().iter().enumerate() {
            amps[(x << 1) | offset] = *a;
        }
        Self {
            n_vars,
            state: Statevector::from_raw(n_vars + 1, amps),
        }
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn ancilla_qubit(&self) -> usize {
        self.n_vars
    }

    pub fn state(&self) -> &Statevector {
        &self.state
    }

    pub fn into_state(self) -> Statevector {
        self.state
    }

    pub(crate) fn state_mut(&mut self) -> &mut Statevector {
        &mut self.state
    }

    /// Total probability of the branch with the ancilla equal to `ancilla`.
    pub fn branch_weight(&self, ancilla: bool) -> f64 {
        self.state
            .amplitudes()
            .iter()
            .skip(ancilla as usize)
            .step_by(2)
            .map(|a| a.norm_sqr())
            .sum()
    }

    /// Unnormalized data amplitudes of one ancilla branch.
    fn branch(&self, ancilla: bool) -> Vec<Complex64> {
        self.state
            .amplitudes()
            .iter()
            .skip(ancilla as usize)
            .step_by(2)
            .copied()
            .collect()
    }
}

/// Result of one interferometric run.
#[derive(Clone, Debug, PartialEq)]
pub struct InterferenceOutcome {
    pub post_selected: bool,
    /// Analytic weight of the ancilla = 0 branch.
    pub success_probability: f64,
    /// Present iff `post_selected`.
    pub measured: Option<BasisState>,
}

/// Uniform superposition `H^{⊗n}|0…0⟩`.
pub fn uniform_spread(n_qubits: usize) -> Result<Statevector> {
    Ok(Statevector::zero(n_qubits)?.hadamard_all())
}

/// Literal overlap of the marked and unmarked arms.
///
/// Returns the renormalized sum and its squared norm, or `(None, 0.0)` when
/// the arms cancel completely.
pub fn arm_sum(psi: &Statevector, o: &Oracle) -> Result<(Option<Statevector>, f64)> {
    let marked = o.apply_phase_oracle(psi)?;
    let chi: Vec<Complex64> = psi
        .amplitudes()
        .iter()
        .zip(marked.amplitudes())
        .map(|(a, b)| (a + b) * 0.5)
        .collect();
    let weight: f64 = chi.iter().map(|a| a.norm_sqr()).sum();
    Ok(renormalized(psi.n_qubits(), chi, weight))
}

/// Unitary two-arm circuit: H(ancilla), oracle on the ancilla = 1 branch, H(ancilla).
pub fn ancilla_circuit(psi: &Statevector, o: &Oracle) -> Result<JointState> {
    o.check_width(psi.n_qubits())?;
    let mut joint = split_arms(psi);
    mark_arm(&mut joint, o)?;
    recombine(&mut joint);
    Ok(joint)
}

/// `ψ ⊗ |0⟩` followed by a Hadamard on the ancilla.
pub(crate) fn split_arms(psi: &Statevector) -> JointState {
    let mut joint = JointState::tensor(psi, false);
    let anc = joint.ancilla_qubit();
    joint.state.hadamard_mut(anc);
    joint
}

/// Applies the phase oracle to the data register of the ancilla = 1 arm only.
pub(crate) fn mark_arm(joint: &mut JointState, o: &Oracle) -> Result<()> {
    o.check_width(joint.n_vars)?;
    for (x, pair) in joint.state.amps_mut().chunks_exact_mut(2).enumerate() {
        if o.flips_index(x as u64) {
            pair[1] = -pair[1];
        }
    }
    Ok(())
}

pub(crate) fn recombine(joint: &mut JointState) {
    let anc = joint.ancilla_qubit();
    joint.state.hadamard_mut(anc);
}

/// Conditions on ancilla = 0; returns the renormalized data state and the branch weight.
pub fn post_select(j: &JointState) -> (Option<Statevector>, f64) {
    let weight = j.branch_weight(false);
    renormalized(j.n_vars, j.branch(false), weight)
}

/// Measures the ancilla, then (on ancilla = 0) the data register.
///
/// Consumes exactly one uniform draw for the ancilla and, when post-selected,
/// one more for the data register.
pub fn measure_joint<R: Rng + ?Sized>(j: &JointState, rng: &mut R) -> Result<InterferenceOutcome> {
    let norm = j.state.norm_sqr();
    if (norm - 1.0).abs() > crate::state::PIPELINE_TOL {
        return Err(Error::StateCorruption { norm: norm.sqrt() });
    }
    let p0 = j.branch_weight(false);
    let u: f64 = rng.random();
    let success_probability = p0.clamp(0.0, 1.0);
    if p0 > BRANCH_ZERO_TOL && u < p0 / norm {
        let (data, _) = post_select(j);
        let data = data.expect("branch weight above threshold");
        return Ok(InterferenceOutcome {
            post_selected: true,
            success_probability,
            measured: Some(data.measure_all(rng)?),
        });
    }
    Ok(InterferenceOutcome {
        post_selected: false,
        success_probability,
        measured: None,
    })
}

/// Full run: ground state, Hadamard spread, two-arm circuit, measurement.
pub fn interfere_and_measure<R: Rng + ?Sized>(
    o: &Oracle,
    rng: &mut R,
) -> Result<InterferenceOutcome> {
    let psi = uniform_spread(o.n_vars())?;
    let joint = ancilla_circuit(&psi, o)?;
    measure_joint(&joint, rng)
}

/// Post-selection probability of the noiseless run, without sampling.
pub fn success_probability(o: &Oracle) -> Result<f64> {
    let psi = uniform_spread(o.n_vars())?;
    Ok(ancilla_circuit(&psi, o)?.branch_weight(false))
}

fn renormalized(
    n_qubits: usize,
    mut amps: Vec<Complex64>,
    weight: f64,
) -> (Option<Statevector>, f64) {
    if weight <= BRANCH_ZERO_TOL {
        return (None, 0.0);
    }
    let inv = 1.0 / weight.sqrt();
    for a in &mut amps {
        *a *= inv;
    }
    (Some(Statevector::from_raw(n_qubits, amps)), weight)
}
