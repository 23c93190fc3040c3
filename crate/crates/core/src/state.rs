//! Dense statevector over `n` qubits.
//!
//! Bit ordering: qubit 0 is the leftmost character of a bitstring, so the ket
//! `|001⟩` lives at index 1 and qubit `q` maps to bit `n - 1 - q` of the index.
//! Every constructor and transform keeps the state normalized.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::atomic::{AtomicUsize, Ordering};

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

pub const DEFAULT_MAX_QUBITS: usize = 24;

/// Tolerance for identities that hold in exact arithmetic.
pub const EXACT_TOL: f64 = 1e-12;
/// Tolerance for pipelines that accumulate rounding over many gates.
pub const PIPELINE_TOL: f64 = 1e-9;

static MAX_QUBITS: AtomicUsize = AtomicUsize::new(DEFAULT_MAX_QUBITS);

/// Process-wide qubit cap applied by [`Statevector::zero`].
pub fn max_qubits() -> usize {
    MAX_QUBITS.load(Ordering::Relaxed)
}

pub fn set_max_qubits(limit: usize) {
    MAX_QUBITS.store(limit, Ordering::Relaxed);
}

pub(crate) fn check_cap(n_qubits: usize, limit: usize) -> Result<()> {
    if n_qubits > limit || n_qubits >= 63 {
        return Err(Error::QubitCap {
            requested: n_qubits,
            limit,
        });
    }
    Ok(())
}

/// A computational basis state of a fixed-width register.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BasisState {
    n_qubits: usize,
    index: u64,
}

impl BasisState {
    pub fn new(index: u64, n_qubits: usize) -> Result<Self> {
        if n_qubits == 0 || n_qubits > 63 {
            return Err(Error::argument(format!(
                "basis state width {n_qubits} outside 1..=63"
            )));
        }
        if index >> n_qubits != 0 {
            return Err(Error::argument(format!(
                "index {index} does not fit in {n_qubits} qubits"
            )));
        }
        Ok(Self { n_qubits, index })
    }

    #[inline]
    pub fn index(&self) -> u64 {
        self.index
    }

    #[inline]
    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    /// Value of qubit `q` (0 = leftmost).
    pub fn bit(&self, q: usize) -> bool {
        assert!(q < self.n_qubits, "qubit {q} out of range");
        (self.index >> (self.n_qubits - 1 - q)) & 1 == 1
    }

    pub fn bitstring(&self) -> String {
        format!("{:0width$b}", self.index, width = self.n_qubits)
    }
}

impl fmt::Display for BasisState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.bitstring())
    }
}

impl FromStr for BasisState {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.is_empty() || s.len() > 63 {
            return Err(Error::argument(format!(
                "bitstring '{s}' must have 1..=63 characters"
            )));
        }
        let mut index = 0u64;
        for c in s.chars() {
            let bit = match c {
                '0' => 0,
                '1' => 1,
                _ => {
                    return Err(Error::argument(format!(
                        "bitstring '{s}' contains '{c}', expected 0 or 1"
                    )))
                }
            };
            index = (index << 1) | bit;
        }
        BasisState::new(index, s.len())
    }
}

/// Outcome counts from repeated full-register measurement.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShotHistogram {
    pub counts: BTreeMap<BasisState, u64>,
    pub total_shots: u64,
}

impl ShotHistogram {
    pub fn count(&self, state: &BasisState) -> u64 {
        self.counts.get(state).copied().unwrap_or(0)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Statevector {
    n_qubits: usize,
    amps: Vec<Complex64>,
}

impl Statevector {
    /// `|00…0⟩`, subject to the process-wide qubit cap.
    pub fn zero(n_qubits: usize) -> Result<Self> {
        Self::zero_with_cap(n_qubits, max_qubits())
    }

    pub fn zero_with_cap(n_qubits: usize, cap: usize) -> Result<Self> {
        if n_qubits == 0 {
            return Err(Error::argument("a statevector needs at least one qubit"));
        }
        check_cap(n_qubits, cap)?;
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n_qubits];
        amps[0] = Complex64::new(1.0, 0.0);
        Ok(Self { n_qubits, amps })
    }

    pub fn basis(state: BasisState) -> Self {
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << state.n_qubits()];
        amps[state.index() as usize] = Complex64::new(1.0, 0.0);
        Self {
            n_qubits: state.n_qubits(),
            amps,
        }
    }

    /// Wraps already-normalized amplitudes (norm checked to [`PIPELINE_TOL`]).
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        let n_qubits = width_of(amps.len())?;
        let state = Self { n_qubits, amps };
        let norm = state.norm_sqr();
        if (norm - 1.0).abs() > PIPELINE_TOL {
            return Err(Error::StateCorruption { norm: norm.sqrt() });
        }
        Ok(state)
    }

    /// Scales arbitrary nonzero amplitudes to unit norm.
    pub fn from_unnormalized(amps: Vec<Complex64>) -> Result<Self> {
        let n_qubits = width_of(amps.len())?;
        let mut state = Self { n_qubits, amps };
        let norm = state.norm_sqr().sqrt();
        if !(norm > 0.0 && norm.is_finite()) {
            return Err(Error::argument(
                "cannot normalize a zero or non-finite vector",
            ));
        }
        state.scale(1.0 / norm);
        Ok(state)
    }

    /// Random state with i.i.d. Gaussian components, normalized.
    pub fn random<R: Rng + ?Sized>(n_qubits: usize, rng: &mut R) -> Result<Self> {
        check_cap(n_qubits, max_qubits())?;
        let amps = (0..1usize << n_qubits)
            .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
            .collect();
        Self::from_unnormalized(amps)
    }

    #[inline]
    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    #[inline]
    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amplitude(&self, state: &BasisState) -> Complex64 {
        assert_eq!(
            state.n_qubits(),
            self.n_qubits,
            "basis state width mismatch"
        );
        self.amps[state.index() as usize]
    }

    pub fn probability(&self, index: usize) -> f64 {
        self.amps[index].norm_sqr()
    }

    /// Sum of `|a|²` in index order.
    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn hadamard_all(&self) -> Self {
        let mut out = self.clone();
        for q in 0..self.n_qubits {
            out.hadamard_mut(q);
        }
        out
    }

    pub fn apply_x(&self, qubit: usize) -> Result<Self> {
        self.check_qubit(qubit)?;
        let mut out = self.clone();
        out.x_mut(qubit);
        Ok(out)
    }

    pub fn l2_distance(&self, other: &Statevector) -> Result<f64> {
        self.check_same_width(other)?;
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt())
    }

    /// Born-rule draw of the full register.
    pub fn measure_all<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<BasisState> {
        let sampler = Sampler::new(self)?;
        Ok(sampler.draw(rng))
    }

    /// `shots` independent draws; the draw sequence equals `shots` calls to
    /// [`Statevector::measure_all`] on the same generator.
    pub fn sample<R: Rng + ?Sized>(&self, shots: u64, rng: &mut R) -> Result<ShotHistogram> {
        if shots == 0 {
            return Err(Error::argument("shots must be positive"));
        }
        let sampler = Sampler::new(self)?;
        let mut counts = BTreeMap::new();
        for _ in 0..shots {
            *counts.entry(sampler.draw(rng)).or_insert(0) += 1;
        }
        Ok(ShotHistogram {
            counts,
            total_shots: shots,
        })
    }

    pub(crate) fn check_qubit(&self, qubit: usize) -> Result<()> {
        if qubit >= self.n_qubits {
            return Err(Error::argument(format!(
                "qubit {qubit} out of range for {} qubits",
                self.n_qubits
            )));
        }
        Ok(())
    }

    pub(crate) fn check_same_width(&self, other: &Statevector) -> Result<()> {
        if self.n_qubits != other.n_qubits {
            return Err(Error::DimensionMismatch {
                expected: self.n_qubits,
                found: other.n_qubits,
            });
        }
        Ok(())
    }

    #[inline]
    pub(crate) fn amps_mut(&mut self) -> &mut [Complex64] {
        &mut self.amps
    }

    /// Wraps amplitudes without a norm check; callers guarantee the invariant.
    pub(crate) fn from_raw(n_qubits: usize, amps: Vec<Complex64>) -> Self {
        debug_assert_eq!(amps.len(), 1 << n_qubits);
        Self { n_qubits, amps }
    }

    pub(crate) fn scale(&mut self, factor: f64) {
        for a in &mut self.amps {
            *a *= factor;
        }
    }

    #[inline]
    fn mask(&self, qubit: usize) -> usize {
        1 << (self.n_qubits - 1 - qubit)
    }

    pub(crate) fn hadamard_mut(&mut self, qubit: usize) {
        let mask = self.mask(qubit);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        // Iterate over blocks of 2*mask; the lower half has the bit clear.
        for block in self.amps.chunks_exact_mut(mask << 1) {
            let (lo, hi) = block.split_at_mut(mask);
            for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                let (x, y) = (*a, *b);
                *a = (x + y) * s;
                *b = (x - y) * s;
            }
        }
    }

    pub(crate) fn x_mut(&mut self, qubit: usize) {
        let mask = self.mask(qubit);
        for block in self.amps.chunks_exact_mut(mask << 1) {
            let (lo, hi) = block.split_at_mut(mask);
            lo.swap_with_slice(hi);
        }
    }
}

fn width_of(len: usize) -> Result<usize> {
    if len < 2 || !len.is_power_of_two() {
        return Err(Error::argument(format!(
            "amplitude count {len} is not a power of two >= 2"
        )));
    }
    Ok(len.trailing_zeros() as usize)
}

/// Cumulative-probability table for repeated Born-rule draws.
struct Sampler {
    n_qubits: usize,
    cumulative: Vec<f64>,
    last_nonzero: usize,
}

impl Sampler {
    fn new(state: &Statevector) -> Result<Self> {
        let norm = state.norm_sqr();
        if (norm - 1.0).abs() > PIPELINE_TOL {
            return Err(Error::StateCorruption { norm: norm.sqrt() });
        }
        let mut acc = 0.0;
        let mut last_nonzero = 0;
        let cumulative = state
            .amps
            .iter()
            .enumerate()
            .map(|(i, a)| {
                let p = a.norm_sqr();
                if p > 0.0 {
                    last_nonzero = i;
                }
                acc += p;
                acc
            })
            .collect();
        Ok(Self {
            n_qubits: state.n_qubits,
            cumulative,
            last_nonzero,
        })
    }

    fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> BasisState {
        let u: f64 = rng.random::<f64>() * self.cumulative[self.cumulative.len() - 1];
        // First index whose cumulative weight exceeds u; never a zero-weight entry.
        let idx = self
            .cumulative
            .partition_point(|&c| c <= u)
            .min(self.last_nonzero);
        BasisState {
            n_qubits: self.n_qubits,
            index: idx as u64,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn bs(s: &str) -> BasisState {
        s.parse().unwrap()
    }

    #[test]
    fn zero_state() {
        let s = Statevector::zero(3).unwrap();
        assert_eq!(s.amplitudes()[0], Complex64::new(1.0, 0.0));
        assert!(s.amplitudes()[1..]
            .iter()
            .all(|a| *a == Complex64::new(0.0, 0.0)));
        let one = Statevector::zero(1).unwrap();
        assert_eq!(
            one.amplitudes(),
            &[Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)]
        );
    }

    #[test]
    fn zero_state_respects_cap() {
        assert_eq!(
            Statevector::zero_with_cap(25, 24),
            Err(Error::QubitCap {
                requested: 25,
                limit: 24
            })
        );
        assert!(Statevector::zero(0).is_err());
    }

    #[test]
    fn bit_order_is_leftmost_first() {
        let b = bs("001");
        assert_eq!(b.index(), 1);
        assert!(!b.bit(0) && !b.bit(1) && b.bit(2));
        assert_eq!(b.to_string(), "001");
        assert!("01a".parse::<BasisState>().is_err());
        assert!("".parse::<BasisState>().is_err());
    }

    #[test]
    fn hadamard_spread() {
        let plus = Statevector::zero(1).unwrap().hadamard_all();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        for a in plus.amplitudes() {
            assert!((a.re - h).abs() < EXACT_TOL && a.im == 0.0);
        }
        let uniform = Statevector::zero(3).unwrap().hadamard_all();
        for a in uniform.amplitudes() {
            assert!((a.re - 0.353553390593).abs() < 1e-11);
        }
    }

    #[test]
    fn apply_x_examples() {
        let s = Statevector::basis(bs("000"));
        let flipped = s.apply_x(2).unwrap();
        assert_eq!(flipped, Statevector::basis(bs("001")));
        assert_eq!(flipped.apply_x(2).unwrap(), s);
        assert!(s.apply_x(3).is_err());
    }

    #[test]
    fn l2_distance_examples() {
        let zero = Statevector::basis(bs("0"));
        let one = Statevector::basis(bs("1"));
        let plus = zero.hadamard_all();
        assert_eq!(zero.l2_distance(&zero).unwrap(), 0.0);
        assert!((zero.l2_distance(&one).unwrap() - 2f64.sqrt()).abs() < EXACT_TOL);
        // Hand arithmetic: (1 - 1/√2)² + (1/√2)² = 2 - √2.
        let expected = (2.0 - 2f64.sqrt()).sqrt();
        assert!((zero.l2_distance(&plus).unwrap() - expected).abs() < EXACT_TOL);
        assert!((expected - 0.7654).abs() < 1e-4);
        assert!(matches!(
            zero.l2_distance(&Statevector::basis(bs("00"))),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn measure_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let s = Statevector::basis(bs("001"));
        for _ in 0..50 {
            assert_eq!(s.measure_all(&mut rng).unwrap(), bs("001"));
        }
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let mut amps = vec![Complex64::new(0.0, 0.0); 8];
        amps[1] = Complex64::new(h, 0.0);
        amps[3] = Complex64::new(h, 0.0);
        let pair = Statevector::from_amplitudes(amps).unwrap();
        for _ in 0..200 {
            let m = pair.measure_all(&mut rng).unwrap();
            assert!(m == bs("001") || m == bs("011"));
        }
        let a = pair.measure_all(&mut ChaCha8Rng::seed_from_u64(9)).unwrap();
        let b = pair.measure_all(&mut ChaCha8Rng::seed_from_u64(9)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn measure_rejects_unnormalized() {
        let s = Statevector::from_raw(1, vec![Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0)]);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert!(matches!(
            s.measure_all(&mut rng),
            Err(Error::StateCorruption { .. })
        ));
    }

    #[test]
    fn sample_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let zero = Statevector::zero(1).unwrap();
        let h = zero.sample(100, &mut rng).unwrap();
        assert_eq!(h.count(&bs("0")), 100);
        assert_eq!(h.counts.len(), 1);
        assert!(zero.sample(0, &mut rng).is_err());

        let plus = zero.hadamard_all();
        let h = plus.sample(10_000, &mut rng).unwrap();
        let zeros = h.count(&bs("0")) as i64;
        assert!((zeros - 5000).abs() <= 200, "{zeros}");
        assert_eq!(h.counts.values().sum::<u64>(), 10_000);
    }
}
