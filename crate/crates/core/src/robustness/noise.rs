//! Analogue and digital noise channels.
//!
//! The amplitude channel jitters every amplitude with Gaussian noise and
//! renormalizes; the bit-flip channel applies an X to each qubit
//! independently. Both are exact identities at magnitude zero and draw no
//! randomness in that case.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{Error, Result};
use crate::state::Statevector;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum NoiseModel {
    Amplitude,
    BitFlip,
}

impl NoiseModel {
    pub fn as_str(&self) -> &'static str {
        match self {
            NoiseModel::Amplitude => "amplitude",
            NoiseModel::BitFlip => "bitflip",
        }
    }
}

impl fmt::Display for NoiseModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for NoiseModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "amplitude" => Ok(NoiseModel::Amplitude),
            "bitflip" => Ok(NoiseModel::BitFlip),
            _ => Err(Error::argument(format!(
                "unknown noise model '{s}', expected amplitude or bitflip"
            ))),
        }
    }
}

/// Noise model plus magnitude: relative jitter ε for `Amplitude`, per-qubit
/// flip probability p for `BitFlip`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NoiseSpec {
    model: NoiseModel,
    magnitude: f64,
}

impl NoiseSpec {
    pub fn new(model: NoiseModel, magnitude: f64) -> Result<Self> {
        let ok = match model {
            NoiseModel::Amplitude => (0.0..1.0).contains(&magnitude),
            NoiseModel::BitFlip => (0.0..=1.0).contains(&magnitude),
        };
        if !ok {
            return Err(Error::argument(format!(
                "{model} magnitude {magnitude} out of range"
            )));
        }
        Ok(Self { model, magnitude })
    }

    pub fn amplitude(epsilon: f64) -> Result<Self> {
        Self::new(NoiseModel::Amplitude, epsilon)
    }

    pub fn bitflip(p: f64) -> Result<Self> {
        Self::new(NoiseModel::BitFlip, p)
    }

    pub fn model(&self) -> NoiseModel {
        self.model
    }

    pub fn magnitude(&self) -> f64 {
        self.magnitude
    }

    pub fn apply<R: Rng + ?Sized>(&self, psi: &Statevector, rng: &mut R) -> Result<Statevector> {
        match self.model {
            NoiseModel::Amplitude => amplitude_noise(psi, self.magnitude, rng),
            NoiseModel::BitFlip => bitflip_noise(psi, self.magnitude, rng),
        }
    }
}

/// Adds N(0, (ε/√dim)²) to the real and imaginary part of every amplitude,
/// then renormalizes.
pub fn amplitude_noise<R: Rng + ?Sized>(
    psi: &Statevector,
    epsilon: f64,
    rng: &mut R,
) -> Result<Statevector> {
    if !(0.0..1.0).contains(&epsilon) {
        return Err(Error::argument(format!(
            "amplitude noise scale {epsilon} outside [0, 1)"
        )));
    }
    if epsilon == 0.0 {
        return Ok(psi.clone());
    }
    let sigma = epsilon / (psi.dim() as f64).sqrt();
    let normal = Normal::new(0.0, sigma).expect("finite positive sigma");
    let amps = psi
        .amplitudes()
        .iter()
        .map(|a| a + Complex64::new(normal.sample(rng), normal.sample(rng)))
        .collect();
    Statevector::from_unnormalized(amps)
}

/// Flips each qubit independently with probability `p`.
pub fn bitflip_noise<R: Rng + ?Sized>(
    psi: &Statevector,
    p: f64,
    rng: &mut R,
) -> Result<Statevector> {
    let pattern = bitflip_pattern(psi.n_qubits(), p, rng)?;
    let mut out = psi.clone();
    for q in (0..psi.n_qubits()).filter(|q| pattern >> q & 1 == 1) {
        out.x_mut(q);
    }
    Ok(out)
}

/// Draws the set of flipped qubits; bit `q` of the result is qubit `q`.
pub fn bitflip_pattern<R: Rng + ?Sized>(n_qubits: usize, p: f64, rng: &mut R) -> Result<u64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::argument(format!(
            "flip probability {p} outside [0, 1]"
        )));
    }
    if p == 0.0 {
        return Ok(0);
    }
    Ok((0..n_qubits).fold(0u64, |mask, q| {
        if rng.random_bool(p) {
            mask | 1 << q
        } else {
            mask
        }
    }))
}
