use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    const ALL: [Pauli; 4] = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];
}

/// Parametric depolarizing + readout noise, realized by sampling Pauli
/// trajectories.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NoiseModel {
    /// Probability of a uniformly random X, Y or Z after a 1-qubit gate.
    pub p1: f64,
    /// Probability of a uniformly random non-identity 2-qubit Pauli after a
    /// 2-qubit gate.
    pub p2: f64,
    /// Per-qubit bit-flip probability at measurement.
    pub p_readout: f64,
}

impl NoiseModel {
    pub fn new(p1: f64, p2: f64, p_readout: f64) -> Result<Self> {
        let m = Self { p1, p2, p_readout };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, p) in [("p1", self.p1), ("p2", self.p2), ("p_readout", self.p_readout)] {
            if !(0.0..1.0).contains(&p) {
                return Err(Error::Config(format!("noise {name} must be in [0, 1), got {p}")));
            }
        }
        Ok(())
    }

    pub fn sample_1q<R: Rng + ?Sized>(&self, rng: &mut R) -> Option<Pauli> {
        if self.p1 > 0.0 && rng.random::<f64>() < self.p1 {
            Some(Pauli::ALL[rng.random_range(1..4)])
        } else {
            None
        }
    }

    pub fn sample_2q<R: Rng + ?Sized>(&self, rng: &mut R) -> Option<(Pauli, Pauli)> {
        if self.p2 > 0.0 && rng.random::<f64>() < self.p2 {
            // 15 non-identity pairs: index 1..16 in base 4.
            let k = rng.random_range(1..16);
            Some((Pauli::ALL[k & 3], Pauli::ALL[k >> 2]))
        } else {
            None
        }
    }

    /// Applies independent readout flips to the low `n_qubits` bits.
    pub fn flip_readout<R: Rng + ?Sized>(&self, basis: usize, n_qubits: usize, rng: &mut R) -> usize {
        if self.p_readout == 0.0 {
            return basis;
        }
        let mut out = basis;
        for q in 0..n_qubits {
            if rng.random::<f64>() < self.p_readout {
                out ^= 1 << q;
            }
        }
        out
    }
}
