use serde::{Deserialize, Serialize};

use super::state::{StateVector, MAX_QUBITS};
use crate::{Error, Result};

/// Tensor product of Z on a set of qubits, identity elsewhere.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct PauliZObservable {
    mask: usize,
}

impl PauliZObservable {
    pub fn new(qubits: &[usize]) -> Result<Self> {
        let mut mask = 0usize;
        for &q in qubits {
            if q >= MAX_QUBITS {
                return Err(Error::Capacity(format!("observable qubit {q} out of range")));
            }
            mask |= 1 << q;
        }
        Ok(Self { mask })
    }

    /// `Z⊗n`.
    pub fn all(n_qubits: usize) -> Self {
        Self { mask: (1usize << n_qubits) - 1 }
    }

    pub fn single(qubit: usize) -> Self {
        Self { mask: 1 << qubit }
    }

    pub fn mask(&self) -> usize {
        self.mask
    }

    pub fn qubits(&self) -> Vec<usize> {
        (0..MAX_QUBITS).filter(|q| self.mask >> q & 1 == 1).collect()
    }

    /// Highest qubit index touched plus one.
    pub fn span(&self) -> usize {
        (usize::BITS - self.mask.leading_zeros()) as usize
    }

    /// `(-1)^popcount(basis & mask)`.
    #[inline]
    pub fn eigenvalue(&self, basis: usize) -> f64 {
        if (basis & self.mask).count_ones().is_multiple_of(2) {
            1.0
        } else {
            -1.0
        }
    }

    pub fn check(&self, n_qubits: usize) -> Result<()> {
        if self.span() > n_qubits {
            return Err(Error::Binding(format!(
                "observable on qubits {:?} exceeds {n_qubits}-qubit state",
                self.qubits()
            )));
        }
        Ok(())
    }

    /// Exact `⟨ψ|Z_mask|ψ⟩`.
    pub fn expectation(&self, state: &StateVector) -> f64 {
        state.amplitudes().iter().enumerate().map(|(b, a)| a.norm_sqr() * self.eigenvalue(b)).sum()
    }
}

impl TryFrom<Vec<usize>> for PauliZObservable {
    type Error = Error;
    fn try_from(qubits: Vec<usize>) -> Result<Self> {
        Self::new(&qubits)
    }
}

impl From<PauliZObservable> for Vec<usize> {
    fn from(o: PauliZObservable) -> Self {
        o.qubits()
    }
}
