use num_complex::Complex64;

use super::gate::{Axis, Gate};
use super::noise::Pauli;
use crate::{Error, Result};

pub const MAX_QUBITS: usize = 20;

/// Amplitudes over `n_qubits` qubits, little-endian: qubit `q` is bit `q` of
/// the basis index.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// `|0…0⟩` on `n_qubits` qubits.
    pub fn new(n_qubits: usize) -> Result<Self> {
        if n_qubits == 0 || n_qubits > MAX_QUBITS {
            return Err(Error::Capacity(format!("n_qubits must be in 1..={MAX_QUBITS}, got {n_qubits}")));
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n_qubits];
        amps[0] = Complex64::new(1.0, 0.0);
        Ok(Self { n_qubits, amps })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    /// Applies an already bound gate. Qubit indices are checked.
    pub fn apply(&mut self, gate: &Gate) -> Result<()> {
        match *gate {
            Gate::Rotation { axis, qubit, angle } => {
                self.check_qubit(qubit)?;
                self.apply_1q(qubit, rotation_matrix(axis, angle));
            }
            Gate::Cnot { control, target } => {
                self.check_qubit(control)?;
                self.check_qubit(target)?;
                if control == target {
                    return Err(Error::Binding(format!("CNOT control and target are both qubit {control}")));
                }
                self.apply_cnot(control, target);
            }
        }
        Ok(())
    }

    pub fn apply_pauli(&mut self, qubit: usize, pauli: Pauli) {
        let i = Complex64::i();
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        let m = match pauli {
            Pauli::I => return,
            Pauli::X => [[zero, one], [one, zero]],
            Pauli::Y => [[zero, -i], [i, zero]],
            Pauli::Z => [[one, zero], [zero, -one]],
        };
        self.apply_1q(qubit, m);
    }

    fn check_qubit(&self, q: usize) -> Result<()> {
        if q >= self.n_qubits {
            return Err(Error::Binding(format!("qubit {q} out of range for {} qubits", self.n_qubits)));
        }
        Ok(())
    }

    fn apply_1q(&mut self, q: usize, m: [[Complex64; 2]; 2]) {
        let stride = 1usize << q;
        for base in (0..self.amps.len()).step_by(stride << 1) {
            for lo in base..base + stride {
                let hi = lo + stride;
                let a = self.amps[lo];
                let b = self.amps[hi];
                self.amps[lo] = m[0][0] * a + m[0][1] * b;
                self.amps[hi] = m[1][0] * a + m[1][1] * b;
            }
        }
    }

    fn apply_cnot(&mut self, control: usize, target: usize) {
        let c = 1usize << control;
        let t = 1usize << target;
        for idx in 0..self.amps.len() {
            if idx & c != 0 && idx & t == 0 {
                self.amps.swap(idx, idx | t);
            }
        }
    }
}

/// `exp(-i φ P / 2)` for `P` in {X, Y, Z}.
pub(crate) fn rotation_matrix(axis: Axis, angle: f64) -> [[Complex64; 2]; 2] {
    let (s, c) = (angle / 2.0).sin_cos();
    let re = |x: f64| Complex64::new(x, 0.0);
    match axis {
        Axis::X => [[re(c), Complex64::new(0.0, -s)], [Complex64::new(0.0, -s), re(c)]],
        Axis::Y => [[re(c), re(-s)], [re(s), re(c)]],
        Axis::Z => [[Complex64::new(c, -s), re(0.0)], [re(0.0), Complex64::new(c, s)]],
    }
}
