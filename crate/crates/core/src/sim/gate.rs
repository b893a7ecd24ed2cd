use serde::{Deserialize, Serialize};

use super::state::StateVector;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Axis {
    X,
    Y,
    Z,
}

/// Where a rotation angle comes from when a circuit is bound.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum AngleSource {
    Constant(f64),
    Input(usize),
    Param(usize),
}

/// A gate in a parameterized circuit. Rotations are `exp(-i φ P / 2)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum GateOp {
    Rotation { axis: Axis, qubit: usize, angle: AngleSource },
    Cnot { control: usize, target: usize },
}

impl GateOp {
    pub fn rx(qubit: usize, angle: AngleSource) -> Self {
        GateOp::Rotation { axis: Axis::X, qubit, angle }
    }

    pub fn ry(qubit: usize, angle: AngleSource) -> Self {
        GateOp::Rotation { axis: Axis::Y, qubit, angle }
    }

    pub fn rz(qubit: usize, angle: AngleSource) -> Self {
        GateOp::Rotation { axis: Axis::Z, qubit, angle }
    }

    pub fn cnot(control: usize, target: usize) -> Self {
        GateOp::Cnot { control, target }
    }

    pub fn qubits(&self) -> Vec<usize> {
        match *self {
            GateOp::Rotation { qubit, .. } => vec![qubit],
            GateOp::Cnot { control, target } => vec![control, target],
        }
    }

    pub fn angle_source(&self) -> Option<AngleSource> {
        match *self {
            GateOp::Rotation { angle, .. } => Some(angle),
            GateOp::Cnot { .. } => None,
        }
    }

    /// Resolves the angle with `bound_angle`; rotations require one.
    pub fn bind_angle(&self, bound_angle: Option<f64>) -> Result<Gate> {
        match *self {
            GateOp::Rotation { axis, qubit, .. } => {
                let angle = bound_angle
                    .ok_or_else(|| Error::Binding(format!("rotation on qubit {qubit} has no bound angle")))?;
                Ok(Gate::Rotation { axis, qubit, angle })
            }
            GateOp::Cnot { control, target } => Ok(Gate::Cnot { control, target }),
        }
    }
}

/// A gate with every angle resolved to radians.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Gate {
    Rotation { axis: Axis, qubit: usize, angle: f64 },
    Cnot { control: usize, target: usize },
}

impl Gate {
    pub fn is_two_qubit(&self) -> bool {
        matches!(self, Gate::Cnot { .. })
    }

    pub fn qubits(&self) -> (usize, Option<usize>) {
        match *self {
            Gate::Rotation { qubit, .. } => (qubit, None),
            Gate::Cnot { control, target } => (control, Some(target)),
        }
    }
}

pub fn apply_gate(state: &mut StateVector, gate: &GateOp, bound_angle: Option<f64>) -> Result<()> {
    state.apply(&gate.bind_angle(bound_angle)?)
}
