//! Statevector simulation: gates, Pauli-Z observables, shot sampling and a
//! Pauli-trajectory noise model.

mod execute;
mod gate;
mod noise;
mod observable;
mod state;

pub use execute::{run_circuit, run_gates, sample_expectation, ExecutionMode, EVALS_PER_RUN};
pub use gate::{apply_gate, AngleSource, Axis, Gate, GateOp};
pub use noise::{NoiseModel, Pauli};
pub use observable::PauliZObservable;
pub use state::{StateVector, MAX_QUBITS};
