//! Parameterized circuits and the layered ansätze used by the benchmarks.

use serde::{Deserialize, Serialize};

use crate::sim::{AngleSource, Gate, GateOp, MAX_QUBITS};
use crate::{Error, Result};

/// Ordered gate list whose angles come from inputs, trainable parameters or
/// constants.
#[derive(Clone, Debug, PartialEq)]
pub struct ParamCircuit {
    n_qubits: usize,
    ops: Vec<GateOp>,
    n_inputs: usize,
    n_params: usize,
}

impl ParamCircuit {
    /// Validates qubit indices and checks that input and parameter indices
    /// are dense (every index below the maximum is used).
    pub fn new(n_qubits: usize, ops: Vec<GateOp>) -> Result<Self> {
        if n_qubits == 0 || n_qubits > MAX_QUBITS {
            return Err(Error::Capacity(format!("n_qubits must be in 1..={MAX_QUBITS}, got {n_qubits}")));
        }
        let mut inputs = Vec::new();
        let mut params = Vec::new();
        for (i, op) in ops.iter().enumerate() {
            let qs = op.qubits();
            if qs.iter().any(|&q| q >= n_qubits) {
                return Err(Error::Ansatz(format!("gate {i} touches qubit outside 0..{n_qubits}")));
            }
            if qs.len() == 2 && qs[0] == qs[1] {
                return Err(Error::Ansatz(format!("gate {i}: CNOT control equals target")));
            }
            match op.angle_source() {
                Some(AngleSource::Input(k)) => mark(&mut inputs, k),
                Some(AngleSource::Param(k)) => mark(&mut params, k),
                _ => {}
            }
        }
        if let Some(k) = inputs.iter().position(|used| !used) {
            return Err(Error::Ansatz(format!("input index {k} is never used")));
        }
        if let Some(k) = params.iter().position(|used| !used) {
            return Err(Error::Ansatz(format!("parameter index {k} is never used")));
        }
        Ok(Self { n_qubits, n_inputs: inputs.len(), n_params: params.len(), ops })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn n_inputs(&self) -> usize {
        self.n_inputs
    }

    pub fn n_params(&self) -> usize {
        self.n_params
    }

    pub fn ops(&self) -> &[GateOp] {
        &self.ops
    }

    /// `(gate index, parameter index)` for every trainable gate, in circuit
    /// order.
    pub fn param_slots(&self) -> Vec<(usize, usize)> {
        self.ops
            .iter()
            .enumerate()
            .filter_map(|(g, op)| match op.angle_source() {
                Some(AngleSource::Param(p)) => Some((g, p)),
                _ => None,
            })
            .collect()
    }

    /// Resolves every angle.
    pub fn bind(&self, inputs: &[f64], params: &[f64]) -> Result<Vec<Gate>> {
        if inputs.len() != self.n_inputs {
            return Err(Error::Binding(format!("expected {} inputs, got {}", self.n_inputs, inputs.len())));
        }
        if params.len() != self.n_params {
            return Err(Error::Binding(format!("expected {} params, got {}", self.n_params, params.len())));
        }
        self.ops
            .iter()
            .map(|op| {
                let angle = op.angle_source().map(|src| match src {
                    AngleSource::Constant(v) => v,
                    AngleSource::Input(k) => inputs[k],
                    AngleSource::Param(k) => params[k],
                });
                op.bind_angle(angle)
            })
            .collect()
    }
}

fn mark(used: &mut Vec<bool>, k: usize) {
    if used.len() <= k {
        used.resize(k + 1, false);
    }
    used[k] = true;
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum Encoding {
    None,
    /// One RX(input) per qubit ahead of the first layer.
    AngleOnce {
        n_inputs: usize,
    },
    /// RX(input) gates spread over successive layers, `features_per_layer`
    /// at a time on qubits `0..features_per_layer`.
    IncrementalUpload {
        n_inputs: usize,
        features_per_layer: usize,
    },
}

impl Encoding {
    pub fn n_inputs(&self) -> usize {
        match *self {
            Encoding::None => 0,
            Encoding::AngleOnce { n_inputs } | Encoding::IncrementalUpload { n_inputs, .. } => n_inputs,
        }
    }
}

fn default_true() -> bool {
    true
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnsatzSpec {
    pub n_qubits: usize,
    pub n_layers: usize,
    pub encoding: Encoding,
    /// Nearest-neighbour CNOT chain after every variational layer.
    #[serde(default = "default_true")]
    pub entangle: bool,
}

impl AnsatzSpec {
    /// 5 qubits, angle encoding of 5 features, 5 variational layers.
    pub fn friedman() -> Self {
        Self { n_qubits: 5, n_layers: 5, encoding: Encoding::AngleOnce { n_inputs: 5 }, entangle: true }
    }

    /// 4 qubits, 13 features uploaded incrementally.
    pub fn boston(n_layers: usize) -> Self {
        Self {
            n_qubits: 4,
            n_layers,
            encoding: Encoding::IncrementalUpload { n_inputs: 13, features_per_layer: 4 },
            entangle: true,
        }
    }

    pub fn iris() -> Self {
        Self { n_qubits: 4, n_layers: 5, encoding: Encoding::AngleOnce { n_inputs: 4 }, entangle: true }
    }

    /// The 4-qubit circuit with no encoding.
    pub fn toy() -> Self {
        Self { n_qubits: 4, n_layers: 5, encoding: Encoding::None, entangle: true }
    }

    pub fn n_params(&self) -> usize {
        2 * self.n_qubits * self.n_layers
    }

    pub fn build(&self) -> Result<ParamCircuit> {
        build_layered(self)
    }
}

/// Encoding gates, then per layer RY on every qubit, RZ on every qubit and a
/// descending CNOT chain `q_{i+1} → q_i`. Parameters are numbered
/// layer-major, RY before RZ, qubit-ascending.
pub fn build_layered(spec: &AnsatzSpec) -> Result<ParamCircuit> {
    let n = spec.n_qubits;
    if spec.n_layers == 0 {
        return Err(Error::Ansatz("n_layers must be at least 1".into()));
    }
    if n == 0 || n > MAX_QUBITS {
        return Err(Error::Capacity(format!("n_qubits must be in 1..={MAX_QUBITS}, got {n}")));
    }
    let mut ops = Vec::new();
    let mut upload: Option<(usize, usize)> = None;
    match spec.encoding {
        Encoding::None => {}
        Encoding::AngleOnce { n_inputs } => {
            if n_inputs > n {
                return Err(Error::Ansatz(format!("{n_inputs} features do not fit on {n} qubits")));
            }
            ops.extend((0..n_inputs).map(|q| GateOp::rx(q, AngleSource::Input(q))));
        }
        Encoding::IncrementalUpload { n_inputs, features_per_layer } => {
            if features_per_layer == 0 || features_per_layer > n {
                return Err(Error::Ansatz(format!("features_per_layer must be in 1..={n}, got {features_per_layer}")));
            }
            let capacity = features_per_layer * spec.n_layers;
            if capacity < n_inputs {
                return Err(Error::Ansatz(format!(
                    "{n_inputs} features exceed upload capacity {capacity} ({} layers x {features_per_layer})",
                    spec.n_layers
                )));
            }
            upload = Some((n_inputs, features_per_layer));
        }
    }
    for layer in 0..spec.n_layers {
        if let Some((n_inputs, per)) = upload {
            let start = layer * per;
            for (q, f) in (start..(start + per).min(n_inputs)).enumerate() {
                ops.push(GateOp::rx(q, AngleSource::Input(f)));
            }
        }
        let base = layer * 2 * n;
        ops.extend((0..n).map(|q| GateOp::ry(q, AngleSource::Param(base + q))));
        ops.extend((0..n).map(|q| GateOp::rz(q, AngleSource::Param(base + n + q))));
        if spec.entangle {
            ops.extend((0..n.saturating_sub(1)).rev().map(|i| GateOp::cnot(i + 1, i)));
        }
    }
    ParamCircuit::new(n, ops)
}

/// Boston-housing circuit: 4 qubits, 13 features, `n_layers` layers.
pub fn build_boston(n_layers: usize) -> Result<ParamCircuit> {
    build_layered(&AnsatzSpec::boston(n_layers))
}
