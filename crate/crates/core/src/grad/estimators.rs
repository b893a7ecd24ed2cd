use rand::Rng;
use serde::{Deserialize, Serialize};

use super::jacobian::Jacobian;
use crate::circuit::ParamCircuit;
use crate::sim::{run_gates, ExecutionMode, Gate, PauliZObservable};
use crate::{Error, Result, Seed};

/// Shift for Pauli-rotation generators; the prefactor is 1/2.
pub const SHIFT: f64 = std::f64::consts::FRAC_PI_2;

fn with_offset(gates: &[Gate], gate_index: usize, delta: f64) -> Vec<Gate> {
    let mut out = gates.to_vec();
    if let Gate::Rotation { angle, .. } = &mut out[gate_index] {
        *angle += delta;
    }
    out
}

/// Exact Jacobian by the parameter-shift rule.
///
/// Every trainable gate is shifted by ±π/2 on its own and the halved
/// difference is added to its parameter's column, so a parameter that
/// drives several gates gets its total derivative. Costs two evaluations
/// per trainable gate, i.e. `2 · n_params` for the layered ansätze.
pub fn param_shift_jacobian(
    circuit: &ParamCircuit,
    inputs: &[f64],
    params: &[f64],
    observables: &[PauliZObservable],
    mode: &ExecutionMode,
    seed: Seed,
) -> Result<(Jacobian, u64)> {
    let gates = circuit.bind(inputs, params)?;
    let mut jac = Jacobian::zeros(observables.len(), circuit.n_params());
    let mut evals = 0u64;
    for (slot, (g, p)) in circuit.param_slots().into_iter().enumerate() {
        let slot = slot as u64;
        let plus =
            run_gates(circuit.n_qubits(), &with_offset(&gates, g, SHIFT), observables, mode, seed.child(2 * slot))?;
        let minus = run_gates(
            circuit.n_qubits(),
            &with_offset(&gates, g, -SHIFT),
            observables,
            mode,
            seed.child(2 * slot + 1),
        )?;
        evals += 2;
        for (o, (fp, fm)) in plus.iter().zip(&minus).enumerate() {
            jac.row_mut(o)[p] += 0.5 * (fp - fm);
        }
    }
    Ok((jac, evals))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpsaConfig {
    /// Number of perturbation samples averaged.
    pub k: usize,
    /// Perturbation magnitude in radians.
    pub c: f64,
    /// One direction set per batch instead of per data point.
    #[serde(default)]
    pub share_directions: bool,
}

impl SpsaConfig {
    pub fn new(k: usize, c: f64) -> Self {
        Self { k, c, share_directions: false }
    }

    pub fn validate(&self) -> Result<()> {
        if self.k == 0 {
            return Err(Error::Config("SPSA k must be at least 1".into()));
        }
        if !(self.c > 0.0 && self.c.is_finite()) {
            return Err(Error::Config(format!("SPSA c must be positive, got {}", self.c)));
        }
        Ok(())
    }
}

/// SPSA estimate of the Jacobian averaged over `cfg.k` perturbations, with
/// directions and evaluation streams both derived from `seed`.
pub fn spsa_jacobian(
    circuit: &ParamCircuit,
    inputs: &[f64],
    params: &[f64],
    observables: &[PauliZObservable],
    cfg: &SpsaConfig,
    mode: &ExecutionMode,
    seed: Seed,
) -> Result<(Jacobian, u64)> {
    spsa_jacobian_directed(circuit, inputs, params, observables, cfg, mode, seed.child(0), seed.child(1))
}

/// SPSA with an explicit direction stream, so several data points can share
/// their `Δ` draws. Sample `j` uses `direction_seed.child(j)`.
#[allow(clippy::too_many_arguments)]
pub fn spsa_jacobian_directed(
    circuit: &ParamCircuit,
    inputs: &[f64],
    params: &[f64],
    observables: &[PauliZObservable],
    cfg: &SpsaConfig,
    mode: &ExecutionMode,
    direction_seed: Seed,
    eval_seed: Seed,
) -> Result<(Jacobian, u64)> {
    cfg.validate()?;
    let n = circuit.n_params();
    let mut jac = Jacobian::zeros(observables.len(), n);
    let mut delta = vec![0.0; n];
    let mut shifted = vec![0.0; n];
    let mut evals = 0u64;
    for j in 0..cfg.k {
        let mut rng = direction_seed.child(j as u64).rng();
        for d in delta.iter_mut() {
            *d = if rng.random::<bool>() { 1.0 } else { -1.0 };
        }
        let mut eval = |sign: f64, ordinal: u64| -> Result<Vec<f64>> {
            for ((s, t), d) in shifted.iter_mut().zip(params).zip(&delta) {
                *s = t + sign * cfg.c * d;
            }
            let gates = circuit.bind(inputs, &shifted)?;
            run_gates(circuit.n_qubits(), &gates, observables, mode, eval_seed.child(ordinal))
        };
        let plus = eval(1.0, 2 * j as u64)?;
        let minus = eval(-1.0, 2 * j as u64 + 1)?;
        evals += 2;
        for (o, (fp, fm)) in plus.iter().zip(&minus).enumerate() {
            let diff = fp - fm;
            for (entry, d) in jac.row_mut(o).iter_mut().zip(&delta) {
                *entry += diff / (2.0 * cfg.c * d);
            }
        }
    }
    jac.scale(1.0 / cfg.k as f64);
    Ok((jac, evals))
}

/// Central differences `[f(θ + h e_i) − f(θ − h e_i)] / 2h` on the exact
/// simulator. Test oracle, not counted.
pub fn finite_diff_jacobian(
    circuit: &ParamCircuit,
    inputs: &[f64],
    params: &[f64],
    observables: &[PauliZObservable],
    h: f64,
) -> Result<Jacobian> {
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::Precondition(format!("finite-difference step must be positive, got {h}")));
    }
    let mut jac = Jacobian::zeros(observables.len(), circuit.n_params());
    let mut theta = params.to_vec();
    for i in 0..circuit.n_params() {
        let orig = theta[i];
        theta[i] = orig + h;
        let plus =
            run_gates(circuit.n_qubits(), &circuit.bind(inputs, &theta)?, observables, &ExecutionMode::Ideal, Seed(0))?;
        theta[i] = orig - h;
        let minus =
            run_gates(circuit.n_qubits(), &circuit.bind(inputs, &theta)?, observables, &ExecutionMode::Ideal, Seed(0))?;
        theta[i] = orig;
        for (o, (fp, fm)) in plus.iter().zip(&minus).enumerate() {
            jac.row_mut(o)[i] = (fp - fm) / (2.0 * h);
        }
    }
    Ok(jac)
}
