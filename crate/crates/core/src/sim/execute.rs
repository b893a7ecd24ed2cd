use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::gate::Gate;
use super::noise::NoiseModel;
use super::observable::PauliZObservable;
use super::state::StateVector;
use crate::circuit::ParamCircuit;
use crate::{Error, Result, Seed};

/// One call to [`run_circuit`] is one circuit evaluation, whatever the
/// number of observables or shots.
pub const EVALS_PER_RUN: u64 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum ExecutionMode {
    /// Exact expectation values.
    Ideal,
    /// Expectation values estimated from `shots` projective samples.
    Shots { shots: usize },
    /// Every shot is an independent Pauli trajectory under `noise`.
    Noisy { shots: usize, noise: NoiseModel },
}

impl ExecutionMode {
    pub fn validate(&self) -> Result<()> {
        match self {
            ExecutionMode::Ideal => Ok(()),
            ExecutionMode::Shots { shots } => check_shots(*shots),
            ExecutionMode::Noisy { shots, noise } => {
                check_shots(*shots)?;
                noise.validate()
            }
        }
    }

    pub fn is_ideal(&self) -> bool {
        matches!(self, ExecutionMode::Ideal)
    }
}

fn check_shots(shots: usize) -> Result<()> {
    if shots == 0 {
        return Err(Error::Config("shots must be at least 1".into()));
    }
    Ok(())
}

fn simulate(n_qubits: usize, gates: &[Gate]) -> Result<StateVector> {
    let mut state = StateVector::new(n_qubits)?;
    for g in gates {
        state.apply(g)?;
    }
    Ok(state)
}

/// Evaluates a bound circuit: one value per observable.
pub fn run_circuit(
    circuit: &ParamCircuit,
    inputs: &[f64],
    params: &[f64],
    observables: &[PauliZObservable],
    mode: &ExecutionMode,
    seed: Seed,
) -> Result<Vec<f64>> {
    let gates = circuit.bind(inputs, params)?;
    run_gates(circuit.n_qubits(), &gates, observables, mode, seed)
}

/// Same as [`run_circuit`] for an already bound gate list.
pub fn run_gates(
    n_qubits: usize,
    gates: &[Gate],
    observables: &[PauliZObservable],
    mode: &ExecutionMode,
    seed: Seed,
) -> Result<Vec<f64>> {
    for o in observables {
        o.check(n_qubits)?;
    }
    match mode {
        ExecutionMode::Ideal => {
            let state = simulate(n_qubits, gates)?;
            Ok(observables.iter().map(|o| o.expectation(&state)).collect())
        }
        ExecutionMode::Shots { shots } => {
            check_shots(*shots)?;
            let state = simulate(n_qubits, gates)?;
            let mut rng = seed.rng();
            Ok(sample_many(&state, observables, *shots, None, &mut rng))
        }
        ExecutionMode::Noisy { shots, noise } => {
            check_shots(*shots)?;
            noise.validate()?;
            run_trajectories(n_qubits, gates, observables, *shots, noise, seed)
        }
    }
}

/// Shot estimate of one observable. With `noise`, readout flips are applied
/// to every sampled bitstring.
pub fn sample_expectation<R: Rng + ?Sized>(
    state: &StateVector,
    obs: &PauliZObservable,
    shots: usize,
    noise: Option<&NoiseModel>,
    rng: &mut R,
) -> Result<f64> {
    check_shots(shots)?;
    obs.check(state.n_qubits())?;
    Ok(sample_many(state, std::slice::from_ref(obs), shots, noise, rng)[0])
}

fn sample_many<R: Rng + ?Sized>(
    state: &StateVector,
    observables: &[PauliZObservable],
    shots: usize,
    noise: Option<&NoiseModel>,
    rng: &mut R,
) -> Vec<f64> {
    let dist = WeightedIndex::new(state.probabilities()).expect("normalized state has positive weight");
    let mut sums = vec![0.0; observables.len()];
    for _ in 0..shots {
        let mut b = dist.sample(rng);
        if let Some(n) = noise {
            b = n.flip_readout(b, state.n_qubits(), rng);
        }
        for (s, o) in sums.iter_mut().zip(observables) {
            *s += o.eigenvalue(b);
        }
    }
    sums.into_iter().map(|s| s / shots as f64).collect()
}

#[derive(Clone, Copy)]
enum Fault {
    One(usize, super::noise::Pauli),
    Two(usize, usize, super::noise::Pauli, super::noise::Pauli),
}

fn run_trajectories(
    n_qubits: usize,
    gates: &[Gate],
    observables: &[PauliZObservable],
    shots: usize,
    noise: &NoiseModel,
    seed: Seed,
) -> Result<Vec<f64>> {
    let ideal = simulate(n_qubits, gates)?;
    let ideal_dist = WeightedIndex::new(ideal.probabilities()).expect("normalized state has positive weight");
    let mut rng = seed.rng();
    let mut sums = vec![0.0; observables.len()];
    let mut faults: Vec<Option<Fault>> = vec![None; gates.len()];
    for _ in 0..shots {
        let mut any = false;
        for (slot, g) in faults.iter_mut().zip(gates) {
            *slot = match g.qubits() {
                (q, None) => noise.sample_1q(&mut rng).map(|p| Fault::One(q, p)),
                (c, Some(t)) => noise.sample_2q(&mut rng).map(|(pa, pb)| Fault::Two(c, t, pa, pb)),
            };
            any |= slot.is_some();
        }
        let b = if any {
            let mut state = StateVector::new(n_qubits)?;
            for (g, f) in gates.iter().zip(&faults) {
                state.apply(g)?;
                match *f {
                    Some(Fault::One(q, p)) => state.apply_pauli(q, p),
                    Some(Fault::Two(c, t, pa, pb)) => {
                        state.apply_pauli(c, pa);
                        state.apply_pauli(t, pb);
                    }
                    None => {}
                }
            }
            sample_index(&state.probabilities(), rng.random())
        } else {
            ideal_dist.sample(&mut rng)
        };
        let b = noise.flip_readout(b, n_qubits, &mut rng);
        for (s, o) in sums.iter_mut().zip(observables) {
            *s += o.eigenvalue(b);
        }
    }
    Ok(sums.into_iter().map(|s| s / shots as f64).collect())
}

fn sample_index(probs: &[f64], u: f64) -> usize {
    let total: f64 = probs.iter().sum();
    let target = u * total;
    let mut acc = 0.0;
    for (i, p) in probs.iter().enumerate() {
        acc += p;
        if target < acc {
            return i;
        }
    }
    probs.iter().rposition(|&p| p > 0.0).unwrap_or(0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::Axis;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn flip(q: usize) -> Gate {
        Gate::Rotation { axis: Axis::X, qubit: q, angle: PI }
    }

    #[test]
    fn deterministic_state_samples_exactly() {
        let obs = [PauliZObservable::new(&[0, 1]).unwrap()];
        for shots in [1, 7, 1024] {
            let v = run_gates(2, &[flip(0), flip(1)], &obs, &ExecutionMode::Shots { shots }, Seed(3)).unwrap();
            assert_eq!(v, vec![1.0]);
        }
    }

    #[test]
    fn single_shot_is_plus_or_minus_one() {
        let g = [Gate::Rotation { axis: Axis::Y, qubit: 0, angle: FRAC_PI_2 }];
        let obs = [PauliZObservable::single(0)];
        for s in 0..50 {
            let v = run_gates(1, &g, &obs, &ExecutionMode::Shots { shots: 1 }, Seed(s)).unwrap()[0];
            assert!(v == 1.0 || v == -1.0);
        }
    }

    #[test]
    fn balanced_state_within_three_sigma() {
        // Binomial: std of the mean of ±1 draws with p = 1/2 is 1/sqrt(shots).
        let g = [Gate::Rotation { axis: Axis::Y, qubit: 0, angle: FRAC_PI_2 }];
        let obs = [PauliZObservable::single(0)];
        let bound = 3.0 / (1024f64).sqrt();
        let inside = (0..200)
            .filter(|&s| {
                let v = run_gates(1, &g, &obs, &ExecutionMode::Shots { shots: 1024 }, Seed(s)).unwrap()[0];
                v.abs() <= bound
            })
            .count();
        assert!(inside >= 198, "{inside}/200 inside 3 sigma");
    }

    #[test]
    fn zero_shots_rejected() {
        let s = StateVector::new(1).unwrap();
        let mut rng = Seed(0).rng();
        assert!(sample_expectation(&s, &PauliZObservable::single(0), 0, None, &mut rng).is_err());
        assert!(ExecutionMode::Shots { shots: 0 }.validate().is_err());
    }

    #[test]
    fn full_readout_flip_rate_is_visible() {
        // p_readout close to 1 flips a single qubit almost always.
        let s = StateVector::new(1).unwrap();
        let noise = NoiseModel::new(0.0, 0.0, 0.999).unwrap();
        let mut rng = Seed(5).rng();
        let v = sample_expectation(&s, &PauliZObservable::single(0), 4000, Some(&noise), &mut rng).unwrap();
        assert!(v < -0.99);
    }

    #[test]
    fn sample_index_edges() {
        assert_eq!(sample_index(&[0.0, 1.0, 0.0], 0.0), 1);
        assert_eq!(sample_index(&[0.5, 0.5], 0.999_999_999), 1);
        assert_eq!(sample_index(&[0.5, 0.5, 0.0], 1.0), 1);
    }
}
