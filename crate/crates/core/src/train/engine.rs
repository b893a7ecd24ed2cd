use std::collections::BTreeMap;

use rand::seq::SliceRandom;

use super::counts::{ps_count, Counts};
use super::histogram::Histogram;
use super::loss::{loss_and_error, metric, toy_objective, toy_x};
use super::report::{EpochRecord, TrainReport, TrajectoryPoint};
use super::{Estimator, TrainConfig};
use crate::circuit::{AnsatzSpec, ParamCircuit};
use crate::data::{Dataset, Task};
use crate::grad::{avg_ps_norm, param_shift_jacobian, spsa_jacobian_directed, suppress, Jacobian, SpsaConfig};
use crate::optim::Optimizer;
use crate::sim::{run_circuit, PauliZObservable};
use crate::{Error, Result, Seed};

/// Normalized train/validation/test slices.
#[derive(Clone, Debug)]
pub struct Split {
    pub train: Dataset,
    pub val: Dataset,
    pub test: Option<Dataset>,
}

// Stream tags under the master seed.
const SHUFFLE: u64 = 0;
const BATCH: u64 = 1;
const VALIDATE: u64 = 2;
const TEST: u64 = 3;
// Stream tags under a batch seed.
const FORWARD: u64 = 0;
const GRADIENT: u64 = 1;
const SHARED_DIRECTIONS: u64 = 2;

/// Baseline training: one estimator for every sample in the batch.
pub fn train_baseline(
    cfg: &TrainConfig,
    data: &Split,
    circuit: &ParamCircuit,
    observables: &[PauliZObservable],
) -> Result<TrainReport> {
    if cfg.estimator.is_guided() {
        return Err(Error::Config("train_baseline needs a ParamShift or SPSA estimator".into()));
    }
    train(cfg, data, circuit, observables)
}

/// Guided-SPSA training.
pub fn train_guided(
    cfg: &TrainConfig,
    data: &Split,
    circuit: &ParamCircuit,
    observables: &[PauliZObservable],
) -> Result<TrainReport> {
    if !cfg.estimator.is_guided() {
        return Err(Error::Config("train_guided needs a Guided estimator".into()));
    }
    train(cfg, data, circuit, observables)
}

fn predict(
    cfg: &TrainConfig,
    circuit: &ParamCircuit,
    observables: &[PauliZObservable],
    ds: &Dataset,
    params: &[f64],
    seed: Seed,
) -> Result<Vec<Vec<f64>>> {
    cfg.parallelism
        .map(ds.len(), |i| run_circuit(circuit, &ds.features[i], params, observables, &cfg.mode, seed.child(i as u64)))
        .into_iter()
        .collect()
}

/// Shared loop for all estimators.
///
/// Per batch: one forward evaluation per sample, the loss error vector, one
/// Jacobian per sample (the first `round(τB)` by parameter shift for
/// Guided-SPSA, the rest by SPSA with norm suppression), chain rule
/// `g = Σ_m J_mᵀ e_m`, optimizer step.
pub fn train(
    cfg: &TrainConfig,
    data: &Split,
    circuit: &ParamCircuit,
    observables: &[PauliZObservable],
) -> Result<TrainReport> {
    cfg.validate()?;
    let train_ds = &data.train;
    if train_ds.is_empty() {
        return Err(Error::Config("empty training set".into()));
    }
    if observables.is_empty() {
        return Err(Error::Config("at least one observable is required".into()));
    }
    let n_params = circuit.n_params();
    let estimator = cfg.estimator.resolve_epsilon(&cfg.mode);
    let schedule = cfg.schedule(n_params)?;
    let master = Seed(cfg.seed);

    let mut params = cfg.init.sample(n_params, cfg.seed);
    let initial_params = params.clone();
    let mut optimizer = Optimizer::new(cfg.optimizer, cfg.learning_rate, n_params);
    let mut counts = Counts::default();
    let mut records = Vec::with_capacity(cfg.epochs);
    let mut param_path = Vec::with_capacity(cfg.epochs);
    let mut histograms = BTreeMap::new();
    let mut trajectory = Vec::new();
    let mut best: Option<(usize, f64, Vec<f64>)> = None;
    let mut order: Vec<usize> = (0..train_ds.len()).collect();

    for epoch in 0..cfg.epochs {
        let k_epoch = cfg.k_epoch(schedule.as_ref(), n_params, epoch);
        let capture = cfg.histogram_epochs.contains(&epoch);
        let mut hist = Histogram::default();
        order.shuffle(&mut master.path(&[SHUFFLE, epoch as u64]).rng());
        let mut loss_sum = 0.0;

        for (b, chunk) in order.chunks(cfg.batch_size).enumerate() {
            let bseed = master.path(&[BATCH, epoch as u64, b as u64]);
            let preds: Vec<Vec<f64>> = cfg
                .parallelism
                .map(chunk.len(), |m| {
                    run_circuit(
                        circuit,
                        &train_ds.features[chunk[m]],
                        &params,
                        observables,
                        &cfg.mode,
                        bseed.path(&[FORWARD, m as u64]),
                    )
                })
                .into_iter()
                .collect::<Result<_>>()?;
            counts.forward_evals += chunk.len() as u64;
            let targets: Vec<Vec<f64>> = chunk.iter().map(|&i| train_ds.targets[i].clone()).collect();
            if cfg.task == Task::Toy {
                let x = toy_x(preds.iter().map(|p| p[0]).sum::<f64>() / preds.len() as f64);
                trajectory.push(TrajectoryPoint { step: trajectory.len(), x, loss: toy_objective(x) });
            }
            let (loss, errors) = loss_and_error(cfg.task, cfg.classification_loss, &preds, &targets);
            loss_sum += loss * chunk.len() as f64;

            let (n_ps, c, epsilon) = match estimator {
                Estimator::ParamShift => (chunk.len(), 0.0, None),
                Estimator::Spsa { c, .. } => (0, c, None),
                Estimator::Guided { tau, epsilon, c } => (ps_count(tau, chunk.len()), c, epsilon),
            };
            let spsa_cfg = SpsaConfig { k: k_epoch.max(1), c, share_directions: cfg.share_directions };
            let shared = bseed.child(SHARED_DIRECTIONS);
            let results: Vec<(Jacobian, u64)> = cfg
                .parallelism
                .map(chunk.len(), |m| {
                    let x = &train_ds.features[chunk[m]];
                    let s = bseed.path(&[GRADIENT, m as u64]);
                    if m < n_ps {
                        param_shift_jacobian(circuit, x, &params, observables, &cfg.mode, s)
                    } else {
                        let dirs = if cfg.share_directions { shared } else { s.child(0) };
                        spsa_jacobian_directed(circuit, x, &params, observables, &spsa_cfg, &cfg.mode, dirs, s.child(1))
                    }
                })
                .into_iter()
                .collect::<Result<_>>()?;
            let mut jacobians = Vec::with_capacity(results.len());
            for (j, evals) in results {
                counts.grad_evals += evals;
                jacobians.push(j);
            }
            if let Some(eps) = epsilon {
                if n_ps > 0 && n_ps < jacobians.len() {
                    let sigma = avg_ps_norm(&jacobians[..n_ps])?;
                    for j in &mut jacobians[n_ps..] {
                        *j = suppress(j, &sigma, eps);
                    }
                }
            }
            if capture {
                jacobians.iter().for_each(|j| hist.extend(j.entries()));
            }
            let mut grad = vec![0.0; n_params];
            for (j, e) in jacobians.iter().zip(&errors) {
                j.accumulate_vjp(e, &mut grad);
            }
            optimizer.step(&mut params, &grad).map_err(|e| match e {
                Error::NumericFault(msg) => Error::NumericFault(format!("epoch {epoch}, batch {b}: {msg}")),
                other => other,
            })?;
        }
        if capture {
            histograms.insert(epoch, hist);
        }

        let val_preds = predict(cfg, circuit, observables, &data.val, &params, master.path(&[VALIDATE, epoch as u64]))?;
        counts.val_evals += data.val.len() as u64;
        let val_metric = metric(cfg.task, &val_preds, &data.val.targets);
        if best.as_ref().is_none_or(|(_, m, _)| val_metric < *m) {
            best = Some((epoch, val_metric, params.clone()));
        }
        if cfg.task == Task::Toy && epoch + 1 == cfg.epochs {
            let x = toy_x(val_preds[0][0]);
            trajectory.push(TrajectoryPoint { step: trajectory.len(), x, loss: toy_objective(x) });
        }
        records.push(EpochRecord {
            epoch,
            train_loss: loss_sum / train_ds.len() as f64,
            val_metric,
            grad_evals: counts.grad_evals,
            forward_evals: counts.forward_evals,
            val_evals: counts.val_evals,
            k_epoch,
        });
        param_path.push(params.clone());
    }

    let (convergence_epoch, best_val_metric, best_params) = best.expect("at least one epoch");
    let test_metric = match &data.test {
        Some(test) if !test.is_empty() => {
            let preds = predict(cfg, circuit, observables, test, &best_params, master.child(TEST))?;
            Some(metric(cfg.task, &preds, &test.targets))
        }
        _ => None,
    };
    Ok(TrainReport {
        epochs: records,
        counts,
        convergence_epoch,
        best_val_metric,
        test_metric,
        batch_size: cfg.batch_size,
        n_params,
        initial_params,
        param_path,
        histograms,
        trajectory,
    })
}

/// Binned raw Jacobian entries of a captured epoch.
pub fn gradient_histogram(report: &TrainReport, epoch: usize) -> Result<&Histogram> {
    report
        .histograms
        .get(&epoch)
        .ok_or_else(|| Error::Lookup(format!("no gradient histogram captured for epoch {epoch}")))
}

/// Minimizes the toy objective over `x = π ⟨Z⊗4⟩` with the encoding-free
/// 4-qubit circuit. Each optimizer step sees `replicas` identical samples.
pub fn toy_minimize(cfg: &TrainConfig, ansatz: &AnsatzSpec, replicas: usize) -> Result<TrainReport> {
    if cfg.task != Task::Toy {
        return Err(Error::Config("toy_minimize needs task = toy".into()));
    }
    if ansatz.encoding.n_inputs() != 0 {
        return Err(Error::Config("the toy ansatz takes no inputs".into()));
    }
    if replicas == 0 {
        return Err(Error::Config("toy replicas must be at least 1".into()));
    }
    let circuit = ansatz.build()?;
    let observables = [PauliZObservable::all(ansatz.n_qubits)];
    let data = Split { train: Dataset::toy(replicas), val: Dataset::toy(1), test: None };
    train(cfg, &data, &circuit, &observables)
}
