use serde::{Deserialize, Serialize};

use super::{Estimator, TrainConfig};
use crate::{Error, Result};

/// Circuit-evaluation tallies, kept apart so either accounting can be read
/// off.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counts {
    pub grad_evals: u64,
    pub forward_evals: u64,
    pub val_evals: u64,
}

impl Counts {
    pub fn total(&self) -> u64 {
        self.grad_evals + self.forward_evals + self.val_evals
    }
}

/// Number of batch members differentiated with the parameter-shift rule:
/// `round(τ b)`, at least one when `0 < τ < 1`.
pub fn ps_count(tau: f64, batch_len: usize) -> usize {
    if tau <= 0.0 {
        0
    } else if tau >= 1.0 {
        batch_len
    } else {
        ((tau * batch_len as f64).round() as usize).clamp(1, batch_len)
    }
}

/// Closed-form evaluation counts for a run, without simulating anything.
/// `ps_evals_per_sample` is the parameter-shift cost of one data point
/// (two per trainable gate).
pub fn predict_counts(
    cfg: &TrainConfig,
    n_train: usize,
    n_val: usize,
    n_params: usize,
    ps_evals_per_sample: u64,
) -> Result<Counts> {
    cfg.validate()?;
    if n_train == 0 {
        return Err(Error::Config("empty training set".into()));
    }
    let schedule = cfg.schedule(n_params)?;
    let batches: Vec<usize> = (0..n_train).step_by(cfg.batch_size).map(|s| cfg.batch_size.min(n_train - s)).collect();
    let mut counts = Counts::default();
    for epoch in 0..cfg.epochs {
        let k = cfg.k_epoch(schedule.as_ref(), n_params, epoch) as u64;
        for &b in &batches {
            let n_ps = match cfg.estimator {
                Estimator::ParamShift => b,
                Estimator::Spsa { .. } => 0,
                Estimator::Guided { tau, .. } => ps_count(tau, b),
            } as u64;
            counts.grad_evals += n_ps * ps_evals_per_sample + (b as u64 - n_ps) * 2 * k;
        }
        counts.forward_evals += n_train as u64;
        counts.val_evals += n_val as u64;
    }
    Ok(counts)
}
