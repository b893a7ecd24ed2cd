use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::counts::Counts;
use super::histogram::Histogram;
use crate::Result;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EpochRecord {
    pub epoch: usize,
    pub train_loss: f64,
    pub val_metric: f64,
    /// Cumulative counters at the end of the epoch.
    pub grad_evals: u64,
    pub forward_evals: u64,
    pub val_evals: u64,
    pub k_epoch: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryPoint {
    pub step: usize,
    pub x: f64,
    pub loss: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrainReport {
    pub epochs: Vec<EpochRecord>,
    pub counts: Counts,
    /// Epoch with the lowest validation metric.
    pub convergence_epoch: usize,
    pub best_val_metric: f64,
    /// Test metric with the parameters of the convergence epoch.
    pub test_metric: Option<f64>,
    pub batch_size: usize,
    pub n_params: usize,
    pub initial_params: Vec<f64>,
    /// Parameters after every epoch.
    pub param_path: Vec<Vec<f64>>,
    pub histograms: BTreeMap<usize, Histogram>,
    /// Toy runs only: decoded `x` and `L(x)` before every optimizer step,
    /// then once more after the last one.
    pub trajectory: Vec<TrajectoryPoint>,
}

/// 17 significant digits.
pub(crate) fn real(v: f64) -> String {
    format!("{v:.16e}")
}

impl TrainReport {
    pub fn final_params(&self) -> &[f64] {
        self.param_path.last().map_or(&self.initial_params, Vec::as_slice)
    }

    pub fn write_epoch_csv(&self, path: &Path) -> Result<()> {
        let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
        writeln!(out, "epoch,train_loss,val_metric,grad_evals,forward_evals,val_evals,k_epoch")?;
        for r in &self.epochs {
            writeln!(
                out,
                "{},{},{},{},{},{},{}",
                r.epoch,
                real(r.train_loss),
                real(r.val_metric),
                r.grad_evals,
                r.forward_evals,
                r.val_evals,
                r.k_epoch
            )?;
        }
        out.flush()?;
        Ok(())
    }

    pub fn write_histogram_csv(&self, epoch: usize, path: &Path) -> Result<()> {
        let h = super::gradient_histogram(self, epoch)?;
        let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
        writeln!(out, "bin_left,bin_right,count")?;
        writeln!(out, "{},{},{}", real(f64::NEG_INFINITY), real(super::HIST_LO), h.underflow)?;
        for (i, c) in h.counts.iter().enumerate() {
            let (l, r) = Histogram::bin_edges(i);
            writeln!(out, "{},{},{}", real(l), real(r), c)?;
        }
        writeln!(out, "{},{},{}", real(super::HIST_HI), real(f64::INFINITY), h.overflow)?;
        out.flush()?;
        Ok(())
    }

    pub fn write_trajectory_csv(&self, path: &Path) -> Result<()> {
        let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
        writeln!(out, "step,x,L(x)")?;
        for p in &self.trajectory {
            writeln!(out, "{},{},{}", p.step, real(p.x), real(p.loss))?;
        }
        out.flush()?;
        Ok(())
    }
}
