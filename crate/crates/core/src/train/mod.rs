//! Training loops, loss/error assembly and circuit-evaluation accounting.

mod counts;
mod engine;
mod histogram;
mod loss;
mod report;

use serde::{Deserialize, Serialize};

pub use counts::{predict_counts, ps_count, Counts};
pub use engine::{gradient_histogram, toy_minimize, train, train_baseline, train_guided, Split};
pub use histogram::{Histogram, HIST_BINS, HIST_HI, HIST_LO};
pub use loss::{loss_and_error, metric, sigmoid, toy_objective, toy_objective_derivative, toy_x, ClassificationLoss};
pub use report::{EpochRecord, TrainReport, TrajectoryPoint};

pub use crate::data::Task;
use crate::exec::Parallelism;
use crate::grad::{make_schedule, GuidedSchedule};
use crate::optim::OptimizerKind;
use crate::sim::ExecutionMode;
use crate::{Error, Result};

/// Default SPSA perturbation magnitude (radians).
pub const DEFAULT_SPSA_C: f64 = 0.05;

fn default_c() -> f64 {
    DEFAULT_SPSA_C
}

/// SPSA sample count: a number, or `"max"` for one sample per parameter.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SampleCount {
    Fixed(usize),
    Max(MaxMarker),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MaxMarker {
    Max,
}

impl SampleCount {
    pub const MAX: SampleCount = SampleCount::Max(MaxMarker::Max);

    pub fn resolve(self, n_params: usize) -> usize {
        match self {
            SampleCount::Fixed(k) => k,
            SampleCount::Max(_) => n_params,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum Estimator {
    ParamShift,
    Spsa {
        k: SampleCount,
        #[serde(default = "default_c")]
        c: f64,
    },
    Guided {
        tau: f64,
        /// Damping; `None` resolves to 1 in ideal mode and 0.5 otherwise.
        #[serde(default)]
        epsilon: Option<f64>,
        #[serde(default = "default_c")]
        c: f64,
    },
}

impl Estimator {
    pub fn is_guided(&self) -> bool {
        matches!(self, Estimator::Guided { .. })
    }

    pub fn resolve_epsilon(self, mode: &ExecutionMode) -> Self {
        match self {
            Estimator::Guided { tau, epsilon: None, c } => {
                Estimator::Guided { tau, epsilon: Some(if mode.is_ideal() { 1.0 } else { 0.5 }), c }
            }
            other => other,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum Init {
    /// Uniform on [0, π]. `seed` defaults to the run's master seed.
    UniformZeroPi {
        #[serde(default)]
        seed: Option<u64>,
    },
    Uniform {
        low: f64,
        high: f64,
        #[serde(default)]
        seed: Option<u64>,
    },
    Zeros,
}

impl Default for Init {
    fn default() -> Self {
        Init::UniformZeroPi { seed: None }
    }
}

impl Init {
    pub fn sample(&self, n_params: usize, master_seed: u64) -> Vec<f64> {
        use rand::Rng;
        let (low, high, seed) = match *self {
            Init::Zeros => return vec![0.0; n_params],
            Init::UniformZeroPi { seed } => (0.0, std::f64::consts::PI, seed),
            Init::Uniform { low, high, seed } => (low, high, seed),
        };
        let mut rng = crate::Seed(seed.unwrap_or(master_seed)).child(u64::MAX).rng();
        (0..n_params).map(|_| rng.random_range(low..=high)).collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrainConfig {
    pub task: Task,
    pub estimator: Estimator,
    pub epochs: usize,
    pub batch_size: usize,
    pub learning_rate: f64,
    pub optimizer: OptimizerKind,
    pub mode: ExecutionMode,
    pub init: Init,
    pub seed: u64,
    pub share_directions: bool,
    pub classification_loss: ClassificationLoss,
    /// Epochs whose raw gradient entries are binned.
    pub histogram_epochs: Vec<usize>,
    pub parallelism: Parallelism,
}

pub const DEFAULT_BATCH_SIZE: usize = 32;

impl TrainConfig {
    pub fn new(task: Task, estimator: Estimator) -> Self {
        Self {
            task,
            estimator,
            epochs: 100,
            batch_size: DEFAULT_BATCH_SIZE,
            learning_rate: 0.01,
            optimizer: OptimizerKind::Adam,
            mode: ExecutionMode::Ideal,
            init: Init::default(),
            seed: 0,
            share_directions: false,
            classification_loss: ClassificationLoss::default(),
            histogram_epochs: Vec::new(),
            parallelism: Parallelism::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.epochs == 0 {
            return Err(Error::Config("epochs must be at least 1".into()));
        }
        if self.batch_size == 0 {
            return Err(Error::Config("batch_size must be at least 1".into()));
        }
        if !(self.learning_rate > 0.0 && self.learning_rate.is_finite()) {
            return Err(Error::Config(format!("learning_rate must be positive, got {}", self.learning_rate)));
        }
        self.mode.validate()?;
        match self.estimator {
            Estimator::ParamShift => {}
            Estimator::Spsa { k, c } => {
                if k == SampleCount::Fixed(0) {
                    return Err(Error::Config("SPSA k must be at least 1".into()));
                }
                check_c(c)?;
            }
            Estimator::Guided { tau, epsilon, c } => {
                if !(0.0..=1.0).contains(&tau) {
                    return Err(Error::Config(format!("tau must be in [0, 1], got {tau}")));
                }
                if let Some(e) = epsilon {
                    if !(e > 0.0 && e <= 1.0) {
                        return Err(Error::Config(format!("epsilon must be in (0, 1], got {e}")));
                    }
                }
                check_c(c)?;
            }
        }
        Ok(())
    }

    pub fn schedule(&self, n_params: usize) -> Result<Option<GuidedSchedule>> {
        match self.estimator {
            Estimator::Guided { tau, .. } => make_schedule(n_params, tau, self.epochs).map(Some),
            _ => Ok(None),
        }
    }

    /// SPSA samples per data point in `epoch` (0 for pure parameter-shift).
    pub fn k_epoch(&self, schedule: Option<&GuidedSchedule>, n_params: usize, epoch: usize) -> usize {
        match (self.estimator, schedule) {
            (Estimator::Spsa { k, .. }, _) => k.resolve(n_params),
            (Estimator::Guided { .. }, Some(s)) => s.k_at(epoch),
            _ => 0,
        }
    }
}

fn check_c(c: f64) -> Result<()> {
    if !(c > 0.0 && c.is_finite()) {
        return Err(Error::Config(format!("SPSA c must be positive, got {c}")));
    }
    Ok(())
}
