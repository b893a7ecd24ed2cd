//! Run configuration documents (JSON).

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::circuit::{AnsatzSpec, ParamCircuit};
use crate::data::{gen_friedman, load_csv, split_with_range, Dataset, Task, DEFAULT_FEATURE_RANGE, DEFAULT_SPLIT};
use crate::exec::Parallelism;
use crate::optim::OptimizerKind;
use crate::sim::{ExecutionMode, PauliZObservable};
use crate::train::{ClassificationLoss, Estimator, Init, Split, TrainConfig, DEFAULT_BATCH_SIZE};
use crate::{Error, Result, Seed};

fn default_split() -> [f64; 3] {
    DEFAULT_SPLIT
}

fn default_feature_range() -> [f64; 2] {
    DEFAULT_FEATURE_RANGE
}

fn default_friedman_n() -> usize {
    500
}

fn default_batch_size() -> usize {
    DEFAULT_BATCH_SIZE
}

fn default_learning_rate() -> f64 {
    0.01
}

fn default_mode() -> ExecutionMode {
    ExecutionMode::Ideal
}

fn default_replicas() -> usize {
    10
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum DatasetConfig {
    Friedman {
        #[serde(default = "default_friedman_n")]
        n: usize,
        #[serde(default)]
        noise_std: f64,
        #[serde(default)]
        seed: u64,
        #[serde(default)]
        split_seed: u64,
        #[serde(default = "default_split")]
        ratios: [f64; 3],
        #[serde(default = "default_feature_range")]
        feature_range: [f64; 2],
    },
    Csv {
        /// Relative paths are taken from the config file's directory.
        path: PathBuf,
        target_column: String,
        #[serde(default)]
        split_seed: u64,
        #[serde(default = "default_split")]
        ratios: [f64; 3],
        #[serde(default = "default_feature_range")]
        feature_range: [f64; 2],
    },
    /// Input-free replicas for the toy minimization.
    Toy {
        #[serde(default = "default_replicas")]
        replicas: usize,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GradcheckConfig {
    #[serde(default = "GradcheckConfig::default_samples")]
    pub samples: usize,
    #[serde(default = "GradcheckConfig::default_h")]
    pub h: f64,
    #[serde(default = "GradcheckConfig::default_tolerance")]
    pub tolerance: f64,
    #[serde(default = "GradcheckConfig::default_spsa_k")]
    pub spsa_k: Vec<usize>,
    #[serde(default = "GradcheckConfig::default_spsa_c")]
    pub spsa_c: f64,
}

impl GradcheckConfig {
    fn default_samples() -> usize {
        3
    }
    fn default_h() -> f64 {
        1e-4
    }
    fn default_tolerance() -> f64 {
        1e-6
    }
    fn default_spsa_k() -> Vec<usize> {
        vec![100, 1000]
    }
    fn default_spsa_c() -> f64 {
        0.01
    }
}

impl Default for GradcheckConfig {
    fn default() -> Self {
        Self {
            samples: Self::default_samples(),
            h: Self::default_h(),
            tolerance: Self::default_tolerance(),
            spsa_k: Self::default_spsa_k(),
            spsa_c: Self::default_spsa_c(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub name: String,
    pub task: Task,
    pub dataset: DatasetConfig,
    pub ansatz: AnsatzSpec,
    /// Pauli-Z observables as qubit lists. Defaults: `Z⊗n` for regression
    /// and toy runs, one single-qubit Z per class for classification.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub observables: Option<Vec<PauliZObservable>>,
    pub estimator: Estimator,
    pub epochs: usize,
    #[serde(default = "default_batch_size")]
    pub batch_size: usize,
    #[serde(default = "default_learning_rate")]
    pub learning_rate: f64,
    #[serde(default)]
    pub optimizer: OptimizerKind,
    #[serde(default = "default_mode")]
    pub mode: ExecutionMode,
    #[serde(default)]
    pub init: Init,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub share_directions: bool,
    #[serde(default)]
    pub classification_loss: ClassificationLoss,
    #[serde(default)]
    pub histogram_epochs: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_dir: Option<PathBuf>,
    #[serde(default)]
    pub gradcheck: GradcheckConfig,
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    /// Reads, resolves relative dataset paths against the file's directory
    /// and validates.
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read config {}: {e}", path.display())))?;
        let mut cfg = Self::from_json(&text)?;
        if let DatasetConfig::Csv { path: data, .. } = &mut cfg.dataset {
            if data.is_relative() {
                let base = path.parent().unwrap_or_else(|| Path::new("."));
                *data = base.join(&*data);
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let circuit = self.circuit()?;
        self.train_config(Parallelism::Sequential).validate()?;
        match (&self.task, &self.dataset) {
            (Task::Toy, DatasetConfig::Toy { replicas }) => {
                if *replicas == 0 {
                    return Err(Error::Config("dataset.replicas must be at least 1".into()));
                }
                if circuit.n_inputs() != 0 {
                    return Err(Error::Config("toy runs need an ansatz without encoding".into()));
                }
            }
            (Task::Toy, _) => return Err(Error::Config("task toy needs dataset.kind = toy".into())),
            (_, DatasetConfig::Toy { .. }) => {
                return Err(Error::Config("dataset.kind = toy is only valid for task toy".into()))
            }
            (Task::Classification, DatasetConfig::Friedman { .. }) => {
                return Err(Error::Config("the friedman dataset is a regression task".into()))
            }
            _ => {}
        }
        if let Some(obs) = &self.observables {
            if obs.is_empty() {
                return Err(Error::Config("observables must not be empty".into()));
            }
            for o in obs {
                o.check(self.ansatz.n_qubits).map_err(|e| Error::Config(format!("observables: {e}")))?;
            }
        }
        if let Some(&e) = self.histogram_epochs.iter().find(|&&e| e >= self.epochs) {
            return Err(Error::Config(format!("histogram epoch {e} is outside 0..{}", self.epochs)));
        }
        Ok(())
    }

    pub fn circuit(&self) -> Result<ParamCircuit> {
        self.ansatz.build()
    }

    /// Observables with defaults filled in for `n_outputs` targets.
    pub fn resolved_observables(&self, n_outputs: usize) -> Result<Vec<PauliZObservable>> {
        if let Some(obs) = &self.observables {
            return Ok(obs.clone());
        }
        match self.task {
            Task::Classification => {
                if n_outputs > self.ansatz.n_qubits {
                    return Err(Error::Config(format!(
                        "{n_outputs} classes need explicit observables on a {}-qubit circuit",
                        self.ansatz.n_qubits
                    )));
                }
                Ok((0..n_outputs).map(PauliZObservable::single).collect())
            }
            _ => Ok(vec![PauliZObservable::all(self.ansatz.n_qubits)]),
        }
    }

    pub fn train_config(&self, parallelism: Parallelism) -> TrainConfig {
        TrainConfig {
            task: self.task,
            estimator: self.estimator,
            epochs: self.epochs,
            batch_size: self.batch_size,
            learning_rate: self.learning_rate,
            optimizer: self.optimizer,
            mode: self.mode,
            init: self.init,
            seed: self.seed,
            share_directions: self.share_directions,
            classification_loss: self.classification_loss,
            histogram_epochs: self.histogram_epochs.clone(),
            parallelism,
        }
    }

    /// Loads or generates the dataset and splits it. Toy runs get input-free
    /// replicas and a single validation replica.
    pub fn load_data(&self) -> Result<Split> {
        let (raw, split_seed, ratios, range): (Dataset, u64, [f64; 3], [f64; 2]) = match &self.dataset {
            DatasetConfig::Toy { replicas } => {
                return Ok(Split { train: Dataset::toy(*replicas), val: Dataset::toy(1), test: None })
            }
            DatasetConfig::Friedman { n, noise_std, seed, split_seed, ratios, feature_range } => {
                (gen_friedman(*n, *noise_std, Seed(*seed))?, *split_seed, *ratios, *feature_range)
            }
            DatasetConfig::Csv { path, target_column, split_seed, ratios, feature_range } => {
                if !path.exists() {
                    return Err(Error::Config(format!("dataset file {} does not exist", path.display())));
                }
                (load_csv(path, target_column, self.task)?, *split_seed, *ratios, *feature_range)
            }
        };
        let circuit = self.circuit()?;
        if raw.n_features() != circuit.n_inputs() {
            return Err(Error::Config(format!(
                "dataset has {} features but the ansatz encodes {}",
                raw.n_features(),
                circuit.n_inputs()
            )));
        }
        let (train, val, test) = split_with_range(&raw, ratios, Seed(split_seed), range)?;
        Ok(Split { train, val, test: Some(test) })
    }
}
