//! Datasets: Friedman #1 generation, CSV ingestion, [−π, π] normalization
//! and seeded train/validation/test splits.

use std::f64::consts::PI;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::{Error, Result, Seed};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Task {
    Regression,
    Classification,
    Toy,
}

/// Per-column min/max used to map features onto `feature_range` and regression
/// targets onto [−1, 1].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Normalization {
    pub features: Vec<(f64, f64)>,
    pub targets: Option<Vec<(f64, f64)>>,
    #[serde(default = "default_feature_range")]
    pub feature_range: [f64; 2],
}

/// Encoding-angle interval features are mapped to.
pub const DEFAULT_FEATURE_RANGE: [f64; 2] = [-PI, PI];

fn default_feature_range() -> [f64; 2] {
    DEFAULT_FEATURE_RANGE
}

#[derive(Clone, Debug, PartialEq)]
pub struct Dataset {
    pub task: Task,
    pub features: Vec<Vec<f64>>,
    /// One row per sample: the regression target(s) or a one-hot class row.
    pub targets: Vec<Vec<f64>>,
    pub normalization: Option<Normalization>,
}

impl Dataset {
    pub fn len(&self) -> usize {
        self.features.len()
    }

    pub fn is_empty(&self) -> bool {
        self.features.is_empty()
    }

    pub fn n_features(&self) -> usize {
        self.features.first().map_or(0, Vec::len)
    }

    pub fn n_outputs(&self) -> usize {
        self.targets.first().map_or(0, Vec::len)
    }

    /// `replicas` input-free samples for the toy minimization.
    pub fn toy(replicas: usize) -> Self {
        Self {
            task: Task::Toy,
            features: vec![Vec::new(); replicas],
            targets: vec![Vec::new(); replicas],
            normalization: None,
        }
    }

    fn subset(&self, idx: &[usize]) -> Dataset {
        Dataset {
            task: self.task,
            features: idx.iter().map(|&i| self.features[i].clone()).collect(),
            targets: idx.iter().map(|&i| self.targets[i].clone()).collect(),
            normalization: self.normalization.clone(),
        }
    }
}

/// Friedman #1 target: `10 sin(π x₁x₂) + 20 (x₃ − ½)² + 10 x₄ + 5 x₅`.
pub fn friedman1(x: &[f64]) -> f64 {
    10.0 * (PI * x[0] * x[1]).sin() + 20.0 * (x[2] - 0.5).powi(2) + 10.0 * x[3] + 5.0 * x[4]
}

/// `n` points with features uniform on [0, 1]⁵ plus optional Gaussian
/// observation noise.
pub fn gen_friedman(n: usize, noise_std: f64, seed: Seed) -> Result<Dataset> {
    if n == 0 {
        return Err(Error::Config("friedman sample count must be at least 1".into()));
    }
    let noise = Normal::new(0.0, noise_std.max(0.0)).map_err(|e| Error::Config(format!("friedman noise_std: {e}")))?;
    let mut rng = seed.rng();
    let mut features = Vec::with_capacity(n);
    let mut targets = Vec::with_capacity(n);
    for _ in 0..n {
        let x: Vec<f64> = (0..5).map(|_| rng.random::<f64>()).collect();
        let mut y = friedman1(&x);
        if noise_std > 0.0 {
            y += noise.sample(&mut rng);
        }
        features.push(x);
        targets.push(vec![y]);
    }
    Ok(Dataset { task: Task::Regression, features, targets, normalization: None })
}

/// Reads a numeric CSV with a header row. `target_column` is the target;
/// every other column is a feature. Classification targets are one-hot
/// encoded over the sorted distinct labels.
pub fn load_csv(path: impl AsRef<Path>, target_column: &str, task: Task) -> Result<Dataset> {
    let path = path.as_ref();
    let mut reader = csv::ReaderBuilder::new().has_headers(true).trim(csv::Trim::All).from_path(path)?;
    let headers = reader.headers()?.clone();
    let target_idx = headers.iter().position(|h| h == target_column).ok_or_else(|| Error::Ingestion {
        row: 0,
        msg: format!("no column named {target_column:?} in {}", path.display()),
    })?;
    let mut features = Vec::new();
    let mut raw_targets = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let row = i + 1;
        let record = record.map_err(|e| Error::Ingestion { row, msg: e.to_string() })?;
        if record.len() != headers.len() {
            return Err(Error::Ingestion {
                row,
                msg: format!("expected {} cells, found {}", headers.len(), record.len()),
            });
        }
        let mut x = Vec::with_capacity(headers.len() - 1);
        let mut y = 0.0;
        for (c, cell) in record.iter().enumerate() {
            let v: f64 = cell.parse().map_err(|_| Error::Ingestion {
                row,
                msg: format!("non-numeric cell {cell:?} in column {:?}", &headers[c]),
            })?;
            if c == target_idx {
                y = v;
            } else {
                x.push(v);
            }
        }
        features.push(x);
        raw_targets.push(y);
    }
    if features.is_empty() {
        return Err(Error::Ingestion { row: 0, msg: format!("{} has no data rows", path.display()) });
    }
    let targets = match task {
        Task::Classification => {
            let mut labels = raw_targets.clone();
            labels.sort_by(f64::total_cmp);
            labels.dedup();
            raw_targets.iter().map(|y| labels.iter().map(|l| if l == y { 1.0 } else { 0.0 }).collect()).collect()
        }
        _ => raw_targets.into_iter().map(|y| vec![y]).collect(),
    };
    Ok(Dataset { task, features, targets, normalization: None })
}

fn column_ranges(rows: &[Vec<f64>]) -> Vec<(f64, f64)> {
    let width = rows.first().map_or(0, Vec::len);
    (0..width)
        .map(|c| {
            rows.iter().map(|r| r[c]).fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)))
        })
        .collect()
}

impl Normalization {
    /// Fits ranges on `ds` for features mapped to [−π, π]. Regression
    /// targets go to [−1, 1]; classification and toy targets are left alone.
    pub fn fit(ds: &Dataset) -> Result<Self> {
        Self::fit_with_range(ds, DEFAULT_FEATURE_RANGE)
    }

    // Negated comparisons also reject NaN bounds.
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    pub fn fit_with_range(ds: &Dataset, feature_range: [f64; 2]) -> Result<Self> {
        if !(feature_range[1] > feature_range[0] && feature_range.iter().all(|v| v.is_finite())) {
            return Err(Error::Config(format!("feature_range must be increasing, got {feature_range:?}")));
        }
        let features = column_ranges(&ds.features);
        if let Some(c) = features.iter().position(|(lo, hi)| !(hi > lo)) {
            return Err(Error::DegenerateFeature(c));
        }
        let targets = if ds.task == Task::Regression {
            let t = column_ranges(&ds.targets);
            if t.iter().any(|(lo, hi)| !(hi > lo)) {
                return Err(Error::Config("regression target is constant".into()));
            }
            Some(t)
        } else {
            None
        };
        Ok(Self { features, targets, feature_range })
    }

    pub fn apply(&self, ds: &Dataset) -> Dataset {
        let [a, b] = self.feature_range;
        let features = ds
            .features
            .iter()
            .map(|r| r.iter().zip(&self.features).map(|(v, &(lo, hi))| a + (b - a) * (v - lo) / (hi - lo)).collect())
            .collect();
        let targets = match &self.targets {
            Some(ranges) => ds
                .targets
                .iter()
                .map(|r| r.iter().zip(ranges).map(|(v, &(lo, hi))| -1.0 + 2.0 * (v - lo) / (hi - lo)).collect())
                .collect(),
            None => ds.targets.clone(),
        };
        Dataset { task: ds.task, features, targets, normalization: Some(self.clone()) }
    }

    /// Maps a scaled regression output back to target units.
    pub fn denormalize_target(&self, column: usize, scaled: f64) -> f64 {
        match &self.targets {
            Some(r) => {
                let (lo, hi) = r[column];
                lo + (scaled + 1.0) * (hi - lo) / 2.0
            }
            None => scaled,
        }
    }
}

/// Normalizes `ds` with statistics fitted on `ds` itself.
pub fn normalize(ds: &Dataset) -> Result<Dataset> {
    Ok(Normalization::fit(ds)?.apply(ds))
}

pub const DEFAULT_SPLIT: [f64; 3] = [0.68, 0.22, 0.10];

/// Seeded shuffle, then contiguous train/validation/test slices of sizes
/// `⌊r₀n⌋`, `⌊r₁n⌋` and the remainder. Normalization is fitted on the
/// train slice and applied to all three.
pub fn split(ds: &Dataset, ratios: [f64; 3], seed: Seed) -> Result<(Dataset, Dataset, Dataset)> {
    split_with_range(ds, ratios, seed, DEFAULT_FEATURE_RANGE)
}

/// [`split`] with features mapped to `feature_range` instead of [−π, π].
pub fn split_with_range(
    ds: &Dataset,
    ratios: [f64; 3],
    seed: Seed,
    feature_range: [f64; 2],
) -> Result<(Dataset, Dataset, Dataset)> {
    if ratios.iter().any(|r| *r < 0.0) || (ratios.iter().sum::<f64>() - 1.0).abs() > 1e-9 {
        return Err(Error::Config(format!("split ratios must be non-negative and sum to 1, got {ratios:?}")));
    }
    let n = ds.len();
    let n_train = (ratios[0] * n as f64 + 1e-9).floor() as usize;
    let n_val = ((ratios[1] * n as f64 + 1e-9).floor() as usize).min(n - n_train);
    let n_test = n - n_train - n_val;
    if n_train == 0 || n_val == 0 || n_test == 0 {
        return Err(Error::Config(format!(
            "split of {n} samples with ratios {ratios:?} leaves an empty slice ({n_train}/{n_val}/{n_test})"
        )));
    }
    let mut idx: Vec<usize> = (0..n).collect();
    idx.shuffle(&mut seed.rng());
    let train = ds.subset(&idx[..n_train]);
    let val = ds.subset(&idx[n_train..n_train + n_val]);
    let test = ds.subset(&idx[n_train + n_val..]);
    let norm = Normalization::fit_with_range(&train, feature_range)?;
    Ok((norm.apply(&train), norm.apply(&val), norm.apply(&test)))
}
