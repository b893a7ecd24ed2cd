use serde::{Deserialize, Serialize};

use crate::data::Task;

/// Loss for classification runs. Class probabilities are the sigmoids of the
/// observable values in both cases.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClassificationLoss {
    #[default]
    BinaryCrossEntropy,
    Mse,
}

pub fn sigmoid(x: f64) -> f64 {
    1.0 / (1.0 + (-x).exp())
}

/// Toy objective `L(x) = sin(x/2) + sin(2.25 sin 4x)`.
pub fn toy_objective(x: f64) -> f64 {
    (x / 2.0).sin() + (2.25 * (4.0 * x).sin()).sin()
}

pub fn toy_objective_derivative(x: f64) -> f64 {
    0.5 * (x / 2.0).cos() + (2.25 * (4.0 * x).sin()).cos() * 9.0 * (4.0 * x).cos()
}

/// Toy decoding from the observable value: `x = π f`.
pub fn toy_x(f: f64) -> f64 {
    std::f64::consts::PI * f
}

/// Batch loss and, per sample, `∂loss/∂f_o` (the error vector fed to the
/// chain rule). Both include the `1/B` batch mean.
pub fn loss_and_error(
    task: Task,
    class_loss: ClassificationLoss,
    predictions: &[Vec<f64>],
    targets: &[Vec<f64>],
) -> (f64, Vec<Vec<f64>>) {
    assert_eq!(predictions.len(), targets.len(), "predictions and targets differ in length");
    let b = predictions.len() as f64;
    let mut loss = 0.0;
    let errors = predictions
        .iter()
        .zip(targets)
        .map(|(pred, target)| match task {
            Task::Regression => {
                assert_eq!(pred.len(), target.len());
                pred.iter()
                    .zip(target)
                    .map(|(p, y)| {
                        loss += (p - y) * (p - y);
                        2.0 * (p - y) / b
                    })
                    .collect()
            }
            Task::Classification => {
                assert_eq!(pred.len(), target.len());
                pred.iter()
                    .zip(target)
                    .map(|(f, y)| {
                        let p = sigmoid(*f);
                        match class_loss {
                            ClassificationLoss::BinaryCrossEntropy => {
                                loss -= y * p.ln() + (1.0 - y) * (1.0 - p).ln();
                                (p - y) / b
                            }
                            ClassificationLoss::Mse => {
                                loss += (p - y) * (p - y);
                                2.0 * (p - y) * p * (1.0 - p) / b
                            }
                        }
                    })
                    .collect()
            }
            Task::Toy => {
                let x = toy_x(pred[0]);
                loss += toy_objective(x);
                vec![toy_objective_derivative(x) * std::f64::consts::PI / b]
            }
        })
        .collect();
    (loss / b, errors)
}

/// Validation metric: MAE for regression, error rate for classification,
/// `L(x)` for the toy task. Lower is better in all three.
pub fn metric(task: Task, predictions: &[Vec<f64>], targets: &[Vec<f64>]) -> f64 {
    let n = predictions.len() as f64;
    match task {
        Task::Regression => {
            let count = predictions.iter().map(Vec::len).sum::<usize>() as f64;
            predictions.iter().zip(targets).flat_map(|(p, y)| p.iter().zip(y).map(|(a, b)| (a - b).abs())).sum::<f64>()
                / count
        }
        Task::Classification => {
            let wrong = predictions.iter().zip(targets).filter(|(p, y)| argmax(p) != argmax(y)).count();
            wrong as f64 / n
        }
        Task::Toy => predictions.iter().map(|p| toy_objective(toy_x(p[0]))).sum::<f64>() / n,
    }
}

fn argmax(v: &[f64]) -> usize {
    v.iter().enumerate().max_by(|a, b| a.1.total_cmp(b.1)).map_or(0, |(i, _)| i)
}
