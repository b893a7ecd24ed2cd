//! First-order parameter updates.

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OptimizerKind {
    Sgd,
    #[default]
    Adam,
    #[serde(rename = "amsgrad")]
    AmsGrad,
    #[serde(rename = "rmsprop")]
    RmsProp,
}

#[derive(Clone, Debug)]
pub struct Optimizer {
    kind: OptimizerKind,
    lr: f64,
    beta1: f64,
    beta2: f64,
    eps: f64,
    rho: f64,
    m: Vec<f64>,
    v: Vec<f64>,
    v_max: Vec<f64>,
    t: u64,
}

impl Optimizer {
    /// Adam-family defaults β1 = 0.9, β2 = 0.999, ε = 1e-8; RMSProp ρ = 0.9.
    pub fn new(kind: OptimizerKind, learning_rate: f64, n_params: usize) -> Self {
        Self {
            kind,
            lr: learning_rate,
            beta1: 0.9,
            beta2: 0.999,
            eps: 1e-8,
            rho: 0.9,
            m: vec![0.0; n_params],
            v: vec![0.0; n_params],
            v_max: vec![0.0; n_params],
            t: 0,
        }
    }

    pub fn kind(&self) -> OptimizerKind {
        self.kind
    }

    pub fn steps(&self) -> u64 {
        self.t
    }

    /// Updates `params` in place from the loss gradient `grad`.
    pub fn step(&mut self, params: &mut [f64], grad: &[f64]) -> Result<()> {
        if params.len() != grad.len() || params.len() != self.m.len() {
            return Err(Error::Binding(format!(
                "optimizer sized for {} params, got params {} / grad {}",
                self.m.len(),
                params.len(),
                grad.len()
            )));
        }
        if let Some(i) = grad.iter().position(|g| !g.is_finite()) {
            return Err(Error::NumericFault(format!("gradient entry {i} is {} at optimizer step {}", grad[i], self.t)));
        }
        self.t += 1;
        let t = self.t as i32;
        match self.kind {
            OptimizerKind::Sgd => {
                for (p, g) in params.iter_mut().zip(grad) {
                    *p -= self.lr * g;
                }
            }
            OptimizerKind::Adam | OptimizerKind::AmsGrad => {
                let bc1 = 1.0 - self.beta1.powi(t);
                let bc2 = 1.0 - self.beta2.powi(t);
                for i in 0..params.len() {
                    let g = grad[i];
                    self.m[i] = self.beta1 * self.m[i] + (1.0 - self.beta1) * g;
                    self.v[i] = self.beta2 * self.v[i] + (1.0 - self.beta2) * g * g;
                    let second = if self.kind == OptimizerKind::AmsGrad {
                        self.v_max[i] = self.v_max[i].max(self.v[i]);
                        self.v_max[i]
                    } else {
                        self.v[i]
                    };
                    let m_hat = self.m[i] / bc1;
                    let v_hat = second / bc2;
                    params[i] -= self.lr * m_hat / (v_hat.sqrt() + self.eps);
                }
            }
            OptimizerKind::RmsProp => {
                for i in 0..params.len() {
                    let g = grad[i];
                    self.v[i] = self.rho * self.v[i] + (1.0 - self.rho) * g * g;
                    params[i] -= self.lr * g / (self.v[i].sqrt() + self.eps);
                }
            }
        }
        Ok(())
    }
}
