use serde::{Deserialize, Serialize};

use super::jacobian::Jacobian;
use crate::{Error, Result};

// Guards `floor` against products like 40 × 0.8 landing a hair below an
// integer.
const FLOOR_GUARD: f64 = 1e-9;

fn floor_count(x: f64) -> usize {
    (x + FLOOR_GUARD).floor().max(0.0) as usize
}

/// Linear perturbation-sample schedule of Guided-SPSA.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GuidedSchedule {
    pub tau: f64,
    pub k_min: usize,
    pub k_max: usize,
    pub gamma: f64,
    pub n_epochs: usize,
}

/// `k_min = max(1, ⌊0.1 n⌋)`, `k_max = ⌊n · min(1, 1.5 − τ)⌋` (never below
/// `k_min`), `γ = (k_max − k_min) / n_epochs`.
pub fn make_schedule(n_params: usize, tau: f64, n_epochs: usize) -> Result<GuidedSchedule> {
    if !(0.0..=1.0).contains(&tau) {
        return Err(Error::Config(format!("tau must be in [0, 1], got {tau}")));
    }
    if n_epochs == 0 {
        return Err(Error::Config("n_epochs must be at least 1".into()));
    }
    let k_min = (n_params / 10).max(1);
    let k_max = floor_count(n_params as f64 * (1.5 - tau).min(1.0)).max(k_min);
    let gamma = (k_max - k_min) as f64 / n_epochs as f64;
    Ok(GuidedSchedule { tau, k_min, k_max, gamma, n_epochs })
}

impl GuidedSchedule {
    /// `⌊k_min + epoch · γ⌋`, capped at `k_max`.
    pub fn k_at(&self, epoch: usize) -> usize {
        floor_count(self.k_min as f64 + epoch as f64 * self.gamma).clamp(self.k_min, self.k_max)
    }
}

/// Mean row norm per observable over the parameter-shift Jacobians of one
/// batch.
pub fn avg_ps_norm(ps_jacobians: &[Jacobian]) -> Result<Vec<f64>> {
    let first = ps_jacobians
        .first()
        .ok_or_else(|| Error::DegeneratePartition("no parameter-shift Jacobians to average".into()))?;
    let mut sigma = vec![0.0; first.rows()];
    for j in ps_jacobians {
        for (o, s) in sigma.iter_mut().enumerate() {
            *s += j.row_norm(o);
        }
    }
    let n = ps_jacobians.len() as f64;
    sigma.iter_mut().for_each(|s| *s /= n);
    Ok(sigma)
}

/// Rescales every non-zero row `r` to `(σ_o / ‖r‖) · ε · r`. Zero rows pass
/// through.
pub fn suppress(spsa: &Jacobian, sigma: &[f64], epsilon: f64) -> Jacobian {
    assert_eq!(sigma.len(), spsa.rows(), "one sigma per observable");
    let mut out = spsa.clone();
    for (o, &s) in sigma.iter().enumerate() {
        let norm = spsa.row_norm(o);
        if norm > 0.0 {
            let factor = s / norm * epsilon;
            out.row_mut(o).iter_mut().for_each(|x| *x *= factor);
        }
    }
    out
}
