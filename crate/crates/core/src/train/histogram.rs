use serde::{Deserialize, Serialize};

pub const HIST_LO: f64 = -0.5;
pub const HIST_HI: f64 = 0.5;
pub const HIST_BINS: usize = 101;

/// Fixed binning of gradient entries over [−0.5, 0.5] with outlier counts
/// on either side.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    pub counts: Vec<u64>,
    pub underflow: u64,
    pub overflow: u64,
}

impl Default for Histogram {
    fn default() -> Self {
        Self { counts: vec![0; HIST_BINS], underflow: 0, overflow: 0 }
    }
}

impl Histogram {
    pub fn bin_width() -> f64 {
        (HIST_HI - HIST_LO) / HIST_BINS as f64
    }

    pub fn bin_edges(i: usize) -> (f64, f64) {
        let w = Self::bin_width();
        (HIST_LO + i as f64 * w, HIST_LO + (i + 1) as f64 * w)
    }

    pub fn central_bin() -> usize {
        HIST_BINS / 2
    }

    pub fn add(&mut self, value: f64) {
        if value < HIST_LO {
            self.underflow += 1;
        } else if value >= HIST_HI {
            self.overflow += 1;
        } else {
            let i = ((value - HIST_LO) / Self::bin_width()).floor() as usize;
            self.counts[i.min(HIST_BINS - 1)] += 1;
        }
    }

    pub fn extend(&mut self, values: &[f64]) {
        values.iter().for_each(|&v| self.add(v));
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum::<u64>() + self.underflow + self.overflow
    }

    pub fn central_fraction(&self) -> f64 {
        self.counts[Self::central_bin()] as f64 / self.total().max(1) as f64
    }

    /// Variance estimated from bin centres, with outliers placed at the
    /// range edges.
    pub fn variance(&self) -> f64 {
        let n = self.total() as f64;
        if n == 0.0 {
            return 0.0;
        }
        let points = self
            .counts
            .iter()
            .enumerate()
            .map(|(i, &c)| {
                let (l, r) = Self::bin_edges(i);
                ((l + r) / 2.0, c as f64)
            })
            .chain([(HIST_LO, self.underflow as f64), (HIST_HI, self.overflow as f64)]);
        let (s, s2) = points.fold((0.0, 0.0), |(s, s2), (x, c)| (s + c * x, s2 + c * x * x));
        s2 / n - (s / n).powi(2)
    }
}
