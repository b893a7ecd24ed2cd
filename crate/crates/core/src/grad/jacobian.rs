use serde::{Deserialize, Serialize};

/// Row-major `observables × parameters` matrix of `∂f_o/∂θ_i`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Jacobian {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Jacobian {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![0.0; rows * cols] }
    }

    pub fn from_rows(rows: Vec<Vec<f64>>) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged Jacobian rows");
        Self { rows: rows.len(), cols, data: rows.into_iter().flatten().collect() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, o: usize, i: usize) -> f64 {
        self.data[o * self.cols + i]
    }

    pub fn row(&self, o: usize) -> &[f64] {
        &self.data[o * self.cols..(o + 1) * self.cols]
    }

    pub fn row_mut(&mut self, o: usize) -> &mut [f64] {
        &mut self.data[o * self.cols..(o + 1) * self.cols]
    }

    pub fn entries(&self) -> &[f64] {
        &self.data
    }

    pub fn row_norm(&self, o: usize) -> f64 {
        self.row(o).iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn frobenius(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn max_abs_diff(&self, other: &Jacobian) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data.iter().zip(&other.data).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    }

    /// `‖self − other‖_F / ‖other‖_F`.
    pub fn relative_error(&self, reference: &Jacobian) -> f64 {
        assert_eq!((self.rows, self.cols), (reference.rows, reference.cols));
        let diff: f64 = self.data.iter().zip(&reference.data).map(|(a, b)| (a - b) * (a - b)).sum();
        diff.sqrt() / reference.frobenius()
    }

    pub fn add_assign(&mut self, other: &Jacobian) {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data.iter_mut().zip(&other.data).for_each(|(a, b)| *a += b);
    }

    pub fn scale(&mut self, factor: f64) {
        self.data.iter_mut().for_each(|x| *x *= factor);
    }

    /// `Jᵀ e`: accumulates into `out` (length `cols`).
    pub fn accumulate_vjp(&self, error: &[f64], out: &mut [f64]) {
        assert_eq!(error.len(), self.rows);
        assert_eq!(out.len(), self.cols);
        for (o, &e) in error.iter().enumerate() {
            for (g, j) in out.iter_mut().zip(self.row(o)) {
                *g += j * e;
            }
        }
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|x| x.is_finite())
    }
}
