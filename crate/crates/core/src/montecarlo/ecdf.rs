use crate::error::{invalid, Result};

/// Empirical CDF of a finite sample, `F(x) = #{x_i <= x} / count`.
#[derive(Debug, Clone, PartialEq)]
pub struct Ecdf {
    values: Vec<f64>,
}

impl Ecdf {
    /// Builds the ECDF. NaN values are rejected.
    pub fn new(mut values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return invalid("ECDF needs at least one value");
        }
        if values.iter().any(|v| v.is_nan()) {
            return invalid("ECDF input contains NaN");
        }
        values.sort_by(f64::total_cmp);
        Ok(Ecdf { values })
    }

    pub fn count(&self) -> usize {
        self.values.len()
    }

    /// Sorted sample values.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Right-continuous evaluation.
    pub fn eval(&self, x: f64) -> f64 {
        let k = self.values.partition_point(|&v| v <= x);
        k as f64 / self.values.len() as f64
    }

    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.values.len() as f64
    }

    /// Empirical quantile by the lower order statistic.
    pub fn quantile(&self, q: f64) -> f64 {
        let n = self.values.len();
        let idx = ((q.clamp(0.0, 1.0) * n as f64).ceil() as usize).clamp(1, n) - 1;
        self.values[idx]
    }
}
