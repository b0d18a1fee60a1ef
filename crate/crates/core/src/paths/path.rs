use crate::error::{Error, Result};

use super::Partition;

/// Values sampled on a grid. Paths only exist at grid times; nothing is
/// interpolated.
#[derive(Debug, Clone, PartialEq)]
pub struct Path {
    grid: Partition,
    values: Vec<f64>,
    label: String,
}

impl Path {
    pub fn new(grid: Partition, values: Vec<f64>, label: impl Into<String>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::invalid(format!(
                "path has {} values for {} grid times",
                values.len(),
                grid.len()
            )));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::invalid(format!("non-finite path value at index {i}")));
        }
        Ok(Self {
            grid,
            values,
            label: label.into(),
        })
    }

    pub fn grid(&self) -> &Partition {
        &self.grid
    }

    pub fn times(&self) -> &[f64] {
        self.grid.times()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn first(&self) -> f64 {
        self.values[0]
    }

    pub fn last(&self) -> f64 {
        *self.values.last().unwrap()
    }

    pub fn horizon(&self) -> f64 {
        self.grid.horizon()
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Values at the times of `partition`, which must lie on the grid.
    pub fn restrict(&self, partition: &Partition) -> Result<Vec<f64>> {
        Ok(partition
            .indices_in(&self.grid)?
            .into_iter()
            .map(|i| self.values[i])
            .collect())
    }

    pub fn map(&self, f: impl Fn(f64, f64) -> f64, label: impl Into<String>) -> Result<Path> {
        let values = self.times().iter().zip(&self.values).map(|(&t, &x)| f(t, x)).collect();
        Path::new(self.grid.clone(), values, label)
    }

    pub fn is_positive(&self) -> bool {
        self.values.iter().all(|&v| v > 0.0)
    }
}
