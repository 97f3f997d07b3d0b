//! Field snapshots on a fixed output grid, shared by all solvers.

use serde::{Deserialize, Serialize};

/// Dimensionless fields at one time layer.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Snapshot {
    pub t: f64,
    pub v: Vec<f64>,
    pub theta: Vec<f64>,
    pub u: Vec<f64>,
    pub mu: Vec<f64>,
}

impl Snapshot {
    pub fn uniform(t: f64, points: usize, v: f64, u: f64) -> Self {
        Self { t, v: vec![v; points], theta: vec![0.0; points], u: vec![u; points], mu: vec![0.0; points] }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct FieldSeries {
    pub grid: Vec<f64>,
    pub snapshots: Vec<Snapshot>,
}

impl FieldSeries {
    pub fn new(grid: Vec<f64>) -> Self {
        Self { grid, snapshots: Vec::new() }
    }

    pub fn times(&self) -> Vec<f64> {
        self.snapshots.iter().map(|s| s.t).collect()
    }

    pub fn last(&self) -> Option<&Snapshot> {
        self.snapshots.last()
    }

    /// Keeps the snapshots whose time is within `tol` of a multiple of `every`.
    pub fn thinned(&self, every: f64, tol: f64) -> Self {
        let snapshots = self
            .snapshots
            .iter()
            .filter(|s| {
                let k = (s.t / every).round();
                (s.t - k * every).abs() <= tol
            })
            .cloned()
            .collect();
        Self { grid: self.grid.clone(), snapshots }
    }
}

/// `count` uniform points on `[0, 1]`.
pub fn uniform_grid(count: usize) -> Vec<f64> {
    let n = count.max(2) - 1;
    (0..=n).map(|k| k as f64 / n as f64).collect()
}

/// Linear interpolation of nodal values onto `targets`; both grids increasing.
pub fn resample_linear(x: &[f64], y: &[f64], targets: &[f64]) -> Vec<f64> {
    targets
        .iter()
        .map(|&t| crate::physics::drivers::interpolate(x, y, t))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_endpoints() {
        let g = uniform_grid(201);
        assert_eq!(g.len(), 201);
        assert_eq!(g[0], 0.0);
        assert_eq!(g[200], 1.0);
        assert_eq!(g[100], 0.5);
    }

    #[test]
    fn thinning_keeps_multiples() {
        let mut s = FieldSeries::new(uniform_grid(3));
        for k in 0..=10 {
            s.snapshots.push(Snapshot::uniform(0.1 * k as f64, 3, 1.0, 1.0));
        }
        let t = s.thinned(0.5, 1e-9);
        assert_eq!(t.times().len(), 3);
    }
}
