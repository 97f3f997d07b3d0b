use crate::physics::{CoefficientClosure, DimensionlessModel};
use crate::series::{resample_linear, Snapshot};

use super::ReferenceError;

/// Node layout: uniform inside each layer, with a node on every interface.
#[derive(Debug, Clone)]
pub(crate) struct Layout {
    pub x: Vec<f64>,
    /// Cell widths, one per pair of neighbouring nodes.
    pub h: Vec<f64>,
    pub cell_layer: Vec<usize>,
    pub interface: Vec<bool>,
}

impl Layout {
    pub fn new(model: &DimensionlessModel, dx: f64) -> Result<Self, ReferenceError> {
        let mut x = vec![0.0];
        let mut cell_layer = Vec::new();
        for (k, layer) in model.layers.iter().enumerate() {
            let width = layer.x_end - layer.x_start;
            let cells = (width / dx).round().max(1.0) as usize;
            if cells < 3 {
                return Err(ReferenceError::InvalidGrid(format!("layer {k} gets {cells} cells at dx = {dx}")));
            }
            for j in 1..=cells {
                x.push(layer.x_start + width * j as f64 / cells as f64);
                cell_layer.push(k);
            }
        }
        let n = x.len();
        let h = x.windows(2).map(|w| w[1] - w[0]).collect();
        let interface = (0..n).map(|i| i > 0 && i + 1 < n && cell_layer[i - 1] != cell_layer[i]).collect();
        Ok(Self { x, h, cell_layer, interface })
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn min_h(&self) -> f64 {
        self.h.iter().cloned().fold(f64::INFINITY, f64::min)
    }

    /// Closures seen from the left and right cell of node `i`.
    pub fn sides<'m>(&self, model: &'m DimensionlessModel, i: usize) -> (&'m CoefficientClosure, &'m CoefficientClosure) {
        let n = self.len();
        let left = self.cell_layer[i.saturating_sub(1).min(n - 2)];
        let right = self.cell_layer[i.min(n - 2)];
        (&model.layers[left].closure, &model.layers[right].closure)
    }

    /// Node values of one coefficient from the left and right materials.
    pub fn side_values(
        &self,
        model: &DimensionlessModel,
        v: &[f64],
        pick: impl Fn(&CoefficientClosure, f64) -> f64,
    ) -> (Vec<f64>, Vec<f64>) {
        (0..self.len())
            .map(|i| {
                let (l, r) = self.sides(model, i);
                let a = pick(l, v[i]);
                let b = if self.interface[i] { pick(r, v[i]) } else { a };
                (a, b)
            })
            .unzip()
    }

    /// Arithmetic face averages within each material.
    pub fn faces(&self, left: &[f64], right: &[f64]) -> Vec<f64> {
        (0..self.h.len()).map(|i| 0.5 * (right[i] + left[i + 1])).collect()
    }

    /// Control-volume weight of node `i`: half of each neighbouring cell.
    pub fn capacities(&self, left: &[f64], right: &[f64]) -> Vec<f64> {
        let n = self.len();
        (0..n)
            .map(|i| {
                let hl = if i > 0 { self.h[i - 1] } else { 0.0 };
                let hr = if i + 1 < n { self.h[i] } else { 0.0 };
                0.5 * (hl * left[i] + hr * right[i])
            })
            .collect()
    }

    /// Second-order one-sided slope at the left end of cell run starting at `i`.
    pub fn forward_slope(&self, w: &[f64], i: usize) -> f64 {
        (-3.0 * w[i] + 4.0 * w[i + 1] - w[i + 2]) / (2.0 * self.h[i])
    }

    pub fn backward_slope(&self, w: &[f64], i: usize) -> f64 {
        (3.0 * w[i] - 4.0 * w[i - 1] + w[i - 2]) / (2.0 * self.h[i - 1])
    }

    /// Nodal slopes: central on the interior, one-sided at the ends, averaged
    /// one-sided at interfaces.
    pub fn slopes(&self, w: &[f64]) -> Vec<f64> {
        let n = self.len();
        (0..n)
            .map(|i| {
                if i == 0 {
                    self.forward_slope(w, 0)
                } else if i == n - 1 {
                    self.backward_slope(w, i)
                } else if self.interface[i] {
                    0.5 * (self.forward_slope(w, i) + self.backward_slope(w, i))
                } else {
                    let (hl, hr) = (self.h[i - 1], self.h[i]);
                    (hl * hl * w[i + 1] - hr * hr * w[i - 1] + (hr * hr - hl * hl) * w[i]) / (hl * hr * (hl + hr))
                }
            })
            .collect()
    }

    pub fn snapshot(&self, t: f64, v: &[f64], u: &[f64], grid: &[f64]) -> Snapshot {
        Snapshot {
            t,
            v: resample_linear(&self.x, v, grid),
            theta: resample_linear(&self.x, &self.slopes(v), grid),
            u: resample_linear(&self.x, u, grid),
            mu: resample_linear(&self.x, &self.slopes(u), grid),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::physics::library;

    #[test]
    fn interface_is_a_node() {
        let model = library::multilayer_model();
        let l = Layout::new(&model, 1e-2).unwrap();
        let k = l.interface.iter().position(|&b| b).unwrap();
        assert!((l.x[k] - library::MULTILAYER_INTERFACE).abs() < 1e-15);
        assert_eq!(l.interface.iter().filter(|&&b| b).count(), 1);
        assert_eq!(*l.x.last().unwrap(), 1.0);
    }

    #[test]
    fn slopes_of_a_quadratic_are_exact() {
        let model = library::multilayer_model();
        let l = Layout::new(&model, 0.05).unwrap();
        let w: Vec<f64> = l.x.iter().map(|x| 2.0 * x * x - x).collect();
        for (x, s) in l.x.iter().zip(l.slopes(&w)) {
            assert!((s - (4.0 * x - 1.0)).abs() < 1e-11);
        }
    }

    #[test]
    fn single_layer_node_count() {
        let l = Layout::new(&library::single_layer_model(), 1e-3).unwrap();
        assert_eq!(l.len(), 1001);
        assert!((l.min_h() - 1e-3).abs() < 1e-15);
    }
}
