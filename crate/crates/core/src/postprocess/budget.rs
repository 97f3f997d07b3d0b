use serde::{Deserialize, Serialize};

use crate::physics::{BoundaryDriver, BoundaryMode, DimensionlessModel, Drivers, ScalarClosure};
use crate::series::{FieldSeries, Snapshot};

/// Moisture balance of a run, per stored interval.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct MassBudget {
    /// End time of each interval.
    pub t_star: Vec<f64>,
    /// Change of stored moisture over the interval.
    pub stored: Vec<f64>,
    /// Net surface inflow integrated over the interval (trapezoidal).
    pub inflow: Vec<f64>,
    pub residual: Vec<f64>,
    /// `sum |residual| / sum |inflow|`.
    pub closure: f64,
}

/// `int_a^b c(s) ds` by 3-point Gauss.
fn capacity_integral(c: &ScalarClosure, a: f64, b: f64) -> f64 {
    const NODES: [f64; 3] = [-0.774_596_669_241_483_4, 0.0, 0.774_596_669_241_483_4];
    const WEIGHTS: [f64; 3] = [5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0];
    let (m, r) = (0.5 * (a + b), 0.5 * (b - a));
    NODES.iter().zip(WEIGHTS).map(|(z, w)| w * c.value(m + r * z)).sum::<f64>() * r
}

/// Dimensionless flow `Fo_M k_M v_x` into the wall through one surface.
fn surface_inflow(model: &DimensionlessModel, d: &BoundaryDriver, left: bool, s: &Snapshot) -> f64 {
    let (i, x) = if left { (0, 0.0) } else { (s.v.len() - 1, 1.0) };
    let v = s.v[i];
    match d.mode {
        BoundaryMode::Dirichlet => {
            let flux = model.fo_m * model.closure_at(x).k_m.value(v) * s.theta[i];
            if left {
                -flux
            } else {
                flux
            }
        }
        BoundaryMode::Robin => {
            let bi = if left { model.left.bi_m } else { model.right.bi_m };
            let rain = if left { d.g_inf.eval(s.t) } else { 0.0 };
            model.fo_m * (-bi * (v - d.v_inf.eval(s.t)) + rain)
        }
    }
}

fn trapezoid(grid: &[f64], y: impl Fn(usize) -> f64) -> f64 {
    grid.windows(2).enumerate().map(|(i, w)| 0.5 * (w[1] - w[0]) * (y(i) + y(i + 1))).sum()
}

/// Stored-moisture change against integrated surface inflow between stored layers.
pub fn mass_budget(series: &FieldSeries, model: &DimensionlessModel, drivers: &Drivers) -> MassBudget {
    let inflow = |s: &Snapshot| surface_inflow(model, &drivers.left, true, s) + surface_inflow(model, &drivers.right, false, s);
    let mut b = MassBudget::default();
    for w in series.snapshots.windows(2) {
        let (p, n) = (&w[0], &w[1]);
        let stored = trapezoid(&series.grid, |i| capacity_integral(&model.closure_at(series.grid[i]).c_m, p.v[i], n.v[i]));
        let flow = 0.5 * (n.t - p.t) * (inflow(p) + inflow(n));
        b.t_star.push(n.t);
        b.stored.push(stored);
        b.inflow.push(flow);
        b.residual.push(stored - flow);
    }
    let total: f64 = b.inflow.iter().map(|f| f.abs()).sum();
    let miss: f64 = b.residual.iter().map(|r| r.abs()).sum();
    b.closure = if total > 0.0 { miss / total } else { miss };
    b
}
