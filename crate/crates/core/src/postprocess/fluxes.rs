use serde::{Deserialize, Serialize};

use crate::bvp::CollocationSolution;
use crate::physics::{CoefficientClosure, DimensionlessModel};
use crate::series::FieldSeries;

use super::PostError;

/// Surface fluxes at `x0`: sensible and latent heat in W/m², moisture flow in kg/(m² s).
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct FluxSeries {
    pub x0_star: f64,
    pub t_star: Vec<f64>,
    pub q_s: Vec<f64>,
    pub q_l: Vec<f64>,
    pub g: Vec<f64>,
}

/// Dimensional `(q_s, q_l, g)` from dimensionless `v`, `theta`, `mu`.
pub fn point_fluxes(model: &DimensionlessModel, closure: &CoefficientClosure, v: f64, theta: f64, mu: f64) -> (f64, f64, f64) {
    let r = &model.references;
    let q_s = -r.k_t0_w_per_m_k * closure.k_t.value(v) * r.temperature_k / r.length_m * mu;
    let q_l = -r.k_tm0 * closure.k_tm.value(v) * r.vapour_pressure_pa / r.length_m * theta;
    let g = -r.k_m0_s * closure.k_m.value(v) * r.vapour_pressure_pa / r.length_m * theta;
    (q_s, q_l, g)
}

/// Fluxes at `x0_star` from the stored values and slopes of every snapshot.
pub fn boundary_fluxes(series: &FieldSeries, model: &DimensionlessModel, x0_star: f64) -> Result<FluxSeries, PostError> {
    if !(0.0..=1.0).contains(&x0_star) {
        return Err(PostError::OutOfDomain(x0_star));
    }
    let closure = model.closure_at(x0_star);
    let at = |y: &[f64]| crate::physics::drivers::interpolate(&series.grid, y, x0_star);
    let mut out = FluxSeries { x0_star, ..Default::default() };
    for s in &series.snapshots {
        let (q_s, q_l, g) = point_fluxes(model, closure, at(&s.v), at(&s.theta), at(&s.mu));
        out.t_star.push(s.t);
        out.q_s.push(q_s);
        out.q_l.push(q_l);
        out.g.push(g);
    }
    Ok(out)
}

/// Both one-sided limits at an interface of one time layer.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InterfaceSample {
    pub t_star: f64,
    pub x_star: f64,
    pub u_jump: f64,
    pub mu_jump: f64,
    pub v_jump: f64,
    pub theta_jump: f64,
    /// Sensible plus latent heat flux from each side.
    pub heat_flux: (f64, f64),
    pub moisture_flow: (f64, f64),
}

impl InterfaceSample {
    pub fn heat_flux_jump(&self) -> f64 {
        self.heat_flux.1 - self.heat_flux.0
    }

    pub fn moisture_flow_jump(&self) -> f64 {
        self.moisture_flow.1 - self.moisture_flow.0
    }
}

/// One-sided traces of the moisture and heat solutions at the interface nearest `x_star`.
pub fn interface_sample(
    model: &DimensionlessModel,
    t_star: f64,
    x_star: f64,
    v: &CollocationSolution,
    u: &CollocationSolution,
) -> Result<InterfaceSample, PostError> {
    let side = |sol: &CollocationSolution| -> Result<([f64; 2], [f64; 2]), PostError> {
        let nodes = sol.mesh().nodes();
        let k = nodes
            .iter()
            .position(|&x| (x - x_star).abs() < 1e-12)
            .filter(|&k| k > 0 && k + 1 < nodes.len())
            .ok_or(PostError::OutOfDomain(x_star))?;
        let (l, _) = sol.evaluate_on_interval(k - 1, x_star);
        let (r, _) = sol.evaluate_on_interval(k, x_star);
        Ok(([l[0], l[1]], [r[0], r[1]]))
    };
    let ([vl, thl], [vr, thr]) = side(v)?;
    let ([ul, mul], [ur, mur]) = side(u)?;
    let h = 1e-9;
    let left = model.closure_at(x_star - h);
    let right = model.closure_at(x_star + h);
    let (qs_l, ql_l, g_l) = point_fluxes(model, left, vl, thl, mul);
    let (qs_r, ql_r, g_r) = point_fluxes(model, right, vr, thr, mur);
    Ok(InterfaceSample {
        t_star,
        x_star,
        u_jump: ur - ul,
        mu_jump: mur - mul,
        v_jump: vr - vl,
        theta_jump: thr - thl,
        heat_flux: (qs_l + ql_l, qs_r + ql_r),
        moisture_flow: (g_l, g_r),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::physics::library;
    use crate::series::{uniform_grid, Snapshot};

    #[test]
    fn equilibrium_has_no_flux() {
        let model = library::single_layer_model();
        let series = FieldSeries {
            grid: uniform_grid(11),
            snapshots: vec![Snapshot::uniform(0.0, 11, 1.0, 1.0), Snapshot::uniform(1.0, 11, 1.0, 1.0)],
        };
        let f = boundary_fluxes(&series, &model, 0.0).unwrap();
        assert!(f.q_s.iter().chain(&f.q_l).chain(&f.g).all(|&q| q == 0.0));
        assert!(matches!(boundary_fluxes(&series, &model, 1.5), Err(PostError::OutOfDomain(_))));
    }

    #[test]
    fn linear_conduction_is_uniform() {
        let mut model = library::single_layer_model();
        model.layers[0].closure = crate::physics::CoefficientClosure::constant();
        let grid = uniform_grid(11);
        let snap = |t| Snapshot {
            t,
            v: vec![1.0; 11],
            theta: vec![0.0; 11],
            u: grid.iter().map(|x| 1.0 + 0.01 * x).collect(),
            mu: vec![0.01; 11],
        };
        let series = FieldSeries { grid: grid.clone(), snapshots: vec![snap(0.0), snap(1.0)] };
        let a = boundary_fluxes(&series, &model, 0.0).unwrap();
        let b = boundary_fluxes(&series, &model, 1.0).unwrap();
        assert_eq!(a.q_s, b.q_s);
        assert_eq!(a.q_s[0], a.q_s[1]);
        let r = &model.references;
        assert!((a.q_s[0] + r.k_t0_w_per_m_k * r.temperature_k / r.length_m * 0.01).abs() < 1e-12);
    }
}
