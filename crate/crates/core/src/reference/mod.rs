//! Finite-difference solvers on a fixed grid, used as the accuracy oracle and
//! as timing baselines.

mod explicit;
mod grid;
mod implicit;

pub use explicit::{admissible_time_step, euler_explicit_run, stable_time_step, ExplicitOptions};
pub use implicit::euler_implicit_run;

use serde::{Deserialize, Serialize};

use crate::physics::{BoundaryMode, DimensionlessModel, Drivers, PhysicsError};
use crate::series::FieldSeries;

use grid::Layout;

/// Spatial and temporal steps of a reference run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridConfig {
    pub dx_star: f64,
    pub dt_star: f64,
}

impl GridConfig {
    pub fn new(dx_star: f64, dt_star: f64) -> Self {
        Self { dx_star, dt_star }
    }

    /// Node count of a single layer spanning `[0, 1]`.
    pub fn nodes(&self) -> usize {
        (1.0 / self.dx_star).round() as usize + 1
    }

    pub fn validate(&self) -> Result<(), ReferenceError> {
        let ok = self.dx_star > 0.0 && self.dt_star > 0.0 && self.dx_star.is_finite() && self.dt_star.is_finite();
        if !ok || ((self.nodes() - 1) as f64 * self.dx_star - 1.0).abs() > 1e-9 {
            return Err(ReferenceError::InvalidGrid(format!("dx = {}, dt = {}", self.dx_star, self.dt_star)));
        }
        Ok(())
    }
}

/// How the interface node couples the two materials.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InterfaceTreatment {
    /// Equal one-sided slopes on both sides, the condition a C1 solution satisfies.
    #[default]
    DerivativeContinuous,
    /// Control-volume balance over the two half cells.
    FluxBalance,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReferenceOptions {
    pub grid: GridConfig,
    pub picard_tol: f64,
    pub picard_max: usize,
    pub interface: InterfaceTreatment,
    pub output_points: usize,
    /// Spacing of stored snapshots; a multiple of the time step.
    pub sample_interval: f64,
}

impl ReferenceOptions {
    pub fn new(grid: GridConfig, sample_interval: f64) -> Self {
        Self {
            grid,
            picard_tol: 1e-8,
            picard_max: 50,
            interface: InterfaceTreatment::default(),
            output_points: 201,
            sample_interval,
        }
    }

    /// Steps between stored snapshots and the total step count.
    pub(crate) fn schedule(&self, tau: f64) -> Result<(usize, usize), ReferenceError> {
        let dt = self.grid.dt_star;
        let stride = (self.sample_interval / dt).round().max(1.0) as usize;
        let steps = (tau / dt).round() as usize;
        if (stride as f64 * dt - self.sample_interval).abs() > 1e-9 * self.sample_interval.max(1.0) {
            return Err(ReferenceError::InvalidGrid(format!(
                "sample interval {} is not a multiple of dt = {dt}",
                self.sample_interval
            )));
        }
        if (steps as f64 * dt - tau).abs() > 1e-9 * tau.max(1.0) {
            return Err(ReferenceError::InvalidGrid(format!("tau = {tau} is not a multiple of dt = {dt}")));
        }
        Ok((stride, steps))
    }
}

#[derive(Debug, Clone, Default)]
pub struct ReferenceRun {
    pub series: FieldSeries,
    /// Nonlinear iterations of every step.
    pub iterations: Vec<usize>,
    pub nodes: usize,
}

impl ReferenceRun {
    pub fn mean_iterations(&self) -> f64 {
        if self.iterations.is_empty() {
            return 0.0;
        }
        self.iterations.iter().sum::<usize>() as f64 / self.iterations.len() as f64
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ReferenceError {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("Picard iteration stalled at step {step} (t* = {t}): last gap {gap:e}")]
    PicardNonConvergence { step: usize, t: f64, gap: f64 },
    #[error("time step {requested} violates the explicit CFL bound {admissible}")]
    CflViolation { requested: f64, admissible: f64 },
    #[error("solution diverged at step {step} (t* = {t})")]
    Diverged { step: usize, t: f64 },
    #[error("singular system at step {step}")]
    Singular { step: usize },
    #[error(transparent)]
    Physics(#[from] PhysicsError),
}

/// One algebraic equation `sum c_j w_j = rhs`.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Row {
    pub node: usize,
    pub cols: Vec<(usize, f64)>,
    pub rhs: f64,
}

impl Row {
    /// Solves the row for its own node given the other entries of `w`.
    pub fn solve_for_node(&self, w: &[f64]) -> f64 {
        let mut diag = 0.0;
        let mut acc = self.rhs;
        for &(j, c) in &self.cols {
            if j == self.node {
                diag += c;
            } else {
                acc -= c * w[j];
            }
        }
        acc / diag
    }
}

/// Slope-continuity rows at interior interfaces.
pub(crate) fn interface_rows(layout: &Layout) -> Vec<Row> {
    (0..layout.len())
        .filter(|&i| layout.interface[i])
        .map(|i| {
            let (a, b) = (0.5 / layout.h[i - 1], 0.5 / layout.h[i]);
            Row {
                node: i,
                cols: vec![(i - 2, a), (i - 1, -4.0 * a), (i, 3.0 * (a + b)), (i + 1, -4.0 * b), (i + 2, b)],
                rhs: 0.0,
            }
        })
        .collect()
}

/// `k (one-sided slope) + s w = rhs` at one end; the slope stencil points inwards.
fn end_row(layout: &Layout, left: bool, k: f64, s: f64, rhs: f64) -> Row {
    let n = layout.len();
    if left {
        let a = k / (2.0 * layout.h[0]);
        Row { node: 0, cols: vec![(0, -3.0 * a + s), (1, 4.0 * a), (2, -a)], rhs }
    } else {
        let a = k / (2.0 * layout.h[n - 2]);
        Row { node: n - 1, cols: vec![(n - 1, 3.0 * a + s), (n - 2, -4.0 * a), (n - 3, a)], rhs }
    }
}

fn fixed_row(node: usize, value: f64) -> Row {
    Row { node, cols: vec![(node, 1.0)], rhs: value }
}

/// Moisture surface rows with `k_M` frozen at `v`.
pub(crate) fn moisture_end_rows(model: &DimensionlessModel, drivers: &Drivers, layout: &Layout, v: &[f64], t: f64) -> [Row; 2] {
    let n = layout.len();
    let (l, r) = (&drivers.left, &drivers.right);
    let left = match l.mode {
        BoundaryMode::Dirichlet => fixed_row(0, l.v_inf.eval(t)),
        BoundaryMode::Robin => {
            let k = model.layers[0].closure.k_m.value(v[0]);
            let bi = model.left.bi_m;
            end_row(layout, true, k, -bi, -bi * l.v_inf.eval(t) - l.g_inf.eval(t))
        }
    };
    let right = match r.mode {
        BoundaryMode::Dirichlet => fixed_row(n - 1, r.v_inf.eval(t)),
        BoundaryMode::Robin => {
            let k = model.layers[model.layers.len() - 1].closure.k_m.value(v[n - 1]);
            let bi = model.right.bi_m;
            end_row(layout, false, k, bi, bi * r.v_inf.eval(t))
        }
    };
    [left, right]
}

/// Heat surface rows given the moisture field `v`; radiation is linearised at `u`.
pub(crate) fn heat_end_rows(
    model: &DimensionlessModel,
    drivers: &Drivers,
    layout: &Layout,
    v: &[f64],
    u: &[f64],
    t: f64,
) -> [Row; 2] {
    let n = layout.len();
    let refs = &model.references;
    let heat_scale = refs.temperature_k * refs.k_t0_w_per_m_k / refs.length_m;
    let (l, r) = (&drivers.left, &drivers.right);
    let (fo, g2) = (model.fo_t, model.gamma2);
    let left = match l.mode {
        BoundaryMode::Dirichlet => fixed_row(0, l.u_inf.eval(t)),
        BoundaryMode::Robin => {
            let c = &model.layers[0].closure;
            let theta = layout.forward_slope(v, 0);
            let s = &model.left;
            let q = l.heat_source(t, u[0], refs.temperature_k, heat_scale);
            let rhs = -s.bi_t * l.u_inf.eval(t) - fo * c.k_tm.value(v[0]) * g2 * theta
                + s.bi_tm * g2 * (v[0] - l.v_inf.eval(t))
                - q;
            end_row(layout, true, fo * c.k_t.value(v[0]), -s.bi_t, rhs)
        }
    };
    let right = match r.mode {
        BoundaryMode::Dirichlet => fixed_row(n - 1, r.u_inf.eval(t)),
        BoundaryMode::Robin => {
            let c = &model.layers[model.layers.len() - 1].closure;
            let theta = layout.backward_slope(v, n - 1);
            let s = &model.right;
            let rhs = s.bi_t * r.u_inf.eval(t)
                - fo * c.k_tm.value(v[n - 1]) * g2 * theta
                - s.bi_tm * g2 * (v[n - 1] - r.v_inf.eval(t));
            end_row(layout, false, fo * c.k_t.value(v[n - 1]), s.bi_t, rhs)
        }
    };
    [left, right]
}

/// Coefficients shared by both time integrators, evaluated at one moisture field.
pub(crate) struct Coefficients {
    /// `Fo_M k_M` on faces.
    pub moisture_face: Vec<f64>,
    /// `c_M` control-volume weights.
    pub moisture_cap: Vec<f64>,
}

impl Coefficients {
    pub fn moisture(model: &DimensionlessModel, layout: &Layout, v: &[f64]) -> Self {
        let (kl, kr) = layout.side_values(model, v, |c, v| c.k_m.value(v));
        let (cl, cr) = layout.side_values(model, v, |c, v| c.c_m.value(v));
        let moisture_face = layout.faces(&kl, &kr).into_iter().map(|k| model.fo_m * k).collect();
        Self { moisture_face, moisture_cap: layout.capacities(&cl, &cr) }
    }
}

/// Heat coefficients at one moisture field.
pub(crate) struct HeatCoefficients {
    /// `Fo_T k_T` on faces.
    pub conduction: Vec<f64>,
    /// `Fo_T gamma2 k_TM` on faces.
    pub cross: Vec<f64>,
    pub cap: Vec<f64>,
    /// `gamma1 c_TM` weights.
    pub latent: Vec<f64>,
}

impl HeatCoefficients {
    pub fn new(model: &DimensionlessModel, layout: &Layout, v: &[f64]) -> Self {
        let (ktl, ktr) = layout.side_values(model, v, |c, v| c.k_t.value(v));
        let (kml, kmr) = layout.side_values(model, v, |c, v| c.k_tm.value(v));
        let (ctl, ctr) = layout.side_values(model, v, |c, v| c.c_t.value(v));
        let (cml, cmr) = layout.side_values(model, v, |c, v| c.c_tm.value(v));
        let fo = model.fo_t;
        Self {
            conduction: layout.faces(&ktl, &ktr).into_iter().map(|k| fo * k).collect(),
            cross: layout.faces(&kml, &kmr).into_iter().map(|k| fo * model.gamma2 * k).collect(),
            cap: layout.capacities(&ctl, &ctr),
            latent: layout.capacities(&cml, &cmr).into_iter().map(|c| model.gamma1 * c).collect(),
        }
    }
}

/// `sum_faces K (w_j - w_i) / h` at node `i`.
#[inline]
pub(crate) fn net_flux(layout: &Layout, face: &[f64], w: &[f64], i: usize) -> f64 {
    face[i] * (w[i + 1] - w[i]) / layout.h[i] - face[i - 1] * (w[i] - w[i - 1]) / layout.h[i - 1]
}

/// Nodes updated by the balance equations rather than algebraic rows.
pub(crate) fn balance_nodes(layout: &Layout, interface: InterfaceTreatment) -> impl Iterator<Item = usize> + '_ {
    (1..layout.len() - 1).filter(move |&i| !(layout.interface[i] && interface == InterfaceTreatment::DerivativeContinuous))
}

pub(crate) fn initial_fields(layout: &Layout, initial: &crate::mohl::InitialFields) -> (Vec<f64>, Vec<f64>) {
    (layout.x.iter().map(|&x| initial.v.eval(x).0).collect(), layout.x.iter().map(|&x| initial.u.eval(x).0).collect())
}
