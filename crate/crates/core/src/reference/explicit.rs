use crate::mohl::Problem;
use crate::physics::DimensionlessModel;
use crate::series::{uniform_grid, FieldSeries};

use super::grid::Layout;
use super::{
    balance_nodes, heat_end_rows, initial_fields, interface_rows, moisture_end_rows, net_flux, Coefficients,
    HeatCoefficients, InterfaceTreatment, ReferenceError, ReferenceOptions, ReferenceRun,
};

#[derive(Debug, Clone, PartialEq)]
pub struct ExplicitOptions {
    pub base: ReferenceOptions,
    /// Refuse time steps above [`stable_time_step`].
    pub cfl_guard: bool,
}

impl ExplicitOptions {
    pub fn new(base: ReferenceOptions) -> Self {
        Self { base, cfl_guard: true }
    }
}

/// Largest forward-Euler step `dx^2 min(c / (2 Fo k))` over `v` in `[lo, hi]`
/// for both fields and every material.
pub fn stable_time_step(model: &DimensionlessModel, dx: f64, lo: f64, hi: f64) -> f64 {
    const SAMPLES: usize = 101;
    let mut bound = f64::INFINITY;
    for layer in &model.layers {
        let c = &layer.closure;
        for k in 0..SAMPLES {
            let v = lo + (hi - lo) * k as f64 / (SAMPLES - 1) as f64;
            let m = c.c_m.value(v) / (2.0 * model.fo_m * c.k_m.value(v));
            let t = c.c_t.value(v) / (2.0 * model.fo_t * c.k_t.value(v));
            bound = bound.min(m).min(t);
        }
    }
    dx * dx * bound
}

/// Stability bound for `problem` on a grid of step `dx`, over the span of the
/// initial moisture field and both ambient humidities.
pub fn admissible_time_step(problem: &Problem, dx: f64) -> Result<f64, ReferenceError> {
    let layout = Layout::new(&problem.model, dx)?;
    let horizon = problem.tau.max(1.0);
    let (mut lo, mut hi) = problem.initial.v.range();
    for d in [&problem.drivers.left, &problem.drivers.right] {
        let (a, b) = d.v_range(horizon);
        lo = lo.min(a);
        hi = hi.max(b);
    }
    Ok(stable_time_step(&problem.model, layout.min_h(), lo, hi))
}

const BLOW_UP: f64 = 1e6;

/// Forward Euler with coefficients from the previous step.
pub fn euler_explicit_run(problem: &Problem, options: &ExplicitOptions) -> Result<ReferenceRun, ReferenceError> {
    let model = &problem.model;
    let drivers = &problem.drivers;
    let opts = &options.base;
    model.validate()?;
    opts.grid.validate()?;
    let layout = Layout::new(model, opts.grid.dx_star)?;
    let (stride, steps) = opts.schedule(problem.tau)?;
    let dt = opts.grid.dt_star;

    if options.cfl_guard {
        let admissible = admissible_time_step(problem, opts.grid.dx_star)?;
        if dt > admissible {
            return Err(ReferenceError::CflViolation { requested: dt, admissible });
        }
    }

    let out = uniform_grid(opts.output_points);
    let iface = match opts.interface {
        InterfaceTreatment::DerivativeContinuous => interface_rows(&layout),
        InterfaceTreatment::FluxBalance => Vec::new(),
    };
    let balance: Vec<usize> = balance_nodes(&layout, opts.interface).collect();
    let (mut v, mut u) = initial_fields(&layout, &problem.initial);
    let mut run = ReferenceRun { series: FieldSeries::new(out.clone()), iterations: Vec::new(), nodes: layout.len() };
    run.series.snapshots.push(layout.snapshot(0.0, &v, &u, &out));
    let mut v_new = v.clone();
    let mut u_new = u.clone();

    for step in 1..=steps {
        let t = step as f64 * dt;
        let c = Coefficients::moisture(model, &layout, &v);
        for &i in &balance {
            v_new[i] = v[i] + dt / c.moisture_cap[i] * net_flux(&layout, &c.moisture_face, &v, i);
        }
        for row in &iface {
            v_new[row.node] = row.solve_for_node(&v_new);
        }
        for row in moisture_end_rows(model, drivers, &layout, &v, t) {
            v_new[row.node] = row.solve_for_node(&v_new);
        }

        let hc = HeatCoefficients::new(model, &layout, &v);
        for &i in &balance {
            let source = net_flux(&layout, &hc.conduction, &u, i) + net_flux(&layout, &hc.cross, &v, i)
                - hc.latent[i] * (v_new[i] - v[i]) / dt;
            u_new[i] = u[i] + dt / hc.cap[i] * source;
        }
        for row in &iface {
            u_new[row.node] = row.solve_for_node(&u_new);
        }
        for row in heat_end_rows(model, drivers, &layout, &v_new, &u, t) {
            u_new[row.node] = row.solve_for_node(&u_new);
        }

        std::mem::swap(&mut v, &mut v_new);
        std::mem::swap(&mut u, &mut u_new);
        if v.iter().chain(&u).any(|w| !w.is_finite() || w.abs() > BLOW_UP) {
            return Err(ReferenceError::Diverged { step, t });
        }
        if step % stride == 0 {
            run.series.snapshots.push(layout.snapshot(t, &v, &u, &out));
        }
    }
    Ok(run)
}
