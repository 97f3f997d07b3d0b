use crate::bvp::BandMatrix;
use crate::mohl::Problem;
use crate::series::{uniform_grid, FieldSeries};

use super::grid::Layout;
use super::{
    balance_nodes, heat_end_rows, initial_fields, interface_rows, moisture_end_rows, net_flux, Coefficients,
    HeatCoefficients, InterfaceTreatment, ReferenceError, ReferenceOptions, ReferenceRun, Row,
};

struct System {
    matrix: BandMatrix,
    rhs: Vec<f64>,
}

impl System {
    fn new(n: usize) -> Self {
        Self { matrix: BandMatrix::zeros(n, 2, 2), rhs: vec![0.0; n] }
    }

    fn clear(&mut self) {
        let n = self.rhs.len();
        self.matrix.reset(n, 2, 2);
        self.rhs.iter_mut().for_each(|r| *r = 0.0);
    }

    fn diffusion_row(&mut self, layout: &Layout, i: usize, face: &[f64], weight: f64, rhs: f64) {
        let a = face[i - 1] / layout.h[i - 1];
        let b = face[i] / layout.h[i];
        self.matrix.set(i, i - 1, -a);
        self.matrix.set(i, i, weight + a + b);
        self.matrix.set(i, i + 1, -b);
        self.rhs[i] = rhs;
    }

    fn algebraic(&mut self, rows: &[Row]) {
        for row in rows {
            for &(j, c) in &row.cols {
                self.matrix.add(row.node, j, c);
            }
            self.rhs[row.node] = row.rhs;
        }
    }

    fn solve(&mut self, step: usize) -> Result<Vec<f64>, ReferenceError> {
        let mut x = self.rhs.clone();
        self.matrix.solve_in_place(&mut x).map_err(|_| ReferenceError::Singular { step })?;
        Ok(x)
    }
}

fn max_gap(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// Backward Euler in time, central differences in space; each step iterates
/// on frozen coefficients until successive moisture iterates agree.
pub fn euler_implicit_run(problem: &Problem, options: &ReferenceOptions) -> Result<ReferenceRun, ReferenceError> {
    let model = &problem.model;
    let drivers = &problem.drivers;
    model.validate()?;
    options.grid.validate()?;
    let layout = Layout::new(model, options.grid.dx_star)?;
    let (stride, steps) = options.schedule(problem.tau)?;
    let dt = options.grid.dt_star;
    let n = layout.len();
    let out = uniform_grid(options.output_points);
    let iface = match options.interface {
        InterfaceTreatment::DerivativeContinuous => interface_rows(&layout),
        InterfaceTreatment::FluxBalance => Vec::new(),
    };
    let balance: Vec<usize> = balance_nodes(&layout, options.interface).collect();
    let radiative = drivers.left.radiation.is_some() || drivers.right.radiation.is_some();

    let (mut v, mut u) = initial_fields(&layout, &problem.initial);
    let mut run = ReferenceRun { series: FieldSeries::new(out.clone()), iterations: Vec::with_capacity(steps), nodes: n };
    run.series.snapshots.push(layout.snapshot(0.0, &v, &u, &out));
    let mut sys = System::new(n);

    for step in 1..=steps {
        let t = step as f64 * dt;

        let mut v_it = v.clone();
        let mut gap = f64::INFINITY;
        let mut iterations = 0;
        while gap > options.picard_tol {
            if iterations == options.picard_max {
                return Err(ReferenceError::PicardNonConvergence { step, t, gap });
            }
            iterations += 1;
            let c = Coefficients::moisture(model, &layout, &v_it);
            sys.clear();
            for &i in &balance {
                let w = c.moisture_cap[i] / dt;
                sys.diffusion_row(&layout, i, &c.moisture_face, w, w * v[i]);
            }
            sys.algebraic(&iface);
            sys.algebraic(&moisture_end_rows(model, drivers, &layout, &v_it, t));
            let next = sys.solve(step)?;
            gap = max_gap(&next, &v_it);
            v_it = next;
        }
        run.iterations.push(iterations);

        let hc = HeatCoefficients::new(model, &layout, &v_it);
        let mut u_it = u.clone();
        for pass in 0..options.picard_max.max(1) {
            sys.clear();
            for &i in &balance {
                let w = hc.cap[i] / dt;
                let rhs = w * u[i] - hc.latent[i] * (v_it[i] - v[i]) / dt + net_flux(&layout, &hc.cross, &v_it, i);
                sys.diffusion_row(&layout, i, &hc.conduction, w, rhs);
            }
            sys.algebraic(&iface);
            sys.algebraic(&heat_end_rows(model, drivers, &layout, &v_it, &u_it, t));
            let next = sys.solve(step)?;
            let g = max_gap(&next, &u_it);
            u_it = next;
            if !radiative || g <= options.picard_tol {
                break;
            }
            if pass + 1 == options.picard_max {
                return Err(ReferenceError::PicardNonConvergence { step, t, gap: g });
            }
        }

        v = v_it;
        u = u_it;
        if step % stride == 0 {
            run.series.snapshots.push(layout.snapshot(t, &v, &u, &out));
        }
    }
    Ok(run)
}
