//! Nonlinear collocation equations on a fixed mesh and their damped Newton solve.
//!
//! Unknowns are the nodal values `y_0 .. y_N`. Each interval contributes the
//! Simpson form of the three-stage Lobatto IIIA scheme,
//!
//! ```text
//! y_mid = (y_i + y_{i+1}) / 2 - h/8 (f_{i+1} - f_i)
//! Phi_i = y_{i+1} - y_i - h/6 (f_i + 4 f(x_mid, y_mid) + f_{i+1})
//! ```
//!
//! and the boundary residual closes the system. Rows of `Phi_i` are divided by `h`.

use nalgebra::{DMatrix, DVector};

use super::banded::BandMatrix;
use super::{BoundaryConditions, Mesh, OdeSystem, SolverOptions};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum NewtonFailure {
    Singular,
    Stalled,
    IterationLimit,
}

pub(crate) struct NewtonResult {
    pub values: Vec<f64>,
    pub iterations: usize,
}

struct Workspace<'a, S: ?Sized, B: ?Sized> {
    system: &'a S,
    bc: &'a B,
    nodes: &'a [f64],
    dim: usize,
    f_nodes: Vec<f64>,
    y_mid: Vec<f64>,
    f_mid: Vec<f64>,
    jac_nodes: Vec<f64>,
    jac_mid: Vec<f64>,
    scratch_a: Vec<f64>,
    scratch_b: Vec<f64>,
    scratch_y: Vec<f64>,
}

impl<'a, S, B> Workspace<'a, S, B>
where
    S: OdeSystem + ?Sized,
    B: BoundaryConditions + ?Sized,
{
    fn new(system: &'a S, bc: &'a B, mesh: &'a Mesh) -> Self {
        let dim = system.dimension();
        let n = mesh.len();
        Self {
            system,
            bc,
            nodes: mesh.nodes(),
            dim,
            f_nodes: vec![0.0; n * dim],
            y_mid: vec![0.0; (n - 1) * dim],
            f_mid: vec![0.0; (n - 1) * dim],
            jac_nodes: vec![0.0; n * dim * dim],
            jac_mid: vec![0.0; (n - 1) * dim * dim],
            scratch_a: vec![0.0; dim],
            scratch_b: vec![0.0; dim],
            scratch_y: vec![0.0; dim],
        }
    }

    /// Residual in natural order: `[psi; Phi_0 / h_0; ...]`.
    fn residual(&mut self, y: &[f64], out: &mut [f64]) {
        let d = self.dim;
        let n = self.nodes.len();
        for (i, &x) in self.nodes.iter().enumerate() {
            self.system.rhs(x, &y[i * d..(i + 1) * d], &mut self.f_nodes[i * d..(i + 1) * d]);
        }
        self.bc.residual(&y[..d], &y[(n - 1) * d..], &mut out[..d]);
        for i in 0..n - 1 {
            let h = self.nodes[i + 1] - self.nodes[i];
            let xm = self.nodes[i] + 0.5 * h;
            for c in 0..d {
                let (y0, y1) = (y[i * d + c], y[(i + 1) * d + c]);
                let (f0, f1) = (self.f_nodes[i * d + c], self.f_nodes[(i + 1) * d + c]);
                self.y_mid[i * d + c] = 0.5 * (y0 + y1) - 0.125 * h * (f1 - f0);
            }
            self.system.rhs(xm, &self.y_mid[i * d..(i + 1) * d], &mut self.f_mid[i * d..(i + 1) * d]);
            for c in 0..d {
                let (y0, y1) = (y[i * d + c], y[(i + 1) * d + c]);
                let (f0, f1) = (self.f_nodes[i * d + c], self.f_nodes[(i + 1) * d + c]);
                let fm = self.f_mid[i * d + c];
                out[d + i * d + c] = (y1 - y0) / h - (f0 + 4.0 * fm + f1) / 6.0;
            }
        }
    }

    /// `∂f/∂y` at `(x, y)`, row-major, analytic when the system supplies it.
    fn rhs_jacobian(&mut self, x: f64, y: &[f64], jac: &mut [f64]) {
        if self.system.jacobian(x, y, jac) {
            return;
        }
        let d = self.dim;
        self.scratch_y.copy_from_slice(y);
        for j in 0..d {
            let step = f64::EPSILON.sqrt() * y[j].abs().max(1.0);
            self.scratch_y[j] = y[j] + step;
            self.system.rhs(x, &self.scratch_y, &mut self.scratch_a);
            self.scratch_y[j] = y[j] - step;
            self.system.rhs(x, &self.scratch_y, &mut self.scratch_b);
            self.scratch_y[j] = y[j];
            for r in 0..d {
                jac[r * d + j] = (self.scratch_a[r] - self.scratch_b[r]) / (2.0 * step);
            }
        }
    }

    /// `∂psi/∂y_a` and `∂psi/∂y_b` by central differences.
    fn bc_jacobian(&mut self, ya: &[f64], yb: &[f64]) -> (Vec<f64>, Vec<f64>) {
        let d = self.dim;
        let mut da = vec![0.0; d * d];
        let mut db = vec![0.0; d * d];
        let mut plus = vec![0.0; d];
        let mut minus = vec![0.0; d];
        for (target, jac) in [(0usize, &mut da), (1usize, &mut db)] {
            let mut a = ya.to_vec();
            let mut b = yb.to_vec();
            for j in 0..d {
                let base = if target == 0 { a[j] } else { b[j] };
                let step = f64::EPSILON.sqrt() * base.abs().max(1.0);
                if target == 0 { a[j] = base + step } else { b[j] = base + step }
                self.bc.residual(&a, &b, &mut plus);
                if target == 0 { a[j] = base - step } else { b[j] = base - step }
                self.bc.residual(&a, &b, &mut minus);
                if target == 0 { a[j] = base } else { b[j] = base }
                for r in 0..d {
                    jac[r * d + j] = (plus[r] - minus[r]) / (2.0 * step);
                }
            }
        }
        (da, db)
    }

    /// Solves `J delta = rhs` for the current iterate; `self.f_nodes`/`y_mid` must be
    /// up to date (i.e. `residual(y)` was the last evaluation).
    fn newton_direction(&mut self, y: &[f64], rhs: &mut [f64], band: &mut BandMatrix) -> Result<(), NewtonFailure> {
        let d = self.dim;
        let n = self.nodes.len();
        let dd = d * d;

        let mut jn = std::mem::take(&mut self.jac_nodes);
        for (i, &x) in self.nodes.iter().enumerate() {
            self.rhs_jacobian(x, &y[i * d..(i + 1) * d], &mut jn[i * dd..(i + 1) * dd]);
        }
        self.jac_nodes = jn;
        let mut jm = std::mem::take(&mut self.jac_mid);
        let y_mid = std::mem::take(&mut self.y_mid);
        for i in 0..n - 1 {
            let xm = 0.5 * (self.nodes[i] + self.nodes[i + 1]);
            self.rhs_jacobian(xm, &y_mid[i * d..(i + 1) * d], &mut jm[i * dd..(i + 1) * dd]);
        }
        self.jac_mid = jm;
        self.y_mid = y_mid;

        let (da, db) = self.bc_jacobian(&y[..d], &y[(n - 1) * d..]);

        // Separated conditions give an almost-banded matrix; anything else goes dense.
        let mut left_rows = Vec::new();
        let mut right_rows = Vec::new();
        let mut separated = true;
        for r in 0..d {
            let on_a = da[r * d..(r + 1) * d].iter().any(|v| *v != 0.0);
            let on_b = db[r * d..(r + 1) * d].iter().any(|v| *v != 0.0);
            match (on_a, on_b) {
                (true, false) => left_rows.push(r),
                (false, true) => right_rows.push(r),
                (false, false) => return Err(NewtonFailure::Singular),
                (true, true) => separated = false,
            }
        }

        let blocks = self.interval_blocks();
        if separated {
            self.solve_banded(&blocks, &da, &db, &left_rows, &right_rows, rhs, band)
        } else {
            self.solve_dense(&blocks, &da, &db, rhs)
        }
    }

    /// `(∂Phi_i/∂y_i, ∂Phi_i/∂y_{i+1})` per interval, already divided by `h`.
    fn interval_blocks(&self) -> Vec<(Vec<f64>, Vec<f64>)> {
        let d = self.dim;
        let dd = d * d;
        let n = self.nodes.len();
        let mut out = Vec::with_capacity(n - 1);
        for i in 0..n - 1 {
            let h = self.nodes[i + 1] - self.nodes[i];
            let j0 = &self.jac_nodes[i * dd..(i + 1) * dd];
            let j1 = &self.jac_nodes[(i + 1) * dd..(i + 2) * dd];
            let jm = &self.jac_mid[i * dd..(i + 1) * dd];
            let mut left = vec![0.0; dd];
            let mut right = vec![0.0; dd];
            for r in 0..d {
                for c in 0..d {
                    let ident = if r == c { 1.0 } else { 0.0 };
                    // Jm * (I/2 ± h/8 J)
                    let mut m0 = 0.5 * jm[r * d + c];
                    let mut m1 = 0.5 * jm[r * d + c];
                    for k in 0..d {
                        m0 += 0.125 * h * jm[r * d + k] * j0[k * d + c];
                        m1 -= 0.125 * h * jm[r * d + k] * j1[k * d + c];
                    }
                    left[r * d + c] = -ident / h - (j0[r * d + c] + 4.0 * m0) / 6.0;
                    right[r * d + c] = ident / h - (j1[r * d + c] + 4.0 * m1) / 6.0;
                }
            }
            out.push((left, right));
        }
        out
    }

    #[allow(clippy::too_many_arguments)]
    fn solve_banded(
        &self,
        blocks: &[(Vec<f64>, Vec<f64>)],
        da: &[f64],
        db: &[f64],
        left_rows: &[usize],
        right_rows: &[usize],
        rhs: &mut [f64],
        band: &mut BandMatrix,
    ) -> Result<(), NewtonFailure> {
        let d = self.dim;
        let n = self.nodes.len();
        let nl = left_rows.len();
        let size = n * d;
        let kl = nl + d - 1;
        let ku = (d - 1).max(2 * d - 1 - nl.min(2 * d - 1));
        band.reset(size, kl, ku);

        let mut b = vec![0.0; size];
        for (k, &r) in left_rows.iter().enumerate() {
            for c in 0..d {
                band.set(k, c, da[r * d + c]);
            }
            b[k] = rhs[r];
        }
        for (i, (left, right)) in blocks.iter().enumerate() {
            for r in 0..d {
                let row = nl + i * d + r;
                for c in 0..d {
                    band.set(row, i * d + c, left[r * d + c]);
                    band.set(row, (i + 1) * d + c, right[r * d + c]);
                }
                b[row] = rhs[d + i * d + r];
            }
        }
        for (k, &r) in right_rows.iter().enumerate() {
            let row = nl + (n - 1) * d + k;
            for c in 0..d {
                band.set(row, (n - 1) * d + c, db[r * d + c]);
            }
            b[row] = rhs[r];
        }
        band.solve_in_place(&mut b).map_err(|_| NewtonFailure::Singular)?;
        rhs.copy_from_slice(&b);
        Ok(())
    }

    fn solve_dense(
        &self,
        blocks: &[(Vec<f64>, Vec<f64>)],
        da: &[f64],
        db: &[f64],
        rhs: &mut [f64],
    ) -> Result<(), NewtonFailure> {
        let d = self.dim;
        let n = self.nodes.len();
        let size = n * d;
        let mut a = DMatrix::<f64>::zeros(size, size);
        for r in 0..d {
            for c in 0..d {
                a[(r, c)] = da[r * d + c];
                a[(r, (n - 1) * d + c)] = db[r * d + c];
            }
        }
        for (i, (left, right)) in blocks.iter().enumerate() {
            for r in 0..d {
                for c in 0..d {
                    a[(d + i * d + r, i * d + c)] = left[r * d + c];
                    a[(d + i * d + r, (i + 1) * d + c)] = right[r * d + c];
                }
            }
        }
        let lu = a.lu();
        let x = lu.solve(&DVector::from_column_slice(rhs)).ok_or(NewtonFailure::Singular)?;
        if x.iter().any(|v| !v.is_finite()) {
            return Err(NewtonFailure::Singular);
        }
        rhs.copy_from_slice(x.as_slice());
        Ok(())
    }
}

fn norm2(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Damped Newton on the collocation equations of `mesh`, starting from `guess`.
pub(crate) fn newton_solve<S, B>(
    system: &S,
    bc: &B,
    mesh: &Mesh,
    guess: Vec<f64>,
    options: &SolverOptions,
) -> Result<NewtonResult, (NewtonFailure, usize)>
where
    S: OdeSystem + ?Sized,
    B: BoundaryConditions + ?Sized,
{
    let size = guess.len();
    let mut ws = Workspace::new(system, bc, mesh);
    let mut band = BandMatrix::zeros(0, 0, 0);
    let mut y = guess;
    let mut f = vec![0.0; size];
    let mut f_trial = vec![0.0; size];
    let mut y_trial = vec![0.0; size];
    let mut delta = vec![0.0; size];
    let step_tol = (1e-3 * options.rel_tol).clamp(1e-12, 1e-6);

    ws.residual(&y, &mut f);
    if f.iter().any(|v| !v.is_finite()) {
        return Err((NewtonFailure::Stalled, 0));
    }
    let mut fnorm = norm2(&f);

    for iteration in 1..=options.newton_max_iter {
        let y_inf = y.iter().fold(1.0_f64, |m, v| m.max(v.abs()));
        let floor = 1e-12 * y_inf * (size as f64).sqrt();
        if fnorm <= floor {
            return Ok(NewtonResult { values: y, iterations: iteration - 1 });
        }

        for (dst, src) in delta.iter_mut().zip(&f) {
            *dst = -src;
        }
        ws.newton_direction(&y, &mut delta, &mut band).map_err(|e| (e, iteration))?;
        let step_size = delta
            .iter()
            .zip(&y)
            .map(|(dx, x)| dx.abs() / x.abs().max(1.0))
            .fold(0.0, f64::max);

        let mut lambda = 1.0;
        loop {
            for k in 0..size {
                y_trial[k] = y[k] + lambda * delta[k];
            }
            ws.residual(&y_trial, &mut f_trial);
            let finite = f_trial.iter().all(|v| v.is_finite());
            let trial_norm = if finite { norm2(&f_trial) } else { f64::INFINITY };
            let tiny_step = lambda * step_size <= step_tol;
            if finite && (trial_norm <= (1.0 - 1e-4 * lambda) * fnorm || trial_norm <= floor || tiny_step) {
                fnorm = trial_norm;
                break;
            }
            if options.newton_damping >= 1.0 && finite {
                fnorm = trial_norm;
                break;
            }
            lambda *= options.newton_damping.min(0.5);
            if lambda < 1.0 / 1024.0 {
                return Err((NewtonFailure::Stalled, iteration));
            }
        }
        std::mem::swap(&mut y, &mut y_trial);
        std::mem::swap(&mut f, &mut f_trial);

        if lambda * step_size <= step_tol {
            return Ok(NewtonResult { values: y, iterations: iteration });
        }
    }
    Err((NewtonFailure::IterationLimit, options.newton_max_iter))
}
