use super::{BoundaryConditions, CollocationSolution, OdeSystem, SolverOptions};

/// Five-point Lobatto rule on `[0, 1]`.
const LOBATTO5_NODES: [f64; 5] = [
    0.0,
    0.5 - 0.327_326_835_353_988_6, // sqrt(21) / 14
    0.5,
    0.5 + 0.327_326_835_353_988_6,
    1.0,
];
const LOBATTO5_WEIGHTS: [f64; 5] = [1.0 / 20.0, 49.0 / 180.0, 16.0 / 45.0, 49.0 / 180.0, 1.0 / 20.0];

/// Defect of a continuous solution: `h * rms(S' - f)` per interval and component,
/// plus the infinity norm of the boundary residual.
#[derive(Debug, Clone, PartialEq)]
pub struct ResidualReport {
    dim: usize,
    raw: Vec<f64>,
    scale: Vec<f64>,
    pub boundary: f64,
}

impl ResidualReport {
    pub fn intervals(&self) -> usize {
        self.raw.len() / self.dim
    }

    /// Unscaled defect of component `c` on interval `i`.
    pub fn raw(&self, interval: usize, component: usize) -> f64 {
        self.raw[interval * self.dim + component]
    }

    /// Per-component solution scale, `max(max |y_c|, 1)`.
    pub fn scale(&self) -> &[f64] {
        &self.scale
    }

    /// One scalar per interval: the largest component defect relative to its scale.
    pub fn interval_norms(&self) -> Vec<f64> {
        self.raw
            .chunks(self.dim)
            .map(|r| r.iter().zip(&self.scale).map(|(r, s)| r / s).fold(0.0, f64::max))
            .collect()
    }

    /// Defects divided by the mixed tolerance `rel * scale + abs`; a value above one fails.
    pub fn normalized(&self, rel_tol: f64, abs_tol: f64) -> Vec<f64> {
        self.raw
            .chunks(self.dim)
            .map(|r| {
                r.iter()
                    .zip(&self.scale)
                    .map(|(r, s)| r / (rel_tol * s + abs_tol))
                    .fold(0.0, f64::max)
            })
            .collect()
    }

    pub fn max_normalized(&self, rel_tol: f64, abs_tol: f64) -> f64 {
        self.normalized(rel_tol, abs_tol).into_iter().fold(0.0, f64::max)
    }

    pub fn satisfies(&self, options: &SolverOptions) -> bool {
        self.max_normalized(options.rel_tol, options.abs_tol) <= 1.0
            && self.boundary <= options.rel_tol + options.abs_tol
    }
}

pub fn estimate_residuals<S, B>(sol: &CollocationSolution, system: &S, bc: &B) -> ResidualReport
where
    S: OdeSystem + ?Sized,
    B: BoundaryConditions + ?Sized,
{
    let dim = sol.dimension();
    let nodes = sol.mesh().nodes();
    let mut raw = vec![0.0; sol.mesh().intervals() * dim];
    let mut value = vec![0.0; dim];
    let mut deriv = vec![0.0; dim];
    let mut f = vec![0.0; dim];

    for (i, w) in nodes.windows(2).enumerate() {
        let h = w[1] - w[0];
        let acc = &mut raw[i * dim..(i + 1) * dim];
        for (t, wt) in LOBATTO5_NODES.iter().zip(LOBATTO5_WEIGHTS) {
            let x = if *t == 1.0 { w[1] } else { w[0] + t * h };
            sol.evaluate_polynomial(i, x, &mut value, &mut deriv);
            system.rhs(x, &value, &mut f);
            for c in 0..dim {
                let r = deriv[c] - f[c];
                acc[c] += wt * r * r;
            }
        }
        for a in acc.iter_mut() {
            *a = h * a.sqrt();
        }
    }

    let mut scale = vec![1.0_f64; dim];
    for node in sol.nodal_values().chunks(dim) {
        for (s, y) in scale.iter_mut().zip(node) {
            *s = s.max(y.abs());
        }
    }

    let n = sol.mesh().len();
    let mut psi = vec![0.0; dim];
    bc.residual(sol.node_value(0), sol.node_value(n - 1), &mut psi);
    let boundary = psi.iter().fold(0.0_f64, |m, r| m.max(r.abs()));

    ResidualReport { dim, raw, scale, boundary }
}
