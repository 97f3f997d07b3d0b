//! Adaptive collocation solver for two-point boundary value problems
//! `y' = f(x, y)`, `psi(y(a), y(b)) = 0`.

mod adapt;
mod banded;
mod collocation;
mod mesh;
mod residual;
mod solution;

pub use adapt::{adapt_mesh, COARSEN_THRESHOLD};
pub use banded::{BandMatrix, SingularMatrix};
pub use mesh::Mesh;
pub use residual::{estimate_residuals, ResidualReport};
pub use solution::CollocationSolution;

use collocation::{newton_solve, NewtonFailure};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum BvpError {
    #[error("invalid mesh: {0}")]
    InvalidMesh(String),
    #[error("invalid solver options: {0}")]
    InvalidOptions(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("x = {x} lies outside [{a}, {b}]")]
    OutOfDomain { x: f64, a: f64, b: f64 },
    #[error("mesh would need {required} nodes, limit is {max_nodes}")]
    MeshOverflow { required: usize, max_nodes: usize },
    #[error("Newton iteration did not converge after {attempts} mesh attempts")]
    NonConvergence { attempts: usize },
    #[error("singular collocation Jacobian")]
    SingularJacobian,
}

/// Right-hand side `f(x, y)` of a first-order system.
pub trait OdeSystem {
    fn dimension(&self) -> usize;

    fn rhs(&self, x: f64, y: &[f64], dydx: &mut [f64]);

    /// Writes `∂f/∂y` row-major into `jac` and returns `true`, or returns `false`
    /// to let the solver difference `rhs` instead.
    fn jacobian(&self, _x: f64, _y: &[f64], _jac: &mut [f64]) -> bool {
        false
    }
}

/// Boundary residual `psi(y(a), y(b))`, one entry per component.
pub trait BoundaryConditions {
    fn dimension(&self) -> usize;

    fn residual(&self, ya: &[f64], yb: &[f64], res: &mut [f64]);
}

impl<T: OdeSystem + ?Sized> OdeSystem for &T {
    fn dimension(&self) -> usize {
        (**self).dimension()
    }
    fn rhs(&self, x: f64, y: &[f64], dydx: &mut [f64]) {
        (**self).rhs(x, y, dydx)
    }
    fn jacobian(&self, x: f64, y: &[f64], jac: &mut [f64]) -> bool {
        (**self).jacobian(x, y, jac)
    }
}

impl<T: BoundaryConditions + ?Sized> BoundaryConditions for &T {
    fn dimension(&self) -> usize {
        (**self).dimension()
    }
    fn residual(&self, ya: &[f64], yb: &[f64], res: &mut [f64]) {
        (**self).residual(ya, yb, res)
    }
}

/// Closure-backed system.
pub struct FnSystem<F> {
    dim: usize,
    f: F,
}

impl<F: Fn(f64, &[f64], &mut [f64])> FnSystem<F> {
    pub fn new(dim: usize, f: F) -> Self {
        Self { dim, f }
    }
}

impl<F: Fn(f64, &[f64], &mut [f64])> OdeSystem for FnSystem<F> {
    fn dimension(&self) -> usize {
        self.dim
    }
    fn rhs(&self, x: f64, y: &[f64], dydx: &mut [f64]) {
        (self.f)(x, y, dydx)
    }
}

/// Closure-backed boundary conditions.
pub struct FnBoundary<F> {
    dim: usize,
    f: F,
}

impl<F: Fn(&[f64], &[f64], &mut [f64])> FnBoundary<F> {
    pub fn new(dim: usize, f: F) -> Self {
        Self { dim, f }
    }
}

impl<F: Fn(&[f64], &[f64], &mut [f64])> BoundaryConditions for FnBoundary<F> {
    fn dimension(&self) -> usize {
        self.dim
    }
    fn residual(&self, ya: &[f64], yb: &[f64], res: &mut [f64]) {
        (self.f)(ya, yb, res)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverOptions {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_nodes: usize,
    pub newton_max_iter: usize,
    /// Step shrink factor of the line search; 1.0 takes full Newton steps.
    pub newton_damping: f64,
    /// With `false` the guess mesh is used as is and residuals are not enforced.
    pub adapt: bool,
    /// Coordinates that must stay mesh nodes.
    pub pinned: Vec<f64>,
    pub max_mesh_passes: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            rel_tol: 1e-3,
            abs_tol: 1e-6,
            max_nodes: 5000,
            newton_max_iter: 40,
            newton_damping: 0.5,
            adapt: true,
            pinned: Vec::new(),
            max_mesh_passes: 40,
        }
    }
}

impl SolverOptions {
    pub fn with_tolerance(tol: f64) -> Self {
        Self { rel_tol: tol, abs_tol: tol, ..Self::default() }
    }

    pub fn validate(&self) -> Result<(), BvpError> {
        let bad = |m: &str| Err(BvpError::InvalidOptions(m.to_owned()));
        if !(self.rel_tol > 0.0 && self.abs_tol > 0.0) {
            return bad("tolerances must be positive");
        }
        if !(self.newton_damping > 0.0 && self.newton_damping <= 1.0) {
            return bad("newton_damping must lie in (0, 1]");
        }
        if self.newton_max_iter == 0 || self.max_mesh_passes == 0 {
            return bad("iteration limits must be positive");
        }
        if self.max_nodes < 2 {
            return bad("max_nodes must be at least 2");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SolveStats {
    pub newton_iterations: usize,
    pub mesh_passes: usize,
    pub newton_failures: usize,
}

#[derive(Debug, Clone)]
pub struct BvpSolution {
    pub solution: CollocationSolution,
    pub residuals: ResidualReport,
    pub stats: SolveStats,
}

const MAX_NEWTON_FAILURES: usize = 4;

/// Solves the boundary value problem starting from `guess`, refining its mesh
/// until the residual test passes.
pub fn solve_bvp<S, B>(
    system: &S,
    bc: &B,
    guess: &CollocationSolution,
    options: &SolverOptions,
) -> Result<BvpSolution, BvpError>
where
    S: OdeSystem + ?Sized,
    B: BoundaryConditions + ?Sized,
{
    options.validate()?;
    let dim = system.dimension();
    if bc.dimension() != dim {
        return Err(BvpError::DimensionMismatch { expected: dim, found: bc.dimension() });
    }
    if guess.dimension() != dim {
        return Err(BvpError::DimensionMismatch { expected: dim, found: guess.dimension() });
    }

    let mut mesh = guess.mesh().with_pinned(&options.pinned)?;
    if mesh.len() > options.max_nodes {
        return Err(BvpError::MeshOverflow { required: mesh.len(), max_nodes: options.max_nodes });
    }
    let mut values = guess.values_on(&mesh)?;
    let mut stats = SolveStats::default();

    for _ in 0..options.max_mesh_passes {
        stats.mesh_passes += 1;
        match newton_solve(system, bc, &mesh, values.clone(), options) {
            Ok(result) => {
                stats.newton_iterations += result.iterations;
                let solution = CollocationSolution::from_values(mesh.clone(), system, result.values)?;
                let residuals = estimate_residuals(&solution, system, bc);
                if !options.adapt || residuals.satisfies(options) {
                    return Ok(BvpSolution { solution, residuals, stats });
                }
                let normalized = residuals.normalized(options.rel_tol, options.abs_tol);
                let next = adapt_mesh(&mesh, &normalized, options, &options.pinned)?;
                if next == mesh {
                    return Err(BvpError::NonConvergence { attempts: stats.newton_failures });
                }
                values = solution.values_on(&next)?;
                mesh = next;
            }
            Err((failure, iterations)) => {
                stats.newton_iterations += iterations;
                stats.newton_failures += 1;
                if !options.adapt || stats.newton_failures >= MAX_NEWTON_FAILURES {
                    return Err(match failure {
                        NewtonFailure::Singular => BvpError::SingularJacobian,
                        _ => BvpError::NonConvergence { attempts: stats.newton_failures },
                    });
                }
                let next = mesh.bisected();
                if next.len() > options.max_nodes {
                    return Err(BvpError::MeshOverflow { required: next.len(), max_nodes: options.max_nodes });
                }
                let previous = CollocationSolution::from_values(mesh, system, values)?;
                values = previous.values_on(&next)?;
                mesh = next;
            }
        }
    }
    Err(BvpError::NonConvergence { attempts: stats.newton_failures })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn linear() -> (FnSystem<impl Fn(f64, &[f64], &mut [f64])>, FnBoundary<impl Fn(&[f64], &[f64], &mut [f64])>) {
        (
            FnSystem::new(2, |_, y: &[f64], d: &mut [f64]| {
                d[0] = y[1];
                d[1] = 0.0;
            }),
            FnBoundary::new(2, |a: &[f64], b: &[f64], r: &mut [f64]| {
                r[0] = a[0];
                r[1] = b[0] - 1.0;
            }),
        )
    }

    fn sine() -> (FnSystem<impl Fn(f64, &[f64], &mut [f64])>, FnBoundary<impl Fn(&[f64], &[f64], &mut [f64])>) {
        (
            FnSystem::new(2, |x, y: &[f64], d: &mut [f64]| {
                d[0] = y[1];
                d[1] = -PI * PI * (PI * x).sin();
            }),
            FnBoundary::new(2, |a: &[f64], b: &[f64], r: &mut [f64]| {
                r[0] = a[0];
                r[1] = b[0];
            }),
        )
    }

    fn zero_guess(nodes: usize) -> CollocationSolution {
        let mesh = Mesh::uniform(0.0, 1.0, nodes).unwrap();
        CollocationSolution::from_fn(mesh, 2, |_, v, d| {
            v.fill(0.0);
            d.fill(0.0);
        })
        .unwrap()
    }

    #[test]
    fn linear_problem_is_exact_without_refinement() {
        let (sys, bc) = linear();
        let out = solve_bvp(&sys, &bc, &zero_guess(5), &SolverOptions::with_tolerance(1e-8)).unwrap();
        assert_eq!(out.solution.mesh().len(), 5);
        for k in 0..=10 {
            let x = k as f64 / 10.0;
            let (v, d) = out.solution.evaluate(x).unwrap();
            assert!((v[0] - x).abs() < 1e-13);
            assert!((d[0] - 1.0).abs() < 1e-12);
        }
        assert!(out.residuals.interval_norms().iter().all(|r| *r < 1e-13));
        assert!(out.residuals.boundary < 1e-13);
    }

    #[test]
    fn sine_problem_meets_tolerance() {
        let (sys, bc) = sine();
        let opts = SolverOptions::with_tolerance(1e-8);
        let out = solve_bvp(&sys, &bc, &zero_guess(5), &opts).unwrap();
        let err = (0..=100)
            .map(|k| k as f64 / 100.0)
            .map(|x| (out.solution.evaluate(x).unwrap().0[0] - (PI * x).sin()).abs())
            .fold(0.0, f64::max);
        assert!(err <= 1e-6, "max error {err}");
        let (_, d) = out.solution.evaluate(0.25).unwrap();
        assert!((d[0] - PI * (PI / 4.0).cos()).abs() < 1e-5);
        assert!(out.residuals.satisfies(&opts));
    }

    #[test]
    fn converged_residuals_respect_scale() {
        let (sys, bc) = sine();
        let opts = SolverOptions::with_tolerance(1e-6);
        let out = solve_bvp(&sys, &bc, &zero_guess(5), &opts).unwrap();
        let again = estimate_residuals(&out.solution, &sys, &bc);
        assert!(again.max_normalized(opts.rel_tol, opts.abs_tol) <= 1.0);
        assert!(again.boundary <= 1e-6);
    }

    #[test]
    fn fixed_mesh_error_is_fourth_order() {
        let (sys, bc) = sine();
        let opts = SolverOptions { adapt: false, ..SolverOptions::with_tolerance(1e-10) };
        let error = |intervals: usize| {
            let out = solve_bvp(&sys, &bc, &zero_guess(intervals + 1), &opts).unwrap();
            (0..=400)
                .map(|k| k as f64 / 400.0)
                .map(|x| (out.solution.evaluate(x).unwrap().0[0] - (PI * x).sin()).abs())
                .fold(0.0, f64::max)
        };
        let ratio = error(8) / error(16);
        assert!((12.0..=20.0).contains(&ratio), "ratio {ratio}");
    }

    #[test]
    fn perturbation_only_affects_its_interval() {
        let (sys, bc) = linear();
        let out = solve_bvp(&sys, &bc, &zero_guess(6), &SolverOptions::default()).unwrap();
        let mut sol = out.solution.clone();
        sol.interval_coefficients_mut(2)[0][2] += 0.5;
        let rep = estimate_residuals(&sol, &sys, &bc);
        let norms = rep.interval_norms();
        assert!(norms[2] > 1e-3);
        for (i, r) in norms.iter().enumerate() {
            if i != 2 {
                assert!(*r < 1e-13);
            }
        }
    }

    #[test]
    fn repeated_solves_are_bit_identical() {
        let (sys, bc) = sine();
        let opts = SolverOptions::with_tolerance(1e-7);
        let a = solve_bvp(&sys, &bc, &zero_guess(4), &opts).unwrap();
        let b = solve_bvp(&sys, &bc, &zero_guess(4), &opts).unwrap();
        assert_eq!(a.solution, b.solution);
    }

    #[test]
    fn nonseparated_conditions_use_dense_path() {
        // u'' = -u with u(0) + u(1) = sin(1), u'(0) = 1: solution sin(x)
        let sys = FnSystem::new(2, |_, y: &[f64], d: &mut [f64]| {
            d[0] = y[1];
            d[1] = -y[0];
        });
        let bc = FnBoundary::new(2, |a: &[f64], b: &[f64], r: &mut [f64]| {
            r[0] = a[0] + b[0] - 1f64.sin();
            r[1] = a[1] - 1.0;
        });
        let out = solve_bvp(&sys, &bc, &zero_guess(5), &SolverOptions::with_tolerance(1e-9)).unwrap();
        let (v, _) = out.solution.evaluate(0.7).unwrap();
        assert!((v[0] - 0.7f64.sin()).abs() < 1e-8);
    }

    #[test]
    fn nonlinear_problem_with_pinned_node() {
        // Bratu-type u'' + e^u = 0, u(0) = u(1) = 0 (lower branch)
        let sys = FnSystem::new(2, |_, y: &[f64], d: &mut [f64]| {
            d[0] = y[1];
            d[1] = -y[0].exp();
        });
        let bc = FnBoundary::new(2, |a: &[f64], b: &[f64], r: &mut [f64]| {
            r[0] = a[0];
            r[1] = b[0];
        });
        let opts = SolverOptions { pinned: vec![0.3], ..SolverOptions::with_tolerance(1e-8) };
        let out = solve_bvp(&sys, &bc, &zero_guess(4), &opts).unwrap();
        assert!(out.solution.mesh().nodes().contains(&0.3));
        // maximum of the lower branch is 0.140539...
        let peak = out.solution.evaluate(0.5).unwrap().0[0];
        assert!((peak - 0.140_539_2).abs() < 1e-6, "{peak}");
    }

    #[test]
    fn overflow_is_reported() {
        let (sys, bc) = sine();
        let opts = SolverOptions { max_nodes: 8, ..SolverOptions::with_tolerance(1e-12) };
        let err = solve_bvp(&sys, &bc, &zero_guess(5), &opts).unwrap_err();
        assert!(matches!(err, BvpError::MeshOverflow { .. }));
    }

    #[test]
    fn rejects_mismatched_dimensions() {
        let (sys, _) = sine();
        let bc = FnBoundary::new(1, |a: &[f64], _: &[f64], r: &mut [f64]| r[0] = a[0]);
        assert!(matches!(
            solve_bvp(&sys, &bc, &zero_guess(5), &SolverOptions::default()),
            Err(BvpError::DimensionMismatch { .. })
        ));
    }
}
