use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::bvp::{solve_bvp, BvpError, BvpSolution, CollocationSolution, FnBoundary, FnSystem, Mesh, SolverOptions};

use super::CaseError;

/// Matching condition imposed at `x = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Continuity {
    /// `k1 u1'(0) = k2 u2'(0)`.
    Flux,
    /// `u1'(0) = u2'(0)`.
    Derivative,
}

/// `-(k u')' = sin(pi x)` on `[-1, 1]` with `u(-1) = -1`, `u(1) = 1` and
/// `k = k1` left of zero, `k2` right of it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InterfaceBenchmark {
    pub k1: f64,
    pub k2: f64,
}

impl InterfaceBenchmark {
    pub fn new(k1: f64, k2: f64) -> Self {
        Self { k1, k2 }
    }

    pub fn c_a(&self) -> f64 {
        (self.k2 - self.k1) / (self.k2 + self.k1)
    }

    pub fn c_b(&self) -> f64 {
        (self.k1 - self.k2) / (2.0 * PI * self.k1 * self.k2)
    }

    pub fn constant(&self, mode: Continuity) -> f64 {
        match mode {
            Continuity::Flux => self.c_a(),
            Continuity::Derivative => self.c_b(),
        }
    }

    pub fn diffusivity(&self, x: f64) -> f64 {
        if x < 0.0 {
            self.k1
        } else {
            self.k2
        }
    }

    /// Closed-form `(u, u')` at `x`.
    pub fn analytic(&self, mode: Continuity, x: f64) -> Result<(f64, f64), CaseError> {
        if !(-1.0..=1.0).contains(&x) {
            return Err(CaseError::OutOfDomain(x));
        }
        let c = self.constant(mode);
        let k = self.diffusivity(x);
        let (s, cs) = (PI * x).sin_cos();
        let sign = if x < 0.0 { 1.0 } else { -1.0 };
        Ok((s / (k * PI * PI) + x + c * (1.0 + sign * x), cs / (k * PI) + 1.0 + sign * c))
    }

    /// Adaptive collocation solve with a mesh node at the interface.
    pub fn solve(&self, tol: f64, initial_nodes: usize) -> Result<BvpSolution, BvpError> {
        let system = FnSystem::new(2, |x: f64, y: &[f64], dy: &mut [f64]| {
            dy[0] = y[1];
            dy[1] = -(PI * x).sin() / self.diffusivity(x);
        });
        let bc = FnBoundary::new(2, |ya: &[f64], yb: &[f64], r: &mut [f64]| {
            r[0] = ya[0] + 1.0;
            r[1] = yb[0] - 1.0;
        });
        let mesh = Mesh::uniform_with_pinned(-1.0, 1.0, initial_nodes, &[0.0])?;
        let guess = CollocationSolution::from_fn(mesh, 2, |x, v, d| {
            v.copy_from_slice(&[x, 1.0]);
            d.copy_from_slice(&[1.0, 0.0]);
        })?;
        let options = SolverOptions { pinned: vec![0.0], ..SolverOptions::with_tolerance(tol) };
        solve_bvp(&system, &bc, &guess, &options)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn equal_diffusivities_remove_the_correction() {
        let b = InterfaceBenchmark::new(2.0, 2.0);
        assert_eq!(b.c_a(), 0.0);
        assert_eq!(b.c_b(), 0.0);
        let (u0, _) = b.analytic(Continuity::Derivative, 0.0).unwrap();
        assert_eq!(u0, 0.0);
        for x in [-0.7, 0.2, 0.9] {
            let (u, _) = b.analytic(Continuity::Flux, x).unwrap();
            assert!((u - ((PI * x).sin() / (2.0 * PI * PI) + x)).abs() < 1e-15);
        }
    }

    #[test]
    fn constants_for_one_and_two() {
        let b = InterfaceBenchmark::new(1.0, 2.0);
        assert!((b.c_b() + 1.0 / (4.0 * PI)).abs() < 1e-15);
        assert!((b.c_a() - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn outside_the_domain() {
        let b = InterfaceBenchmark::new(1.0, 5.0);
        assert!(matches!(b.analytic(Continuity::Flux, 1.5), Err(CaseError::OutOfDomain(_))));
    }

    #[test]
    fn solver_picks_the_derivative_continuous_branch() {
        let b = InterfaceBenchmark::new(1.0, 5.0);
        let sol = b.solve(1e-8, 11).unwrap().solution;
        let err = (0..=400)
            .map(|i| -1.0 + 2.0 * i as f64 / 400.0)
            .map(|x| (sol.evaluate(x).unwrap().0[0] - b.analytic(Continuity::Derivative, x).unwrap().0).abs())
            .fold(0.0, f64::max);
        assert!(err < 1e-6, "{err}");
    }

    proptest! {
        #[test]
        fn closed_forms_match_at_zero(k1 in 0.1f64..10.0, k2 in 0.1f64..10.0) {
            let b = InterfaceBenchmark::new(k1, k2);
            let left = |m, x: f64| b.analytic(m, x).unwrap();
            // left branch evaluated at 0 from its own formula
            let branch1 = |m| {
                let c = b.constant(m);
                (c, 1.0 / (k1 * PI) + 1.0 + c)
            };
            for m in [Continuity::Flux, Continuity::Derivative] {
                let (u1, d1) = branch1(m);
                let (u2, d2) = left(m, 0.0);
                prop_assert!((u1 - u2).abs() < 1e-12);
                match m {
                    Continuity::Derivative => prop_assert!((d1 - d2).abs() < 1e-12),
                    Continuity::Flux => prop_assert!((k1 * d1 - k2 * d2).abs() < 1e-12 * (1.0 + k1 + k2)),
                }
            }
            prop_assert!((b.c_a() * (k1 + k2) - (k2 - k1)).abs() < 1e-12 * (k1 + k2));
            prop_assert!((b.c_b() * 2.0 * PI * k1 * k2 - (k1 - k2)).abs() < 1e-10 * (1.0 + k1 * k2));
        }
    }
}
