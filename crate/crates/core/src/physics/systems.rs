//! First-order spatial systems and boundary residuals of one time layer.

use crate::bvp::{BoundaryConditions, CollocationSolution, OdeSystem};

use super::drivers::{BoundaryDriver, BoundaryMode, Drivers};
use super::model::DimensionlessModel;
use super::PhysicsError;

/// Approximation of a field's time derivative in terms of its current value.
pub trait TimeDerivative {
    fn at(&self, x: f64, current: f64) -> f64;

    /// Derivative of `at` with respect to the current value.
    fn sensitivity(&self) -> f64;
}

/// Steady state.
#[derive(Debug, Clone, Copy, Default)]
pub struct Steady;

impl TimeDerivative for Steady {
    fn at(&self, _: f64, _: f64) -> f64 {
        0.0
    }
    fn sensitivity(&self) -> f64 {
        0.0
    }
}

/// A prescribed time derivative that does not depend on the current value.
#[derive(Debug, Clone, Copy)]
pub struct Prescribed<F>(pub F);

impl<F: Fn(f64) -> f64> TimeDerivative for Prescribed<F> {
    fn at(&self, x: f64, _: f64) -> f64 {
        (self.0)(x)
    }
    fn sensitivity(&self) -> f64 {
        0.0
    }
}

impl<T: TimeDerivative + ?Sized> TimeDerivative for &T {
    fn at(&self, x: f64, current: f64) -> f64 {
        (**self).at(x, current)
    }
    fn sensitivity(&self) -> f64 {
        (**self).sensitivity()
    }
}

/// `v' = theta`, `theta' = v_t / d - (a / d) theta`.
#[derive(Clone)]
pub struct MoistureSystem<'a, T> {
    model: &'a DimensionlessModel,
    vt: T,
}

impl<'a, T: TimeDerivative> MoistureSystem<'a, T> {
    pub fn new(model: &'a DimensionlessModel, vt: T) -> Self {
        Self { model, vt }
    }

    #[inline]
    pub fn theta_x(&self, x: f64, v: f64, theta: f64) -> f64 {
        let c = self.model.closure_at(x).evaluate(v);
        let r = self.model.coupled_from(&c, theta);
        self.vt.at(x, v) / r.d_bar - r.a_bar / r.d_bar * theta
    }
}

impl<T: TimeDerivative> OdeSystem for MoistureSystem<'_, T> {
    fn dimension(&self) -> usize {
        2
    }

    fn rhs(&self, x: f64, y: &[f64], dydx: &mut [f64]) {
        dydx[0] = y[1];
        dydx[1] = self.theta_x(x, y[0], y[1]);
    }
}

/// `u' = mu`, `mu' = [u_t + (c - f) theta_x + (h - g) theta - e mu] / b`, with
/// `v`, `theta` and `theta_x` taken from the moisture solution of the same layer.
pub struct HeatSystem<'a, V, T> {
    moisture: MoistureSystem<'a, V>,
    v: &'a CollocationSolution,
    ut: T,
}

impl<'a, V: TimeDerivative, T: TimeDerivative> HeatSystem<'a, V, T> {
    pub fn new(moisture: MoistureSystem<'a, V>, v: &'a CollocationSolution, ut: T) -> Self {
        Self { moisture, v, ut }
    }

    /// `(v, theta, theta_x)` at `x`.
    #[inline]
    pub fn moisture_state(&self, x: f64) -> (f64, f64, f64) {
        let mut val = [0.0; 2];
        let mut der = [0.0; 2];
        let x = x.clamp(self.v.mesh().a(), self.v.mesh().b());
        self.v.evaluate_into(x, &mut val, &mut der).expect("clamped into the domain");
        let theta_x = self.moisture.theta_x(x, val[0], val[1]);
        (val[0], val[1], theta_x)
    }

    #[inline]
    fn coefficients(&self, x: f64) -> (f64, f64, f64) {
        let (v, theta, theta_x) = self.moisture_state(x);
        let model = self.moisture.model;
        let r = model.coupled_from(&model.closure_at(x).evaluate(v), theta);
        // mu' = alpha + beta * u_t - gamma * mu
        let source = ((r.c_bar - r.f_bar) * theta_x + (r.h_bar - r.g_bar) * theta) / r.b_bar;
        (source, 1.0 / r.b_bar, r.e_bar / r.b_bar)
    }
}

impl<V: TimeDerivative, T: TimeDerivative> OdeSystem for HeatSystem<'_, V, T> {
    fn dimension(&self) -> usize {
        2
    }

    fn rhs(&self, x: f64, y: &[f64], dydx: &mut [f64]) {
        let (source, inv_b, damping) = self.coefficients(x);
        dydx[0] = y[1];
        dydx[1] = source + inv_b * self.ut.at(x, y[0]) - damping * y[1];
    }

    fn jacobian(&self, x: f64, _y: &[f64], jac: &mut [f64]) -> bool {
        let (_, inv_b, damping) = self.coefficients(x);
        jac[0] = 0.0;
        jac[1] = 1.0;
        jac[2] = inv_b * self.ut.sensitivity();
        jac[3] = -damping;
        true
    }
}

pub fn build_ode_systems<'a, V, T>(
    model: &'a DimensionlessModel,
    vt: V,
    ut: T,
    frozen_v: Option<&'a CollocationSolution>,
) -> Result<(MoistureSystem<'a, V>, HeatSystem<'a, V, T>), PhysicsError>
where
    V: TimeDerivative + Clone,
    T: TimeDerivative,
{
    let v = frozen_v.ok_or(PhysicsError::MissingMoistureSolution)?;
    let moisture = MoistureSystem::new(model, vt);
    let heat = HeatSystem::new(moisture.clone(), v, ut);
    Ok((moisture, heat))
}

/// Moisture residuals `[R_left, R_right]` at time `t`.
pub struct MoistureBoundary<'a> {
    model: &'a DimensionlessModel,
    drivers: &'a Drivers,
    t: f64,
}

impl<'a> MoistureBoundary<'a> {
    pub fn new(model: &'a DimensionlessModel, drivers: &'a Drivers, t: f64) -> Self {
        Self { model, drivers, t }
    }

    pub fn left(&self, v: f64, theta: f64) -> f64 {
        let d: &BoundaryDriver = &self.drivers.left;
        let v_inf = d.v_inf.eval(self.t);
        match d.mode {
            BoundaryMode::Dirichlet => v - v_inf,
            BoundaryMode::Robin => {
                let k_m = self.model.closure_at(0.0).k_m.value(v);
                k_m * theta - self.model.left.bi_m * (v - v_inf) + d.g_inf.eval(self.t)
            }
        }
    }

    pub fn right(&self, v: f64, theta: f64) -> f64 {
        let d = &self.drivers.right;
        let v_inf = d.v_inf.eval(self.t);
        match d.mode {
            BoundaryMode::Dirichlet => v - v_inf,
            BoundaryMode::Robin => {
                let k_m = self.model.closure_at(1.0).k_m.value(v);
                // the printed right residual carries no rain term
                k_m * theta + self.model.right.bi_m * (v - v_inf)
            }
        }
    }
}

impl BoundaryConditions for MoistureBoundary<'_> {
    fn dimension(&self) -> usize {
        2
    }

    fn residual(&self, ya: &[f64], yb: &[f64], res: &mut [f64]) {
        res[0] = self.left(ya[0], ya[1]);
        res[1] = self.right(yb[0], yb[1]);
    }
}

/// Heat residuals `[R_left, R_right]` given the surface moisture states.
pub struct HeatBoundary<'a> {
    model: &'a DimensionlessModel,
    drivers: &'a Drivers,
    t: f64,
    /// `(v, theta)` at `x = 0` and `x = 1`.
    left_moisture: (f64, f64),
    right_moisture: (f64, f64),
}

impl<'a> HeatBoundary<'a> {
    pub fn new(
        model: &'a DimensionlessModel,
        drivers: &'a Drivers,
        t: f64,
        left_moisture: (f64, f64),
        right_moisture: (f64, f64),
    ) -> Self {
        Self { model, drivers, t, left_moisture, right_moisture }
    }

    /// Takes the surface moisture states from a moisture solution.
    pub fn from_solution(
        model: &'a DimensionlessModel,
        drivers: &'a Drivers,
        t: f64,
        v: &CollocationSolution,
    ) -> Self {
        let n = v.mesh().len();
        let l = v.node_value(0);
        let r = v.node_value(n - 1);
        Self::new(model, drivers, t, (l[0], l[1]), (r[0], r[1]))
    }

    fn flux(&self, x: f64, v: f64, theta: f64, mu: f64) -> f64 {
        let c = self.model.closure_at(x);
        self.model.fo_t * (c.k_t.value(v) * mu + c.k_tm.value(v) * self.model.gamma2 * theta)
    }

    fn heat_scale(&self) -> f64 {
        let r = &self.model.references;
        r.temperature_k * r.k_t0_w_per_m_k / r.length_m
    }

    pub fn left(&self, u: f64, mu: f64) -> f64 {
        let d = &self.drivers.left;
        let u_inf = d.u_inf.eval(self.t);
        match d.mode {
            BoundaryMode::Dirichlet => u - u_inf,
            BoundaryMode::Robin => {
                let (v, theta) = self.left_moisture;
                let s = &self.model.left;
                let q = d.heat_source(self.t, u, self.model.references.temperature_k, self.heat_scale());
                self.flux(0.0, v, theta, mu) - s.bi_t * (u - u_inf) - s.bi_tm * self.model.gamma2 * (v - d.v_inf.eval(self.t)) + q
            }
        }
    }

    pub fn right(&self, u: f64, mu: f64) -> f64 {
        let d = &self.drivers.right;
        let u_inf = d.u_inf.eval(self.t);
        match d.mode {
            BoundaryMode::Dirichlet => u - u_inf,
            BoundaryMode::Robin => {
                let (v, theta) = self.right_moisture;
                let s = &self.model.right;
                self.flux(1.0, v, theta, mu) + s.bi_t * (u - u_inf) + s.bi_tm * self.model.gamma2 * (v - d.v_inf.eval(self.t))
            }
        }
    }
}

impl BoundaryConditions for HeatBoundary<'_> {
    fn dimension(&self) -> usize {
        2
    }

    fn residual(&self, ya: &[f64], yb: &[f64], res: &mut [f64]) {
        res[0] = self.left(ya[0], ya[1]);
        res[1] = self.right(yb[0], yb[1]);
    }
}

pub fn build_boundary_residuals<'a>(
    model: &'a DimensionlessModel,
    drivers: &'a Drivers,
    t: f64,
    v: &CollocationSolution,
) -> (MoistureBoundary<'a>, HeatBoundary<'a>) {
    (MoistureBoundary::new(model, drivers, t), HeatBoundary::from_solution(model, drivers, t, v))
}
