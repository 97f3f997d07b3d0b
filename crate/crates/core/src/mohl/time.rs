use crate::bvp::CollocationSolution;
use crate::physics::TimeDerivative;

use super::MohlError;

/// Uniform time layers `t_n = n dt` up to `tau`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeGrid {
    dt: f64,
    tau: f64,
    steps: usize,
}

impl TimeGrid {
    pub fn new(dt: f64, tau: f64) -> Result<Self, MohlError> {
        if !(dt > 0.0 && dt.is_finite()) || !(tau >= 0.0 && tau.is_finite()) {
            return Err(MohlError::InvalidTimeGrid(format!("dt = {dt}, tau = {tau}")));
        }
        let steps = (tau / dt).round() as usize;
        if (steps as f64 * dt - tau).abs() > 1e-9 * tau.max(1.0) {
            return Err(MohlError::InvalidTimeGrid(format!("{tau} is not a multiple of {dt}")));
        }
        Ok(Self { dt, tau, steps })
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    /// Number of steps, so there are `steps + 1` layers.
    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn time(&self, n: usize) -> f64 {
        n as f64 * self.dt
    }
}

/// Weights `(leading, [w1, w2])` of `u_t ≈ leading u^n + w1 u^{n-1} + w2 u^{n-2}`.
pub fn bdf_weights(order: usize, dt: f64) -> Result<(f64, [f64; 2]), MohlError> {
    match order {
        1 => Ok((1.0 / dt, [-1.0 / dt, 0.0])),
        2 => Ok((1.5 / dt, [-2.0 / dt, 0.5 / dt])),
        _ => Err(MohlError::UnsupportedOrder(order)),
    }
}

/// Backward-difference time derivative at every point; `history` is newest first.
pub fn bdf_time_derivative(history: &[&[f64]], current: &[f64], dt: f64, order: usize) -> Result<Vec<f64>, MohlError> {
    let (leading, w) = bdf_weights(order, dt)?;
    if history.len() < order {
        return Err(MohlError::InsufficientHistory { order, depth: history.len() });
    }
    if let Some(h) = history[..order].iter().find(|h| h.len() != current.len()) {
        return Err(MohlError::InvalidTimeGrid(format!("history of length {} for {} points", h.len(), current.len())));
    }
    Ok((0..current.len())
        .map(|i| {
            // (3u^n - 4u^{n-1} + u^{n-2}) / 2dt groups as 3(u^n - u^{n-1}) - (u^{n-1} - u^{n-2})
            let mut acc = leading * current[i];
            for (k, h) in history[..order].iter().enumerate() {
                acc += w[k] * h[i];
            }
            acc
        })
        .collect())
}

/// Backward-difference time derivative against stored solutions of earlier layers.
#[derive(Clone)]
pub struct Bdf<'a> {
    leading: f64,
    terms: Vec<(f64, &'a CollocationSolution)>,
    component: usize,
}

impl<'a> Bdf<'a> {
    pub fn new(order: usize, dt: f64, history: &[&'a CollocationSolution], component: usize) -> Result<Self, MohlError> {
        let (leading, w) = bdf_weights(order, dt)?;
        if history.len() < order {
            return Err(MohlError::InsufficientHistory { order, depth: history.len() });
        }
        let terms = history[..order].iter().zip(w).map(|(s, w)| (w, *s)).collect();
        Ok(Self { leading, terms, component })
    }

    pub fn order(&self) -> usize {
        self.terms.len()
    }
}

impl TimeDerivative for Bdf<'_> {
    fn at(&self, x: f64, current: f64) -> f64 {
        let mut value = [0.0; 2];
        let mut deriv = [0.0; 2];
        let mut acc = self.leading * current;
        for (w, sol) in &self.terms {
            let xc = x.clamp(sol.mesh().a(), sol.mesh().b());
            sol.evaluate_into(xc, &mut value, &mut deriv).expect("clamped into the domain");
            acc += w * value[self.component];
        }
        acc
    }

    fn sensitivity(&self) -> f64 {
        self.leading
    }
}
