use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::material::saturation_pressure_unchecked;

/// A dimensionless time signal.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Signal {
    Constant { value: f64 },
    /// `base + amplitude * sin(2 pi t / period)`
    Sine { base: f64, amplitude: f64, period: f64 },
    /// `base + amplitude * sin(2 pi t / period)^2`
    SineSquared { base: f64, amplitude: f64, period: f64 },
    /// `base + amplitude * tanh(t - shift)`
    Tanh { base: f64, amplitude: f64, shift: f64 },
    /// `amplitude * sin(pi t / half_period)^power` inside `[start, end]`, zero outside.
    Pulse { amplitude: f64, half_period: f64, power: i32, start: f64, end: f64 },
    /// Vapour pressure of air at relative humidity `humidity` and temperature
    /// `temperature * reference_temperature_k`, over `reference_pressure_pa`.
    Humid {
        humidity: Box<Signal>,
        temperature: Box<Signal>,
        reference_temperature_k: f64,
        reference_pressure_pa: f64,
    },
    /// `factor * source * (temperature - reference)`
    SensibleRain { factor: f64, source: Box<Signal>, temperature: Box<Signal>, reference: f64 },
    /// Piecewise-linear series, held constant outside its time span.
    Series { times: Vec<f64>, values: Vec<f64> },
}

impl Signal {
    pub fn constant(value: f64) -> Self {
        Self::Constant { value }
    }

    pub fn zero() -> Self {
        Self::constant(0.0)
    }

    pub fn eval(&self, t: f64) -> f64 {
        match self {
            Self::Constant { value } => *value,
            Self::Sine { base, amplitude, period } => base + amplitude * (2.0 * PI * t / period).sin(),
            Self::SineSquared { base, amplitude, period } => base + amplitude * (2.0 * PI * t / period).sin().powi(2),
            Self::Tanh { base, amplitude, shift } => base + amplitude * (t - shift).tanh(),
            Self::Pulse { amplitude, half_period, power, start, end } => {
                if t < *start || t > *end {
                    0.0
                } else {
                    amplitude * (PI * t / half_period).sin().powi(*power)
                }
            }
            Self::Humid { humidity, temperature, reference_temperature_k, reference_pressure_pa } => {
                let t_k = temperature.eval(t) * reference_temperature_k;
                humidity.eval(t) * saturation_pressure_unchecked(t_k) / reference_pressure_pa
            }
            Self::SensibleRain { factor, source, temperature, reference } => {
                factor * source.eval(t) * (temperature.eval(t) - reference)
            }
            Self::Series { times, values } => interpolate(times, values, t),
        }
    }

    /// Smallest and largest value over `[0, horizon]`, sampled.
    pub fn range(&self, horizon: f64, samples: usize) -> (f64, f64) {
        let samples = samples.max(2);
        (0..samples)
            .map(|k| self.eval(horizon * k as f64 / (samples - 1) as f64))
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)))
    }
}

pub(crate) fn interpolate(times: &[f64], values: &[f64], t: f64) -> f64 {
    match times.len() {
        0 => 0.0,
        1 => values[0],
        n => {
            if t <= times[0] {
                return values[0];
            }
            if t >= times[n - 1] {
                return values[n - 1];
            }
            let i = times.partition_point(|&s| s <= t) - 1;
            let w = (t - times[i]) / (times[i + 1] - times[i]);
            values[i] + w * (values[i + 1] - values[i])
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundaryMode {
    Robin,
    Dirichlet,
}

/// Long-wave exchange with the surrounding surfaces at temperatures `surfaces` (K).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Radiation {
    pub view_factor: f64,
    pub emissivity: f64,
    pub surfaces_k: Vec<Signal>,
}

pub const STEFAN_BOLTZMANN: f64 = 5.670_374_419e-8;

/// Ambient conditions and sources on one wall surface, all dimensionless.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundaryDriver {
    pub mode: BoundaryMode,
    pub u_inf: Signal,
    pub v_inf: Signal,
    pub g_inf: Signal,
    pub q_inf: Signal,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radiation: Option<Radiation>,
}

impl BoundaryDriver {
    pub fn robin(u_inf: Signal, v_inf: Signal) -> Self {
        Self { mode: BoundaryMode::Robin, u_inf, v_inf, g_inf: Signal::zero(), q_inf: Signal::zero(), radiation: None }
    }

    pub fn dirichlet(u: Signal, v: Signal) -> Self {
        Self { mode: BoundaryMode::Dirichlet, ..Self::robin(u, v) }
    }

    /// Dimensionless heat source `q*`; radiation needs the surface temperature
    /// and the heat scaling `T0 k_T0 / L`.
    pub fn heat_source(&self, t: f64, u_surface: f64, temperature_k: f64, heat_scale: f64) -> f64 {
        let mut q = self.q_inf.eval(t);
        if let Some(r) = &self.radiation {
            let ts = u_surface * temperature_k;
            let sum: f64 = r.surfaces_k.iter().map(|s| s.eval(t).powi(4) - ts.powi(4)).sum();
            q += r.view_factor * r.emissivity * STEFAN_BOLTZMANN * sum / heat_scale;
        }
        q
    }

    /// Sampled (min, max) of `v_inf` over the horizon.
    pub fn v_range(&self, horizon: f64) -> (f64, f64) {
        self.v_inf.range(horizon, 2001)
    }
}

/// Both surfaces of the wall.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Drivers {
    pub left: BoundaryDriver,
    pub right: BoundaryDriver,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn periodic_signals_repeat() {
        let s = Signal::SineSquared { base: 1.0, amplitude: 0.02, period: 48.0 };
        let c = Signal::Sine { base: 1.0, amplitude: -0.02, period: 24.0 };
        for k in 0..50 {
            let t = 0.37 * k as f64;
            assert!((s.eval(t) - s.eval(t + 24.0)).abs() < 1e-12);
            assert!((c.eval(t) - c.eval(t + 24.0)).abs() < 1e-12);
        }
    }

    #[test]
    fn pulse_is_windowed() {
        let p = Signal::Pulse { amplitude: 3.8, half_period: 105.0, power: 70, start: 40.0, end: 65.0 };
        assert_eq!(p.eval(39.9), 0.0);
        assert_eq!(p.eval(65.1), 0.0);
        assert!((p.eval(52.5) - 3.8).abs() < 1e-12);
    }

    #[test]
    fn series_interpolates_linearly() {
        let s = Signal::Series { times: vec![0.0, 2.0], values: vec![1.0, 3.0] };
        assert_eq!(s.eval(0.5), 1.5);
        assert_eq!(s.eval(1.0), 2.0);
        assert_eq!(s.eval(-1.0), 1.0);
        assert_eq!(s.eval(5.0), 3.0);
    }

    #[test]
    fn humid_signal_uses_saturation() {
        let s = Signal::Humid {
            humidity: Box::new(Signal::constant(0.7)),
            temperature: Box::new(Signal::constant(1.0)),
            reference_temperature_k: 293.15,
            reference_pressure_pa: 1636.53,
        };
        assert!((s.eval(3.0) - 0.7 * saturation_pressure_unchecked(293.15) / 1636.53).abs() < 1e-15);
    }

    #[test]
    fn radiation_vanishes_at_equal_temperatures() {
        let mut d = BoundaryDriver::robin(Signal::constant(1.0), Signal::constant(1.0));
        d.radiation = Some(Radiation {
            view_factor: 1.0,
            emissivity: 0.9,
            surfaces_k: vec![Signal::constant(293.15), Signal::constant(293.15)],
        });
        assert!(d.heat_source(0.0, 1.0, 293.15, 1.0).abs() < 1e-9);
        assert!(d.heat_source(0.0, 0.99, 293.15, 1.0) > 0.0);
    }
}
