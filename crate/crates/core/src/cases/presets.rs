use serde::{Deserialize, Serialize};

use crate::mohl::{InitialFields, MohlOptions, Problem, Profile};
use crate::physics::{library, BoundaryDriver, Drivers, Signal};

use super::interface::InterfaceBenchmark;
use super::CaseError;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeSettings {
    pub dt_star: f64,
    pub tau_star: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverSettings {
    pub tolerance: f64,
    pub initial_nodes: usize,
    pub max_nodes: usize,
    pub output_points: usize,
}

impl SolverSettings {
    pub fn mohl_options(&self) -> MohlOptions {
        let mut o = MohlOptions::with_tolerance(self.tolerance, self.initial_nodes);
        o.solver.max_nodes = self.max_nodes;
        o.output_points = self.output_points;
        o
    }
}

/// A complete wall simulation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CaseConfig {
    pub name: String,
    pub time: TimeSettings,
    pub solver: SolverSettings,
    pub initial: InitialFields,
    pub model: crate::physics::DimensionlessModel,
    pub drivers: Drivers,
}

impl CaseConfig {
    pub fn problem(&self) -> Problem {
        Problem {
            model: self.model.clone(),
            drivers: self.drivers.clone(),
            initial: self.initial.clone(),
            dt: self.time.dt_star,
            tau: self.time.tau_star,
        }
    }

    /// Extremes of `v` over the initial fields and the ambient drivers.
    pub fn ambient_range(&self) -> (f64, f64) {
        let tau = self.time.tau_star.max(1.0);
        let (lo0, hi0) = self.initial.v.range();
        let (l1, h1) = self.drivers.left.v_range(tau);
        let (l2, h2) = self.drivers.right.v_range(tau);
        (lo0.min(l1).min(l2), hi0.max(h1).max(h2))
    }

    pub fn validate(&self) -> Result<(), CaseError> {
        self.model.validate()?;
        if !(self.time.dt_star > 0.0 && self.time.tau_star >= 0.0) {
            return Err(CaseError::Invalid(format!("time settings {:?}", self.time)));
        }
        if !(self.solver.tolerance > 0.0) || self.solver.initial_nodes < 2 || self.solver.output_points < 2 {
            return Err(CaseError::Invalid(format!("solver settings {:?}", self.solver)));
        }
        let (lo, hi) = self.initial.v.range();
        self.model.check_positivity(lo, hi)?;
        Ok(())
    }

    pub fn to_toml(&self) -> Result<String, CaseError> {
        toml::to_string_pretty(self).map_err(|e| CaseError::Config(e.to_string()))
    }

    pub fn from_toml(text: &str) -> Result<Self, CaseError> {
        toml::from_str(text).map_err(|e| CaseError::Config(e.to_string()))
    }
}

pub enum Preset {
    Wall(Box<CaseConfig>),
    Interface(InterfaceBenchmark),
}

pub const PRESET_NAMES: [&str; 4] = ["single_layer", "multilayer", "experimental", "appendix_c"];

/// Built-in case by name. The experimental wall needs sensor data and is built
/// with [`super::experimental`].
pub fn preset(name: &str) -> Result<Preset, CaseError> {
    match name {
        "single_layer" => Ok(Preset::Wall(Box::new(single_layer()))),
        "multilayer" => Ok(Preset::Wall(Box::new(multilayer()))),
        "experimental" => Err(CaseError::MissingData("the experimental case needs a sensor CSV".into())),
        "appendix_c" => Ok(Preset::Interface(InterfaceBenchmark::new(1.0, 5.0))),
        other => Err(CaseError::UnknownPreset(other.to_owned())),
    }
}

fn humid(humidity: Signal, temperature: &Signal, t0: f64, pv0: f64) -> Signal {
    Signal::Humid {
        humidity: Box::new(humidity),
        temperature: Box::new(temperature.clone()),
        reference_temperature_k: t0,
        reference_pressure_pa: pv0,
    }
}

pub fn single_layer() -> CaseConfig {
    let model = library::single_layer_model();
    let (t0, pv0) = (model.references.temperature_k, model.references.vapour_pressure_pa);
    let u_left = Signal::SineSquared { base: 1.0, amplitude: 0.02, period: 48.0 };
    let u_right = Signal::SineSquared { base: 1.0, amplitude: 0.005, period: 24.0 };
    let v_left = humid(Signal::SineSquared { base: 0.7, amplitude: 0.25, period: 24.0 }, &u_left, t0, pv0);
    let v_right = humid(Signal::Tanh { base: 0.825, amplitude: 0.125, shift: 36.0 }, &u_right, t0, pv0);
    CaseConfig {
        name: "single_layer".into(),
        time: TimeSettings { dt_star: 0.1, tau_star: 72.0 },
        solver: SolverSettings { tolerance: 1e-5, initial_nodes: 10, max_nodes: 2000, output_points: 201 },
        initial: InitialFields { v: Profile::Uniform { value: 1.0 }, u: Profile::Uniform { value: 1.0 } },
        model,
        drivers: Drivers { left: BoundaryDriver::robin(u_left, v_left), right: BoundaryDriver::robin(u_right, v_right) },
    }
}

pub fn multilayer() -> CaseConfig {
    let model = library::multilayer_model();
    let (t0, pv0) = (model.references.temperature_k, model.references.vapour_pressure_pa);
    let u_left = Signal::Sine { base: 1.0, amplitude: -0.02, period: 24.0 };
    let u_right = Signal::Sine { base: 1.0, amplitude: 0.01, period: 48.0 };
    let v_left = humid(Signal::SineSquared { base: 0.5, amplitude: 0.3, period: 48.0 }, &u_left, t0, pv0);
    let v_right = humid(Signal::SineSquared { base: 0.5, amplitude: 0.2, period: 72.0 }, &u_right, t0, pv0);
    let rain = Signal::Pulse { amplitude: 3.8, half_period: 105.0, power: 70, start: 40.0, end: 65.0 };
    let mut left = BoundaryDriver::robin(u_left.clone(), v_left);
    left.q_inf = Signal::SensibleRain {
        factor: 1.8e-4,
        source: Box::new(rain.clone()),
        temperature: Box::new(u_left),
        reference: 1.0,
    };
    left.g_inf = rain;
    CaseConfig {
        name: "multilayer".into(),
        time: TimeSettings { dt_star: 0.1, tau_star: 120.0 },
        solver: SolverSettings { tolerance: 1e-5, initial_nodes: 20, max_nodes: 2000, output_points: 201 },
        initial: InitialFields { v: Profile::Uniform { value: 1.0 }, u: Profile::Uniform { value: 1.0 } },
        model,
        drivers: Drivers { left, right: BoundaryDriver::robin(u_right, v_right) },
    }
}

/// Initial profiles of the wood-fibre wall.
pub fn wood_fibre_initial() -> InitialFields {
    InitialFields {
        u: Profile::Polynomial { coefficients: vec![-0.08806, 0.1688, -0.1143, -0.01621, 1.015] },
        v: Profile::Polynomial { coefficients: vec![-0.408, 1.188, -1.053, 0.08969, 1.092] },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_layer_parameters() {
        let c = single_layer();
        assert_eq!(c.model.fo_t, 0.16);
        assert_eq!(c.model.left.bi_m, 3.65);
        assert_eq!(c.time.tau_star, 72.0);
        assert_eq!(c.time.dt_star, 0.1);
        c.validate().unwrap();
    }

    #[test]
    fn multilayer_parameters() {
        let c = multilayer();
        assert_eq!(c.time.tau_star, 120.0);
        assert_eq!(c.model.references.length_m, 0.12);
        let xi = c.model.interfaces()[0];
        assert!((xi * c.model.references.length_m - 0.10).abs() < 1e-15);
        c.validate().unwrap();
        assert_eq!(c.drivers.left.g_inf.eval(30.0), 0.0);
        assert!(c.drivers.left.g_inf.eval(52.5) > 3.79);
    }

    #[test]
    fn presets_round_trip_through_toml() {
        for c in [single_layer(), multilayer()] {
            let text = c.to_toml().unwrap();
            assert_eq!(CaseConfig::from_toml(&text).unwrap(), c);
        }
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let mut text = single_layer().to_toml().unwrap();
        text = text.replacen("[time]", "[time]\nspeed_m_per_s = 3.0", 1);
        assert!(matches!(CaseConfig::from_toml(&text), Err(CaseError::Config(_))));
    }

    #[test]
    fn unknown_preset() {
        assert!(matches!(preset("triple"), Err(CaseError::UnknownPreset(_))));
        assert!(matches!(preset("experimental"), Err(CaseError::MissingData(_))));
    }

    #[test]
    fn sinusoidal_drivers_are_periodic() {
        let c = single_layer();
        for k in 0..40 {
            let t = 0.9 * k as f64;
            let a = c.drivers.left.v_inf.eval(t);
            let b = c.drivers.left.v_inf.eval(t + 48.0);
            assert!((a - b).abs() < 1e-12);
        }
    }
}
