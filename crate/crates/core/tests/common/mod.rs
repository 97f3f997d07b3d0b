#![allow(dead_code)]

use std::f64::consts::PI;

use mohl::mohl::{InitialFields, MohlOptions, Problem, Profile};
use mohl::physics::{library, BoundaryDriver, CoefficientClosure, DimensionlessModel, Drivers, Layer, Signal, SurfaceNumbers};
use mohl::series::FieldSeries;

pub const GAMMA: f64 = 0.5;

/// Single material with unit closures, equal Fourier numbers and `gamma1 = gamma2`.
pub fn constant_model(fo: f64) -> DimensionlessModel {
    let surface = SurfaceNumbers { bi_m: 1.0, bi_t: 1.0, bi_tm: 1.0 };
    DimensionlessModel {
        fo_m: fo,
        fo_t: fo,
        gamma1: GAMMA,
        gamma2: GAMMA,
        left: surface,
        right: surface,
        references: library::single_layer_references(),
        layers: vec![Layer { x_start: 0.0, x_end: 1.0, closure: CoefficientClosure::constant() }],
    }
}

pub const AMPLITUDE_V: f64 = 0.3;
pub const AMPLITUDE_U: f64 = 0.02;

/// Fixed unit ends with a decaying sine on top; the exact solution is
/// `1 + a exp(-Fo pi^2 t) sin(pi x)` for each field since the coupling terms cancel.
pub fn decaying_sine(fo: f64, dt: f64, tau: f64) -> Problem {
    let one = || Signal::constant(1.0);
    let sine = |a: f64| {
        // sin(pi x) is not a polynomial; a Taylor expansion of degree 31 is exact to round-off on [0, 1]
        let mut c = vec![0.0; 32];
        let mut term = a * PI;
        for k in (1..=31).step_by(2) {
            c[31 - k] = term;
            term *= -PI * PI / ((k + 1) * (k + 2)) as f64;
        }
        c[31] = 1.0;
        Profile::Polynomial { coefficients: c }
    };
    Problem {
        model: constant_model(fo),
        drivers: Drivers { left: BoundaryDriver::dirichlet(one(), one()), right: BoundaryDriver::dirichlet(one(), one()) },
        initial: InitialFields { v: sine(AMPLITUDE_V), u: sine(AMPLITUDE_U) },
        dt,
        tau,
    }
}

pub fn decaying_sine_exact(fo: f64, amplitude: f64, t: f64, x: f64) -> f64 {
    1.0 + amplitude * (-fo * PI * PI * t).exp() * (PI * x).sin()
}

/// Max error of the last stored layer against the exact decaying sine.
pub fn final_error(series: &FieldSeries, fo: f64) -> (f64, f64) {
    let s = series.snapshots.last().unwrap();
    let err = |vals: &[f64], fo, a| {
        series.grid.iter().zip(vals).map(|(&x, &y)| (y - decaying_sine_exact(fo, a, s.t, x)).abs()).fold(0.0, f64::max)
    };
    (err(&s.v, fo, AMPLITUDE_V), err(&s.u, fo, AMPLITUDE_U))
}

/// Uniform state at rest with matching constant ambients.
pub fn equilibrium(model: DimensionlessModel, dt: f64, tau: f64) -> Problem {
    let d = || BoundaryDriver::robin(Signal::constant(1.0), Signal::constant(0.8));
    Problem {
        model,
        drivers: Drivers { left: d(), right: d() },
        initial: InitialFields { v: Profile::Uniform { value: 0.8 }, u: Profile::Uniform { value: 1.0 } },
        dt,
        tau,
    }
}

pub fn tight(tol: f64) -> MohlOptions {
    MohlOptions::with_tolerance(tol, 10)
}
