//! Time layers by backward differences, each solved as a pair of spatial
//! boundary value problems: moisture first, then heat.

mod problem;
mod stepper;
mod time;

pub use problem::{InitialFields, Problem, Profile};
pub use stepper::{advance_step, run_simulation, run_simulation_with, GuessMesh, LayerStats, MohlOptions, Run, RunFailure, SimulationState};
pub use time::{bdf_time_derivative, bdf_weights, Bdf, TimeGrid};

use crate::bvp::BvpError;
use crate::physics::PhysicsError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Field {
    Moisture,
    Heat,
}

impl std::fmt::Display for Field {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::Moisture => "moisture",
            Self::Heat => "heat",
        })
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum MohlError {
    #[error("{field} solve failed at layer {step} (t* = {t}): {source}")]
    Solver { step: usize, t: f64, field: Field, source: BvpError },
    #[error("order {order} needs {order} previous layers, have {depth}")]
    InsufficientHistory { order: usize, depth: usize },
    #[error("unsupported difference order {0}")]
    UnsupportedOrder(usize),
    #[error("invalid time grid: {0}")]
    InvalidTimeGrid(String),
    #[error(transparent)]
    Bvp(#[from] BvpError),
    #[error(transparent)]
    Physics(#[from] PhysicsError),
}
