//! Built-in walls, the two-material interface benchmark and sensor input.

mod interface;
mod presets;
mod sensors;

pub use interface::{Continuity, InterfaceBenchmark};
pub use presets::{
    multilayer, preset, single_layer, wood_fibre_initial, CaseConfig, Preset, SolverSettings, TimeSettings, PRESET_NAMES,
};
pub use sensors::{
    experimental, load_sensor_csv, parse_sensor_csv, synthetic_sensor_data, Probe, SensorData, SensorSeries,
    INTERIOR_DEPTHS_CM, SENSOR_COLUMNS, WALL_THICKNESS_CM,
};

use crate::physics::PhysicsError;

#[derive(Debug, thiserror::Error)]
pub enum CaseError {
    #[error("unknown preset {0:?}")]
    UnknownPreset(String),
    #[error("missing data: {0}")]
    MissingData(String),
    #[error("x = {0} is outside [-1, 1]")]
    OutOfDomain(f64),
    #[error("sensor file: {0}")]
    SchemaViolation(String),
    #[error("sensor file row {row}: time {found} does not follow {previous}")]
    NonMonotoneTime { row: usize, previous: f64, found: f64 },
    #[error("config: {0}")]
    Config(String),
    #[error("invalid case: {0}")]
    Invalid(String),
    #[error("io: {0}")]
    Io(String),
    #[error(transparent)]
    Physics(#[from] PhysicsError),
}

impl From<csv::Error> for CaseError {
    fn from(e: csv::Error) -> Self {
        match e.kind() {
            csv::ErrorKind::Io(_) => Self::Io(e.to_string()),
            _ => Self::SchemaViolation(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CaseError {
    fn from(e: std::io::Error) -> Self {
        Self::Io(e.to_string())
    }
}
