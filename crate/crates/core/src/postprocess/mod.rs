//! Error norms, surface fluxes, moisture budget and CSV output.

mod budget;
pub mod export;
mod fluxes;
mod norms;
mod sensors;

pub use budget::{mass_budget, MassBudget};
pub use export::{export_csv, read_fields};
pub use fluxes::{boundary_fluxes, interface_sample, point_fluxes, FluxSeries, InterfaceSample};
pub use norms::{inf_error, l2_error_profile, Component, ErrorReport};
pub use sensors::{positional_uncertainty, relative_error_series, total_uncertainty, SensorError};

#[derive(Debug, thiserror::Error)]
pub enum PostError {
    #[error("series do not line up: {0}")]
    GridMismatch(String),
    #[error("x* = {0} is outside the wall")]
    OutOfDomain(f64),
    #[error("measurement {index} at x* = {x_star} is zero")]
    ZeroMeasurement { x_star: f64, index: usize },
    #[error("io: {0}")]
    Io(String),
}

impl From<csv::Error> for PostError {
    fn from(e: csv::Error) -> Self {
        Self::Io(e.to_string())
    }
}

impl From<std::io::Error> for PostError {
    fn from(e: std::io::Error) -> Self {
        Self::Io(e.to_string())
    }
}
