//! Material laws, dimensionless scaling, coefficient closures and the coupled
//! spatial systems of one time layer.

pub mod closure;
pub mod drivers;
pub mod library;
pub mod material;
pub mod model;
pub mod systems;

pub use closure::{CoefficientClosure, CoefficientValues, ScalarClosure};
pub use drivers::{BoundaryDriver, BoundaryMode, Drivers, Radiation, Signal};
pub use material::{saturation_pressure, Kelvin, Pascal, PhysicalMaterial, WaterProperties};
pub use model::{
    build_dimensionless_model, CoupledRhsCoefficients, DimensionlessModel, Layer, PhysicalSetup, References,
    SurfaceExchange, SurfaceNumbers,
};
pub use systems::{
    build_boundary_residuals, build_ode_systems, HeatBoundary, HeatSystem, MoistureBoundary, MoistureSystem,
    Prescribed, Steady, TimeDerivative,
};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum PhysicsError {
    #[error("{quantity} {value} outside [{lo}, {hi}]")]
    OutOfRange { quantity: &'static str, value: f64, lo: f64, hi: f64 },
    #[error("vapour pressure must be positive, got {0} Pa")]
    NonPositivePressure(f64),
    #[error("invalid reference value: {0}")]
    InvalidReference(String),
    #[error("invalid layers: {0}")]
    InvalidLayers(String),
    #[error("x* = {0} outside [0, 1]")]
    OutOfDomain(f64),
    #[error("heat system needs the moisture solution of the same time layer")]
    MissingMoistureSolution,
    #[error("closure {name} of layer {layer} is not positive at v = {v}")]
    NonPositiveClosure { layer: usize, name: &'static str, v: f64 },
}
