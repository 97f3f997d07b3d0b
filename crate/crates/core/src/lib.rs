pub mod bvp;
pub mod cases;
pub mod mohl;
pub mod physics;
pub mod postprocess;
pub mod reference;
pub mod series;
pub mod study;
