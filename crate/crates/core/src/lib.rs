//! Cubical descent engine.

pub mod complex;
pub mod cubical;
pub mod diagram;
pub mod fixture;
pub mod gysin;
pub mod linalg;
pub mod motive;
pub mod sample;
pub mod splitting;
pub mod verify;
