//! Goldfish (rational Ruijsenaars-Schneider) dynamics, its geometry, Poisson
//! structures, matrix reductions and the hyperbolic variant.

pub mod antisym;
pub mod dynamics;
pub mod error;
pub mod geometry;
pub mod hyperbolic;
pub mod linalg;
pub mod poisson;
pub mod reduction;
pub mod sampling;
pub mod symfun;
pub mod verify;

pub use antisym::Antisymmetric;
pub use dynamics::{EcmState, GoldfishState, IntegratorConfig, Trajectory};
pub use error::{Error, Result};
pub use geometry::{GeodesicState, WFunction};
pub use symfun::{Configuration, FlatPoint};
