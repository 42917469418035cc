//! Ant Colony System with a self-tuning firefly controller for the symmetric
//! travelling salesman problem, plus exact oracles and the statistics used to
//! compare solvers across instances.
//!
//! The solvers are generic over the floating point type (see [`Scalar`]);
//! the aliases below fix it to `f64`, which is what the CLI and the
//! experiment runner use.

pub mod acs;
pub mod acsfa;
pub mod bench;
pub mod error;
pub mod firefly;
pub mod oracle;
pub mod scalar;
pub mod stats;
pub mod tsplib;

pub use error::{Error, Result};
pub use scalar::Scalar;
pub use tsplib::{parse_instance, Metric, Tour, TspInstance};

pub type AcsParams = acs::AcsParams<f64>;
pub type PheromoneMatrix = acs::PheromoneMatrix<f64>;
pub type RunRecord = acs::RunRecord<f64>;
pub type ParamVector = firefly::ParamVector<f64>;
pub type ParamBounds = firefly::ParamBounds<f64>;
pub type FaState = firefly::FaState<f64>;
pub type HybridConfig = acsfa::HybridConfig<f64>;
pub type ParameterTrace = acsfa::ParameterTrace<f64>;
