//! Local time of the planar simple random walk under logarithmic time
//! scaling.
//!
//! * [`walk`]: walk simulation, origin returns, hitting times, exact oracles
//! * [`scaling`]: the rescaled path `L_n(t) = N_k / log n` at `t = log k / log n`
//! * [`limit`]: exact samplers for the pure-jump limit process
//! * [`metrics`]: M1 distance via completed graphs, J1 lower bound, sup norm
//! * [`stats`]: ECDFs, Kolmogorov–Smirnov tests, reference laws
//! * [`harness`]: experiment configs, replica orchestration, output files

pub mod error;
pub mod harness;
pub mod limit;
pub mod metrics;
pub mod parallel;
pub mod rng;
pub mod scaling;
pub mod stats;
pub mod walk;

pub use error::{Error, Result};
