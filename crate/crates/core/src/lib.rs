//! Linguistic three-way-decision opinion dynamics over an adaptive social
//! network, together with DeGroot and Hegselmann–Krause reference models and
//! a set of consensus measures.
//!
//! The crate is `no_std` and needs only `alloc`. All randomness flows through
//! a caller-supplied generator (see [`rng`]), so identical seeds give
//! bit-identical trajectories. File formats, configuration parsing and the
//! command line live in the companion `opinion3wd` crate.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod baselines;
pub mod dynamics;
mod error;
pub mod linguistic;
pub mod metrics;
pub mod network;
pub mod rng;
pub mod threeway;
pub mod trajectory;

pub use error::{Error, Result};
pub use linguistic::LinguisticTermSet;
pub use network::{NetworkStats, RewiringParams, SocialNetwork};
pub use threeway::{LossMatrix, ThreeWayRegion, ThreeWayThresholds};
pub use trajectory::{
    IterationMetrics, IterationRecord, RunSettings, StepCounters, TrajectoryRecord,
};
