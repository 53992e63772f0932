//! Composite random graphs for heterogeneous key predistribution over
//! heterogeneous on-off channels.
//!
//! Nodes fall into classes; a class-i node holds `K_i` keys drawn without
//! replacement from a pool of `P`, and the channel between a class-i and a
//! class-j node is on with probability `alpha_ij`. Two nodes are adjacent
//! when they share a key and their channel is on.
//!
//! - [`model`]: exact edge probabilities and the connectivity threshold
//! - [`sampler`]: random instances of the graphs
//! - [`analysis`]: connectivity and isolated-node predicates
//! - [`montecarlo`]: seeded, parallel trial harness and parameter sweeps
//! - [`scaling`]: n-indexed parameter families and their diagnostics
//! - [`oracle`]: brute-force references for tests

pub mod analysis;
pub mod error;
pub mod model;
pub mod montecarlo;
pub mod oracle;
pub mod sampler;
pub mod scaling;
mod seed;

pub use error::{Error, Result};
pub use model::{ChannelMatrix, ClassDistribution, DerivedProbabilities, KeyProfile, SystemParams};
pub use montecarlo::{ExperimentConfig, SweepAxis, SweepResult, SweepRow, SweepSpec, TrialTally};
pub use sampler::{NodeAssignment, SampledGraph};
