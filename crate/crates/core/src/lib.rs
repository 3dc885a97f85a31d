//! Learning the structure and the truth tables of (stochastic) Boolean
//! networks from observational data.
//!
//! The crate is organised bottom-up:
//!
//! - [`boolean`]: truth tables, deterministic and stochastic Boolean
//!   networks, simulation and random network generation.
//! - [`data`]: the standardized input/output sample matrix and its
//!   on-disk format.
//! - [`info`]: plug-in estimators for entropy, mutual information and
//!   conditional mutual information.
//! - [`inference`]: permutation significance tests, forward selection,
//!   backward elimination, truth-table fitting and whole-network inference.
//! - [`oracle`]: exhaustive baselines used to validate the greedy search.
//! - [`datasets`]: loaders for the UCI case-study files and LendingClub
//!   exports.
//! - [`bench`]: the experiment harness (benchmarks, accuracy, uncertainty
//!   curves, down-sampling).

pub mod bench;
pub mod boolean;
pub mod data;
pub mod datasets;
mod error;
pub mod inference;
pub mod info;
pub mod oracle;
pub mod seed;

pub use boolean::{AdjacencyMatrix, BooleanNetwork, BooleanTable, NaPolicy};
pub use data::{Column, Dataset};
pub use error::{Error, Result};
pub use inference::{InferenceResult, NetworkInferenceResult, SignificanceConfig};
