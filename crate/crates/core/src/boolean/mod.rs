//! Boolean functions, truth tables and (stochastic) Boolean networks.

mod network;
pub(crate) mod table;

pub use network::{random_network, AdjacencyMatrix, BooleanNetwork};
pub use table::{pattern_bits, pattern_index, BooleanTable, NaPolicy, MAX_ARITY};
