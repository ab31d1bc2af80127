//! Monte Carlo simulation of the planar XZZX surface code under circuit-level
//! noise with heralded erasures, decoded with a weighted Union-Find decoder.

pub mod code_model;
pub mod decoding_graph;
pub mod error;
pub mod experiments;
pub mod noise;
pub mod oracle;
pub mod parallel;
pub mod pauli;
pub mod pauli_sim;
pub mod uf_decoder;

pub use error::{Error, Result};
