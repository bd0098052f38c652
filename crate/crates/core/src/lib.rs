//! Treewidth-aware selection of a single two-qubit gate to cut.
//!
//! The selector works on the circuit's interaction graph only. Stage 1 runs
//! a min-fill elimination and scores each interaction edge by the fill edges
//! it is responsible for; the top candidates are then re-ranked by edge
//! betweenness centrality minus a degree penalty. Around the selector the
//! crate provides everything needed to evaluate it: benchmark graph
//! generators, a SABRE-style router on heavy-hex devices, an exact
//! statevector / density-matrix simulator with quasi-probability gate
//! cutting, and the breakeven and statistics helpers used by the sweeps.

pub mod analysis;
pub mod circuit;
pub mod cli;
pub mod error;
pub mod graph;
pub mod interaction;
pub mod rng;
pub mod router;
pub mod select;
pub mod sim;
pub mod treewidth;

pub use error::{Error, Result};
