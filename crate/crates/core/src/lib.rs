//! GCN-assisted distributed maximum weighted independent set (MWIS) solver
//! for wireless link scheduling.
//!
//! A graph convolutional network turns per-node utilities into topology-aware
//! scaling factors `z`, the modified weights `z ⊙ u` are handed to a round-based
//! local greedy solver, and the result is compared against an exact
//! branch-and-bound oracle on synthetic graphs and inside a queueing simulator.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod gcn;
pub mod graph;
pub mod mwis;
pub mod report;
pub mod rng;
pub mod train;
pub mod wireless;

pub use gcn::{GcnParams, Embedding};
pub use graph::{Graph, GraphError, NodeUtilities};
pub use mwis::{IndependentSet, RoundTrace, SolverBudget};
pub use report::EvalReport;
