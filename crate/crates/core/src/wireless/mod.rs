//! Slotted wireless network simulation: random geometric networks, their
//! link conflict graphs, per-link queues with Poisson arrivals and random link
//! rates, scheduled slot by slot by a pluggable MWIS scheduler.

mod network;
mod schedulers;
mod sim;

pub use network::{gen_network, load_network, save_network, WirelessNetwork};
pub use schedulers::{ExactScheduler, GcnScheduler, LocalGreedyScheduler, ScheduleDecision, Scheduler};
pub use sim::{compare_schedulers, run_instance, sim_step, QueueState, ScheduleTrace, SimConfig, SlotResult, MAX_RATE};

use thiserror::Error;

use crate::gcn::GcnError;
use crate::graph::GraphError;
use crate::mwis::SolverError;

#[derive(Debug, Error)]
pub enum SimError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error(transparent)]
    Gcn(#[from] GcnError),
    #[error("scheduler `{scheduler}` violated the protocol: {source}")]
    ProtocolViolation { scheduler: String, source: SolverError },
    #[error("invalid simulation parameter: {0}")]
    Parameter(String),
}
