//! Unsupervised training of the GCN against a greedy baseline, and evaluation
//! against the exact oracle.

mod adam;
mod dataset;
mod evaluate;
mod replay;
mod reward;
mod trainer;

pub use adam::Adam;
pub use dataset::{
    generate_training_set, parse_dataset_spec, DatasetEntry, DatasetSpec, DegreeSpec, GraphFamily, Instance,
    UtilityDist,
};
pub use evaluate::{evaluate, SOLVER_GCN, SOLVER_GREEDY};
pub use replay::ReplayBuffer;
pub use reward::{compute_rewards, rms_loss, RewardMode, Rewards};
pub use trainer::{train, train_with, EpochStats, TrainConfig, TrainHistory, TrainSample};

use thiserror::Error;

use crate::gcn::{GcnError, GcnParams};
use crate::graph::GraphError;
use crate::mwis::SolverError;

#[derive(Debug, Error)]
pub enum TrainError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error(transparent)]
    Gcn(#[from] GcnError),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("reward undefined: greedy solution has zero utility")]
    UndefinedReward,
    #[error("loss became non-finite in epoch {epoch}")]
    Diverged { epoch: usize, checkpoint: Box<GcnParams> },
}
