use gcn_mwis::gcn::GcnError;
use gcn_mwis::graph::GraphError;
use gcn_mwis::mwis::SolverError;
use gcn_mwis::report::ReportError;
use gcn_mwis::train::TrainError;
use gcn_mwis::wireless::SimError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("i/o error: {0}")]
    Io(String),
    #[error("numeric error: {0}")]
    Numeric(String),
    #[error("solver budget exhausted: {0}")]
    Budget(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Io(_) => 3,
            CliError::Numeric(_) => 4,
            CliError::Budget(_) => 5,
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<GraphError> for CliError {
    fn from(e: GraphError) -> Self {
        match e {
            GraphError::Io(_) => CliError::Io(e.to_string()),
            GraphError::InvalidUtility { .. } => CliError::Numeric(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<SolverError> for CliError {
    fn from(e: SolverError) -> Self {
        match e {
            SolverError::Graph(g) => g.into(),
            SolverError::BudgetExhausted { .. } => CliError::Budget(e.to_string()),
            SolverError::NonFiniteWeight { .. } | SolverError::RatioAboveOne { .. } | SolverError::UndefinedRatio(_) => {
                CliError::Numeric(e.to_string())
            }
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<GcnError> for CliError {
    fn from(e: GcnError) -> Self {
        match e {
            GcnError::Graph(g) => g.into(),
            GcnError::Solver(s) => s.into(),
            GcnError::Io(_) => CliError::Io(e.to_string()),
            GcnError::NonFinite { .. } | GcnError::Inconsistent(_) => CliError::Numeric(e.to_string()),
            GcnError::Load(_) | GcnError::Parameter(_) => CliError::Usage(e.to_string()),
        }
    }
}

impl From<TrainError> for CliError {
    fn from(e: TrainError) -> Self {
        match e {
            TrainError::Graph(g) => g.into(),
            TrainError::Solver(s) => s.into(),
            TrainError::Gcn(g) => g.into(),
            TrainError::Config(_) => CliError::Usage(e.to_string()),
            TrainError::UndefinedReward | TrainError::Diverged { .. } => CliError::Numeric(e.to_string()),
        }
    }
}

impl From<SimError> for CliError {
    fn from(e: SimError) -> Self {
        match e {
            SimError::Graph(g) => g.into(),
            SimError::Solver(s) => s.into(),
            SimError::Gcn(g) => g.into(),
            SimError::ProtocolViolation { .. } => CliError::Numeric(e.to_string()),
            SimError::Parameter(_) => CliError::Usage(e.to_string()),
        }
    }
}

impl From<ReportError> for CliError {
    fn from(e: ReportError) -> Self {
        CliError::Io(e.to_string())
    }
}
