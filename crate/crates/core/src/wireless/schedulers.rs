use super::SimError;
use crate::gcn::{gcn_schedule, GcnParams};
use crate::graph::{Graph, NodeUtilities};
use crate::mwis::{exact_mwis, local_greedy, SolverBudget};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScheduleDecision {
    pub members: Vec<usize>,
    /// Local exchange rounds spent (0 for centralized schedulers).
    pub rounds: usize,
}

/// Picks the links to activate in one slot given the conflict graph and
/// per-link utilities.
pub trait Scheduler: Sync {
    fn name(&self) -> &str;
    fn schedule(&self, g: &Graph, u: &[f64]) -> Result<ScheduleDecision, SimError>;
}

/// Per-slot exact MWIS.
#[derive(Debug, Clone, Default)]
pub struct ExactScheduler {
    pub budget: SolverBudget,
}

impl Scheduler for ExactScheduler {
    fn name(&self) -> &str {
        "exact"
    }

    fn schedule(&self, g: &Graph, u: &[f64]) -> Result<ScheduleDecision, SimError> {
        let s = exact_mwis(g, u, self.budget)?;
        Ok(ScheduleDecision { members: s.members, rounds: 0 })
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct LocalGreedyScheduler;

impl Scheduler for LocalGreedyScheduler {
    fn name(&self) -> &str {
        "greedy"
    }

    fn schedule(&self, g: &Graph, u: &[f64]) -> Result<ScheduleDecision, SimError> {
        let (s, trace) = local_greedy(g, u)?;
        Ok(ScheduleDecision { members: s.members, rounds: trace.total_exchanges() })
    }
}

/// GCN embedding followed by local greedy on `z ⊙ u`.
#[derive(Debug, Clone)]
pub struct GcnScheduler {
    pub params: GcnParams,
    pub normalize: bool,
    pub label: String,
}

impl GcnScheduler {
    pub fn new(params: GcnParams) -> Self {
        Self { params, normalize: true, label: "gcn".into() }
    }
}

impl Scheduler for GcnScheduler {
    fn name(&self) -> &str {
        &self.label
    }

    fn schedule(&self, g: &Graph, u: &[f64]) -> Result<ScheduleDecision, SimError> {
        let u = NodeUtilities::new(u.to_vec())?;
        let out = gcn_schedule(&self.params, g, &u, self.normalize)?;
        Ok(ScheduleDecision { rounds: out.total_rounds(), members: out.set.members })
    }
}
