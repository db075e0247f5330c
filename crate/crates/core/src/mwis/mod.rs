//! Exact and greedy solvers for maximum weighted independent set, plus
//! solution validation and communication-round accounting.

mod exact;
mod greedy;

pub use exact::exact_mwis;
pub use greedy::{beats, greedy_mwis, local_greedy, local_greedy_with, GreedyMode};

use std::fmt::Write as _;
use std::time::Duration;

use thiserror::Error;

use crate::graph::{Graph, GraphError};

#[derive(Debug, Error)]
pub enum SolverError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("non-finite weight {value} at node {node}")]
    NonFiniteWeight { node: usize, value: f64 },
    #[error("negative utility {value} at node {node}")]
    NegativeUtility { node: usize, value: f64 },
    #[error("not independent: nodes {0} and {1} are adjacent")]
    NotIndependent(usize, usize),
    #[error("node {0} appears twice in the set")]
    DuplicateMember(usize),
    #[error("budget exhausted after {branch_nodes} branch nodes: incumbent {:.6} is not certified (upper bound {upper_bound:.6})", incumbent.total_utility)]
    BudgetExhausted { incumbent: IndependentSet, upper_bound: f64, branch_nodes: u64 },
    #[error("invalid budget: {0}")]
    InvalidBudget(String),
    #[error("approximation ratio undefined: optimal utility is {0}")]
    UndefinedRatio(f64),
    #[error("candidate utility {candidate} exceeds optimal {optimal}; the reference is not optimal")]
    RatioAboveOne { candidate: f64, optimal: f64 },
    #[error("malformed solution record: {0}")]
    Record(String),
}

impl SolverError {
    /// Best-found set and remaining gap when the exact solver ran out of budget.
    pub fn incumbent(&self) -> Option<(&IndependentSet, f64)> {
        match self {
            SolverError::BudgetExhausted { incumbent, upper_bound, .. } => {
                Some((incumbent, upper_bound - incumbent.total_utility))
            }
            _ => None,
        }
    }
}

/// A validated independent set.
#[derive(Debug, Clone, PartialEq)]
pub struct IndependentSet {
    /// Sorted node IDs.
    pub members: Vec<usize>,
    pub total_utility: f64,
    pub is_maximal: bool,
}

impl IndependentSet {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.members.binary_search(&v).is_ok()
    }

    /// Indicator vector over `num_nodes` nodes.
    pub fn mask(&self, num_nodes: usize) -> Vec<bool> {
        let mut m = vec![false; num_nodes];
        for &v in &self.members {
            m[v] = true;
        }
        m
    }

    /// Re-scores the same members under different per-node values.
    pub fn rescored(&self, values: &[f64]) -> IndependentSet {
        IndependentSet {
            members: self.members.clone(),
            total_utility: self.members.iter().map(|&v| values[v]).sum(),
            is_maximal: self.is_maximal,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverBudget {
    pub max_branch_nodes: u64,
    pub time_limit: Option<Duration>,
}

impl SolverBudget {
    pub fn nodes(max_branch_nodes: u64) -> Self {
        Self { max_branch_nodes, time_limit: None }
    }

    pub fn validate(&self) -> Result<(), SolverError> {
        if self.max_branch_nodes == 0 {
            return Err(SolverError::InvalidBudget("max_branch_nodes must be positive".into()));
        }
        Ok(())
    }
}

impl Default for SolverBudget {
    /// 10^7 branch nodes or 60 s, whichever comes first.
    fn default() -> Self {
        Self { max_branch_nodes: 10_000_000, time_limit: Some(Duration::from_secs(60)) }
    }
}

/// Communication rounds used by the round-based local greedy solver.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RoundTrace {
    /// Rounds in which nodes exchange their weights (1 for any non-empty graph).
    pub weight_exchange_rounds: usize,
    /// Rounds in which nodes broadcast their in/out decision so that the next
    /// decision round can run.
    pub state_exchange_rounds: usize,
    /// Nodes that became decided (in or out) during each decision round.
    pub decided_per_round: Vec<usize>,
    /// Nodes left undecided (non-zero only in single-round mode).
    pub undecided: usize,
}

impl RoundTrace {
    pub fn decision_rounds(&self) -> usize {
        self.decided_per_round.len()
    }

    /// All local exchanges: weights plus decision-state broadcasts.
    pub fn total_exchanges(&self) -> usize {
        self.weight_exchange_rounds + self.state_exchange_rounds
    }
}

pub(crate) fn check_weights(g: &Graph, w: &[f64]) -> Result<(), SolverError> {
    if w.len() != g.num_nodes() {
        return Err(GraphError::Dimension { expected: g.num_nodes(), got: w.len() }.into());
    }
    if let Some((node, &value)) = w.iter().enumerate().find(|(_, v)| !v.is_finite()) {
        return Err(SolverError::NonFiniteWeight { node, value });
    }
    Ok(())
}

pub(crate) fn check_utilities(g: &Graph, u: &[f64]) -> Result<(), SolverError> {
    check_weights(g, u)?;
    if let Some((node, &value)) = u.iter().enumerate().find(|(_, v)| **v < 0.0) {
        return Err(SolverError::NegativeUtility { node, value });
    }
    Ok(())
}

/// Checks that `set` is independent in `g` and scores it under `u`.
pub fn validate_set(g: &Graph, set: &[usize], u: &[f64]) -> Result<IndependentSet, SolverError> {
    check_weights(g, u)?;
    let n = g.num_nodes();
    let mut members = set.to_vec();
    members.sort_unstable();
    for pair in members.windows(2) {
        if pair[0] == pair[1] {
            return Err(SolverError::DuplicateMember(pair[0]));
        }
    }
    let mut inside = vec![false; n];
    for &v in &members {
        if v >= n {
            return Err(GraphError::NodeOutOfRange { node: v, num_nodes: n }.into());
        }
        inside[v] = true;
    }
    for &v in &members {
        if let Some(&x) = g.neighbors(v).iter().find(|&&x| inside[x]) {
            return Err(SolverError::NotIndependent(v.min(x), v.max(x)));
        }
    }
    let is_maximal = (0..n).all(|v| inside[v] || g.neighbors(v).iter().any(|&x| inside[x]));
    let total_utility = members.iter().map(|&v| u[v]).sum();
    Ok(IndependentSet { members, total_utility, is_maximal })
}

/// `candidate / optimal` total utility.
pub fn approximation_ratio(candidate: &IndependentSet, optimal: &IndependentSet) -> Result<f64, SolverError> {
    let opt = optimal.total_utility;
    if !(opt > 0.0) {
        return Err(SolverError::UndefinedRatio(opt));
    }
    let ratio = candidate.total_utility / opt;
    if ratio > 1.0 + 1e-9 {
        return Err(SolverError::RatioAboveOne { candidate: candidate.total_utility, optimal: opt });
    }
    Ok(ratio.min(1.0))
}

/// Text record `value <float>` / `set <ids...>` / `rounds <k>`.
pub fn format_solution_record(set: &IndependentSet, rounds: usize) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "value {:?}", set.total_utility);
    s.push_str("set");
    for v in &set.members {
        let _ = write!(s, " {v}");
    }
    s.push('\n');
    let _ = writeln!(s, "rounds {rounds}");
    s
}

/// Parses a record written by [`format_solution_record`] into
/// `(value, members, rounds)`.
pub fn parse_solution_record(text: &str) -> Result<(f64, Vec<usize>, usize), SolverError> {
    let mut value = None;
    let mut set = None;
    let mut rounds = None;
    for line in text.lines().map(str::trim).filter(|l| !l.is_empty()) {
        let (tag, rest) = line.split_once(' ').unwrap_or((line, ""));
        let bad = |what: &str| SolverError::Record(format!("bad {what} in `{line}`"));
        match tag {
            "value" => value = Some(rest.trim().parse::<f64>().map_err(|_| bad("value"))?),
            "set" => {
                set = Some(
                    rest.split_whitespace()
                        .map(|t| t.parse::<usize>().map_err(|_| bad("node id")))
                        .collect::<Result<Vec<_>, _>>()?,
                )
            }
            "rounds" => rounds = Some(rest.trim().parse::<usize>().map_err(|_| bad("round count"))?),
            other => return Err(SolverError::Record(format!("unknown field `{other}`"))),
        }
    }
    match (value, set, rounds) {
        (Some(v), Some(s), Some(r)) => Ok((v, s, r)),
        _ => Err(SolverError::Record("record needs value, set and rounds".into())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_set_validation() {
        let g = Graph::from_edges(3, &[(0, 1)]).unwrap();
        let s = validate_set(&g, &[], &[1.0, 1.0, 1.0]).unwrap();
        assert_eq!(s.total_utility, 0.0);
        assert!(!s.is_maximal);
        let empty = validate_set(&Graph::empty(0), &[], &[]).unwrap();
        assert!(empty.is_maximal);
    }

    #[test]
    fn adjacent_pair_rejected() {
        let g = Graph::from_edges(2, &[(0, 1)]).unwrap();
        match validate_set(&g, &[1, 0], &[1.0, 1.0]) {
            Err(SolverError::NotIndependent(0, 1)) => {}
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn validation_scores_and_flags_maximality() {
        let g = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        let s = validate_set(&g, &[2, 0], &[1.0, 3.0, 4.0, 2.0]).unwrap();
        assert_eq!(s.members, vec![0, 2]);
        assert_eq!(s.total_utility, 5.0);
        assert!(s.is_maximal);
        let s = validate_set(&g, &[0], &[1.0, 3.0, 4.0, 2.0]).unwrap();
        assert!(!s.is_maximal);
        assert!(validate_set(&g, &[0, 0], &[1.0; 4]).is_err());
        assert!(validate_set(&g, &[9], &[1.0; 4]).is_err());
    }

    #[test]
    fn ratio_contract() {
        let opt = IndependentSet { members: vec![1, 2, 3], total_utility: 3.0, is_maximal: true };
        let cand = IndependentSet { members: vec![0], total_utility: 2.0, is_maximal: true };
        assert_eq!(approximation_ratio(&opt, &opt).unwrap(), 1.0);
        assert!((approximation_ratio(&cand, &opt).unwrap() - 2.0 / 3.0).abs() < 1e-15);
        assert!(matches!(approximation_ratio(&opt, &cand), Err(SolverError::RatioAboveOne { .. })));
        let zero = IndependentSet { members: vec![], total_utility: 0.0, is_maximal: false };
        assert!(matches!(approximation_ratio(&cand, &zero), Err(SolverError::UndefinedRatio(_))));
    }

    #[test]
    fn solution_record_roundtrip() {
        let s = IndependentSet { members: vec![0, 4, 7], total_utility: 2.5 + 1e-13, is_maximal: true };
        let text = format_solution_record(&s, 3);
        assert!(text.starts_with("value "));
        let (v, m, r) = parse_solution_record(&text).unwrap();
        assert_eq!(v.to_bits(), s.total_utility.to_bits());
        assert_eq!(m, s.members);
        assert_eq!(r, 3);
        assert!(parse_solution_record("value 1\nset 1 2\n").is_err());
        assert!(parse_solution_record("value x\nset\nrounds 1").is_err());
    }
}
