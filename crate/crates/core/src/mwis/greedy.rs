use super::{check_weights, IndependentSet, RoundTrace, SolverError};
use crate::graph::Graph;

/// Strict priority order shared by both greedy solvers: larger weight first,
/// ties go to the smaller node ID.
#[inline]
pub fn beats(w: &[f64], a: usize, b: usize) -> bool {
    w[a] > w[b] || (w[a] == w[b] && a < b)
}

/// Centralized greedy: repeatedly take the best undecided node and discard its
/// neighbors. `total_utility` is the sum of `w` over the chosen nodes.
pub fn greedy_mwis(g: &Graph, w: &[f64]) -> Result<IndependentSet, SolverError> {
    check_weights(g, w)?;
    let n = g.num_nodes();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| w[b].total_cmp(&w[a]).then(a.cmp(&b)));
    let mut blocked = vec![false; n];
    let mut members = Vec::new();
    for v in order {
        if blocked[v] {
            continue;
        }
        members.push(v);
        blocked[v] = true;
        for &x in g.neighbors(v) {
            blocked[x] = true;
        }
    }
    members.sort_unstable();
    let total_utility = members.iter().map(|&v| w[v]).sum();
    Ok(IndependentSet { members, total_utility, is_maximal: true })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum GreedyMode {
    /// Repeat decision rounds until every node is decided.
    #[default]
    UntilMaximal,
    /// Stop after the first decision round; the set need not be maximal.
    SingleRound,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum State {
    Undecided,
    In,
    Out,
}

/// Round-based distributed local greedy.
///
/// After one round of weight exchange, every undecided node that beats all of
/// its undecided neighbors joins the set and its neighbors drop out; decisions
/// are broadcast and the next round starts, until no node is undecided.
pub fn local_greedy(g: &Graph, w: &[f64]) -> Result<(IndependentSet, RoundTrace), SolverError> {
    local_greedy_with(g, w, GreedyMode::UntilMaximal)
}

pub fn local_greedy_with(
    g: &Graph,
    w: &[f64],
    mode: GreedyMode,
) -> Result<(IndependentSet, RoundTrace), SolverError> {
    check_weights(g, w)?;
    let n = g.num_nodes();
    let mut state = vec![State::Undecided; n];
    let mut trace = RoundTrace::default();
    if n == 0 {
        let set = IndependentSet { members: vec![], total_utility: 0.0, is_maximal: true };
        return Ok((set, trace));
    }
    trace.weight_exchange_rounds = 1;
    let mut undecided: Vec<usize> = (0..n).collect();
    let mut joiners = Vec::new();
    while !undecided.is_empty() {
        if trace.decision_rounds() > 0 {
            if mode == GreedyMode::SingleRound {
                break;
            }
            trace.state_exchange_rounds += 1;
        }
        joiners.clear();
        joiners.extend(undecided.iter().copied().filter(|&v| {
            g.neighbors(v)
                .iter()
                .all(|&x| state[x] != State::Undecided || beats(w, v, x))
        }));
        let mut decided = 0;
        for &v in &joiners {
            state[v] = State::In;
            decided += 1;
        }
        for &v in &joiners {
            for &x in g.neighbors(v) {
                if state[x] == State::Undecided {
                    state[x] = State::Out;
                    decided += 1;
                }
            }
        }
        trace.decided_per_round.push(decided);
        undecided.retain(|&v| state[v] == State::Undecided);
    }
    trace.undecided = undecided.len();
    let members: Vec<usize> = (0..n).filter(|&v| state[v] == State::In).collect();
    let total_utility = members.iter().map(|&v| w[v]).sum();
    let set = IndependentSet { members, total_utility, is_maximal: undecided.is_empty() };
    Ok((set, trace))
}
