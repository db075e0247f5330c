use super::{gcn_forward, Embedding, GcnError, GcnParams};
use crate::graph::{Graph, NodeUtilities};
use crate::mwis::{local_greedy_with, GreedyMode, IndependentSet, RoundTrace};

/// Output of the GCN scheduling pipeline.
#[derive(Debug, Clone)]
pub struct GcnSchedule {
    /// Chosen nodes, scored with the original utilities.
    pub set: IndependentSet,
    pub embedding: Embedding,
    /// Modified weights `z ⊙ u` handed to the local greedy solver.
    pub weights: Vec<f64>,
    pub trace: RoundTrace,
    /// One neighborhood exchange per GCN layer.
    pub gcn_rounds: usize,
}

impl GcnSchedule {
    /// GCN layers plus all local greedy exchanges. In single-round mode this
    /// is `L + 1`.
    pub fn total_rounds(&self) -> usize {
        self.gcn_rounds + self.trace.total_exchanges()
    }
}

/// Network input: `u / max(u)` when `normalize` is set and `max(u) > 0`,
/// otherwise `u` unchanged.
pub fn normalized_input(u: &[f64], normalize: bool) -> Vec<f64> {
    let max = u.iter().copied().fold(0.0, f64::max);
    if normalize && max > 0.0 {
        u.iter().map(|&x| x / max).collect()
    } else {
        u.to_vec()
    }
}

pub fn gcn_schedule(p: &GcnParams, g: &Graph, u: &NodeUtilities, normalize: bool) -> Result<GcnSchedule, GcnError> {
    gcn_schedule_with(p, g, u, normalize, GreedyMode::UntilMaximal)
}

/// Embeds the utilities, forms `w = z ⊙ u` on the original utilities and runs
/// the local greedy solver on `w`.
pub fn gcn_schedule_with(
    p: &GcnParams,
    g: &Graph,
    u: &NodeUtilities,
    normalize: bool,
    mode: GreedyMode,
) -> Result<GcnSchedule, GcnError> {
    u.check_len(g)?;
    let x0 = normalized_input(u.as_slice(), normalize);
    let (embedding, _) = gcn_forward(p, g, &x0)?;
    let weights: Vec<f64> = embedding.as_slice().iter().zip(u.as_slice()).map(|(z, u)| z * u).collect();
    let (chosen, trace) = local_greedy_with(g, &weights, mode)?;
    Ok(GcnSchedule {
        set: chosen.rescored(u.as_slice()),
        embedding,
        weights,
        trace,
        gcn_rounds: p.num_layers(),
    })
}
