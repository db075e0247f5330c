use serde::{Deserialize, Serialize};

use super::TrainError;
use crate::graph::{Graph, GraphError, NodeUtilities};
use crate::mwis::IndependentSet;

/// How nodes outside the GCN solution enter the loss.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RewardMode {
    /// Unselected nodes get the solution-quality ratio `u(v̂_GCN) / u(v̂_Gr)`.
    #[default]
    BaselineFill,
    /// Unselected nodes are masked out of the loss.
    SelectedOnly,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Rewards {
    pub targets: Vec<f64>,
    /// Active nodes; `None` means every node is active.
    pub mask: Option<Vec<bool>>,
}

/// Targets `ρ(v) = (u(v̂_GCN) + u(v)) / u(v̂_Gr)` for nodes in the GCN solution.
/// Both solution utilities are recomputed from `u`.
pub fn compute_rewards(
    g: &Graph,
    u: &NodeUtilities,
    v_gcn: &IndependentSet,
    v_gr: &IndependentSet,
    mode: RewardMode,
) -> Result<Rewards, TrainError> {
    u.check_len(g)?;
    let score = |s: &IndependentSet| s.members.iter().map(|&v| u[v]).sum::<f64>();
    let gcn_total = score(v_gcn);
    let greedy_total = score(v_gr);
    if !(greedy_total > 0.0) {
        return Err(TrainError::UndefinedReward);
    }
    let n = g.num_nodes();
    let selected = v_gcn.mask(n);
    let fill = gcn_total / greedy_total;
    let targets = (0..n)
        .map(|v| if selected[v] { (gcn_total + u[v]) / greedy_total } else { fill })
        .collect();
    let mask = match mode {
        RewardMode::BaselineFill => None,
        RewardMode::SelectedOnly => Some(selected),
    };
    Ok(Rewards { targets, mask })
}

/// Root-mean-square error between `z` and `targets` over the active nodes,
/// with its gradient with respect to `z` (zero at an exact fit).
pub fn rms_loss(z: &[f64], targets: &[f64], mask: Option<&[bool]>) -> Result<(f64, Vec<f64>), TrainError> {
    if z.len() != targets.len() {
        return Err(GraphError::Dimension { expected: targets.len(), got: z.len() }.into());
    }
    if let Some(m) = mask {
        if m.len() != z.len() {
            return Err(GraphError::Dimension { expected: z.len(), got: m.len() }.into());
        }
    }
    let active = |v: usize| mask.is_none_or(|m| m[v]);
    let count = (0..z.len()).filter(|&v| active(v)).count();
    if count == 0 {
        return Err(TrainError::Config("loss needs at least one active node".into()));
    }
    let sq: f64 = (0..z.len()).filter(|&v| active(v)).map(|v| (z[v] - targets[v]).powi(2)).sum();
    let loss = (sq / count as f64).sqrt();
    let grad = if loss > 0.0 {
        let scale = 1.0 / (count as f64 * loss);
        (0..z.len()).map(|v| if active(v) { (z[v] - targets[v]) * scale } else { 0.0 }).collect()
    } else {
        vec![0.0; z.len()]
    };
    Ok((loss, grad))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(members: Vec<usize>, total: f64) -> IndependentSet {
        IndependentSet { members, total_utility: total, is_maximal: true }
    }

    #[test]
    fn reward_when_gcn_equals_greedy() {
        let g = Graph::from_edges(4, &[(0, 1), (2, 3)]).unwrap();
        let u = NodeUtilities::new(vec![2.0, 1.0, 8.0, 1.0]).unwrap();
        let s = set(vec![0, 2], 10.0);
        let r = compute_rewards(&g, &u, &s, &s, RewardMode::BaselineFill).unwrap();
        assert!((r.targets[0] - 1.2).abs() < 1e-15);
        assert!((r.targets[1] - 1.0).abs() < 1e-15);
        assert!(r.mask.is_none());
    }

    #[test]
    fn reward_with_better_gcn() {
        let g = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        let u = NodeUtilities::new(vec![3.0, 10.0, 9.0, 0.0]).unwrap();
        let gcn = set(vec![0, 2], 12.0);
        let gr = set(vec![1, 3], 10.0);
        let r = compute_rewards(&g, &u, &gcn, &gr, RewardMode::BaselineFill).unwrap();
        assert!((r.targets[0] - 1.5).abs() < 1e-15);
        assert!((r.targets[1] - 1.2).abs() < 1e-15);
        let masked = compute_rewards(&g, &u, &gcn, &gr, RewardMode::SelectedOnly).unwrap();
        assert_eq!(masked.mask, Some(vec![true, false, true, false]));
    }

    #[test]
    fn single_node_reward_is_two() {
        let g = Graph::empty(1);
        let u = NodeUtilities::new(vec![0.37]).unwrap();
        let s = set(vec![0], 0.37);
        let r = compute_rewards(&g, &u, &s, &s, RewardMode::BaselineFill).unwrap();
        assert_eq!(r.targets, vec![2.0]);
    }

    #[test]
    fn zero_greedy_utility_is_an_error() {
        let g = Graph::empty(1);
        let u = NodeUtilities::new(vec![0.0]).unwrap();
        let s = set(vec![0], 0.0);
        assert!(matches!(
            compute_rewards(&g, &u, &s, &s, RewardMode::BaselineFill),
            Err(TrainError::UndefinedReward)
        ));
    }

    #[test]
    fn loss_exact_fit_and_unit_case() {
        let (l, g) = rms_loss(&[0.3, 0.4], &[0.3, 0.4], None).unwrap();
        assert_eq!(l, 0.0);
        assert_eq!(g, vec![0.0, 0.0]);
        let (l, _) = rms_loss(&[1.0, 1.0], &[0.0, 0.0], None).unwrap();
        assert_eq!(l, 1.0);
    }

    #[test]
    fn loss_respects_mask() {
        let (l, g) = rms_loss(&[1.0, 5.0], &[0.0, 0.0], Some(&[true, false])).unwrap();
        assert_eq!(l, 1.0);
        assert_eq!(g, vec![1.0, 0.0]);
        assert!(rms_loss(&[1.0], &[0.0], Some(&[false])).is_err());
        assert!(rms_loss(&[1.0], &[0.0, 1.0], None).is_err());
    }
}
