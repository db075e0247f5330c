use std::io::Write;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{compute_rewards, rms_loss, Adam, Instance, ReplayBuffer, RewardMode, TrainError};
use crate::gcn::{gcn_backward, gcn_forward, gcn_schedule, normalized_input, GcnGradients, GcnParams};
use crate::graph::{Graph, NodeUtilities};
use crate::mwis::local_greedy;
use crate::rng::derived_rng;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TrainConfig {
    pub batch_size: usize,
    pub epochs: usize,
    pub lr0: f64,
    /// Multiplicative learning-rate factor applied once per epoch.
    pub lr_decay: f64,
    /// Epochs between Adam moment resets; 0 disables resets.
    pub reset_period: usize,
    pub reward_mode: RewardMode,
    pub buffer_capacity: usize,
    pub beta1: f64,
    pub beta2: f64,
    pub eps: f64,
    /// Feed `u / max(u)` to the network.
    pub normalize: bool,
    pub seed: u64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            batch_size: 200,
            epochs: 25,
            lr0: 1e-3,
            lr_decay: 0.9,
            reset_period: 5,
            reward_mode: RewardMode::BaselineFill,
            buffer_capacity: 5000,
            beta1: 0.9,
            beta2: 0.999,
            eps: 1e-8,
            normalize: true,
            seed: 0,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<(), TrainError> {
        let bad = |m: &str| Err(TrainError::Config(m.into()));
        if self.batch_size == 0 {
            return bad("batch_size must be positive");
        }
        if self.buffer_capacity == 0 {
            return bad("buffer_capacity must be positive");
        }
        if !(self.lr0 >= 0.0 && self.lr0.is_finite()) {
            return bad("lr0 must be a non-negative finite number");
        }
        if !(self.lr_decay > 0.0 && self.lr_decay <= 1.0) {
            return bad("lr_decay must lie in (0, 1]");
        }
        if !(0.0..1.0).contains(&self.beta1) || !(0.0..1.0).contains(&self.beta2) || !(self.eps > 0.0) {
            return bad("invalid Adam hyperparameters");
        }
        Ok(())
    }

    pub fn learning_rate(&self, epoch: usize) -> f64 {
        self.lr0 * self.lr_decay.powi(epoch as i32)
    }
}

/// A replayable training example: inputs plus the reward targets computed
/// when the sample was generated.
#[derive(Debug, Clone)]
pub struct TrainSample {
    pub graph: Arc<Graph>,
    pub utilities: NodeUtilities,
    pub targets: Vec<f64>,
    pub mask: Option<Vec<bool>>,
    pub gcn_utility: f64,
    pub greedy_utility: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EpochStats {
    pub epoch: usize,
    /// Mean batch loss over the optimizer steps of the epoch.
    pub mean_loss: f64,
    /// Mean of `u(v̂_GCN) / u(v̂_Gr)` over the graphs visited in the epoch.
    pub mean_ratio_vs_greedy: f64,
    pub lr: f64,
    pub steps: usize,
    /// Graphs skipped because the greedy solution had zero utility.
    pub skipped: usize,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct TrainHistory {
    pub reward_mode: RewardMode,
    pub epochs: Vec<EpochStats>,
}

impl TrainHistory {
    /// CSV with columns `epoch, mean_loss, mean_ratio_vs_greedy, lr`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        let mode = match self.reward_mode {
            RewardMode::BaselineFill => "baseline_fill",
            RewardMode::SelectedOnly => "selected_only",
        };
        writeln!(out, "# reward_mode={mode}")?;
        writeln!(out, "epoch,mean_loss,mean_ratio_vs_greedy,lr")?;
        for e in &self.epochs {
            writeln!(out, "{},{:?},{:?},{:?}", e.epoch, e.mean_loss, e.mean_ratio_vs_greedy, e.lr)?;
        }
        Ok(())
    }
}

pub fn train(
    config: &TrainConfig,
    dataset: &[Instance],
    init: &GcnParams,
) -> Result<(GcnParams, TrainHistory), TrainError> {
    train_with(config, dataset, init, |_, _| {})
}

fn sample_gradient(
    params: &GcnParams,
    sample: &TrainSample,
    normalize: bool,
) -> Result<(f64, GcnGradients), TrainError> {
    let x0 = normalized_input(sample.utilities.as_slice(), normalize);
    let (z, cache) = gcn_forward(params, &sample.graph, &x0)?;
    let (loss, grad_z) = rms_loss(z.as_slice(), &sample.targets, sample.mask.as_deref())?;
    let grads = gcn_backward(params, &cache, &grad_z)?;
    Ok((loss, grads))
}

/// Trains `init` on `dataset`, calling `on_epoch` after every epoch.
///
/// Each epoch visits the graphs in a seeded random order. For every graph the
/// current model and plain local greedy are run, the reward targets are stored
/// in the replay buffer, and one Adam step is taken on the mean gradient of a
/// uniformly drawn batch. The exact oracle is never consulted.
pub fn train_with<F>(
    config: &TrainConfig,
    dataset: &[Instance],
    init: &GcnParams,
    mut on_epoch: F,
) -> Result<(GcnParams, TrainHistory), TrainError>
where
    F: FnMut(&EpochStats, &GcnParams),
{
    config.validate()?;
    if dataset.is_empty() {
        return Err(TrainError::Config("training set is empty".into()));
    }
    let mut params = init.clone();
    let mut adam = Adam::new(params.num_parameters(), config.beta1, config.beta2, config.eps);
    let mut buffer = ReplayBuffer::new(config.buffer_capacity);
    let mut history = TrainHistory { reward_mode: config.reward_mode, epochs: Vec::new() };

    for epoch in 0..config.epochs {
        let lr = config.learning_rate(epoch);
        if config.reset_period > 0 && epoch > 0 && epoch % config.reset_period == 0 {
            adam.reset();
        }
        let mut rng = derived_rng(config.seed, &[epoch as u64]);
        let mut order: Vec<usize> = (0..dataset.len()).collect();
        order.shuffle(&mut rng);

        let mut loss_sum = 0.0;
        let mut ratio_sum = 0.0;
        let mut steps = 0;
        let mut visited = 0;
        let mut skipped = 0;
        for idx in order {
            let inst = &dataset[idx];
            let sched = gcn_schedule(&params, &inst.graph, &inst.utilities, config.normalize)?;
            let (greedy, _) = local_greedy(&inst.graph, inst.utilities.as_slice())?;
            if !(greedy.total_utility > 0.0) {
                skipped += 1;
                continue;
            }
            let rewards =
                compute_rewards(&inst.graph, &inst.utilities, &sched.set, &greedy, config.reward_mode)?;
            ratio_sum += sched.set.total_utility / greedy.total_utility;
            visited += 1;
            buffer.push(TrainSample {
                graph: Arc::clone(&inst.graph),
                utilities: inst.utilities.clone(),
                targets: rewards.targets,
                mask: rewards.mask,
                gcn_utility: sched.set.total_utility,
                greedy_utility: greedy.total_utility,
            });

            let batch = buffer.sample(config.batch_size, &mut rng);
            let results = batch
                .par_iter()
                .map(|s| sample_gradient(&params, s, config.normalize))
                .collect::<Result<Vec<_>, _>>()?;
            let scale = 1.0 / results.len() as f64;
            let mut grads = params.zero_gradients();
            let mut batch_loss = 0.0;
            for (loss, g) in &results {
                batch_loss += loss * scale;
                grads.add_scaled(g, scale);
            }
            if !batch_loss.is_finite() || grads.values().any(|v| !v.is_finite()) {
                return Err(TrainError::Diverged { epoch, checkpoint: Box::new(params) });
            }
            loss_sum += batch_loss;
            steps += 1;
            if lr > 0.0 {
                adam.step(&mut params, &grads, lr);
            }
        }
        let stats = EpochStats {
            epoch,
            mean_loss: if steps > 0 { loss_sum / steps as f64 } else { 0.0 },
            mean_ratio_vs_greedy: if visited > 0 { ratio_sum / visited as f64 } else { 0.0 },
            lr,
            steps,
            skipped,
        };
        on_epoch(&stats, &params);
        history.epochs.push(stats);
    }
    Ok((params, history))
}
