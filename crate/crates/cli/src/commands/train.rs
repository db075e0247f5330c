use std::fs;
use std::path::{Path, PathBuf};

use gcn_mwis::gcn::{default_dims, glorot_init, save_model, DEFAULT_HIDDEN, DEFAULT_LEAKY_SLOPE};
use gcn_mwis::train::{train_with, TrainConfig, TrainError};
use serde::{Deserialize, Serialize};

use crate::dataset;
use crate::error::CliError;
use crate::output::{write_atomic, Run};

#[derive(Debug, clap::Args)]
pub struct Args {
    /// TOML configuration file.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Dataset description (overrides the config file).
    #[arg(long, conflicts_with = "dataset_dir")]
    pub dataset: Option<String>,
    /// Directory written by `generate` (overrides the config file).
    #[arg(long)]
    pub dataset_dir: Option<PathBuf>,
    /// Validate everything and write the initial model without training.
    #[arg(long)]
    pub dry_run: bool,
}

/// Contents of the training configuration file.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TrainFile {
    pub dataset: Option<String>,
    pub dataset_dir: Option<PathBuf>,
    pub layers: usize,
    pub hidden: usize,
    pub leaky_slope: f64,
    pub init_seed: u64,
    pub train: TrainConfig,
}

impl Default for TrainFile {
    fn default() -> Self {
        Self {
            dataset: None,
            dataset_dir: None,
            layers: 1,
            hidden: DEFAULT_HIDDEN,
            leaky_slope: DEFAULT_LEAKY_SLOPE,
            init_seed: 0,
            train: TrainConfig::default(),
        }
    }
}

fn read_config(path: &Path) -> Result<TrainFile, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    toml::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

pub fn run(args: Args, out: &Path) -> Result<(), CliError> {
    let mut cfg = match &args.config {
        Some(p) => read_config(p)?,
        None => TrainFile::default(),
    };
    if args.dataset.is_some() || args.dataset_dir.is_some() {
        cfg.dataset = args.dataset.clone();
        cfg.dataset_dir = args.dataset_dir.clone();
    }
    cfg.train.validate()?;
    if cfg.layers == 0 {
        return Err(CliError::Usage("layers must be at least 1".into()));
    }
    let mut seeds = vec![cfg.init_seed, cfg.train.seed];
    let data = match (&cfg.dataset, &cfg.dataset_dir) {
        (Some(spec), None) => {
            let (data, seed) = dataset::from_spec(spec, 0)?;
            seeds.push(seed);
            data
        }
        (None, Some(dir)) => dataset::load(dir)?,
        (Some(_), Some(_)) => return Err(CliError::Usage("give either `dataset` or `dataset_dir`, not both".into())),
        (None, None) => return Err(CliError::Usage("no training data: set `dataset` or `dataset_dir`".into())),
    };
    if data.is_empty() {
        return Err(CliError::Usage("training set is empty".into()));
    }
    let init = glorot_init(&default_dims(cfg.layers, cfg.hidden), cfg.leaky_slope, cfg.init_seed)?;

    let mut run = Run::start("train", out)?;
    run.write("init_model.json", |w| Ok(save_model(&init, w)?))?;
    if args.dry_run {
        run.write("model.json", |w| Ok(save_model(&init, w)?))?;
        run.finish(&cfg, seeds)?;
        println!("configuration ok: {} graphs, {} parameters", data.len(), init.num_parameters());
        return Ok(());
    }

    let mut checkpoint_err = None;
    let mut checkpoints = Vec::new();
    let result = train_with(&cfg.train, &data, &init, |stats, params| {
        let path = run.path(format!("checkpoints/epoch_{:03}.json", stats.epoch));
        match write_atomic(&path, |w| Ok(save_model(params, w)?)) {
            Ok(()) => checkpoints.push(path),
            Err(e) => {
                checkpoint_err.get_or_insert(e);
            }
        }
        println!(
            "epoch {:>3}  loss {:.5}  gcn/greedy {:.4}  lr {:.3e}",
            stats.epoch, stats.mean_loss, stats.mean_ratio_vs_greedy, stats.lr
        );
    });
    if let Some(e) = checkpoint_err {
        return Err(e);
    }
    for p in checkpoints {
        run.record(p);
    }
    let (params, history) = match result {
        Ok(v) => v,
        Err(TrainError::Diverged { epoch, checkpoint }) => {
            run.write("diverged_checkpoint.json", |w| Ok(save_model(&checkpoint, w)?))?;
            run.finish(&cfg, seeds)?;
            return Err(CliError::Numeric(format!("training diverged in epoch {epoch}; last finite parameters saved")));
        }
        Err(e) => return Err(e.into()),
    };
    run.write("model.json", |w| Ok(save_model(&params, w)?))?;
    run.write("history.csv", |w| Ok(history.write_csv(w)?))?;
    run.finish(&cfg, seeds)?;
    Ok(())
}
