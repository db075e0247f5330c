use std::path::{Path, PathBuf};

use gcn_mwis::train::evaluate;
use serde::Serialize;

use super::{budget_status, load_model, print_means, write_report, BudgetArgs};
use crate::dataset;
use crate::error::CliError;
use crate::output::Run;

#[derive(Debug, clap::Args, Serialize)]
pub struct Args {
    /// Model file written by `train`.
    #[arg(long)]
    pub model: PathBuf,
    /// Test set description, e.g. `desk-test:seed=2`.
    #[arg(long, required_unless_present = "testset_dir", conflicts_with = "testset_dir")]
    pub testset: Option<String>,
    /// Directory written by `generate`.
    #[arg(long)]
    pub testset_dir: Option<PathBuf>,
    /// Seed used when the test set description does not name one.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Feed raw utilities to the network instead of `u / max(u)`.
    #[arg(long)]
    pub no_normalize: bool,
    #[command(flatten)]
    pub budget: BudgetArgs,
}

pub fn run(args: Args, out: &Path) -> Result<(), CliError> {
    let params = load_model(&args.model)?;
    let budget = args.budget.budget()?;
    let mut seeds = Vec::new();
    let data = match (&args.testset, &args.testset_dir) {
        (Some(spec), _) => {
            let (data, seed) = dataset::from_spec(spec, args.seed)?;
            seeds.push(seed);
            data
        }
        (None, Some(dir)) => dataset::load(dir)?,
        (None, None) => return Err(CliError::Usage("no test set given".into())),
    };
    let report = evaluate(&params, &data, budget, !args.no_normalize)?;
    let mut run = Run::start("eval", out)?;
    write_report(&mut run, &report)?;
    run.finish(&args, seeds)?;
    print_means(&report);
    budget_status(&report)
}
