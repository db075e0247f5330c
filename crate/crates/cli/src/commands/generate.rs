use std::path::Path;

use serde::Serialize;

use crate::dataset;
use crate::error::CliError;
use crate::output::Run;

#[derive(Debug, clap::Args, Serialize)]
pub struct Args {
    /// Dataset description, e.g. `er:n=30,p=0.2,count=10,seed=1` or `desk-train`.
    pub spec: String,
    /// Seed used when the description does not name one.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

pub fn run(args: Args, out: &Path) -> Result<(), CliError> {
    let (data, seed) = dataset::from_spec(&args.spec, args.seed)?;
    let mut run = Run::start("generate", out)?;
    dataset::write(&mut run, &data)?;
    run.finish(&args, vec![seed])?;
    println!("wrote {} graphs to {}", data.len(), out.display());
    Ok(())
}
