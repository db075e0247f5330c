use std::fs::File;
use std::path::{Path, PathBuf};

use gcn_mwis::EvalReport;
use serde::Serialize;

use super::print_means;
use crate::error::CliError;
use crate::output::Run;

#[derive(Debug, clap::Args, Serialize)]
pub struct Args {
    /// Per-instance record files (`records.csv` from `eval` or `simulate`).
    #[arg(required = true)]
    pub records: Vec<PathBuf>,
}

pub fn run(args: Args, out: &Path) -> Result<(), CliError> {
    let mut merged = EvalReport::default();
    for path in &args.records {
        let f = File::open(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        let part = EvalReport::read_records_csv(f).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
        merged.merge(part);
    }
    let mut run = Run::start("report", out)?;
    run.write("summary.json", |w| Ok(merged.write_summary_json(w)?))?;
    run.write("histogram.csv", |w| Ok(merged.write_histogram_csv(w)?))?;
    run.finish(&args, Vec::new())?;
    print_means(&merged);
    Ok(())
}
