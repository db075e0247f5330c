pub mod eval;
pub mod generate;
pub mod report;
pub mod simulate;
pub mod train;

use std::path::Path;

use gcn_mwis::gcn::{read_model_file, GcnParams};
use gcn_mwis::mwis::SolverBudget;
use gcn_mwis::report::FlagKind;
use gcn_mwis::EvalReport;
use std::time::Duration;

use crate::error::CliError;
use crate::output::Run;

pub fn load_model(path: &Path) -> Result<GcnParams, CliError> {
    read_model_file(path).map_err(|e| match e {
        gcn_mwis::gcn::GcnError::Io(io) => CliError::Io(format!("{}: {io}", path.display())),
        other => CliError::Usage(format!("{}: {other}", path.display())),
    })
}

#[derive(Debug, Clone, clap::Args, serde::Serialize)]
pub struct BudgetArgs {
    /// Branch-node limit for the exact solver.
    #[arg(long, default_value_t = 10_000_000)]
    pub max_branch_nodes: u64,
    /// Per-instance time limit for the exact solver in seconds (0 = none).
    #[arg(long, default_value_t = 60.0)]
    pub time_limit: f64,
}

impl BudgetArgs {
    pub fn budget(&self) -> Result<SolverBudget, CliError> {
        if !(self.time_limit >= 0.0 && self.time_limit.is_finite()) {
            return Err(CliError::Usage(format!("invalid time limit {}", self.time_limit)));
        }
        let b = SolverBudget {
            max_branch_nodes: self.max_branch_nodes,
            time_limit: (self.time_limit > 0.0).then(|| Duration::from_secs_f64(self.time_limit)),
        };
        b.validate()?;
        Ok(b)
    }
}

/// Writes the per-instance, summary and histogram tables.
pub fn write_report(run: &mut Run, report: &EvalReport) -> Result<(), CliError> {
    run.write("records.csv", |w| Ok(report.write_records_csv(w)?))?;
    run.write("summary.json", |w| Ok(report.write_summary_json(w)?))?;
    run.write("histogram.csv", |w| Ok(report.write_histogram_csv(w)?))?;
    Ok(())
}

pub fn print_means(report: &EvalReport) {
    for s in report.solvers() {
        if let Some(st) = report.stats(&s) {
            println!("{s}: mean {:.4} median {:.4} std {:.4} over {}", st.mean, st.median, st.std, st.count);
        }
    }
    if !report.flagged.is_empty() {
        println!("{} instance(s) flagged and excluded", report.flagged.len());
    }
}

/// Budget exhaustion is reported after all outputs are written.
pub fn budget_status(report: &EvalReport) -> Result<(), CliError> {
    let hits: Vec<usize> = report.flagged.iter().filter(|f| f.kind == FlagKind::Budget).map(|f| f.instance).collect();
    if hits.is_empty() {
        Ok(())
    } else {
        Err(CliError::Budget(format!("exact solver gave up on instance(s) {hits:?}")))
    }
}
