use rayon::prelude::*;

use super::{Instance, TrainError};
use crate::gcn::{gcn_schedule, GcnParams};
use crate::mwis::{approximation_ratio, exact_mwis, local_greedy, SolverBudget};
use crate::report::{EvalReport, FlagKind, FlaggedInstance, InstanceRecord};

pub const SOLVER_GREEDY: &str = "greedy";
pub const SOLVER_GCN: &str = "gcn";

enum Outcome {
    Records(Vec<InstanceRecord>),
    Flagged(FlaggedInstance),
}

/// Approximation ratios of local greedy and the GCN pipeline against the
/// exact optimum on every test instance. Instances whose oracle runs out of
/// budget (or whose optimum is zero) are flagged and excluded.
pub fn evaluate(
    p: &GcnParams,
    testset: &[Instance],
    budget: SolverBudget,
    normalize: bool,
) -> Result<EvalReport, TrainError> {
    let outcomes = testset
        .par_iter()
        .map(|inst| -> Result<Outcome, TrainError> {
            let u = inst.utilities.as_slice();
            let optimal = match exact_mwis(&inst.graph, u, budget) {
                Ok(s) => s,
                Err(e) if e.incumbent().is_some() => {
                    return Ok(Outcome::Flagged(FlaggedInstance { instance: inst.id, kind: FlagKind::Budget, reason: e.to_string() }))
                }
                Err(e) => return Err(e.into()),
            };
            if !(optimal.total_utility > 0.0) {
                return Ok(Outcome::Flagged(FlaggedInstance {
                    instance: inst.id,
                    kind: FlagKind::ZeroReference,
                    reason: "optimal utility is zero".into(),
                }));
            }
            let (greedy, trace) = local_greedy(&inst.graph, u)?;
            let gcn = gcn_schedule(p, &inst.graph, &inst.utilities, normalize)?;
            let record = |solver: &str, ratio: f64, rounds: usize| InstanceRecord {
                instance: inst.id,
                n: inst.n,
                avg_degree: inst.expected_degree,
                solver: solver.to_string(),
                ratio,
                rounds,
            };
            Ok(Outcome::Records(vec![
                record(SOLVER_GREEDY, approximation_ratio(&greedy, &optimal)?, trace.total_exchanges()),
                record(SOLVER_GCN, approximation_ratio(&gcn.set, &optimal)?, gcn.total_rounds()),
            ]))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let mut report = EvalReport::default();
    for o in outcomes {
        match o {
            Outcome::Records(r) => report.records.extend(r),
            Outcome::Flagged(f) => report.flagged.push(f),
        }
    }
    Ok(report)
}
