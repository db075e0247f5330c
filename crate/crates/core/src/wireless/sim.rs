use std::io::Write;

use rand::Rng;
use rand_distr::{Distribution, Poisson};
use rayon::prelude::*;

use super::{Scheduler, SimError, WirelessNetwork};
use crate::mwis::{validate_set, IndependentSet, SolverError};
use crate::report::{EvalReport, FlagKind, FlaggedInstance, InstanceRecord};
use crate::rng::{derive_seed, derived_rng, SimRng};

/// Link rates are discrete uniform on `0..=MAX_RATE` packets per slot.
pub const MAX_RATE: u32 = 100;

/// Per-link backlog in packets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QueueState(pub Vec<u64>);

impl QueueState {
    pub fn empty(links: usize) -> Self {
        Self(vec![0; links])
    }

    pub fn total(&self) -> u64 {
        self.0.iter().sum()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SlotResult {
    pub scheduled: IndependentSet,
    pub rates: Vec<u32>,
    /// Backlog before transmission.
    pub backlog: Vec<u64>,
    /// `min(backlog, rate)` per link.
    pub utilities: Vec<u64>,
    pub delivered: Vec<u64>,
    pub arrivals: Vec<u64>,
    pub rounds: usize,
}

impl SlotResult {
    pub fn total_delivered(&self) -> u64 {
        self.delivered.iter().sum()
    }
}

/// One slot: draw rates, score links by `min(q, r)`, schedule, transmit, then
/// add Poisson arrivals at each link's source.
///
/// Rates for every link are drawn before arrivals for every link, so the
/// random draws never depend on the schedule.
pub fn sim_step(
    net: &WirelessNetwork,
    queues: &QueueState,
    scheduler: &dyn Scheduler,
    arrival_rate: f64,
    rng: &mut SimRng,
) -> Result<(SlotResult, QueueState), SimError> {
    let links = net.num_links();
    if queues.0.len() != links {
        return Err(SimError::Parameter(format!("{} queues for {links} links", queues.0.len())));
    }
    if !(arrival_rate >= 0.0 && arrival_rate.is_finite()) {
        return Err(SimError::Parameter(format!("arrival rate {arrival_rate}")));
    }
    let rates: Vec<u32> = (0..links).map(|_| rng.random_range(0..=MAX_RATE)).collect();
    let arrivals: Vec<u64> = if arrival_rate > 0.0 {
        let poisson = Poisson::new(arrival_rate).map_err(|e| SimError::Parameter(e.to_string()))?;
        (0..links).map(|_| poisson.sample(rng) as u64).collect()
    } else {
        vec![0; links]
    };

    let utilities: Vec<u64> = queues.0.iter().zip(&rates).map(|(&q, &r)| q.min(r as u64)).collect();
    let weights: Vec<f64> = utilities.iter().map(|&x| x as f64).collect();
    let decision = scheduler.schedule(&net.conflict_graph, &weights)?;
    let scheduled = validate_set(&net.conflict_graph, &decision.members, &weights).map_err(|e| match e {
        SolverError::NotIndependent(..) | SolverError::DuplicateMember(_) | SolverError::Graph(_) => {
            SimError::ProtocolViolation { scheduler: scheduler.name().to_string(), source: e }
        }
        other => other.into(),
    })?;

    let mut delivered = vec![0; links];
    for &v in &scheduled.members {
        delivered[v] = utilities[v];
    }
    let next = QueueState(
        queues.0.iter().zip(&delivered).zip(&arrivals).map(|((&q, &d), &a)| q - d + a).collect(),
    );
    let slot = SlotResult {
        scheduled,
        rates,
        backlog: queues.0.clone(),
        utilities,
        delivered,
        arrivals,
        rounds: decision.rounds,
    };
    Ok((slot, next))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimConfig {
    pub slots: usize,
    pub arrival_rate: f64,
    /// Initial slots left out of the throughput count.
    pub warmup: usize,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self { slots: 200, arrival_rate: 60.0, warmup: 0 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScheduleTrace {
    pub slots: Vec<SlotResult>,
    /// Packets delivered in the slots after the warm-up.
    pub cumulative_delivered: u64,
    pub final_queues: QueueState,
}

impl ScheduleTrace {
    /// CSV rows `slot, link, rate, queue, delivered` (queue is the backlog
    /// before transmission).
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "slot,link,rate,queue,delivered")?;
        for (t, s) in self.slots.iter().enumerate() {
            for l in 0..s.rates.len() {
                writeln!(out, "{t},{l},{},{},{}", s.rates[l], s.backlog[l], s.delivered[l])?;
            }
        }
        Ok(())
    }

    pub fn max_rounds(&self) -> usize {
        self.slots.iter().map(|s| s.rounds).max().unwrap_or(0)
    }
}

/// Runs `config.slots` slots from empty queues. Slot `t` draws from the stream
/// derived from `(seed, t)`, so every scheduler sees the same rates and arrivals.
pub fn run_instance(
    net: &WirelessNetwork,
    scheduler: &dyn Scheduler,
    config: SimConfig,
    seed: u64,
) -> Result<ScheduleTrace, SimError> {
    if config.slots == 0 {
        return Err(SimError::Parameter("need at least one slot".into()));
    }
    let mut queues = QueueState::empty(net.num_links());
    let mut slots = Vec::with_capacity(config.slots);
    let mut cumulative = 0;
    for t in 0..config.slots {
        let mut rng = derived_rng(seed, &[t as u64]);
        let (slot, next) = sim_step(net, &queues, scheduler, config.arrival_rate, &mut rng)?;
        if t >= config.warmup {
            cumulative += slot.total_delivered();
        }
        slots.push(slot);
        queues = next;
    }
    Ok(ScheduleTrace { slots, cumulative_delivered: cumulative, final_queues: queues })
}

/// Throughput of each candidate relative to the reference scheduler (normally
/// per-slot exact MWIS), per network and instance. Both run on identical random
/// streams. Queue trajectories diverge between schedulers, so a ratio may
/// exceed one.
pub fn compare_schedulers(
    nets: &[WirelessNetwork],
    reference: &dyn Scheduler,
    candidates: &[&dyn Scheduler],
    config: SimConfig,
    instances: usize,
    seed: u64,
) -> Result<EvalReport, SimError> {
    let jobs: Vec<(usize, usize)> = (0..nets.len()).flat_map(|k| (0..instances).map(move |i| (k, i))).collect();
    let outcomes = jobs
        .par_iter()
        .map(|&(k, i)| -> Result<Result<Vec<InstanceRecord>, FlaggedInstance>, SimError> {
            let net = &nets[k];
            let id = k * instances + i;
            let inst_seed = derive_seed(seed, &[k as u64, i as u64]);
            let flag = |kind, reason: String| Ok(Err(FlaggedInstance { instance: id, kind, reason }));
            let base = match run_instance(net, reference, config, inst_seed) {
                Ok(t) => t,
                Err(SimError::Solver(e)) if e.incumbent().is_some() => return flag(FlagKind::Budget, e.to_string()),
                Err(e) => return Err(e),
            };
            if base.cumulative_delivered == 0 {
                return flag(FlagKind::ZeroReference, "reference throughput is zero".into());
            }
            let mut records = Vec::with_capacity(candidates.len());
            for cand in candidates {
                let trace = run_instance(net, *cand, config, inst_seed)?;
                records.push(InstanceRecord {
                    instance: id,
                    n: net.num_links(),
                    avg_degree: net.conflict_graph.average_degree(),
                    solver: cand.name().to_string(),
                    ratio: trace.cumulative_delivered as f64 / base.cumulative_delivered as f64,
                    rounds: trace.max_rounds(),
                });
            }
            Ok(Ok(records))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let mut report = EvalReport::default();
    for o in outcomes {
        match o {
            Ok(r) => report.records.extend(r),
            Err(f) => report.flagged.push(f),
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;
    use crate::rng::rng_from_seed;
    use crate::wireless::{gen_network, ExactScheduler, LocalGreedyScheduler, ScheduleDecision};

    struct Fixed(Vec<usize>);

    impl Scheduler for Fixed {
        fn name(&self) -> &str {
            "fixed"
        }
        fn schedule(&self, _: &Graph, _: &[f64]) -> Result<ScheduleDecision, SimError> {
            Ok(ScheduleDecision { members: self.0.clone(), rounds: 0 })
        }
    }

    fn two_conflicting_links() -> WirelessNetwork {
        WirelessNetwork::from_positions(vec![(0.0, 0.0), (0.5, 0.0), (1.5, 0.0), (2.0, 0.0)], 1.0, 4.0, 0).unwrap()
    }

    #[test]
    fn delivery_rule() {
        let net = two_conflicting_links();
        assert_eq!(net.num_links(), 2);
        let q = QueueState(vec![5, 0]);
        let (slot, next) = sim_step(&net, &q, &Fixed(vec![0]), 0.0, &mut rng_from_seed(1)).unwrap();
        assert_eq!(slot.utilities[0], 5u64.min(slot.rates[0] as u64));
        assert_eq!(slot.delivered[0], slot.utilities[0]);
        assert_eq!(slot.delivered[1], 0);
        assert_eq!(next.0[0], 5 - slot.delivered[0]);
        assert_eq!(next.0[1], 0);
    }

    #[test]
    fn non_independent_schedule_is_a_hard_error() {
        let net = two_conflicting_links();
        let q = QueueState(vec![5, 5]);
        match sim_step(&net, &q, &Fixed(vec![0, 1]), 1.0, &mut rng_from_seed(1)) {
            Err(SimError::ProtocolViolation { scheduler, .. }) => assert_eq!(scheduler, "fixed"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn zero_arrivals_drain_to_empty() {
        let net = gen_network(40, 60.0, 1.5, 4.0, 2).unwrap();
        let mut q = QueueState((0..net.num_links() as u64).map(|i| 50 + i * 13).collect());
        let mut rng = rng_from_seed(3);
        for _ in 0..400 {
            let (_, next) = sim_step(&net, &q, &LocalGreedyScheduler, 0.0, &mut rng).unwrap();
            assert!(next.total() <= q.total());
            q = next;
        }
        assert_eq!(q.total(), 0);
    }

    #[test]
    fn single_slot_equals_single_step() {
        let net = gen_network(50, 100.0, 1.5, 4.0, 5).unwrap();
        let cfg = SimConfig { slots: 1, arrival_rate: 60.0, warmup: 0 };
        let trace = run_instance(&net, &LocalGreedyScheduler, cfg, 17).unwrap();
        let mut rng = derived_rng(17, &[0]);
        let (slot, next) =
            sim_step(&net, &QueueState::empty(net.num_links()), &LocalGreedyScheduler, 60.0, &mut rng).unwrap();
        assert_eq!(trace.slots, vec![slot]);
        assert_eq!(trace.final_queues, next);
        assert_eq!(trace.cumulative_delivered, 0);
    }

    #[test]
    fn warmup_excluded() {
        let net = gen_network(50, 100.0, 1.5, 4.0, 5).unwrap();
        let full = run_instance(&net, &LocalGreedyScheduler, SimConfig { slots: 20, ..Default::default() }, 1).unwrap();
        let warm = run_instance(&net, &LocalGreedyScheduler, SimConfig { slots: 20, warmup: 5, ..Default::default() }, 1).unwrap();
        let skipped: u64 = full.slots[..5].iter().map(SlotResult::total_delivered).sum();
        assert_eq!(warm.cumulative_delivered + skipped, full.cumulative_delivered);
    }

    #[test]
    fn reference_against_itself() {
        let nets: Vec<_> = (0..2).map(|s| gen_network(60, 120.0, 1.5, 4.0, s).unwrap()).collect();
        let exact = ExactScheduler::default();
        let cfg = SimConfig { slots: 15, ..Default::default() };
        let report = compare_schedulers(&nets, &exact, &[&exact], cfg, 2, 4).unwrap();
        assert_eq!(report.records.len(), 4);
        assert!(report.records.iter().all(|r| r.ratio == 1.0));
    }

    #[test]
    fn trace_csv_shape() {
        let net = two_conflicting_links();
        let trace = run_instance(&net, &LocalGreedyScheduler, SimConfig { slots: 3, ..Default::default() }, 2).unwrap();
        let mut buf = Vec::new();
        trace.write_csv(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap().lines().count(), 1 + 3 * 2);
    }
}
