use std::fs::File;
use std::io::BufReader;
use std::path::{Path, PathBuf};

use gcn_mwis::rng::derive_seed;
use gcn_mwis::wireless::{
    compare_schedulers, gen_network, load_network, run_instance, save_network, ExactScheduler, GcnScheduler,
    LocalGreedyScheduler, Scheduler, SimConfig, WirelessNetwork,
};
use serde::Serialize;

use super::{budget_status, load_model, print_means, write_report, BudgetArgs};
use crate::error::CliError;
use crate::output::Run;

#[derive(Debug, clap::Args, Serialize)]
pub struct Args {
    /// Model file for the GCN scheduler; without it only greedy is compared.
    #[arg(long)]
    pub model: Option<PathBuf>,
    /// Network files to simulate instead of generated networks.
    #[arg(long = "network-file")]
    pub network_files: Vec<PathBuf>,
    /// Number of random networks to generate.
    #[arg(long, default_value_t = 25)]
    pub networks: usize,
    #[arg(long, default_value_t = 100)]
    pub nodes: usize,
    #[arg(long, default_value_t = 250.0)]
    pub area: f64,
    #[arg(long, default_value_t = 1.0)]
    pub link_radius: f64,
    #[arg(long, default_value_t = 4.0)]
    pub interference_radius: f64,
    /// Time slots per instance.
    #[arg(long, default_value_t = 200)]
    pub slots: usize,
    /// Independent arrival/rate realizations per network.
    #[arg(long, default_value_t = 10)]
    pub instances: usize,
    /// Mean Poisson arrivals per link and slot.
    #[arg(long, default_value_t = 60.0)]
    pub lambda: f64,
    /// Initial slots excluded from throughput.
    #[arg(long, default_value_t = 0)]
    pub warmup: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Feed raw utilities to the network instead of `u / max(u)`.
    #[arg(long)]
    pub no_normalize: bool,
    /// Also write per-slot traces of the first network and instance.
    #[arg(long)]
    pub trace: bool,
    #[command(flatten)]
    pub budget: BudgetArgs,
}

fn networks(args: &Args) -> Result<Vec<WirelessNetwork>, CliError> {
    if !args.network_files.is_empty() {
        return args
            .network_files
            .iter()
            .map(|p| {
                let f = File::open(p).map_err(|e| CliError::Io(format!("{}: {e}", p.display())))?;
                load_network(BufReader::new(f)).map_err(|e| CliError::Usage(format!("{}: {e}", p.display())))
            })
            .collect();
    }
    (0..args.networks)
        .map(|k| {
            let seed = derive_seed(args.seed, &[u64::MAX, k as u64]);
            Ok(gen_network(args.nodes, args.area, args.link_radius, args.interference_radius, seed)?)
        })
        .collect()
}

pub fn run(args: Args, out: &Path) -> Result<(), CliError> {
    if args.instances == 0 {
        return Err(CliError::Usage("--instances must be positive".into()));
    }
    let nets = networks(&args)?;
    if nets.is_empty() {
        return Err(CliError::Usage("no networks to simulate".into()));
    }
    let config = SimConfig { slots: args.slots, arrival_rate: args.lambda, warmup: args.warmup };
    let exact = ExactScheduler { budget: args.budget.budget()? };
    let greedy = LocalGreedyScheduler;
    let gcn = match &args.model {
        Some(p) => Some(GcnScheduler { normalize: !args.no_normalize, ..GcnScheduler::new(load_model(p)?) }),
        None => None,
    };
    let mut candidates: Vec<&dyn Scheduler> = vec![&greedy];
    if let Some(g) = &gcn {
        candidates.push(g);
    }
    let report = compare_schedulers(&nets, &exact, &candidates, config, args.instances, args.seed)?;

    let mut run = Run::start("simulate", out)?;
    write_report(&mut run, &report)?;
    if args.network_files.is_empty() {
        for (k, net) in nets.iter().enumerate() {
            run.write(format!("networks/network_{k:03}.txt"), |w| Ok(save_network(net, w)?))?;
        }
    }
    if args.trace {
        let seed = derive_seed(args.seed, &[0, 0]);
        let mut all: Vec<&dyn Scheduler> = vec![&exact];
        all.extend(candidates.iter().copied());
        for s in all {
            let trace = run_instance(&nets[0], s, config, seed)?;
            run.write(format!("traces/{}.csv", s.name()), |w| Ok(trace.write_csv(w)?))?;
        }
    }
    run.finish(&args, vec![args.seed])?;
    print_means(&report);
    budget_status(&report)
}
