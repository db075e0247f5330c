//! Evaluation reports: per-instance approximation ratios, bucket aggregates
//! and fixed-width histograms, with CSV/JSON export.

use std::collections::BTreeMap;
use std::io::{Read, Write};

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const HISTOGRAM_BINS: usize = 100;

#[derive(Debug, Error)]
pub enum ReportError {
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceRecord {
    pub instance: usize,
    /// Graph size (number of links for wireless instances).
    pub n: usize,
    /// Requested expected degree for synthetic graphs, measured mean degree
    /// for wireless conflict graphs.
    pub avg_degree: f64,
    pub solver: String,
    pub ratio: f64,
    pub rounds: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FlaggedInstance {
    pub instance: usize,
    pub kind: FlagKind,
    pub reason: String,
}

/// Why an instance was left out of the ratios.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FlagKind {
    /// The exact reference ran out of budget.
    Budget,
    /// The reference value is zero, so no ratio exists.
    ZeroReference,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub records: Vec<InstanceRecord>,
    pub flagged: Vec<FlaggedInstance>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Stats {
    pub count: usize,
    pub mean: f64,
    pub median: f64,
    pub std: f64,
    pub min: f64,
    pub max: f64,
}

impl Stats {
    pub fn of(values: &[f64]) -> Option<Stats> {
        if values.is_empty() {
            return None;
        }
        let count = values.len();
        let mean = values.iter().sum::<f64>() / count as f64;
        let mut sorted = values.to_vec();
        sorted.sort_by(f64::total_cmp);
        let median = if count % 2 == 1 {
            sorted[count / 2]
        } else {
            0.5 * (sorted[count / 2 - 1] + sorted[count / 2])
        };
        let std = if count > 1 {
            (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (count - 1) as f64).sqrt()
        } else {
            0.0
        };
        Some(Stats { count, mean, median, std, min: sorted[0], max: sorted[count - 1] })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BucketStats {
    pub solver: String,
    pub n: usize,
    pub avg_degree: f64,
    #[serde(flatten)]
    pub stats: Stats,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverStats {
    pub solver: String,
    #[serde(flatten)]
    pub stats: Stats,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportSummary {
    pub solvers: Vec<SolverStats>,
    pub buckets: Vec<BucketStats>,
    pub flagged: Vec<FlaggedInstance>,
}

/// Bin index for a ratio in `[0, 1]` with bins of width 0.01; 1.0 lands in the
/// last bin.
pub fn histogram_bin(ratio: f64) -> usize {
    ((ratio * HISTOGRAM_BINS as f64).floor().max(0.0) as usize).min(HISTOGRAM_BINS - 1)
}

impl EvalReport {
    /// Solver names in first-appearance order.
    pub fn solvers(&self) -> Vec<String> {
        let mut out: Vec<String> = Vec::new();
        for r in &self.records {
            if !out.contains(&r.solver) {
                out.push(r.solver.clone());
            }
        }
        out
    }

    pub fn ratios(&self, solver: &str) -> Vec<f64> {
        self.records.iter().filter(|r| r.solver == solver).map(|r| r.ratio).collect()
    }

    pub fn stats(&self, solver: &str) -> Option<Stats> {
        Stats::of(&self.ratios(solver))
    }

    pub fn mean_ratio(&self, solver: &str) -> Option<f64> {
        self.stats(solver).map(|s| s.mean)
    }

    /// Per `(solver, n, avg_degree)` statistics, sorted by key.
    pub fn buckets(&self) -> Vec<BucketStats> {
        let mut groups: BTreeMap<(String, usize, i64), (f64, Vec<f64>)> = BTreeMap::new();
        for r in &self.records {
            let key = (r.solver.clone(), r.n, (r.avg_degree * 1000.0).round() as i64);
            groups.entry(key).or_insert_with(|| (r.avg_degree, Vec::new())).1.push(r.ratio);
        }
        groups
            .into_iter()
            .map(|((solver, n, _), (avg_degree, values))| BucketStats {
                solver,
                n,
                avg_degree,
                stats: Stats::of(&values).expect("non-empty group"),
            })
            .collect()
    }

    pub fn histogram(&self, solver: &str) -> Vec<u64> {
        let mut bins = vec![0u64; HISTOGRAM_BINS];
        for r in self.ratios(solver) {
            bins[histogram_bin(r)] += 1;
        }
        bins
    }

    pub fn summary(&self) -> ReportSummary {
        ReportSummary {
            solvers: self
                .solvers()
                .into_iter()
                .filter_map(|s| self.stats(&s).map(|stats| SolverStats { solver: s, stats }))
                .collect(),
            buckets: self.buckets(),
            flagged: self.flagged.clone(),
        }
    }

    pub fn merge(&mut self, other: EvalReport) {
        self.records.extend(other.records);
        self.flagged.extend(other.flagged);
    }

    pub fn write_records_csv<W: Write>(&self, out: W) -> Result<(), ReportError> {
        let mut w = csv::Writer::from_writer(out);
        for r in &self.records {
            w.serialize(r)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn read_records_csv<R: Read>(input: R) -> Result<EvalReport, ReportError> {
        let mut rdr = csv::Reader::from_reader(input);
        let records = rdr.deserialize().collect::<Result<Vec<InstanceRecord>, _>>()?;
        Ok(EvalReport { records, flagged: Vec::new() })
    }

    pub fn write_summary_json<W: Write>(&self, out: W) -> Result<(), ReportError> {
        serde_json::to_writer_pretty(out, &self.summary())?;
        Ok(())
    }

    /// Columns `bin_lo, bin_hi, <solver>...` with one row per 0.01-wide bin.
    pub fn write_histogram_csv<W: Write>(&self, out: W) -> Result<(), ReportError> {
        let solvers = self.solvers();
        let hists: Vec<Vec<u64>> = solvers.iter().map(|s| self.histogram(s)).collect();
        let mut w = csv::Writer::from_writer(out);
        let mut header = vec!["bin_lo".to_string(), "bin_hi".to_string()];
        header.extend(solvers.iter().cloned());
        w.write_record(&header)?;
        for b in 0..HISTOGRAM_BINS {
            let mut row = vec![format!("{:.2}", b as f64 / 100.0), format!("{:.2}", (b + 1) as f64 / 100.0)];
            row.extend(hists.iter().map(|h| h[b].to_string()));
            w.write_record(&row)?;
        }
        w.flush()?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(instance: usize, n: usize, d: f64, solver: &str, ratio: f64) -> InstanceRecord {
        InstanceRecord { instance, n, avg_degree: d, solver: solver.into(), ratio, rounds: 2 }
    }

    fn sample() -> EvalReport {
        EvalReport {
            records: vec![
                rec(0, 50, 2.0, "greedy", 0.9),
                rec(0, 50, 2.0, "gcn", 1.0),
                rec(1, 50, 5.0, "greedy", 0.8),
                rec(1, 50, 5.0, "gcn", 0.95),
                rec(2, 50, 5.0, "greedy", 0.7),
                rec(2, 50, 5.0, "gcn", 0.855),
            ],
            flagged: vec![FlaggedInstance { instance: 3, kind: FlagKind::Budget, reason: "budget".into() }],
        }
    }

    #[test]
    fn stats_basics() {
        let s = Stats::of(&[1.0, 2.0, 3.0, 4.0]).unwrap();
        assert_eq!(s.mean, 2.5);
        assert_eq!(s.median, 2.5);
        assert!((s.std - (5.0f64 / 3.0).sqrt()).abs() < 1e-15);
        assert!(Stats::of(&[]).is_none());
    }

    #[test]
    fn buckets_partition_records() {
        let r = sample();
        let buckets = r.buckets();
        assert_eq!(buckets.len(), 4);
        let total: usize = buckets.iter().map(|b| b.stats.count).sum();
        assert_eq!(total, r.records.len());
        assert_eq!(r.solvers(), vec!["greedy", "gcn"]);
        assert!((r.mean_ratio("greedy").unwrap() - 0.8).abs() < 1e-12);
    }

    #[test]
    fn histogram_edges() {
        assert_eq!(histogram_bin(0.0), 0);
        assert_eq!(histogram_bin(1.0), 99);
        assert_eq!(histogram_bin(0.955), 95);
        let h = sample().histogram("gcn");
        assert_eq!(h.iter().sum::<u64>(), 3);
        assert_eq!(h[99], 1);
    }

    #[test]
    fn csv_roundtrip_and_exports() {
        let r = sample();
        let mut buf = Vec::new();
        r.write_records_csv(&mut buf).unwrap();
        let back = EvalReport::read_records_csv(buf.as_slice()).unwrap();
        assert_eq!(back.records, r.records);

        let mut json = Vec::new();
        r.write_summary_json(&mut json).unwrap();
        let parsed: ReportSummary = serde_json::from_slice(&json).unwrap();
        assert_eq!(parsed.solvers.len(), 2);
        assert_eq!(parsed.flagged.len(), 1);

        let mut hist = Vec::new();
        r.write_histogram_csv(&mut hist).unwrap();
        let text = String::from_utf8(hist).unwrap();
        assert_eq!(text.lines().count(), 101);
        assert!(text.starts_with("bin_lo,bin_hi,greedy,gcn"));
    }
}
