//! Synthetic training and test sets of ER/BA graphs with random utilities.

use std::sync::Arc;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::TrainError;
use crate::graph::{gen_ba, gen_er, round_attachment, Graph, NodeUtilities};
use crate::rng::derived_rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GraphFamily {
    Er,
    Ba,
}

/// Second graph parameter, cycled together with the sizes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DegreeSpec {
    /// Expected average degree `Np`; ER uses `p = Np / N`, BA uses `m = Np`.
    ExpectedDegree(Vec<f64>),
    /// Edge probability `p`; BA uses `m = N p`.
    EdgeProbability(Vec<f64>),
}

impl DegreeSpec {
    fn len(&self) -> usize {
        match self {
            DegreeSpec::ExpectedDegree(v) | DegreeSpec::EdgeProbability(v) => v.len(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetEntry {
    pub family: GraphFamily,
    pub sizes: Vec<usize>,
    pub degrees: DegreeSpec,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum UtilityDist {
    /// Continuous uniform on `[0, 1)`.
    #[default]
    Uniform01,
    /// Discrete uniform on `{lo, ..., hi}`.
    UniformInt { lo: u32, hi: u32 },
    /// Uniform draw from a fixed list of values.
    Choice { values: Vec<f64> },
}

impl UtilityDist {
    fn sample<R: Rng>(&self, rng: &mut R) -> f64 {
        match self {
            UtilityDist::Uniform01 => rng.random::<f64>(),
            UtilityDist::UniformInt { lo, hi } => rng.random_range(*lo..=*hi) as f64,
            UtilityDist::Choice { values } => values[rng.random_range(0..values.len())],
        }
    }

    fn validate(&self) -> Result<(), TrainError> {
        match self {
            UtilityDist::UniformInt { lo, hi } if lo > hi => {
                Err(TrainError::Config(format!("empty integer range {lo}..={hi}")))
            }
            UtilityDist::Choice { values } if values.is_empty() || values.iter().any(|v| !(v.is_finite() && *v >= 0.0)) => {
                Err(TrainError::Config("choice utilities must be a non-empty list of non-negative values".into()))
            }
            _ => Ok(()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct DatasetSpec {
    pub entries: Vec<DatasetEntry>,
    #[serde(default)]
    pub utilities: UtilityDist,
}

/// One generated problem instance.
#[derive(Debug, Clone)]
pub struct Instance {
    pub id: usize,
    pub family: GraphFamily,
    pub n: usize,
    /// Nominal expected degree `Np` of the generating model.
    pub expected_degree: f64,
    pub graph: Arc<Graph>,
    pub utilities: NodeUtilities,
}

const TENTHS: [f64; 9] = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9];

impl DatasetSpec {
    /// 5000 graphs with `N ∈ {100..300}`, `Np ∈ {2, 5, 7.5, 10, 12.5}` plus
    /// 800 graphs with `N ∈ {30, 100}`, `p ∈ {0.1, ..., 0.9}`.
    pub fn full_training(family: GraphFamily) -> Self {
        DatasetSpec {
            entries: vec![
                DatasetEntry {
                    family,
                    sizes: vec![100, 150, 200, 250, 300],
                    degrees: DegreeSpec::ExpectedDegree(vec![2.0, 5.0, 7.5, 10.0, 12.5]),
                    count: 5000,
                },
                DatasetEntry {
                    family,
                    sizes: vec![30, 100],
                    degrees: DegreeSpec::EdgeProbability(TENTHS.to_vec()),
                    count: 800,
                },
            ],
            utilities: UtilityDist::Uniform01,
        }
    }

    /// 20 graphs for each `N ∈ {100..300}` and `Np ∈ {2, 5, 10, 15, 20}`.
    pub fn full_test(family: GraphFamily) -> Self {
        DatasetSpec {
            entries: vec![DatasetEntry {
                family,
                sizes: vec![100, 150, 200, 250, 300],
                degrees: DegreeSpec::ExpectedDegree(vec![2.0, 5.0, 10.0, 15.0, 20.0]),
                count: 500,
            }],
            utilities: UtilityDist::Uniform01,
        }
    }

    /// 500 graphs with `N ∈ {30, 60}` and the training degrees.
    pub fn desk_training(family: GraphFamily) -> Self {
        DatasetSpec {
            entries: vec![DatasetEntry {
                family,
                sizes: vec![30, 60],
                degrees: DegreeSpec::ExpectedDegree(vec![2.0, 5.0, 7.5, 10.0, 12.5]),
                count: 500,
            }],
            utilities: UtilityDist::Uniform01,
        }
    }

    /// 10 graphs for each `N ∈ {50, 100}` and `Np ∈ {2, 5, 10, 15, 20}`.
    pub fn desk_test(family: GraphFamily) -> Self {
        DatasetSpec {
            entries: vec![DatasetEntry {
                family,
                sizes: vec![50, 100],
                degrees: DegreeSpec::ExpectedDegree(vec![2.0, 5.0, 10.0, 15.0, 20.0]),
                count: 100,
            }],
            utilities: UtilityDist::Uniform01,
        }
    }

    pub fn total_count(&self) -> usize {
        self.entries.iter().map(|e| e.count).sum()
    }

    pub fn validate(&self) -> Result<(), TrainError> {
        self.utilities.validate()?;
        for (k, e) in self.entries.iter().enumerate() {
            if e.count == 0 {
                continue;
            }
            if e.sizes.is_empty() || e.degrees.len() == 0 {
                return Err(TrainError::Config(format!("entry {k} has no sizes or degrees")));
            }
            for &n in &e.sizes {
                for d in 0..e.degrees.len() {
                    resolve(e.family, n, &e.degrees, d)?;
                }
            }
        }
        Ok(())
    }
}

/// Model parameter and nominal expected degree for one combination.
enum Resolved {
    Er { p: f64 },
    Ba { m: usize },
}

fn resolve(family: GraphFamily, n: usize, degrees: &DegreeSpec, idx: usize) -> Result<(Resolved, f64), TrainError> {
    let infeasible = |what: String| Err(TrainError::Config(what));
    if n < 2 {
        return infeasible(format!("graph size {n} too small"));
    }
    let nf = n as f64;
    let (p, np) = match degrees {
        DegreeSpec::ExpectedDegree(v) => (v[idx] / nf, v[idx]),
        DegreeSpec::EdgeProbability(v) => (v[idx], v[idx] * nf),
    };
    let er_by_probability = family == GraphFamily::Er && matches!(degrees, DegreeSpec::EdgeProbability(_));
    if !((0.0..=1.0).contains(&p) && (np < nf || er_by_probability)) {
        return infeasible(format!("infeasible combination N={n}, Np={np}"));
    }
    Ok(match family {
        GraphFamily::Er => (Resolved::Er { p }, np),
        GraphFamily::Ba => (Resolved::Ba { m: round_attachment(n, np) }, np),
    })
}

/// Instantiates the mixture. Within an entry, item `i` uses combination
/// `i mod (|sizes| · |degrees|)` (sizes outer, degrees inner). Every item draws
/// from its own stream derived from `(seed, item index)`.
pub fn generate_training_set(spec: &DatasetSpec, seed: u64) -> Result<Vec<Instance>, TrainError> {
    spec.validate()?;
    let mut jobs = Vec::with_capacity(spec.total_count());
    for e in &spec.entries {
        let combos = e.sizes.len() * e.degrees.len();
        for i in 0..e.count {
            let c = i % combos;
            jobs.push((e, e.sizes[c / e.degrees.len()], c % e.degrees.len()));
        }
    }
    jobs.into_par_iter()
        .enumerate()
        .map(|(id, (e, n, d))| {
            let (model, expected_degree) = resolve(e.family, n, &e.degrees, d)?;
            let graph_seed = crate::rng::derive_seed(seed, &[id as u64, 0]);
            let graph = match model {
                Resolved::Er { p } => gen_er(n, p, graph_seed)?,
                Resolved::Ba { m } => gen_ba(n, m, graph_seed)?,
            };
            let mut rng = derived_rng(seed, &[id as u64, 1]);
            let values = (0..n).map(|_| spec.utilities.sample(&mut rng)).collect();
            Ok(Instance {
                id,
                family: e.family,
                n,
                expected_degree,
                graph: Arc::new(graph),
                utilities: NodeUtilities::new(values)?,
            })
        })
        .collect()
}

fn parse_list<T: std::str::FromStr>(key: &str, value: &str) -> Result<Vec<T>, TrainError> {
    value
        .split('|')
        .map(|t| {
            t.trim()
                .parse()
                .map_err(|_| TrainError::Config(format!("cannot parse `{key}={value}` (token `{t}`)")))
        })
        .collect()
}

/// Parses a dataset description such as
/// `er:n=30|50,np=2|5,count=200,seed=1` or `desk-test:family=ba,seed=4`.
///
/// Entries are separated by `;`. Recognized keys: `n`, `np` (expected degree),
/// `p` (edge probability), `m` (BA attachment, same as `np`), `count`,
/// `seed`, `util` (`u01`, `int:<lo>:<hi>`). Presets: `full-train`,
/// `full-test`, `desk-train`, `desk-test`. Returns the spec and the seed if
/// one was given.
pub fn parse_dataset_spec(text: &str) -> Result<(DatasetSpec, Option<u64>), TrainError> {
    let mut spec = DatasetSpec::default();
    let mut seed = None;
    let bad = |tok: &str| TrainError::Config(format!("unrecognized token `{tok}`"));
    for part in text.split(';').map(str::trim).filter(|p| !p.is_empty()) {
        let (kind, body) = part.split_once(':').unwrap_or((part, ""));
        let mut family = None;
        let mut sizes: Option<Vec<usize>> = None;
        let mut degrees = None;
        let mut count = None;
        for tok in body.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            let (k, v) = tok.split_once('=').ok_or_else(|| bad(tok))?;
            match k.trim() {
                "n" => sizes = Some(parse_list(k, v)?),
                "np" | "m" => degrees = Some(DegreeSpec::ExpectedDegree(parse_list(k, v)?)),
                "p" => degrees = Some(DegreeSpec::EdgeProbability(parse_list(k, v)?)),
                "count" => count = Some(v.trim().parse::<usize>().map_err(|_| bad(tok))?),
                "seed" => seed = Some(v.trim().parse::<u64>().map_err(|_| bad(tok))?),
                "family" => {
                    family = Some(match v.trim() {
                        "er" => GraphFamily::Er,
                        "ba" => GraphFamily::Ba,
                        _ => return Err(bad(tok)),
                    })
                }
                "util" => {
                    spec.utilities = match v.trim().split(':').collect::<Vec<_>>().as_slice() {
                        ["u01"] => UtilityDist::Uniform01,
                        ["int", lo, hi] => UtilityDist::UniformInt {
                            lo: lo.parse().map_err(|_| bad(tok))?,
                            hi: hi.parse().map_err(|_| bad(tok))?,
                        },
                        _ => return Err(bad(tok)),
                    }
                }
                _ => return Err(bad(tok)),
            }
        }
        let preset = |make: fn(GraphFamily) -> DatasetSpec| make(family.unwrap_or(GraphFamily::Er));
        match kind {
            "full-train" | "full-test" | "desk-train" | "desk-test" => {
                let p = match kind {
                    "full-train" => preset(DatasetSpec::full_training),
                    "full-test" => preset(DatasetSpec::full_test),
                    "desk-train" => preset(DatasetSpec::desk_training),
                    _ => preset(DatasetSpec::desk_test),
                };
                let mut entries = p.entries;
                if let Some(c) = count {
                    for e in &mut entries {
                        e.count = c;
                    }
                }
                spec.entries.extend(entries);
            }
            "er" | "ba" => {
                let family = if kind == "er" { GraphFamily::Er } else { GraphFamily::Ba };
                let sizes = sizes.ok_or_else(|| TrainError::Config(format!("`{part}` is missing `n`")))?;
                let degrees = degrees.ok_or_else(|| TrainError::Config(format!("`{part}` needs `p` or `np`")))?;
                spec.entries.push(DatasetEntry { family, sizes, degrees, count: count.unwrap_or(1) });
            }
            other => return Err(bad(other)),
        }
    }
    spec.validate()?;
    Ok((spec, seed))
}
