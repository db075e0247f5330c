use std::fmt;
use std::str::FromStr;

use rand::Rng;

use super::{Graph, GraphError};
use crate::rng::rng_from_seed;

/// Erdős–Rényi G(n, p): every unordered pair is an edge independently with
/// probability `p`.
pub fn gen_er(n: usize, p: f64, seed: u64) -> Result<Graph, GraphError> {
    if n == 0 {
        return Err(GraphError::Parameter("ER graph needs n >= 1".into()));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(GraphError::Parameter(format!("ER edge probability {p} outside [0, 1]")));
    }
    let mut rng = rng_from_seed(seed);
    let mut adjacency = vec![Vec::new(); n];
    for i in 0..n {
        for j in (i + 1)..n {
            if rng.random::<f64>() < p {
                adjacency[i].push(j);
                adjacency[j].push(i);
            }
        }
    }
    // Lists are built in increasing order for every node.
    Ok(Graph { adjacency })
}

/// Barabási–Albert preferential attachment.
///
/// Starts from `m` isolated seed nodes. Node `m` connects to all of them; every
/// later node picks `m` distinct existing targets with probability proportional
/// to `degree + 1`. The edge count is always `m * (n - m)`.
pub fn gen_ba(n: usize, m: usize, seed: u64) -> Result<Graph, GraphError> {
    if m == 0 || m >= n {
        return Err(GraphError::Parameter(format!("BA graph needs 1 <= m < n, got m={m}, n={n}")));
    }
    let mut rng = rng_from_seed(seed);
    let mut adjacency: Vec<Vec<usize>> = vec![Vec::new(); n];
    // Each node appears once (the +1) plus once per incident edge.
    let mut pool: Vec<usize> = (0..m).collect();
    let mut targets = Vec::with_capacity(m);
    for new in m..n {
        targets.clear();
        if new == m {
            targets.extend(0..m);
        } else {
            while targets.len() < m {
                let t = pool[rng.random_range(0..pool.len())];
                if !targets.contains(&t) {
                    targets.push(t);
                }
            }
        }
        for &t in &targets {
            adjacency[t].push(new);
            adjacency[new].push(t);
            pool.push(t);
        }
        pool.push(new);
        pool.extend(std::iter::repeat_n(new, m));
    }
    for list in &mut adjacency {
        list.sort_unstable();
    }
    Ok(Graph { adjacency })
}

/// Attachment count `m = round(n * p)` (half up), clamped to `[1, n - 1]`.
pub fn round_attachment(n: usize, expected_degree: f64) -> usize {
    let m = (expected_degree + 0.5).floor().max(1.0) as usize;
    m.min(n.saturating_sub(1)).max(1)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GraphModel {
    Er { n: usize, p: f64 },
    Ba { n: usize, m: usize },
    Geometric { n: usize, area: f64, link_radius: f64, interference_radius: f64 },
}

/// A graph model together with its seed, e.g. `er:n=100,p=0.05,seed=7`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeneratorSpec {
    pub model: GraphModel,
    pub seed: u64,
}

impl GeneratorSpec {
    pub fn validate(&self) -> Result<(), GraphError> {
        let bad = |msg: String| Err(GraphError::Parameter(msg));
        match self.model {
            GraphModel::Er { n, p } => {
                if n == 0 || !(0.0..=1.0).contains(&p) {
                    return bad(format!("invalid ER parameters n={n}, p={p}"));
                }
            }
            GraphModel::Ba { n, m } => {
                if m == 0 || m >= n {
                    return bad(format!("invalid BA parameters n={n}, m={m}"));
                }
            }
            GraphModel::Geometric { n, area, link_radius, interference_radius } => {
                if n == 0 || !(area > 0.0 && link_radius > 0.0 && interference_radius > 0.0) {
                    return bad("geometric model needs n >= 1 and positive area and radii".into());
                }
            }
        }
        Ok(())
    }

    /// Generates the graph. For the geometric model this is the conflict graph
    /// over the wireless links.
    pub fn generate(&self) -> Result<Graph, GraphError> {
        self.validate()?;
        match self.model {
            GraphModel::Er { n, p } => gen_er(n, p, self.seed),
            GraphModel::Ba { n, m } => gen_ba(n, m, self.seed),
            GraphModel::Geometric { n, area, link_radius, interference_radius } => {
                crate::wireless::gen_network(n, area, link_radius, interference_radius, self.seed)
                    .map(|net| net.conflict_graph)
            }
        }
    }
}

impl fmt::Display for GeneratorSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.model {
            GraphModel::Er { n, p } => write!(f, "er:n={n},p={p}")?,
            GraphModel::Ba { n, m } => write!(f, "ba:n={n},m={m}")?,
            GraphModel::Geometric { n, area, link_radius, interference_radius } => write!(
                f,
                "geo:n={n},area={area},link={link_radius},interference={interference_radius}"
            )?,
        }
        write!(f, ",seed={}", self.seed)
    }
}

pub(crate) fn parse_kv(body: &str) -> Result<Vec<(&str, &str)>, GraphError> {
    body.split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|tok| {
            tok.split_once('=')
                .map(|(k, v)| (k.trim(), v.trim()))
                .ok_or_else(|| GraphError::Parameter(format!("expected key=value, got `{tok}`")))
        })
        .collect()
}

pub(crate) fn parse_num<T: FromStr>(key: &str, value: &str) -> Result<T, GraphError> {
    value
        .parse()
        .map_err(|_| GraphError::Parameter(format!("cannot parse `{key}={value}`")))
}

impl FromStr for GeneratorSpec {
    type Err = GraphError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (kind, body) = s
            .split_once(':')
            .ok_or_else(|| GraphError::Parameter(format!("missing model prefix in `{s}`")))?;
        let mut n = None;
        let mut p = None;
        let mut m = None;
        let mut area = None;
        let mut link = None;
        let mut interference = None;
        let mut seed = 0u64;
        for (k, v) in parse_kv(body)? {
            match k {
                "n" => n = Some(parse_num(k, v)?),
                "p" => p = Some(parse_num(k, v)?),
                "m" => m = Some(parse_num(k, v)?),
                "area" => area = Some(parse_num(k, v)?),
                "link" | "link_radius" => link = Some(parse_num(k, v)?),
                "interference" | "interference_radius" => interference = Some(parse_num(k, v)?),
                "seed" => seed = parse_num(k, v)?,
                other => return Err(GraphError::Parameter(format!("unknown key `{other}`"))),
            }
        }
        let need = |name: &str| GraphError::Parameter(format!("`{kind}` spec is missing `{name}`"));
        let n = n.ok_or_else(|| need("n"))?;
        let model = match kind.trim() {
            "er" => GraphModel::Er { n, p: p.ok_or_else(|| need("p"))? },
            "ba" => GraphModel::Ba { n, m: m.ok_or_else(|| need("m"))? },
            "geo" => GraphModel::Geometric {
                n,
                area: area.unwrap_or(250.0),
                link_radius: link.unwrap_or(1.0),
                interference_radius: interference.unwrap_or(4.0),
            },
            other => return Err(GraphError::Parameter(format!("unknown graph model `{other}`"))),
        };
        let spec = GeneratorSpec { model, seed };
        spec.validate()?;
        Ok(spec)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn er_extremes() {
        assert_eq!(gen_er(5, 0.0, 3).unwrap().num_edges(), 0);
        let k5 = gen_er(5, 1.0, 3).unwrap();
        assert_eq!(k5.num_edges(), 10);
        k5.check_invariants().unwrap();
    }

    #[test]
    fn er_rejects_bad_parameters() {
        assert!(gen_er(0, 0.5, 1).is_err());
        assert!(gen_er(5, 1.5, 1).is_err());
        assert!(gen_er(5, -0.1, 1).is_err());
    }

    #[test]
    fn er_is_seed_deterministic() {
        assert_eq!(gen_er(60, 0.1, 9).unwrap(), gen_er(60, 0.1, 9).unwrap());
        assert_ne!(gen_er(60, 0.1, 9).unwrap(), gen_er(60, 0.1, 10).unwrap());
    }

    #[test]
    fn ba_first_attachment_hits_all_seeds() {
        for m in 1..6 {
            let g = gen_ba(m + 1, m, 5).unwrap();
            assert_eq!(g.num_edges(), m);
            assert_eq!(g.degree(m), m);
        }
    }

    #[test]
    fn ba_edge_count() {
        for seed in 0..20 {
            let g = gen_ba(100, 2, seed).unwrap();
            assert_eq!(g.num_edges(), 196);
            g.check_invariants().unwrap();
        }
    }

    #[test]
    fn ba_rejects_bad_parameters() {
        assert!(gen_ba(5, 0, 1).is_err());
        assert!(gen_ba(5, 5, 1).is_err());
    }

    #[test]
    fn attachment_rounding() {
        assert_eq!(round_attachment(100, 2.0), 2);
        assert_eq!(round_attachment(100, 7.5), 8);
        assert_eq!(round_attachment(100, 12.5), 13);
        assert_eq!(round_attachment(100, 0.2), 1);
        assert_eq!(round_attachment(30, 27.0), 27);
        assert_eq!(round_attachment(30, 45.0), 29);
    }

    #[test]
    fn spec_strings() {
        let s: GeneratorSpec = "er:n=100,p=0.05,seed=7".parse().unwrap();
        assert_eq!(s.model, GraphModel::Er { n: 100, p: 0.05 });
        assert_eq!(s.seed, 7);
        let back: GeneratorSpec = s.to_string().parse().unwrap();
        assert_eq!(back, s);
        assert!("er:n=100".parse::<GeneratorSpec>().is_err());
        assert!("xx:n=1".parse::<GeneratorSpec>().is_err());
        assert!("ba:n=3,m=3".parse::<GeneratorSpec>().is_err());
        assert!("er:n=10,p=0.1,bogus=1".parse::<GeneratorSpec>().is_err());
    }
}
