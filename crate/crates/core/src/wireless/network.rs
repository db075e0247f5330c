use std::io::{BufRead, Write};

use rand::Rng;

use crate::graph::{Graph, GraphError};
use crate::rng::derived_rng;

/// Nodes in a square, the links between nearby nodes, and the conflict graph
/// over those links.
#[derive(Debug, Clone, PartialEq)]
pub struct WirelessNetwork {
    pub positions: Vec<(f64, f64)>,
    /// Endpoint pairs `(a, b)` with `a < b`, in lexicographic order.
    pub links: Vec<(usize, usize)>,
    /// Source endpoint of the one-hop flow on each link.
    pub sources: Vec<usize>,
    pub link_radius: f64,
    pub interference_radius: f64,
    pub conflict_graph: Graph,
}

fn dist(a: (f64, f64), b: (f64, f64)) -> f64 {
    (a.0 - b.0).hypot(a.1 - b.1)
}

impl WirelessNetwork {
    /// Builds links and conflicts from fixed positions. Flow directions are
    /// drawn from `flow_seed`.
    pub fn from_positions(
        positions: Vec<(f64, f64)>,
        link_radius: f64,
        interference_radius: f64,
        flow_seed: u64,
    ) -> Result<Self, GraphError> {
        let n = positions.len();
        let mut links = Vec::new();
        for a in 0..n {
            for b in (a + 1)..n {
                if dist(positions[a], positions[b]) < link_radius {
                    links.push((a, b));
                }
            }
        }
        let mut rng = derived_rng(flow_seed, &[u64::MAX]);
        let sources = links.iter().map(|&(a, b)| if rng.random::<bool>() { a } else { b }).collect();
        Self::from_links(positions, links, sources, link_radius, interference_radius)
    }

    pub fn from_links(
        positions: Vec<(f64, f64)>,
        links: Vec<(usize, usize)>,
        sources: Vec<usize>,
        link_radius: f64,
        interference_radius: f64,
    ) -> Result<Self, GraphError> {
        if !(link_radius > 0.0 && interference_radius > 0.0) {
            return Err(GraphError::Parameter("radii must be positive".into()));
        }
        if sources.len() != links.len() {
            return Err(GraphError::Dimension { expected: links.len(), got: sources.len() });
        }
        for (&(a, b), &s) in links.iter().zip(&sources) {
            if a >= b || b >= positions.len() || (s != a && s != b) {
                return Err(GraphError::Parameter(format!("invalid link ({a}, {b}) with source {s}")));
            }
        }
        let mut edges = Vec::new();
        for i in 0..links.len() {
            for j in (i + 1)..links.len() {
                if link_distance(&positions, links[i], links[j]) < interference_radius {
                    edges.push((i, j));
                }
            }
        }
        let conflict_graph = Graph::from_edges(links.len(), &edges)?;
        Ok(Self { positions, links, sources, link_radius, interference_radius, conflict_graph })
    }

    pub fn num_links(&self) -> usize {
        self.links.len()
    }
}

/// Smallest distance between an endpoint of `a` and an endpoint of `b`.
pub(crate) fn link_distance(pos: &[(f64, f64)], a: (usize, usize), b: (usize, usize)) -> f64 {
    [(a.0, b.0), (a.0, b.1), (a.1, b.0), (a.1, b.1)]
        .iter()
        .map(|&(x, y)| if x == y { 0.0 } else { dist(pos[x], pos[y]) })
        .fold(f64::INFINITY, f64::min)
}

/// `n` nodes uniform in a square of the given area; links join nodes closer
/// than `link_radius`; two links conflict when some pair of their endpoints is
/// closer than `interference_radius` (links sharing a node always conflict).
pub fn gen_network(
    n: usize,
    area: f64,
    link_radius: f64,
    interference_radius: f64,
    seed: u64,
) -> Result<WirelessNetwork, GraphError> {
    if n == 0 || !(area > 0.0) {
        return Err(GraphError::Parameter("network needs n >= 1 and positive area".into()));
    }
    let side = area.sqrt();
    let mut rng = derived_rng(seed, &[0]);
    let positions = (0..n).map(|_| (rng.random::<f64>() * side, rng.random::<f64>() * side)).collect();
    WirelessNetwork::from_positions(positions, link_radius, interference_radius, seed)
}

/// Graph file format extended with `pos <i> <x> <y>`, `src <link> <node>` and
/// `radius <link> <interference>` records; `e` lines list the links.
pub fn save_network<W: Write>(net: &WirelessNetwork, mut out: W) -> Result<(), GraphError> {
    writeln!(out, "n {}", net.positions.len())?;
    writeln!(out, "radius {:?} {:?}", net.link_radius, net.interference_radius)?;
    for (i, (x, y)) in net.positions.iter().enumerate() {
        writeln!(out, "pos {i} {x:?} {y:?}")?;
    }
    for &(a, b) in &net.links {
        writeln!(out, "e {a} {b}")?;
    }
    for (k, s) in net.sources.iter().enumerate() {
        writeln!(out, "src {k} {s}")?;
    }
    Ok(())
}

pub fn load_network<R: BufRead>(input: R) -> Result<WirelessNetwork, GraphError> {
    let mut n = None;
    let mut radii = None;
    let mut positions: Vec<Option<(f64, f64)>> = Vec::new();
    let mut links = Vec::new();
    let mut sources: Vec<(usize, usize)> = Vec::new();
    for (idx, line) in input.lines().enumerate() {
        let line_no = idx + 1;
        let line = line?;
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.is_empty() || toks[0].starts_with('#') {
            continue;
        }
        let err = |msg: &str| GraphError::Parse { line: line_no, msg: msg.to_string() };
        let num = |i: usize| -> Result<f64, GraphError> {
            toks.get(i).and_then(|t| t.parse().ok()).ok_or_else(|| err("invalid number"))
        };
        let id = |i: usize| -> Result<usize, GraphError> {
            toks.get(i).and_then(|t| t.parse().ok()).ok_or_else(|| err("invalid index"))
        };
        let expect = |k: usize| if toks.len() == k { Ok(()) } else { Err(err("wrong field count")) };
        match toks[0] {
            "n" => {
                expect(2)?;
                let count = id(1)?;
                n = Some(count);
                positions = vec![None; count];
            }
            "radius" => {
                expect(3)?;
                radii = Some((num(1)?, num(2)?));
            }
            "pos" => {
                expect(4)?;
                let i = id(1)?;
                *positions.get_mut(i).ok_or_else(|| err("position index out of range"))? = Some((num(2)?, num(3)?));
            }
            "e" => {
                expect(3)?;
                links.push((id(1)?, id(2)?));
            }
            "src" => {
                expect(3)?;
                sources.push((id(1)?, id(2)?));
            }
            _ => return Err(err("unknown record")),
        }
    }
    let missing = |what: &str| GraphError::Parse { line: 0, msg: format!("missing {what}") };
    n.ok_or_else(|| missing("header"))?;
    let (link_radius, interference_radius) = radii.ok_or_else(|| missing("radius record"))?;
    let positions = positions
        .into_iter()
        .enumerate()
        .map(|(i, p)| p.ok_or_else(|| missing(&format!("position of node {i}"))))
        .collect::<Result<Vec<_>, _>>()?;
    sources.sort_unstable();
    if sources.iter().enumerate().any(|(k, &(l, _))| k != l) || sources.len() != links.len() {
        return Err(missing("one source per link"));
    }
    let sources = sources.into_iter().map(|(_, s)| s).collect();
    WirelessNetwork::from_links(positions, links, sources, link_radius, interference_radius)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_link_and_isolated_node() {
        let net = WirelessNetwork::from_positions(vec![(0.0, 0.0), (0.5, 0.0), (10.0, 10.0)], 1.0, 4.0, 1).unwrap();
        assert_eq!(net.links, vec![(0, 1)]);
        assert_eq!(net.conflict_graph.num_nodes(), 1);
        assert_eq!(net.conflict_graph.num_edges(), 0);
    }

    #[test]
    fn distant_links_do_not_conflict() {
        let pos = vec![(0.0, 0.0), (0.5, 0.0), (10.0, 0.0), (10.5, 0.0)];
        let net = WirelessNetwork::from_positions(pos, 1.0, 4.0, 1).unwrap();
        assert_eq!(net.num_links(), 2);
        assert_eq!(net.conflict_graph.num_edges(), 0);
        let near = vec![(0.0, 0.0), (0.5, 0.0), (4.0, 0.0), (4.5, 0.0)];
        let net = WirelessNetwork::from_positions(near, 1.0, 4.0, 1).unwrap();
        assert_eq!(net.conflict_graph.num_edges(), 1);
    }

    #[test]
    fn shared_node_always_conflicts() {
        let pos = vec![(0.0, 0.0), (0.9, 0.0), (-0.9, 0.0)];
        let net = WirelessNetwork::from_positions(pos, 1.0, 0.01, 1).unwrap();
        assert_eq!(net.links, vec![(0, 1), (0, 2)]);
        assert!(net.conflict_graph.has_edge(0, 1));
    }

    #[test]
    fn file_roundtrip() {
        let net = gen_network(60, 100.0, 1.5, 4.0, 3).unwrap();
        let mut buf = Vec::new();
        save_network(&net, &mut buf).unwrap();
        let back = load_network(buf.as_slice()).unwrap();
        assert_eq!(back, net);
        // The base graph reader accepts the file too (extension records are skipped).
        let (g, _) = crate::graph::load_graph(buf.as_slice()).unwrap();
        assert_eq!(g.num_edges(), net.num_links());
    }

    #[test]
    fn sources_are_endpoints() {
        let net = gen_network(100, 250.0, 1.0, 4.0, 12).unwrap();
        for (&(a, b), &s) in net.links.iter().zip(&net.sources) {
            assert!(s == a || s == b);
        }
    }
}
