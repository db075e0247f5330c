//! Line-oriented graph files.
//!
//! ```text
//! n 3
//! e 0 1
//! e 1 2
//! w 0 0.1
//! w 1 0.2
//! w 2 0.3
//! ```
//!
//! Edges are written once with `i < j`. Weight lines are optional but, when
//! present, every node needs exactly one. Blank lines and `#` comments are
//! ignored. Floats use the shortest representation that round-trips exactly.

use std::fs;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use super::{Graph, GraphError, NodeUtilities};

pub fn save_graph<W: Write>(
    g: &Graph,
    weights: Option<&NodeUtilities>,
    mut out: W,
) -> Result<(), GraphError> {
    if let Some(w) = weights {
        w.check_len(g)?;
    }
    writeln!(out, "n {}", g.num_nodes())?;
    for (i, j) in g.edges() {
        writeln!(out, "e {i} {j}")?;
    }
    if let Some(w) = weights {
        for (i, value) in w.as_slice().iter().enumerate() {
            writeln!(out, "w {i} {value:?}")?;
        }
    }
    Ok(())
}

fn parse_field<T: std::str::FromStr>(
    tok: Option<&str>,
    line: usize,
    what: &str,
) -> Result<T, GraphError> {
    let tok = tok.ok_or_else(|| GraphError::Parse { line, msg: format!("missing {what}") })?;
    tok.parse()
        .map_err(|_| GraphError::Parse { line, msg: format!("invalid {what} `{tok}`") })
}

pub fn load_graph<R: BufRead>(input: R) -> Result<(Graph, Option<NodeUtilities>), GraphError> {
    let mut n: Option<usize> = None;
    let mut edges = Vec::new();
    let mut weights: Vec<Option<f64>> = Vec::new();
    let mut any_weight = false;
    for (idx, line) in input.lines().enumerate() {
        let line_no = idx + 1;
        let line = line?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut toks = line.split_whitespace();
        let tag = toks.next().unwrap_or_default();
        match (tag, n) {
            ("n", None) => {
                let count: usize = parse_field(toks.next(), line_no, "node count")?;
                n = Some(count);
                weights = vec![None; count];
            }
            ("n", Some(_)) => {
                return Err(GraphError::Parse { line: line_no, msg: "duplicate header".into() })
            }
            (_, None) => {
                return Err(GraphError::Parse {
                    line: line_no,
                    msg: "expected header `n <num_nodes>` first".into(),
                })
            }
            ("e", Some(count)) => {
                let i: usize = parse_field(toks.next(), line_no, "edge endpoint")?;
                let j: usize = parse_field(toks.next(), line_no, "edge endpoint")?;
                if i >= count || j >= count || i == j {
                    return Err(GraphError::Parse {
                        line: line_no,
                        msg: format!("invalid edge ({i}, {j}) for {count} nodes"),
                    });
                }
                edges.push((i, j));
            }
            ("w", Some(count)) => {
                let i: usize = parse_field(toks.next(), line_no, "weight node")?;
                let value: f64 = parse_field(toks.next(), line_no, "weight value")?;
                if i >= count {
                    return Err(GraphError::Parse { line: line_no, msg: format!("weight node {i} out of range") });
                }
                if weights[i].replace(value).is_some() {
                    return Err(GraphError::Parse { line: line_no, msg: format!("duplicate weight for node {i}") });
                }
                any_weight = true;
            }
            (other, Some(_)) => {
                // Unknown tags belong to format extensions (e.g. node positions).
                if !other.chars().all(|c| c.is_ascii_alphabetic()) {
                    return Err(GraphError::Parse { line: line_no, msg: format!("unknown record `{other}`") });
                }
                continue;
            }
        }
        if toks.next().is_some() {
            return Err(GraphError::Parse { line: line_no, msg: "trailing fields".into() });
        }
    }
    let n = n.ok_or(GraphError::Parse { line: 0, msg: "missing header `n <num_nodes>`".into() })?;
    let g = Graph::from_edges(n, &edges)?;
    let weights = if any_weight {
        let values = weights
            .into_iter()
            .enumerate()
            .map(|(i, w)| w.ok_or(GraphError::Parse { line: 0, msg: format!("missing weight for node {i}") }))
            .collect::<Result<Vec<_>, _>>()?;
        Some(NodeUtilities::new(values)?)
    } else {
        None
    };
    Ok((g, weights))
}

pub fn write_graph_file(path: &Path, g: &Graph, weights: Option<&NodeUtilities>) -> Result<(), GraphError> {
    let mut buf = Vec::new();
    save_graph(g, weights, &mut buf)?;
    fs::write(path, buf)?;
    Ok(())
}

pub fn read_graph_file(path: &Path) -> Result<(Graph, Option<NodeUtilities>), GraphError> {
    load_graph(BufReader::new(fs::File::open(path)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::gen_er;

    fn roundtrip(g: &Graph, w: Option<&NodeUtilities>) -> (Graph, Option<NodeUtilities>) {
        let mut buf = Vec::new();
        save_graph(g, w, &mut buf).unwrap();
        load_graph(buf.as_slice()).unwrap()
    }

    #[test]
    fn empty_graph_roundtrips() {
        let g = Graph::empty(0);
        assert_eq!(roundtrip(&g, None), (g, None));
    }

    #[test]
    fn weighted_triangle_roundtrips_bit_exact() {
        let g = Graph::from_edges(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        let w = NodeUtilities::new(vec![0.1, 0.2, 0.3]).unwrap();
        let (g2, w2) = roundtrip(&g, Some(&w));
        assert_eq!(g2, g);
        let w2 = w2.unwrap();
        for i in 0..3 {
            assert_eq!(w2[i].to_bits(), w[i].to_bits());
        }
    }

    #[test]
    fn large_er_roundtrips() {
        let g = gen_er(500, 0.02, 11).unwrap();
        let (g2, w2) = roundtrip(&g, None);
        assert!(w2.is_none());
        assert_eq!(g2.adjacency(), g.adjacency());
    }

    #[test]
    fn malformed_inputs_report_lines() {
        let cases = [
            ("e 0 1\n", 1),
            ("n 2\ne 0 x\n", 2),
            ("n 2\ne 0 2\n", 2),
            ("n 2\n\nw 0 1.0\nw 0 2.0\n", 4),
            ("n 2\ne 0 1 7\n", 2),
            ("n 2\nn 3\n", 2),
        ];
        for (text, line) in cases {
            match load_graph(text.as_bytes()) {
                Err(GraphError::Parse { line: l, .. }) => assert_eq!(l, line, "{text:?}"),
                other => panic!("expected parse error for {text:?}, got {other:?}"),
            }
        }
        assert!(load_graph("n 2\nw 0 1.0\n".as_bytes()).is_err());
        assert!(load_graph("".as_bytes()).is_err());
    }
}
