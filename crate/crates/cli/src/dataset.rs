use std::fs::File;
use std::io::BufReader;
use std::path::Path;
use std::sync::Arc;

use gcn_mwis::graph::{load_graph, save_graph};
use gcn_mwis::train::{generate_training_set, parse_dataset_spec, GraphFamily, Instance};
use serde::{Deserialize, Serialize};

use crate::error::CliError;
use crate::output::Run;

pub const INDEX_FILE: &str = "index.csv";

#[derive(Debug, Serialize, Deserialize)]
struct IndexRow {
    id: usize,
    family: GraphFamily,
    n: usize,
    expected_degree: f64,
    file: String,
}

/// Parses and instantiates a dataset description. The seed given inside the
/// description wins over `default_seed`.
pub fn from_spec(text: &str, default_seed: u64) -> Result<(Vec<Instance>, u64), CliError> {
    let (spec, seed) = parse_dataset_spec(text).map_err(|e| CliError::Usage(format!("dataset `{text}`: {e}")))?;
    let seed = seed.unwrap_or(default_seed);
    Ok((generate_training_set(&spec, seed)?, seed))
}

/// One graph file per instance under `graphs/`, plus an index with the
/// generating parameters.
pub fn write(run: &mut Run, data: &[Instance]) -> Result<(), CliError> {
    let mut rows = Vec::with_capacity(data.len());
    for inst in data {
        let file = format!("graphs/graph_{:05}.txt", inst.id);
        run.write(&file, |w| Ok(save_graph(&inst.graph, Some(&inst.utilities), w)?))?;
        rows.push(IndexRow { id: inst.id, family: inst.family, n: inst.n, expected_degree: inst.expected_degree, file });
    }
    run.write(INDEX_FILE, |w| {
        let mut csv = csv::Writer::from_writer(w);
        for r in &rows {
            csv.serialize(r)?;
        }
        csv.flush()?;
        Ok(())
    })?;
    Ok(())
}

pub fn load(dir: &Path) -> Result<Vec<Instance>, CliError> {
    let index = dir.join(INDEX_FILE);
    let file = File::open(&index).map_err(|e| CliError::Io(format!("{}: {e}", index.display())))?;
    let mut rdr = csv::Reader::from_reader(file);
    let mut out = Vec::new();
    for row in rdr.deserialize::<IndexRow>() {
        let row = row?;
        let path = dir.join(&row.file);
        let f = File::open(&path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        let (graph, utilities) = load_graph(BufReader::new(f)).map_err(|e| match e {
            gcn_mwis::GraphError::Io(e) => CliError::Io(format!("{}: {e}", path.display())),
            other => CliError::Usage(format!("{}: {other}", path.display())),
        })?;
        let utilities = utilities.ok_or_else(|| CliError::Usage(format!("{} has no utilities", path.display())))?;
        if graph.num_nodes() != row.n {
            return Err(CliError::Usage(format!("{}: index says {} nodes, file has {}", path.display(), row.n, graph.num_nodes())));
        }
        out.push(Instance {
            id: row.id,
            family: row.family,
            n: row.n,
            expected_degree: row.expected_degree,
            graph: Arc::new(graph),
            utilities,
        });
    }
    Ok(out)
}
