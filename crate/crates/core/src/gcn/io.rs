//! JSON model files: `{version, dims, leaky_slope, layers: [{theta0, theta1}]}`
//! with matrices stored row-major. Floats are written in their shortest exact
//! decimal form, so a save/load cycle is lossless.

use std::fs;
use std::io::{Read, Write};
use std::path::Path;

use ndarray::Array2;
use serde::{Deserialize, Serialize};

use super::{GcnError, GcnParams, LayerParams};

pub const MODEL_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
struct ModelFile {
    version: u32,
    dims: Vec<usize>,
    leaky_slope: f64,
    layers: Vec<LayerFile>,
}

#[derive(Serialize, Deserialize)]
struct LayerFile {
    theta0: Vec<f64>,
    theta1: Vec<f64>,
}

pub fn save_model<W: Write>(p: &GcnParams, out: W) -> Result<(), GcnError> {
    let file = ModelFile {
        version: MODEL_VERSION,
        dims: p.dims().to_vec(),
        leaky_slope: p.leaky_slope(),
        layers: p
            .layers()
            .iter()
            .map(|l| LayerFile { theta0: l.theta0.iter().copied().collect(), theta1: l.theta1.iter().copied().collect() })
            .collect(),
    };
    serde_json::to_writer_pretty(out, &file).map_err(|e| GcnError::Load(e.to_string()))
}

pub fn load_model<R: Read>(input: R) -> Result<GcnParams, GcnError> {
    let file: ModelFile = serde_json::from_reader(input).map_err(|e| GcnError::Load(e.to_string()))?;
    if file.version != MODEL_VERSION {
        return Err(GcnError::Load(format!("unsupported model version {}", file.version)));
    }
    if file.dims.len() != file.layers.len() + 1 {
        return Err(GcnError::Load(format!("{} layers for dims {:?}", file.layers.len(), file.dims)));
    }
    let layers = file
        .layers
        .into_iter()
        .enumerate()
        .map(|(l, layer)| {
            let shape = (file.dims[l], file.dims[l + 1]);
            let matrix = |values: Vec<f64>| {
                Array2::from_shape_vec(shape, values)
                    .map_err(|_| GcnError::Load(format!("layer {l} does not match shape {shape:?}")))
            };
            Ok(LayerParams { theta0: matrix(layer.theta0)?, theta1: matrix(layer.theta1)? })
        })
        .collect::<Result<Vec<_>, GcnError>>()?;
    GcnParams::new(file.dims, layers, file.leaky_slope).map_err(|e| GcnError::Load(e.to_string()))
}

/// Writes through a temporary file and renames it into place.
pub fn write_model_file(path: &Path, p: &GcnParams) -> Result<(), GcnError> {
    let mut buf = Vec::new();
    save_model(p, &mut buf)?;
    buf.push(b'\n');
    let tmp = path.with_extension("tmp");
    fs::write(&tmp, &buf)?;
    fs::rename(&tmp, path)?;
    Ok(())
}

pub fn read_model_file(path: &Path) -> Result<GcnParams, GcnError> {
    load_model(fs::File::open(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gcn::glorot_init;

    #[test]
    fn roundtrip_is_exact() {
        let p = glorot_init(&[1, 32, 32, 1], 0.01, 77).unwrap();
        let mut buf = Vec::new();
        save_model(&p, &mut buf).unwrap();
        let q = load_model(buf.as_slice()).unwrap();
        assert_eq!(p, q);
        assert!(p.values().zip(q.values()).all(|(a, b)| a.to_bits() == b.to_bits()));
    }

    #[test]
    fn truncated_file_fails() {
        let p = glorot_init(&[1, 4, 1], 0.01, 1).unwrap();
        let mut buf = Vec::new();
        save_model(&p, &mut buf).unwrap();
        buf.truncate(buf.len() / 2);
        assert!(matches!(load_model(buf.as_slice()), Err(GcnError::Load(_))));
    }

    #[test]
    fn version_and_shape_checked() {
        let bad_version = r#"{"version":9,"dims":[1,1],"leaky_slope":0.01,"layers":[{"theta0":[1],"theta1":[0]}]}"#;
        assert!(load_model(bad_version.as_bytes()).is_err());
        let bad_shape = r#"{"version":1,"dims":[1,2,1],"leaky_slope":0.01,"layers":[{"theta0":[1],"theta1":[0,1]},{"theta0":[1,1],"theta1":[0,0]}]}"#;
        assert!(load_model(bad_shape.as_bytes()).is_err());
        let good = r#"{"version":1,"dims":[1,1],"leaky_slope":0.01,"layers":[{"theta0":[1],"theta1":[0]}]}"#;
        assert_eq!(load_model(good.as_bytes()).unwrap(), GcnParams::identity());
    }
}
