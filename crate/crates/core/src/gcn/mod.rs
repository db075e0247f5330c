//! Graph convolutional network producing scalar node embeddings `z`.
//!
//! Each layer computes `X' = σ(X Θ0 + 𝓛 X Θ1)` with `𝓛` the symmetric
//! normalized Laplacian; hidden layers use a leaky ReLU and the output layer is
//! linear. Input and output are single columns.

mod backward;
mod forward;
mod io;
mod schedule;

pub use backward::gcn_backward;
pub use forward::{gcn_forward, gcn_forward_1layer, ForwardCache};
pub use io::{load_model, read_model_file, save_model, write_model_file, MODEL_VERSION};
pub use schedule::{gcn_schedule, gcn_schedule_with, normalized_input, GcnSchedule};

use ndarray::Array2;
use rand::Rng;
use thiserror::Error;

use crate::graph::GraphError;
use crate::mwis::SolverError;
use crate::rng::rng_from_seed;

pub const DEFAULT_LEAKY_SLOPE: f64 = 0.01;
pub const DEFAULT_HIDDEN: usize = 32;

#[derive(Debug, Error)]
pub enum GcnError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error("invalid parameters: {0}")]
    Parameter(String),
    #[error("non-finite value produced by layer {layer}")]
    NonFinite { layer: usize },
    #[error("cache does not match parameters: {0}")]
    Inconsistent(String),
    #[error("cannot load model: {0}")]
    Load(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// The two weight matrices of one layer, each `g_l × g_{l+1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct LayerParams {
    pub theta0: Array2<f64>,
    pub theta1: Array2<f64>,
}

impl LayerParams {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { theta0: Array2::zeros((rows, cols)), theta1: Array2::zeros((rows, cols)) }
    }
}

/// Trainable GCN parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct GcnParams {
    dims: Vec<usize>,
    layers: Vec<LayerParams>,
    leaky_slope: f64,
}

/// Per-matrix gradients with the same shapes as [`GcnParams`].
#[derive(Debug, Clone, PartialEq)]
pub struct GcnGradients {
    pub layers: Vec<LayerParams>,
}

/// `[1, hidden, ..., hidden, 1]` with `num_layers` weight layers.
pub fn default_dims(num_layers: usize, hidden: usize) -> Vec<usize> {
    let mut dims = vec![1];
    dims.extend(std::iter::repeat_n(hidden, num_layers.saturating_sub(1)));
    dims.push(1);
    dims
}

fn check_dims(dims: &[usize]) -> Result<(), GcnError> {
    if dims.len() < 2 {
        return Err(GcnError::Parameter("need at least one layer".into()));
    }
    if dims[0] != 1 || dims[dims.len() - 1] != 1 {
        return Err(GcnError::Parameter(format!("input and output widths must be 1, got {dims:?}")));
    }
    if dims.contains(&0) {
        return Err(GcnError::Parameter(format!("zero-width layer in {dims:?}")));
    }
    Ok(())
}

impl GcnParams {
    pub fn new(dims: Vec<usize>, layers: Vec<LayerParams>, leaky_slope: f64) -> Result<Self, GcnError> {
        check_dims(&dims)?;
        if !(leaky_slope > 0.0 && leaky_slope < 1.0) {
            return Err(GcnError::Parameter(format!("leaky slope {leaky_slope} outside (0, 1)")));
        }
        if layers.len() != dims.len() - 1 {
            return Err(GcnError::Parameter(format!(
                "{} layers given for dims {dims:?}",
                layers.len()
            )));
        }
        for (l, layer) in layers.iter().enumerate() {
            let shape = (dims[l], dims[l + 1]);
            for m in [&layer.theta0, &layer.theta1] {
                if m.dim() != shape {
                    return Err(GcnError::Parameter(format!(
                        "layer {l} matrix has shape {:?}, expected {shape:?}",
                        m.dim()
                    )));
                }
                if m.iter().any(|v| !v.is_finite()) {
                    return Err(GcnError::Parameter(format!("layer {l} has non-finite entries")));
                }
            }
        }
        Ok(Self { dims, layers, leaky_slope })
    }

    /// Single-layer model with scalar weights.
    pub fn scalar(theta0: f64, theta1: f64) -> Self {
        let layer = LayerParams {
            theta0: Array2::from_elem((1, 1), theta0),
            theta1: Array2::from_elem((1, 1), theta1),
        };
        Self { dims: vec![1, 1], layers: vec![layer], leaky_slope: DEFAULT_LEAKY_SLOPE }
    }

    /// `θ0 = 1, θ1 = 0`: the embedding reproduces its input.
    pub fn identity() -> Self {
        Self::scalar(1.0, 0.0)
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn num_layers(&self) -> usize {
        self.layers.len()
    }

    pub fn layers(&self) -> &[LayerParams] {
        &self.layers
    }

    pub fn leaky_slope(&self) -> f64 {
        self.leaky_slope
    }

    pub fn num_parameters(&self) -> usize {
        self.layers.iter().map(|l| 2 * l.theta0.len()).sum()
    }

    /// All entries in a fixed order: per layer, `Θ0` row-major then `Θ1`.
    pub fn values(&self) -> impl Iterator<Item = f64> + '_ {
        self.layers.iter().flat_map(|l| l.theta0.iter().chain(l.theta1.iter())).copied()
    }

    pub fn values_mut(&mut self) -> impl Iterator<Item = &mut f64> + '_ {
        self.layers.iter_mut().flat_map(|l| l.theta0.iter_mut().chain(l.theta1.iter_mut()))
    }

    pub fn zero_gradients(&self) -> GcnGradients {
        GcnGradients {
            layers: self.layers.iter().map(|l| LayerParams::zeros(l.theta0.nrows(), l.theta0.ncols())).collect(),
        }
    }
}

impl GcnGradients {
    /// Same ordering as [`GcnParams::values`].
    pub fn values(&self) -> impl Iterator<Item = f64> + '_ {
        self.layers.iter().flat_map(|l| l.theta0.iter().chain(l.theta1.iter())).copied()
    }

    pub fn add_scaled(&mut self, other: &GcnGradients, scale: f64) {
        for (a, b) in self.layers.iter_mut().zip(&other.layers) {
            a.theta0.scaled_add(scale, &b.theta0);
            a.theta1.scaled_add(scale, &b.theta1);
        }
    }
}

/// Glorot-uniform initialization: entries uniform in `±sqrt(6 / (g_l + g_{l+1}))`.
pub fn glorot_init(dims: &[usize], leaky_slope: f64, seed: u64) -> Result<GcnParams, GcnError> {
    check_dims(dims)?;
    let mut rng = rng_from_seed(seed);
    let layers = dims
        .windows(2)
        .map(|d| {
            let bound = (6.0 / (d[0] + d[1]) as f64).sqrt();
            let mut draw = || Array2::from_shape_simple_fn((d[0], d[1]), || rng.random_range(-bound..=bound));
            let theta0 = draw();
            let theta1 = draw();
            LayerParams { theta0, theta1 }
        })
        .collect();
    GcnParams::new(dims.to_vec(), layers, leaky_slope)
}

/// Scalar embedding per node.
#[derive(Debug, Clone, PartialEq)]
pub struct Embedding(pub Vec<f64>);

impl Embedding {
    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn glorot_scalar_bounds() {
        for seed in 0..50 {
            let p = glorot_init(&[1, 1], DEFAULT_LEAKY_SLOPE, seed).unwrap();
            for v in p.values() {
                assert!(v.abs() <= 3f64.sqrt());
            }
        }
    }

    #[test]
    fn glorot_is_deterministic() {
        let a = glorot_init(&[1, 32, 1], 0.01, 5).unwrap();
        assert_eq!(a, glorot_init(&[1, 32, 1], 0.01, 5).unwrap());
        assert_ne!(a, glorot_init(&[1, 32, 1], 0.01, 6).unwrap());
    }

    #[test]
    fn glorot_shapes() {
        let p = glorot_init(&[1, 32, 1], 0.01, 1).unwrap();
        assert_eq!(p.layers()[0].theta0.dim(), (1, 32));
        assert_eq!(p.layers()[0].theta1.dim(), (1, 32));
        assert_eq!(p.layers()[1].theta0.dim(), (32, 1));
        assert_eq!(p.layers()[1].theta1.dim(), (32, 1));
        assert_eq!(p.num_parameters(), 128);
    }

    #[test]
    fn invalid_dims_rejected() {
        assert!(glorot_init(&[1], 0.01, 0).is_err());
        assert!(glorot_init(&[2, 1], 0.01, 0).is_err());
        assert!(glorot_init(&[1, 0, 1], 0.01, 0).is_err());
        assert!(glorot_init(&[1, 1], 1.5, 0).is_err());
    }

    #[test]
    fn default_dims_shape() {
        assert_eq!(default_dims(1, 32), vec![1, 1]);
        assert_eq!(default_dims(3, 32), vec![1, 32, 32, 1]);
    }
}
