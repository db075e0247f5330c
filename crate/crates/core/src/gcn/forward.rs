use ndarray::{Array2, ArrayView2};

use super::{Embedding, GcnError, GcnParams};
use crate::graph::{inv_sqrt_degrees, laplacian_apply, Graph, GraphError};

/// Intermediate values of a forward pass, kept for the backward pass.
#[derive(Debug, Clone)]
pub struct ForwardCache<'g> {
    pub graph: &'g Graph,
    /// `X^0 ..= X^L`.
    pub activations: Vec<Array2<f64>>,
    /// `𝓛 X^l` for each layer input.
    pub shifted: Vec<Array2<f64>>,
    /// Layer outputs before the activation.
    pub pre_activations: Vec<Array2<f64>>,
    pub dims: Vec<usize>,
}

pub(crate) fn leaky(x: f64, slope: f64) -> f64 {
    if x > 0.0 {
        x
    } else {
        slope * x
    }
}

pub(crate) fn leaky_grad(x: f64, slope: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else {
        slope
    }
}

pub fn gcn_forward<'g>(
    p: &GcnParams,
    g: &'g Graph,
    x0: &[f64],
) -> Result<(Embedding, ForwardCache<'g>), GcnError> {
    let n = g.num_nodes();
    if x0.len() != n {
        return Err(GraphError::Dimension { expected: n, got: x0.len() }.into());
    }
    if x0.iter().any(|v| !v.is_finite()) {
        return Err(GcnError::NonFinite { layer: 0 });
    }
    let last = p.num_layers() - 1;
    let mut x = Array2::from_shape_vec((n, 1), x0.to_vec()).expect("column shape");
    let mut cache = ForwardCache {
        graph: g,
        activations: Vec::with_capacity(p.num_layers() + 1),
        shifted: Vec::with_capacity(p.num_layers()),
        pre_activations: Vec::with_capacity(p.num_layers()),
        dims: p.dims().to_vec(),
    };
    for (l, layer) in p.layers().iter().enumerate() {
        let lx = laplacian_apply(g, x.view())?;
        let pre = x.dot(&layer.theta0) + lx.dot(&layer.theta1);
        let out = if l == last { pre.clone() } else { pre.mapv(|v| leaky(v, p.leaky_slope())) };
        if out.iter().any(|v| !v.is_finite()) {
            return Err(GcnError::NonFinite { layer: l });
        }
        cache.activations.push(x);
        cache.shifted.push(lx);
        cache.pre_activations.push(pre);
        x = out;
    }
    let z = Embedding(column(x.view()));
    cache.activations.push(x);
    Ok((z, cache))
}

fn column(x: ArrayView2<'_, f64>) -> Vec<f64> {
    x.column(0).to_vec()
}

/// Per-node evaluation of a single linear layer using only neighbor data:
/// `z(v) = u(v) θ0 + (u(v) - Σ_{i∈N(v)} d_v^{-1/2} d_i^{-1/2} u(i)) θ1`.
pub fn gcn_forward_1layer(theta0: f64, theta1: f64, g: &Graph, u: &[f64]) -> Result<Embedding, GcnError> {
    let n = g.num_nodes();
    if u.len() != n {
        return Err(GraphError::Dimension { expected: n, got: u.len() }.into());
    }
    let scale = inv_sqrt_degrees(g);
    let z = (0..n)
        .map(|v| {
            let mut shifted = u[v];
            for &i in g.neighbors(v) {
                shifted -= scale[v] * scale[i] * u[i];
            }
            u[v] * theta0 + shifted * theta1
        })
        .collect::<Vec<_>>();
    if z.iter().any(|v| !v.is_finite()) {
        return Err(GcnError::NonFinite { layer: 0 });
    }
    Ok(Embedding(z))
}
