use ndarray::{Array2, ArrayView2};

use super::{Graph, GraphError};

/// `d_v^{-1/2}` per node, with 0 for isolated nodes.
pub fn inv_sqrt_degrees(g: &Graph) -> Vec<f64> {
    (0..g.num_nodes())
        .map(|v| match g.degree(v) {
            0 => 0.0,
            d => 1.0 / (d as f64).sqrt(),
        })
        .collect()
}

/// Applies the symmetric normalized Laplacian `I - D^{-1/2} A D^{-1/2}` to the
/// node-feature matrix `x` (one row per node).
///
/// Row `v` of the result is `x[v] - sum_{i in N(v)} d_v^{-1/2} d_i^{-1/2} x[i]`;
/// an isolated node keeps its row unchanged.
pub fn laplacian_apply(g: &Graph, x: ArrayView2<'_, f64>) -> Result<Array2<f64>, GraphError> {
    if x.nrows() != g.num_nodes() {
        return Err(GraphError::Dimension { expected: g.num_nodes(), got: x.nrows() });
    }
    let scale = inv_sqrt_degrees(g);
    let mut out = x.to_owned();
    for v in 0..g.num_nodes() {
        let mut row = out.row_mut(v);
        for &i in g.neighbors(v) {
            let c = scale[v] * scale[i];
            row.scaled_add(-c, &x.row(i));
        }
    }
    Ok(out)
}

/// Vector form of [`laplacian_apply`].
pub fn laplacian_apply_vec(g: &Graph, x: &[f64]) -> Result<Vec<f64>, GraphError> {
    if x.len() != g.num_nodes() {
        return Err(GraphError::Dimension { expected: g.num_nodes(), got: x.len() });
    }
    let scale = inv_sqrt_degrees(g);
    Ok((0..g.num_nodes())
        .map(|v| {
            let s: f64 = g.neighbors(v).iter().map(|&i| scale[i] * x[i]).sum();
            x[v] - scale[v] * s
        })
        .collect())
}
