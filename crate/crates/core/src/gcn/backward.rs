use ndarray::Array2;

use super::forward::leaky_grad;
use super::{ForwardCache, GcnError, GcnGradients, GcnParams, LayerParams};
use crate::graph::laplacian_apply;

/// Reverse-mode gradients of a scalar loss with respect to every `Θ` matrix,
/// given `∂loss/∂z`.
///
/// Uses `𝓛ᵀ = 𝓛`, so the gradient flowing into `X^l` through the shifted term
/// is `𝓛 (δ Θ1ᵀ)`.
pub fn gcn_backward(p: &GcnParams, cache: &ForwardCache<'_>, grad_z: &[f64]) -> Result<GcnGradients, GcnError> {
    if cache.dims != p.dims() {
        return Err(GcnError::Inconsistent(format!(
            "cache dims {:?} vs params dims {:?}",
            cache.dims,
            p.dims()
        )));
    }
    let n = cache.graph.num_nodes();
    if grad_z.len() != n {
        return Err(GcnError::Inconsistent(format!("gradient length {} for {n} nodes", grad_z.len())));
    }
    let layers = p.num_layers();
    if cache.pre_activations.len() != layers || cache.activations.len() != layers + 1 {
        return Err(GcnError::Inconsistent("cache is incomplete".into()));
    }
    let mut grads: Vec<LayerParams> = Vec::with_capacity(layers);
    let mut upstream = Array2::from_shape_vec((n, 1), grad_z.to_vec()).expect("column shape");
    for l in (0..layers).rev() {
        let layer = &p.layers()[l];
        let delta = if l == layers - 1 {
            upstream
        } else {
            let pre = &cache.pre_activations[l];
            let slope = p.leaky_slope();
            let mut d = upstream;
            d.zip_mut_with(pre, |g, &x| *g *= leaky_grad(x, slope));
            d
        };
        let theta0 = cache.activations[l].t().dot(&delta);
        let theta1 = cache.shifted[l].t().dot(&delta);
        grads.push(LayerParams { theta0, theta1 });
        if l > 0 {
            let through_shift = laplacian_apply(cache.graph, delta.dot(&layer.theta1.t()).view())?;
            upstream = delta.dot(&layer.theta0.t()) + through_shift;
        } else {
            upstream = delta;
        }
    }
    grads.reverse();
    Ok(GcnGradients { layers: grads })
}
