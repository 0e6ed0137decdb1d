use ndarray::NdFloat;

use crate::error::{Error, Result};

use super::network::{cast, Dense, Gradients, Model};
use super::ModelConfig;

/// First and second moments per parameter plus the step count.
#[derive(Debug, Clone, PartialEq)]
pub struct AdamState<F> {
    pub step: u64,
    pub m: Vec<Dense<F>>,
    pub v: Vec<Dense<F>>,
}

impl<F: NdFloat> AdamState<F> {
    pub fn new(model: &Model<F>) -> Self {
        let zeros: Vec<Dense<F>> = model.layers.iter().map(Dense::zeros_like).collect();
        Self {
            step: 0,
            m: zeros.clone(),
            v: zeros,
        }
    }
}

/// Bias-corrected Adam update with the settings of `cfg`; weights also
/// shrink by `lr * weight_decay` per step.
pub fn adam_step<F: NdFloat>(model: &mut Model<F>, grads: &Gradients<F>, state: &mut AdamState<F>, cfg: &ModelConfig) -> Result<()> {
    let n = model.layers.len();
    if grads.layers.len() != n || state.m.len() != n {
        return Err(Error::ShapeMismatch("gradient/state layer count".into()));
    }
    for l in 0..n {
        if grads.layers[l].weight.dim() != model.layers[l].weight.dim()
            || grads.layers[l].bias.dim() != model.layers[l].bias.dim()
            || state.m[l].weight.dim() != model.layers[l].weight.dim()
        {
            return Err(Error::ShapeMismatch(format!("layer {l} shape")));
        }
    }
    state.step += 1;
    let (b1, b2): (F, F) = (cast(cfg.beta1), cast(cfg.beta2));
    let c1: F = cast(1.0 - cfg.beta1.powi(state.step as i32));
    let c2: F = cast(1.0 - cfg.beta2.powi(state.step as i32));
    let (lr, eps): (F, F) = (cast(cfg.lr), cast(cfg.eps));
    let one = F::one();
    let shrink = one - lr * cast::<F>(cfg.weight_decay);
    let update = |p: &mut F, g: F, m: &mut F, v: &mut F| {
        *m = b1 * *m + (one - b1) * g;
        *v = b2 * *v + (one - b2) * g * g;
        let m_hat = *m / c1;
        let v_hat = *v / c2;
        *p -= lr * m_hat / (v_hat.sqrt() + eps);
    };
    for l in 0..n {
        let layer = &mut model.layers[l];
        let (g, m, v) = (&grads.layers[l], &mut state.m[l], &mut state.v[l]);
        if cfg.weight_decay > 0.0 {
            layer.weight.mapv_inplace(|w| w * shrink);
        }
        ndarray::Zip::from(&mut layer.weight)
            .and(&g.weight)
            .and(&mut m.weight)
            .and(&mut v.weight)
            .for_each(|p, g, m, v| update(p, *g, m, v));
        ndarray::Zip::from(&mut layer.bias)
            .and(&g.bias)
            .and(&mut m.bias)
            .and(&mut v.bias)
            .for_each(|p, g, m, v| update(p, *g, m, v));
    }
    Ok(())
}
