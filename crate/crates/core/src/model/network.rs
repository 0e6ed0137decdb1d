use ndarray::{s, Array1, Array2, ArrayView2, Axis, NdFloat};
use num_traits::NumCast;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::codec::{accddoa_from_frames, accddoa_to_frames, encode_mt, Activation, AdpitTargets, MtTensor, OutputMethod};
use crate::error::{Error, Result};
use crate::event::EventRecord;
use crate::features::FeatureTensor;
use crate::losses::{adpit_loss, mt_loss, AdpitConfig, LossResult};

use super::ModelConfig;

pub(crate) fn cast<F: NdFloat>(x: f64) -> F {
    <F as NumCast>::from(x).expect("representable")
}

pub(crate) fn to_f64<F: NdFloat>(x: F) -> f64 {
    x.to_f64().expect("representable")
}

/// Affine layer `x W + b` with `W` of shape in x out.
#[derive(Debug, Clone, PartialEq)]
pub struct Dense<F> {
    pub weight: Array2<F>,
    pub bias: Array1<F>,
}

impl<F: NdFloat> Dense<F> {
    fn zeros(inputs: usize, outputs: usize) -> Self {
        Self {
            weight: Array2::zeros((inputs, outputs)),
            bias: Array1::zeros(outputs),
        }
    }

    pub(crate) fn zeros_like(&self) -> Self {
        let (i, o) = self.weight.dim();
        Self::zeros(i, o)
    }
}

/// Parameter gradients, one entry per layer.
#[derive(Debug, Clone, PartialEq)]
pub struct Gradients<F> {
    pub layers: Vec<Dense<F>>,
}

/// Inputs are standardized with fixed per-dimension statistics, passed
/// through ReLU hidden layers and a linear layer whose columns get the
/// activations of the output branches.
#[derive(Debug, Clone, PartialEq)]
pub struct Model<F = f32> {
    pub config: ModelConfig,
    pub input_mean: Array1<F>,
    /// Reciprocal standard deviation.
    pub input_scale: Array1<F>,
    pub layers: Vec<Dense<F>>,
}

/// Deterministic initialization: weights uniform in +-sqrt(6 / fan_in) for
/// ReLU layers and +-sqrt(1 / fan_in) for the output layer, zero biases.
pub fn init_model<F: NdFloat>(cfg: &ModelConfig) -> Result<Model<F>> {
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut widths = vec![cfg.input_width()];
    widths.extend(&cfg.hidden);
    widths.push(cfg.output_spec().total_width());
    let last = widths.len() - 2;
    let layers = widths
        .windows(2)
        .enumerate()
        .map(|(i, w)| {
            let gain = if i == last { 1.0 } else { 6.0 };
            let bound = (gain / w[0] as f64).sqrt();
            let mut layer = Dense::zeros(w[0], w[1]);
            layer
                .weight
                .iter_mut()
                .for_each(|v| *v = cast(rng.random_range(-bound..bound)));
            layer
        })
        .collect();
    let d = cfg.input_width();
    Ok(Model {
        config: cfg.clone(),
        input_mean: Array1::zeros(d),
        input_scale: Array1::ones(d),
        layers,
    })
}

fn activation_value<F: NdFloat>(act: Activation, z: F) -> F {
    match act {
        Activation::Tanh => z.tanh(),
        Activation::Relu => z.max(F::zero()),
        Activation::Linear => z,
    }
}

/// Derivative from the pre-activation `z` and output `y`.
fn activation_slope<F: NdFloat>(act: Activation, z: F, y: F) -> F {
    match act {
        Activation::Tanh => F::one() - y * y,
        Activation::Relu => {
            if z > F::zero() {
                F::one()
            } else {
                F::zero()
            }
        }
        Activation::Linear => F::one(),
    }
}

struct Trace<F> {
    /// Input to each layer (standardized input, then hidden activations).
    inputs: Vec<Array2<F>>,
    /// Pre-activations of the hidden layers.
    hidden_z: Vec<Array2<F>>,
    out_z: Array2<F>,
    out: Array2<F>,
}

impl<F: NdFloat> Model<F> {
    /// Stacks `2 * context + 1` feature frames centered on each label frame
    /// (zero outside the clip) into one row per label frame.
    pub fn inputs(&self, features: &FeatureTensor) -> Result<Array2<F>> {
        let cfg = &self.config;
        if features.spec != cfg.input_spec() {
            return Err(Error::ShapeMismatch(format!(
                "features {:?} do not match model input {:?}",
                features.spec.shape(),
                cfg.input_spec().shape()
            )));
        }
        let (channels, frames, bins) = features.spec.shape();
        let stride = cfg.stride();
        let block = channels * bins;
        let mut x = Array2::zeros((cfg.label_frames, cfg.input_width()));
        for t in 0..cfg.label_frames {
            let center = (t * stride + stride / 2) as isize;
            for o in 0..(2 * cfg.context + 1) {
                let f = center + o as isize - cfg.context as isize;
                if f < 0 || f as usize >= frames {
                    continue;
                }
                let frame = features.data.index_axis(Axis(1), f as usize);
                let mut row = x.slice_mut(s![t, o * block..(o + 1) * block]);
                for (dst, src) in row.iter_mut().zip(frame.iter()) {
                    *dst = cast(*src as f64);
                }
            }
        }
        Ok(x)
    }

    /// Sets the input standardization from the rows of `batches`.
    pub fn fit_normalization(&mut self, batches: &[ArrayView2<F>]) {
        let d = self.config.input_width();
        let mut sum = vec![0f64; d];
        let mut sq = vec![0f64; d];
        let mut n = 0usize;
        for b in batches {
            for row in b.rows() {
                for (j, v) in row.iter().enumerate() {
                    let v = to_f64(*v);
                    sum[j] += v;
                    sq[j] += v * v;
                }
                n += 1;
            }
        }
        if n == 0 {
            return;
        }
        for j in 0..d {
            let mean = sum[j] / n as f64;
            let var = (sq[j] / n as f64 - mean * mean).max(0.0);
            self.input_mean[j] = cast(mean);
            self.input_scale[j] = cast(1.0 / (var.sqrt() + 1e-6));
        }
    }

    fn check_width(&self, x: &ArrayView2<F>) -> Result<()> {
        if x.ncols() != self.config.input_width() {
            return Err(Error::ShapeMismatch(format!(
                "input width {}, model expects {}",
                x.ncols(),
                self.config.input_width()
            )));
        }
        Ok(())
    }

    fn trace(&self, x: ArrayView2<F>, masks: Option<&[Array2<F>]>) -> Trace<F> {
        let mut h = (&x - &self.input_mean) * &self.input_scale;
        let mut inputs = Vec::with_capacity(self.layers.len());
        let mut hidden_z = Vec::with_capacity(self.layers.len() - 1);
        let last = self.layers.len() - 1;
        for (l, layer) in self.layers[..last].iter().enumerate() {
            if let Some(m) = masks {
                h *= &m[l];
            }
            let z = h.dot(&layer.weight) + &layer.bias;
            let a = z.mapv(|v| v.max(F::zero()));
            inputs.push(h);
            hidden_z.push(z);
            h = a;
        }
        if let Some(m) = masks {
            h *= &m[last];
        }
        let head = &self.layers[last];
        let out_z = h.dot(&head.weight) + &head.bias;
        inputs.push(h);
        let mut out = out_z.clone();
        let spec = self.config.output_spec();
        let mut start = 0;
        for (w, act) in spec.widths.iter().zip(&spec.activations) {
            out.slice_mut(s![.., start..start + w])
                .mapv_inplace(|v| activation_value(*act, v));
            start += w;
        }
        Trace {
            inputs,
            hidden_z,
            out_z,
            out,
        }
    }

    /// One output row per input row.
    pub fn forward(&self, x: ArrayView2<F>) -> Result<Array2<F>> {
        self.check_width(&x)?;
        Ok(self.trace(x, None).out)
    }

    /// Head outputs for one clip: label frames x output width.
    pub fn predict(&self, features: &FeatureTensor) -> Result<Array2<f64>> {
        let x = self.inputs(features)?;
        Ok(self.forward(x.view())?.mapv(to_f64))
    }

    /// Loss of the rows of `x` against `targets` and its exact gradient with
    /// respect to every parameter.
    pub fn loss_and_grads(&self, x: ArrayView2<F>, targets: &Targets) -> Result<(f64, Gradients<F>)> {
        self.loss_and_grads_masked(x, targets, None)
    }

    /// Inverted-dropout masks, one per layer input, drawn from `rng`.
    pub fn dropout_masks(&self, rows: usize, rng: &mut ChaCha8Rng) -> Vec<Array2<F>> {
        let cfg = &self.config;
        self.layers
            .iter()
            .enumerate()
            .map(|(l, layer)| {
                let p = if l == 0 { cfg.input_dropout } else { cfg.dropout };
                let keep = cast::<F>(1.0 / (1.0 - p));
                Array2::from_shape_fn((rows, layer.weight.nrows()), |_| {
                    if p > 0.0 && rng.random_bool(p) {
                        F::zero()
                    } else {
                        keep
                    }
                })
            })
            .collect()
    }

    /// As [`Model::loss_and_grads`] with dropout masks from [`Model::dropout_masks`].
    pub fn loss_and_grads_masked(
        &self,
        x: ArrayView2<F>,
        targets: &Targets,
        masks: Option<&[Array2<F>]>,
    ) -> Result<(f64, Gradients<F>)> {
        self.check_width(&x)?;
        if x.nrows() == 0 {
            return Err(Error::EmptyDataset);
        }
        if let Some(m) = masks {
            let ok = m.len() == self.layers.len()
                && m.iter().zip(&self.layers).all(|(m, l)| m.dim() == (x.nrows(), l.weight.nrows()));
            if !ok {
                return Err(Error::ShapeMismatch("dropout masks".into()));
            }
        }
        let tr = self.trace(x, masks);
        let loss = output_loss(&self.config, tr.out.mapv(to_f64).view(), targets)?;
        let mut dz: Array2<F> = loss.grad.mapv(cast);
        let spec = self.config.output_spec();
        let mut start = 0;
        for (w, act) in spec.widths.iter().zip(&spec.activations) {
            for r in 0..dz.nrows() {
                for j in start..start + w {
                    dz[[r, j]] *= activation_slope(*act, tr.out_z[[r, j]], tr.out[[r, j]]);
                }
            }
            start += w;
        }
        let mut grads: Vec<Dense<F>> = Vec::with_capacity(self.layers.len());
        for l in (0..self.layers.len()).rev() {
            let input = &tr.inputs[l];
            grads.push(Dense {
                weight: input.t().dot(&dz),
                bias: dz.sum_axis(Axis(0)),
            });
            if l > 0 {
                let mut dh = dz.dot(&self.layers[l].weight.t());
                if let Some(m) = masks {
                    dh *= &m[l];
                }
                let z = &tr.hidden_z[l - 1];
                dz = Array2::from_shape_fn(dh.raw_dim(), |(r, j)| {
                    if z[[r, j]] > F::zero() {
                        dh[[r, j]]
                    } else {
                        F::zero()
                    }
                });
            }
        }
        grads.reverse();
        Ok((loss.value, Gradients { layers: grads }))
    }

    /// Named parameter arrays in a fixed order.
    pub fn named_params(&self) -> Vec<(String, Vec<usize>, Vec<F>)> {
        let mut out = vec![
            ("input.mean".to_string(), vec![self.input_mean.len()], self.input_mean.to_vec()),
            ("input.scale".to_string(), vec![self.input_scale.len()], self.input_scale.to_vec()),
        ];
        for (i, l) in self.layers.iter().enumerate() {
            out.push((format!("layer{i}.weight"), l.weight.shape().to_vec(), l.weight.iter().copied().collect()));
            out.push((format!("layer{i}.bias"), vec![l.bias.len()], l.bias.to_vec()));
        }
        out
    }

    /// Inverse of [`Model::named_params`] for an architecture built from `config`.
    pub fn from_named_params(config: &ModelConfig, params: &[(String, Vec<usize>, Vec<F>)]) -> Result<Self> {
        let mut model = init_model::<F>(config)?;
        let expected = model.named_params();
        if expected.len() != params.len() {
            return Err(Error::Checkpoint(format!(
                "{} parameter arrays, architecture needs {}",
                params.len(),
                expected.len()
            )));
        }
        for ((name, dims, _), (got_name, got_dims, _)) in expected.iter().zip(params) {
            if name != got_name || dims != got_dims {
                return Err(Error::Checkpoint(format!(
                    "parameter {got_name} {got_dims:?}, expected {name} {dims:?}"
                )));
            }
        }
        model.input_mean = Array1::from(params[0].2.clone());
        model.input_scale = Array1::from(params[1].2.clone());
        for (i, layer) in model.layers.iter_mut().enumerate() {
            let (w, b) = (&params[2 + 2 * i], &params[3 + 2 * i]);
            layer.weight = Array2::from_shape_vec((w.1[0], w.1[1]), w.2.clone())
                .map_err(|e| Error::Checkpoint(e.to_string()))?;
            layer.bias = Array1::from(b.2.clone());
        }
        Ok(model)
    }
}

/// Training targets for a run of label frames.
#[derive(Debug, Clone, PartialEq)]
pub enum Targets {
    Accddoa(AdpitTargets),
    MultiTask(MtTensor),
}

impl Targets {
    pub fn from_events(method: OutputMethod, events: &[EventRecord], frames: usize) -> Result<Self> {
        Ok(match method {
            OutputMethod::MultiAccddoa => Targets::Accddoa(AdpitTargets::from_events(events, frames)?),
            OutputMethod::MultiTask => Targets::MultiTask(encode_mt(events, frames)?),
        })
    }

    pub fn frames(&self) -> usize {
        match self {
            Targets::Accddoa(t) => t.frames(),
            Targets::MultiTask(t) => t.frames(),
        }
    }

    /// Concatenates along the frame axis; all parts must be the same kind.
    pub fn concat(parts: &[&Targets]) -> Result<Self> {
        let mixed = || Error::ShapeMismatch("mixed target kinds".into());
        match parts.first() {
            None => Err(Error::EmptyDataset),
            Some(Targets::Accddoa(_)) => {
                let v = parts
                    .iter()
                    .map(|p| match p {
                        Targets::Accddoa(t) => Ok(t),
                        _ => Err(mixed()),
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(Targets::Accddoa(AdpitTargets::concat(&v)))
            }
            Some(Targets::MultiTask(_)) => {
                let v = parts
                    .iter()
                    .map(|p| match p {
                        Targets::MultiTask(t) => Ok(t),
                        _ => Err(mixed()),
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(Targets::MultiTask(MtTensor::concat(&v)))
            }
        }
    }
}

/// Loss of head outputs (frames x width) and its gradient in the same layout.
pub fn output_loss(cfg: &ModelConfig, output: ArrayView2<f64>, targets: &Targets) -> Result<LossResult<Array2<f64>>> {
    if output.nrows() != targets.frames() {
        return Err(Error::ShapeMismatch(format!(
            "{} output frames, {} target frames",
            output.nrows(),
            targets.frames()
        )));
    }
    match (cfg.method, targets) {
        (OutputMethod::MultiAccddoa, Targets::Accddoa(t)) => {
            let raw = accddoa_from_frames(output)?;
            let adpit = AdpitConfig {
                base: cfg.loss,
                dist_weight: cfg.dist_weight,
            };
            let r = adpit_loss(raw.view(), t, &adpit)?;
            Ok(LossResult {
                value: r.value,
                grad: accddoa_to_frames(r.grad.view()),
            })
        }
        (OutputMethod::MultiTask, Targets::MultiTask(t)) => {
            let pred = MtTensor::from_frames(output)?;
            let r = mt_loss(&pred, t, cfg.loss)?;
            Ok(LossResult {
                value: r.value,
                grad: r.grad.to_frames(),
            })
        }
        _ => Err(Error::ShapeMismatch("targets do not match the output method".into())),
    }
}
