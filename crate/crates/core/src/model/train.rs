use ndarray::{concatenate, Array2, Axis};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::audio::Audio;
use crate::codec::{accddoa_from_frames, decode_mt, DecodeConfig, MtTensor, OutputMethod};
use crate::error::{Error, Result};
use crate::event::{ClipSpec, EventRecord};
use crate::features::{extract, AudioFormat, FeatureTensor};

use super::adam::{adam_step, AdamState};
use super::checkpoint::{Checkpoint, RngState};
use super::network::{Model, Targets};

/// One training clip.
#[derive(Debug, Clone, PartialEq)]
pub struct Example {
    pub features: FeatureTensor,
    pub events: Vec<EventRecord>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EpochLog {
    pub epoch: usize,
    pub train_loss: f64,
    pub val_loss: f64,
}

pub const LOG_HEADER: &str = "epoch,train_loss,val_loss";

pub fn format_log(history: &[EpochLog]) -> String {
    let mut out = format!("{LOG_HEADER}\n");
    for h in history {
        out.push_str(&format!("{},{},{}\n", h.epoch, h.train_loss, h.val_loss));
    }
    out
}

#[derive(Debug, Clone)]
pub struct TrainOutcome {
    /// Parameters of the best validation epoch.
    pub model: Model<f32>,
    pub checkpoint: Checkpoint,
    pub history: Vec<EpochLog>,
    pub stopped_early: bool,
}

struct Prepared {
    inputs: Vec<Array2<f32>>,
    targets: Vec<Targets>,
}

fn prepare(model: &Model<f32>, set: &[Example]) -> Result<Prepared> {
    let cfg = &model.config;
    let mut inputs = Vec::with_capacity(set.len());
    let mut targets = Vec::with_capacity(set.len());
    for ex in set {
        inputs.push(model.inputs(&ex.features)?);
        targets.push(Targets::from_events(cfg.method, &ex.events, cfg.label_frames)?);
    }
    Ok(Prepared { inputs, targets })
}

fn batch(data: &Prepared, idx: &[usize]) -> Result<(Array2<f32>, Targets)> {
    let views: Vec<_> = idx.iter().map(|i| data.inputs[*i].view()).collect();
    let x = concatenate(Axis(0), &views).map_err(|e| Error::ShapeMismatch(e.to_string()))?;
    let t: Vec<&Targets> = idx.iter().map(|i| &data.targets[*i]).collect();
    Ok((x, Targets::concat(&t)?))
}

/// Frame-weighted mean loss over a prepared set.
fn evaluate(model: &Model<f32>, data: &Prepared) -> Result<f64> {
    let all: Vec<usize> = (0..data.inputs.len()).collect();
    let mut total = 0.0;
    let mut frames = 0usize;
    for chunk in all.chunks(model.config.batch_size) {
        let (x, t) = batch(data, chunk)?;
        let (loss, _) = model.loss_and_grads(x.view(), &t)?;
        total += loss * x.nrows() as f64;
        frames += x.nrows();
    }
    Ok(total / frames as f64)
}

/// Adam over shuffled clip batches. Input standardization is fitted on the
/// training set first. Stops when the validation loss has not improved for
/// more than `patience` epochs and keeps the best epoch's parameters.
pub fn train(
    mut model: Model<f32>,
    train_set: &[Example],
    val_set: &[Example],
    mut on_epoch: impl FnMut(&EpochLog),
) -> Result<TrainOutcome> {
    if train_set.is_empty() || val_set.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let cfg = model.config.clone();
    cfg.validate()?;
    let train_data = prepare(&model, train_set)?;
    let val_data = prepare(&model, val_set)?;
    let views: Vec<_> = train_data.inputs.iter().map(|x| x.view()).collect();
    model.fit_normalization(&views);

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(0x5eed));
    let mut state = AdamState::new(&model);
    let mut order: Vec<usize> = (0..train_set.len()).collect();
    let mut history = Vec::new();
    let mut best = (f64::INFINITY, model.clone(), 0usize, RngState::capture(&rng));
    let mut waited = 0;
    let mut stopped_early = false;
    for epoch in 1..=cfg.max_epochs {
        order.shuffle(&mut rng);
        let mut sum = 0.0;
        let mut frames = 0usize;
        for idx in order.chunks(cfg.batch_size) {
            let (x, t) = batch(&train_data, idx)?;
            let masks = (cfg.dropout > 0.0 || cfg.input_dropout > 0.0).then(|| model.dropout_masks(x.nrows(), &mut rng));
            let (loss, grads) = model.loss_and_grads_masked(x.view(), &t, masks.as_deref())?;
            adam_step(&mut model, &grads, &mut state, &cfg)?;
            sum += loss * x.nrows() as f64;
            frames += x.nrows();
        }
        let log = EpochLog {
            epoch,
            train_loss: sum / frames as f64,
            val_loss: evaluate(&model, &val_data)?,
        };
        on_epoch(&log);
        history.push(log);
        if log.val_loss < best.0 {
            best = (log.val_loss, model.clone(), epoch, RngState::capture(&rng));
            waited = 0;
        } else {
            waited += 1;
            if waited > cfg.patience {
                stopped_early = true;
                break;
            }
        }
    }
    let (best_val, best_model, best_epoch, rng_state) = best;
    let checkpoint = Checkpoint::from_model(&best_model, best_epoch, best_val, rng_state);
    Ok(TrainOutcome {
        model: best_model,
        checkpoint,
        history,
        stopped_early,
    })
}

/// Decoded events of one feature clip, frames relative to the clip.
pub fn predict_clip(model: &Model<f32>, features: &FeatureTensor, decode: &DecodeConfig) -> Result<Vec<EventRecord>> {
    let out = model.predict(features)?;
    Ok(match model.config.method {
        OutputMethod::MultiAccddoa => {
            let raw = accddoa_from_frames(out.view())?;
            crate::codec::decode_multi_accddoa(raw.view(), decode)
        }
        OutputMethod::MultiTask => {
            let mt = MtTensor::from_frames(out.view())?;
            decode_mt(mt.accdoa.view(), mt.dist.view(), decode)
        }
    })
}

/// Features, forward pass and decoding over a recording of any length;
/// frames are numbered from the start of the recording.
pub fn predict_to_events(
    model: &Model<f32>,
    audio: &Audio,
    format: AudioFormat,
    decode: &DecodeConfig,
    clip: &ClipSpec,
) -> Result<Vec<EventRecord>> {
    if format != model.config.format {
        return Err(Error::BadConfig(format!(
            "model expects {} input, got {}",
            model.config.format.name(),
            format.name()
        )));
    }
    let mut events = Vec::new();
    for (i, features) in extract(audio, format, clip)?.iter().enumerate() {
        for mut e in predict_clip(model, features, decode)? {
            e.frame += i * clip.label_frames;
            events.push(e);
        }
    }
    Ok(events)
}
