//! Context-window MLP regressor with reverse-mode gradients, Adam, early
//! stopping and binary checkpoints.
//!
//! This stands in for the reference convolutional-recurrent backbone
//! ([`REFERENCE_BACKBONE`]); only the output formats and losses are shared.

mod adam;
mod checkpoint;
mod network;
mod train;

pub use adam::{adam_step, AdamState};
pub use checkpoint::{config_hash, Checkpoint, NamedArray, RngState, CHECKPOINT_MAGIC};
pub use network::{init_model, output_loss, Dense, Gradients, Model, Targets};
pub use train::{format_log, predict_clip, predict_to_events, train, EpochLog, Example, TrainOutcome, LOG_HEADER};

use serde::{Deserialize, Serialize};

use crate::codec::{OutputMethod, OutputSpec};
use crate::error::{Error, Result};
use crate::features::{AudioFormat, FeatureSpec};
use crate::losses::LossKind;

/// Backbone of the full-scale system, recorded for reference only.
pub const REFERENCE_BACKBONE: &str =
    "3 conv blocks x 128 filters with frequency pooling, 2 bidirectional GRU layers, 2 multi-head attention layers x 8 heads";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelConfig {
    pub format: AudioFormat,
    /// Feature frames stacked on each side of a label frame's center.
    pub context: usize,
    pub hidden: Vec<usize>,
    pub method: OutputMethod,
    /// ADPIT base loss for multi-ACCDDOA, distance-branch loss for MT.
    pub loss: LossKind,
    /// Weight of the distance component in ADPIT slots.
    pub dist_weight: f64,
    pub seed: u64,
    pub lr: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub eps: f64,
    /// Decoupled weight decay on layer weights (biases excluded).
    pub weight_decay: f64,
    /// Dropout rate on the standardized input during training.
    pub input_dropout: f64,
    /// Dropout rate on hidden activations during training.
    pub dropout: f64,
    pub max_epochs: usize,
    pub patience: usize,
    /// Clips per batch.
    pub batch_size: usize,
    pub label_frames: usize,
}

impl Default for ModelConfig {
    fn default() -> Self {
        Self {
            format: AudioFormat::Foa,
            context: 2,
            hidden: vec![256, 256],
            method: OutputMethod::MultiAccddoa,
            loss: LossKind::Mse,
            dist_weight: 1.0,
            seed: 0,
            lr: 1e-3,
            beta1: 0.9,
            beta2: 0.999,
            eps: 1e-8,
            weight_decay: 0.0,
            input_dropout: 0.0,
            dropout: 0.0,
            max_epochs: 250,
            patience: 75,
            batch_size: 16,
            label_frames: 50,
        }
    }
}

impl ModelConfig {
    pub fn input_spec(&self) -> FeatureSpec {
        FeatureSpec::for_format(self.format)
    }

    pub fn output_spec(&self) -> OutputSpec {
        OutputSpec::new(self.method)
    }

    /// Feature frames per label frame.
    pub fn stride(&self) -> usize {
        self.input_spec().frames / self.label_frames
    }

    pub fn input_width(&self) -> usize {
        let spec = self.input_spec();
        spec.channels * spec.features * (2 * self.context + 1)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::BadConfig(m));
        let frames = self.input_spec().frames;
        if self.label_frames == 0 || frames % self.label_frames != 0 {
            return bad(format!("{frames} feature frames do not pool into {} label frames", self.label_frames));
        }
        if self.hidden.contains(&0) {
            return bad("hidden layer of width 0".into());
        }
        if self.method == OutputMethod::MultiAccddoa && self.loss.is_relative() {
            return bad(format!(
                "multi-accddoa is trained with mse or mae, not {}",
                self.loss.name()
            ));
        }
        if !(self.lr > 0.0 && self.eps > 0.0) || !(0.0..1.0).contains(&self.beta1) || !(0.0..1.0).contains(&self.beta2) {
            return bad("optimizer settings out of range".into());
        }
        if self.batch_size == 0 {
            return bad("batch size 0".into());
        }
        if !(self.weight_decay >= 0.0 && self.weight_decay.is_finite()) {
            return bad(format!("weight decay {}", self.weight_decay));
        }
        if !(0.0..1.0).contains(&self.input_dropout) || !(0.0..1.0).contains(&self.dropout) {
            return bad("dropout rates must be in [0, 1)".into());
        }
        if !(self.dist_weight >= 0.0 && self.dist_weight.is_finite()) {
            return bad(format!("distance weight {}", self.dist_weight));
        }
        Ok(())
    }

    /// Plain `key=value` lines, one per field.
    pub fn to_text(&self) -> String {
        let hidden: Vec<String> = self.hidden.iter().map(|h| h.to_string()).collect();
        [
            format!("format={}", self.format.name()),
            format!("context={}", self.context),
            format!("hidden={}", hidden.join(",")),
            format!("method={}", self.method.name()),
            format!("loss={}", self.loss.name()),
            format!("dist_weight={}", self.dist_weight),
            format!("seed={}", self.seed),
            format!("lr={}", self.lr),
            format!("beta1={}", self.beta1),
            format!("beta2={}", self.beta2),
            format!("eps={}", self.eps),
            format!("weight_decay={}", self.weight_decay),
            format!("input_dropout={}", self.input_dropout),
            format!("dropout={}", self.dropout),
            format!("max_epochs={}", self.max_epochs),
            format!("patience={}", self.patience),
            format!("batch_size={}", self.batch_size),
            format!("label_frames={}", self.label_frames),
        ]
        .iter()
        .map(|l| format!("{l}\n"))
        .collect()
    }

    /// Parses `key=value` lines over the defaults. `#` starts a comment.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut cfg = Self::default();
        for line in text.lines() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::BadConfig(format!("expected key=value, got {line:?}")))?;
            cfg.set(key.trim(), value.trim())?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        fn num<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
            value
                .parse()
                .map_err(|_| Error::BadConfig(format!("{key}: cannot parse {value:?}")))
        }
        match key {
            "format" => self.format = value.parse()?,
            "context" => self.context = num(key, value)?,
            "hidden" => {
                self.hidden = value
                    .split(',')
                    .map(str::trim)
                    .filter(|v| !v.is_empty())
                    .map(|v| num(key, v))
                    .collect::<Result<_>>()?
            }
            "method" => self.method = value.parse()?,
            "loss" => self.loss = value.parse()?,
            "dist_weight" => self.dist_weight = num(key, value)?,
            "seed" => self.seed = num(key, value)?,
            "lr" => self.lr = num(key, value)?,
            "beta1" => self.beta1 = num(key, value)?,
            "beta2" => self.beta2 = num(key, value)?,
            "eps" => self.eps = num(key, value)?,
            "weight_decay" => self.weight_decay = num(key, value)?,
            "input_dropout" => self.input_dropout = num(key, value)?,
            "dropout" => self.dropout = num(key, value)?,
            "max_epochs" => self.max_epochs = num(key, value)?,
            "patience" => self.patience = num(key, value)?,
            "batch_size" => self.batch_size = num(key, value)?,
            "label_frames" => self.label_frames = num(key, value)?,
            other => return Err(Error::BadConfig(format!("unknown model setting {other:?}"))),
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_round_trip() {
        let cfg = ModelConfig {
            hidden: vec![32, 16, 8],
            method: OutputMethod::MultiTask,
            loss: LossKind::Mape,
            lr: 3.5e-4,
            ..Default::default()
        };
        assert_eq!(ModelConfig::from_text(&cfg.to_text()).unwrap(), cfg);
        assert_eq!(ModelConfig::from_text("").unwrap(), ModelConfig::default());
        let partial = ModelConfig::from_text("# tiny\nhidden = 8\nformat=binaural\n").unwrap();
        assert_eq!(partial.hidden, vec![8]);
        assert_eq!(partial.input_width(), 4 * 512 * 5);
    }

    #[test]
    fn rejects_bad_settings() {
        for text in ["loss=mspe", "method=multi-accddoa\nloss=mape", "nonsense=1", "lr=abc", "hidden=4,0", "label_frames=7", "noequals"] {
            assert!(matches!(ModelConfig::from_text(text), Err(Error::BadConfig(_))), "{text}");
        }
        assert!(ModelConfig::from_text("method=mt\nloss=mspe").is_ok());
    }

    #[test]
    fn default_geometry() {
        let cfg = ModelConfig::default();
        assert_eq!(cfg.stride(), 5);
        assert_eq!(cfg.input_width(), 7 * 64 * 5);
        assert_eq!(cfg.output_spec().total_width(), 156);
        assert_eq!((cfg.max_epochs, cfg.patience), (250, 75));
    }
}
