//! Model input features for FOA and binaural audio.

mod binaural;
mod foa;
mod mel;
mod stft;

use ndarray::Array3;
use serde::{Deserialize, Serialize};

use crate::audio::Audio;
use crate::error::{Error, Result};
use crate::event::ClipSpec;
use crate::tensor_file::Tensor;

pub use binaural::binaural_features;
pub use foa::{foa_features, foa_features_with, intensity_vectors};
pub use mel::{hz_to_mel, mel_bank, mel_to_hz, MelBank};
pub use stft::{hamming, stft, Spectrogram};

/// Floor added inside every log and ratio.
pub const EPS: f64 = 1e-8;
/// ILD magnitude bound in dB.
pub const ILD_CLAMP_DB: f64 = 40.0;
pub const N_MELS: usize = 64;
pub const N_BINS: usize = 512;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AudioFormat {
    Foa,
    Binaural,
}

impl AudioFormat {
    pub fn input_channels(self) -> usize {
        match self {
            AudioFormat::Foa => 4,
            AudioFormat::Binaural => 2,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            AudioFormat::Foa => "foa",
            AudioFormat::Binaural => "binaural",
        }
    }
}

impl std::str::FromStr for AudioFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "foa" | "ambisonics" => Ok(AudioFormat::Foa),
            "binaural" | "bin" => Ok(AudioFormat::Binaural),
            other => Err(Error::BadConfig(format!("unknown audio format {other:?}"))),
        }
    }
}

/// Shape of a feature stack: channels x frames x features, plus the
/// per-block feature pooling rates of the reference CRNN.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FeatureSpec {
    pub format: AudioFormat,
    pub channels: usize,
    pub frames: usize,
    pub features: usize,
    pub pooling: [usize; 3],
    /// Natural log of the FOA mel energies; raw energies otherwise.
    /// Binaural magnitudes are always log-compressed.
    pub mel_log: bool,
}

impl FeatureSpec {
    pub fn foa() -> Self {
        Self {
            format: AudioFormat::Foa,
            channels: 7,
            frames: 250,
            features: N_MELS,
            pooling: [4, 4, 2],
            mel_log: true,
        }
    }

    pub fn binaural() -> Self {
        Self {
            format: AudioFormat::Binaural,
            channels: 4,
            frames: 250,
            features: N_BINS,
            pooling: [8, 8, 4],
            mel_log: true,
        }
    }

    pub fn for_format(format: AudioFormat) -> Self {
        match format {
            AudioFormat::Foa => Self::foa(),
            AudioFormat::Binaural => Self::binaural(),
        }
    }

    pub fn shape(&self) -> (usize, usize, usize) {
        (self.channels, self.frames, self.features)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FeatureTensor {
    pub spec: FeatureSpec,
    pub data: Array3<f32>,
}

impl FeatureTensor {
    pub fn new(spec: FeatureSpec, data: Array3<f32>) -> Result<Self> {
        if data.dim() != spec.shape() {
            return Err(Error::ShapeMismatch(format!(
                "feature data {:?} does not match {:?}",
                data.dim(),
                spec.shape()
            )));
        }
        if data.iter().any(|v| !v.is_finite()) {
            return Err(Error::BadConfig("non-finite feature value".into()));
        }
        Ok(Self { spec, data })
    }

    pub fn to_tensor(&self) -> Tensor {
        let (c, t, f) = self.spec.shape();
        Tensor {
            dims: vec![c, t, f],
            data: self.data.iter().copied().collect(),
        }
    }

    pub fn from_tensor(t: &Tensor, format: AudioFormat) -> Result<Self> {
        let spec = FeatureSpec::for_format(format);
        let (c, f_t, f) = spec.shape();
        if t.dims != [c, f_t, f] {
            return Err(Error::ShapeMismatch(format!(
                "tensor dims {:?}, expected {:?}",
                t.dims,
                [c, f_t, f]
            )));
        }
        let data = Array3::from_shape_vec((c, f_t, f), t.data.clone())
            .map_err(|e| Error::ShapeMismatch(e.to_string()))?;
        Self::new(spec, data)
    }
}

/// Features of one clip in either format.
pub fn clip_features(audio: &Audio, format: AudioFormat, clip: &ClipSpec) -> Result<FeatureTensor> {
    match format {
        AudioFormat::Foa => foa_features(audio, clip),
        AudioFormat::Binaural => binaural_features(audio, clip),
    }
}

/// Splits a recording of any length into clips and extracts each.
pub fn extract(audio: &Audio, format: AudioFormat, clip: &ClipSpec) -> Result<Vec<FeatureTensor>> {
    if audio.n_channels() != format.input_channels() {
        return Err(Error::ChannelCount {
            expected: format.input_channels(),
            got: audio.n_channels(),
        });
    }
    if audio.is_empty() {
        return Err(Error::EmptySignal);
    }
    audio
        .split_clips(clip)
        .iter()
        .map(|a| clip_features(a, format, clip))
        .collect()
}
