use ndarray::Array3;

use super::{stft, FeatureSpec, FeatureTensor, EPS, ILD_CLAMP_DB};
use crate::audio::Audio;
use crate::error::{Error, Result};
use crate::event::ClipSpec;

/// Four-channel binaural stack over the full 512-bin resolution:
/// `ln(mean(|L|, |R|) + eps)`, `sin(IPD)`, `cos(IPD)` and the ILD in dB
/// clamped to +-40. IPD is `arg L - arg R`.
pub fn binaural_features(audio: &Audio, clip: &ClipSpec) -> Result<FeatureTensor> {
    if audio.n_channels() != 2 {
        return Err(Error::ChannelCount {
            expected: 2,
            got: audio.n_channels(),
        });
    }
    let spec = stft(audio, clip)?;
    let (frames, bins) = (spec.n_frames(), spec.n_bins());
    let mut out = Array3::<f32>::zeros((4, frames, bins));
    for t in 0..frames {
        for k in 0..bins {
            let l = spec.data[[0, t, k]];
            let r = spec.data[[1, t, k]];
            let (ml, mr) = (l.norm(), r.norm());
            let cross = l * r.conj();
            let ipd = cross.im.atan2(cross.re);
            let ild = 20.0 * ((ml + EPS) / (mr + EPS)).log10();
            out[[0, t, k]] = ((0.5 * (ml + mr)) + EPS).ln() as f32;
            out[[1, t, k]] = ipd.sin() as f32;
            out[[2, t, k]] = ipd.cos() as f32;
            out[[3, t, k]] = ild.clamp(-ILD_CLAMP_DB, ILD_CLAMP_DB) as f32;
        }
    }
    FeatureTensor::new(FeatureSpec::binaural(), out)
}
