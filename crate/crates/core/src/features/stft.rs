use std::f64::consts::PI;

use ndarray::Array3;
use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;

use crate::audio::Audio;
use crate::error::{Error, Result};
use crate::event::ClipSpec;

/// Complex STFT, channels x frames x bins. Bin `k` of the stored array is
/// FFT bin `k + 1` (the DC bin is dropped).
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrogram {
    pub data: Array3<Complex64>,
    pub fft_size: usize,
    pub sample_rate: u32,
}

impl Spectrogram {
    pub fn n_channels(&self) -> usize {
        self.data.dim().0
    }

    pub fn n_frames(&self) -> usize {
        self.data.dim().1
    }

    pub fn n_bins(&self) -> usize {
        self.data.dim().2
    }

    /// Centre frequency of stored bin `k`.
    pub fn bin_hz(&self, k: usize) -> f64 {
        (k + 1) as f64 * self.sample_rate as f64 / self.fft_size as f64
    }
}

/// Periodic Hamming window.
pub fn hamming(n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| 0.54 - 0.46 * (2.0 * PI * i as f64 / n as f64).cos())
        .collect()
}

/// Hamming-windowed STFT with `clip.feature_frames` frames. Frame `t` starts
/// at sample `t * hop`; samples past the input are zeros and samples past the
/// last frame are ignored.
pub fn stft(signal: &Audio, clip: &ClipSpec) -> Result<Spectrogram> {
    if signal.sample_rate != clip.sample_rate {
        return Err(Error::SampleRate {
            expected: clip.sample_rate,
            got: signal.sample_rate,
        });
    }
    if signal.n_channels() == 0 || signal.is_empty() {
        return Err(Error::EmptySignal);
    }
    let win = clip.win_samples();
    let hop = clip.hop_samples();
    let n_fft = clip.fft_size();
    let n_bins = n_fft / 2;
    let frames = clip.feature_frames;
    let window = hamming(win);
    let fft = FftPlanner::<f64>::new().plan_fft_forward(n_fft);

    let mut out = Array3::zeros((signal.n_channels(), frames, n_bins));
    let mut buf = vec![Complex64::default(); n_fft];
    for (c, samples) in signal.channels.iter().enumerate() {
        for t in 0..frames {
            let start = t * hop;
            buf.iter_mut().for_each(|b| *b = Complex64::default());
            for (i, w) in window.iter().enumerate() {
                if let Some(&s) = samples.get(start + i) {
                    buf[i] = Complex64::new(s as f64 * w, 0.0);
                }
            }
            fft.process(&mut buf);
            for k in 0..n_bins {
                out[[c, t, k]] = buf[k + 1];
            }
        }
    }
    Ok(Spectrogram {
        data: out,
        fft_size: n_fft,
        sample_rate: clip.sample_rate,
    })
}
