use std::f64::consts::PI;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

/// Synthetic waveform family of a class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SourceKind {
    NoiseBurst,
    AmTone,
    ToneComplex,
}

impl SourceKind {
    pub fn for_class(class_id: usize) -> Self {
        match class_id % 3 {
            0 => SourceKind::NoiseBurst,
            1 => SourceKind::AmTone,
            _ => SourceKind::ToneComplex,
        }
    }
}

/// Characteristic frequency of a class: 0.4 octave steps from 250 Hz.
pub fn class_frequency(class_id: usize) -> f64 {
    250.0 * 2f64.powf(0.4 * class_id as f64)
}

/// `len` samples of a `kind` waveform around the class frequency, scaled to
/// `rms`, with 10 ms fades.
pub fn source_signal(
    kind: SourceKind,
    class_id: usize,
    len: usize,
    sample_rate: u32,
    rms: f64,
    rng: &mut ChaCha8Rng,
) -> Vec<f32> {
    if len == 0 {
        return Vec::new();
    }
    let fs = sample_rate as f64;
    let fc = class_frequency(class_id);
    let mut x: Vec<f64> = match kind {
        SourceKind::NoiseBurst => band_noise(len, fs, fc / 1.6, (fc * 1.6).min(0.45 * fs), rng),
        SourceKind::AmTone => {
            let phase = rng.random_range(0.0..2.0 * PI);
            // fast shallow modulation keeps short-term level steady
            let rate = 20.0 + class_id as f64;
            (0..len)
                .map(|i| {
                    let t = i as f64 / fs;
                    (2.0 * PI * fc * t + phase).sin() * (1.0 + 0.5 * (2.0 * PI * rate * t).sin())
                })
                .collect()
        }
        SourceKind::ToneComplex => {
            let f0 = fc / 2.0;
            let partials: Vec<(f64, f64)> = (1..=6)
                .filter(|h| *h as f64 * f0 < 0.45 * fs)
                .map(|h| (h as f64 * f0, rng.random_range(0.0..2.0 * PI)))
                .collect();
            (0..len)
                .map(|i| {
                    let t = i as f64 / fs;
                    partials
                        .iter()
                        .enumerate()
                        .map(|(h, (f, ph))| (2.0 * PI * f * t + ph).sin() / (h + 1) as f64)
                        .sum()
                })
                .collect()
        }
    };
    let current = (x.iter().map(|v| v * v).sum::<f64>() / len as f64).sqrt();
    let scale = if current > 0.0 { rms / current } else { 0.0 };
    let fade = ((0.01 * fs) as usize).min(len / 2);
    for (i, v) in x.iter_mut().enumerate() {
        let edge = i.min(len - 1 - i);
        let ramp = if edge < fade {
            0.5 - 0.5 * (PI * edge as f64 / fade as f64).cos()
        } else {
            1.0
        };
        *v *= scale * ramp;
    }
    x.into_iter().map(|v| v as f32).collect()
}

/// White noise restricted to `[lo, hi]` Hz by zeroing FFT bins.
fn band_noise(len: usize, fs: f64, lo: f64, hi: f64, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let n = len.next_power_of_two();
    let mut buf: Vec<Complex64> = (0..n)
        .map(|_| Complex64::new(rng.random_range(-1.0..1.0), 0.0))
        .collect();
    let mut planner = FftPlanner::<f64>::new();
    planner.plan_fft_forward(n).process(&mut buf);
    for (k, z) in buf.iter_mut().enumerate() {
        let f = k.min(n - k) as f64 * fs / n as f64;
        if f < lo || f > hi {
            *z = Complex64::default();
        }
    }
    planner.plan_fft_inverse(n).process(&mut buf);
    buf.truncate(len);
    buf.into_iter().map(|z| z.re / n as f64).collect()
}
