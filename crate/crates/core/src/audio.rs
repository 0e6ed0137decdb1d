//! Multichannel audio buffers and WAV I/O.

use std::path::Path;

use hound::{SampleFormat, WavReader, WavSpec, WavWriter};

use crate::error::{Error, Result};
use crate::event::ClipSpec;

/// Planar multichannel audio. All channels have the same length.
#[derive(Debug, Clone, PartialEq)]
pub struct Audio {
    pub sample_rate: u32,
    pub channels: Vec<Vec<f32>>,
}

impl Audio {
    pub fn new(sample_rate: u32, channels: Vec<Vec<f32>>) -> Result<Self> {
        if let Some(first) = channels.first() {
            if channels.iter().any(|c| c.len() != first.len()) {
                return Err(Error::ShapeMismatch("channels differ in length".into()));
            }
        }
        Ok(Self {
            sample_rate,
            channels,
        })
    }

    pub fn silent(sample_rate: u32, n_channels: usize, len: usize) -> Self {
        Self {
            sample_rate,
            channels: vec![vec![0.0; len]; n_channels],
        }
    }

    pub fn n_channels(&self) -> usize {
        self.channels.len()
    }

    pub fn len(&self) -> usize {
        self.channels.first().map_or(0, Vec::len)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Splits into consecutive clips of `clip.clip_samples()` without overlap;
    /// the last one is zero padded.
    pub fn split_clips(&self, clip: &ClipSpec) -> Vec<Audio> {
        let n = clip.clip_samples();
        let count = self.len().div_ceil(n).max(1);
        (0..count)
            .map(|k| {
                let channels = self
                    .channels
                    .iter()
                    .map(|c| {
                        let lo = (k * n).min(c.len());
                        let hi = ((k + 1) * n).min(c.len());
                        let mut out = c[lo..hi].to_vec();
                        out.resize(n, 0.0);
                        out
                    })
                    .collect();
                Audio {
                    sample_rate: self.sample_rate,
                    channels,
                }
            })
            .collect()
    }
}

/// Reads 16-bit integer or 32-bit float WAV into `[-1, 1]` floats.
pub fn read_wav(path: impl AsRef<Path>) -> Result<Audio> {
    let path = path.as_ref();
    let wav_err = |source| Error::Wav {
        path: path.to_path_buf(),
        source,
    };
    let mut reader = WavReader::open(path).map_err(wav_err)?;
    let spec = reader.spec();
    let n_ch = spec.channels as usize;
    let interleaved: Vec<f32> = match (spec.sample_format, spec.bits_per_sample) {
        (SampleFormat::Float, 32) => reader
            .samples::<f32>()
            .collect::<std::result::Result<_, _>>()
            .map_err(wav_err)?,
        (SampleFormat::Int, 16) => reader
            .samples::<i16>()
            .map(|s| s.map(|v| v as f32 / 32768.0))
            .collect::<std::result::Result<_, _>>()
            .map_err(wav_err)?,
        // 24-bit and other layouts
        _ => return Err(wav_err(hound::Error::Unsupported)),
    };
    let mut channels = vec![Vec::with_capacity(interleaved.len() / n_ch.max(1)); n_ch];
    for frame in interleaved.chunks_exact(n_ch) {
        for (c, s) in channels.iter_mut().zip(frame) {
            c.push(*s);
        }
    }
    Audio::new(spec.sample_rate, channels)
}

/// Writes 32-bit float WAV.
pub fn write_wav(audio: &Audio, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let wav_err = |source| Error::Wav {
        path: path.to_path_buf(),
        source,
    };
    let spec = WavSpec {
        channels: audio.n_channels() as u16,
        sample_rate: audio.sample_rate,
        bits_per_sample: 32,
        sample_format: SampleFormat::Float,
    };
    let mut writer = WavWriter::create(path, spec).map_err(wav_err)?;
    for i in 0..audio.len() {
        for c in &audio.channels {
            writer.write_sample(c[i]).map_err(wav_err)?;
        }
    }
    writer.finalize().map_err(wav_err)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wav_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("x.wav");
        let a = Audio::new(24_000, vec![vec![0.0, 0.5, -0.25], vec![1.0, -1.0, 0.125]]).unwrap();
        write_wav(&a, &p).unwrap();
        assert_eq!(read_wav(&p).unwrap(), a);
    }

    #[test]
    fn reads_16_bit() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("i16.wav");
        let spec = WavSpec {
            channels: 2,
            sample_rate: 24_000,
            bits_per_sample: 16,
            sample_format: SampleFormat::Int,
        };
        let mut w = WavWriter::create(&p, spec).unwrap();
        for s in [16384i16, -32768, 0, 8192] {
            w.write_sample(s).unwrap();
        }
        w.finalize().unwrap();
        let a = read_wav(&p).unwrap();
        assert_eq!(a.channels, vec![vec![0.5, 0.0], vec![-1.0, 0.25]]);
    }

    #[test]
    fn other_layouts_are_wav_errors() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("i24.wav");
        let spec = WavSpec {
            channels: 1,
            sample_rate: 24_000,
            bits_per_sample: 24,
            sample_format: SampleFormat::Int,
        };
        let mut w = WavWriter::create(&p, spec).unwrap();
        w.write_sample(1000i32).unwrap();
        w.finalize().unwrap();
        assert!(matches!(read_wav(&p), Err(Error::Wav { .. })));
    }

    #[test]
    fn split_pads_and_counts() {
        let clip = ClipSpec::default();
        let a = Audio::silent(24_000, 2, 130_000);
        let parts = a.split_clips(&clip);
        assert_eq!(parts.len(), 2);
        assert!(parts.iter().all(|p| p.len() == 120_000));
        let short = Audio::silent(24_000, 1, 10);
        assert_eq!(short.split_clips(&clip).len(), 1);
    }
}
