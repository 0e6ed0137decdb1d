use ndarray::Array2;

use crate::error::{Error, Result};

pub fn hz_to_mel(hz: f64) -> f64 {
    2595.0 * (1.0 + hz / 700.0).log10()
}

pub fn mel_to_hz(mel: f64) -> f64 {
    700.0 * (10f64.powf(mel / 2595.0) - 1.0)
}

/// Triangular filters (peak 1) on the HTK mel scale from 0 Hz to Nyquist,
/// evaluated at the retained STFT bins `1..=n_bins` of an FFT of size
/// `2 * n_bins`.
#[derive(Debug, Clone, PartialEq)]
pub struct MelBank {
    pub weights: Array2<f64>,
    pub centers_hz: Vec<f64>,
}

impl MelBank {
    pub fn n_mels(&self) -> usize {
        self.weights.nrows()
    }

    /// Filter areas (row sums).
    pub fn areas(&self) -> Vec<f64> {
        self.weights.rows().into_iter().map(|r| r.sum()).collect()
    }

    /// The bank with every row scaled to unit sum, so that aggregating a
    /// bounded per-bin quantity stays within the same bounds.
    pub fn row_normalized(&self) -> Array2<f64> {
        let mut w = self.weights.clone();
        for mut row in w.rows_mut() {
            let s = row.sum();
            row.mapv_inplace(|v| v / s);
        }
        w
    }
}

pub fn mel_bank(n_mels: usize, n_bins: usize, sample_rate: u32) -> Result<MelBank> {
    if n_mels == 0 || n_mels >= n_bins || sample_rate == 0 {
        return Err(Error::BadConfig(format!(
            "mel bank needs 0 < n_mels ({n_mels}) < n_bins ({n_bins})"
        )));
    }
    let nyquist = sample_rate as f64 / 2.0;
    let top = hz_to_mel(nyquist);
    let edges: Vec<f64> = (0..n_mels + 2)
        .map(|i| mel_to_hz(top * i as f64 / (n_mels + 1) as f64))
        .collect();
    let bin_hz = |k: usize| (k + 1) as f64 * nyquist / n_bins as f64;

    let mut weights = Array2::zeros((n_mels, n_bins));
    for m in 0..n_mels {
        let (lo, mid, hi) = (edges[m], edges[m + 1], edges[m + 2]);
        for k in 0..n_bins {
            let f = bin_hz(k);
            let w = ((f - lo) / (mid - lo)).min((hi - f) / (hi - mid));
            if w > 0.0 {
                weights[[m, k]] = w;
            }
        }
        if weights.row(m).sum() <= 0.0 {
            return Err(Error::BadConfig(format!(
                "mel filter {m} ({lo:.1}-{hi:.1} Hz) covers no STFT bin"
            )));
        }
    }
    Ok(MelBank {
        weights,
        centers_hz: edges[1..=n_mels].to_vec(),
    })
}
