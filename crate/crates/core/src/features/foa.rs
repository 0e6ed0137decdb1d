use ndarray::{s, Array2, Array3, Axis};

use super::{mel_bank, stft, FeatureSpec, FeatureTensor, Spectrogram, EPS, N_BINS, N_MELS};
use crate::audio::Audio;
use crate::error::{Error, Result};
use crate::event::ClipSpec;

/// Seven-channel FOA stack: log-mel energies of W, Y, Z, X followed by the
/// mel-aggregated normalized intensity vector (x, y, z).
pub fn foa_features(audio: &Audio, clip: &ClipSpec) -> Result<FeatureTensor> {
    foa_features_with(audio, clip, FeatureSpec::foa())
}

/// As [`foa_features`] with the energy compression taken from `spec.mel_log`.
pub fn foa_features_with(audio: &Audio, clip: &ClipSpec, spec: FeatureSpec) -> Result<FeatureTensor> {
    if audio.n_channels() != 4 {
        return Err(Error::ChannelCount {
            expected: 4,
            got: audio.n_channels(),
        });
    }
    let compress = |e: f64| if spec.mel_log { (e + EPS).ln() } else { e };
    let stack = stft(audio, clip)?;
    let bank = mel_bank(N_MELS, N_BINS, clip.sample_rate)?;
    let frames = stack.n_frames();

    let mut out = Array3::<f32>::zeros((7, frames, N_MELS));
    for c in 0..4 {
        let power: Array2<f64> = stack.data.index_axis(Axis(0), c).mapv(|z| z.norm_sqr());
        let mel = power.dot(&bank.weights.t());
        out.slice_mut(s![c, .., ..])
            .assign(&mel.mapv(|e| compress(e) as f32));
    }
    let iv = intensity_vectors(&stack, &bank.row_normalized())?;
    out.slice_mut(s![4..7, .., ..]).assign(&iv.mapv(|v| v as f32));
    FeatureTensor::new(spec, out)
}

/// Per-bin `Re{conj(W) (X, Y, Z)}` normalized by
/// `|W|^2 + (|X|^2 + |Y|^2 + |Z|^2) / 3 + eps`, then aggregated over mel
/// bands with `bank` (n_mels x n_bins). Input channels are in ACN order.
///
/// Per bin each component is bounded by `sqrt(3) / 2`; with a row-normalized
/// bank the aggregates stay inside `[-1, 1]`.
pub fn intensity_vectors(spec: &Spectrogram, bank: &Array2<f64>) -> Result<Array3<f64>> {
    if spec.n_channels() != 4 {
        return Err(Error::ChannelCount {
            expected: 4,
            got: spec.n_channels(),
        });
    }
    if bank.ncols() != spec.n_bins() {
        return Err(Error::ShapeMismatch(format!(
            "bank has {} bins, spectrogram {}",
            bank.ncols(),
            spec.n_bins()
        )));
    }
    let (frames, bins) = (spec.n_frames(), spec.n_bins());
    // ACN: W=0, Y=1, Z=2, X=3; output order x, y, z
    let axis_channel = [3usize, 1, 2];
    let mut per_bin = Array3::<f64>::zeros((3, frames, bins));
    for t in 0..frames {
        for k in 0..bins {
            let w = spec.data[[0, t, k]];
            let energy = w.norm_sqr()
                + (spec.data[[1, t, k]].norm_sqr()
                    + spec.data[[2, t, k]].norm_sqr()
                    + spec.data[[3, t, k]].norm_sqr())
                    / 3.0
                + EPS;
            for (axis, &ch) in axis_channel.iter().enumerate() {
                per_bin[[axis, t, k]] = (w.conj() * spec.data[[ch, t, k]]).re / energy;
            }
        }
    }
    let mut out = Array3::zeros((3, frames, bank.nrows()));
    for axis in 0..3 {
        let agg = per_bin.index_axis(Axis(0), axis).dot(&bank.t());
        out.slice_mut(s![axis, .., ..]).assign(&agg);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{angular_distance, sph_to_unit, Vec3};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn noise(seed: u64, len: usize) -> Vec<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..len).map(|_| rng.random_range(-0.5..0.5)).collect()
    }

    /// Analytic SN3D plane-wave encoding, written out independently of the
    /// simulator.
    fn plane_wave(src: &[f64], az: f64, el: f64) -> Audio {
        let (a, e) = (az.to_radians(), el.to_radians());
        let gains = [1.0, a.sin() * e.cos(), e.sin(), a.cos() * e.cos()];
        let channels = gains
            .iter()
            .map(|g| src.iter().map(|s| (s * g) as f32).collect())
            .collect();
        Audio::new(24_000, channels).unwrap()
    }

    fn mean_direction(f: &FeatureTensor) -> Vec3 {
        let m = |c: usize| f.data.slice(s![c, ..245, ..]).mean().unwrap() as f64;
        Vec3::new(m(4), m(5), m(6))
    }

    #[test]
    fn silence() {
        let f = foa_features(&Audio::silent(24_000, 4, 120_000), &ClipSpec::default()).unwrap();
        assert_eq!(f.data.dim(), (7, 250, 64));
        let log_eps = (EPS).ln() as f32;
        assert!(f.data.slice(s![0..4, .., ..]).iter().all(|v| *v == log_eps));
        assert!(f.data.slice(s![4..7, .., ..]).iter().all(|v| *v == 0.0));
    }

    #[test]
    fn channel_count() {
        assert!(matches!(
            foa_features(&Audio::silent(24_000, 2, 100), &ClipSpec::default()),
            Err(Error::ChannelCount { expected: 4, got: 2 })
        ));
    }

    #[test]
    fn frontal_plane_wave() {
        let f = foa_features(&plane_wave(&noise(1, 120_000), 0.0, 0.0), &ClipSpec::default()).unwrap();
        let d = mean_direction(&f);
        // SN3D plane wave: |I| = |W|^2 / (4/3 |W|^2) = 3/4 along the DOA
        assert!((d.x - 0.75).abs() < 1e-3, "{d:?}");
        assert!(d.y.abs() < 1e-3 && d.z.abs() < 1e-3, "{d:?}");
        assert!(angular_distance(d, Vec3::new(1.0, 0.0, 0.0)).unwrap() < 0.1);
    }

    #[test]
    fn lateral_plane_wave() {
        let f = foa_features(&plane_wave(&noise(2, 120_000), 90.0, 0.0), &ClipSpec::default()).unwrap();
        let d = mean_direction(&f);
        assert!(angular_distance(d, sph_to_unit(90.0, 0.0)).unwrap() < 0.1, "{d:?}");
    }

    #[test]
    fn bounded_components() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let channels = (0..4)
            .map(|_| (0..30_000).map(|_| rng.random_range(-1.0f32..1.0)).collect())
            .collect();
        let f = foa_features(&Audio::new(24_000, channels).unwrap(), &ClipSpec::default()).unwrap();
        assert!(f
            .data
            .slice(s![4..7, .., ..])
            .iter()
            .all(|v| v.abs() <= 1.0 + 1e-6));
    }

    #[test]
    fn antipodal_incoherent_sources_cancel() {
        let a = plane_wave(&noise(10, 120_000), 30.0, 0.0);
        let b = plane_wave(&noise(11, 120_000), -150.0, 0.0);
        let mixed = Audio::new(
            24_000,
            a.channels
                .iter()
                .zip(&b.channels)
                .map(|(x, y)| x.iter().zip(y).map(|(p, q)| p + q).collect())
                .collect(),
        )
        .unwrap();
        let f = foa_features(&mixed, &ClipSpec::default()).unwrap();
        let d = mean_direction(&f);
        // a single source gives |mean| = 0.75; cancellation residual is from
        // finite-sample cross terms
        assert!(d.norm() < 0.05, "{d:?}");
    }

    #[test]
    fn deterministic_bytes() {
        let audio = plane_wave(&noise(5, 50_000), 12.0, 34.0);
        let a = foa_features(&audio, &ClipSpec::default()).unwrap();
        let b = foa_features(&audio, &ClipSpec::default()).unwrap();
        assert_eq!(a.to_tensor().to_bytes(), b.to_tensor().to_bytes());
    }

    #[test]
    fn raw_mel_energies_on_request() {
        let audio = plane_wave(&noise(6, 30_000), -40.0, 10.0);
        let clip = ClipSpec::default();
        let log = foa_features(&audio, &clip).unwrap();
        let raw = foa_features_with(&audio, &clip, FeatureSpec { mel_log: false, ..FeatureSpec::foa() }).unwrap();
        assert!(!raw.spec.mel_log);
        for ((c, t, m), v) in raw.data.indexed_iter() {
            let l = log.data[[c, t, m]];
            if c < 4 {
                assert!(((*v as f64 + EPS).ln() - l as f64).abs() < 1e-4, "{c} {t} {m}");
            } else {
                assert_eq!(*v, l);
            }
        }
    }
}
