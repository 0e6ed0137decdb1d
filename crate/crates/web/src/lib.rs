//! WebAssembly bindings for the browser demo in `www/`.
//!
//! Each export returns a flat `Float64Array`; the layouts are documented per
//! function. The same functions are plain Rust for native tests.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use wasm_bindgen::prelude::*;

use seld3d::features::{binaural_features, foa_features, FeatureTensor};
use seld3d::losses::LossKind;
use seld3d::simulate::{encode_foa, render_binaural, HeadModel, Trajectory};
use seld3d::{angular_distance, sph_to_unit, unit_to_sph, ClipSpec, Vec3};

fn js_err(e: seld3d::Error) -> JsError {
    JsError::new(&e.to_string())
}

#[wasm_bindgen(js_name = localize)]
pub fn localize_js(azimuth: f64, elevation: f64, distance: f64, snr_db: f64, seed: u64) -> Result<Vec<f64>, JsError> {
    localize(azimuth, elevation, distance, snr_db, seed).map_err(js_err)
}

#[wasm_bindgen(js_name = binauralCues)]
pub fn binaural_cues_js(azimuth: f64, elevation: f64, seed: u64) -> Result<Vec<f64>, JsError> {
    binaural_cues(azimuth, elevation, seed).map_err(js_err)
}

#[wasm_bindgen(js_name = lossCurves)]
pub fn loss_curves_js(target: f64, lo: f64, hi: f64, n: usize) -> Result<Vec<f64>, JsError> {
    loss_curves(target, lo, hi, n).map_err(js_err)
}

fn white_noise(len: usize, rms: f64, rng: &mut ChaCha8Rng) -> Vec<f32> {
    // uniform on [-a, a] has rms a / sqrt(3)
    let a = rms * 3f64.sqrt();
    (0..len).map(|_| rng.random_range(-a..a) as f32).collect()
}

fn add_noise(channels: &mut [Vec<f32>], rms: f64, rng: &mut ChaCha8Rng) {
    for ch in channels {
        let noise = white_noise(ch.len(), rms, rng);
        for (s, n) in ch.iter_mut().zip(noise) {
            *s += n;
        }
    }
}

fn static_source(clip: &ClipSpec, azimuth: f64, elevation: f64, distance: f64) -> Trajectory {
    Trajectory::fixed(0, clip.label_frames, azimuth, elevation, distance)
}

/// Time average of channel `c`, one value per feature column.
fn frame_mean(f: &FeatureTensor, c: usize) -> Vec<f64> {
    let (_, frames, cols) = f.data.dim();
    (0..cols)
        .map(|k| (0..frames).map(|t| f.data[[c, t, k]] as f64).sum::<f64>() / frames as f64)
        .collect()
}

/// Renders white noise at (azimuth, elevation, distance) to FOA, adds
/// independent sensor noise `snr_db` below the direct sound, and estimates
/// the direction from the mean intensity-vector channels.
///
/// Returns `[azimuth, elevation, error]` in degrees.
pub fn localize(azimuth: f64, elevation: f64, distance: f64, snr_db: f64, seed: u64) -> seld3d::Result<Vec<f64>> {
    let clip = ClipSpec::default();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let source = white_noise(clip.clip_samples(), 0.1, &mut rng);
    let mut audio = encode_foa(&source, &static_source(&clip, azimuth, elevation, distance), &clip)?;
    if snr_db.is_finite() {
        add_noise(&mut audio.channels, 0.1 / distance * 10f64.powf(-snr_db / 20.0), &mut rng);
    }
    let features = foa_features(&audio, &clip)?;
    let sum = |c: usize| frame_mean(&features, c).iter().sum::<f64>();
    let iv = Vec3::new(sum(4), sum(5), sum(6));
    let (az, el) = unit_to_sph(iv)?;
    let err = angular_distance(iv, sph_to_unit(azimuth, elevation))?;
    Ok(vec![az, el, err])
}

/// Binaural cues of white noise at (azimuth, elevation) through the
/// spherical-head renderer, against the head model's own prediction.
///
/// Returns five blocks of 512 values: bin frequency (Hz), measured IPD,
/// predicted IPD (both radians, wrapped to (-pi, pi]), measured ILD and
/// predicted ILD (dB).
pub fn binaural_cues(azimuth: f64, elevation: f64, seed: u64) -> seld3d::Result<Vec<f64>> {
    let clip = ClipSpec::default();
    let head = HeadModel::default();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let source = white_noise(clip.clip_samples(), 0.1, &mut rng);
    let audio = render_binaural(&source, &static_source(&clip, azimuth, elevation, 1.0), &clip, &head)?;
    let features = binaural_features(&audio, &clip)?;

    let (sin, cos, ild) = (frame_mean(&features, 1), frame_mean(&features, 2), frame_mean(&features, 3));
    let fft = clip.fft_size() as f64;
    let lateral = HeadModel::lateral_angle(sph_to_unit(azimuth, elevation));
    let itd = head.itd(lateral);
    let freqs: Vec<f64> = (0..sin.len()).map(|k| (k + 1) as f64 * clip.sample_rate as f64 / fft).collect();

    let mut out = freqs.clone();
    out.extend(sin.iter().zip(&cos).map(|(s, c)| s.atan2(*c)));
    out.extend(freqs.iter().map(|f| wrap(2.0 * PI * f * itd)));
    out.extend(ild);
    out.extend(freqs.iter().map(|_| head.ild(lateral)));
    Ok(out)
}

fn wrap(phase: f64) -> f64 {
    let p = phase.rem_euclid(2.0 * PI);
    if p > PI {
        p - 2.0 * PI
    } else {
        p
    }
}

/// The four distance losses for predictions on `n` points spanning
/// `[lo, hi]` against a fixed `target` distance.
///
/// Returns five blocks of `n` values: predictions, then MSE, MAE, MSPE and
/// MAPE.
pub fn loss_curves(target: f64, lo: f64, hi: f64, n: usize) -> seld3d::Result<Vec<f64>> {
    if !(target > 0.0) || !(hi > lo) || n < 2 {
        return Err(seld3d::Error::BadConfig("need target > 0, hi > lo and n >= 2".into()));
    }
    let preds: Vec<f64> = (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect();
    let mut out = preds.clone();
    for kind in LossKind::ALL {
        out.extend(preds.iter().map(|&p| kind.term(p, target).0));
    }
    Ok(out)
}
