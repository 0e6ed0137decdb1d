//! Deterministic synthetic scenes: free-field FOA encoding, a parametric
//! spherical-head binaural renderer and ground-truth metadata.

mod dataset;
mod render;
mod rotate;
mod sources;

pub use dataset::{read_manifest, synth_clip, synth_dataset, write_manifest, ManifestEntry, MANIFEST_HEADER, MANIFEST_NAME};
use render::SINC_HALF;
pub use render::{encode_foa, render_binaural, HeadModel, Trajectory, TrajectoryPoint};
pub use rotate::{mirror_events, mirror_foa, rotate_events, rotate_foa};
pub use sources::{class_frequency, source_signal, SourceKind};

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::audio::Audio;
use crate::error::{Error, Result};
use crate::event::{canonicalize, ClipSpec, EventRecord, NUM_CLASSES, NUM_TRACKS};
use crate::features::AudioFormat;
use crate::geometry::wrap_degrees;

/// Scene generation parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SceneConfig {
    pub seed: u64,
    pub n_events: usize,
    pub max_polyphony: usize,
    /// Classes drawn uniformly for each event.
    pub classes: Vec<usize>,
    pub kinds: [SourceKind; NUM_CLASSES],
    /// Meters.
    pub distance_range: (f64, f64),
    /// Degrees.
    pub elevation_range: (f64, f64),
    /// Event length in label frames, inclusive.
    pub event_frames: (usize, usize),
    /// Probability that an event moves linearly.
    pub moving_prob: f64,
    /// Source RMS at 1 m.
    pub source_rms: f64,
    /// Source level at 1 m over diffuse noise, dB; infinite for none.
    pub snr_db: f64,
    pub head: HeadModel,
    pub clip: ClipSpec,
}

impl Default for SceneConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            n_events: 4,
            max_polyphony: NUM_TRACKS,
            classes: (0..NUM_CLASSES).collect(),
            kinds: std::array::from_fn(SourceKind::for_class),
            distance_range: (0.5, 5.0),
            elevation_range: (-40.0, 40.0),
            event_frames: (5, 25),
            moving_prob: 0.3,
            source_rms: 0.05,
            snr_db: 30.0,
            head: HeadModel::default(),
            clip: ClipSpec::default(),
        }
    }
}

impl SceneConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::BadConfig(m));
        self.clip.validate()?;
        if self.max_polyphony == 0 || self.max_polyphony > NUM_TRACKS {
            return bad(format!("max_polyphony must be in 1..={NUM_TRACKS}"));
        }
        if self.n_events > 0 && self.classes.is_empty() {
            return bad("empty class set".into());
        }
        if let Some(c) = self.classes.iter().find(|c| **c >= NUM_CLASSES) {
            return bad(format!("class {c} out of range"));
        }
        let (dmin, dmax) = self.distance_range;
        if !(dmin > 0.0 && dmin <= dmax && dmax.is_finite()) {
            return bad(format!("distance range ({dmin}, {dmax})"));
        }
        let (emin, emax) = self.elevation_range;
        if !(-90.0 <= emin && emin <= emax && emax <= 90.0) {
            return bad(format!("elevation range ({emin}, {emax})"));
        }
        let (lmin, lmax) = self.event_frames;
        if lmin == 0 || lmin > lmax || lmax > self.clip.label_frames {
            return bad(format!("event length range ({lmin}, {lmax})"));
        }
        if !(0.0..=1.0).contains(&self.moving_prob) {
            return bad(format!("moving probability {}", self.moving_prob));
        }
        if !(self.source_rms > 0.0 && self.source_rms.is_finite()) || self.snr_db.is_nan() {
            return bad("source level and SNR must be valid".into());
        }
        Ok(())
    }
}

/// One placed event.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SceneEvent {
    pub class_id: usize,
    pub track_id: usize,
    pub trajectory: Trajectory,
}

/// A rendered scene in both formats with its label-frame metadata.
#[derive(Debug, Clone, PartialEq)]
pub struct Scene {
    pub foa: Audio,
    pub binaural: Audio,
    pub sources: Vec<SceneEvent>,
    pub events: Vec<EventRecord>,
}

impl Scene {
    pub fn audio(&self, format: AudioFormat) -> &Audio {
        match format {
            AudioFormat::Foa => &self.foa,
            AudioFormat::Binaural => &self.binaural,
        }
    }
}

fn sample_normal(rng: &mut ChaCha8Rng) -> f64 {
    StandardNormal.sample(rng)
}

const RENDER_PAD: usize = 4 * SINC_HALF as usize;

// Values are rounded to the metadata file precision so that a CSV round trip
// reproduces the rendered trajectory exactly.
fn quantize(p: TrajectoryPoint) -> TrajectoryPoint {
    TrajectoryPoint {
        azimuth: match (wrap_degrees(p.azimuth) * 100.0).round() / 100.0 {
            a if a >= 180.0 => -180.0,
            a => a,
        },
        elevation: (p.elevation * 100.0).round() / 100.0,
        distance: (p.distance * 1000.0).round() / 1000.0,
    }
}

fn place_events(cfg: &SceneConfig, rng: &mut ChaCha8Rng) -> Result<Vec<SceneEvent>> {
    let frames = cfg.clip.label_frames;
    // per frame, per class: occupied track ids
    let mut used = vec![[[false; NUM_TRACKS]; NUM_CLASSES]; frames];
    let mut active = vec![0usize; frames];
    let mut placed = Vec::with_capacity(cfg.n_events);
    let (dmin, dmax) = cfg.distance_range;
    let (emin, emax) = cfg.elevation_range;
    for _ in 0..cfg.n_events {
        let class_id = cfg.classes[rng.random_range(0..cfg.classes.len())];
        let mut len = rng.random_range(cfg.event_frames.0..=cfg.event_frames.1);
        // shorten the event until some window stays under the polyphony limit
        let start = loop {
            let free: Vec<usize> = (0..=frames - len)
                .filter(|s| active[*s..*s + len].iter().all(|a| *a < cfg.max_polyphony))
                .collect();
            if !free.is_empty() {
                break free[rng.random_range(0..free.len())];
            }
            if len == cfg.event_frames.0 {
                return Err(Error::BadConfig(format!(
                    "cannot place {} events of at least {} frames under polyphony {}",
                    cfg.n_events, cfg.event_frames.0, cfg.max_polyphony
                )));
            }
            len = rng.random_range(cfg.event_frames.0..len);
        };
        let track_id = (0..NUM_TRACKS)
            .find(|k| (start..start + len).all(|f| !used[f][class_id][*k]))
            .ok_or(Error::TrackOverflow {
                frame: start,
                class_id,
                max: NUM_TRACKS,
            })?;
        for f in start..start + len {
            used[f][class_id][track_id] = true;
            active[f] += 1;
        }
        let from = TrajectoryPoint {
            azimuth: rng.random_range(-180.0..180.0),
            elevation: rng.random_range(emin..=emax),
            distance: rng.random_range(dmin..=dmax),
        };
        let moving = rng.random_bool(cfg.moving_prob);
        let trajectory = if moving {
            let to = TrajectoryPoint {
                azimuth: from.azimuth + rng.random_range(-45.0..45.0),
                elevation: (from.elevation + rng.random_range(-10.0..10.0)).clamp(emin, emax),
                distance: (from.distance + rng.random_range(-0.5..0.5)).clamp(dmin, dmax),
            };
            Trajectory::linear(start, len, from, to)
        } else {
            Trajectory::fixed(start, len, from.azimuth, from.elevation, from.distance)
        };
        let trajectory = Trajectory {
            start_frame: trajectory.start_frame,
            points: trajectory.points.into_iter().map(quantize).collect(),
        };
        placed.push(SceneEvent {
            class_id,
            track_id,
            trajectory,
        });
    }
    Ok(placed)
}

/// Renders one scene. Identical configs give bit-identical output.
pub fn synth_scene(cfg: &SceneConfig) -> Result<Scene> {
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let sources = place_events(cfg, &mut rng)?;
    let clip = &cfg.clip;
    let n = clip.clip_samples();
    let hop = clip.label_hop_samples();
    let mut foa = vec![vec![0f32; n]; 4];
    let mut binaural = vec![vec![0f32; n]; 2];
    let mut events = Vec::new();
    for ev in &sources {
        let traj = &ev.trajectory;
        let (a, b) = (traj.start_frame * hop, (traj.end_frame() * hop).min(n));
        let sig = source_signal(cfg.kinds[ev.class_id], ev.class_id, b - a, clip.sample_rate, cfg.source_rms, &mut rng);
        // the source is silent outside [a, b); pad for the interaural delay filter
        let (lo, hi) = (a - RENDER_PAD.min(a), b + RENDER_PAD.min(n - b));
        let mut src = vec![0f32; hi - lo];
        src[a - lo..b - lo].copy_from_slice(&sig);
        let enc = render::encode_foa_at(&src, lo, traj, clip)?;
        let bin = render::render_binaural_at(&src, lo, traj, clip, &cfg.head)?;
        for (acc, ch) in foa.iter_mut().zip(&enc.channels) {
            acc[lo..hi].iter_mut().zip(ch).for_each(|(x, y)| *x += y);
        }
        for (acc, ch) in binaural.iter_mut().zip(&bin.channels) {
            acc[lo..hi].iter_mut().zip(ch).for_each(|(x, y)| *x += y);
        }
        for (i, p) in traj.points.iter().enumerate() {
            events.push(EventRecord::new(
                traj.start_frame + i,
                ev.class_id,
                ev.track_id,
                p.azimuth,
                p.elevation,
                p.distance,
            ));
        }
    }
    if cfg.snr_db.is_finite() {
        let sigma = cfg.source_rms * 10f64.powf(-cfg.snr_db / 20.0);
        // isotropic diffuse field: W carries the full power, each dipole a third
        for (c, ch) in foa.iter_mut().enumerate() {
            let s = if c == 0 { sigma } else { sigma / 3f64.sqrt() };
            ch.iter_mut().for_each(|x| *x += (s * sample_normal(&mut rng)) as f32);
        }
        for ch in binaural.iter_mut() {
            ch.iter_mut().for_each(|x| *x += (sigma * sample_normal(&mut rng)) as f32);
        }
    }
    canonicalize(&mut events)?;
    Ok(Scene {
        foa: Audio::new(clip.sample_rate, foa)?,
        binaural: Audio::new(clip.sample_rate, binaural)?,
        sources,
        events,
    })
}
