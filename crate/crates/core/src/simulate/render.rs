use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::audio::Audio;
use crate::error::{Error, Result};
use crate::event::ClipSpec;
use crate::geometry::{sph_to_unit, Vec3};

/// One trajectory point on the label grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryPoint {
    pub azimuth: f64,
    pub elevation: f64,
    pub distance: f64,
}

/// Source position per label frame, starting at `start_frame`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub start_frame: usize,
    pub points: Vec<TrajectoryPoint>,
}

impl Trajectory {
    pub fn fixed(start_frame: usize, frames: usize, azimuth: f64, elevation: f64, distance: f64) -> Self {
        Self {
            start_frame,
            points: vec![
                TrajectoryPoint {
                    azimuth,
                    elevation,
                    distance
                };
                frames
            ],
        }
    }

    /// Linear motion from `from` to `to` over `frames` label frames
    /// (azimuth is interpolated along the shorter arc).
    pub fn linear(start_frame: usize, frames: usize, from: TrajectoryPoint, to: TrajectoryPoint) -> Self {
        let daz = crate::geometry::wrap_degrees(to.azimuth - from.azimuth);
        let points = (0..frames)
            .map(|i| {
                let a = if frames > 1 { i as f64 / (frames - 1) as f64 } else { 0.0 };
                TrajectoryPoint {
                    azimuth: crate::geometry::wrap_degrees(from.azimuth + a * daz),
                    elevation: from.elevation + a * (to.elevation - from.elevation),
                    distance: from.distance + a * (to.distance - from.distance),
                }
            })
            .collect();
        Self { start_frame, points }
    }

    pub fn end_frame(&self) -> usize {
        self.start_frame + self.points.len()
    }

    pub fn validate(&self) -> Result<()> {
        if self.points.is_empty() {
            return Err(Error::BadTrajectory("no points".into()));
        }
        for p in &self.points {
            if !(p.distance > 0.0 && p.distance.is_finite()) {
                return Err(Error::BadTrajectory(format!("distance {}", p.distance)));
            }
            if !(p.azimuth.is_finite() && (-90.0..=90.0).contains(&p.elevation)) {
                return Err(Error::BadTrajectory(format!(
                    "direction ({}, {})",
                    p.azimuth, p.elevation
                )));
            }
        }
        Ok(())
    }

    /// Per-frame values linearly interpolated at fractional label frame `x`,
    /// held constant outside the trajectory.
    fn interpolate<const K: usize>(&self, x: f64, values: &[[f64; K]]) -> [f64; K] {
        let rel = (x - self.start_frame as f64).clamp(0.0, (values.len() - 1) as f64);
        let i = rel.floor() as usize;
        let j = (i + 1).min(values.len() - 1);
        let a = rel - i as f64;
        std::array::from_fn(|k| values[i][k] * (1.0 - a) + values[j][k] * a)
    }
}

fn check_rate(clip: &ClipSpec, traj: &Trajectory) -> Result<()> {
    clip.validate()?;
    traj.validate()
}

/// First-order Ambisonics (ACN order W, Y, Z, X; SN3D) of a point source
/// with 1/d gain (1 m reference). Gains are set per label frame and linearly
/// interpolated between frame starts.
pub fn encode_foa(source: &[f32], traj: &Trajectory, clip: &ClipSpec) -> Result<Audio> {
    encode_foa_at(source, 0, traj, clip)
}

/// As [`encode_foa`] for a segment whose first sample sits at `offset` in the clip.
pub(crate) fn encode_foa_at(source: &[f32], offset: usize, traj: &Trajectory, clip: &ClipSpec) -> Result<Audio> {
    check_rate(clip, traj)?;
    let gains: Vec<[f64; 4]> = traj
        .points
        .iter()
        .map(|p| {
            let (az, el) = (p.azimuth.to_radians(), p.elevation.to_radians());
            let g = 1.0 / p.distance;
            [g, g * az.sin() * el.cos(), g * el.sin(), g * az.cos() * el.cos()]
        })
        .collect();
    let hop = clip.label_hop_samples() as f64;
    let mut out: Vec<Vec<f32>> = (0..4).map(|_| Vec::with_capacity(source.len())).collect();
    for (i, s) in source.iter().enumerate() {
        let g = traj.interpolate((offset + i) as f64 / hop, &gains);
        for c in 0..4 {
            out[c].push((*s as f64 * g[c]) as f32);
        }
    }
    Audio::new(clip.sample_rate, out)
}

/// Spherical-head binaural parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HeadModel {
    /// Meters.
    pub radius: f64,
    /// Speed of sound, m/s.
    pub speed_of_sound: f64,
    /// ILD at full lateralization, dB.
    pub ild_db: f64,
}

impl Default for HeadModel {
    fn default() -> Self {
        Self {
            radius: 0.0875,
            speed_of_sound: 343.0,
            ild_db: 6.0,
        }
    }
}

impl HeadModel {
    /// Lateral angle in radians (positive towards the left ear, +y).
    pub fn lateral_angle(dir: Vec3) -> f64 {
        dir.y.clamp(-1.0, 1.0).asin()
    }

    /// Woodworth ITD in seconds; positive when the left ear leads.
    pub fn itd(&self, lateral: f64) -> f64 {
        self.radius / self.speed_of_sound * (lateral + lateral.sin())
    }

    /// Level difference left minus right, dB.
    pub fn ild(&self, lateral: f64) -> f64 {
        self.ild_db * lateral.sin()
    }
}

pub(crate) const SINC_HALF: isize = 16;

/// Blackman-windowed sinc interpolation of `x` at fractional index `pos`.
fn fractional_sample(x: &[f32], pos: f64) -> f64 {
    let base = pos.floor() as isize;
    let mut acc = 0.0;
    for k in (base - SINC_HALF + 1)..=(base + SINC_HALF) {
        if k < 0 || k as usize >= x.len() {
            continue;
        }
        let d = pos - k as f64;
        let sinc = if d.abs() < 1e-12 { 1.0 } else { (PI * d).sin() / (PI * d) };
        let w = 0.42 + 0.5 * (PI * d / SINC_HALF as f64).cos() + 0.08 * (2.0 * PI * d / SINC_HALF as f64).cos();
        acc += x[k as usize] as f64 * sinc * w;
    }
    acc
}

/// Parametric binaural rendering: Woodworth ITD applied as a symmetric
/// fractional delay (+-ITD/2), broadband ILD `k sin(lateral)` split evenly
/// between the ears, and 1/d gain.
pub fn render_binaural(source: &[f32], traj: &Trajectory, clip: &ClipSpec, head: &HeadModel) -> Result<Audio> {
    render_binaural_at(source, 0, traj, clip, head)
}

pub(crate) fn render_binaural_at(
    source: &[f32],
    offset: usize,
    traj: &Trajectory,
    clip: &ClipSpec,
    head: &HeadModel,
) -> Result<Audio> {
    check_rate(clip, traj)?;
    let geometry: Vec<[f64; 4]> = traj
        .points
        .iter()
        .map(|p| {
            let d = sph_to_unit(p.azimuth, p.elevation);
            [d.x, d.y, d.z, p.distance]
        })
        .collect();
    let fs = clip.sample_rate as f64;
    let hop = clip.label_hop_samples() as f64;
    let mut left = Vec::with_capacity(source.len());
    let mut right = Vec::with_capacity(source.len());
    for i in 0..source.len() {
        let [x, y, z, dist] = traj.interpolate((offset + i) as f64 / hop, &geometry);
        let dir = Vec3::new(x, y, z).normalized().unwrap_or(Vec3::new(1.0, 0.0, 0.0));
        let lat = HeadModel::lateral_angle(dir);
        let half_itd = 0.5 * head.itd(lat) * fs;
        let half_ild = 0.5 * head.ild(lat);
        let gl = 10f64.powf(half_ild / 20.0) / dist;
        let gr = 10f64.powf(-half_ild / 20.0) / dist;
        let t = i as f64;
        left.push((gl * fractional_sample(source, t + half_itd)) as f32);
        right.push((gr * fractional_sample(source, t - half_itd)) as f32);
    }
    Audio::new(clip.sample_rate, vec![left, right])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn noise(len: usize) -> Vec<f32> {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        (0..len).map(|_| rng.random_range(-0.5f32..0.5)).collect()
    }

    fn rms(x: &[f32]) -> f64 {
        (x.iter().map(|v| (*v as f64).powi(2)).sum::<f64>() / x.len() as f64).sqrt()
    }

    #[test]
    fn frontal_unit_distance() {
        let src = noise(4800);
        let a = encode_foa(&src, &Trajectory::fixed(0, 2, 0.0, 0.0, 1.0), &ClipSpec::default()).unwrap();
        assert_eq!(a.channels[0], src);
        assert_eq!(a.channels[3], src);
        assert!(a.channels[1].iter().chain(&a.channels[2]).all(|v| v.abs() < 1e-7));
    }

    #[test]
    fn inverse_distance_gain() {
        let src = noise(4800);
        let clip = ClipSpec::default();
        let near = encode_foa(&src, &Trajectory::fixed(0, 2, 30.0, 10.0, 1.5), &clip).unwrap();
        let far = encode_foa(&src, &Trajectory::fixed(0, 2, 30.0, 10.0, 3.0), &clip).unwrap();
        for c in 0..4 {
            for (a, b) in near.channels[c].iter().zip(&far.channels[c]) {
                assert!((a * 0.5 - b).abs() < 1e-6);
            }
        }
        assert!((rms(&near.channels[0]) / rms(&far.channels[0]) - 2.0).abs() < 1e-3);
    }

    #[test]
    fn gains_interpolate_between_frames() {
        let src = vec![1.0f32; 4800];
        let from = TrajectoryPoint { azimuth: 0.0, elevation: 0.0, distance: 1.0 };
        let to = TrajectoryPoint { azimuth: 0.0, elevation: 0.0, distance: 2.0 };
        let a = encode_foa(&src, &Trajectory::linear(0, 2, from, to), &ClipSpec::default()).unwrap();
        assert!((a.channels[0][0] - 1.0).abs() < 1e-6);
        // halfway between frame 0 (g = 1) and frame 1 (g = 0.5)
        assert!((a.channels[0][1200] - 0.75).abs() < 1e-6);
        assert!((a.channels[0][3000] - 0.5).abs() < 1e-6);
    }

    #[test]
    fn bad_trajectories() {
        let clip = ClipSpec::default();
        let empty = Trajectory { start_frame: 0, points: vec![] };
        assert!(matches!(encode_foa(&[0.0], &empty, &clip), Err(Error::BadTrajectory(_))));
        let neg = Trajectory::fixed(0, 1, 0.0, 0.0, -1.0);
        assert!(render_binaural(&[0.0], &neg, &clip, &HeadModel::default()).is_err());
    }

    #[test]
    fn frontal_binaural_is_symmetric() {
        let src = noise(4800);
        let a = render_binaural(&src, &Trajectory::fixed(0, 2, 0.0, 0.0, 1.0), &ClipSpec::default(), &HeadModel::default())
            .unwrap();
        assert_eq!(a.channels[0], a.channels[1]);
        for (o, s) in a.channels[0].iter().zip(&src) {
            assert!((o - s).abs() < 1e-5);
        }
    }

    #[test]
    fn woodworth_itd() {
        let h = HeadModel::default();
        let itd = h.itd(HeadModel::lateral_angle(sph_to_unit(90.0, 0.0)));
        let expected = 0.0875 / 343.0 * (PI / 2.0 + 1.0);
        assert!((itd - expected).abs() < 1e-12);
        assert!((itd * 1e6 - 655.9).abs() < 0.5, "{}", itd * 1e6);
        assert!((h.ild(PI / 2.0) - 6.0).abs() < 1e-12);
    }

    #[test]
    fn lateral_level_difference() {
        let src = noise(24_000);
        let a = render_binaural(&src, &Trajectory::fixed(0, 10, 90.0, 0.0, 2.0), &ClipSpec::default(), &HeadModel::default())
            .unwrap();
        let ild = 20.0 * (rms(&a.channels[0][100..23_900]) / rms(&a.channels[1][100..23_900])).log10();
        assert!((ild - 6.0).abs() < 0.05, "{ild}");
    }
}
