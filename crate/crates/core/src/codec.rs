//! Output representations: multi-ACCDDOA (per track `[a*R, D]`) and the
//! two-branch multi-task format (classwise ACCDOA + classwise distance).
//!
//! Flattened frame layouts used by the model heads:
//!
//! * multi-ACCDDOA: `n * C * 4 + c * 4 + k` with `k` over `x, y, z, D`.
//! * multi-task: `k * C + c` for the 39 ACCDOA values, then `39 + c` for the
//!   13 distances.

use ndarray::{Array2, Array3, Array4, ArrayView2, ArrayView3, ArrayView4};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::event::{EventRecord, NUM_CLASSES, NUM_TRACKS};
use crate::geometry::{angular_distance, unit_to_sph, Vec3};

/// Decoded distances are floored here so every emitted record is valid.
pub const MIN_DECODED_DISTANCE: f64 = 1e-3;

/// All orderings of three tracks, in lexicographic order. The index into
/// this table is the tie-break order for the permutation-invariant loss.
pub const PERMUTATIONS: [[usize; NUM_TRACKS]; 6] = [
    [0, 1, 2],
    [0, 2, 1],
    [1, 0, 2],
    [1, 2, 0],
    [2, 0, 1],
    [2, 1, 0],
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OutputMethod {
    MultiTask,
    MultiAccddoa,
}

impl OutputMethod {
    pub fn name(self) -> &'static str {
        match self {
            OutputMethod::MultiTask => "mt",
            OutputMethod::MultiAccddoa => "multi-accddoa",
        }
    }
}

impl std::str::FromStr for OutputMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "mt" | "multi-task" | "multitask" => Ok(OutputMethod::MultiTask),
            "multi-accddoa" | "accddoa" | "multi_accddoa" => Ok(OutputMethod::MultiAccddoa),
            other => Err(Error::BadConfig(format!("unknown output method {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Activation {
    Tanh,
    Relu,
    Linear,
}

impl Activation {
    pub fn apply(self, x: f64) -> f64 {
        match self {
            Activation::Tanh => x.tanh(),
            Activation::Relu => x.max(0.0),
            Activation::Linear => x,
        }
    }
}

/// Output head layout: number of branches, their widths and activations.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutputSpec {
    pub method: OutputMethod,
    pub widths: Vec<usize>,
    pub activations: Vec<Activation>,
}

impl OutputSpec {
    pub fn new(method: OutputMethod) -> Self {
        match method {
            OutputMethod::MultiTask => Self {
                method,
                widths: vec![3 * NUM_CLASSES, NUM_CLASSES],
                activations: vec![Activation::Tanh, Activation::Relu],
            },
            OutputMethod::MultiAccddoa => Self {
                method,
                widths: vec![NUM_TRACKS * NUM_CLASSES * 4],
                activations: vec![Activation::Linear],
            },
        }
    }

    pub fn branches(&self) -> usize {
        self.widths.len()
    }

    pub fn total_width(&self) -> usize {
        self.widths.iter().sum()
    }
}

/// Multi-ACCDDOA target: activity, unit DOA and distance per track, class
/// and label frame.
#[derive(Debug, Clone, PartialEq)]
pub struct AccddoaTensor {
    /// N x C x T, values in {0, 1}.
    pub activity: Array3<f64>,
    /// 3 x N x C x T.
    pub doa: Array4<f64>,
    /// N x C x T, meters.
    pub distance: Array3<f64>,
}

impl AccddoaTensor {
    pub fn zeros(frames: usize) -> Self {
        Self {
            activity: Array3::zeros((NUM_TRACKS, NUM_CLASSES, frames)),
            doa: Array4::zeros((3, NUM_TRACKS, NUM_CLASSES, frames)),
            distance: Array3::zeros((NUM_TRACKS, NUM_CLASSES, frames)),
        }
    }

    pub fn frames(&self) -> usize {
        self.activity.dim().2
    }

    pub const fn frame_width() -> usize {
        NUM_TRACKS * NUM_CLASSES * 4
    }

    /// Raw `[a*R, D]` tensor, N x C x T x 4.
    pub fn to_raw(&self) -> Array4<f64> {
        let t_len = self.frames();
        Array4::from_shape_fn((NUM_TRACKS, NUM_CLASSES, t_len, 4), |(n, c, t, k)| {
            if k < 3 {
                self.activity[[n, c, t]] * self.doa[[k, n, c, t]]
            } else {
                self.distance[[n, c, t]]
            }
        })
    }

    pub fn check_invariants(&self) -> Result<()> {
        let (n_len, c_len, t_len) = self.activity.dim();
        for n in 0..n_len {
            for c in 0..c_len {
                for t in 0..t_len {
                    let a = self.activity[[n, c, t]];
                    let r = Vec3::new(
                        self.doa[[0, n, c, t]],
                        self.doa[[1, n, c, t]],
                        self.doa[[2, n, c, t]],
                    );
                    let d = self.distance[[n, c, t]];
                    let ok = if a == 1.0 {
                        (r.norm() - 1.0).abs() < 1e-6 && d >= 0.0
                    } else {
                        a == 0.0 && r == Vec3::ZERO && d == 0.0
                    };
                    if !ok {
                        return Err(Error::ShapeMismatch(format!(
                            "invalid slot (n {n}, c {c}, t {t})"
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Converts a `T x 156` matrix of head outputs into the N x C x T x 4 layout.
pub fn accddoa_from_frames(frames: ArrayView2<f64>) -> Result<Array4<f64>> {
    let (t_len, width) = frames.dim();
    if width != AccddoaTensor::frame_width() {
        return Err(Error::ShapeMismatch(format!(
            "multi-ACCDDOA frame width {width}, expected {}",
            AccddoaTensor::frame_width()
        )));
    }
    Ok(Array4::from_shape_fn(
        (NUM_TRACKS, NUM_CLASSES, t_len, 4),
        |(n, c, t, k)| frames[[t, n * NUM_CLASSES * 4 + c * 4 + k]],
    ))
}

/// Inverse of [`accddoa_from_frames`].
pub fn accddoa_to_frames(raw: ArrayView4<f64>) -> Array2<f64> {
    let (n_len, c_len, t_len, _) = raw.dim();
    let mut out = Array2::zeros((t_len, n_len * c_len * 4));
    for ((n, c, t, k), v) in raw.indexed_iter() {
        out[[t, n * c_len * 4 + c * 4 + k]] = *v;
    }
    out
}

fn check_event(e: &EventRecord, frames: usize) -> Result<()> {
    e.validate()?;
    if e.frame >= frames {
        return Err(Error::GridMismatch {
            frame: e.frame,
            frames,
        });
    }
    Ok(())
}

pub fn encode_multi_accddoa(events: &[EventRecord], frames: usize) -> Result<AccddoaTensor> {
    let mut out = AccddoaTensor::zeros(frames);
    for e in events {
        check_event(e, frames)?;
        if e.track_id >= NUM_TRACKS {
            return Err(Error::TrackOverflow {
                frame: e.frame,
                class_id: e.class_id,
                max: NUM_TRACKS,
            });
        }
        let (n, c, t) = (e.track_id, e.class_id, e.frame);
        if out.activity[[n, c, t]] != 0.0 {
            return Err(Error::Range {
                field: "track",
                value: format!("duplicate (frame {t}, class {c}, track {n})"),
            });
        }
        let r = e.doa();
        out.activity[[n, c, t]] = 1.0;
        for (k, v) in r.to_array().into_iter().enumerate() {
            out.doa[[k, n, c, t]] = v;
        }
        out.distance[[n, c, t]] = e.distance;
    }
    Ok(out)
}

/// One track slot of the multi-ACCDDOA output: `[a*x, a*y, a*z, D]`.
pub type Slot = [f64; 4];

/// Pads the `k <= N` events of one class at one frame to exactly `N` slots
/// by cyclic duplication; `k = 0` gives all-inactive slots.
pub fn adpit_targets(events: &[Slot]) -> Result<[Slot; NUM_TRACKS]> {
    if events.len() > NUM_TRACKS {
        return Err(Error::TrackOverflow {
            frame: 0,
            class_id: 0,
            max: NUM_TRACKS,
        });
    }
    let mut out = [[0.0; 4]; NUM_TRACKS];
    if !events.is_empty() {
        for (i, slot) in out.iter_mut().enumerate() {
            *slot = events[i % events.len()];
        }
    }
    Ok(out)
}

/// Padded ADPIT targets for a whole clip, laid out C x T x N x 4.
#[derive(Debug, Clone, PartialEq)]
pub struct AdpitTargets {
    pub slots: Array4<f64>,
}

impl AdpitTargets {
    pub fn frames(&self) -> usize {
        self.slots.dim().1
    }

    /// Builds targets from events: per (class, frame) the active tracks are
    /// taken in track order and padded with [`adpit_targets`].
    pub fn from_events(events: &[EventRecord], frames: usize) -> Result<Self> {
        let enc = encode_multi_accddoa(events, frames)?;
        Ok(Self::from_tensor(&enc))
    }

    pub fn from_tensor(enc: &AccddoaTensor) -> Self {
        let frames = enc.frames();
        let raw = enc.to_raw();
        let mut slots = Array4::zeros((NUM_CLASSES, frames, NUM_TRACKS, 4));
        for c in 0..NUM_CLASSES {
            for t in 0..frames {
                let active: Vec<Slot> = (0..NUM_TRACKS)
                    .filter(|&n| enc.activity[[n, c, t]] == 1.0)
                    .map(|n| [raw[[n, c, t, 0]], raw[[n, c, t, 1]], raw[[n, c, t, 2]], raw[[n, c, t, 3]]])
                    .collect();
                let padded = adpit_targets(&active).expect("at most N tracks by construction");
                for (n, slot) in padded.iter().enumerate() {
                    for k in 0..4 {
                        slots[[c, t, n, k]] = slot[k];
                    }
                }
            }
        }
        Self { slots }
    }

    /// Concatenates clips along the frame axis.
    pub fn concat(parts: &[&AdpitTargets]) -> Self {
        let views: Vec<_> = parts.iter().map(|p| p.slots.view()).collect();
        let slots = ndarray::concatenate(ndarray::Axis(1), &views).expect("same C, N, 4");
        Self { slots }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecodeConfig {
    /// Activity threshold on the DOA vector norm.
    pub threshold: f64,
    /// Same-class tracks closer than this (degrees) are merged.
    pub merge_angle: f64,
}

impl Default for DecodeConfig {
    fn default() -> Self {
        Self {
            threshold: 0.5,
            merge_angle: 15.0,
        }
    }
}

struct Cluster {
    anchor: Vec3,
    sum: Vec3,
    dist: f64,
    count: usize,
}

fn emit(
    out: &mut Vec<EventRecord>,
    frame: usize,
    class_id: usize,
    candidates: &[(Vec3, f64)],
    merge_angle: f64,
) {
    let mut clusters: Vec<Cluster> = Vec::new();
    for &(dir, dist) in candidates {
        let hit = clusters
            .iter_mut()
            .find(|cl| angular_distance(cl.anchor, dir).unwrap_or(180.0) <= merge_angle);
        match hit {
            Some(cl) => {
                cl.sum = cl.sum.add(dir);
                cl.dist += dist;
                cl.count += 1;
            }
            None => clusters.push(Cluster {
                anchor: dir,
                sum: dir,
                dist,
                count: 1,
            }),
        }
    }
    for (track_id, cl) in clusters.into_iter().enumerate() {
        let dir = cl.sum.normalized().unwrap_or(cl.anchor);
        let (azimuth, elevation) = unit_to_sph(dir).expect("unit vector");
        out.push(EventRecord {
            frame,
            class_id,
            track_id,
            azimuth,
            elevation,
            distance: (cl.dist / cl.count as f64).max(MIN_DECODED_DISTANCE),
        });
    }
}

/// Decodes an N x C x T x 4 prediction. Track ids are renumbered per
/// (frame, class) in slot order after merging.
pub fn decode_multi_accddoa(pred: ArrayView4<f64>, cfg: &DecodeConfig) -> Vec<EventRecord> {
    let (n_len, c_len, t_len, _) = pred.dim();
    let mut out = Vec::new();
    for t in 0..t_len {
        for c in 0..c_len {
            let candidates: Vec<(Vec3, f64)> = (0..n_len)
                .filter_map(|n| {
                    let v = Vec3::new(pred[[n, c, t, 0]], pred[[n, c, t, 1]], pred[[n, c, t, 2]]);
                    (v.norm() > cfg.threshold)
                        .then(|| (v.scale(1.0 / v.norm()), pred[[n, c, t, 3]].max(0.0)))
                })
                .collect();
            emit(&mut out, t, c, &candidates, cfg.merge_angle);
        }
    }
    out
}

/// Multi-task target: classwise ACCDOA (3 x C x T) and distance (C x T).
#[derive(Debug, Clone, PartialEq)]
pub struct MtTensor {
    pub accdoa: Array3<f64>,
    pub dist: Array2<f64>,
}

impl MtTensor {
    pub fn zeros(frames: usize) -> Self {
        Self {
            accdoa: Array3::zeros((3, NUM_CLASSES, frames)),
            dist: Array2::zeros((NUM_CLASSES, frames)),
        }
    }

    pub fn frames(&self) -> usize {
        self.dist.dim().1
    }

    pub const fn widths() -> [usize; 2] {
        [3 * NUM_CLASSES, NUM_CLASSES]
    }

    /// From a `T x 52` matrix of head outputs.
    pub fn from_frames(frames: ArrayView2<f64>) -> Result<Self> {
        let (t_len, width) = frames.dim();
        let [w1, w2] = Self::widths();
        if width != w1 + w2 {
            return Err(Error::ShapeMismatch(format!(
                "multi-task frame width {width}, expected {}",
                w1 + w2
            )));
        }
        Ok(Self {
            accdoa: Array3::from_shape_fn((3, NUM_CLASSES, t_len), |(k, c, t)| {
                frames[[t, k * NUM_CLASSES + c]]
            }),
            dist: Array2::from_shape_fn((NUM_CLASSES, t_len), |(c, t)| frames[[t, w1 + c]]),
        })
    }

    pub fn to_frames(&self) -> Array2<f64> {
        let t_len = self.frames();
        let [w1, w2] = Self::widths();
        Array2::from_shape_fn((t_len, w1 + w2), |(t, j)| {
            if j < w1 {
                self.accdoa[[j / NUM_CLASSES, j % NUM_CLASSES, t]]
            } else {
                self.dist[[j - w1, t]]
            }
        })
    }

    pub fn concat(parts: &[&MtTensor]) -> Self {
        let a: Vec<_> = parts.iter().map(|p| p.accdoa.view()).collect();
        let d: Vec<_> = parts.iter().map(|p| p.dist.view()).collect();
        Self {
            accdoa: ndarray::concatenate(ndarray::Axis(2), &a).expect("same class count"),
            dist: ndarray::concatenate(ndarray::Axis(1), &d).expect("same class count"),
        }
    }
}

pub fn encode_mt(events: &[EventRecord], frames: usize) -> Result<MtTensor> {
    let mut out = MtTensor::zeros(frames);
    let mut taken = Array2::<bool>::default((NUM_CLASSES, frames));
    for e in events {
        check_event(e, frames)?;
        let (c, t) = (e.class_id, e.frame);
        if taken[[c, t]] {
            return Err(Error::ClasswiseCollision {
                frame: t,
                class_id: c,
            });
        }
        taken[[c, t]] = true;
        for (k, v) in e.doa().to_array().into_iter().enumerate() {
            out.accdoa[[k, c, t]] = v;
        }
        out.dist[[c, t]] = e.distance;
    }
    Ok(out)
}

/// Decodes classwise predictions; track id is always 0.
pub fn decode_mt(accdoa: ArrayView3<f64>, dist: ArrayView2<f64>, cfg: &DecodeConfig) -> Vec<EventRecord> {
    let (_, c_len, t_len) = accdoa.dim();
    let mut out = Vec::new();
    for t in 0..t_len {
        for c in 0..c_len {
            let v = Vec3::new(accdoa[[0, c, t]], accdoa[[1, c, t]], accdoa[[2, c, t]]);
            if v.norm() > cfg.threshold {
                emit(&mut out, t, c, &[(v.scale(1.0 / v.norm()), dist[[c, t]].max(0.0))], cfg.merge_angle);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::Array4;
    use std::collections::BTreeSet;

    #[test]
    fn output_spec_table() {
        let mt = OutputSpec::new(OutputMethod::MultiTask);
        assert_eq!(mt.branches(), 2);
        assert_eq!(mt.widths, [39, 13]);
        assert_eq!(mt.activations, [Activation::Tanh, Activation::Relu]);
        let ma = OutputSpec::new(OutputMethod::MultiAccddoa);
        assert_eq!(ma.branches(), 1);
        assert_eq!(ma.widths, [156]);
        assert_eq!(ma.activations, [Activation::Linear]);
        assert_eq!(AccddoaTensor::frame_width(), 156);
    }

    #[test]
    fn encode_empty_and_single() {
        let z = encode_multi_accddoa(&[], 50).unwrap();
        assert!(z.to_raw().iter().all(|v| *v == 0.0));
        let e = EventRecord::new(7, 3, 0, 0.0, 0.0, 2.0);
        let enc = encode_multi_accddoa(&[e], 50).unwrap();
        enc.check_invariants().unwrap();
        let raw = enc.to_raw();
        assert_eq!(
            [raw[[0, 3, 7, 0]], raw[[0, 3, 7, 1]], raw[[0, 3, 7, 2]], raw[[0, 3, 7, 3]]],
            [1.0, 0.0, 0.0, 2.0]
        );
        assert_eq!(raw.iter().filter(|v| **v != 0.0).count(), 2);
        assert_eq!(accddoa_to_frames(raw.view()).dim(), (50, 156));
    }

    #[test]
    fn encode_errors() {
        let e = EventRecord::new(0, 0, 3, 0.0, 0.0, 1.0);
        assert!(matches!(
            encode_multi_accddoa(&[e], 50),
            Err(Error::TrackOverflow { .. })
        ));
        let e = EventRecord::new(50, 0, 0, 0.0, 0.0, 1.0);
        assert!(matches!(
            encode_multi_accddoa(&[e], 50),
            Err(Error::GridMismatch { .. })
        ));
    }

    #[test]
    fn frame_layout_round_trip() {
        let raw = Array4::from_shape_fn((3, 13, 4, 4), |(n, c, t, k)| (n * 1000 + c * 100 + t * 10 + k) as f64);
        let frames = accddoa_to_frames(raw.view());
        assert_eq!(frames[[2, 1 * 52 + 5 * 4 + 3]], 1523.0);
        assert_eq!(accddoa_from_frames(frames.view()).unwrap(), raw);
        assert!(accddoa_from_frames(Array2::zeros((2, 155)).view()).is_err());
    }

    fn all_orderings(padded: &[Slot; 3]) -> Vec<[Slot; 3]> {
        PERMUTATIONS
            .iter()
            .map(|p| [padded[p[0]], padded[p[1]], padded[p[2]]])
            .collect()
    }

    fn distinct(v: &[[Slot; 3]]) -> usize {
        v.iter()
            .map(|s| format!("{s:?}"))
            .collect::<BTreeSet<_>>()
            .len()
    }

    #[test]
    fn adpit_padding() {
        assert_eq!(adpit_targets(&[]).unwrap(), [[0.0; 4]; 3]);

        let e = [1.0, 0.0, 0.0, 2.0];
        let p = adpit_targets(&[e]).unwrap();
        assert_eq!(p, [e, e, e]);
        assert_eq!(distinct(&all_orderings(&p)), 1);

        let e2 = [0.0, 1.0, 0.0, 3.0];
        let p = adpit_targets(&[e, e2]).unwrap();
        assert_eq!(p, [e, e2, e]);
        let perms = all_orderings(&p);
        assert_eq!(perms.len(), 6);
        assert_eq!(distinct(&perms), 3);

        let e3 = [0.0, 0.0, 1.0, 4.0];
        assert_eq!(distinct(&all_orderings(&adpit_targets(&[e, e2, e3]).unwrap())), 6);
        assert!(adpit_targets(&[e, e, e, e]).is_err());
    }

    #[test]
    fn targets_from_events() {
        let ev = [
            EventRecord::new(1, 4, 0, 0.0, 0.0, 1.0),
            EventRecord::new(1, 4, 2, 90.0, 0.0, 2.0),
        ];
        let t = AdpitTargets::from_events(&ev, 3).unwrap();
        assert_eq!(t.slots.dim(), (13, 3, 3, 4));
        let slot = |n: usize| [0, 1, 2, 3].map(|k| t.slots[[4, 1, n, k]]);
        assert_eq!(slot(0), slot(2));
        assert_eq!(slot(0)[3], 1.0);
        assert_eq!(slot(1)[3], 2.0);
        assert!(t.slots.iter().filter(|v| **v != 0.0).count() > 0);
        let both = AdpitTargets::concat(&[&t, &t]);
        assert_eq!(both.frames(), 6);
    }

    #[test]
    fn decode_examples() {
        let mut raw = Array4::zeros((3, 13, 2, 4));
        raw[[0, 0, 0, 0]] = 1.0;
        raw[[0, 0, 0, 3]] = 2.0;
        raw[[1, 5, 1, 0]] = 0.2;
        raw[[1, 5, 1, 3]] = 5.0;
        let ev = decode_multi_accddoa(raw.view(), &DecodeConfig::default());
        assert_eq!(ev, vec![EventRecord::new(0, 0, 0, 0.0, 0.0, 2.0)]);
    }

    #[test]
    fn decode_merges_close_tracks_and_clamps_distance() {
        let mut raw = Array4::zeros((3, 13, 1, 4));
        raw[[0, 2, 0, 0]] = 1.0;
        raw[[0, 2, 0, 3]] = 2.0;
        let a = 10f64.to_radians();
        raw[[1, 2, 0, 0]] = a.cos();
        raw[[1, 2, 0, 1]] = a.sin();
        raw[[1, 2, 0, 3]] = 4.0;
        raw[[2, 2, 0, 1]] = -0.9;
        raw[[2, 2, 0, 3]] = -1.0;
        let ev = decode_multi_accddoa(raw.view(), &DecodeConfig::default());
        assert_eq!(ev.len(), 2);
        assert!((ev[0].azimuth - 5.0).abs() < 1e-9);
        assert!((ev[0].distance - 3.0).abs() < 1e-12);
        assert_eq!(ev[1].track_id, 1);
        assert!((ev[1].azimuth + 90.0).abs() < 1e-9);
        assert_eq!(ev[1].distance, MIN_DECODED_DISTANCE);
    }

    #[test]
    fn mt_examples() {
        let z = encode_mt(&[], 50).unwrap();
        assert!(z.accdoa.iter().chain(z.dist.iter()).all(|v| *v == 0.0));
        let e = EventRecord::new(3, 6, 0, 90.0, 0.0, 1.5);
        let enc = encode_mt(&[e], 50).unwrap();
        assert!((enc.accdoa[[1, 6, 3]] - 1.0).abs() < 1e-12);
        assert_eq!(enc.dist[[6, 3]], 1.5);
        let frames = enc.to_frames();
        assert_eq!(frames.dim(), (50, 52));
        assert_eq!(MtTensor::from_frames(frames.view()).unwrap(), enc);

        let clash = [e, EventRecord::new(3, 6, 1, -90.0, 0.0, 2.0)];
        assert!(matches!(
            encode_mt(&clash, 50),
            Err(Error::ClasswiseCollision { frame: 3, class_id: 6 })
        ));
    }

    #[test]
    fn mt_decode_examples() {
        let cfg = DecodeConfig::default();
        let zero = MtTensor::zeros(4);
        assert!(decode_mt(zero.accdoa.view(), zero.dist.view(), &cfg).is_empty());
        let mut p = MtTensor::zeros(4);
        p.accdoa[[2, 1, 2]] = 0.9;
        p.dist[[1, 2]] = 3.1;
        let ev = decode_mt(p.accdoa.view(), p.dist.view(), &cfg);
        assert_eq!(ev, vec![EventRecord::new(2, 1, 0, 0.0, 90.0, 3.1)]);
    }
}
