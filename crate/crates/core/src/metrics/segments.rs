use std::collections::BTreeMap;

use ndarray::Array2;
use serde::{Deserialize, Serialize};

use super::hungarian;
use super::jackknife::ScoreIntervals;
use crate::error::{Error, Result};
use crate::event::EventRecord;
use crate::geometry::{angular_distance, Vec3};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScoreConfig {
    /// Label frames per scoring segment (1 s at 100 ms labels).
    pub segment_frames: usize,
    /// Detection gate on the angular error, degrees.
    pub doa_threshold: f64,
}

impl Default for ScoreConfig {
    fn default() -> Self {
        Self {
            segment_frames: 10,
            doa_threshold: 20.0,
        }
    }
}

/// Counts for one class inside one segment.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct ClassTally {
    pub class_id: usize,
    pub refs: usize,
    pub preds: usize,
    pub tp: usize,
    pub fp: usize,
    pub fn_: usize,
    /// `(angular error, |distance error|)` of every Hungarian-matched
    /// same-class pair, gated or not.
    pub matched: Vec<(f64, f64)>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct SegmentTally {
    pub segment: usize,
    pub classes: Vec<ClassTally>,
    pub substitutions: usize,
    pub deletions: usize,
    pub insertions: usize,
}

/// Per-segment, per-class intermediate counts for one or more clips.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct SegmentCounts {
    pub segments: Vec<SegmentTally>,
}

/// Micro-averaged sums over all segments and classes.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Totals {
    pub refs: usize,
    pub tp: usize,
    pub fp: usize,
    pub fn_: usize,
    pub substitutions: usize,
    pub deletions: usize,
    pub insertions: usize,
    pub loc_tp: usize,
    pub loc_fn: usize,
    pub angle_sum: f64,
    pub distance_sum: f64,
}

impl SegmentCounts {
    pub fn merge<'a>(parts: impl IntoIterator<Item = &'a SegmentCounts>) -> SegmentCounts {
        SegmentCounts {
            segments: parts
                .into_iter()
                .flat_map(|p| p.segments.iter().cloned())
                .collect(),
        }
    }

    pub fn totals(&self) -> Totals {
        let mut t = Totals::default();
        for seg in &self.segments {
            t.substitutions += seg.substitutions;
            t.deletions += seg.deletions;
            t.insertions += seg.insertions;
            for c in &seg.classes {
                t.refs += c.refs;
                t.tp += c.tp;
                t.fp += c.fp;
                t.fn_ += c.fn_;
                t.loc_tp += c.matched.len();
                t.loc_fn += c.refs - c.matched.len();
                for (angle, dist) in &c.matched {
                    t.angle_sum += angle;
                    t.distance_sum += dist;
                }
            }
        }
        t
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scores {
    pub er: f64,
    /// Percent.
    pub f1: f64,
    /// Degrees; 180 when nothing was matched.
    pub doa_error: f64,
    /// Percent.
    pub recall: f64,
    /// Meters; NaN when nothing was matched.
    pub dist_error: f64,
    pub ci: Option<ScoreIntervals>,
}

impl Scores {
    pub fn values(&self) -> [f64; 5] {
        [self.er, self.f1, self.doa_error, self.recall, self.dist_error]
    }
}

/// A per-segment source: one (class, track) reduced to its medoid frame.
#[derive(Debug, Clone, Copy)]
struct Instance {
    doa: Vec3,
    distance: f64,
}

fn medoid(frames: &[&EventRecord]) -> Instance {
    let doas: Vec<Vec3> = frames.iter().map(|e| e.doa()).collect();
    let mut best = (f64::INFINITY, 0);
    for (i, a) in doas.iter().enumerate() {
        let cost: f64 = doas
            .iter()
            .map(|b| angular_distance(*a, *b).expect("unit vectors"))
            .sum();
        if cost < best.0 {
            best = (cost, i);
        }
    }
    Instance {
        doa: doas[best.1],
        distance: frames[best.1].distance,
    }
}

type Buckets<'a> = BTreeMap<(usize, usize), BTreeMap<usize, Vec<&'a EventRecord>>>;

fn bucket<'a>(events: &'a [EventRecord], frames: usize, cfg: &ScoreConfig) -> Result<Buckets<'a>> {
    let mut sorted: Vec<&EventRecord> = events.iter().collect();
    sorted.sort_by_key(|e| e.key());
    let mut out: Buckets = BTreeMap::new();
    for e in sorted {
        if e.frame >= frames {
            return Err(Error::GridMismatch {
                frame: e.frame,
                frames,
            });
        }
        out.entry((e.frame / cfg.segment_frames, e.class_id))
            .or_default()
            .entry(e.track_id)
            .or_default()
            .push(e);
    }
    Ok(out)
}

fn instances(tracks: Option<&BTreeMap<usize, Vec<&EventRecord>>>) -> Vec<Instance> {
    tracks
        .map(|t| t.values().map(|frames| medoid(frames)).collect())
        .unwrap_or_default()
}

/// Scores one clip of `clip_frames` label frames.
///
/// Within each 1 s segment every (class, track) becomes one instance placed
/// at its medoid frame. References and predictions of a class are matched
/// by the Hungarian algorithm on angular distance; a match within the DOA
/// gate is a true positive, a match outside it is one false positive plus
/// one false negative. Every match contributes to the localization errors.
pub fn score_segments(
    refs: &[EventRecord],
    preds: &[EventRecord],
    clip_frames: usize,
    cfg: &ScoreConfig,
) -> Result<SegmentCounts> {
    if cfg.segment_frames == 0 {
        return Err(Error::BadConfig("segment length must be positive".into()));
    }
    let ref_buckets = bucket(refs, clip_frames, cfg)?;
    let pred_buckets = bucket(preds, clip_frames, cfg)?;
    let n_segments = clip_frames.div_ceil(cfg.segment_frames);
    let mut segments: Vec<SegmentTally> = (0..n_segments)
        .map(|segment| SegmentTally {
            segment,
            ..Default::default()
        })
        .collect();

    let mut keys: Vec<(usize, usize)> = ref_buckets.keys().chain(pred_buckets.keys()).copied().collect();
    keys.sort_unstable();
    keys.dedup();
    for key in keys {
        let (segment, class_id) = key;
        let r = instances(ref_buckets.get(&key));
        let p = instances(pred_buckets.get(&key));
        let cost = Array2::from_shape_fn((r.len(), p.len()), |(i, j)| {
            angular_distance(r[i].doa, p[j].doa).expect("unit vectors")
        });
        let mut tally = ClassTally {
            class_id,
            refs: r.len(),
            preds: p.len(),
            ..Default::default()
        };
        let pairs = hungarian(cost.view());
        for &(i, j) in &pairs {
            let angle = cost[[i, j]];
            tally.matched.push((angle, (r[i].distance - p[j].distance).abs()));
            if angle <= cfg.doa_threshold {
                tally.tp += 1;
            } else {
                tally.fp += 1;
                tally.fn_ += 1;
            }
        }
        tally.fp += p.len() - pairs.len();
        tally.fn_ += r.len() - pairs.len();
        segments[segment].classes.push(tally);
    }
    for seg in &mut segments {
        let fp: usize = seg.classes.iter().map(|c| c.fp).sum();
        let fn_: usize = seg.classes.iter().map(|c| c.fn_).sum();
        seg.substitutions = fp.min(fn_);
        seg.deletions = fn_.saturating_sub(fp);
        seg.insertions = fp.saturating_sub(fn_);
    }
    Ok(SegmentCounts { segments })
}

/// Micro-averaged ER, F1, DOA error, localization recall and distance error.
pub fn compute_scores(counts: &SegmentCounts) -> Result<Scores> {
    let t = counts.totals();
    if t.refs == 0 {
        return Err(Error::EmptyReference);
    }
    let er = (t.substitutions + t.deletions + t.insertions) as f64 / t.refs as f64;
    let f1 = 100.0 * 2.0 * t.tp as f64 / (2 * t.tp + t.fp + t.fn_) as f64;
    let (doa_error, dist_error) = if t.loc_tp > 0 {
        (t.angle_sum / t.loc_tp as f64, t.distance_sum / t.loc_tp as f64)
    } else {
        (180.0, f64::NAN)
    };
    let recall = 100.0 * t.loc_tp as f64 / (t.loc_tp + t.loc_fn) as f64;
    Ok(Scores {
        er,
        f1,
        doa_error,
        recall,
        dist_error,
        ci: None,
    })
}
