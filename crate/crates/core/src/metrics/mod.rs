//! Location-aware SELD scoring with distance error and jackknife intervals.

mod hungarian;
mod jackknife;
mod segments;

pub use hungarian::hungarian;
pub use jackknife::{jackknife_ci, jackknife_scores, Interval, ScoreIntervals};
pub use segments::{
    compute_scores, score_segments, ClassTally, ScoreConfig, Scores, SegmentCounts, SegmentTally,
    Totals,
};
