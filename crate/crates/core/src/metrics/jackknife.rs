use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, StudentsT};

use super::segments::{compute_scores, SegmentCounts};
use crate::error::{Error, Result};

/// Jackknife summary of one metric.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    /// Metric on all clips.
    pub full: f64,
    /// Mean of the leave-one-out values.
    pub loo_mean: f64,
    /// Bias-corrected estimate `n * full - (n - 1) * loo_mean`.
    pub estimate: f64,
    pub std_error: f64,
    pub low: f64,
    pub high: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoreIntervals {
    pub significance: f64,
    pub er: Interval,
    pub f1: Interval,
    pub doa_error: Interval,
    pub recall: Interval,
    pub dist_error: Interval,
}

fn t_quantile(p: f64, dof: usize) -> f64 {
    StudentsT::new(0.0, 1.0, dof as f64)
        .expect("positive degrees of freedom")
        .inverse_cdf(p)
}

fn summarize(full: f64, loo: &[f64], significance: f64, range: (f64, f64)) -> Interval {
    let n = loo.len() as f64;
    let loo_mean = loo.iter().sum::<f64>() / n;
    let var = (n - 1.0) / n * loo.iter().map(|v| (v - loo_mean).powi(2)).sum::<f64>();
    let std_error = var.sqrt();
    let estimate = n * full - (n - 1.0) * loo_mean;
    let half = t_quantile(1.0 - significance / 2.0, loo.len() - 1) * std_error;
    Interval {
        full,
        loo_mean,
        estimate,
        std_error,
        low: (estimate - half).clamp(range.0, range.1),
        high: (estimate + half).clamp(range.0, range.1),
    }
}

/// Leave-one-clip-out jackknife of a scalar metric computed on a subset of
/// clips. The interval is clamped to `range`.
pub fn jackknife_ci<T, F>(clips: &[T], metric_fn: F, significance: f64, range: (f64, f64)) -> Result<Interval>
where
    F: Fn(&[&T]) -> Result<f64>,
{
    if clips.len() < 2 {
        return Err(Error::TooFewClips(clips.len()));
    }
    let all: Vec<&T> = clips.iter().collect();
    let full = metric_fn(&all)?;
    let loo = (0..clips.len())
        .map(|skip| {
            let subset: Vec<&T> = clips
                .iter()
                .enumerate()
                .filter(|(i, _)| *i != skip)
                .map(|(_, c)| c)
                .collect();
            metric_fn(&subset)
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(summarize(full, &loo, significance, range))
}

/// Jackknife intervals for all five scores, one leave-one-out pass.
pub fn jackknife_scores(per_clip: &[SegmentCounts], significance: f64) -> Result<ScoreIntervals> {
    if per_clip.len() < 2 {
        return Err(Error::TooFewClips(per_clip.len()));
    }
    let full = compute_scores(&SegmentCounts::merge(per_clip))?.values();
    let mut loo: [Vec<f64>; 5] = Default::default();
    for skip in 0..per_clip.len() {
        let subset = per_clip
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != skip)
            .map(|(_, c)| c);
        let values = compute_scores(&SegmentCounts::merge(subset))?.values();
        for (dst, v) in loo.iter_mut().zip(values) {
            dst.push(v);
        }
    }
    let ranges = [
        (0.0, f64::INFINITY),
        (0.0, 100.0),
        (0.0, 180.0),
        (0.0, 100.0),
        (0.0, f64::INFINITY),
    ];
    let iv: Vec<Interval> = (0..5)
        .map(|m| summarize(full[m], &loo[m], significance, ranges[m]))
        .collect();
    Ok(ScoreIntervals {
        significance,
        er: iv[0],
        f1: iv[1],
        doa_error: iv[2],
        recall: iv[3],
        dist_error: iv[4],
    })
}
