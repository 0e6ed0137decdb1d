//! Regression losses with analytic gradients: the four element-wise
//! regressors, the two-branch multi-task loss and the permutation-invariant
//! ADPIT loss over multi-ACCDDOA tracks.

use ndarray::{Array2, Array3, Array4, ArrayView4};
use serde::{Deserialize, Serialize};

use crate::codec::{AdpitTargets, MtTensor, PERMUTATIONS};
use crate::error::{Error, Result};
use crate::event::NUM_TRACKS;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LossKind {
    Mse,
    Mae,
    /// Squared error relative to the ground truth.
    Mspe,
    /// Absolute error relative to the ground truth.
    Mape,
}

impl LossKind {
    pub const ALL: [LossKind; 4] = [LossKind::Mse, LossKind::Mae, LossKind::Mspe, LossKind::Mape];

    pub fn is_relative(self) -> bool {
        matches!(self, LossKind::Mspe | LossKind::Mape)
    }

    pub fn name(self) -> &'static str {
        match self {
            LossKind::Mse => "mse",
            LossKind::Mae => "mae",
            LossKind::Mspe => "mspe",
            LossKind::Mape => "mape",
        }
    }

    /// Loss of one element and its derivative w.r.t. the prediction.
    /// Relative kinds assume `target > 0`.
    #[inline]
    pub fn term(self, pred: f64, target: f64) -> (f64, f64) {
        let r = pred - target;
        match self {
            LossKind::Mse => (r * r, 2.0 * r),
            LossKind::Mae => (r.abs(), sign(r)),
            LossKind::Mspe => {
                let q = r / target;
                (q * q, 2.0 * q / target)
            }
            LossKind::Mape => ((r / target).abs(), sign(r) / target),
        }
    }
}

impl std::str::FromStr for LossKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "mse" => Ok(LossKind::Mse),
            "mae" => Ok(LossKind::Mae),
            "mspe" => Ok(LossKind::Mspe),
            "mape" => Ok(LossKind::Mape),
            other => Err(Error::BadConfig(format!("unknown loss {other:?}"))),
        }
    }
}

/// Subgradient of |x| with 0 at 0.
#[inline]
fn sign(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else if x < 0.0 {
        -1.0
    } else {
        0.0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LossResult<G = Vec<f64>> {
    pub value: f64,
    pub grad: G,
}

pub fn elementwise_loss(kind: LossKind, pred: &[f64], target: &[f64]) -> Result<LossResult> {
    if pred.len() != target.len() {
        return Err(Error::ShapeMismatch(format!(
            "prediction has {} values, target {}",
            pred.len(),
            target.len()
        )));
    }
    if kind.is_relative() {
        if let Some((index, &value)) = target.iter().enumerate().find(|(_, y)| !(**y > 0.0)) {
            return Err(Error::ZeroTargetDenominator { index, value });
        }
    }
    if pred.is_empty() {
        return Ok(LossResult {
            value: 0.0,
            grad: Vec::new(),
        });
    }
    let m = pred.len() as f64;
    let mut value = 0.0;
    let grad = pred
        .iter()
        .zip(target)
        .map(|(&p, &y)| {
            let (v, g) = kind.term(p, y);
            value += v;
            g / m
        })
        .collect();
    Ok(LossResult {
        value: value / m,
        grad,
    })
}

/// Sum of the two branch losses: MSE on the classwise ACCDOA vectors plus
/// `dist_kind` on the classwise distances, each averaged over class-frames.
///
/// For relative distance losses only class-frames with a positive target
/// distance (active events) enter the distance term, averaged over their
/// count; inactive ones get zero gradient.
pub fn mt_loss(pred: &MtTensor, target: &MtTensor, dist_kind: LossKind) -> Result<LossResult<MtTensor>> {
    if pred.accdoa.dim() != target.accdoa.dim() || pred.dist.dim() != target.dist.dim() {
        return Err(Error::ShapeMismatch(format!(
            "prediction {:?}/{:?} vs target {:?}/{:?}",
            pred.accdoa.dim(),
            pred.dist.dim(),
            target.accdoa.dim(),
            target.dist.dim()
        )));
    }
    let p1: Vec<f64> = pred.accdoa.iter().copied().collect();
    let t1: Vec<f64> = target.accdoa.iter().copied().collect();
    let doa = elementwise_loss(LossKind::Mse, &p1, &t1)?;

    let mask: Vec<bool> = target
        .dist
        .iter()
        .map(|y| !dist_kind.is_relative() || *y > 0.0)
        .collect();
    let (p2, t2): (Vec<f64>, Vec<f64>) = pred
        .dist
        .iter()
        .zip(target.dist.iter())
        .zip(&mask)
        .filter(|(_, keep)| **keep)
        .map(|((p, y), _)| (*p, *y))
        .unzip();
    let dist = elementwise_loss(dist_kind, &p2, &t2)?;

    let grad_accdoa = Array3::from_shape_vec(pred.accdoa.raw_dim(), doa.grad)
        .map_err(|e| Error::ShapeMismatch(e.to_string()))?;
    let mut kept = dist.grad.into_iter();
    let grad_dist: Vec<f64> = mask
        .iter()
        .map(|keep| if *keep { kept.next().expect("one gradient per kept entry") } else { 0.0 })
        .collect();
    let grad_dist = Array2::from_shape_vec(pred.dist.raw_dim(), grad_dist)
        .map_err(|e| Error::ShapeMismatch(e.to_string()))?;
    Ok(LossResult {
        value: doa.value + dist.value,
        grad: MtTensor {
            accdoa: grad_accdoa,
            dist: grad_dist,
        },
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AdpitConfig {
    pub base: LossKind,
    /// Weight of the distance component inside each track slot.
    pub dist_weight: f64,
}

impl AdpitConfig {
    pub fn new(base: LossKind) -> Self {
        Self {
            base,
            dist_weight: 1.0,
        }
    }

    fn weights(&self) -> [f64; 4] {
        [1.0, 1.0, 1.0, self.dist_weight]
    }
}

/// Loss between predicted slot `n` and target slot `m` of one class-frame,
/// the mean over the four components of `[a*R, D]`.
#[inline]
fn slot_loss(base: LossKind, w: &[f64; 4], pred: [f64; 4], target: [f64; 4]) -> f64 {
    let mut s = 0.0;
    for k in 0..4 {
        s += w[k] * base.term(pred[k], target[k]).0;
    }
    s / 4.0
}

/// Mean over tracks of the three slot losses of one assignment. Terms are
/// summed in ascending order so the result does not depend on the order of
/// the prediction tracks.
#[inline]
pub fn track_mean(mut terms: [f64; NUM_TRACKS]) -> f64 {
    terms.sort_by(f64::total_cmp);
    (terms[0] + terms[1] + terms[2]) / NUM_TRACKS as f64
}

/// Permutation-invariant loss over multi-ACCDDOA outputs.
///
/// `pred` is N x C x T x 4; for every (class, frame) the minimum over the six
/// orderings of the padded target tracks of the track-mean slot loss is
/// taken, then averaged over class-frames. Gradient flows through the
/// minimizing ordering only; ties go to the lowest ordering index.
pub fn adpit_loss(
    pred: ArrayView4<f64>,
    targets: &AdpitTargets,
    cfg: &AdpitConfig,
) -> Result<LossResult<Array4<f64>>> {
    if cfg.base.is_relative() {
        return Err(Error::BadConfig(
            "multi-ACCDDOA supports only MSE and MAE base losses".into(),
        ));
    }
    let (n_len, c_len, t_len, comps) = pred.dim();
    if n_len != NUM_TRACKS {
        return Err(Error::BadTrackCount {
            expected: NUM_TRACKS,
            got: n_len,
        });
    }
    if comps != 4 || targets.slots.dim() != (c_len, t_len, NUM_TRACKS, 4) {
        return Err(Error::ShapeMismatch(format!(
            "prediction {:?} vs targets {:?}",
            pred.dim(),
            targets.slots.dim()
        )));
    }
    let w = cfg.weights();
    let cells = (c_len * t_len) as f64;
    let mut total = 0.0;
    let mut grad = Array4::zeros(pred.raw_dim());
    for c in 0..c_len {
        for t in 0..t_len {
            let p: [[f64; 4]; NUM_TRACKS] =
                std::array::from_fn(|n| std::array::from_fn(|k| pred[[n, c, t, k]]));
            let y: [[f64; 4]; NUM_TRACKS] =
                std::array::from_fn(|m| std::array::from_fn(|k| targets.slots[[c, t, m, k]]));
            let mut pair = [[0.0; NUM_TRACKS]; NUM_TRACKS];
            for n in 0..NUM_TRACKS {
                for m in 0..NUM_TRACKS {
                    pair[n][m] = slot_loss(cfg.base, &w, p[n], y[m]);
                }
            }
            let mut best = (f64::INFINITY, 0);
            for (idx, perm) in PERMUTATIONS.iter().enumerate() {
                let l = track_mean([pair[0][perm[0]], pair[1][perm[1]], pair[2][perm[2]]]);
                if l < best.0 {
                    best = (l, idx);
                }
            }
            total += best.0;
            let perm = PERMUTATIONS[best.1];
            let scale = 1.0 / (cells * NUM_TRACKS as f64 * 4.0);
            for n in 0..NUM_TRACKS {
                for k in 0..4 {
                    let (_, d) = cfg.base.term(p[n][k], y[perm[n]][k]);
                    grad[[n, c, t, k]] = w[k] * d * scale;
                }
            }
        }
    }
    Ok(LossResult {
        value: total / cells,
        grad,
    })
}

/// Largest relative error between an analytic gradient and central finite
/// differences at `point`. Coordinates where both are zero count as exact.
pub fn grad_check<F>(loss_fn: F, point: &[f64], step: f64) -> f64
where
    F: Fn(&[f64]) -> (f64, Vec<f64>),
{
    let (_, analytic) = loss_fn(point);
    let mut x = point.to_vec();
    let mut worst = 0.0f64;
    for i in 0..x.len() {
        let orig = x[i];
        x[i] = orig + step;
        let up = loss_fn(&x).0;
        x[i] = orig - step;
        let down = loss_fn(&x).0;
        x[i] = orig;
        let numeric = (up - down) / (2.0 * step);
        let denom = analytic[i].abs().max(numeric.abs());
        if denom > 0.0 {
            worst = worst.max((analytic[i] - numeric).abs() / denom);
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::event::NUM_CLASSES;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn identity_is_zero_for_all_kinds() {
        let y = [0.5, 1.0, 3.0];
        for kind in LossKind::ALL {
            let r = elementwise_loss(kind, &y, &y).unwrap();
            assert_eq!(r.value, 0.0);
            assert!(r.grad.iter().all(|g| *g == 0.0));
        }
    }

    #[test]
    fn relative_hand_values() {
        // prediction 1, ground truth 2
        let r = elementwise_loss(LossKind::Mspe, &[1.0], &[2.0]).unwrap();
        assert_eq!(r.value, 0.25);
        let r = elementwise_loss(LossKind::Mape, &[1.0], &[2.0]).unwrap();
        assert_eq!(r.value, 0.5);
        let r = elementwise_loss(LossKind::Mse, &[1.0, 3.0], &[2.0, 2.0]).unwrap();
        assert_eq!(r.value, 1.0);
        assert_eq!(r.grad, [-1.0, 1.0]);
        let r = elementwise_loss(LossKind::Mae, &[1.0, 2.0], &[2.0, 2.0]).unwrap();
        assert_eq!(r.value, 0.5);
        assert_eq!(r.grad, [-0.5, 0.0]);
    }

    #[test]
    fn errors() {
        assert!(matches!(
            elementwise_loss(LossKind::Mse, &[1.0], &[1.0, 2.0]),
            Err(Error::ShapeMismatch(_))
        ));
        assert!(matches!(
            elementwise_loss(LossKind::Mape, &[1.0, 1.0], &[1.0, 0.0]),
            Err(Error::ZeroTargetDenominator { index: 1, .. })
        ));
        let pred = Array4::zeros((2, NUM_CLASSES, 1, 4));
        let tgt = AdpitTargets {
            slots: Array4::zeros((NUM_CLASSES, 1, 3, 4)),
        };
        assert!(matches!(
            adpit_loss(pred.view(), &tgt, &AdpitConfig::new(LossKind::Mse)),
            Err(Error::BadTrackCount { .. })
        ));
        let pred = Array4::zeros((3, NUM_CLASSES, 1, 4));
        assert!(adpit_loss(pred.view(), &tgt, &AdpitConfig::new(LossKind::Mspe)).is_err());
    }

    #[test]
    fn quadratic_grad_check() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let target: Vec<f64> = (0..20).map(|_| rng.random_range(-1.0..1.0)).collect();
        let point: Vec<f64> = (0..20).map(|_| rng.random_range(-1.0..1.0)).collect();
        let f = |x: &[f64]| {
            let r = elementwise_loss(LossKind::Mse, x, &target).unwrap();
            (r.value, r.grad)
        };
        assert!(grad_check(f, &point, 1e-5) < 1e-7);
    }

    fn random_mt(rng: &mut ChaCha8Rng, frames: usize, active_p: f64) -> MtTensor {
        let mut t = MtTensor::zeros(frames);
        for c in 0..NUM_CLASSES {
            for f in 0..frames {
                if rng.random_bool(active_p) {
                    for k in 0..3 {
                        t.accdoa[[k, c, f]] = rng.random_range(-0.6..0.6);
                    }
                    t.dist[[c, f]] = rng.random_range(0.5..5.0);
                }
            }
        }
        t
    }

    #[test]
    fn mt_branches_add_up() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for kind in LossKind::ALL {
            let target = random_mt(&mut rng, 5, 0.4);
            let mut pred = random_mt(&mut rng, 5, 1.0);
            pred.dist.mapv_inplace(|d| d + 0.1);
            let both = mt_loss(&pred, &target, kind).unwrap();
            let doa = elementwise_loss(
                LossKind::Mse,
                &pred.accdoa.iter().copied().collect::<Vec<_>>(),
                &target.accdoa.iter().copied().collect::<Vec<_>>(),
            )
            .unwrap();
            let (p, y): (Vec<f64>, Vec<f64>) = pred
                .dist
                .iter()
                .zip(target.dist.iter())
                .filter(|(_, y)| !kind.is_relative() || **y > 0.0)
                .map(|(p, y)| (*p, *y))
                .unzip();
            let dist = elementwise_loss(kind, &p, &y).unwrap();
            assert!((both.value - (doa.value + dist.value)).abs() < 1e-12, "{kind:?}");
        }
    }

    #[test]
    fn mt_perfect_and_dist_only() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let target = random_mt(&mut rng, 4, 0.5);
        assert_eq!(mt_loss(&target, &target, LossKind::Mse).unwrap().value, 0.0);
        let mut pred = target.clone();
        pred.dist.mapv_inplace(|d| d + 1.0);
        let r = mt_loss(&pred, &target, LossKind::Mse).unwrap();
        assert!((r.value - 1.0).abs() < 1e-12);
        assert!(r.grad.accdoa.iter().all(|g| *g == 0.0));
    }

    #[test]
    fn mt_relative_masks_inactive() {
        let mut target = MtTensor::zeros(2);
        target.dist[[0, 0]] = 2.0;
        let mut pred = MtTensor::zeros(2);
        pred.dist[[0, 0]] = 1.0;
        pred.dist[[5, 1]] = 9.0;
        let r = mt_loss(&pred, &target, LossKind::Mape).unwrap();
        assert_eq!(r.value, 0.5);
        assert_eq!(r.grad.dist[[5, 1]], 0.0);
        assert_eq!(r.grad.dist[[0, 0]], -0.5);
        // no active entries: distance term vanishes
        let r = mt_loss(&pred, &MtTensor::zeros(2), LossKind::Mspe).unwrap();
        assert_eq!(r.value, 0.0);
    }

    #[test]
    fn track_mean_is_order_free() {
        let a = [0.1, 0.7, 1e-9];
        let b = [1e-9, 0.1, 0.7];
        assert_eq!(track_mean(a).to_bits(), track_mean(b).to_bits());
    }

    #[test]
    fn adpit_single_event_symmetry() {
        let mut slots = Array4::zeros((NUM_CLASSES, 1, 3, 4));
        for n in 0..3 {
            slots[[2, 0, n, 0]] = 1.0;
            slots[[2, 0, n, 3]] = 2.0;
        }
        let tgt = AdpitTargets { slots };
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let pred = Array4::from_shape_fn((3, NUM_CLASSES, 1, 4), |_| rng.random_range(-1.0..1.0));
        let w = [1.0; 4];
        let p = |n: usize| [0, 1, 2, 3].map(|k| pred[[n, 2, 0, k]]);
        let y = [1.0, 0.0, 0.0, 2.0];
        let per_perm: Vec<f64> = PERMUTATIONS
            .iter()
            .map(|_| track_mean([0, 1, 2].map(|n| slot_loss(LossKind::Mse, &w, p(n), y))))
            .collect();
        assert!(per_perm.windows(2).all(|w| w[0] == w[1]));
        assert!(adpit_loss(pred.view(), &tgt, &AdpitConfig::new(LossKind::Mse)).is_ok());
    }
}
