//! Rotation of FOA scenes about the vertical axis and mirroring through
//! the horizontal plane, used to augment training data: the audio and the
//! labels are transformed together.

use crate::audio::Audio;
use crate::error::{Error, Result};
use crate::event::EventRecord;
use crate::geometry::wrap_degrees;

/// Turns a W, Y, Z, X recording by `degrees` of azimuth.
pub fn rotate_foa(audio: &Audio, degrees: f64) -> Result<Audio> {
    if audio.n_channels() != 4 {
        return Err(Error::ChannelCount {
            expected: 4,
            got: audio.n_channels(),
        });
    }
    let (s, c) = degrees.to_radians().sin_cos();
    let (y, x) = (&audio.channels[1], &audio.channels[3]);
    let new_y = y.iter().zip(x).map(|(&y, &x)| (s * x as f64 + c * y as f64) as f32).collect();
    let new_x = y.iter().zip(x).map(|(&y, &x)| (c * x as f64 - s * y as f64) as f32).collect();
    Audio::new(
        audio.sample_rate,
        vec![audio.channels[0].clone(), new_y, audio.channels[2].clone(), new_x],
    )
}

/// Labels matching [`rotate_foa`]; azimuths are wrapped to [-180, 180).
pub fn rotate_events(events: &[EventRecord], degrees: f64) -> Vec<EventRecord> {
    events
        .iter()
        .map(|e| EventRecord {
            azimuth: wrap_degrees(e.azimuth + degrees),
            ..*e
        })
        .collect()
}

/// Mirrors a W, Y, Z, X recording through the horizontal plane.
pub fn mirror_foa(audio: &Audio) -> Result<Audio> {
    if audio.n_channels() != 4 {
        return Err(Error::ChannelCount {
            expected: 4,
            got: audio.n_channels(),
        });
    }
    let mut out = audio.clone();
    out.channels[2].iter_mut().for_each(|v| *v = -*v);
    Ok(out)
}

/// Labels matching [`mirror_foa`].
pub fn mirror_events(events: &[EventRecord]) -> Vec<EventRecord> {
    events
        .iter()
        .map(|e| EventRecord {
            elevation: -e.elevation,
            ..*e
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::event::ClipSpec;
    use crate::simulate::{encode_foa, Trajectory};

    #[test]
    fn matches_encoding_at_turned_azimuth() {
        let clip = ClipSpec::default();
        let src: Vec<f32> = (0..clip.clip_samples()).map(|i| ((i * 7919) % 201) as f32 / 200.0 - 0.5).collect();
        let a = encode_foa(&src, &Trajectory::fixed(3, 12, 30.0, 20.0, 2.0), &clip).unwrap();
        let b = encode_foa(&src, &Trajectory::fixed(3, 12, -65.0, 20.0, 2.0), &clip).unwrap();
        let r = rotate_foa(&a, -95.0).unwrap();
        for (p, q) in r.channels.iter().zip(&b.channels) {
            let worst = p.iter().zip(q).fold(0f32, |m, (u, v)| m.max((u - v).abs()));
            assert!(worst < 1e-6, "{worst}");
        }
    }

    #[test]
    fn mirror_matches_negated_elevation() {
        let clip = ClipSpec::default();
        let src: Vec<f32> = (0..clip.clip_samples()).map(|i| ((i * 31) % 97) as f32 / 97.0 - 0.5).collect();
        let a = encode_foa(&src, &Trajectory::fixed(0, 8, 40.0, 25.0, 1.0), &clip).unwrap();
        let b = encode_foa(&src, &Trajectory::fixed(0, 8, 40.0, -25.0, 1.0), &clip).unwrap();
        assert_eq!(mirror_foa(&a).unwrap(), b);
        let e = EventRecord::new(0, 1, 0, 40.0, 25.0, 1.0);
        assert_eq!(mirror_events(&[e])[0].elevation, -25.0);
    }

    #[test]
    fn labels_wrap() {
        let e = EventRecord::new(0, 1, 0, 170.0, 5.0, 1.5);
        let r = rotate_events(&[e], 20.0);
        assert_eq!(r[0].azimuth, -170.0);
        assert_eq!((r[0].elevation, r[0].distance), (5.0, 1.5));
    }

    #[test]
    fn needs_four_channels() {
        assert!(matches!(
            rotate_foa(&Audio::silent(24_000, 2, 10), 10.0),
            Err(Error::ChannelCount { expected: 4, got: 2 })
        ));
    }
}
