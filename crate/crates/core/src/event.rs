//! Class vocabulary, annotated events and clip timing.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{sph_to_unit, Vec3};

pub const NUM_CLASSES: usize = 13;
/// Maximum number of simultaneous same-class tracks.
pub const NUM_TRACKS: usize = 3;

const CLASS_NAMES: [&str; NUM_CLASSES] = [
    "female speech",
    "male speech",
    "clapping",
    "telephone",
    "laughter",
    "domestic sounds",
    "footsteps",
    "door",
    "music",
    "musical instrument",
    "water tap",
    "bell",
    "knock",
];

/// The fixed ordered list of sound event classes. Indices are stable.
#[derive(Debug, Clone, Copy, Default)]
pub struct ClassVocabulary;

impl ClassVocabulary {
    pub fn names(&self) -> &'static [&'static str; NUM_CLASSES] {
        &CLASS_NAMES
    }

    pub fn len(&self) -> usize {
        NUM_CLASSES
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn name(&self, class_id: usize) -> Option<&'static str> {
        CLASS_NAMES.get(class_id).copied()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        CLASS_NAMES.iter().position(|n| *n == name)
    }
}

/// One annotated sound event at one label frame.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EventRecord {
    pub frame: usize,
    pub class_id: usize,
    pub track_id: usize,
    /// Degrees in [-180, 180).
    pub azimuth: f64,
    /// Degrees in [-90, 90].
    pub elevation: f64,
    /// Meters, strictly positive.
    pub distance: f64,
}

impl EventRecord {
    pub fn new(
        frame: usize,
        class_id: usize,
        track_id: usize,
        azimuth: f64,
        elevation: f64,
        distance: f64,
    ) -> Self {
        Self {
            frame,
            class_id,
            track_id,
            azimuth,
            elevation,
            distance,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.class_id >= NUM_CLASSES {
            return Err(range("class", self.class_id));
        }
        if !(-180.0..180.0).contains(&self.azimuth) {
            return Err(range("azimuth", self.azimuth));
        }
        if !(-90.0..=90.0).contains(&self.elevation) {
            return Err(range("elevation", self.elevation));
        }
        if !(self.distance > 0.0 && self.distance.is_finite()) {
            return Err(range("distance", self.distance));
        }
        Ok(())
    }

    pub fn doa(&self) -> Vec3 {
        sph_to_unit(self.azimuth, self.elevation)
    }

    /// Sort key `(frame, class, track)`.
    pub fn key(&self) -> (usize, usize, usize) {
        (self.frame, self.class_id, self.track_id)
    }
}

fn range(field: &'static str, value: impl ToString) -> Error {
    Error::Range {
        field,
        value: value.to_string(),
    }
}

/// Sorts events canonically and rejects duplicate `(frame, class, track)` keys.
pub fn canonicalize(events: &mut [EventRecord]) -> Result<()> {
    events.sort_by_key(EventRecord::key);
    for pair in events.windows(2) {
        if pair[0].key() == pair[1].key() {
            let (frame, class_id, track_id) = pair[0].key();
            return Err(Error::Range {
                field: "track",
                value: format!("duplicate (frame {frame}, class {class_id}, track {track_id})"),
            });
        }
    }
    Ok(())
}

/// Timing of one analysis clip.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClipSpec {
    pub sample_rate: u32,
    /// STFT window length in seconds.
    pub stft_win: f64,
    /// STFT hop in seconds.
    pub stft_hop: f64,
    pub feature_frames: usize,
    /// Label hop in seconds.
    pub label_hop: f64,
    pub label_frames: usize,
}

impl Default for ClipSpec {
    fn default() -> Self {
        Self {
            sample_rate: 24_000,
            stft_win: 0.040,
            stft_hop: 0.020,
            feature_frames: 250,
            label_hop: 0.100,
            label_frames: 50,
        }
    }
}

impl ClipSpec {
    pub fn win_samples(&self) -> usize {
        (self.stft_win * self.sample_rate as f64).round() as usize
    }

    pub fn hop_samples(&self) -> usize {
        (self.stft_hop * self.sample_rate as f64).round() as usize
    }

    pub fn label_hop_samples(&self) -> usize {
        (self.label_hop * self.sample_rate as f64).round() as usize
    }

    /// Smallest power of two covering the window.
    pub fn fft_size(&self) -> usize {
        self.win_samples().next_power_of_two()
    }

    pub fn clip_samples(&self) -> usize {
        self.feature_frames * self.hop_samples()
    }

    /// Feature frames per label frame.
    pub fn pooling(&self) -> usize {
        self.feature_frames / self.label_frames
    }

    pub fn duration(&self) -> f64 {
        self.clip_samples() as f64 / self.sample_rate as f64
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::BadConfig(m.to_string()));
        if self.sample_rate == 0 || self.win_samples() == 0 || self.hop_samples() == 0 {
            return bad("sample rate, window and hop must be positive");
        }
        if self.label_frames == 0 || self.feature_frames % self.label_frames != 0 {
            return bad("feature frames must be a multiple of label frames");
        }
        if self.feature_frames * self.hop_samples() != self.label_frames * self.label_hop_samples()
        {
            return bad("feature and label grids must span the same duration");
        }
        Ok(())
    }
}
