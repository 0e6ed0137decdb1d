//! 3D sound event localization and detection: class, direction and source distance.
//!
//! The crate covers the whole desk-scale pipeline:
//!
//! * [`features`]: STFT, mel filterbank, FOA log-mel + intensity vectors, and
//!   binaural magnitude / IPD / ILD stacks.
//! * [`codec`]: multi-ACCDDOA and multi-task (ACCDOA + classwise distance)
//!   target encoding, ADPIT target padding and prediction decoding.
//! * [`losses`]: MSE/MAE/MSPE/MAPE regressors, the two-branch multi-task loss
//!   and the permutation-invariant ADPIT loss, all with analytic gradients.
//! * [`metrics`]: segment-based location-aware detection scores, localization
//!   recall, DOA and distance errors, Hungarian matching and jackknife CIs.
//! * [`simulate`]: free-field FOA and parametric binaural scene synthesis.
//! * [`model`]: a context-window MLP with reverse-mode gradients, Adam and
//!   early stopping.

pub mod audio;
pub mod codec;
pub mod error;
pub mod event;
pub mod features;
pub mod geometry;
pub mod losses;
pub mod metadata;
pub mod metrics;
pub mod model;
pub mod simulate;
pub mod tensor_file;

pub use error::{Error, Result};
pub use event::{ClassVocabulary, ClipSpec, EventRecord, NUM_CLASSES, NUM_TRACKS};
pub use geometry::{angular_distance, sph_to_unit, unit_to_sph, Vec3};
