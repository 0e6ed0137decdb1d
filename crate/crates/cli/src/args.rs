use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

/// 3D sound event localization and detection: direction, class and source distance.
///
/// Every subcommand accepts `--config FILE`: plain `key=value` lines whose
/// keys are long flag names (`-` or `_` separated). Flags given on the
/// command line win over the file. `SELD3D_THREADS` caps the number of
/// worker threads (default: all cores).
///
/// Exit codes: 0 success, 1 usage error, 2 data error.
#[derive(Debug, Parser)]
#[command(name = "seld3d", version, args_override_self = true)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Render a synthetic dataset: one WAV and one metadata CSV per clip plus manifest.csv.
    Synth(SynthArgs),
    /// Compute feature tensors (S3DT files) for every WAV in a directory.
    Extract(ExtractArgs),
    /// Train the toy model on a manifest; writes model.s3dc, train_log.csv and model.cfg.
    Train(TrainArgs),
    /// Score a dataset: predictions from CSVs or from a checkpoint, with jackknife intervals.
    Eval(EvalArgs),
    /// Score one reference CSV against one prediction CSV, without intervals.
    Score(ScoreArgs),
}

#[derive(Debug, Args)]
pub struct ConfigArg {
    /// key=value file supplying defaults for the flags of this command.
    #[arg(long, value_name = "FILE")]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    #[command(flatten)]
    pub config: ConfigArg,
    /// Output directory.
    #[arg(long)]
    pub out: PathBuf,
    /// Number of clips.
    #[arg(long, default_value_t = 10)]
    pub clips: usize,
    /// Seed of clip 0; clip i uses seed + i.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Audio format: foa (4 channels) or binaural (2 channels).
    #[arg(long, default_value = "foa")]
    pub format: String,
    /// Events per clip.
    #[arg(long, default_value_t = 4)]
    pub events: usize,
    /// Maximum simultaneous events (1 to 3).
    #[arg(long, default_value_t = 3)]
    pub max_polyphony: usize,
    /// Shortest event, label frames.
    #[arg(long, default_value_t = 5)]
    pub min_frames: usize,
    /// Longest event, label frames.
    #[arg(long, default_value_t = 25)]
    pub max_frames: usize,
    /// Probability that an event moves.
    #[arg(long, default_value_t = 0.3)]
    pub moving_prob: f64,
    /// Nearest source distance, meters.
    #[arg(long, default_value_t = 0.5)]
    pub min_distance: f64,
    /// Farthest source distance, meters.
    #[arg(long, default_value_t = 5.0)]
    pub max_distance: f64,
    /// Source level at 1 m over the diffuse noise, dB ("inf" for no noise).
    #[arg(long, default_value_t = 30.0)]
    pub snr_db: f64,
}

#[derive(Debug, Args)]
pub struct ExtractArgs {
    #[command(flatten)]
    pub config: ConfigArg,
    /// Directory of WAV files.
    #[arg(long)]
    pub input: PathBuf,
    /// Output directory for the .s3dt files.
    #[arg(long)]
    pub out: PathBuf,
    /// Audio format: foa or binaural.
    #[arg(long, default_value = "foa")]
    pub format: String,
    /// Recompute files that already exist.
    #[arg(long)]
    pub force: bool,
}

#[derive(Debug, Args)]
pub struct TrainArgs {
    #[command(flatten)]
    pub config: ConfigArg,
    /// Dataset manifest (as written by `synth`).
    #[arg(long)]
    pub manifest: PathBuf,
    /// Output directory.
    #[arg(long)]
    pub out: PathBuf,
    /// Audio format: foa or binaural.
    #[arg(long, default_value = "foa")]
    pub format: String,
    /// Output method: multi-accddoa or mt.
    #[arg(long, default_value = "multi-accddoa")]
    pub method: String,
    /// Loss: mse or mae for multi-accddoa; the distance-branch loss
    /// (mse, mae, mspe, mape) for mt. [default: mse]
    #[arg(long)]
    pub loss: Option<String>,
    /// Distance-branch loss for mt; the same setting as --loss. [default: mse]
    #[arg(long)]
    pub dist_loss: Option<String>,
    /// Weight of the distance component inside each ADPIT slot.
    #[arg(long, default_value_t = 1.0)]
    pub dist_weight: f64,
    /// Hidden layer widths, comma separated.
    #[arg(long, default_value = "256,256")]
    pub hidden: String,
    /// Feature frames on each side of the centre frame.
    #[arg(long, default_value_t = 2)]
    pub context: usize,
    #[arg(long, default_value_t = 1e-3)]
    pub lr: f64,
    /// Decoupled weight decay.
    #[arg(long, default_value_t = 0.0)]
    pub weight_decay: f64,
    /// Dropout rate on the model input.
    #[arg(long, default_value_t = 0.0)]
    pub input_dropout: f64,
    /// Dropout rate on hidden activations.
    #[arg(long, default_value_t = 0.0)]
    pub dropout: f64,
    #[arg(long, default_value_t = 250)]
    pub max_epochs: usize,
    /// Epochs without validation improvement tolerated before stopping.
    #[arg(long, default_value_t = 75)]
    pub patience: usize,
    /// Clips per batch.
    #[arg(long, default_value_t = 16)]
    pub batch_size: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Fraction of clips (taken from the end of the manifest) held out for validation.
    #[arg(long, default_value_t = 0.2)]
    pub val_fraction: f64,
    /// Turned (and alternately mirrored) copies of each FOA training clip.
    #[arg(long, default_value_t = 0)]
    pub augment: usize,
}

#[derive(Debug, Args)]
pub struct DecodeArgs {
    /// Activity threshold on the DOA vector norm.
    #[arg(long, default_value_t = 0.5)]
    pub threshold: f64,
    /// Same-class tracks closer than this many degrees are merged.
    #[arg(long, default_value_t = 15.0)]
    pub merge_angle: f64,
}

#[derive(Debug, Args)]
pub struct ScoringArgs {
    /// Label frames per scoring segment.
    #[arg(long, default_value_t = 10)]
    pub segment_frames: usize,
    /// DOA gate for true positives, degrees.
    #[arg(long, default_value_t = 20.0)]
    pub doa_threshold: f64,
    /// Write the JSON report here instead of stdout.
    #[arg(long, value_name = "FILE")]
    pub json: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[command(flatten)]
    pub config: ConfigArg,
    /// Directory of reference CSVs (paired with --preds by file name).
    #[arg(long, requires = "preds", conflicts_with_all = ["checkpoint", "manifest"])]
    pub refs: Option<PathBuf>,
    /// Directory of prediction CSVs.
    #[arg(long, requires = "refs")]
    pub preds: Option<PathBuf>,
    /// Checkpoint to run over the manifest's audio.
    #[arg(long, requires = "manifest")]
    pub checkpoint: Option<PathBuf>,
    /// Manifest whose CSVs are the references.
    #[arg(long, requires = "checkpoint")]
    pub manifest: Option<PathBuf>,
    /// Also write the predicted CSVs to this directory.
    #[arg(long, requires = "checkpoint")]
    pub save_preds: Option<PathBuf>,
    /// Clip length in label frames for CSV pairs.
    #[arg(long, default_value_t = 50)]
    pub clip_frames: usize,
    /// Skip the jackknife confidence intervals.
    #[arg(long)]
    pub no_ci: bool,
    /// Significance level of the intervals.
    #[arg(long, default_value_t = 0.05)]
    pub significance: f64,
    #[command(flatten)]
    pub decode: DecodeArgs,
    #[command(flatten)]
    pub scoring: ScoringArgs,
}

#[derive(Debug, Args)]
pub struct ScoreArgs {
    #[command(flatten)]
    pub config: ConfigArg,
    /// Reference metadata CSV.
    #[arg(long = "ref")]
    pub reference: PathBuf,
    /// Predicted metadata CSV.
    #[arg(long)]
    pub pred: PathBuf,
    /// Clip length in label frames.
    #[arg(long, default_value_t = 50)]
    pub clip_frames: usize,
    #[command(flatten)]
    pub scoring: ScoringArgs,
}
