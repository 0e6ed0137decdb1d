use std::fs;
use std::path::{Path, PathBuf};

use seld3d::audio::{read_wav, Audio};
use seld3d::codec::{DecodeConfig, OutputMethod};
use seld3d::features::{extract as extract_features, AudioFormat};
use seld3d::metadata::{read_metadata, write_metadata};
use seld3d::metrics::{compute_scores, jackknife_scores, score_segments, ScoreConfig, Scores, SegmentCounts};
use seld3d::model::{format_log, init_model, predict_to_events, train as fit, Checkpoint, Example, ModelConfig};
use seld3d::simulate::{
    mirror_events, mirror_foa, read_manifest, rotate_events, rotate_foa, synth_clip, write_manifest, ManifestEntry,
    SceneConfig, MANIFEST_NAME,
};
use seld3d::tensor_file::write_tensor;
use seld3d::{ClipSpec, EventRecord};

use crate::args::{EvalArgs, ExtractArgs, ScoreArgs, ScoringArgs, SynthArgs, TrainArgs};
use crate::{parallel, report, CliError};

type Settings = Vec<(String, String)>;

fn setting(key: &str, value: impl ToString) -> (String, String) {
    (key.to_string(), value.to_string())
}

/// Prints the resolved settings as a config file to stderr.
fn log_settings(command: &str, settings: &Settings) {
    eprintln!("# seld3d {command}");
    for (k, v) in settings {
        eprintln!("{k}={v}");
    }
}

fn create_dir(path: &Path) -> Result<(), CliError> {
    fs::create_dir_all(path).map_err(|e| CliError::Data(format!("cannot create {}: {e}", path.display())))
}

/// Files in `dir` with extension `ext`, sorted by name.
fn list_files(dir: &Path, ext: &str) -> Result<Vec<PathBuf>, CliError> {
    let entries = fs::read_dir(dir).map_err(|e| CliError::Data(format!("cannot read directory {}: {e}", dir.display())))?;
    let mut files: Vec<PathBuf> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_file() && p.extension().is_some_and(|x| x.eq_ignore_ascii_case(ext)))
        .collect();
    files.sort();
    Ok(files)
}

fn parse_format(s: &str) -> Result<AudioFormat, CliError> {
    Ok(s.parse::<AudioFormat>()?)
}

fn load_audio(path: &Path, clip: &ClipSpec) -> Result<Audio, CliError> {
    let audio = read_wav(path)?;
    if audio.sample_rate != clip.sample_rate {
        return Err(CliError::Data(format!(
            "{}: sample rate {} Hz, expected {} Hz",
            path.display(),
            audio.sample_rate,
            clip.sample_rate
        )));
    }
    Ok(audio)
}

pub fn synth(a: &SynthArgs) -> Result<(), CliError> {
    let format = parse_format(&a.format)?;
    let cfg = SceneConfig {
        seed: a.seed,
        n_events: a.events,
        max_polyphony: a.max_polyphony,
        event_frames: (a.min_frames, a.max_frames),
        moving_prob: a.moving_prob,
        distance_range: (a.min_distance, a.max_distance),
        snr_db: a.snr_db,
        ..Default::default()
    };
    cfg.validate()?;
    let threads = parallel::threads()?;
    log_settings(
        "synth",
        &vec![
            setting("out", a.out.display()),
            setting("clips", a.clips),
            setting("seed", a.seed),
            setting("format", format.name()),
            setting("events", a.events),
            setting("max_polyphony", a.max_polyphony),
            setting("min_frames", a.min_frames),
            setting("max_frames", a.max_frames),
            setting("moving_prob", a.moving_prob),
            setting("min_distance", a.min_distance),
            setting("max_distance", a.max_distance),
            setting("snr_db", a.snr_db),
            setting("threads", threads),
        ],
    );
    create_dir(&a.out)?;
    let indices: Vec<usize> = (0..a.clips).collect();
    let entries = parallel::map(&indices, threads, |&i| synth_clip(&cfg, i, format, &a.out))
        .into_iter()
        .collect::<seld3d::Result<Vec<_>>>()?;
    write_manifest(&entries, &a.out.join(MANIFEST_NAME))?;
    eprintln!("wrote {} clips to {}", entries.len(), a.out.display());
    Ok(())
}

enum FileOutcome {
    Written(usize),
    Skipped,
}

fn extract_one(wav: &Path, out_dir: &Path, format: AudioFormat, force: bool) -> Result<FileOutcome, CliError> {
    let stem = wav.file_stem().unwrap_or_default().to_string_lossy().into_owned();
    let single = out_dir.join(format!("{stem}.s3dt"));
    let first_of_many = out_dir.join(format!("{stem}_000.s3dt"));
    if !force && (single.is_file() || first_of_many.is_file()) {
        return Ok(FileOutcome::Skipped);
    }
    let clip = ClipSpec::default();
    let audio = load_audio(wav, &clip)?;
    let tensors = extract_features(&audio, format, &clip)?;
    for (i, t) in tensors.iter().enumerate() {
        let path = if tensors.len() == 1 {
            single.clone()
        } else {
            out_dir.join(format!("{stem}_{i:03}.s3dt"))
        };
        let tmp = path.with_extension("partial");
        write_tensor(&t.to_tensor(), &tmp)?;
        fs::rename(&tmp, &path).map_err(|e| CliError::Data(format!("cannot write {}: {e}", path.display())))?;
    }
    Ok(FileOutcome::Written(tensors.len()))
}

pub fn extract(a: &ExtractArgs) -> Result<(), CliError> {
    let format = parse_format(&a.format)?;
    let threads = parallel::threads()?;
    log_settings(
        "extract",
        &vec![
            setting("input", a.input.display()),
            setting("out", a.out.display()),
            setting("format", format.name()),
            setting("force", a.force),
            setting("threads", threads),
        ],
    );
    let wavs = list_files(&a.input, "wav")?;
    if wavs.is_empty() {
        return Err(CliError::Data(format!("no .wav files in {}", a.input.display())));
    }
    create_dir(&a.out)?;
    let results = parallel::map(&wavs, threads, |w| extract_one(w, &a.out, format, a.force));
    let mut failed = 0;
    for (wav, r) in wavs.iter().zip(&results) {
        match r {
            Ok(FileOutcome::Written(n)) => eprintln!("ok    {} ({n} clip{})", wav.display(), if *n == 1 { "" } else { "s" }),
            Ok(FileOutcome::Skipped) => eprintln!("skip  {} (exists)", wav.display()),
            Err(CliError::Usage(m) | CliError::Data(m)) => {
                failed += 1;
                eprintln!("FAIL  {}: {m}", wav.display());
            }
        }
    }
    if failed > 0 {
        return Err(CliError::Data(format!("{failed} of {} files failed", wavs.len())));
    }
    Ok(())
}

/// One example per analysis clip of a recording; events are moved to the
/// clip they fall in.
fn examples(entry: &ManifestEntry, format: AudioFormat, clip: &ClipSpec) -> Result<Vec<(Audio, Example)>, CliError> {
    let audio = load_audio(&entry.wav, clip)?;
    let events = read_metadata(&entry.csv)?;
    let parts = audio.split_clips(clip);
    let features = extract_features(&audio, format, clip)?;
    let frames = clip.label_frames;
    if let Some(e) = events.iter().find(|e| e.frame >= frames * features.len()) {
        return Err(CliError::Data(format!(
            "{}: event at frame {} is past the end of the audio",
            entry.csv.display(),
            e.frame
        )));
    }
    Ok(parts
        .into_iter()
        .zip(features)
        .enumerate()
        .map(|(i, (part, features))| {
            let events = events
                .iter()
                .filter(|e| e.frame / frames == i)
                .map(|e| EventRecord {
                    frame: e.frame - i * frames,
                    ..*e
                })
                .collect();
            (part, Example { features, events })
        })
        .collect())
}

/// First frame with two events of the same class.
fn classwise_collision(events: &[EventRecord]) -> Option<usize> {
    let mut seen = std::collections::HashSet::new();
    let mut frames: Vec<usize> = events
        .iter()
        .filter(|e| !seen.insert((e.frame, e.class_id)))
        .map(|e| e.frame)
        .collect();
    frames.sort_unstable();
    frames.first().copied()
}

fn model_config(a: &TrainArgs) -> Result<ModelConfig, CliError> {
    let loss = match (&a.loss, &a.dist_loss) {
        (Some(l), Some(d)) if l != d => {
            return Err(CliError::Usage(format!("--loss {l} and --dist-loss {d} disagree")));
        }
        (Some(l), _) | (None, Some(l)) => l.clone(),
        (None, None) => "mse".into(),
    };
    let mut cfg = ModelConfig::default();
    for (key, value) in [
        ("format", a.format.clone()),
        ("method", a.method.clone()),
        ("loss", loss),
        ("dist_weight", a.dist_weight.to_string()),
        ("hidden", a.hidden.clone()),
        ("context", a.context.to_string()),
        ("lr", a.lr.to_string()),
        ("weight_decay", a.weight_decay.to_string()),
        ("input_dropout", a.input_dropout.to_string()),
        ("dropout", a.dropout.to_string()),
        ("max_epochs", a.max_epochs.to_string()),
        ("patience", a.patience.to_string()),
        ("batch_size", a.batch_size.to_string()),
        ("seed", a.seed.to_string()),
    ] {
        cfg.set(key, &value)?;
    }
    cfg.validate()?;
    Ok(cfg)
}

pub fn train(a: &TrainArgs) -> Result<(), CliError> {
    let cfg = model_config(a)?;
    if !(a.val_fraction > 0.0 && a.val_fraction < 1.0) {
        return Err(CliError::Usage(format!("--val-fraction must be in (0, 1), got {}", a.val_fraction)));
    }
    if a.augment > 0 && cfg.format != AudioFormat::Foa {
        return Err(CliError::Usage("--augment needs FOA audio".into()));
    }
    let threads = parallel::threads()?;
    let mut settings: Settings = cfg
        .to_text()
        .lines()
        .filter_map(|l| l.split_once('=').map(|(k, v)| setting(k, v)))
        .collect();
    settings.extend([
        setting("manifest", a.manifest.display()),
        setting("out", a.out.display()),
        setting("val_fraction", a.val_fraction),
        setting("augment", a.augment),
        setting("threads", threads),
    ]);
    log_settings("train", &settings);

    let entries = read_manifest(&a.manifest)?;
    let n_val = ((entries.len() as f64 * a.val_fraction).round() as usize).max(1);
    if entries.len() <= n_val {
        return Err(CliError::Data(format!(
            "{} clips are too few for a train/validation split",
            entries.len()
        )));
    }
    let clip = ClipSpec::default();
    let loaded = parallel::map(&entries, threads, |e| examples(e, cfg.format, &clip))
        .into_iter()
        .collect::<Result<Vec<_>, _>>()?;
    if cfg.method == OutputMethod::MultiTask {
        for (entry, parts) in entries.iter().zip(&loaded) {
            for (i, (_, ex)) in parts.iter().enumerate() {
                if let Some(frame) = classwise_collision(&ex.events) {
                    return Err(CliError::Data(format!(
                        "{}: two events of one class at frame {}; mt output holds one per class",
                        entry.csv.display(),
                        frame + i * clip.label_frames
                    )));
                }
            }
        }
    }
    let split = entries.len() - n_val;
    let val_set: Vec<Example> = loaded[split..].iter().flatten().map(|(_, ex)| ex.clone()).collect();
    let base: Vec<(usize, &Audio, &Example)> = loaded[..split]
        .iter()
        .enumerate()
        .flat_map(|(i, parts)| parts.iter().map(move |(audio, ex)| (i, audio, ex)))
        .collect();
    let copies: Vec<(usize, usize)> = base
        .iter()
        .enumerate()
        .flat_map(|(j, _)| (1..=a.augment).map(move |r| (j, r)))
        .collect();
    let augmented = parallel::map(&copies, threads, |&(j, r)| -> Result<Example, CliError> {
        let (i, audio, ex) = base[j];
        let degrees = (r * 360 / (a.augment + 1)) as f64 + i as f64;
        let mut audio = rotate_foa(audio, degrees)?;
        let mut events = rotate_events(&ex.events, degrees);
        if r % 2 == 1 {
            audio = mirror_foa(&audio)?;
            events = mirror_events(&events);
        }
        let features = seld3d::features::clip_features(&audio, cfg.format, &clip)?;
        Ok(Example { features, events })
    });
    let mut train_set: Vec<Example> = base.iter().map(|(_, _, ex)| (*ex).clone()).collect();
    for ex in augmented {
        train_set.push(ex?);
    }
    eprintln!("{} training and {} validation clips", train_set.len(), val_set.len());

    create_dir(&a.out)?;
    let outcome = fit(init_model(&cfg)?, &train_set, &val_set, |log| {
        eprintln!("epoch {:>4}  train {:.6}  val {:.6}", log.epoch, log.train_loss, log.val_loss);
    })?;
    let write = |name: &str, body: String| {
        let p = a.out.join(name);
        fs::write(&p, body).map_err(|e| CliError::Data(format!("cannot write {}: {e}", p.display())))
    };
    outcome.checkpoint.save(a.out.join("model.s3dc"))?;
    write("train_log.csv", format_log(&outcome.history))?;
    write("model.cfg", cfg.to_text())?;
    eprintln!(
        "best epoch {} (val loss {:.6}){}; wrote {}",
        outcome.checkpoint.epoch,
        outcome.checkpoint.best_val_loss,
        if outcome.stopped_early { ", stopped early" } else { "" },
        a.out.join("model.s3dc").display()
    );
    Ok(())
}

fn score_config(s: &ScoringArgs) -> Result<ScoreConfig, CliError> {
    if s.segment_frames == 0 || !(s.doa_threshold > 0.0) {
        return Err(CliError::Usage("segment length and DOA gate must be positive".into()));
    }
    Ok(ScoreConfig {
        segment_frames: s.segment_frames,
        doa_threshold: s.doa_threshold,
    })
}

fn scoring_settings(s: &ScoringArgs) -> Settings {
    vec![
        setting("segment_frames", s.segment_frames),
        setting("doa_threshold", s.doa_threshold),
    ]
}

/// (clip label, references, predictions, clip length in label frames)
type Pair = (String, Vec<EventRecord>, Vec<EventRecord>, usize);

fn csv_pairs(refs: &Path, preds: &Path, frames: usize) -> Result<Vec<Pair>, CliError> {
    let files: Vec<PathBuf> = list_files(refs, "csv")?
        .into_iter()
        .filter(|f| f.file_name().is_some_and(|n| n != MANIFEST_NAME))
        .collect();
    if files.is_empty() {
        return Err(CliError::Data(format!("no .csv files in {}", refs.display())));
    }
    files
        .iter()
        .map(|r| {
            let name = r.file_name().unwrap_or_default();
            let p = preds.join(name);
            if !p.is_file() {
                return Err(CliError::Data(format!(
                    "reference {} has no prediction {}",
                    r.display(),
                    p.display()
                )));
            }
            Ok((name.to_string_lossy().into_owned(), read_metadata(r)?, read_metadata(&p)?, frames))
        })
        .collect()
}

fn model_pairs(a: &EvalArgs, checkpoint: &Path, manifest: &Path, threads: usize) -> Result<Vec<Pair>, CliError> {
    let model = Checkpoint::load(checkpoint)?.model()?;
    let decode = DecodeConfig {
        threshold: a.decode.threshold,
        merge_angle: a.decode.merge_angle,
    };
    let clip = ClipSpec::default();
    let entries = read_manifest(manifest)?;
    if let Some(dir) = &a.save_preds {
        create_dir(dir)?;
    }
    parallel::map(&entries, threads, |e| -> Result<Pair, CliError> {
        let audio = load_audio(&e.wav, &clip)?;
        let preds = predict_to_events(&model, &audio, model.config.format, &decode, &clip)?;
        if let Some(dir) = &a.save_preds {
            write_metadata(&preds, dir.join(format!("{}.csv", e.clip_id)))?;
        }
        let frames = audio.split_clips(&clip).len() * clip.label_frames;
        Ok((e.clip_id.clone(), read_metadata(&e.csv)?, preds, frames))
    })
    .into_iter()
    .collect()
}

fn score_pairs(pairs: &[Pair], cfg: &ScoreConfig) -> Result<Vec<SegmentCounts>, CliError> {
    pairs
        .iter()
        .map(|(name, refs, preds, frames)| {
            score_segments(refs, preds, *frames, cfg).map_err(|e| CliError::Data(format!("{name}: {e}")))
        })
        .collect()
}

pub fn eval(a: &EvalArgs) -> Result<(), CliError> {
    let cfg = score_config(&a.scoring)?;
    if !a.no_ci && !(a.significance > 0.0 && a.significance < 1.0) {
        return Err(CliError::Usage(format!("--significance must be in (0, 1), got {}", a.significance)));
    }
    let threads = parallel::threads()?;
    let mut settings = scoring_settings(&a.scoring);
    let pairs = match (&a.refs, &a.preds, &a.checkpoint, &a.manifest) {
        (Some(r), Some(p), None, None) => {
            settings.extend([
                setting("refs", r.display()),
                setting("preds", p.display()),
                setting("clip_frames", a.clip_frames),
            ]);
            log_settings("eval", &settings_with_ci(&settings, a));
            csv_pairs(r, p, a.clip_frames)?
        }
        (None, None, Some(c), Some(m)) => {
            settings.extend([
                setting("checkpoint", c.display()),
                setting("manifest", m.display()),
                setting("threshold", a.decode.threshold),
                setting("merge_angle", a.decode.merge_angle),
                setting("threads", threads),
            ]);
            if let Some(dir) = &a.save_preds {
                settings.push(setting("save_preds", dir.display()));
            }
            log_settings("eval", &settings_with_ci(&settings, a));
            model_pairs(a, c, m, threads)?
        }
        _ => {
            return Err(CliError::Usage(
                "give either --refs and --preds, or --checkpoint and --manifest".into(),
            ))
        }
    };
    let settings = settings_with_ci(&settings, a);
    let counts = score_pairs(&pairs, &cfg)?;
    let mut scores = compute_scores(&SegmentCounts::merge(&counts))?;
    if !a.no_ci {
        if counts.len() < 2 {
            eprintln!("warning: confidence intervals need at least 2 clips; skipped");
        } else {
            scores.ci = Some(jackknife_scores(&counts, a.significance)?);
        }
    }
    finish("eval", counts.len(), &settings, &scores, a.scoring.json.as_deref())
}

fn settings_with_ci(settings: &Settings, a: &EvalArgs) -> Settings {
    let mut s = settings.clone();
    s.push(setting("no_ci", a.no_ci));
    s.push(setting("significance", a.significance));
    s
}

fn finish(command: &str, clips: usize, settings: &Settings, scores: &Scores, json: Option<&Path>) -> Result<(), CliError> {
    let doc = report::to_json(command, clips, settings, scores);
    report::emit(&doc, &report::to_text(clips, scores), json)
}

pub fn score(a: &ScoreArgs) -> Result<(), CliError> {
    let cfg = score_config(&a.scoring)?;
    let mut settings = scoring_settings(&a.scoring);
    settings.extend([
        setting("ref", a.reference.display()),
        setting("pred", a.pred.display()),
        setting("clip_frames", a.clip_frames),
    ]);
    log_settings("score", &settings);
    let refs = read_metadata(&a.reference)?;
    let preds = read_metadata(&a.pred)?;
    let counts = score_segments(&refs, &preds, a.clip_frames, &cfg)?;
    let scores = compute_scores(&counts)?;
    finish("score", 1, &settings, &scores, a.scoring.json.as_deref())
}
