use std::fs;
use std::path::{Path, PathBuf};

use crate::audio::write_wav;
use crate::error::{Error, Result};
use crate::features::AudioFormat;
use crate::metadata::write_metadata;

use super::{synth_scene, SceneConfig};

pub const MANIFEST_NAME: &str = "manifest.csv";
pub const MANIFEST_HEADER: &str = "clip_id,seed,path_wav,path_csv";

/// One generated clip. Paths are resolved against the manifest directory.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ManifestEntry {
    pub clip_id: String,
    pub seed: u64,
    pub wav: PathBuf,
    pub csv: PathBuf,
}

/// Seed of clip `index` in a dataset generated from `base`.
fn clip_seed(base: u64, index: usize) -> u64 {
    base.wrapping_add(index as u64)
}

fn write_atomic(path: &Path, write: impl FnOnce(&Path) -> Result<()>) -> Result<()> {
    let tmp = path.with_extension("partial");
    write(&tmp)?;
    fs::rename(&tmp, path).map_err(|e| Error::io(path, e))
}

/// Renders clip `index` into `out_dir` unless both of its files already exist.
pub fn synth_clip(cfg: &SceneConfig, index: usize, format: AudioFormat, out_dir: &Path) -> Result<ManifestEntry> {
    let clip_id = format!("clip_{index:05}");
    let entry = ManifestEntry {
        seed: clip_seed(cfg.seed, index),
        wav: out_dir.join(format!("{clip_id}.wav")),
        csv: out_dir.join(format!("{clip_id}.csv")),
        clip_id,
    };
    if entry.wav.is_file() && entry.csv.is_file() {
        return Ok(entry);
    }
    let scene = synth_scene(&SceneConfig {
        seed: entry.seed,
        ..cfg.clone()
    })?;
    write_atomic(&entry.wav, |p| write_wav(scene.audio(format), p))?;
    write_atomic(&entry.csv, |p| write_metadata(&scene.events, p))?;
    Ok(entry)
}

/// Generates `n_clips` scenes with consecutive seeds starting at `cfg.seed`
/// and writes `manifest.csv`. Existing clips are kept, so an interrupted run
/// can be resumed.
pub fn synth_dataset(cfg: &SceneConfig, n_clips: usize, out_dir: &Path, format: AudioFormat) -> Result<Vec<ManifestEntry>> {
    cfg.validate()?;
    fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir, e))?;
    let entries = (0..n_clips)
        .map(|i| synth_clip(cfg, i, format, out_dir))
        .collect::<Result<Vec<_>>>()?;
    write_manifest(&entries, &out_dir.join(MANIFEST_NAME))?;
    Ok(entries)
}

fn relative<'a>(path: &'a Path, base: &Path) -> &'a Path {
    path.strip_prefix(base).unwrap_or(path)
}

pub fn write_manifest(entries: &[ManifestEntry], path: &Path) -> Result<()> {
    let base = path.parent().unwrap_or(Path::new(""));
    let mut text = String::from(MANIFEST_HEADER);
    text.push('\n');
    for e in entries {
        text.push_str(&format!(
            "{},{},{},{}\n",
            e.clip_id,
            e.seed,
            relative(&e.wav, base).display(),
            relative(&e.csv, base).display()
        ));
    }
    write_atomic(path, |p| fs::write(p, text).map_err(|e| Error::io(p, e)))
}

pub fn read_manifest(path: &Path) -> Result<Vec<ManifestEntry>> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let base = path.parent().unwrap_or(Path::new(""));
    let parse_err = |line: usize, message: String| Error::Parse {
        path: path.to_path_buf(),
        line,
        message,
    };
    let mut entries = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || (i == 0 && line == MANIFEST_HEADER) {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 4 {
            return Err(parse_err(i + 1, format!("expected 4 fields, got {}", fields.len())));
        }
        let seed = fields[1]
            .parse()
            .map_err(|e| parse_err(i + 1, format!("seed: {e}")))?;
        entries.push(ManifestEntry {
            clip_id: fields[0].to_string(),
            seed,
            wav: base.join(fields[2]),
            csv: base.join(fields[3]),
        });
    }
    Ok(entries)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_clip_dataset() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = SceneConfig { seed: 11, ..Default::default() };
        let entries = synth_dataset(&cfg, 1, dir.path(), AudioFormat::Foa).unwrap();
        assert_eq!(entries.len(), 1);
        let names: Vec<_> = {
            let mut v: Vec<_> = fs::read_dir(dir.path()).unwrap().map(|e| e.unwrap().file_name()).collect();
            v.sort();
            v
        };
        assert_eq!(names, ["clip_00000.csv", "clip_00000.wav", "manifest.csv"]);
        let manifest = fs::read_to_string(dir.path().join(MANIFEST_NAME)).unwrap();
        assert_eq!(manifest, "clip_id,seed,path_wav,path_csv\nclip_00000,11,clip_00000.wav,clip_00000.csv\n");
        assert_eq!(read_manifest(&dir.path().join(MANIFEST_NAME)).unwrap(), entries);
    }

    #[test]
    fn seeds_reproduce_files_and_resume() {
        let a = tempfile::tempdir().unwrap();
        let cfg = SceneConfig { seed: 100, ..Default::default() };
        let entries = synth_dataset(&cfg, 3, a.path(), AudioFormat::Binaural).unwrap();
        let b = tempfile::tempdir().unwrap();
        let one = synth_clip(&SceneConfig { seed: entries[2].seed, ..cfg.clone() }, 0, AudioFormat::Binaural, b.path()).unwrap();
        assert_eq!(fs::read(&entries[2].wav).unwrap(), fs::read(&one.wav).unwrap());
        assert_eq!(fs::read(&entries[2].csv).unwrap(), fs::read(&one.csv).unwrap());

        // resumed run leaves existing clips untouched
        fs::write(&entries[0].csv, "marker").unwrap();
        fs::remove_file(&entries[1].wav).unwrap();
        let again = synth_dataset(&cfg, 3, a.path(), AudioFormat::Binaural).unwrap();
        assert_eq!(again, entries);
        assert_eq!(fs::read_to_string(&entries[0].csv).unwrap(), "marker");
        assert!(entries[1].wav.is_file());
    }

    #[test]
    fn malformed_manifest() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join(MANIFEST_NAME);
        fs::write(&p, "clip_id,seed,path_wav,path_csv\na,notanumber,x.wav,x.csv\n").unwrap();
        assert!(matches!(read_manifest(&p), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(read_manifest(&dir.path().join("missing.csv")), Err(Error::Io { .. })));
    }
}
