//! `--config FILE` support: the file's `key=value` lines become long flags
//! placed before the user's own arguments, so explicit flags override them.

use std::ffi::OsString;
use std::fs;
use std::path::PathBuf;

use crate::CliError;

/// Flags that take no value; `true` in a config file turns them on.
const SWITCHES: &[&str] = &["force", "no-ci"];

fn config_path(args: &[OsString]) -> Result<Option<PathBuf>, CliError> {
    for (i, a) in args.iter().enumerate() {
        let a = a.to_string_lossy();
        if a == "--config" {
            return match args.get(i + 1) {
                Some(p) => Ok(Some(PathBuf::from(p))),
                None => Err(CliError::Usage("--config needs a file".into())),
            };
        }
        if let Some(p) = a.strip_prefix("--config=") {
            return Ok(Some(PathBuf::from(p)));
        }
    }
    Ok(None)
}

/// Parses `key=value` lines into flag arguments. `#` starts a comment.
pub fn file_flags(text: &str) -> Result<Vec<OsString>, CliError> {
    let mut out = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("config line {}: expected key=value, got {line:?}", n + 1)))?;
        let key = key.trim().replace('_', "-");
        let value = value.trim();
        if key == "config" {
            return Err(CliError::Usage("config files cannot include other config files".into()));
        }
        if SWITCHES.contains(&key.as_str()) {
            match value {
                "true" | "1" | "yes" => out.push(format!("--{key}").into()),
                "false" | "0" | "no" => {}
                other => return Err(CliError::Usage(format!("config line {}: {key} expects true or false, got {other:?}", n + 1))),
            }
        } else {
            out.push(format!("--{key}").into());
            out.push(value.into());
        }
    }
    Ok(out)
}

/// Expands `--config FILE` (if present) into flags right after the
/// subcommand name.
pub fn expand(args: Vec<OsString>) -> Result<Vec<OsString>, CliError> {
    let Some(path) = config_path(&args)? else {
        return Ok(args);
    };
    let text = fs::read_to_string(&path).map_err(|e| CliError::Data(format!("cannot read {}: {e}", path.display())))?;
    let flags = file_flags(&text)?;
    // args[0] is the program, args[1] the subcommand
    let split = args.len().min(2);
    let mut out = args[..split].to_vec();
    out.extend(flags);
    out.extend_from_slice(&args[split..]);
    Ok(out)
}
