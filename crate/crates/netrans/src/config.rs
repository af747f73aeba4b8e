//! `key = value` configuration files merged under command-line flags.
//!
//! Keys are the long flag names of the subcommand (`-` and `_` are
//! interchangeable). A flag given on the command line wins over the file.
//! Relative paths in the file are taken relative to the file's directory.

use std::path::{Path, PathBuf};

use clap::{Arg, Command, ValueHint};
use thiserror::Error;

use crate::formats::{self, FormatError};

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error(transparent)]
    Read(#[from] FormatError),
    #[error("{path}:{line}: expected `key = value`")]
    Syntax { path: PathBuf, line: usize },
    #[error("{path}:{line}: unknown key `{key}` for `{command}`")]
    UnknownKey {
        path: PathBuf,
        line: usize,
        key: String,
        command: String,
    },
    #[error("{path}:{line}: `{key}` expects true or false, found `{value}`")]
    NotABool {
        path: PathBuf,
        line: usize,
        key: String,
        value: String,
    },
    #[error("--config needs a file path")]
    MissingPath,
}

/// `(line, key, value)` entries of a config file; blank lines and `#`
/// comments are skipped.
pub fn parse(path: &Path, text: &str) -> Result<Vec<(usize, String, String)>, ConfigError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or(ConfigError::Syntax {
            path: path.to_path_buf(),
            line: i + 1,
        })?;
        let key = key.trim().replace('_', "-");
        if key.is_empty() {
            return Err(ConfigError::Syntax {
                path: path.to_path_buf(),
                line: i + 1,
            });
        }
        out.push((i + 1, key, value.trim().to_string()));
    }
    Ok(out)
}

fn is_path(arg: &Arg) -> bool {
    matches!(
        arg.get_value_hint(),
        ValueHint::FilePath | ValueHint::DirPath | ValueHint::AnyPath
    )
}

fn given(rest: &[String], long: &str) -> bool {
    let flag = format!("--{long}");
    rest.iter()
        .take_while(|a| a.as_str() != "--")
        .any(|a| *a == flag || a.starts_with(&format!("{flag}=")))
}

/// Expands `--config FILE` in `argv` (program, subcommand, arguments...)
/// into explicit flags placed before the command-line arguments.
pub fn expand(cli: &Command, argv: Vec<String>) -> Result<Vec<String>, ConfigError> {
    if argv.len() < 2 {
        return Ok(argv);
    }
    let rest = &argv[2..];
    let mut config_path = None;
    for (i, a) in rest.iter().enumerate() {
        if a == "--" {
            break;
        }
        if a == "--config" {
            config_path = Some(rest.get(i + 1).ok_or(ConfigError::MissingPath)?.clone());
        } else if let Some(p) = a.strip_prefix("--config=") {
            config_path = Some(p.to_string());
        }
    }
    let Some(config_path) = config_path else {
        return Ok(argv);
    };
    let Some(sub) = cli.find_subcommand(&argv[1]) else {
        return Ok(argv);
    };
    let path = PathBuf::from(config_path);
    let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
    let entries = parse(&path, &formats::read_text(&path)?)?;

    let mut injected = Vec::new();
    for (line, key, value) in entries {
        let arg = sub
            .get_arguments()
            .find(|a| a.get_long() == Some(key.as_str()) && key != "config")
            .ok_or_else(|| ConfigError::UnknownKey {
                path: path.clone(),
                line,
                key: key.clone(),
                command: argv[1].clone(),
            })?;
        if given(rest, &key) {
            continue;
        }
        if !arg.get_action().takes_values() {
            match value.as_str() {
                "true" => injected.push(format!("--{key}")),
                "false" => {}
                _ => {
                    return Err(ConfigError::NotABool {
                        path: path.clone(),
                        line,
                        key,
                        value,
                    })
                }
            }
            continue;
        }
        let value = if is_path(arg) && Path::new(&value).is_relative() {
            base.join(&value).to_string_lossy().into_owned()
        } else {
            value
        };
        injected.push(format!("--{key}={value}"));
    }
    let mut out = argv[..2].to_vec();
    out.extend(injected);
    out.extend(rest.iter().cloned());
    Ok(out)
}
