//! Flat `key = value` configuration files.
//!
//! Each key names a long command-line flag of the chosen subcommand and its
//! value is the flag's argument:
//!
//! ```text
//! # table reproduction settings
//! tau = 0.1
//! order = 3
//! restarts = 20
//! cycle = 10
//! ```
//!
//! `key = true` sets a switch and `key = false` leaves it off. The file is
//! expanded into flags placed before the real command line, so flags given
//! there win.

use std::fs;
use std::path::Path;

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("{path}:{line}: expected `key = value`")]
    Syntax { path: String, line: usize },
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

/// Ordered `(key, value)` pairs.
pub fn parse_config(text: &str, path: &str) -> Result<Vec<(String, String)>, ConfigError> {
    let mut out = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (k, v) = content.split_once('=').ok_or_else(|| ConfigError::Syntax {
            path: path.to_string(),
            line: idx + 1,
        })?;
        let (k, v) = (k.trim(), v.trim());
        if k.is_empty() || k.contains(char::is_whitespace) {
            return Err(ConfigError::Syntax {
                path: path.to_string(),
                line: idx + 1,
            });
        }
        out.push((k.to_string(), v.to_string()));
    }
    Ok(out)
}

pub fn read_config(path: &Path) -> Result<Vec<(String, String)>, ConfigError> {
    let shown = path.display().to_string();
    let text = fs::read_to_string(path).map_err(|source| ConfigError::Io {
        path: shown.clone(),
        source,
    })?;
    parse_config(&text, &shown)
}

/// Expands pairs into command-line tokens.
pub fn to_args(pairs: &[(String, String)]) -> Vec<String> {
    let mut args = Vec::new();
    for (k, v) in pairs {
        match (k.as_str(), v.as_str()) {
            (_, "false") => {}
            (flag, "true") => args.push(format!("--{flag}")),
            (flag, value) => {
                args.push(format!("--{flag}"));
                args.push(value.to_string());
            }
        }
    }
    args
}
