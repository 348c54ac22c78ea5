//! `key = value` config files. Each line becomes `--key value` on the command
//! line unless the flag was already given there. `#` starts a comment, a key
//! may repeat for repeatable flags, and `true`/`false` toggle switches.

use std::ffi::OsString;
use std::path::Path;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("config line {line}: {msg}")]
    Syntax { line: usize, msg: String },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Entry {
    pub key: String,
    pub value: String,
}

pub fn parse(text: &str) -> Result<Vec<Entry>, ConfigError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(ConfigError::Syntax {
                line: i + 1,
                msg: format!("expected `key = value`, got `{line}`"),
            });
        };
        let key = key.trim().trim_start_matches("--").replace('_', "-");
        if key.is_empty() || !key.chars().all(|c| c.is_ascii_alphanumeric() || c == '-') {
            return Err(ConfigError::Syntax {
                line: i + 1,
                msg: format!("bad key `{key}`"),
            });
        }
        if key == "config" {
            return Err(ConfigError::Syntax {
                line: i + 1,
                msg: "config files cannot include other config files".into(),
            });
        }
        out.push(Entry {
            key,
            value: value.trim().to_string(),
        });
    }
    Ok(out)
}

fn flag_given(args: &[OsString], key: &str) -> bool {
    let long = format!("--{key}");
    let prefixed = format!("--{key}=");
    args.iter().any(|a| {
        a.to_str()
            .is_some_and(|s| s == long || s.starts_with(&prefixed))
    })
}

/// Appends config entries whose flags are absent from `args`.
pub fn merge(args: &[OsString], entries: &[Entry]) -> Vec<OsString> {
    let mut merged = args.to_vec();
    for e in entries {
        if flag_given(args, &e.key) {
            continue;
        }
        match e.value.to_ascii_lowercase().as_str() {
            "true" => merged.push(format!("--{}", e.key).into()),
            "false" => {}
            _ => merged.push(format!("--{}={}", e.key, e.value).into()),
        }
    }
    merged
}

/// Locates `--config PATH` in raw arguments.
pub fn config_path(args: &[OsString]) -> Option<OsString> {
    let mut it = args.iter();
    while let Some(a) = it.next() {
        let s = a.to_string_lossy();
        if s == "--config" {
            return it.next().cloned();
        }
        if let Some(p) = s.strip_prefix("--config=") {
            return Some(p.into());
        }
    }
    None
}

pub fn load(path: &Path) -> Result<Vec<Entry>, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn os(v: &[&str]) -> Vec<OsString> {
        v.iter().map(OsString::from).collect()
    }

    #[test]
    fn parses_comments_and_repeats() {
        let e = parse("# run\nx = 0.5\nengine=trace\nengine = closed  # both\n\nmax_iters = 10\n")
            .unwrap();
        let keys: Vec<_> = e.iter().map(|e| e.key.as_str()).collect();
        assert_eq!(keys, ["x", "engine", "engine", "max-iters"]);
        assert_eq!(e[0].value, "0.5");
    }

    #[test]
    fn rejects_malformed_lines() {
        assert!(matches!(
            parse("x 0.5"),
            Err(ConfigError::Syntax { line: 1, .. })
        ));
        assert!(parse("= 3").is_err());
        assert!(parse("config = other.cfg").is_err());
    }

    #[test]
    fn command_line_wins() {
        let args = os(&["bosonbell", "probs", "--x", "2"]);
        let e = parse("x = 0.5\nstate = xi\ncheck = true\nformat = false").unwrap();
        let merged = merge(&args, &e);
        assert_eq!(
            merged,
            os(&["bosonbell", "probs", "--x", "2", "--state=xi", "--check"])
        );
    }

    #[test]
    fn negative_values_survive() {
        let merged = merge(&os(&["b", "probs"]), &parse("c = -1").unwrap());
        assert_eq!(merged[2], OsString::from("--c=-1"));
    }

    #[test]
    fn finds_config_flag() {
        assert_eq!(
            config_path(&os(&["b", "scan", "--config", "a.cfg"])),
            Some("a.cfg".into())
        );
        assert_eq!(config_path(&os(&["b", "--config=x"])), Some("x".into()));
        assert_eq!(config_path(&os(&["b", "scan"])), None);
    }
}
