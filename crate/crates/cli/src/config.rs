//! Run settings merged from flags, an optional config file and defaults.

use std::path::Path;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("config line {line}: {message}")]
    Syntax { line: usize, message: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Markdown,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Settings {
    pub tol: f64,
    pub seed: u64,
    pub trials: usize,
    pub format: Format,
}

impl Default for Settings {
    fn default() -> Self {
        Settings { tol: 1e-9, seed: 42, trials: 1000, format: Format::Json }
    }
}

/// Values present in a config file.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Overrides {
    pub tol: Option<f64>,
    pub seed: Option<u64>,
    pub trials: Option<usize>,
    pub format: Option<Format>,
}

impl Overrides {
    /// `self` wins over `lower`.
    pub fn over(self, lower: Overrides) -> Overrides {
        Overrides {
            tol: self.tol.or(lower.tol),
            seed: self.seed.or(lower.seed),
            trials: self.trials.or(lower.trials),
            format: self.format.or(lower.format),
        }
    }

    pub fn resolve(self) -> Settings {
        let d = Settings::default();
        Settings {
            tol: self.tol.unwrap_or(d.tol),
            seed: self.seed.unwrap_or(d.seed),
            trials: self.trials.unwrap_or(d.trials),
            format: self.format.unwrap_or(d.format),
        }
    }
}

/// Flat `key = value` text; `#` starts a comment.
pub fn parse(text: &str) -> Result<Overrides, ConfigError> {
    let mut out = Overrides::default();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content
            .split_once('=')
            .ok_or_else(|| ConfigError::Syntax { line, message: format!("expected key = value, got {content:?}") })?;
        let (key, value) = (key.trim(), value.trim());
        let bad = |what: &str| ConfigError::Syntax { line, message: format!("invalid {what} {value:?}") };
        match key {
            "tol" => {
                let v: f64 = value.parse().map_err(|_| bad("tolerance"))?;
                if !(v >= 0.0) {
                    return Err(bad("tolerance"));
                }
                out.tol = Some(v);
            }
            "seed" => out.seed = Some(value.parse().map_err(|_| bad("seed"))?),
            "trials" => {
                let v: usize = value.parse().map_err(|_| bad("trial count"))?;
                if v == 0 {
                    return Err(bad("trial count"));
                }
                out.trials = Some(v);
            }
            "format" => {
                out.format = Some(match value {
                    "json" => Format::Json,
                    "markdown" => Format::Markdown,
                    _ => return Err(bad("format")),
                })
            }
            _ => return Err(ConfigError::Syntax { line, message: format!("unknown key {key:?}") }),
        }
    }
    Ok(out)
}

pub fn load(path: &Path) -> Result<Overrides, ConfigError> {
    let text = std::fs::read_to_string(path)
        .map_err(|source| ConfigError::Io { path: path.display().to_string(), source })?;
    parse(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_layers() {
        let file = parse("# run\ntol = 1e-6\nseed=7\n\nformat = markdown # trailing\n").unwrap();
        assert_eq!(file.tol, Some(1e-6));
        let flags = Overrides { seed: Some(9), ..Overrides::default() };
        let s = flags.over(file).resolve();
        assert_eq!((s.tol, s.seed, s.trials, s.format), (1e-6, 9, 1000, Format::Markdown));
    }

    #[test]
    fn rejects_unknown_and_malformed() {
        assert!(parse("colour = red").is_err());
        assert!(parse("trials = 0").is_err());
        assert!(parse("seed").is_err());
    }
}
