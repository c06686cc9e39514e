//! `--config FILE`: a flat TOML table whose keys are long flag names.

use std::ffi::OsString;
use std::path::Path;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config {path}: {source}")]
    Read { path: String, source: std::io::Error },
    #[error("config {path} is not a TOML key-value file: {source}")]
    Parse { path: String, source: toml::de::Error },
    #[error("config key '{key}': {reason}")]
    Value { key: String, reason: String },
    #[error("--config needs a path")]
    MissingPath,
}

/// Flags equivalent to the table, in key order. `true` becomes a bare flag,
/// `false` is dropped, arrays are joined with `;`.
pub fn table_to_args(table: &toml::Table) -> Result<Vec<String>, ConfigError> {
    let mut out = Vec::new();
    for (key, value) in table {
        let flag = format!("--{}", key.replace('_', "-"));
        let scalar = |v: &toml::Value| -> Result<String, ConfigError> {
            match v {
                toml::Value::String(s) => Ok(s.clone()),
                toml::Value::Integer(i) => Ok(i.to_string()),
                toml::Value::Float(x) => Ok(format!("{x:?}")),
                other => Err(ConfigError::Value { key: key.clone(), reason: format!("unsupported value {other}") }),
            }
        };
        match value {
            toml::Value::Boolean(true) => out.push(flag),
            toml::Value::Boolean(false) => {}
            toml::Value::Array(items) => {
                let parts = items.iter().map(scalar).collect::<Result<Vec<_>, _>>()?;
                out.push(flag);
                out.push(parts.join(";"));
            }
            v => {
                out.push(flag);
                out.push(scalar(v)?);
            }
        }
    }
    Ok(out)
}

pub fn load(path: &Path) -> Result<Vec<String>, ConfigError> {
    let shown = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Read { path: shown.clone(), source })?;
    let table: toml::Table = text.parse().map_err(|source| ConfigError::Parse { path: shown, source })?;
    table_to_args(&table)
}

/// Removes `--config PATH` from `argv` and inserts the file's flags right
/// after the subcommand, so that later command-line flags override them.
pub fn expand(argv: Vec<OsString>, subcommands: &[&str]) -> Result<Vec<OsString>, ConfigError> {
    let mut rest = Vec::with_capacity(argv.len());
    let mut path = None;
    let mut it = argv.into_iter();
    while let Some(a) = it.next() {
        match a.to_str() {
            Some("--config") => path = Some(it.next().ok_or(ConfigError::MissingPath)?),
            Some(s) if s.starts_with("--config=") => path = Some(OsString::from(&s["--config=".len()..])),
            _ => rest.push(a),
        }
    }
    let Some(path) = path else {
        return Ok(rest);
    };
    let extra = load(Path::new(&path))?;
    let at = rest.iter().position(|a| a.to_str().is_some_and(|s| subcommands.contains(&s))).map_or(rest.len(), |i| i + 1);
    rest.splice(at..at, extra.into_iter().map(OsString::from));
    Ok(rest)
}
