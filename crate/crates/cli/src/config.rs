//! Resolved run configuration: defaults, overridden by a key=value config
//! file, overridden by command-line flags. The full resolved configuration
//! is echoed into every output file header.

use std::collections::HashMap;
use std::fmt::Display;
use std::path::{Path, PathBuf};
use std::str::FromStr;

/// Plain key=value lines; '#' starts a comment; blank lines ignored.
pub fn read_config_file(path: &Path) -> Result<HashMap<String, String>, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read config file {}: {e}", path.display()))?;
    let mut map = HashMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(format!(
                "config file {} line {}: expected key=value, got {raw:?}",
                path.display(),
                lineno + 1
            ));
        };
        map.insert(key.trim().to_string(), value.trim().to_string());
    }
    Ok(map)
}

/// The resolved settings of one run, in recording order.
#[derive(Clone, Debug)]
pub struct RunConfig {
    entries: Vec<(String, String)>,
}

impl RunConfig {
    pub fn new(command: &str) -> Self {
        Self {
            entries: vec![("command".into(), command.into())],
        }
    }

    pub fn record(&mut self, key: &str, value: impl Display) {
        self.entries.push((key.to_string(), value.to_string()));
    }

    /// Header lines (without trailing newlines) embedding the whole config.
    pub fn header_lines(&self) -> Vec<String> {
        self.entries
            .iter()
            .map(|(k, v)| format!("# {k} = {v}"))
            .collect()
    }

    pub fn entries(&self) -> &[(String, String)] {
        &self.entries
    }
}

/// Flag value if set, else config-file value (parsed), else the default.
pub fn resolve<T>(
    flag: Option<T>,
    config: &HashMap<String, String>,
    key: &str,
    default: T,
) -> Result<T, String>
where
    T: FromStr,
    T::Err: Display,
{
    if let Some(v) = flag {
        return Ok(v);
    }
    match config.get(key) {
        Some(raw) => raw
            .parse()
            .map_err(|e| format!("config key {key}: cannot parse {raw:?}: {e}")),
        None => Ok(default),
    }
}

/// Comma-separated float list ("0.04,0.01,0.0025").
pub fn parse_list(raw: &str) -> Result<Vec<f64>, String> {
    let vals: Result<Vec<f64>, _> = raw
        .split(',')
        .map(|s| s.trim().parse::<f64>())
        .collect();
    vals.map_err(|e| format!("cannot parse list {raw:?}: {e}"))
}

/// A list flag: flag string wins over config value over default.
pub fn resolve_list(
    flag: Option<&str>,
    config: &HashMap<String, String>,
    key: &str,
    default: &[f64],
) -> Result<Vec<f64>, String> {
    match flag.or_else(|| config.get(key).map(String::as_str)) {
        Some(raw) => parse_list(raw).map_err(|e| format!("{key}: {e}")),
        None => Ok(default.to_vec()),
    }
}

pub fn out_dir(
    flag: Option<PathBuf>,
    config: &HashMap<String, String>,
) -> Result<PathBuf, String> {
    let dir = match flag {
        Some(d) => d,
        None => config
            .get("out")
            .map(PathBuf::from)
            .unwrap_or_else(|| PathBuf::from(".")),
    };
    std::fs::create_dir_all(&dir)
        .map_err(|e| format!("cannot create output directory {}: {e}", dir.display()))?;
    Ok(dir)
}
