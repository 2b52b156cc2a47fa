//! Config-file loading and flag/file merging.
//!
//! The file is TOML-style `key = value` pairs mirroring the run
//! configuration; command-line flags override file values. Unknown keys are
//! rejected by name so a typo never silently changes a run.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};

/// Every key a config file may define.
const KNOWN_KEYS: &[&str] = &[
    "command",
    "k",
    "d",
    "r",
    "word",
    "range",
    "set",
    "gens",
    "base",
    "gen_pool",
    "base_pool",
    "limit",
    "size_limit",
    "union_limit",
    "include_empty",
    "equivalence",
    "baseline",
    "check_absence",
    "count_only",
    "max_weight",
    "format",
    "workers",
    "seed",
];

#[derive(Debug, Default)]
pub struct FileConfig {
    table: toml::Table,
}

impl FileConfig {
    pub fn load(path: Option<&Path>) -> Result<Self> {
        let Some(path) = path else {
            return Ok(FileConfig::default());
        };
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("cannot read config file {}", path.display()))?;
        let table: toml::Table = text
            .parse()
            .with_context(|| format!("cannot parse config file {}", path.display()))?;
        for key in table.keys() {
            if !KNOWN_KEYS.contains(&key.as_str()) {
                bail!("unknown config key `{key}` in {}", path.display());
            }
        }
        Ok(FileConfig { table })
    }

    pub fn string(&self, key: &str) -> Result<Option<String>> {
        match self.table.get(key) {
            None => Ok(None),
            Some(toml::Value::String(s)) => Ok(Some(s.clone())),
            Some(other) => bail!("config key `{key}` must be a string, got {other}"),
        }
    }

    pub fn integer<T: TryFrom<i64>>(&self, key: &str) -> Result<Option<T>> {
        match self.table.get(key) {
            None => Ok(None),
            Some(toml::Value::Integer(i)) => match T::try_from(*i) {
                Ok(v) => Ok(Some(v)),
                Err(_) => bail!("config key `{key}` value {i} is out of range"),
            },
            Some(other) => bail!("config key `{key}` must be an integer, got {other}"),
        }
    }

    pub fn boolean(&self, key: &str) -> Result<Option<bool>> {
        match self.table.get(key) {
            None => Ok(None),
            Some(toml::Value::Boolean(b)) => Ok(Some(*b)),
            Some(other) => bail!("config key `{key}` must be a boolean, got {other}"),
        }
    }

    pub fn path(&self, key: &str) -> Result<Option<PathBuf>> {
        Ok(self.string(key)?.map(PathBuf::from))
    }
}
