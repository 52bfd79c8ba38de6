//! Config-file loading and flag/config/default resolution.
//!
//! The file is plain `key = value` lines with `#` comments; keys are
//! the long flag names. Command-line flags override file entries, file
//! entries override built-in defaults.

use crate::CliError;
use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

pub struct ConfigFile {
    entries: BTreeMap<String, String>,
}

impl ConfigFile {
    pub fn empty() -> Self {
        ConfigFile {
            entries: BTreeMap::new(),
        }
    }

    pub fn load(path: &Path, allowed: &[&str]) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::io(format!("cannot read config {}: {e}", path.display())))?;
        let mut entries = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(CliError::usage(format!(
                    "{}:{}: expected `key = value`, got `{raw}`",
                    path.display(),
                    lineno + 1
                )));
            };
            let key = key.trim().to_string();
            if !allowed.contains(&key.as_str()) {
                return Err(CliError::usage(format!(
                    "{}: unknown config key `{key}` (allowed: {})",
                    path.display(),
                    allowed.join(", ")
                )));
            }
            entries.insert(key, value.trim().to_string());
        }
        Ok(ConfigFile { entries })
    }

    /// flag > config > default
    pub fn resolve<T: FromStr + Copy>(
        &self,
        flag: Option<T>,
        key: &str,
        default: T,
    ) -> Result<T, CliError> {
        if let Some(v) = flag {
            return Ok(v);
        }
        match self.entries.get(key) {
            Some(raw) => raw
                .parse::<T>()
                .map_err(|_| CliError::usage(format!("config key `{key}`: cannot parse `{raw}`"))),
            None => Ok(default),
        }
    }

    /// Optional value: flag > config > absent.
    pub fn resolve_optional<T: FromStr + Copy>(
        &self,
        flag: Option<T>,
        key: &str,
    ) -> Result<Option<T>, CliError> {
        if flag.is_some() {
            return Ok(flag);
        }
        match self.entries.get(key) {
            Some(raw) => raw
                .parse::<T>()
                .map(Some)
                .map_err(|_| CliError::usage(format!("config key `{key}`: cannot parse `{raw}`"))),
            None => Ok(None),
        }
    }

    pub fn resolve_string(&self, flag: Option<String>, key: &str, default: &str) -> String {
        flag.unwrap_or_else(|| {
            self.entries
                .get(key)
                .cloned()
                .unwrap_or_else(|| default.to_string())
        })
    }

    /// Required value with no default: error names the missing key.
    pub fn resolve_required_path(
        &self,
        flag: Option<std::path::PathBuf>,
        key: &str,
    ) -> Result<std::path::PathBuf, CliError> {
        if let Some(p) = flag {
            return Ok(p);
        }
        match self.entries.get(key) {
            Some(raw) => Ok(std::path::PathBuf::from(raw)),
            None => Err(CliError::usage(format!(
                "missing required value `{key}` (flag --{key} or config entry)"
            ))),
        }
    }
}
