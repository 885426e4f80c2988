//! Flat `key = value` configuration files.
//!
//! Blank lines and lines starting with `#` are ignored. Keys are the long
//! flag names without the leading dashes; `_` and `-` are interchangeable.

use std::collections::BTreeMap;
use std::path::Path;

use crate::UsageError;

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConfigFile {
    entries: BTreeMap<String, String>,
}

pub const KNOWN_KEYS: &[&str] = &[
    "model",
    "zeta",
    "delta",
    "field",
    "c",
    "beta-re",
    "beta-im",
    "m",
    "nodes",
    "contour-height",
    "seed",
    "output",
    "format",
    "gamma",
];

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self, UsageError> {
        let mut entries = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| UsageError(format!("config line {}: expected key=value, got '{line}'", lineno + 1)))?;
            let key = k.trim().replace('_', "-");
            if !KNOWN_KEYS.contains(&key.as_str()) {
                return Err(UsageError(format!("config line {}: unknown key '{}'", lineno + 1, k.trim())));
            }
            if entries.insert(key.clone(), v.trim().to_string()).is_some() {
                return Err(UsageError(format!("config line {}: duplicate key '{key}'", lineno + 1)));
            }
        }
        Ok(Self { entries })
    }

    pub fn load(path: &Path) -> Result<Self, UsageError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| UsageError(format!("cannot read config file {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn raw(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(String::as_str)
    }

    pub fn get<T: std::str::FromStr>(&self, key: &str) -> Result<Option<T>, UsageError>
    where
        T::Err: std::fmt::Display,
    {
        self.raw(key)
            .map(|v| v.parse::<T>().map_err(|e| UsageError(format!("config key '{key}': cannot parse '{v}': {e}"))))
            .transpose()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_comments_and_aliases() {
        let c = ConfigFile::parse("# comment\n\nmodel = xxz\nbeta_re=0.5\n  field =2\n").unwrap();
        assert_eq!(c.raw("model"), Some("xxz"));
        assert_eq!(c.get::<f64>("beta-re").unwrap(), Some(0.5));
        assert_eq!(c.get::<f64>("field").unwrap(), Some(2.0));
        assert_eq!(c.get::<f64>("zeta").unwrap(), None);
    }

    #[test]
    fn rejects_garbage() {
        assert!(ConfigFile::parse("model xxz").is_err());
        assert!(ConfigFile::parse("colour = red").is_err());
        assert!(ConfigFile::parse("field=1\nfield=2").is_err());
        assert!(ConfigFile::parse("field=abc").unwrap().get::<f64>("field").is_err());
    }
}
