//! Plain `key = value` configuration files.
//!
//! One entry per line; `#` starts a comment; keys are case-insensitive and
//! may use `-` or `_` interchangeably. Later entries override earlier ones.

use std::collections::BTreeMap;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ConfigError {
    #[error("line {line}: expected `key = value`")]
    Syntax { line: usize },
    #[error("key `{key}`: cannot parse `{value}`")]
    Value { key: String, value: String },
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Config {
    entries: BTreeMap<String, String>,
}

fn normalize(key: &str) -> String {
    key.trim().to_ascii_lowercase().replace('-', "_")
}

impl Config {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut entries = BTreeMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let body = raw.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let (k, v) = body
                .split_once('=')
                .ok_or(ConfigError::Syntax { line: idx + 1 })?;
            if k.trim().is_empty() {
                return Err(ConfigError::Syntax { line: idx + 1 });
            }
            entries.insert(normalize(k), v.trim().to_string());
        }
        Ok(Config { entries })
    }

    pub fn set(&mut self, key: &str, value: impl Into<String>) {
        self.entries.insert(normalize(key), value.into());
    }

    pub fn raw(&self, key: &str) -> Option<&str> {
        self.entries.get(&normalize(key)).map(String::as_str)
    }

    pub fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>, ConfigError> {
        match self.raw(key) {
            None => Ok(None),
            Some(v) => v.parse().map(Some).map_err(|_| ConfigError::Value {
                key: normalize(key),
                value: v.to_string(),
            }),
        }
    }

    /// Comma-separated list.
    pub fn list<T: FromStr>(&self, key: &str) -> Result<Option<Vec<T>>, ConfigError> {
        let Some(v) = self.raw(key) else {
            return Ok(None);
        };
        v.split(',')
            .map(|t| {
                t.trim().parse().map_err(|_| ConfigError::Value {
                    key: normalize(key),
                    value: v.to_string(),
                })
            })
            .collect::<Result<Vec<T>, _>>()
            .map(Some)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_overrides() {
        let mut c =
            Config::parse("# sweep\nparam = customer_count\ngrid=25, 50,100\nSeed = 9 # master\n").unwrap();
        assert_eq!(c.raw("param"), Some("customer_count"));
        assert_eq!(c.list::<f64>("grid").unwrap(), Some(vec![25.0, 50.0, 100.0]));
        assert_eq!(c.get::<u64>("seed").unwrap(), Some(9));
        c.set("seed", "10");
        assert_eq!(c.get::<u64>("SEED").unwrap(), Some(10));
        assert!(c.get::<u64>("param").is_err());
        assert_eq!(
            Config::parse("novalue\n").unwrap_err(),
            ConfigError::Syntax { line: 1 }
        );
    }
}
