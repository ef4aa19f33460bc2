//! Flat `key = value` run configuration.
//!
//! Blank lines and `#` comments are ignored. Recognised keys: `example`,
//! `alpha` (comma list), `N` (comma list), `M`, `gamma`, `gamma_preset`,
//! `couple`, `scheme`, `initial`, `payoff`, `seed`, `cases`, `out`.

use std::collections::BTreeMap;
use std::path::Path;

use l1fem::{Error, Result};

pub const KNOWN_KEYS: [&str; 13] = [
    "example",
    "alpha",
    "N",
    "M",
    "gamma",
    "gamma_preset",
    "couple",
    "scheme",
    "initial",
    "payoff",
    "seed",
    "cases",
    "out",
];

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Config {
    entries: BTreeMap<String, String>,
}

impl Config {
    pub fn parse(text: &str) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for (line_no, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::InvalidArgument(format!("config line {}: expected key = value", line_no + 1)))?;
            let key = key.trim();
            if !KNOWN_KEYS.contains(&key) {
                return Err(Error::InvalidArgument(format!("config line {}: unknown key '{key}'", line_no + 1)));
            }
            if entries.insert(key.to_string(), value.trim().to_string()).is_some() {
                return Err(Error::InvalidArgument(format!("config line {}: duplicate key '{key}'", line_no + 1)));
            }
        }
        Ok(Config { entries })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidArgument(format!("cannot read {}: {e}", path.display())))?;
        Config::parse(&text)
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(String::as_str)
    }

    pub fn set(&mut self, key: &str, value: impl Into<String>) {
        self.entries.insert(key.to_string(), value.into());
    }

    pub fn remove(&mut self, key: &str) {
        self.entries.remove(key);
    }

    pub fn get_parsed<T: std::str::FromStr>(&self, key: &str) -> Result<Option<T>> {
        self.get(key)
            .map(|v| {
                v.parse::<T>()
                    .map_err(|_| Error::InvalidArgument(format!("bad value '{v}' for {key}")))
            })
            .transpose()
    }

    pub fn get_list<T: std::str::FromStr>(&self, key: &str) -> Result<Option<Vec<T>>> {
        self.get(key).map(|v| parse_list(v, key)).transpose()
    }
}

pub fn parse_list<T: std::str::FromStr>(text: &str, what: &str) -> Result<Vec<T>> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<T>()
                .map_err(|_| Error::InvalidArgument(format!("bad entry '{s}' in {what}")))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_comments_and_lists() {
        let c = Config::parse("# study\nexample = ex1d\nalpha = 0.2, 0.5 # two orders\n\nN=16,32,64\n").unwrap();
        assert_eq!(c.get("example"), Some("ex1d"));
        assert_eq!(c.get_list::<f64>("alpha").unwrap(), Some(vec![0.2, 0.5]));
        assert_eq!(c.get_list::<usize>("N").unwrap(), Some(vec![16, 32, 64]));
        assert_eq!(c.get_parsed::<u64>("seed").unwrap(), None);
    }

    #[test]
    fn rejects_malformed_lines() {
        assert!(Config::parse("alpha 0.5").is_err());
        assert!(Config::parse("colour = red").is_err());
        assert!(Config::parse("seed = 1\nseed = 2").is_err());
        assert!(Config::parse("N = 16, x").unwrap().get_list::<usize>("N").is_err());
    }
}
