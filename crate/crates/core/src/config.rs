//! Flat INI-style run configuration: `key = value` lines with `#` comments.

use crate::error::{Error, Result};
use std::collections::BTreeMap;

#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunConfig {
    map: BTreeMap<String, String>,
}

impl RunConfig {
    pub fn new() -> Self {
        RunConfig::default()
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = match raw.find('#') {
                Some(i) => &raw[..i],
                None => raw,
            }
            .trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::Config(format!(
                    "line {}: expected `key = value`, got `{raw}`",
                    lineno + 1
                ))
            })?;
            let key = key.trim();
            if key.is_empty() {
                return Err(Error::Config(format!("line {}: empty key", lineno + 1)));
            }
            map.insert(key.to_string(), value.trim().to_string());
        }
        Ok(RunConfig { map })
    }

    pub fn from_file(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn set(&mut self, key: &str, value: impl Into<String>) {
        self.map.insert(key.to_string(), value.into());
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.map.get(key).map(|s| s.as_str())
    }

    pub fn str_or<'a>(&'a self, key: &str, default: &'a str) -> &'a str {
        self.get(key).unwrap_or(default)
    }

    pub fn f64_or(&self, key: &str, default: f64) -> Result<f64> {
        match self.get(key) {
            None => Ok(default),
            Some(s) => s
                .parse()
                .map_err(|_| Error::Config(format!("key `{key}`: expected a number, got `{s}`"))),
        }
    }

    pub fn u64_or(&self, key: &str, default: u64) -> Result<u64> {
        match self.get(key) {
            None => Ok(default),
            Some(s) => s
                .parse()
                .map_err(|_| Error::Config(format!("key `{key}`: expected an integer, got `{s}`"))),
        }
    }

    pub fn u64_list_or(&self, key: &str, default: &[u64]) -> Result<Vec<u64>> {
        match self.get(key) {
            None => Ok(default.to_vec()),
            Some(s) => s
                .split(',')
                .map(|p| {
                    p.trim().parse().map_err(|_| {
                        Error::Config(format!("key `{key}`: expected integers, got `{p}`"))
                    })
                })
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_keys_comments_and_blanks() {
        let cfg = RunConfig::parse(
            "# run setup\nmodel.rho = 1.5\n\ngrid.n=200000   # inline comment\nmc.replicas = 500\n",
        )
        .unwrap();
        assert_eq!(cfg.f64_or("model.rho", 0.0).unwrap(), 1.5);
        assert_eq!(cfg.u64_or("grid.n", 0).unwrap(), 200000);
        assert_eq!(cfg.u64_or("mc.replicas", 0).unwrap(), 500);
        assert_eq!(cfg.u64_or("missing", 7).unwrap(), 7);
    }

    #[test]
    fn rejects_malformed_lines_and_bad_types() {
        assert!(RunConfig::parse("just words\n").is_err());
        let cfg = RunConfig::parse("grid.n = abc\n").unwrap();
        assert!(matches!(cfg.u64_or("grid.n", 0), Err(Error::Config(_))));
    }

    #[test]
    fn parses_integer_lists() {
        let cfg = RunConfig::parse("converge.n_list = 1000, 10000,100000\n").unwrap();
        assert_eq!(
            cfg.u64_list_or("converge.n_list", &[]).unwrap(),
            vec![1000, 10000, 100000]
        );
    }
}
