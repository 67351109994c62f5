//! Flat `key=value` configuration files. Command-line flags override file
//! values.
//!
//! Recognized keys: `out` (output directory), `threads` (worker pool size
//! hint), `tol` (residual tolerance for the solvers), `pixels` (default
//! scan resolution), `max_iters` (default scan iteration budget), `png`
//! (`true` to also emit PNG alongside PPM).

use std::collections::BTreeMap;
use std::path::Path;

#[derive(Debug, Clone, Default)]
pub struct FileConfig {
    values: BTreeMap<String, String>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
        Self::parse(&text).map_err(|e| format!("config {}: {e}", path.display()))
    }

    pub fn parse(text: &str) -> Result<Self, String> {
        let mut values = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(format!("line {}: expected key=value, got {raw:?}", i + 1));
            };
            values.insert(key.trim().to_string(), value.trim().to_string());
        }
        Ok(Self { values })
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    pub fn get_parsed<T: std::str::FromStr>(&self, key: &str) -> Result<Option<T>, String>
    where
        T::Err: std::fmt::Display,
    {
        match self.values.get(key) {
            None => Ok(None),
            Some(v) => v
                .parse()
                .map(Some)
                .map_err(|e| format!("config key {key}={v:?}: {e}")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_keys_and_skips_comments() {
        let cfg = FileConfig::parse("# comment\nout = runs\nthreads=4\n\npixels = 200\n").unwrap();
        assert_eq!(cfg.get("out"), Some("runs"));
        assert_eq!(cfg.get_parsed::<usize>("threads").unwrap(), Some(4));
        assert_eq!(cfg.get_parsed::<u32>("pixels").unwrap(), Some(200));
        assert_eq!(cfg.get("missing"), None);
    }

    #[test]
    fn rejects_malformed_lines() {
        assert!(FileConfig::parse("just a line\n").is_err());
        assert!(FileConfig::parse("threads=two\n")
            .unwrap()
            .get_parsed::<usize>("threads")
            .is_err());
    }
}
