//! Plain-text `key = value` configuration and the claims manifest.

use std::collections::BTreeMap;
use std::path::Path;

use crate::error::{Error, Result};

use super::Rule;

/// Shipped defaults for every `verify` suite.
pub const DEFAULT_CONFIG: &str = include_str!("../../data/verify.conf");

/// Shipped manifest of required claims.
pub const DEFAULT_MANIFEST: &str = include_str!("../../data/claims.txt");

/// Ordered key-value settings; later assignments override earlier ones.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Config {
    entries: BTreeMap<String, String>,
}

impl Config {
    /// The shipped defaults.
    pub fn defaults() -> Self {
        Config::parse(DEFAULT_CONFIG).expect("shipped config parses")
    }

    /// Parses `key = value` lines; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for (k, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("config line {}: expected key = value", k + 1)))?;
            let key = key.trim();
            if key.is_empty() || key.contains(char::is_whitespace) {
                return Err(Error::Parse(format!("config line {}: bad key {key:?}", k + 1)));
            }
            entries.insert(key.to_string(), value.trim().to_string());
        }
        Ok(Config { entries })
    }

    /// Defaults overridden by the file at `path`.
    pub fn load_over_defaults(path: &Path) -> Result<Self> {
        let mut cfg = Config::defaults();
        cfg.merge(&Config::parse(&std::fs::read_to_string(path)?)?);
        Ok(cfg)
    }

    pub fn merge(&mut self, other: &Config) {
        for (k, v) in &other.entries {
            self.entries.insert(k.clone(), v.clone());
        }
    }

    pub fn set(&mut self, key: &str, value: &str) {
        self.entries.insert(key.to_string(), value.to_string());
    }

    pub fn get(&self, key: &str) -> Result<&str> {
        self.entries.get(key).map(String::as_str).ok_or_else(|| Error::Parse(format!("missing config key {key}")))
    }

    pub fn f64(&self, key: &str) -> Result<f64> {
        parse_number(self.get(key)?).map_err(|e| Error::Parse(format!("{key}: {e}")))
    }

    pub fn usize(&self, key: &str) -> Result<usize> {
        self.get(key)?.parse().map_err(|e| Error::Parse(format!("{key}: {e}")))
    }

    pub fn u64(&self, key: &str) -> Result<u64> {
        self.get(key)?.parse().map_err(|e| Error::Parse(format!("{key}: {e}")))
    }

    /// Comma-separated numbers; `inf` is accepted.
    pub fn list(&self, key: &str) -> Result<Vec<f64>> {
        parse_list(self.get(key)?).map_err(|e| Error::Parse(format!("{key}: {e}")))
    }

    pub fn usize_list(&self, key: &str) -> Result<Vec<usize>> {
        self.get(key)?
            .split(',')
            .map(|s| s.trim().parse::<usize>().map_err(|e| Error::Parse(format!("{key}: {e}"))))
            .collect()
    }

    /// Tolerance of a claim, `tol.<claim id>`.
    pub fn tolerance(&self, claim: &str) -> Result<f64> {
        self.f64(&format!("tol.{claim}"))
    }

    pub fn keys(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }
}

pub fn parse_number(s: &str) -> std::result::Result<f64, String> {
    match s.trim() {
        "inf" | "infinity" | "Inf" => Ok(f64::INFINITY),
        t => t.parse::<f64>().map_err(|e| format!("{t:?}: {e}")),
    }
}

pub fn parse_list(s: &str) -> std::result::Result<Vec<f64>, String> {
    s.split(',').filter(|t| !t.trim().is_empty()).map(parse_number).collect()
}

/// One manifest row.
#[derive(Debug, Clone, PartialEq)]
pub struct ClaimEntry {
    pub id: String,
    pub required: bool,
    pub rule: Rule,
    /// Short description of what the check asserts, or `plumbing`.
    pub anchor: String,
}

/// Claims in manifest order.
#[derive(Debug, Clone, PartialEq)]
pub struct Manifest {
    pub claims: Vec<ClaimEntry>,
}

impl Manifest {
    pub fn shipped() -> Self {
        Manifest::parse(DEFAULT_MANIFEST).expect("shipped manifest parses")
    }

    /// Rows `id required rule anchor...`, whitespace separated.
    pub fn parse(text: &str) -> Result<Self> {
        let mut claims: Vec<ClaimEntry> = Vec::new();
        for (k, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let bad = |what: &str| Error::Parse(format!("manifest line {}: {what}", k + 1));
            let mut parts = line.split_whitespace();
            let id = parts.next().ok_or_else(|| bad("missing id"))?.to_string();
            let required = match parts.next() {
                Some("yes") => true,
                Some("no") => false,
                _ => return Err(bad("required must be yes or no")),
            };
            let rule = Rule::from_name(parts.next().ok_or_else(|| bad("missing rule"))?).ok_or_else(|| bad("unknown rule"))?;
            let anchor = parts.collect::<Vec<_>>().join(" ");
            if anchor.is_empty() {
                return Err(bad("missing anchor"));
            }
            if claims.iter().any(|c| c.id == id) {
                return Err(bad("duplicate id"));
            }
            claims.push(ClaimEntry { id, required, rule, anchor });
        }
        Ok(Manifest { claims })
    }

    pub fn get(&self, id: &str) -> Option<&ClaimEntry> {
        self.claims.iter().find(|c| c.id == id)
    }
}
