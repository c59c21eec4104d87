use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::bounds::{DimensionConstants, ExternalConstants, DEFAULT_TOL};
use crate::error::{Error, Result};
use crate::fuchsian::{load_group, Group, GroupSpec, SpectrumConfig};

pub const CONFIG_ENV: &str = "SELBERG_BOUNDS_CONFIG";

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    #[default]
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Enumeration {
    pub depth: usize,
    pub trace_cap: Option<f64>,
    pub element_cap: usize,
    pub search_slack: f64,
}

impl Default for Enumeration {
    fn default() -> Self {
        let d = SpectrumConfig::default();
        Enumeration {
            depth: d.depth,
            trace_cap: d.trace_cap,
            element_cap: d.element_cap,
            search_slack: d.search_slack,
        }
    }
}

/// The config file. Every field is optional.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub quadrature_tol: f64,
    /// Cited constants per dimension, keyed by `n`.
    pub external: BTreeMap<String, DimensionConstants>,
    pub groups: Vec<GroupSpec>,
    pub enumeration: Enumeration,
    pub output: Format,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            quadrature_tol: DEFAULT_TOL,
            external: BTreeMap::new(),
            groups: Vec::new(),
            enumeration: Enumeration::default(),
            output: Format::Text,
        }
    }
}

impl Config {
    pub fn from_json(text: &str) -> Result<Config> {
        let c: Config = serde_json::from_str(text)?;
        if !(c.quadrature_tol > 0.0 && c.quadrature_tol < 1.0) {
            return Err(Error::Config(format!(
                "quadrature_tol must lie in (0, 1), got {}",
                c.quadrature_tol
            )));
        }
        for key in c.external.keys() {
            match key.parse::<u32>() {
                Ok(n) if n >= 2 => {}
                _ => {
                    return Err(Error::Config(format!(
                        "external constants key {key:?} is not a dimension n >= 2"
                    )))
                }
            }
        }
        if c.enumeration.depth == 0 || c.enumeration.element_cap == 0 {
            return Err(Error::Config(
                "enumeration depth and element_cap must be positive".into(),
            ));
        }
        let mut seen = std::collections::BTreeSet::new();
        for g in &c.groups {
            if !seen.insert(g.label.as_str()) {
                return Err(Error::Config(format!("group label {:?} appears twice", g.label)));
            }
        }
        Ok(c)
    }

    pub fn load(path: &Path) -> Result<Config> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read config {}: {e}", path.display())))?;
        Config::from_json(&text).map_err(|e| match e {
            Error::Config(m) => Error::Config(format!("{}: {m}", path.display())),
            other => other,
        })
    }

    /// Configured constants on top of the library defaults.
    pub fn external_constants(&self, tol: Option<f64>) -> ExternalConstants {
        let mut ext = ExternalConstants::default().with_tol(tol.unwrap_or(self.quadrature_tol));
        for (k, c) in &self.external {
            if let Ok(n) = k.parse() {
                ext = ext.set(n, *c);
            }
        }
        ext
    }

    pub fn group(&self, label: &str) -> Result<Group> {
        match self.groups.iter().find(|g| g.label == label) {
            Some(spec) => load_group(spec),
            None => {
                let known: Vec<&str> = self.groups.iter().map(|g| g.label.as_str()).collect();
                Err(Error::Config(if known.is_empty() {
                    format!("unknown group {label:?}; no groups are configured")
                } else {
                    format!("unknown group {label:?}; configured groups: {}", known.join(", "))
                }))
            }
        }
    }

    pub fn spectrum_config(&self, l_max: f64, depth: Option<usize>) -> SpectrumConfig {
        SpectrumConfig {
            l_max,
            depth: depth.unwrap_or(self.enumeration.depth),
            element_cap: self.enumeration.element_cap,
            search_slack: self.enumeration.search_slack,
            trace_cap: self.enumeration.trace_cap,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_config_is_valid() {
        let c = Config::from_json("{}").unwrap();
        assert_eq!(c, Config::default());
        assert!(c.external_constants(None).w(2).is_err());
        assert!(c.external_constants(None).v(2).is_ok());
    }

    #[test]
    fn external_constants_merge() {
        let c = Config::from_json(r#"{"external": {"3": {"W": 0.5, "K": 0.1}}, "quadrature_tol": 1e-7}"#).unwrap();
        let ext = c.external_constants(None);
        assert_eq!(ext.w(3).unwrap(), 0.5);
        assert_eq!(ext.k(3).unwrap(), 0.1);
        assert_eq!(ext.tol, 1e-7);
        assert_eq!(c.external_constants(Some(1e-6)).tol, 1e-6);
    }

    #[test]
    fn rejects_bad_configs() {
        assert!(Config::from_json(r#"{"quadrature_tol": 0}"#).is_err());
        assert!(Config::from_json(r#"{"external": {"one": {}}}"#).is_err());
        assert!(Config::from_json(r#"{"nonsense": 1}"#).is_err());
        assert!(Config::from_json("[").is_err());
        let twice =
            r#"{"groups": [{"label": "x", "generators": [[2,0,0,0.5]]}, {"label": "x", "generators": [[2,0,0,0.5]]}]}"#;
        assert!(Config::from_json(twice).is_err());
    }

    #[test]
    fn unknown_group_lists_known_ones() {
        let c = Config::from_json(r#"{"groups": [{"label": "x", "generators": [[2,0,0,0.5]]}]}"#).unwrap();
        let e = c.group("y").unwrap_err().to_string();
        assert!(e.contains("configured groups: x"), "{e}");
    }
}
