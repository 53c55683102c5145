//! Run configuration: a JSON file merged with command-line overrides.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

/// Polar sampling of the G-plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub r_min: f64,
    pub r_max: f64,
    pub n_r: usize,
    pub n_phi: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi_min: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi_max: Option<f64>,
}

impl GridSpec {
    /// Parses `r_min,r_max,n_r,n_phi`.
    pub fn parse(text: &str) -> CliResult<Self> {
        let parts: Vec<&str> = text.split(',').map(str::trim).collect();
        let bad = || CliError::config(format!("--grid expects r_min,r_max,n_r,n_phi, got `{}`", text));
        if parts.len() != 4 {
            return Err(bad());
        }
        Ok(GridSpec {
            r_min: parts[0].parse().map_err(|_| bad())?,
            r_max: parts[1].parse().map_err(|_| bad())?,
            n_r: parts[2].parse().map_err(|_| bad())?,
            n_phi: parts[3].parse().map_err(|_| bad())?,
            phi_min: None,
            phi_max: None,
        })
    }
}

/// Every field is optional; unset fields fall back to command defaults.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub params: BTreeMap<String, f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exclude_radius: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basepoint: Option<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub checks: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub suite: Option<String>,
    /// Family whose Chern-Ricci spec is used instead of the family's own.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spec: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub format: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    /// Number of associate-angle steps for `deform`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub steps: Option<usize>,
    /// Seed for randomly sampled checks.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl RunConfig {
    pub fn from_json(text: &str) -> CliResult<Self> {
        serde_json::from_str(text).map_err(|e| CliError::config(format!("config: {}", e)))
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::config(format!("config {}: {}", path.display(), e)))?;
        Self::from_json(&text)
    }

    /// Pretty JSON with a trailing newline.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("config serializes");
        s.push('\n');
        s
    }

    /// Fields set in `overrides` replace those in `self`; parameters merge by key.
    pub fn merged(mut self, overrides: RunConfig) -> Self {
        macro_rules! take {
            ($($f:ident),*) => {$(if overrides.$f.is_some() { self.$f = overrides.$f; })*};
        }
        take!(family, grid, exclude_radius, theta, basepoint, suite, spec, out, format, tolerance, steps, seed);
        self.params.extend(overrides.params);
        if !overrides.checks.is_empty() {
            self.checks = overrides.checks;
        }
        self
    }
}

/// Parses a repeatable `k=v` flag value.
pub fn parse_param(text: &str) -> CliResult<(String, f64)> {
    let (k, v) = text.split_once('=').ok_or_else(|| CliError::config(format!("--param expects k=v, got `{}`", text)))?;
    let value = v.trim().parse().map_err(|_| CliError::config(format!("--param {}: `{}` is not a number", k, v)))?;
    Ok((k.trim().to_string(), value))
}

/// Parses `re,im`.
pub fn parse_point(text: &str) -> CliResult<[f64; 2]> {
    let bad = || CliError::config(format!("--basepoint expects re,im, got `{}`", text));
    let (a, b) = text.split_once(',').ok_or_else(bad)?;
    Ok([a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_is_byte_identical() {
        let mut c = RunConfig { family: Some("tCLP".into()), theta: Some(0.1 + 0.2), ..Default::default() };
        c.params.insert("theta".into(), 0.3926991);
        c.grid = Some(GridSpec::parse("0.1,0.9,8,16").unwrap());
        c.checks = vec!["constancy".into()];
        let text = c.to_json();
        let back = RunConfig::from_json(&text).unwrap();
        assert_eq!(back, c);
        assert_eq!(back.to_json(), text);
    }

    #[test]
    fn overrides_win() {
        let base = RunConfig { family: Some("catenoid".into()), theta: Some(0.0), ..Default::default() };
        let over = RunConfig { theta: Some(1.0), ..Default::default() };
        let m = base.merged(over);
        assert_eq!(m.family.as_deref(), Some("catenoid"));
        assert_eq!(m.theta, Some(1.0));
    }

    #[test]
    fn rejects_unknown_fields_and_bad_flags() {
        assert!(RunConfig::from_json("{\"famly\": \"x\"}").is_err());
        assert!(parse_param("theta").is_err());
        assert_eq!(parse_param("a = 2").unwrap(), ("a".into(), 2.0));
        assert!(GridSpec::parse("1,2,3").is_err());
        assert_eq!(parse_point("1,-2").unwrap(), [1.0, -2.0]);
    }
}
