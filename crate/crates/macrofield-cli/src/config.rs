use crate::args::{Format, PopulationTable};
use anyhow::{Context, Result};
use macrofield::diagnostics::InflationMethod;
use macrofield::model::{Method, ModelConfig};
use macrofield::multiworld::WorldConfig;
use serde::Deserialize;
use std::path::{Path, PathBuf};

/// Settings read from `--config`. Every key is optional and command-line flags take precedence.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub input: Option<PathBuf>,
    pub decimal_comma: Option<bool>,
    pub from: Option<i32>,
    pub to: Option<i32>,
    pub format: Option<Format>,
    pub out: Option<PathBuf>,
    pub model: Option<ModelConfig>,
    pub world: Option<WorldConfig>,
    pub horizon: Option<f64>,
    pub step: Option<f64>,
    pub method: Option<Method>,
    pub allow_negative: Option<bool>,
    pub population_table: Option<PopulationTable>,
    pub p_a: Option<f64>,
    pub s0: Option<f64>,
    pub quota: Option<f64>,
    #[serde(default, deserialize_with = "inflation_method")]
    pub inflation_method: Option<InflationMethod>,
    pub p_va: Option<f64>,
    pub export_fraction: Option<f64>,
    pub lag: Option<u32>,
}

fn inflation_method<'de, D: serde::Deserializer<'de>>(d: D) -> Result<Option<InflationMethod>, D::Error> {
    let s: Option<String> = Option::deserialize(d)?;
    s.map(|s| s.parse().map_err(serde::de::Error::custom)).transpose()
}

impl RunConfig {
    /// Load a run configuration. A bare model document (with `Y0`) or world
    /// document (with `economies`) is accepted as well.
    pub fn load(path: Option<&Path>) -> Result<Self> {
        let Some(path) = path else {
            return Ok(RunConfig::default());
        };
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        let mut doc: serde_json::Value = serde_json::from_str(&text)
            .map_err(|e| macrofield::Error::Config(e.to_string()))
            .with_context(|| format!("parsing config {}", path.display()))?;
        if let Some(obj) = doc.as_object() {
            if obj.contains_key("economies") {
                doc = serde_json::json!({ "world": doc });
            } else if obj.contains_key("Y0") {
                doc = serde_json::json!({ "model": doc });
            }
        }
        serde_json::from_value(doc)
            .map_err(|e| macrofield::Error::Config(e.to_string()))
            .with_context(|| format!("config {}", path.display()))
    }
}
