//! JSON form of [`ModelParams`].
//!
//! A rate is a number, `{"table": {"1950": 0.01, ...}}` or
//! `{"exponential_prel": {"p_rel0": 1.0, "T_h": 80.0}}`.

use super::{ModelParams, RateFn};
use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RateRepr {
    Constant(f64),
    Table(TableRepr),
    ExponentialPrel(ExpRepr),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TableRepr {
    pub table: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExpRepr {
    pub exponential_prel: ExpParams,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExpParams {
    pub p_rel0: f64,
    #[serde(rename = "T_h")]
    pub t_h: f64,
}

impl RateRepr {
    pub fn to_rate(&self) -> Result<RateFn> {
        match self {
            RateRepr::Constant(v) => Ok(RateFn::Constant(*v)),
            RateRepr::Table(t) => {
                let mut map = BTreeMap::new();
                for (k, v) in &t.table {
                    let year: i32 = k.trim().parse().map_err(|_| {
                        Error::Config(format!("rate table key `{k}` is not a year"))
                    })?;
                    map.insert(year, *v);
                }
                RateFn::table(&map)
            }
            RateRepr::ExponentialPrel(e) => {
                RateFn::exponential_prel(e.exponential_prel.p_rel0, e.exponential_prel.t_h)
            }
        }
    }

    pub fn from_rate(rate: &RateFn) -> Self {
        match rate {
            RateFn::Constant(v) => RateRepr::Constant(*v),
            RateFn::Table { first_year, values } => RateRepr::Table(TableRepr {
                table: values
                    .iter()
                    .enumerate()
                    .map(|(i, v)| ((first_year + i as i32).to_string(), *v))
                    .collect(),
            }),
            RateFn::ExponentialPrel { p_rel0, t_h } => RateRepr::ExponentialPrel(ExpRepr {
                exponential_prel: ExpParams {
                    p_rel0: *p_rel0,
                    t_h: *t_h,
                },
            }),
        }
    }
}

/// Model configuration document. Keys follow the symbol names; unknown keys are rejected.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelConfig {
    #[serde(default)]
    pub p_v0: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub prel_fn: Option<RateRepr>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p_n: Option<RateRepr>,
    pub p_s: RateRepr,
    #[serde(rename = "p_B", default = "zero")]
    pub p_b: RateRepr,
    #[serde(rename = "p_P", default = "zero")]
    pub p_p: RateRepr,
    #[serde(default = "zero")]
    pub a0: RateRepr,
    #[serde(default = "zero")]
    pub b0: RateRepr,
    #[serde(rename = "Y0")]
    pub y0: f64,
    #[serde(rename = "K0")]
    pub k0: f64,
    pub t0: i32,
}

fn zero() -> RateRepr {
    RateRepr::Constant(0.0)
}

impl ModelConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn to_params(&self) -> Result<ModelParams> {
        if self.prel_fn.is_none() && self.p_n.is_none() {
            return Err(Error::Config(
                "either `prel_fn` or `p_n` must be given".into(),
            ));
        }
        let params = ModelParams {
            p_v0: self.p_v0,
            prel: match &self.prel_fn {
                Some(r) => r.to_rate()?,
                None => RateFn::Constant(0.5),
            },
            p_n: self.p_n.as_ref().map(RateRepr::to_rate).transpose()?,
            p_s: self.p_s.to_rate()?,
            p_b: self.p_b.to_rate()?,
            p_p: self.p_p.to_rate()?,
            a0: self.a0.to_rate()?,
            b0: self.b0.to_rate()?,
            y0: self.y0,
            k0: self.k0,
            t0: self.t0,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn from_params(p: &ModelParams) -> Self {
        ModelConfig {
            p_v0: p.p_v0,
            prel_fn: if p.p_n.is_some() {
                None
            } else {
                Some(RateRepr::from_rate(&p.prel))
            },
            p_n: p.p_n.as_ref().map(RateRepr::from_rate),
            p_s: RateRepr::from_rate(&p.p_s),
            p_b: RateRepr::from_rate(&p.p_b),
            p_p: RateRepr::from_rate(&p.p_p),
            a0: RateRepr::from_rate(&p.a0),
            b0: RateRepr::from_rate(&p.b0),
            y0: p.y0,
            k0: p.k0,
            t0: p.t0,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const FRG: &str = r#"{
        "p_v0": 0.055,
        "prel_fn": {"exponential_prel": {"p_rel0": 1.0, "T_h": 80.0}},
        "p_s": 0.1,
        "Y0": 52.582, "K0": 19.966, "t0": 1950
    }"#;

    #[test]
    fn frg_config_matches_default() {
        let cfg = ModelConfig::from_json(FRG).unwrap();
        assert_eq!(cfg.to_params().unwrap(), ModelParams::frg_default());
    }

    #[test]
    fn unknown_key_rejected() {
        let text = FRG.replace("\"p_s\"", "\"p_x\": 1, \"p_s\"");
        assert!(matches!(ModelConfig::from_json(&text), Err(Error::Config(_))));
        let text = FRG.replace("\"T_h\": 80.0", "\"T_h\": 80.0, \"x\": 1");
        assert!(ModelConfig::from_json(&text).is_err());
    }

    #[test]
    fn table_rates() {
        let text = FRG.replace(
            "\"p_s\": 0.1",
            "\"p_s\": {\"table\": {\"1950\": 0.04, \"1951\": 0.05}}",
        );
        let p = ModelConfig::from_json(&text).unwrap().to_params().unwrap();
        assert_eq!(p.p_s.at(1950, 0.5), 0.04);
        assert_eq!(p.p_s.at(1950, 5.0), 0.05);
        let gap = FRG.replace(
            "\"p_s\": 0.1",
            "\"p_s\": {\"table\": {\"1950\": 0.04, \"1952\": 0.05}}",
        );
        assert!(ModelConfig::from_json(&gap).unwrap().to_params().is_err());
    }

    #[test]
    fn round_trip_through_json() {
        let mut p = ModelParams::frg_default();
        p.p_b = RateFn::Table {
            first_year: 1950,
            values: vec![0.01, 0.02],
        };
        let text = serde_json::to_string(&ModelConfig::from_params(&p)).unwrap();
        let back = ModelConfig::from_json(&text).unwrap().to_params().unwrap();
        assert_eq!(back, p);
    }

    #[test]
    fn missing_net_rate_source() {
        let text = r#"{"p_s": 0.1, "Y0": 1, "K0": 1, "t0": 0}"#;
        assert!(ModelConfig::from_json(text).unwrap().to_params().is_err());
    }
}
