//! The two-equation GDP/capital system and its numerical integration.
//!
//! ```text
//! dY/dt = b0 + (p_B + p_P) Y - p_n K
//! dK/dt = a0 + p_s Y + p_n K
//! ```
//!
//! with the net business rate `p_n = p_v0 (1 - 2 p_rel(t))`.

mod config;
mod integrate;

pub use config::{ModelConfig, RateRepr};
pub use integrate::{integrate, Integration, StopReason, Trajectory, TrajectoryPoint};

use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    #[default]
    Rk4,
    Euler,
}

impl std::str::FromStr for Method {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "rk4" => Ok(Method::Rk4),
            "euler" => Ok(Method::Euler),
            _ => Err(Error::InvalidParameter(format!(
                "unknown method `{s}` (expected rk4 or euler)"
            ))),
        }
    }
}

/// A rate (or flow) as a function of time.
#[derive(Debug, Clone, PartialEq)]
pub enum RateFn {
    Constant(f64),
    /// Calendar-year values from `first_year` on, constant within each year,
    /// held flat outside the table.
    Table { first_year: i32, values: Vec<f64> },
    /// Lending share decaying as `p_rel0 * exp(-t / t_h)`, t in years since the start.
    ExponentialPrel { p_rel0: f64, t_h: f64 },
}

impl Default for RateFn {
    fn default() -> Self {
        RateFn::Constant(0.0)
    }
}

impl RateFn {
    pub fn table(values: &BTreeMap<i32, f64>) -> Result<Self> {
        let (&first_year, _) = values
            .iter()
            .next()
            .ok_or_else(|| Error::InvalidParameter("rate table is empty".into()))?;
        for (i, (&year, v)) in values.iter().enumerate() {
            if year != first_year + i as i32 {
                return Err(Error::InvalidParameter(format!(
                    "rate table years must be contiguous, {} is missing",
                    first_year + i as i32
                )));
            }
            if !v.is_finite() {
                return Err(Error::InvalidParameter(format!(
                    "rate table value for {year} is not finite"
                )));
            }
        }
        Ok(RateFn::Table {
            first_year,
            values: values.values().copied().collect(),
        })
    }

    pub fn exponential_prel(p_rel0: f64, t_h: f64) -> Result<Self> {
        if !(p_rel0 > 0.0 && p_rel0 <= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "p_rel0 must lie in (0, 1], got {p_rel0}"
            )));
        }
        if !(t_h > 0.0 && t_h.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "T_h must be positive, got {t_h}"
            )));
        }
        Ok(RateFn::ExponentialPrel { p_rel0, t_h })
    }

    /// Value at `t` years after the start year `t0`.
    pub fn at(&self, t0: i32, t: f64) -> f64 {
        match self {
            RateFn::Constant(v) => *v,
            RateFn::Table { first_year, values } => {
                let year = (t0 as f64 + t).floor() - *first_year as f64;
                let idx = year.clamp(0.0, (values.len() - 1) as f64) as usize;
                values[idx]
            }
            RateFn::ExponentialPrel { p_rel0, t_h } => p_rel0 * (-t / t_h).exp(),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, RateFn::Constant(v) if *v == 0.0)
    }

    /// The same function multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> RateFn {
        match self {
            RateFn::Constant(v) => RateFn::Constant(v * factor),
            RateFn::Table { first_year, values } => RateFn::Table {
                first_year: *first_year,
                values: values.iter().map(|v| v * factor).collect(),
            },
            RateFn::ExponentialPrel { p_rel0, t_h } => RateFn::ExponentialPrel {
                p_rel0: p_rel0 * factor,
                t_h: *t_h,
            },
        }
    }
}

/// Parameters of one economy. Rates are per year, flows and stocks in billions.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelParams {
    /// Average interest rate over all assets.
    pub p_v0: f64,
    /// Lending share L/K over time.
    pub prel: RateFn,
    /// Net business rate given directly; replaces `p_v0 (1 - 2 p_rel)` when set.
    pub p_n: Option<RateFn>,
    pub p_s: RateFn,
    /// Population growth rate.
    pub p_b: RateFn,
    /// Effective productivity growth rate.
    pub p_p: RateFn,
    /// External capital inflow.
    pub a0: RateFn,
    /// External GDP inflow.
    pub b0: RateFn,
    pub y0: f64,
    pub k0: f64,
    pub t0: i32,
}

impl ModelParams {
    /// Constant rates and no external flows.
    pub fn constant(p_n: f64, p_s: f64, y0: f64, k0: f64) -> Self {
        ModelParams {
            p_v0: 0.0,
            prel: RateFn::Constant(0.5),
            p_n: Some(RateFn::Constant(p_n)),
            p_s: RateFn::Constant(p_s),
            p_b: RateFn::default(),
            p_p: RateFn::default(),
            a0: RateFn::default(),
            b0: RateFn::default(),
            y0,
            k0,
            t0: 0,
        }
    }

    /// The FRG configuration started in 1950: p_s = 0.1, p_v0 = 0.055,
    /// exponential lending share with p_rel0 = 1 and T_h = 80.
    pub fn frg_default() -> Self {
        ModelParams {
            p_v0: 0.055,
            prel: RateFn::ExponentialPrel {
                p_rel0: 1.0,
                t_h: 80.0,
            },
            p_n: None,
            p_s: RateFn::Constant(0.1),
            p_b: RateFn::default(),
            p_p: RateFn::default(),
            a0: RateFn::default(),
            b0: RateFn::default(),
            y0: 52.582,
            k0: 19.966,
            t0: 1950,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.p_v0 >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "p_v0 must be non-negative, got {}",
                self.p_v0
            )));
        }
        if !(self.y0 > 0.0) || !(self.k0 > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "initial state must be positive, got Y0 = {}, K0 = {}",
                self.y0, self.k0
            )));
        }
        Ok(())
    }

    /// Same rates with initial state and external flows multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        ModelParams {
            y0: self.y0 * factor,
            k0: self.k0 * factor,
            a0: self.a0.scaled(factor),
            b0: self.b0.scaled(factor),
            ..self.clone()
        }
    }
}

/// Rates in force at one instant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rates {
    pub p_n: f64,
    pub p_s: f64,
    pub p_b: f64,
    pub p_p: f64,
    pub a0: f64,
    pub b0: f64,
}

impl Rates {
    pub fn at(params: &ModelParams, t: f64) -> Self {
        Rates {
            p_n: net_business_rate(params, t),
            p_s: params.p_s.at(params.t0, t),
            p_b: params.p_b.at(params.t0, t),
            p_p: params.p_p.at(params.t0, t),
            a0: params.a0.at(params.t0, t),
            b0: params.b0.at(params.t0, t),
        }
    }

    pub fn derivatives(&self, y: f64, k: f64) -> (f64, f64) {
        let dy = self.b0 + (self.p_b + self.p_p) * y - self.p_n * k;
        let dk = self.a0 + self.p_s * y + self.p_n * k;
        (dy, dk)
    }
}

/// Net business rate at `t` years after the start.
pub fn net_business_rate(params: &ModelParams, t: f64) -> f64 {
    match &params.p_n {
        Some(p_n) => p_n.at(params.t0, t),
        None => params.p_v0 * (1.0 - 2.0 * params.prel.at(params.t0, t)),
    }
}

/// Time derivatives (dY/dt, dK/dt) at `t` years after the start.
pub fn rhs(params: &ModelParams, t: f64, y: f64, k: f64) -> (f64, f64) {
    Rates::at(params, t).derivatives(y, k)
}
