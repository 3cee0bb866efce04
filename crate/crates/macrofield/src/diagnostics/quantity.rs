use super::AnnualState;
use crate::{Error, Result};
use serde::Serialize;

/// `((1 - p_s) Y + (1 + p_s) dK/dt) / Y`.
pub fn quantity_check(y: f64, dk_dt: f64, p_s: f64) -> f64 {
    ((1.0 - p_s) * y + (1.0 + p_s) * dk_dt) / y
}

/// Monetary velocity `c ((1 - p_s) Y + (1 + p_s) dK/dt) / K`.
pub fn velocity(y: f64, k: f64, dk_dt: f64, p_s: f64, c: f64) -> Result<f64> {
    if !(k > 0.0) {
        return Err(Error::Domain(format!("velocity needs K > 0, got {k}")));
    }
    Ok(c * ((1.0 - p_s) * y + (1.0 + p_s) * dk_dt) / k)
}

/// Velocity from KV = Y.
pub fn naive_velocity(y: f64, k: f64) -> f64 {
    y / k
}

/// Average price per purchase `K V / H`.
pub fn price_level(k: f64, v: f64, h: f64) -> Result<f64> {
    if !(h > 0.0) {
        return Err(Error::Domain(format!(
            "number of purchases H must be positive, got {h}"
        )));
    }
    Ok(k * v / h)
}

/// Billions of purchases per year at one purchase per person per day.
pub fn purchases_per_year(population_thousands: f64) -> f64 {
    population_thousands * 1e3 * 365.0 / 1e9
}

/// Both sides of K V = H P with V per year, H purchases per year and P currency per purchase.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QEState {
    pub k: f64,
    pub v: f64,
    pub h: f64,
    pub p: f64,
    pub y: f64,
}

impl QEState {
    /// State with P chosen so that both sides balance.
    pub fn balanced(k: f64, v: f64, h: f64, y: f64) -> Result<Self> {
        Ok(QEState { k, v, h, p: price_level(k, v, h)?, y })
    }

    /// `K V - H P`, currency per year.
    pub fn imbalance(&self) -> f64 {
        self.k * self.v - self.h * self.p
    }

    /// `K V - Y`, the gap to the classical reading KV = Y.
    pub fn gdp_gap(&self) -> f64 {
        self.k * self.v - self.y
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Flow {
    Balanced,
    /// Savings exceed the debt burden; capital may flow in.
    Inflow,
    /// The debt burden exceeds savings; capital must flow out.
    Outflow,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BalanceRow {
    pub year: i32,
    /// dK/dt.
    pub debt_burden: Option<f64>,
    /// p_s Y.
    pub savings: f64,
    /// (p_s + p_B) Y.
    pub compensation: Option<f64>,
    /// p_s Y - dK/dt.
    pub a0_required: Option<f64>,
    pub flow: Option<Flow>,
    /// dK/dt over p_s Y.
    pub burden_ratio: Option<f64>,
}

pub fn balance_report(states: &[AnnualState]) -> Vec<BalanceRow> {
    states
        .iter()
        .map(|s| {
            let savings = s.p_s * s.y;
            let a0 = s.dk.map(|dk| savings - dk);
            BalanceRow {
                year: s.year,
                debt_burden: s.dk,
                savings,
                compensation: s.p_b.map(|p_b| (s.p_s + p_b) * s.y),
                a0_required: a0,
                flow: a0.map(|a| {
                    if a.abs() <= 1e-12 * savings.abs().max(1.0) {
                        Flow::Balanced
                    } else if a > 0.0 {
                        Flow::Inflow
                    } else {
                        Flow::Outflow
                    }
                }),
                burden_ratio: s.dk.map(|dk| dk / savings),
            }
        })
        .collect()
}
