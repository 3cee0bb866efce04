//! Quantity-equation conformity, velocity and price level, inflation,
//! public debt, crisis phases and assorted closed-form estimators.
//!
//! Data-driven diagnostics work on [`AnnualState`] rows. From a data series
//! the rates are backward differences (the change during year t,
//! `K(t) - K(t-1)`); from a model trajectory they are the exact derivatives.

mod debt;
mod inflation;
mod misc;
mod phases;
mod quantity;

pub use debt::{debt_path, debt_ratio};
pub use inflation::{
    core_inflation, core_inflation_simplified, crisis_trade_volume, critical_year,
    house_number, inflation_series, price_derivative, price_derivative_coefficients,
    relative_price, structural_inflation, InflationMethod, InflationOptions, PriceDerivatives,
};
pub use misc::{
    interest_estimators, lotka_volterra_map, savings_identity, substitution_trajectory,
    systemic_importance, InterestEstimates, LotkaVolterra, SavingsIdentity, SubstitutionParams,
    SubstitutionState, DEFAULT_SUPPLY_DEMAND_C,
};
pub use phases::{phase_classify, Crossings, Phase, PhaseReport, PhaseRow, DEFAULT_STATES_QUOTA};
pub use quantity::{
    balance_report, naive_velocity, price_level, purchases_per_year, quantity_check, velocity,
    BalanceRow, Flow, QEState,
};

use crate::dataset::EconSeries;
use crate::model::Trajectory;
use serde::Serialize;

/// One year of state with its rates of change.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AnnualState {
    pub year: i32,
    pub y: f64,
    pub k: f64,
    /// dY/dt, absent for the first data year.
    pub dy: Option<f64>,
    /// dK/dt, absent for the first data year.
    pub dk: Option<f64>,
    pub p_s: f64,
    /// Population growth rate.
    pub p_b: Option<f64>,
    /// Population in thousands.
    pub population: Option<f64>,
    pub cpi: Option<f64>,
    pub loans: Option<f64>,
    pub state_debt: Option<f64>,
}

impl AnnualState {
    /// GDP growth rate p_w = (dY/dt)/Y.
    pub fn p_w(&self) -> Option<f64> {
        self.dy.map(|d| d / self.y)
    }

    /// Capital growth rate p_v = (dK/dt)/K.
    pub fn p_v(&self) -> Option<f64> {
        self.dk.map(|d| d / self.k)
    }
}

pub fn annual_from_series(series: &EconSeries) -> Vec<AnnualState> {
    let recs = &series.records;
    recs.iter()
        .enumerate()
        .map(|(i, r)| {
            let prev = i.checked_sub(1).map(|j| &recs[j]);
            AnnualState {
                year: r.year,
                y: r.gdp,
                k: r.assets,
                dy: prev.map(|p| r.gdp - p.gdp),
                dk: prev.map(|p| r.assets - p.assets),
                p_s: r.savings_rate,
                p_b: prev.map(|p| (r.population - p.population) / p.population),
                population: Some(r.population),
                cpi: Some(r.cpi),
                loans: Some(r.loans),
                state_debt: Some(r.state_debt),
            }
        })
        .collect()
}

/// Whole-year records of a model run.
pub fn annual_from_trajectory(trajectory: &Trajectory) -> Vec<AnnualState> {
    trajectory
        .points
        .iter()
        .filter(|p| p.t.fract() == 0.0)
        .map(|p| AnnualState {
            year: p.t as i32,
            y: p.y,
            k: p.k,
            dy: Some(p.dy_dt),
            dk: Some(p.dk_dt),
            p_s: p.p_s,
            p_b: Some(p.p_b),
            population: None,
            cpi: None,
            loans: None,
            state_debt: None,
        })
        .collect()
}
