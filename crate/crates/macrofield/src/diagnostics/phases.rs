use crate::dataset::{find_crossing, Direction, EconSeries};
use serde::Serialize;

/// Default state-debt to loans quota.
pub const DEFAULT_STATES_QUOTA: f64 = 0.5;

/// Sustainability phase, ordered by the furthest threshold reached.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum Phase {
    /// GDP exceeds capital.
    I,
    /// Capital exceeds GDP.
    II,
    /// Loans exceed GDP.
    III,
    /// Lending share at or below one half.
    IV,
    /// State debt exceeds GDP.
    V,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhaseRow {
    pub year: i32,
    pub phase: Phase,
    pub k_y: f64,
    pub l_y: f64,
    pub p_rel: f64,
    pub debt_y: f64,
    pub debt_l: f64,
    /// K/Y at or above 3.
    pub capital_overhang: bool,
    /// State debt over loans at or above the quota.
    pub above_quota: bool,
}

/// First year each threshold is crossed; thresholds are detected independently.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Crossings {
    pub k_y_1: Option<i32>,
    pub l_y_1: Option<i32>,
    pub p_rel_half: Option<i32>,
    pub k_y_3: Option<i32>,
    pub debt_y_1: Option<i32>,
    pub debt_l_quota: Option<i32>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PhaseReport {
    pub quota: f64,
    pub crossings: Crossings,
    pub rows: Vec<PhaseRow>,
}

pub fn phase_classify(series: &EconSeries, quota: f64) -> PhaseReport {
    let rows: Vec<PhaseRow> = series
        .records
        .iter()
        .map(|r| {
            let k_y = r.assets / r.gdp;
            let l_y = r.loans / r.gdp;
            let p_rel = r.loans / r.assets;
            let debt_y = r.state_debt / r.gdp;
            let debt_l = r.state_debt / r.loans;
            let phase = if debt_y >= 1.0 {
                Phase::V
            } else if p_rel <= 0.5 {
                Phase::IV
            } else if l_y >= 1.0 {
                Phase::III
            } else if k_y >= 1.0 {
                Phase::II
            } else {
                Phase::I
            };
            PhaseRow {
                year: r.year,
                phase,
                k_y,
                l_y,
                p_rel,
                debt_y,
                debt_l,
                capital_overhang: k_y >= 3.0,
                above_quota: debt_l >= quota,
            }
        })
        .collect();
    let col = |f: fn(&PhaseRow) -> f64| -> Vec<(i32, f64)> {
        rows.iter().map(|r| (r.year, f(r))).collect()
    };
    let crossings = Crossings {
        k_y_1: find_crossing(&col(|r| r.k_y), 1.0, Direction::Up),
        l_y_1: find_crossing(&col(|r| r.l_y), 1.0, Direction::Up),
        p_rel_half: find_crossing(&col(|r| r.p_rel), 0.5, Direction::Down),
        k_y_3: find_crossing(&col(|r| r.k_y), 3.0, Direction::Up),
        debt_y_1: find_crossing(&col(|r| r.debt_y), 1.0, Direction::Up),
        debt_l_quota: find_crossing(&col(|r| r.debt_l), quota, Direction::Up),
    };
    PhaseReport {
        quota,
        crossings,
        rows,
    }
}
