use super::AnnualState;
use crate::dataset::{DebtRatio, EconSeries};

/// Modelled state debt: `S(T) = S0 + Σ_{τ = T0+1..T} p_s(τ) Y(τ) (1 + p_A)^(τ - T0)`,
/// with `S(T0) = S0`.
pub fn debt_path(states: &[AnnualState], p_a: f64, s0: f64) -> Vec<(i32, f64)> {
    let Some(first) = states.first() else {
        return Vec::new();
    };
    let t0 = first.year;
    let mut total = s0;
    states
        .iter()
        .enumerate()
        .map(|(i, s)| {
            if i > 0 {
                total += s.p_s * s.y * (1.0 + p_a).powi(s.year - t0);
            }
            (s.year, total)
        })
        .collect()
}

/// State debt relative to GDP while K/Y < 1 and relative to capital afterwards.
pub fn debt_ratio(series: &EconSeries) -> Vec<(i32, DebtRatio)> {
    series
        .records
        .iter()
        .map(|r| (r.year, DebtRatio::new(r.state_debt, r.gdp, r.assets)))
        .collect()
}
