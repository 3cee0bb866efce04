use super::EconSeries;
use crate::EPS_DIV;
use serde::Serialize;

/// A difference quotient that may blow up when its denominator vanishes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Marginal {
    Finite(f64),
    Unbounded,
}

impl Marginal {
    fn quotient(num: f64, den: f64) -> Self {
        if den.abs() < EPS_DIV {
            Marginal::Unbounded
        } else {
            Marginal::Finite(num / den)
        }
    }

    pub fn finite(self) -> Option<f64> {
        match self {
            Marginal::Finite(v) => Some(v),
            Marginal::Unbounded => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DebtBase {
    Gdp,
    Capital,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DebtRatio {
    pub ratio: f64,
    pub base: DebtBase,
}

impl DebtRatio {
    /// State debt over GDP while K/Y < 1, over capital from K/Y = 1 on.
    pub fn new(state_debt: f64, gdp: f64, assets: f64) -> Self {
        if assets / gdp < 1.0 {
            DebtRatio {
                ratio: state_debt / gdp,
                base: DebtBase::Gdp,
            }
        } else {
            DebtRatio {
                ratio: state_debt / assets,
                base: DebtBase::Capital,
            }
        }
    }
}

/// Indicators for one year. Marginal and rate columns use the forward
/// difference to the next year and are `None` in the last year.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DerivedRow {
    pub year: i32,
    /// Total capital coefficient K/Y.
    pub k_t: f64,
    /// Inverse coefficient Y/K.
    pub y_t: f64,
    /// Loans coefficient L/Y.
    pub k_c: f64,
    /// Banks' own business K - L.
    pub m_m: f64,
    /// (K - L)/Y.
    pub k_m: f64,
    /// Marginal ΔY/ΔK.
    pub k_i: Option<Marginal>,
    /// Marginal ΔK/ΔY.
    pub y_i: Option<Marginal>,
    /// Lending share L/K.
    pub p_rel: f64,
    /// Capital growth rate ΔK/K, used as the average asset rate.
    pub p_v: Option<f64>,
    pub p_n_via_p_rel: Option<f64>,
    pub p_n_residual: Option<f64>,
    pub debt_ratio: DebtRatio,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DerivedSeries {
    pub rows: Vec<DerivedRow>,
}

impl DerivedSeries {
    pub fn get(&self, year: i32) -> Option<&DerivedRow> {
        self.rows.iter().find(|r| r.year == year)
    }

    /// Pairs (year, value) for a column accessor, skipping absent cells.
    pub fn column(&self, f: impl Fn(&DerivedRow) -> Option<f64>) -> Vec<(i32, f64)> {
        self.rows
            .iter()
            .filter_map(|r| f(r).map(|v| (r.year, v)))
            .collect()
    }
}

pub fn derive_indicators(series: &EconSeries) -> DerivedSeries {
    let recs = &series.records;
    let via = derive_p_n(series, PnEstimator::ViaPRel);
    let resid = derive_p_n(series, PnEstimator::CapitalResidual);
    let rows = recs
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let next = recs.get(i + 1);
            let dk = next.map(|n| n.assets - r.assets);
            let dy = next.map(|n| n.gdp - r.gdp);
            let m_m = r.assets - r.loans;
            DerivedRow {
                year: r.year,
                k_t: r.assets / r.gdp,
                y_t: r.gdp / r.assets,
                k_c: r.loans / r.gdp,
                m_m,
                k_m: m_m / r.gdp,
                k_i: dy.zip(dk).map(|(dy, dk)| Marginal::quotient(dy, dk)),
                y_i: dy.zip(dk).map(|(dy, dk)| Marginal::quotient(dk, dy)),
                p_rel: r.loans / r.assets,
                p_v: dk.map(|dk| dk / r.assets),
                p_n_via_p_rel: via[i].1,
                p_n_residual: resid[i].1,
                debt_ratio: DebtRatio::new(r.state_debt, r.gdp, r.assets),
            }
        })
        .collect();
    DerivedSeries { rows }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PnEstimator {
    /// p_v (1 - 2 p_rel) with p_v = ΔK/K.
    ViaPRel,
    /// (ΔK - p_s Y)/K, the capital equation solved for p_n with no external inflow.
    CapitalResidual,
}

/// Data estimate of the net business rate; absent in the last year.
pub fn derive_p_n(series: &EconSeries, estimator: PnEstimator) -> Vec<(i32, Option<f64>)> {
    let recs = &series.records;
    recs.iter()
        .enumerate()
        .map(|(i, r)| {
            let v = recs.get(i + 1).map(|n| {
                let dk = n.assets - r.assets;
                match estimator {
                    PnEstimator::ViaPRel => {
                        let p_v = dk / r.assets;
                        let p_rel = r.loans / r.assets;
                        p_v * (1.0 - 2.0 * p_rel)
                    }
                    PnEstimator::CapitalResidual => (dk - r.savings_rate * r.gdp) / r.assets,
                }
            });
            (r.year, v)
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Up,
    Down,
}

/// First year whose value reaches the threshold from strictly the other side.
pub fn find_crossing(values: &[(i32, f64)], threshold: f64, direction: Direction) -> Option<i32> {
    values.windows(2).find_map(|w| {
        let (prev, (year, cur)) = (w[0].1, w[1]);
        let crossed = match direction {
            Direction::Up => prev < threshold && cur >= threshold,
            Direction::Down => prev > threshold && cur <= threshold,
        };
        crossed.then_some(year)
    })
}
