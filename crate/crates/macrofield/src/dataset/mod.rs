//! Annual national series: ingestion, the bundled FRG table and the ratio indicators.

mod indicators;
mod parse;

pub use indicators::{
    derive_indicators, derive_p_n, find_crossing, DebtBase, DebtRatio, DerivedRow, DerivedSeries,
    Direction, Marginal, PnEstimator,
};
pub use parse::{parse_series, serialize_series, Column, ParseOptions};

use serde::Serialize;

/// Raw text of the bundled 1950–2012 FRG table (tab separated, decimal comma, CPI in percent).
pub const FRG_TABLE: &str = include_str!("../../data/frg.tsv");

/// One year of national data. Monetary values are billions of currency, rates are fractions per year.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EconRecord {
    pub year: i32,
    /// Total financial capital stock K.
    pub assets: f64,
    /// Lending to domestic non-banks L.
    pub loans: f64,
    /// GDP Y (flow per year).
    pub gdp: f64,
    pub state_debt: f64,
    pub savings_rate: f64,
    /// Population in thousands.
    pub population: f64,
    /// Official consumer price inflation as a fraction.
    pub cpi: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EconSeries {
    pub country: String,
    pub currency_unit: String,
    pub records: Vec<EconRecord>,
}

impl EconSeries {
    pub fn first_year(&self) -> i32 {
        self.records[0].year
    }

    pub fn last_year(&self) -> i32 {
        self.records[self.records.len() - 1].year
    }

    pub fn get(&self, year: i32) -> Option<&EconRecord> {
        let idx = year.checked_sub(self.first_year())?;
        self.records.get(usize::try_from(idx).ok()?)
    }

    /// Restrict to the inclusive year window; `None` bounds leave that side open.
    pub fn window(&self, from: Option<i32>, to: Option<i32>) -> crate::Result<EconSeries> {
        let records: Vec<EconRecord> = self
            .records
            .iter()
            .filter(|r| from.is_none_or(|f| r.year >= f) && to.is_none_or(|t| r.year <= t))
            .copied()
            .collect();
        if records.is_empty() {
            return Err(crate::Error::Empty);
        }
        Ok(EconSeries {
            country: self.country.clone(),
            currency_unit: self.currency_unit.clone(),
            records,
        })
    }

    /// Population growth rate per year, forward differenced; the last year repeats the previous rate.
    pub fn population_growth(&self) -> Vec<(i32, f64)> {
        let n = self.records.len();
        let mut out = Vec::with_capacity(n);
        for (i, r) in self.records.iter().enumerate() {
            let rate = if i + 1 < n {
                (self.records[i + 1].population - r.population) / r.population
            } else if n >= 2 {
                out.last().map_or(0.0, |&(_, v)| v)
            } else {
                0.0
            };
            out.push((r.year, rate));
        }
        out
    }
}

/// The bundled FRG series.
pub fn frg_dataset() -> EconSeries {
    let opts = ParseOptions {
        decimal_comma: true,
        percent_columns: vec![Column::Cpi],
        country: "FRG".into(),
        currency_unit: "bn EUR".into(),
    };
    parse_series(FRG_TABLE, &opts).expect("bundled table is valid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use sha2::{Digest, Sha256};

    #[test]
    fn bundled_table_checksum() {
        let digest = Sha256::digest(FRG_TABLE.as_bytes());
        let hex: String = digest.iter().map(|b| format!("{b:02x}")).collect();
        assert_eq!(
            hex,
            "cbfb19781ed99b87e85470366fc7f681bab7c0d5b9e988561390df1e99fddbb5"
        );
    }

    #[test]
    fn frg_first_and_last_rows() {
        let s = frg_dataset();
        assert_eq!(s.records.len(), 63);
        assert_eq!(
            s.records[0],
            EconRecord {
                year: 1950,
                assets: 19.966,
                loans: 14.418,
                gdp: 52.582,
                state_debt: 10.530,
                savings_rate: 0.042,
                population: 50958.0,
                cpi: -0.064,
            }
        );
        let last = s.records.last().unwrap();
        assert_eq!(last.year, 2012);
        assert_eq!(last.assets, 8314.596);
        assert_eq!(last.loans, 3220.356);
        assert_eq!(last.gdp, 2645.0);
        assert_eq!(last.state_debt, 2067.0);
        assert_eq!(last.savings_rate, 0.103);
        assert_eq!(last.population, 82000.0);
        assert_eq!(last.cpi, 0.02);
    }

    #[test]
    fn get_and_window() {
        let s = frg_dataset();
        assert_eq!(s.get(1990).unwrap().gdp, 1304.656);
        assert!(s.get(1949).is_none());
        assert!(s.get(2013).is_none());
        let w = s.window(Some(1960), Some(1969)).unwrap();
        assert_eq!(w.records.len(), 10);
        assert_eq!(w.first_year(), 1960);
        assert_eq!(s.window(Some(2050), None), Err(crate::Error::Empty));
    }

    #[test]
    fn population_growth_shows_reunification_step() {
        let s = frg_dataset();
        let g = s.population_growth();
        let (_, r1990) = g.iter().find(|(y, _)| *y == 1990).copied().unwrap();
        assert!((r1990 - (80275.0 - 63726.0) / 63726.0).abs() < 1e-15);
        assert_eq!(g.last().unwrap().1, g[g.len() - 2].1);
    }
}
