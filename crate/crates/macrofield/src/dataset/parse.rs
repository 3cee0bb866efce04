use super::{EconRecord, EconSeries};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Column {
    Year,
    Assets,
    Loans,
    Gdp,
    StateDebt,
    SavingsRate,
    Population,
    Cpi,
}

impl Column {
    pub const ALL: [Column; 8] = [
        Column::Year,
        Column::Assets,
        Column::Loans,
        Column::Gdp,
        Column::StateDebt,
        Column::SavingsRate,
        Column::Population,
        Column::Cpi,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Column::Year => "year",
            Column::Assets => "assets",
            Column::Loans => "loans",
            Column::Gdp => "gdp",
            Column::StateDebt => "state_debt",
            Column::SavingsRate => "savings_rate",
            Column::Population => "population",
            Column::Cpi => "cpi",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParseOptions {
    /// Numbers use `,` as the decimal separator.
    pub decimal_comma: bool,
    /// Columns given in percent; divided by 100 on read.
    pub percent_columns: Vec<Column>,
    pub country: String,
    pub currency_unit: String,
}

impl Default for ParseOptions {
    fn default() -> Self {
        ParseOptions {
            decimal_comma: false,
            percent_columns: Vec::new(),
            country: String::new(),
            currency_unit: "bn".into(),
        }
    }
}

fn detect_delimiter(header: &str) -> u8 {
    if header.contains('\t') {
        b'\t'
    } else if header.contains(';') {
        b';'
    } else {
        b','
    }
}

/// Parse a delimited table with the eight named columns (extra columns are ignored).
///
/// The delimiter is taken from the header line: tab, then `;`, then `,`.
pub fn parse_series(text: &str, opts: &ParseOptions) -> Result<EconSeries> {
    let header_line = text.lines().find(|l| !l.trim().is_empty()).ok_or(Error::Empty)?;
    let delimiter = detect_delimiter(header_line);
    if opts.decimal_comma && delimiter == b',' {
        return Err(Error::InvalidParameter(
            "decimal comma needs a `;` or tab delimiter".into(),
        ));
    }
    let mut reader = csv::ReaderBuilder::new()
        .delimiter(delimiter)
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(text.as_bytes());

    let headers = reader
        .headers()
        .map_err(|e| Error::Validation { row: 1, msg: e.to_string() })?
        .clone();
    let mut index = [0usize; 8];
    for (slot, col) in index.iter_mut().zip(Column::ALL) {
        *slot = headers
            .iter()
            .position(|h| h.eq_ignore_ascii_case(col.name()))
            .ok_or_else(|| Error::MissingColumn(col.name().into()))?;
    }

    let mut records: Vec<EconRecord> = Vec::new();
    for result in reader.records() {
        let rec = result.map_err(|e| Error::Validation {
            row: e.position().map_or(0, |p| p.line() as usize),
            msg: e.to_string(),
        })?;
        let row = rec.position().map_or(0, |p| p.line() as usize);
        if rec.iter().all(|f| f.is_empty()) {
            continue;
        }
        let mut vals = [0.0f64; 8];
        for ((v, &i), col) in vals.iter_mut().zip(&index).zip(Column::ALL) {
            let raw = rec.get(i).unwrap_or("");
            let parse_err = || Error::Parse {
                row,
                column: col.name().into(),
                value: raw.into(),
            };
            let cleaned = if opts.decimal_comma {
                raw.replace(',', ".")
            } else {
                raw.to_string()
            };
            let x: f64 = cleaned.parse().map_err(|_| parse_err())?;
            if !x.is_finite() {
                return Err(parse_err());
            }
            *v = if opts.percent_columns.contains(&col) {
                x / 100.0
            } else {
                x
            };
        }
        if vals[0].fract() != 0.0 {
            return Err(Error::Parse {
                row,
                column: "year".into(),
                value: rec.get(index[0]).unwrap_or("").into(),
            });
        }
        let r = EconRecord {
            year: vals[0] as i32,
            assets: vals[1],
            loans: vals[2],
            gdp: vals[3],
            state_debt: vals[4],
            savings_rate: vals[5],
            population: vals[6],
            cpi: vals[7],
        };
        validate(&r, row)?;
        if let Some(prev) = records.last() {
            if r.year != prev.year + 1 {
                return Err(Error::YearGap {
                    prev: prev.year,
                    next: r.year,
                });
            }
        }
        records.push(r);
    }
    if records.is_empty() {
        return Err(Error::Empty);
    }
    Ok(EconSeries {
        country: opts.country.clone(),
        currency_unit: opts.currency_unit.clone(),
        records,
    })
}

fn validate(r: &EconRecord, row: usize) -> Result<()> {
    let fail = |msg: String| Err(Error::Validation { row, msg });
    if r.assets <= 0.0 {
        return fail(format!("assets must be positive, got {}", r.assets));
    }
    if r.gdp <= 0.0 {
        return fail(format!("gdp must be positive, got {}", r.gdp));
    }
    if r.loans < 0.0 || r.loans > r.assets {
        return fail(format!(
            "loans must lie in [0, assets] since banks' own business K - L cannot be negative (loans {}, assets {})",
            r.loans, r.assets
        ));
    }
    if !(r.savings_rate > 0.0 && r.savings_rate < 1.0) {
        return fail(format!(
            "savings_rate must lie in (0, 1), got {}",
            r.savings_rate
        ));
    }
    Ok(())
}

/// Comma-separated, point decimals, CPI as a fraction. Values use the shortest
/// representation that reads back to the same bits.
pub fn serialize_series(series: &EconSeries) -> String {
    let mut out = String::new();
    let names: Vec<&str> = Column::ALL.iter().map(|c| c.name()).collect();
    out.push_str(&names.join(","));
    out.push('\n');
    for r in &series.records {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            r.year, r.assets, r.loans, r.gdp, r.state_debt, r.savings_rate, r.population, r.cpi
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::frg_dataset;

    const HEADER: &str = "year;assets;loans;gdp;state_debt;savings_rate;population;cpi\n";

    fn german() -> ParseOptions {
        ParseOptions {
            decimal_comma: true,
            percent_columns: vec![Column::Cpi],
            ..Default::default()
        }
    }

    #[test]
    fn german_row() {
        let text = format!("{HEADER}1950;19,966;14,418;52,582;10,530;0,042;50958;-6,4\n");
        let s = parse_series(&text, &german()).unwrap();
        let r = s.records[0];
        assert_eq!(r.year, 1950);
        assert_eq!(r.assets, 19.966);
        assert_eq!(r.loans, 14.418);
        assert_eq!(r.gdp, 52.582);
        assert_eq!(r.state_debt, 10.530);
        assert_eq!(r.savings_rate, 0.042);
        assert_eq!(r.population, 50958.0);
        assert_eq!(r.cpi, -0.064);
    }

    #[test]
    fn comma_delimited_point_decimals() {
        let text = "year,assets,loans,gdp,state_debt,savings_rate,population,cpi\n\
                    2000,10,4,20,3,0.1,1000,0.02\n2001,11,4.5,21,3.1,0.1,1001,0.015\n";
        let s = parse_series(text, &ParseOptions::default()).unwrap();
        assert_eq!(s.records.len(), 2);
        assert_eq!(s.records[1].cpi, 0.015);
    }

    #[test]
    fn column_order_and_case_are_free() {
        let text = "CPI;Year;GDP;Assets;Loans;State_Debt;Savings_Rate;Population;note\n\
                    1,5;1999;20;10;4;3;0,1;1000;x\n";
        let s = parse_series(text, &german()).unwrap();
        assert_eq!(s.records[0].year, 1999);
        assert_eq!(s.records[0].cpi, 0.015);
        assert_eq!(s.records[0].gdp, 20.0);
    }

    #[test]
    fn empty_stream() {
        assert_eq!(parse_series("", &german()), Err(Error::Empty));
        assert_eq!(parse_series(HEADER, &german()), Err(Error::Empty));
    }

    #[test]
    fn missing_column_is_named() {
        let text = "year;assets;loans;gdp;state_debt;savings_rate;cpi\n1950;1;0,5;2;0;0,1;1\n";
        assert_eq!(
            parse_series(text, &german()),
            Err(Error::MissingColumn("population".into()))
        );
    }

    #[test]
    fn loans_above_assets_rejected_with_row() {
        let text = format!("{HEADER}1950;10;12;50;1;0,1;100;1\n");
        match parse_series(&text, &german()) {
            Err(Error::Validation { row, msg }) => {
                assert_eq!(row, 2);
                assert!(msg.contains("loans"), "{msg}");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn invariant_breaches() {
        for row in [
            "1950;0;0;50;1;0,1;100;1",
            "1950;10;5;0;1;0,1;100;1",
            "1950;10;5;50;1;1;100;1",
            "1950;10;5;50;1;0;100;1",
            "1950;10;-1;50;1;0,1;100;1",
        ] {
            let text = format!("{HEADER}{row}\n");
            assert!(
                matches!(parse_series(&text, &german()), Err(Error::Validation { .. })),
                "{row}"
            );
        }
    }

    #[test]
    fn gap_reports_years() {
        let text = format!("{HEADER}1950;10;5;50;1;0,1;100;1\n1952;10;5;50;1;0,1;100;1\n");
        assert_eq!(
            parse_series(&text, &german()),
            Err(Error::YearGap {
                prev: 1950,
                next: 1952
            })
        );
    }

    #[test]
    fn bad_number_names_cell() {
        let text = format!("{HEADER}1950;10;5;abc;1;0,1;100;1\n");
        match parse_series(&text, &german()) {
            Err(Error::Parse { row, column, value }) => {
                assert_eq!((row, column.as_str(), value.as_str()), (2, "gdp", "abc"));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn decimal_comma_with_comma_delimiter_rejected() {
        let text = "year,assets,loans,gdp,state_debt,savings_rate,population,cpi\n";
        assert!(matches!(
            parse_series(text, &german()),
            Err(Error::InvalidParameter(_))
        ));
    }

    #[test]
    fn frg_round_trip_is_bit_exact() {
        let s = frg_dataset();
        let text = serialize_series(&s);
        let opts = ParseOptions {
            country: s.country.clone(),
            currency_unit: s.currency_unit.clone(),
            ..Default::default()
        };
        let back = parse_series(&text, &opts).unwrap();
        assert_eq!(back.records.len(), s.records.len());
        for (a, b) in s.records.iter().zip(&back.records) {
            assert_eq!(a.year, b.year);
            for (x, y) in [
                (a.assets, b.assets),
                (a.loans, b.loans),
                (a.gdp, b.gdp),
                (a.state_debt, b.state_debt),
                (a.savings_rate, b.savings_rate),
                (a.population, b.population),
                (a.cpi, b.cpi),
            ] {
                assert_eq!(x.to_bits(), y.to_bits());
            }
        }
        assert_eq!(back, s);
    }
}
