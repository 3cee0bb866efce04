use crate::args::{DataArgs, RunArgs};
use crate::commands::{
    by_year, debt_table, integration, model_params, population_rate, DEFAULT_P_A, DEFAULT_S0,
    SCENARIO_HORIZON,
};
use crate::config::RunConfig;
use crate::data;
use crate::output::{num, opt, Table};
use anyhow::{bail, Result};
use macrofield::dataset::{derive_indicators, EconSeries, Marginal};
use macrofield::diagnostics::{
    annual_from_series, inflation_series, phase_classify, InflationMethod, InflationOptions,
    DEFAULT_STATES_QUOTA,
};
use macrofield::model::integrate;
use macrofield::multiworld::capital_export_experiment;
use serde_json::Value;

pub const FIGURES: &[&str] = &[
    "fig1", "fig2", "fig3", "fig5", "fig6", "fig7", "fig13", "fig15", "fig23", "fig24", "fig27",
    "fig28", "fig29",
];

/// Model run end for figures that extend past the data.
const PROJECTION_END: i32 = 2035;

pub fn figure(id: &str, data_args: &DataArgs, run: &RunArgs, cfg: &RunConfig) -> Result<Table> {
    if !FIGURES.contains(&id) {
        return Err(macrofield::Error::InvalidParameter(format!(
            "unknown figure `{id}`; known figures: {}",
            FIGURES.join(", ")
        ))
        .into());
    }
    let series = data::load(data_args, cfg)?;
    Ok(match id {
        "fig1" => per_year(&series, &["gdp", "assets", "loans"], |r| {
            vec![num(r.gdp), num(r.assets), num(r.loans)]
        }),
        "fig2" => {
            let d = derive_indicators(&series);
            let mut t = Table::new(&["year", "k_t", "k_c", "p_rel"]);
            for r in &d.rows {
                t.push(vec![r.year.into(), num(r.k_t), num(r.k_c), num(r.p_rel)]);
            }
            t
        }
        "fig3" => {
            let d = derive_indicators(&series);
            let mut t = Table::new(&["year", "k_i"]);
            for r in &d.rows {
                let k_i = match r.k_i {
                    Some(Marginal::Finite(v)) => num(v),
                    _ => Value::Null,
                };
                t.push(vec![r.year.into(), k_i]);
            }
            t
        }
        "fig5" => {
            let params = model_params(cfg)?;
            let horizon = (PROJECTION_END - params.t0) as f64;
            let model = by_year(&integrate(&params, &integration(run, cfg, horizon))?);
            let mut t = Table::new(&["year", "y_data", "k_data", "y_model", "k_model"]);
            for (year, (y, k)) in &model {
                let rec = series.get(*year);
                t.push(vec![
                    (*year).into(),
                    opt(rec.map(|r| r.gdp)),
                    opt(rec.map(|r| r.assets)),
                    num(*y),
                    num(*k),
                ]);
            }
            t
        }
        "fig6" => {
            let params = model_params(cfg)?;
            let span = (series.last_year() - params.t0) as f64;
            let integ = integration(run, cfg, span.max(1.0));
            let base = by_year(&integrate(&params, &integ)?);
            let mut with_pop = params.clone();
            with_pop.p_b = population_rate(&series)?;
            let pop = by_year(&integrate(&with_pop, &integ)?);
            let mut t = Table::new(&["year", "y_data", "y_model", "y_model_population"]);
            for r in &series.records {
                let (Some(b), Some(p)) = (base.get(&r.year), pop.get(&r.year)) else { continue };
                t.push(vec![r.year.into(), num(r.gdp), num(b.0), num(p.0)]);
            }
            t
        }
        "fig7" => {
            let params = model_params(cfg)?;
            let span = (series.last_year() - params.t0) as f64;
            let model = by_year(&integrate(&params, &integration(run, cfg, span.max(1.0)))?);
            let mut t = Table::new(&["year", "kt_data", "kt_model"]);
            for r in &series.records {
                let Some(&(y, k)) = model.get(&r.year) else { continue };
                t.push(vec![r.year.into(), num(r.assets / r.gdp), num(k / y)]);
            }
            t
        }
        "fig13" => per_year(&series, &["p_rel_percent"], |r| vec![num(100.0 * r.loans / r.assets)]),
        "fig15" => per_year(&series, &["k_y", "l_y", "km_y"], |r| {
            vec![num(r.assets / r.gdp), num(r.loans / r.gdp), num((r.assets - r.loans) / r.gdp)]
        }),
        "fig23" => {
            let quota = cfg.quota.unwrap_or(DEFAULT_STATES_QUOTA);
            let report = phase_classify(&series, quota);
            let mut t = Table::new(&["year", "phase", "debt_y", "debt_l"]);
            for r in &report.rows {
                t.push(vec![r.year.into(), (r.phase as u8 + 1).into(), num(r.debt_y), num(r.debt_l)]);
            }
            t
        }
        "fig24" => debt_table(
            &series,
            cfg.p_a.unwrap_or(DEFAULT_P_A),
            cfg.s0.unwrap_or(DEFAULT_S0),
        ),
        "fig27" | "fig28" => {
            let states = annual_from_series(&series);
            let opts = InflationOptions { p_va: cfg.p_va };
            let method = cfg.inflation_method.unwrap_or(InflationMethod::Core);
            let model = inflation_series(&states, method, &opts);
            let cpi = inflation_series(&states, InflationMethod::DataCpi, &opts);
            let mut t = Table::new(&["year", "cpi_percent", "model_percent"]);
            for ((year, m), (_, c)) in model.iter().zip(&cpi) {
                t.push(vec![(*year).into(), opt(c.map(|v| 100.0 * v)), opt(m.map(|v| 100.0 * v))]);
            }
            t
        }
        "fig29" => {
            let strong = model_params(cfg)?;
            let weak = strong.scaled(0.5);
            let integ = integration(run, cfg, SCENARIO_HORIZON);
            let ex = capital_export_experiment(
                &strong,
                &weak,
                cfg.export_fraction.unwrap_or(0.1),
                cfg.lag.unwrap_or(25),
                &integ,
            )?;
            let runs = [
                by_year(&ex.coupled.economies[0].trajectory),
                by_year(&ex.coupled.economies[1].trajectory),
                by_year(&ex.strong_alone),
                by_year(&ex.weak_alone),
            ];
            let mut t = Table::new(&[
                "year", "y1", "k1", "y2", "k2", "y1_alone", "k1_alone", "y2_alone", "k2_alone",
            ]);
            let years: std::collections::BTreeSet<i32> =
                runs.iter().flat_map(|r| r.keys().copied()).collect();
            for year in years {
                let mut row = vec![year.into()];
                for r in &runs {
                    let (y, k) = r.get(&year).map_or((None, None), |&(y, k)| (Some(y), Some(k)));
                    row.push(opt(y));
                    row.push(opt(k));
                }
                t.push(row);
            }
            t
        }
        _ => bail!("figure `{id}` is listed but not implemented"),
    })
}

fn per_year(
    series: &EconSeries,
    columns: &[&str],
    f: impl Fn(&macrofield::dataset::EconRecord) -> Vec<Value>,
) -> Table {
    let mut cols = vec!["year"];
    cols.extend_from_slice(columns);
    let mut t = Table::new(&cols);
    for r in &series.records {
        let mut row = vec![Value::from(r.year)];
        row.extend(f(r));
        t.push(row);
    }
    t
}
