use crate::args::{AnalyticCmd, CalibrateCmd, Cli, Command, OutArgs, PopulationTable, RunArgs};
use crate::config::RunConfig;
use crate::data;
use crate::output::{emit, num, opt, Output, Table};
use crate::report;
use anyhow::Result;
use macrofield::analytic::{
    characteristic_frequency, characteristic_time, classify_regime, piecewise_solution, t_max,
    AnalyticBranch,
};
use macrofield::calibrate::{
    apply_chain, capital_extremes, chain_correction, fit_prel_exponential, fit_quadratic_yk,
    PrelFitMode,
};
use macrofield::dataset::{derive_indicators, EconSeries, Marginal};
use macrofield::diagnostics::{
    annual_from_series, debt_path, inflation_series, phase_classify, InflationMethod,
    InflationOptions, DEFAULT_STATES_QUOTA,
};
use macrofield::model::{integrate, Integration, ModelParams, RateFn, Trajectory};
use macrofield::multiworld::{capital_export_experiment, integrate_world};
use serde_json::{json, Value};
use std::collections::BTreeMap;

pub const DEFAULT_HORIZON: f64 = 85.0;
pub const SCENARIO_HORIZON: f64 = 150.0;
pub const DEFAULT_P_A: f64 = 0.03;
pub const DEFAULT_S0: f64 = 10.53;

pub fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Derive { data, out } => {
            let cfg = RunConfig::load(out.config.as_deref())?;
            let series = data::load(&data, &cfg)?;
            finish(derive(&series), &out, &cfg, None)
        }
        Command::Simulate { run, population_table, summary, out } => {
            let cfg = RunConfig::load(out.config.as_deref())?;
            let mut params = model_params(&cfg)?;
            if let Some(PopulationTable::Frg) = population_table.or(cfg.population_table) {
                params.p_b = population_rate(&data::frg(cfg.decimal_comma)?)?;
            }
            let traj = integrate(&params, &integration(&run, &cfg, DEFAULT_HORIZON))?;
            let summary_path = summary.clone();
            finish(simulate_output(&traj), &out, &cfg, summary_path.as_deref())
        }
        Command::Analytic { cmd } => analytic(cmd),
        Command::Calibrate { cmd } => calibrate(cmd),
        Command::Phases { data, quota, out } => {
            let cfg = RunConfig::load(out.config.as_deref())?;
            let series = data::load(&data, &cfg)?;
            let quota = quota.or(cfg.quota).unwrap_or(DEFAULT_STATES_QUOTA);
            let report = phase_classify(&series, quota);
            let mut table = Table::new(&[
                "year", "phase", "k_y", "l_y", "p_rel", "debt_y", "debt_l", "capital_overhang", "above_quota",
            ]);
            for r in &report.rows {
                table.push(vec![
                    r.year.into(),
                    (r.phase as u8 + 1).into(),
                    num(r.k_y),
                    num(r.l_y),
                    num(r.p_rel),
                    num(r.debt_y),
                    num(r.debt_l),
                    r.capital_overhang.into(),
                    r.above_quota.into(),
                ]);
            }
            let output = Output { table: Some(table), ..Output::json(serde_json::to_value(&report)?) };
            finish(output, &out, &cfg, None)
        }
        Command::Inflation { data, inflation_method, p_va, out } => {
            let cfg = RunConfig::load(out.config.as_deref())?;
            let series = data::load(&data, &cfg)?;
            let method = inflation_method.or(cfg.inflation_method).unwrap_or(InflationMethod::Core);
            let opts = InflationOptions { p_va: p_va.or(cfg.p_va) };
            let states = annual_from_series(&series);
            let est = inflation_series(&states, method, &opts);
            let cpi = inflation_series(&states, InflationMethod::DataCpi, &opts);
            let mut table = Table::new(&["year", "inflation", "cpi"]);
            for ((year, v), (_, c)) in est.iter().zip(&cpi) {
                table.push(vec![(*year).into(), opt(*v), opt(*c)]);
            }
            finish(Output::table(table), &out, &cfg, None)
        }
        Command::Debt { data, p_a, s0, out } => {
            let cfg = RunConfig::load(out.config.as_deref())?;
            let series = data::load(&data, &cfg)?;
            let p_a = p_a.or(cfg.p_a).unwrap_or(DEFAULT_P_A);
            let s0 = s0.or(cfg.s0).unwrap_or(DEFAULT_S0);
            finish(Output::table(debt_table(&series, p_a, s0)), &out, &cfg, None)
        }
        Command::Scenario { run, export_fraction, lag, out } => {
            let cfg = RunConfig::load(out.config.as_deref())?;
            let integ = integration(&run, &cfg, SCENARIO_HORIZON);
            let output = match &cfg.world {
                Some(w) => world_output(&integrate_world(&w.to_world()?, &integ)?)?,
                None => {
                    let fraction = export_fraction.or(cfg.export_fraction).unwrap_or(0.1);
                    let lag = lag.or(cfg.lag).unwrap_or(25);
                    let strong = model_params(&cfg)?;
                    let weak = strong.scaled(0.5);
                    let ex = capital_export_experiment(&strong, &weak, fraction, lag, &integ)?;
                    let mut out = world_output(&ex.coupled)?;
                    let alone = [("strong_alone", &ex.strong_alone), ("weak_alone", &ex.weak_alone)];
                    merge_runs(&mut out, &alone);
                    out
                }
            };
            finish(output, &out, &cfg, None)
        }
        Command::Report { figure, data, run, out } => {
            let cfg = RunConfig::load(out.config.as_deref())?;
            let table = report::figure(&figure, &data, &run, &cfg)?;
            finish(Output::table(table), &out, &cfg, None)
        }
    }
}

fn finish(output: Output, out: &OutArgs, cfg: &RunConfig, summary: Option<&std::path::Path>) -> Result<()> {
    let path = out.out.as_deref().or(cfg.out.as_deref());
    emit(output, out.format.or(cfg.format), path, summary)
}

pub fn model_params(cfg: &RunConfig) -> Result<ModelParams> {
    Ok(match &cfg.model {
        Some(m) => m.to_params()?,
        None => ModelParams::frg_default(),
    })
}

pub fn integration(run: &RunArgs, cfg: &RunConfig, default_horizon: f64) -> Integration {
    let mut i = Integration::new(run.horizon.or(cfg.horizon).unwrap_or(default_horizon));
    if let Some(s) = run.step.or(cfg.step) {
        i = i.with_step(s);
    }
    if let Some(m) = run.method.or(cfg.method) {
        i = i.with_method(m);
    }
    i.allow_negative = run.allow_negative || cfg.allow_negative.unwrap_or(false);
    i
}

/// Yearly population growth as a rate table.
pub fn population_rate(series: &EconSeries) -> Result<RateFn> {
    let table: BTreeMap<i32, f64> = series.population_growth().into_iter().collect();
    Ok(RateFn::table(&table)?)
}

/// Whole-year records keyed by calendar year.
pub fn by_year(traj: &Trajectory) -> BTreeMap<i32, (f64, f64)> {
    traj.points
        .iter()
        .filter(|p| p.t.fract() == 0.0)
        .map(|p| (p.t as i32, (p.y, p.k)))
        .collect()
}

fn marginal(m: Option<Marginal>) -> Value {
    match m {
        Some(Marginal::Finite(v)) => num(v),
        Some(Marginal::Unbounded) => Value::String("inf".into()),
        None => Value::Null,
    }
}

fn derive(series: &EconSeries) -> Output {
    let d = derive_indicators(series);
    let mut t = Table::new(&[
        "year", "k_t", "y_t", "k_c", "m_m", "k_m", "k_i", "y_i", "p_rel", "p_v", "p_n_via_p_rel",
        "p_n_residual", "debt_ratio", "debt_base",
    ]);
    for r in &d.rows {
        t.push(vec![
            r.year.into(),
            num(r.k_t),
            num(r.y_t),
            num(r.k_c),
            num(r.m_m),
            num(r.k_m),
            marginal(r.k_i),
            marginal(r.y_i),
            num(r.p_rel),
            opt(r.p_v),
            opt(r.p_n_via_p_rel),
            opt(r.p_n_residual),
            num(r.debt_ratio.ratio),
            serde_json::to_value(r.debt_ratio.base).unwrap_or(Value::Null),
        ]);
    }
    Output::table(t)
}

fn run_summary(traj: &Trajectory) -> Value {
    let (peak_t, peak_y) = traj.peak();
    json!({
        "method": traj.method,
        "step": traj.step,
        "stop_reason": traj.stop_reason,
        "first_year": traj.points.first().map(|p| p.t),
        "last_year": traj.points.last().map(|p| p.t),
        "peak_year": num(peak_t),
        "peak_y": num(peak_y),
        "collapse_year": traj.collapse(),
    })
}

fn simulate_output(traj: &Trajectory) -> Output {
    let method = serde_json::to_value(traj.method).unwrap_or(Value::Null);
    let mut t = Table::new(&["t", "y", "k", "p_n", "p_s", "p_b", "dy_dt", "dk_dt", "method", "step"]);
    for p in &traj.points {
        t.push(vec![
            num(p.t),
            num(p.y),
            num(p.k),
            num(p.p_n),
            num(p.p_s),
            num(p.p_b),
            num(p.dy_dt),
            num(p.dk_dt),
            method.clone(),
            num(traj.step),
        ]);
    }
    let summary = run_summary(traj);
    let mut json = summary.clone();
    json["points"] = serde_json::to_value(&traj.points).unwrap_or(Value::Null);
    Output { table: Some(t), json, side_summary: Some(summary), default_format: crate::args::Format::Csv }
}

fn world_output(w: &macrofield::multiworld::WorldTrajectory) -> Result<Output> {
    let runs: Vec<(&str, &Trajectory)> =
        w.economies.iter().map(|e| (e.name.as_str(), &e.trajectory)).collect();
    let mut out = Output::table(Table::new(&["year"]));
    out.json = json!({ "economies": {} });
    merge_runs(&mut out, &runs);
    Ok(out)
}

/// Add y/k columns and a summary entry per named run.
fn merge_runs(out: &mut Output, runs: &[(&str, &Trajectory)]) {
    let table = out.table.get_or_insert_with(|| Table::new(&["year"]));
    let mut rows: BTreeMap<i32, Vec<Value>> = BTreeMap::new();
    let width = table.columns.len();
    for r in &table.rows {
        if let Some(y) = r[0].as_i64() {
            rows.insert(y as i32, r.clone());
        }
    }
    for (name, traj) in runs {
        let years = by_year(traj);
        for y in years.keys() {
            rows.entry(*y).or_insert_with(|| {
                let mut v = vec![Value::Null; width];
                v[0] = (*y).into();
                v
            });
        }
        table.columns.push(format!("y_{name}"));
        table.columns.push(format!("k_{name}"));
        for (year, row) in rows.iter_mut() {
            let (y, k) = years.get(year).map_or((Value::Null, Value::Null), |&(y, k)| (num(y), num(k)));
            row.push(y);
            row.push(k);
        }
        out.json["economies"][*name] = run_summary(traj);
    }
    let width = table.columns.len();
    table.rows = rows
        .into_values()
        .map(|mut r| {
            r.resize(width, Value::Null);
            r
        })
        .collect();
    out.json["rows"] = table.to_json();
}

pub fn debt_table(series: &EconSeries, p_a: f64, s0: f64) -> Table {
    let states = annual_from_series(series);
    let mut t = Table::new(&["year", "debt_model", "debt_data"]);
    for ((year, model), s) in debt_path(&states, p_a, s0).into_iter().zip(&states) {
        t.push(vec![year.into(), num(model), opt(s.state_debt)]);
    }
    t
}

fn analytic(cmd: AnalyticCmd) -> Result<()> {
    match cmd {
        AnalyticCmd::Solve { p_n, p_s, y0, k0, years, out } => {
            let cfg = RunConfig::load(out.config.as_deref())?;
            let b = AnalyticBranch::new(p_n, p_s, y0, k0);
            let mut t = Table::new(&["t", "y", "k"]);
            for i in 0..=years {
                let (y, k) = b.solution(i as f64);
                t.push(vec![i.into(), num(y), num(k)]);
            }
            let json = json!({ "branch": b, "rows": t.to_json() });
            finish(Output { json, ..Output::table(t) }, &out, &cfg, None)
        }
        AnalyticCmd::Time { p_n, p_s, out } => {
            let cfg = RunConfig::load(out.config.as_deref())?;
            let json = json!({
                "phi": macrofield::analytic::phi(p_n, p_s),
                "characteristic_time": characteristic_time(p_n, p_s)?,
                "characteristic_frequency": characteristic_frequency(p_n, p_s)?,
            });
            finish(Output::json(json), &out, &cfg, None)
        }
        AnalyticCmd::Regime { p_v, p_rel, p_s, out } => {
            let cfg = RunConfig::load(out.config.as_deref())?;
            let json = serde_json::to_value(classify_regime(p_v, p_rel, p_s))?;
            finish(Output::json(json), &out, &cfg, None)
        }
        AnalyticCmd::Tmax { t_h, out } => {
            let cfg = RunConfig::load(out.config.as_deref())?;
            if t_h.is_nan() || t_h <= 0.0 {
                return Err(macrofield::Error::InvalidParameter(format!("T_h must be positive, got {t_h}")).into());
            }
            finish(Output::json(json!({ "t_h": t_h, "t_max": t_max(t_h) })), &out, &cfg, None)
        }
        AnalyticCmd::Piecewise { years, out } => {
            let cfg = RunConfig::load(out.config.as_deref())?;
            let params = model_params(&cfg)?;
            let pts = piecewise_solution(&params, years)?;
            let mut t = Table::new(&["t", "y", "k", "branch"]);
            for p in &pts {
                t.push(vec![num(p.t), num(p.y), num(p.k), serde_json::to_value(p.kind)?]);
            }
            finish(Output::table(t), &out, &cfg, None)
        }
    }
}

fn calibrate(cmd: CalibrateCmd) -> Result<()> {
    match cmd {
        CalibrateCmd::Yk { data, out } => {
            let cfg = RunConfig::load(out.config.as_deref())?;
            let series = data::load(&data, &cfg)?;
            let fit = fit_quadratic_yk(&series)?;
            let json = json!({ "fit": fit, "extremes": capital_extremes(&fit).ok() });
            finish(Output::json(json), &out, &cfg, None)
        }
        CalibrateCmd::Prel { anchored, data, out } => {
            let cfg = RunConfig::load(out.config.as_deref())?;
            let series = data::load(&data, &cfg)?;
            let mode = if anchored { PrelFitMode::Anchored } else { PrelFitMode::Free };
            let fit = fit_prel_exponential(&series, mode)?;
            finish(Output::json(serde_json::to_value(fit)?), &out, &cfg, None)
        }
        CalibrateCmd::Chain { data, run, out } => {
            let cfg = RunConfig::load(out.config.as_deref())?;
            let series = data::load(&data, &cfg)?;
            let params = model_params(&cfg)?;
            let span = (series.last_year() - params.t0) as f64;
            let traj = integrate(&params, &integration(&run, &cfg, span.max(1.0)))?;
            let corr = chain_correction(&traj, &series)?;
            let chained = by_year(&apply_chain(&corr, &traj));
            let mut t = Table::new(&["year", "y_data", "y_model", "k_data", "k_model", "factor"]);
            for r in &series.records {
                let Some(&(y, k)) = chained.get(&r.year) else { continue };
                t.push(vec![
                    r.year.into(),
                    num(r.gdp),
                    num(y),
                    num(r.assets),
                    num(k),
                    num(corr.factor(r.year as f64)),
                ]);
            }
            let json = json!({ "correction": corr, "rows": t.to_json() });
            finish(Output { json, ..Output::table(t) }, &out, &cfg, None)
        }
    }
}
