//! Several economies coupled through capital and GDP transfers.
//!
//! Every transfer moves an amount from one economy to another, so the implied
//! transfer matrices are antisymmetric and the world as a whole neither gains
//! nor loses. Money creation or destruction must be declared as an
//! [`Exogenous`] flow.

use crate::model::{
    ModelConfig, ModelParams, RateFn, RateRepr, Rates, StopReason, Trajectory, TrajectoryPoint,
};
use crate::model::{integrate, Integration};
use crate::ode;
use crate::{Error, Result};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TransferKind {
    Capital,
    Gdp,
}

#[derive(Debug, Clone, PartialEq)]
pub enum TransferRate {
    /// Billions per year; tables are read in calendar years.
    Fixed(RateFn),
    /// Fraction of the source economy's GDP per year.
    GdpFraction(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Transfer {
    pub from: usize,
    pub to: usize,
    pub kind: TransferKind,
    pub rate: TransferRate,
}

/// Flow into one economy with no counterpart elsewhere (money creation when positive).
#[derive(Debug, Clone, PartialEq)]
pub struct Exogenous {
    pub economy: usize,
    pub kind: TransferKind,
    pub rate: RateFn,
}

#[derive(Debug, Clone, PartialEq)]
pub struct WorldParams {
    pub names: Vec<String>,
    pub economies: Vec<ModelParams>,
    pub transfers: Vec<Transfer>,
    pub exogenous: Vec<Exogenous>,
    /// Apply cross-economy transfers with a one-year delay.
    pub retarded: bool,
}

impl WorldParams {
    pub fn new(economies: Vec<ModelParams>) -> Self {
        let names = (0..economies.len()).map(|i| format!("economy{}", i + 1)).collect();
        WorldParams {
            names,
            economies,
            transfers: Vec::new(),
            exogenous: Vec::new(),
            retarded: false,
        }
    }

    pub fn start_year(&self) -> i32 {
        self.economies.iter().map(|e| e.t0).min().unwrap_or(0)
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.economies.len();
        if n == 0 {
            return Err(Error::InvalidParameter("world has no economies".into()));
        }
        if self.names.len() != n {
            return Err(Error::Dimension { expected: n, got: self.names.len() });
        }
        for e in &self.economies {
            e.validate()?;
        }
        for tr in &self.transfers {
            if tr.from >= n || tr.to >= n {
                return Err(Error::Dimension { expected: n, got: tr.from.max(tr.to) + 1 });
            }
            if tr.from == tr.to {
                return Err(Error::InvalidParameter(format!(
                    "transfer from economy {} to itself; declare it as exogenous",
                    tr.from
                )));
            }
        }
        for ex in &self.exogenous {
            if ex.economy >= n {
                return Err(Error::Dimension { expected: n, got: ex.economy + 1 });
            }
        }
        Ok(())
    }
}

/// Net transfer matrices at one instant: `capital[i][j]` is the capital flow into i from j.
#[derive(Debug, Clone, PartialEq)]
pub struct TransferMatrices {
    pub capital: Vec<Vec<f64>>,
    pub gdp: Vec<Vec<f64>>,
}

impl TransferMatrices {
    fn zeros(n: usize) -> Self {
        TransferMatrices { capital: vec![vec![0.0; n]; n], gdp: vec![vec![0.0; n]; n] }
    }

    /// Row sums (capital inflow, GDP inflow) per economy.
    pub fn inflows(&self) -> Vec<(f64, f64)> {
        self.capital
            .iter()
            .zip(&self.gdp)
            .map(|(a, b)| (a.iter().sum(), b.iter().sum()))
            .collect()
    }
}

/// Transfer matrices given calendar time `t`, which economies take part, and
/// the GDP each source economy exposes to fractional transfers.
pub fn transfer_matrices(world: &WorldParams, t: f64, active: &[bool], source_gdp: &[f64]) -> TransferMatrices {
    let n = world.economies.len();
    let t0 = world.start_year();
    let delay = if world.retarded { 1.0 } else { 0.0 };
    let mut m = TransferMatrices::zeros(n);
    for tr in &world.transfers {
        if !(active[tr.from] && active[tr.to]) {
            continue;
        }
        let amount = match &tr.rate {
            TransferRate::Fixed(r) => r.at(t0, t - t0 as f64 - delay),
            TransferRate::GdpFraction(f) => f * source_gdp[tr.from],
        };
        let mat = match tr.kind {
            TransferKind::Capital => &mut m.capital,
            TransferKind::Gdp => &mut m.gdp,
        };
        mat[tr.to][tr.from] += amount;
        mat[tr.from][tr.to] -= amount;
    }
    m
}

fn exogenous_inflows(world: &WorldParams, t: f64, active: &[bool]) -> Vec<(f64, f64)> {
    let t0 = world.start_year();
    let mut out = vec![(0.0, 0.0); world.economies.len()];
    for ex in &world.exogenous {
        if !active[ex.economy] {
            continue;
        }
        let v = ex.rate.at(t0, t - t0 as f64);
        match ex.kind {
            TransferKind::Capital => out[ex.economy].0 += v,
            TransferKind::Gdp => out[ex.economy].1 += v,
        }
    }
    out
}

/// Per-economy (dY/dt, dK/dt) at calendar time `t`; economies that have not started yet are frozen.
pub fn world_rhs(world: &WorldParams, t: f64, states: &[(f64, f64)]) -> Result<Vec<(f64, f64)>> {
    let n = world.economies.len();
    if states.len() != n {
        return Err(Error::Dimension { expected: n, got: states.len() });
    }
    let active: Vec<bool> = world.economies.iter().map(|e| t >= e.t0 as f64).collect();
    let gdp: Vec<f64> = states.iter().map(|s| s.0).collect();
    let flows = transfer_matrices(world, t, &active, &gdp).inflows();
    let exo = exogenous_inflows(world, t, &active);
    Ok((0..n)
        .map(|i| {
            if !active[i] {
                return (0.0, 0.0);
            }
            let e = &world.economies[i];
            let (dy, dk) = Rates::at(e, t - e.t0 as f64).derivatives(states[i].0, states[i].1);
            (dy + flows[i].1 + exo[i].1, dk + flows[i].0 + exo[i].0)
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EconomyRun {
    pub name: String,
    pub trajectory: Trajectory,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WorldTrajectory {
    pub economies: Vec<EconomyRun>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Status {
    Waiting,
    Running,
    Stopped,
}

/// Integrate all economies on a shared clock starting at the earliest start year.
/// Records are whole years of each economy's own run; derivatives include transfers.
pub fn integrate_world(world: &WorldParams, run: &Integration) -> Result<WorldTrajectory> {
    world.validate()?;
    run.validate()?;
    let n = world.economies.len();
    let t_world = world.start_year();
    let offsets: Vec<usize> = world.economies.iter().map(|e| (e.t0 - t_world) as usize).collect();
    let mut status = vec![Status::Waiting; n];
    let mut state = vec![0.0; 2 * n];
    let mut points: Vec<Vec<TrajectoryPoint>> = vec![Vec::new(); n];
    let mut stop = vec![StopReason::Horizon; n];
    // GDP at the previous whole year, used by delayed transfers
    let mut last_year_gdp = vec![0.0; n];

    let record = |i: usize, elapsed: f64, y: f64, k: f64, flow: (f64, f64), exo: (f64, f64)| {
        let mut p = TrajectoryPoint::new(&world.economies[i], elapsed, y, k);
        p.dy_dt = p.dy_dt + flow.1 + exo.1;
        p.dk_dt = p.dk_dt + flow.0 + exo.0;
        p
    };

    let mut years = run.years();
    years.push((years.last().map_or(0, |y| y.0 + 1), 0.0, 0, 0.0));
    for (year, len, nsub, h) in years {
        // start economies whose first year has come
        for i in 0..n {
            if status[i] == Status::Waiting && offsets[i] == year {
                status[i] = Status::Running;
                state[2 * i] = world.economies[i].y0;
                state[2 * i + 1] = world.economies[i].k0;
            }
        }
        let active: Vec<bool> = status.iter().map(|s| *s == Status::Running).collect();
        // record the state at the start of this year
        {
            let gdp: Vec<f64> = (0..n).map(|i| state[2 * i]).collect();
            let src = if world.retarded && year > 0 { last_year_gdp.clone() } else { gdp.clone() };
            let t = t_world as f64 + year as f64;
            let flows = transfer_matrices(world, t, &active, &src).inflows();
            let exo = exogenous_inflows(world, t, &active);
            for i in 0..n {
                if !active[i] {
                    continue;
                }
                let elapsed = (year - offsets[i]) as f64;
                let p = record(i, elapsed, state[2 * i], state[2 * i + 1], flows[i], exo[i]);
                points[i].push(p);
                if year > offsets[i] && p.y <= 0.0 && !run.allow_negative {
                    status[i] = Status::Stopped;
                    stop[i] = StopReason::GdpNonpositive;
                }
            }
        }
        if nsub == 0 || status.iter().all(|s| *s == Status::Stopped) {
            break;
        }
        let year_src = last_year_gdp.clone();
        for i in 0..n {
            last_year_gdp[i] = state[2 * i];
        }
        let active: Vec<bool> = status.iter().map(|s| *s == Status::Running).collect();
        for k in 0..nsub {
            ode::step(run.method, h, &mut state, |off, s, d| {
                let t = t_world as f64 + year as f64 + k as f64 * h + off;
                let gdp: Vec<f64> = (0..n).map(|i| s[2 * i]).collect();
                let src = if world.retarded && year > 0 { &year_src } else { &gdp };
                let flows = transfer_matrices(world, t, &active, src).inflows();
                let exo = exogenous_inflows(world, t, &active);
                for i in 0..n {
                    if !active[i] {
                        d[2 * i] = 0.0;
                        d[2 * i + 1] = 0.0;
                        continue;
                    }
                    let e = &world.economies[i];
                    let base = (year - offsets[i]) as f64 + k as f64 * h;
                    let (dy, dk) = Rates::at(e, base + off).derivatives(s[2 * i], s[2 * i + 1]);
                    d[2 * i] = dy + flows[i].1 + exo[i].1;
                    d[2 * i + 1] = dk + flows[i].0 + exo[i].0;
                }
            });
            for i in 0..n {
                if active[i] && !(state[2 * i].is_finite() && state[2 * i + 1].is_finite()) {
                    status[i] = Status::Stopped;
                    stop[i] = StopReason::Diverged;
                }
            }
        }
        if len < 1.0 && nsub > 0 {
            // a trailing partial year: record its end and finish
            let active: Vec<bool> = status.iter().map(|s| *s == Status::Running).collect();
            let t = t_world as f64 + year as f64 + len;
            let gdp: Vec<f64> = (0..n).map(|i| state[2 * i]).collect();
            let flows = transfer_matrices(world, t, &active, &gdp).inflows();
            let exo = exogenous_inflows(world, t, &active);
            for i in 0..n {
                if active[i] {
                    let elapsed = (year - offsets[i]) as f64 + len;
                    points[i].push(record(i, elapsed, state[2 * i], state[2 * i + 1], flows[i], exo[i]));
                }
            }
            break;
        }
    }
    Ok(WorldTrajectory {
        economies: (0..n)
            .map(|i| EconomyRun {
                name: world.names[i].clone(),
                trajectory: Trajectory {
                    points: std::mem::take(&mut points[i]),
                    stop_reason: stop[i],
                    method: run.method,
                    step: run.step,
                },
            })
            .collect(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExportExperiment {
    pub coupled: WorldTrajectory,
    pub strong_alone: Trajectory,
    pub weak_alone: Trajectory,
}

/// Strong economy exports `export_fraction` of its GDP per year as capital to a
/// weak economy that starts `start_lag` years later.
pub fn capital_export_experiment(
    strong: &ModelParams,
    weak: &ModelParams,
    export_fraction: f64,
    start_lag: u32,
    run: &Integration,
) -> Result<ExportExperiment> {
    if !(export_fraction >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "export fraction must be non-negative, got {export_fraction}"
        )));
    }
    let weak = ModelParams { t0: strong.t0 + start_lag as i32, ..weak.clone() };
    let mut world = WorldParams::new(vec![strong.clone(), weak.clone()]);
    world.names = vec!["strong".into(), "weak".into()];
    world.transfers.push(Transfer {
        from: 0,
        to: 1,
        kind: TransferKind::Capital,
        rate: TransferRate::GdpFraction(export_fraction),
    });
    let coupled = integrate_world(&world, run)?;
    let weak_run = Integration { horizon: (run.horizon - start_lag as f64).max(1.0), ..*run };
    Ok(ExportExperiment {
        coupled,
        strong_alone: integrate(strong, run)?,
        weak_alone: integrate(&weak, &weak_run)?,
    })
}

/// Multipliers on the selling economy when a derivative sale of B on GDP
/// is matched by A of created capital.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Amplification {
    /// Nominal GDP change of the seller, -(2B + A).
    pub nominal_gdp: f64,
    /// Nominal capital change of the seller, 2A + B.
    pub nominal_capital: f64,
    /// Delayed estimate, two thirds of the nominal values.
    pub retarded_gdp: f64,
    pub retarded_capital: f64,
}

pub fn derivative_sales_amplification(b: f64, a: f64) -> Amplification {
    let nominal_gdp = -(2.0 * b + a);
    let nominal_capital = 2.0 * a + b;
    Amplification {
        nominal_gdp,
        nominal_capital,
        retarded_gdp: nominal_gdp * 2.0 / 3.0,
        retarded_capital: nominal_capital * 2.0 / 3.0,
    }
}

// ---- JSON configuration ----

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum EconomyRef {
    Index(usize),
    Name(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GdpFractionRepr {
    pub gdp_fraction: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TransferRateRepr {
    GdpFraction(GdpFractionRepr),
    Rate(RateRepr),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EconomyConfig {
    pub name: String,
    pub model: ModelConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransferConfig {
    pub from: EconomyRef,
    pub to: EconomyRef,
    pub kind: TransferKind,
    pub rate: TransferRateRepr,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExogenousConfig {
    pub economy: EconomyRef,
    pub kind: TransferKind,
    pub rate: RateRepr,
}

/// World configuration document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WorldConfig {
    pub economies: Vec<EconomyConfig>,
    #[serde(default)]
    pub transfers: Vec<TransferConfig>,
    #[serde(default)]
    pub exogenous: Vec<ExogenousConfig>,
    #[serde(default)]
    pub retarded: bool,
}

impl WorldConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn to_world(&self) -> Result<WorldParams> {
        let names: Vec<String> = self.economies.iter().map(|e| e.name.clone()).collect();
        let resolve = |r: &EconomyRef| -> Result<usize> {
            match r {
                EconomyRef::Index(i) if *i < names.len() => Ok(*i),
                EconomyRef::Index(i) => Err(Error::Config(format!("no economy with index {i}"))),
                EconomyRef::Name(s) => names
                    .iter()
                    .position(|n| n == s)
                    .ok_or_else(|| Error::Config(format!("no economy named `{s}`"))),
            }
        };
        let economies = self
            .economies
            .iter()
            .map(|e| e.model.to_params())
            .collect::<Result<Vec<_>>>()?;
        let transfers = self
            .transfers
            .iter()
            .map(|t| {
                Ok(Transfer {
                    from: resolve(&t.from)?,
                    to: resolve(&t.to)?,
                    kind: t.kind,
                    rate: match &t.rate {
                        TransferRateRepr::GdpFraction(g) => TransferRate::GdpFraction(g.gdp_fraction),
                        TransferRateRepr::Rate(r) => TransferRate::Fixed(r.to_rate()?),
                    },
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let exogenous = self
            .exogenous
            .iter()
            .map(|e| {
                Ok(Exogenous { economy: resolve(&e.economy)?, kind: e.kind, rate: e.rate.to_rate()? })
            })
            .collect::<Result<Vec<_>>>()?;
        let world = WorldParams { names, economies, transfers, exogenous, retarded: self.retarded };
        world.validate()?;
        Ok(world)
    }
}
