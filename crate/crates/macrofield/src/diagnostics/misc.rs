use crate::model::{net_business_rate, ModelParams};
use crate::{Error, Result};
use serde::Serialize;

/// Product x loses trade volume to product y after `t0x`, decaying with time
/// constant `t_sh_x` to the floor `h_min_x` of its initial volume.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SubstitutionParams {
    pub h0x: f64,
    pub p0x: f64,
    pub h0y: f64,
    pub p0y: f64,
    pub h_min_x: f64,
    pub t0x: f64,
    pub t_sh_x: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SubstitutionState {
    pub hp_x: f64,
    pub hp_y: f64,
    pub rate_x: f64,
    pub rate_y: f64,
}

pub fn substitution_trajectory(p: &SubstitutionParams, t: f64) -> Result<SubstitutionState> {
    if !(0.0..=1.0).contains(&p.h_min_x) {
        return Err(Error::InvalidParameter(format!(
            "h_min must lie in [0, 1], got {}",
            p.h_min_x
        )));
    }
    if !(p.t_sh_x > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "substitution time must be positive, got {}",
            p.t_sh_x
        )));
    }
    let x0 = p.h0x * p.p0x;
    let y0 = p.h0y * p.p0y;
    if t <= p.t0x {
        return Ok(SubstitutionState { hp_x: x0, hp_y: y0, rate_x: 0.0, rate_y: 0.0 });
    }
    let decay = (-(t - p.t0x) / p.t_sh_x).exp();
    let moved = (1.0 - p.h_min_x) * (1.0 - decay) * x0;
    let rate = (1.0 - p.h_min_x) / p.t_sh_x * decay * x0;
    Ok(SubstitutionState {
        hp_x: x0 - moved,
        hp_y: y0 + moved,
        rate_x: -rate,
        rate_y: rate,
    })
}

/// A perturbation with economy-wide residual `r` matters once it reaches the GDP growth.
pub fn systemic_importance(residual: f64, dy_dt: f64) -> bool {
    residual >= dy_dt
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SavingsIdentity {
    /// p_s Y + p_n K.
    pub s_total: f64,
    /// Net investment, equal to total savings.
    pub i_n: f64,
    /// dK/dt - S_total (- a0 when given).
    pub gap: f64,
    /// p_n K / Y.
    pub interest_share: f64,
}

pub fn savings_identity(y: f64, k: f64, dk_dt: f64, p_s: f64, p_n: f64, a0: Option<f64>) -> SavingsIdentity {
    let s_total = p_s * y + p_n * k;
    SavingsIdentity {
        s_total,
        i_n: s_total,
        gap: dk_dt - s_total - a0.unwrap_or(0.0),
        interest_share: p_n * k / y,
    }
}

pub const DEFAULT_SUPPLY_DEMAND_C: f64 = 0.125;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InterestEstimates {
    /// c Y / K.
    pub supply_demand: f64,
    /// (dY/dt) Y / K².
    pub commutator: f64,
}

pub fn interest_estimators(y: f64, k: f64, dy_dt: f64, c: f64) -> Result<InterestEstimates> {
    if !(k > 0.0) {
        return Err(Error::Domain(format!("interest estimators need K > 0, got {k}")));
    }
    Ok(InterestEstimates {
        supply_demand: c * y / k,
        commutator: dy_dt * y / (k * k),
    })
}

/// Predator-prey couplings with `α Y K = p_n K` and `β Y K = p_s Y` at the given state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LotkaVolterra {
    pub alpha: f64,
    pub beta: f64,
}

/// Couplings at `t` years after the start of `params`.
pub fn lotka_volterra_map(params: &ModelParams, t: f64, y: f64, k: f64) -> Result<LotkaVolterra> {
    if !(y > 0.0 && k > 0.0) {
        return Err(Error::Domain(format!(
            "predator-prey map needs Y, K > 0, got Y = {y}, K = {k}"
        )));
    }
    Ok(LotkaVolterra {
        alpha: net_business_rate(params, t) / y,
        beta: params.p_s.at(params.t0, t) / k,
    })
}
