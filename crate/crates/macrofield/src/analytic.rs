//! Closed-form solutions of the system with constant p_n, p_s and no external flows.
//!
//! With `Φ = p_n (4 p_s - p_n)` both Y and K oscillate (Φ > 0) or grow and
//! decay hyperbolically (Φ < 0) around the envelope `exp(p_n t / 2)`.

use crate::model::{ModelParams, RateFn};
use crate::{Error, Result, EPS_DIV, EPS_PHI};
use serde::Serialize;

pub fn phi(p_n: f64, p_s: f64) -> f64 {
    p_n * (4.0 * p_s - p_n)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BranchKind {
    /// Φ < 0: cosh/sinh.
    Hyperbolic,
    /// Φ > 0: cos/sin.
    Harmonic,
    /// Φ = 0 with p_n = 0.
    DegeneratePn0,
    /// Φ = 0 with p_n = 4 p_s.
    DegeneratePn4ps,
}

/// Shape coefficients. `alpha` and `beta` scale the sinh/sin terms of the
/// normalised GDP and capital brackets, `gamma` and `eta` the linear terms
/// of the degenerate branches.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Coefficients {
    /// Y0 / K0.
    pub alpha0: f64,
    /// K0 / Y0.
    pub a0: f64,
    /// p_s / p_n, absent for p_n = 0.
    pub beta_s: Option<f64>,
    /// (1 + 2 A0) / sqrt|Φ|, absent on the degenerate branches.
    pub alpha: Option<f64>,
    /// (1 + 2 β_s α0) / sqrt|Φ|, absent on the degenerate branches.
    pub beta: Option<f64>,
    /// 1/2 + A0.
    pub gamma: f64,
    /// 1/2 + α0 / 4.
    pub eta: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AnalyticBranch {
    pub kind: BranchKind,
    pub p_n: f64,
    pub p_s: f64,
    pub y0: f64,
    pub k0: f64,
    pub phi: f64,
    pub coefficients: Coefficients,
}

impl AnalyticBranch {
    pub fn new(p_n: f64, p_s: f64, y0: f64, k0: f64) -> Self {
        let ph = phi(p_n, p_s);
        let kind = if ph < -EPS_PHI {
            BranchKind::Hyperbolic
        } else if ph > EPS_PHI {
            BranchKind::Harmonic
        } else if p_n.abs() <= (p_n - 4.0 * p_s).abs() {
            BranchKind::DegeneratePn0
        } else {
            BranchKind::DegeneratePn4ps
        };
        Self::with_kind(kind, p_n, p_s, y0, k0)
    }

    fn with_kind(kind: BranchKind, p_n: f64, p_s: f64, y0: f64, k0: f64) -> Self {
        let ph = phi(p_n, p_s);
        let alpha0 = y0 / k0;
        let a0 = k0 / y0;
        let beta_s = (p_n != 0.0).then(|| p_s / p_n);
        let root = ph.abs().sqrt();
        let oscillating = matches!(kind, BranchKind::Hyperbolic | BranchKind::Harmonic);
        let coefficients = Coefficients {
            alpha0,
            a0,
            beta_s,
            alpha: oscillating.then(|| (1.0 + 2.0 * a0) / root),
            beta: if oscillating {
                beta_s.map(|b| (1.0 + 2.0 * b * alpha0) / root)
            } else {
                None
            },
            gamma: 0.5 + a0,
            eta: 0.5 + alpha0 / 4.0,
        };
        AnalyticBranch {
            kind,
            p_n,
            p_s,
            y0,
            k0,
            phi: ph,
            coefficients,
        }
    }

    /// GDP and capital brackets, i.e. the solution without the `exp(p_n t/2)` envelope.
    fn brackets(&self, t: f64) -> (f64, f64) {
        let (p_n, p_s, y0, k0) = (self.p_n, self.p_s, self.y0, self.k0);
        let y_slope = -p_n * (y0 + 2.0 * k0);
        let k_slope = 2.0 * p_s * y0 + p_n * k0;
        match self.kind {
            BranchKind::Hyperbolic => {
                let root = (-self.phi).sqrt();
                let (c, s) = ((0.5 * root * t).cosh(), (0.5 * root * t).sinh());
                (y0 * c + y_slope / root * s, k0 * c + k_slope / root * s)
            }
            BranchKind::Harmonic => {
                let root = self.phi.sqrt();
                let (s, c) = (0.5 * root * t).sin_cos();
                (y0 * c + y_slope / root * s, k0 * c + k_slope / root * s)
            }
            BranchKind::DegeneratePn0 | BranchKind::DegeneratePn4ps => {
                (y0 + 0.5 * y_slope * t, k0 + 0.5 * k_slope * t)
            }
        }
    }

    /// (Y, K) at `t` years after the start.
    pub fn solution(&self, t: f64) -> (f64, f64) {
        let (by, bk) = self.brackets(t);
        let envelope = (0.5 * self.p_n * t).exp();
        (by * envelope, bk * envelope)
    }

    /// Normalised brackets (Δ_S Y, Δ_S K); both equal 1 at t = 0.
    pub fn delta_s(&self, t: f64) -> (f64, f64) {
        let (by, bk) = self.brackets(t);
        (by / self.y0, bk / self.k0)
    }
}

/// (Y, K) of a branch at `t` years.
pub fn basis_solution(branch: &AnalyticBranch, t: f64) -> (f64, f64) {
    branch.solution(t)
}

/// Closed-form K/Y. Fails where GDP has reached zero and the ratio has a pole.
pub fn capital_coefficient_closed(branch: &AnalyticBranch, t: f64) -> Result<f64> {
    let (dy, dk) = branch.delta_s(t);
    if dy.abs() < EPS_DIV {
        return Err(Error::Pole(format!(
            "GDP bracket vanishes at t = {t}, capital coefficient diverges"
        )));
    }
    Ok(branch.coefficients.a0 * dk / dy)
}

/// Years for an e-fold change in the growth phase, `4π / sqrt(-Φ)`.
pub fn characteristic_time(p_n: f64, p_s: f64) -> Result<f64> {
    let ph = phi(p_n, p_s);
    if ph >= 0.0 {
        return Err(Error::ImaginaryTime(ph));
    }
    Ok(4.0 * std::f64::consts::PI / (-ph).sqrt())
}

pub fn characteristic_frequency(p_n: f64, p_s: f64) -> Result<f64> {
    characteristic_time(p_n, p_s).map(|t| 1.0 / t)
}

/// Time after the start at which an exponential lending share with decay time `t_h`
/// reaches one half, so GDP growth stops.
pub fn t_max(t_h: f64) -> f64 {
    t_h * (1.0 - (std::f64::consts::E / 2.0).ln())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    Growth,
    Crisis,
    Boundary,
}

/// Which of the four sufficient growth conditions is satisfied.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GrowthCondition {
    /// p_v > 0, p_rel < 1/2 and p_n > 4 p_s.
    PositiveRateLowShare,
    /// p_v > 0, p_rel > 1/2 and 4 p_s > p_n.
    PositiveRateHighShare,
    /// p_v < 0, p_rel < 1/2 and 4 p_s > p_n.
    NegativeRateLowShare,
    /// p_v < 0, p_rel > 1/2 and p_n > 4 p_s.
    NegativeRateHighShare,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RegimeReport {
    pub phi: f64,
    pub p_n: f64,
    pub regime: Regime,
    pub condition: Option<GrowthCondition>,
    /// p_rel - 1/2.
    pub p_arel: f64,
}

pub fn classify_regime(p_v: f64, p_rel: f64, p_s: f64) -> RegimeReport {
    let p_n = p_v * (1.0 - 2.0 * p_rel);
    let ph = phi(p_n, p_s);
    let regime = if ph < -EPS_PHI {
        Regime::Growth
    } else if ph > EPS_PHI {
        Regime::Crisis
    } else {
        Regime::Boundary
    };
    let condition = if p_v > 0.0 && p_rel < 0.5 && p_n > 4.0 * p_s {
        Some(GrowthCondition::PositiveRateLowShare)
    } else if p_v > 0.0 && p_rel > 0.5 && 4.0 * p_s > p_n {
        Some(GrowthCondition::PositiveRateHighShare)
    } else if p_v < 0.0 && p_rel < 0.5 && 4.0 * p_s > p_n {
        Some(GrowthCondition::NegativeRateLowShare)
    } else if p_v < 0.0 && p_rel > 0.5 && p_n > 4.0 * p_s {
        Some(GrowthCondition::NegativeRateHighShare)
    } else {
        None
    };
    RegimeReport {
        phi: ph,
        p_n,
        regime,
        condition,
        p_arel: p_rel - 0.5,
    }
}

/// Single-exponential benchmark `Y0 exp(g t)`.
pub fn iwf_comparison(g: f64, y0: f64, t: f64) -> f64 {
    y0 * (g * t).exp()
}

/// Relative gap between the branch GDP and `Y0 exp(|p_n| t)`.
pub fn early_time_deviation(branch: &AnalyticBranch, t: f64) -> f64 {
    let reference = iwf_comparison(branch.p_n.abs(), branch.y0, t);
    (branch.solution(t).0 - reference).abs() / reference.abs()
}

/// One record of a piecewise closed-form run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PiecewisePoint {
    pub t: f64,
    pub y: f64,
    pub k: f64,
    pub kind: BranchKind,
}

/// Chain closed-form branches year by year, freezing p_n and p_s at the start of each year.
/// Only valid without external flows, population or productivity growth.
pub fn piecewise_solution(params: &ModelParams, years: usize) -> Result<Vec<PiecewisePoint>> {
    let nonzero = |r: &RateFn| !r.is_zero();
    if nonzero(&params.a0) || nonzero(&params.b0) || nonzero(&params.p_b) || nonzero(&params.p_p) {
        return Err(Error::InvalidParameter(
            "closed-form chaining needs zero external flows, population and productivity rates"
                .into(),
        ));
    }
    let (mut y, mut k) = (params.y0, params.k0);
    let mut out = Vec::with_capacity(years + 1);
    for year in 0..=years {
        let t = year as f64;
        let p_n = crate::model::net_business_rate(params, t);
        let p_s = params.p_s.at(params.t0, t);
        let branch = AnalyticBranch::new(p_n, p_s, y, k);
        out.push(PiecewisePoint {
            t: params.t0 as f64 + t,
            y,
            k,
            kind: branch.kind,
        });
        (y, k) = branch.solution(1.0);
    }
    Ok(out)
}
