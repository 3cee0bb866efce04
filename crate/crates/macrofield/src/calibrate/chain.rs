use crate::dataset::EconSeries;
use crate::model::Trajectory;
use crate::{Error, Result};
use serde::Serialize;

/// Currency-per-point ratios at two anchor years, interpolated linearly in between.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChainCorrection {
    pub v_i: f64,
    pub v_e: f64,
    pub t_i: f64,
    pub t_e: f64,
}

impl ChainCorrection {
    /// Factor at `t`; outside [t_i, t_e] the line is extended.
    pub fn factor(&self, t: f64) -> f64 {
        self.v_i + (self.v_e - self.v_i) * (t - self.t_i) / (self.t_e - self.t_i)
    }

    pub fn is_extrapolated(&self, t: f64) -> bool {
        t < self.t_i || t > self.t_e
    }
}

fn ratio(model: &Trajectory, data: &EconSeries, year: i32) -> Result<f64> {
    let p = model
        .at(year as f64)
        .ok_or_else(|| Error::InvalidParameter(format!("model has no record for {year}")))?;
    let d = data
        .get(year)
        .ok_or_else(|| Error::InvalidParameter(format!("data has no record for {year}")))?;
    let points = p.y + p.k;
    if points.abs() < crate::EPS_DIV {
        return Err(Error::Degenerate(format!(
            "model point sum Y + K vanishes at {year}"
        )));
    }
    Ok((d.gdp + d.assets) / points)
}

/// Chain correction anchored at the given years.
pub fn chain_correction_between(
    model: &Trajectory,
    data: &EconSeries,
    t_i: i32,
    t_e: i32,
) -> Result<ChainCorrection> {
    if t_e <= t_i {
        return Err(Error::InvalidParameter(format!(
            "chain end year {t_e} must follow start year {t_i}"
        )));
    }
    Ok(ChainCorrection {
        v_i: ratio(model, data, t_i)?,
        v_e: ratio(model, data, t_e)?,
        t_i: t_i as f64,
        t_e: t_e as f64,
    })
}

/// Chain correction anchored at the first and last years covered by both model and data.
pub fn chain_correction(model: &Trajectory, data: &EconSeries) -> Result<ChainCorrection> {
    let years: Vec<i32> = model
        .points
        .iter()
        .filter(|p| p.t.fract() == 0.0)
        .map(|p| p.t as i32)
        .filter(|&y| data.get(y).is_some())
        .collect();
    match (years.first(), years.last()) {
        (Some(&a), Some(&b)) if b > a => chain_correction_between(model, data, a, b),
        _ => Err(Error::Degenerate(
            "model and data overlap in fewer than two years".into(),
        )),
    }
}

/// Scale GDP and capital (and their rates) by the same interpolated factor.
pub fn apply_chain(corr: &ChainCorrection, trajectory: &Trajectory) -> Trajectory {
    let mut out = trajectory.clone();
    for p in &mut out.points {
        let f = corr.factor(p.t);
        p.y *= f;
        p.k *= f;
        p.dy_dt *= f;
        p.dk_dt *= f;
    }
    out
}
