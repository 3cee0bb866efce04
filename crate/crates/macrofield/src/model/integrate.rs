use super::{Method, ModelParams, Rates};
use crate::ode;
use crate::{Error, Result};
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    Horizon,
    GdpNonpositive,
    Diverged,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TrajectoryPoint {
    /// Calendar time in years.
    pub t: f64,
    pub y: f64,
    pub k: f64,
    pub p_n: f64,
    pub p_s: f64,
    pub p_b: f64,
    pub dy_dt: f64,
    pub dk_dt: f64,
}

impl TrajectoryPoint {
    pub(crate) fn new(params: &ModelParams, elapsed: f64, y: f64, k: f64) -> Self {
        let r = Rates::at(params, elapsed);
        let (dy_dt, dk_dt) = r.derivatives(y, k);
        TrajectoryPoint {
            t: params.t0 as f64 + elapsed,
            y,
            k,
            p_n: r.p_n,
            p_s: r.p_s,
            p_b: r.p_b,
            dy_dt,
            dk_dt,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Trajectory {
    pub points: Vec<TrajectoryPoint>,
    pub stop_reason: StopReason,
    pub method: Method,
    pub step: f64,
}

impl Trajectory {
    /// Year and value of the largest recorded GDP.
    pub fn peak(&self) -> (f64, f64) {
        self.points
            .iter()
            .fold((f64::NAN, f64::NEG_INFINITY), |acc, p| {
                if p.y > acc.1 {
                    (p.t, p.y)
                } else {
                    acc
                }
            })
    }

    /// First recorded time with GDP at or below zero.
    pub fn collapse(&self) -> Option<f64> {
        self.points.iter().find(|p| p.y <= 0.0).map(|p| p.t)
    }

    pub fn at(&self, t: f64) -> Option<&TrajectoryPoint> {
        self.points.iter().find(|p| (p.t - t).abs() < 1e-9)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integration {
    /// Years to integrate.
    pub horizon: f64,
    /// Largest step; each year is split into equal steps no longer than this.
    pub step: f64,
    pub method: Method,
    /// Keep going after GDP turns non-positive.
    pub allow_negative: bool,
}

impl Integration {
    pub fn new(horizon: f64) -> Self {
        Integration {
            horizon,
            step: 0.25,
            method: Method::Rk4,
            allow_negative: false,
        }
    }

    pub fn with_step(self, step: f64) -> Self {
        Integration { step, ..self }
    }

    pub fn with_method(self, method: Method) -> Self {
        Integration { method, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.step > 0.0 && self.step <= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "step must lie in (0, 1], got {}",
                self.step
            )));
        }
        if !(self.horizon > 0.0 && self.horizon.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "horizon must be positive, got {}",
                self.horizon
            )));
        }
        Ok(())
    }

    /// Recording intervals: (start offset in whole years, length, sub-steps, step).
    pub(crate) fn years(&self) -> Vec<(usize, f64, usize, f64)> {
        let whole = self.horizon.floor() as usize;
        let mut out: Vec<_> = (0..whole)
            .map(|y| {
                let (n, h) = ode::substeps(1.0, self.step);
                (y, 1.0, n, h)
            })
            .collect();
        let rest = self.horizon - whole as f64;
        if rest > 1e-12 {
            let (n, h) = ode::substeps(rest, self.step);
            out.push((whole, rest, n, h));
        }
        out
    }
}

/// Fixed-step integration from (Y0, K0), recording at every whole year.
pub fn integrate(params: &ModelParams, run: &Integration) -> Result<Trajectory> {
    params.validate()?;
    run.validate()?;
    let mut state = [params.y0, params.k0];
    let mut points = vec![TrajectoryPoint::new(params, 0.0, state[0], state[1])];
    let mut stop_reason = StopReason::Horizon;

    'years: for (year, len, n, h) in run.years() {
        for k in 0..n {
            let base = year as f64 + k as f64 * h;
            ode::step(run.method, h, &mut state, |off, s, d| {
                let (dy, dk) = Rates::at(params, base + off).derivatives(s[0], s[1]);
                d[0] = dy;
                d[1] = dk;
            });
            if !state.iter().all(|v| v.is_finite()) {
                stop_reason = StopReason::Diverged;
                break 'years;
            }
        }
        let elapsed = year as f64 + len;
        points.push(TrajectoryPoint::new(params, elapsed, state[0], state[1]));
        if state[0] <= 0.0 && !run.allow_negative {
            stop_reason = StopReason::GdpNonpositive;
            break;
        }
    }
    Ok(Trajectory {
        points,
        stop_reason,
        method: run.method,
        step: run.step,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::RateFn;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn frg_default_peak_and_collapse() {
        let tr = integrate(&ModelParams::frg_default(), &Integration::new(85.0)).unwrap();
        let (peak_year, _) = tr.peak();
        assert!((2000.0..=2010.0).contains(&peak_year), "{peak_year}");
        let collapse = tr.collapse().unwrap();
        assert!((2029.0..=2035.0).contains(&collapse), "{collapse}");
        assert_eq!(tr.stop_reason, StopReason::GdpNonpositive);
        assert_eq!(tr.points.last().unwrap().t, collapse);
        assert!(tr.points[..tr.points.len() - 1].iter().all(|p| p.y > 0.0));
    }

    #[test]
    fn zero_net_rate_is_linear_in_time() {
        let p = ModelParams::constant(0.0, 0.1, 1.0, 0.38);
        let tr = integrate(&p, &Integration::new(10.0)).unwrap();
        let last = tr.points.last().unwrap();
        assert_eq!(tr.points.len(), 11);
        assert_relative_eq!(last.y, 1.0, epsilon = 1e-14);
        assert_relative_eq!(last.k, 1.38, epsilon = 1e-13);
        assert_eq!(tr.stop_reason, StopReason::Horizon);
    }

    #[test]
    fn step_halving_converges() {
        let p = ModelParams::frg_default();
        let coarse = integrate(&p, &Integration::new(60.0).with_step(1.0)).unwrap();
        let fine = integrate(&p, &Integration::new(60.0).with_step(0.5)).unwrap();
        let a = coarse.at(2010.0).unwrap().y;
        let b = fine.at(2010.0).unwrap().y;
        assert!(((a - b) / b).abs() < 1e-6, "{a} vs {b}");
    }

    #[test]
    fn bad_settings_rejected() {
        let p = ModelParams::frg_default();
        assert!(integrate(&p, &Integration::new(10.0).with_step(0.0)).is_err());
        assert!(integrate(&p, &Integration::new(10.0).with_step(1.5)).is_err());
        assert!(integrate(&p, &Integration::new(0.0)).is_err());
    }

    #[test]
    fn divergence_is_reported() {
        let p = ModelParams::constant(-400.0, 0.0, 1.0, 1.0);
        let mut run = Integration::new(50.0).with_step(1.0);
        run.allow_negative = true;
        let tr = integrate(&p, &run).unwrap();
        assert_eq!(tr.stop_reason, StopReason::Diverged);
        assert!(tr.points.iter().all(|p| p.y.is_finite()));
    }

    #[test]
    fn allow_negative_runs_to_horizon() {
        let mut run = Integration::new(120.0);
        run.allow_negative = true;
        let tr = integrate(&ModelParams::frg_default(), &run).unwrap();
        assert_eq!(tr.stop_reason, StopReason::Horizon);
        assert_eq!(tr.points.len(), 121);
        assert!(tr.points.iter().any(|p| p.y < 0.0));
    }

    #[test]
    fn fractional_horizon_records_end() {
        let tr = integrate(&ModelParams::frg_default(), &Integration::new(2.5)).unwrap();
        let ts: Vec<f64> = tr.points.iter().map(|p| p.t).collect();
        assert_eq!(ts, vec![1950.0, 1951.0, 1952.0, 1952.5]);
    }

    #[test]
    fn euler_and_rk4_differ_and_converge() {
        let p = ModelParams::frg_default();
        let rk = integrate(&p, &Integration::new(30.0).with_step(0.01)).unwrap();
        let e1 = integrate(&p, &Integration::new(30.0).with_step(0.02).with_method(Method::Euler)).unwrap();
        let e2 = integrate(&p, &Integration::new(30.0).with_step(0.01).with_method(Method::Euler)).unwrap();
        let target = rk.points.last().unwrap().y;
        let err1 = (e1.points.last().unwrap().y - target).abs();
        let err2 = (e2.points.last().unwrap().y - target).abs();
        assert!(err2 < err1);
        assert_relative_eq!(err1 / err2, 2.0, epsilon = 0.05);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn sum_balance_along_trajectory(p_n in -0.2f64..0.2, p_s in 0.01f64..0.3, p_b in 0.0f64..0.02,
                                        a0 in 0.0f64..2.0, b0 in 0.0f64..2.0) {
            let mut p = ModelParams::constant(p_n, p_s, 10.0, 5.0);
            p.p_b = RateFn::Constant(p_b);
            p.a0 = RateFn::Constant(a0);
            p.b0 = RateFn::Constant(b0);
            let mut run = Integration::new(30.0);
            run.allow_negative = true;
            let tr = integrate(&p, &run).unwrap();
            for pt in &tr.points {
                let expected = a0 + b0 + (p_b + p_s) * pt.y;
                let scale = 1.0 + expected.abs() + (p_n * pt.k).abs();
                prop_assert!((pt.dy_dt + pt.dk_dt - expected).abs() <= 1e-10 * scale);
            }
        }

        #[test]
        fn linear_scaling(lambda in 0.1f64..10.0, a0 in 0.0f64..1.0, b0 in 0.0f64..1.0) {
            let mut p = ModelParams::frg_default();
            p.a0 = RateFn::Constant(a0);
            p.b0 = RateFn::Constant(b0);
            let mut run = Integration::new(40.0);
            run.allow_negative = true;
            let base = integrate(&p, &run).unwrap();
            let scaled = integrate(&p.scaled(lambda), &run).unwrap();
            for (a, b) in base.points.iter().zip(&scaled.points) {
                let tol = 1e-9 * (1.0 + (lambda * a.y).abs() + (lambda * a.k).abs());
                prop_assert!((lambda * a.y - b.y).abs() <= tol);
                prop_assert!((lambda * a.k - b.k).abs() <= tol);
            }
        }
    }
}
