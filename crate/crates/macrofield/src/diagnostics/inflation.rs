use super::quantity::velocity;
use super::AnnualState;
use crate::{Error, Result};
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum InflationMethod {
    /// `(V/Y)(dK/dt - K (Ḣ/H + V̇/V))` with Ḣ/H = p_w.
    Structural,
    /// `p_w² t + (p_w Y + p_v² K)/(Y + p_v K)` at t = 1 year.
    Core,
    /// `p_w (1 + p_w)`.
    CoreSimplified,
    /// `(p_w + p_v^a)/2`.
    HouseNumber,
    /// The official CPI column.
    DataCpi,
}

impl std::str::FromStr for InflationMethod {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "structural" => InflationMethod::Structural,
            "core" => InflationMethod::Core,
            "core_simplified" => InflationMethod::CoreSimplified,
            "house_number" => InflationMethod::HouseNumber,
            "data_cpi" => InflationMethod::DataCpi,
            _ => {
                return Err(Error::InvalidParameter(format!(
                    "unknown inflation method `{s}`"
                )))
            }
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct InflationOptions {
    /// Fixed average asset rate for the house number; defaults to each year's p_v.
    pub p_va: Option<f64>,
}

pub fn core_inflation(p_w: f64, p_v: f64, y: f64, k: f64) -> f64 {
    p_w * p_w + (p_w * y + p_v * p_v * k) / (y + p_v * k)
}

pub fn core_inflation_simplified(p_w: f64) -> f64 {
    p_w * (1.0 + p_w)
}

pub fn house_number(p_w: f64, p_va: f64) -> f64 {
    0.5 * (p_w + p_va)
}

/// Structural inflation with the velocity-based V and trade growing with GDP.
pub fn structural_inflation(y: f64, k: f64, dk: f64, v: f64, v_rate: f64, p_w: f64) -> f64 {
    v / y * (dk - k * (p_w + v_rate))
}

/// Per-year inflation estimate; absent where inputs are missing or GDP is not positive.
pub fn inflation_series(
    states: &[AnnualState],
    method: InflationMethod,
    opts: &InflationOptions,
) -> Vec<(i32, Option<f64>)> {
    let vel = |s: &AnnualState| -> Option<f64> {
        if s.y <= 0.0 {
            return None;
        }
        s.dk.and_then(|dk| velocity(s.y, s.k, dk, s.p_s, 1.0).ok())
    };
    states
        .iter()
        .enumerate()
        .map(|(i, s)| {
            let value = if s.y <= 0.0 {
                None
            } else {
                match method {
                    InflationMethod::Core => s
                        .p_w()
                        .zip(s.p_v())
                        .map(|(w, v)| core_inflation(w, v, s.y, s.k)),
                    InflationMethod::CoreSimplified => s.p_w().map(core_inflation_simplified),
                    InflationMethod::HouseNumber => s
                        .p_w()
                        .zip(opts.p_va.or(s.p_v()))
                        .map(|(w, a)| house_number(w, a)),
                    InflationMethod::DataCpi => s.cpi,
                    InflationMethod::Structural => {
                        let prev = i.checked_sub(1).map(|j| &states[j]);
                        let v_now = vel(s);
                        let v_prev = prev.and_then(vel);
                        match (v_now, v_prev, s.dk, s.p_w()) {
                            (Some(v), Some(vp), Some(dk), Some(w)) if vp.abs() > crate::EPS_DIV => {
                                Some(structural_inflation(s.y, s.k, dk, v, (v - vp) / vp, w))
                            }
                            _ => None,
                        }
                    }
                }
            };
            (s.year, value)
        })
        .collect()
}

/// First and second derivatives needed for the analytic price derivative.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PriceDerivatives {
    pub y: f64,
    pub dy: f64,
    pub d2y: f64,
    pub dk: f64,
    pub d2k: f64,
    pub p_s: f64,
    pub dp_s: f64,
}

/// Relative price `Y ((1 - p_s) Y + (1 + p_s) dK/dt) / (H0 exp(p_w t))`.
pub fn relative_price(t: f64, y: f64, dk: f64, p_s: f64, p_w: f64, h0: f64) -> f64 {
    y * ((1.0 - p_s) * y + (1.0 + p_s) * dk) / (h0 * (p_w * t).exp())
}

/// Coefficients (a, b) with `Ṗ = exp(-p_w t) / (H0 Y) (a t + b)` for the
/// relative price when p_w = Ẏ/Y varies in time.
pub fn price_derivative_coefficients(d: &PriceDerivatives) -> (f64, f64) {
    let q = (1.0 - d.p_s) * d.y + (1.0 + d.p_s) * d.dk;
    let dq = (1.0 - d.p_s) * d.dy + (1.0 + d.p_s) * d.d2k + d.dp_s * (d.dk - d.y);
    let a = (d.dy * d.dy - d.y * d.d2y) * q;
    let b = d.y * d.y * dq;
    (a, b)
}

/// Time derivative of [`relative_price`].
pub fn price_derivative(t: f64, d: &PriceDerivatives, h0: f64) -> f64 {
    let (a, b) = price_derivative_coefficients(d);
    let p_w = d.dy / d.y;
    (-p_w * t).exp() / (h0 * d.y) * (a * t + b)
}

/// Change in trade volume after the critical time, `Y / (Ṗ t')`.
pub fn crisis_trade_volume(y: f64, p_dot: f64, t_since_critical: f64) -> Result<f64> {
    if t_since_critical == 0.0 {
        return Err(Error::Pole("trade volume is singular at the critical time".into()));
    }
    if p_dot == 0.0 {
        return Err(Error::Pole("trade volume is singular for a constant price".into()));
    }
    Ok(y / p_dot / t_since_critical)
}

/// Year of maximum GDP, taken as the critical time.
pub fn critical_year(states: &[AnnualState]) -> Option<i32> {
    states
        .iter()
        .filter(|s| s.y.is_finite())
        .fold(None::<&AnnualState>, |best, s| match best {
            Some(b) if b.y >= s.y => Some(b),
            _ => Some(s),
        })
        .map(|s| s.year)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::frg_dataset;
    use crate::diagnostics::annual_from_series;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn closed_form_examples() {
        assert_relative_eq!(core_inflation_simplified(0.05), 0.0525, epsilon = 1e-15);
        assert_relative_eq!(house_number(0.03, 0.05), 0.04, epsilon = 1e-15);
        // zero capital growth reduces the full core form to the simplified one
        assert_relative_eq!(core_inflation(0.05, 0.0, 10.0, 30.0), 0.0525, epsilon = 1e-15);
    }

    #[test]
    fn series_methods_on_frg() {
        let s = annual_from_series(&frg_dataset());
        let opts = InflationOptions::default();
        let core = inflation_series(&s, InflationMethod::Core, &opts);
        assert_eq!(core[0].1, None);
        let r = s[10];
        let expected = core_inflation(r.p_w().unwrap(), r.p_v().unwrap(), r.y, r.k);
        assert_eq!(core[10], (1960, Some(expected)));
        let cpi = inflation_series(&s, InflationMethod::DataCpi, &opts);
        assert_eq!(cpi[0], (1950, Some(-0.064)));
        let st = inflation_series(&s, InflationMethod::Structural, &opts);
        assert_eq!(st[0].1, None);
        assert_eq!(st[1].1, None);
        assert!(st[2].1.is_some());
        let fixed = InflationOptions { p_va: Some(0.05) };
        let hn = inflation_series(&s, InflationMethod::HouseNumber, &fixed);
        assert_relative_eq!(hn[10].1.unwrap(), 0.5 * (r.p_w().unwrap() + 0.05), epsilon = 1e-15);
    }

    #[test]
    fn non_positive_gdp_is_undefined() {
        let mut s = annual_from_series(&frg_dataset());
        s[5].y = -1.0;
        for m in [InflationMethod::Core, InflationMethod::Structural, InflationMethod::HouseNumber] {
            assert_eq!(inflation_series(&s, m, &InflationOptions::default())[5].1, None);
        }
    }

    #[test]
    fn analytic_price_derivative_matches_finite_difference() {
        // smooth synthetic paths
        let y = |t: f64| 100.0 * (0.03 * t).exp() * (1.0 + 0.1 * t.sin());
        let k = |t: f64| 50.0 + 30.0 * t + t * t + 5.0 * (0.5 * t).cos();
        let p_s = |t: f64| 0.1 + 0.01 * t;
        let d = |f: &dyn Fn(f64) -> f64, t: f64| {
            let h = 1e-4;
            (f(t + h) - f(t - h)) / (2.0 * h)
        };
        let d2 = |f: &dyn Fn(f64) -> f64, t: f64| {
            let h = 1e-3;
            (f(t + h) - 2.0 * f(t) + f(t - h)) / (h * h)
        };
        let h0 = 27.0;
        let price = |t: f64| {
            let dy = d(&y, t);
            relative_price(t, y(t), d(&k, t), p_s(t), dy / y(t), h0)
        };
        for t in [0.5, 2.0, 5.0, 9.0] {
            let pd = PriceDerivatives {
                y: y(t),
                dy: d(&y, t),
                d2y: d2(&y, t),
                dk: d(&k, t),
                d2k: d2(&k, t),
                p_s: p_s(t),
                dp_s: 0.01,
            };
            let analytic = price_derivative(t, &pd, h0);
            let h = 1e-3;
            let numeric = (price(t + h) - price(t - h)) / (2.0 * h);
            assert_relative_eq!(analytic, numeric, max_relative = 1e-5);
        }
    }

    #[test]
    fn trade_volume() {
        assert_eq!(crisis_trade_volume(100.0, 1.0, 10.0).unwrap(), 10.0);
        assert!(crisis_trade_volume(100.0, -1.0, 10.0).unwrap() < 0.0);
        assert!(crisis_trade_volume(100.0, 1.0, 1e12).unwrap() < 1e-9);
        assert!(matches!(crisis_trade_volume(100.0, 1.0, 0.0), Err(Error::Pole(_))));
    }

    #[test]
    fn critical_year_is_gdp_peak() {
        let s = annual_from_series(&frg_dataset());
        assert_eq!(critical_year(&s), Some(2012));
        assert_eq!(critical_year(&[]), None);
    }

    proptest! {
        #[test]
        fn simplified_core_exceeds_gdp_growth(p_w in 1e-6f64..1.0) {
            prop_assert!(core_inflation_simplified(p_w) >= p_w);
        }
    }
}
