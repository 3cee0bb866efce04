use crate::dataset::EconSeries;
use crate::{Error, Result};
use nalgebra::{DMatrix, DVector};
use serde::Serialize;

const TOL: f64 = 1e-10;
const MAX_ITER: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PrelFitMode {
    /// Fit both p_rel0 and T_h.
    Free,
    /// Hold p_rel0 = 1 and fit T_h only.
    Anchored,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PrelFit {
    pub p_rel0: f64,
    pub t_h: f64,
    pub rms: f64,
    pub iterations: usize,
    pub mode: PrelFitMode,
    pub from_year: i32,
    pub to_year: i32,
}

fn sse(t: &[f64], d: &[f64], p0: f64, th: f64) -> f64 {
    t.iter()
        .zip(d)
        .map(|(t, d)| {
            let r = p0 * (-t / th).exp() - d;
            r * r
        })
        .sum()
}

/// Log-linear least squares for `ln d = ln p0 - t/T` (or `-t/T` when anchored).
fn initial_guess(t: &[f64], d: &[f64], mode: PrelFitMode) -> (f64, f64) {
    let pairs: Vec<(f64, f64)> = t
        .iter()
        .zip(d)
        .filter(|(_, d)| **d > 0.0)
        .map(|(t, d)| (*t, d.ln()))
        .collect();
    let n = pairs.len() as f64;
    let (p0, slope) = match mode {
        PrelFitMode::Anchored => {
            let stt: f64 = pairs.iter().map(|(t, _)| t * t).sum();
            let stl: f64 = pairs.iter().map(|(t, l)| t * l).sum();
            (1.0, stl / stt)
        }
        PrelFitMode::Free => {
            let mt = pairs.iter().map(|p| p.0).sum::<f64>() / n;
            let ml = pairs.iter().map(|p| p.1).sum::<f64>() / n;
            let sxy: f64 = pairs.iter().map(|(t, l)| (t - mt) * (l - ml)).sum();
            let sxx: f64 = pairs.iter().map(|(t, _)| (t - mt) * (t - mt)).sum();
            let slope = sxy / sxx;
            ((ml - slope * mt).exp(), slope)
        }
    };
    let span = t.last().copied().unwrap_or(1.0).max(1.0);
    let th = if slope < 0.0 { -1.0 / slope } else { 10.0 * span };
    (p0, th)
}

/// Least-squares fit of `p_rel(t) = p_rel0 exp(-t / T_h)` to the L/K series,
/// t counted from the first year of the series.
pub fn fit_prel_exponential(series: &EconSeries, mode: PrelFitMode) -> Result<PrelFit> {
    if series.records.len() < 10 {
        return Err(Error::InvalidParameter(format!(
            "lending-share fit needs at least 10 years, got {}",
            series.records.len()
        )));
    }
    let first = series.first_year();
    let t: Vec<f64> = series.records.iter().map(|r| (r.year - first) as f64).collect();
    let d: Vec<f64> = series.records.iter().map(|r| r.loans / r.assets).collect();
    let (mut p0, mut th) = initial_guess(&t, &d, mode);
    let mut cost = sse(&t, &d, p0, th);
    let mut last_step = f64::INFINITY;

    for iter in 1..=MAX_ITER {
        // normal equations J^T J δ = -J^T r
        let (mut a11, mut a12, mut a22, mut g1, mut g2) = (0.0, 0.0, 0.0, 0.0, 0.0);
        for (ti, di) in t.iter().zip(&d) {
            let e = (-ti / th).exp();
            let r = p0 * e - di;
            let j1 = e;
            let j2 = p0 * e * ti / (th * th);
            a11 += j1 * j1;
            a12 += j1 * j2;
            a22 += j2 * j2;
            g1 += j1 * r;
            g2 += j2 * r;
        }
        let (dp0, dth) = match mode {
            PrelFitMode::Anchored => (0.0, -g2 / a22),
            PrelFitMode::Free => {
                let det = a11 * a22 - a12 * a12;
                if det.abs() < f64::MIN_POSITIVE {
                    return Err(Error::Degenerate("singular lending-share fit".into()));
                }
                ((-g1 * a22 + g2 * a12) / det, (g1 * a12 - g2 * a11) / det)
            }
        };
        if !(dp0.is_finite() && dth.is_finite()) {
            break;
        }
        let mut lambda = 1.0;
        let mut accepted = false;
        for _ in 0..60 {
            let (np0, nth) = (p0 + lambda * dp0, th + lambda * dth);
            if nth > 0.0 {
                let c = sse(&t, &d, np0, nth);
                if c <= cost {
                    last_step = (lambda * dp0).abs().max((lambda * dth).abs() / (1.0 + th.abs()));
                    p0 = np0;
                    th = nth;
                    cost = c;
                    accepted = true;
                    break;
                }
            }
            lambda *= 0.5;
        }
        let converged = !accepted || (lambda * dp0).abs() <= TOL * (1.0 + p0.abs())
            && (lambda * dth).abs() <= TOL * (1.0 + th.abs());
        if converged {
            return Ok(PrelFit {
                p_rel0: p0,
                t_h: th,
                rms: (cost / t.len() as f64).sqrt(),
                iterations: iter,
                mode,
                from_year: first,
                to_year: series.last_year(),
            });
        }
    }
    Err(Error::NoConvergence {
        iterations: MAX_ITER,
        last_step,
        rms: (cost / t.len() as f64).sqrt(),
    })
}

/// `Y = -a_K K² + b_K K + c_K`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadraticFit {
    pub a_k: f64,
    pub b_k: f64,
    pub c_k: f64,
    pub residual_rms: f64,
    pub n: usize,
    pub from_year: i32,
    pub to_year: i32,
}

impl QuadraticFit {
    pub fn eval(&self, k: f64) -> f64 {
        -self.a_k * k * k + self.b_k * k + self.c_k
    }

    pub fn slope(&self, k: f64) -> f64 {
        -2.0 * self.a_k * k + self.b_k
    }
}

/// Ordinary least squares of GDP on (K², K, 1) over every record of the series.
pub fn fit_quadratic_yk(series: &EconSeries) -> Result<QuadraticFit> {
    let n = series.records.len();
    if n < 3 {
        return Err(Error::InvalidParameter(format!(
            "quadratic fit needs at least 3 points, got {n}"
        )));
    }
    let ks: Vec<f64> = series.records.iter().map(|r| r.assets).collect();
    let ys: Vec<f64> = series.records.iter().map(|r| r.gdp).collect();
    // columns scaled to unit max so the squared term does not swamp the others
    let kmax = ks.iter().fold(0.0f64, |m, k| m.max(k.abs()));
    let x = DMatrix::from_fn(n, 3, |i, j| match j {
        0 => (ks[i] / kmax).powi(2),
        1 => ks[i] / kmax,
        _ => 1.0,
    });
    let y = DVector::from_vec(ys.clone());
    let svd = x.svd(true, true);
    let smax = svd.singular_values.max();
    if svd.singular_values.min() <= 1e-12 * smax {
        return Err(Error::Degenerate(
            "design matrix is rank deficient (capital does not vary enough)".into(),
        ));
    }
    let coef = svd
        .solve(&y, 0.0)
        .map_err(|e| Error::Degenerate(e.to_string()))?;
    let (q, l, c) = (coef[0] / (kmax * kmax), coef[1] / kmax, coef[2]);
    let rss: f64 = ks
        .iter()
        .zip(&ys)
        .map(|(k, y)| {
            let r = y - (q * k * k + l * k + c);
            r * r
        })
        .sum();
    Ok(QuadraticFit {
        a_k: -q,
        b_k: l,
        c_k: c,
        residual_rms: (rss / n as f64).sqrt(),
        n,
        from_year: series.first_year(),
        to_year: series.last_year(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CapitalExtremes {
    /// Roots of the fitted parabola; absent when it never reaches zero.
    pub k_e_low: Option<f64>,
    pub k_e_high: Option<f64>,
    /// Capital at the GDP maximum.
    pub k_max: f64,
    pub y_at_k_max: f64,
}

pub fn capital_extremes(fit: &QuadraticFit) -> Result<CapitalExtremes> {
    let (a, b, c) = (fit.a_k, fit.b_k, fit.c_k);
    if !(a > 0.0) {
        return Err(Error::NoMaximum(a));
    }
    let k_max = b / (2.0 * a);
    let disc = b * b + 4.0 * a * c;
    let (lo, hi) = if disc >= 0.0 {
        let half = disc.sqrt() / (2.0 * a);
        (Some(k_max - half), Some(k_max + half))
    } else {
        (None, None)
    };
    Ok(CapitalExtremes {
        k_e_low: lo,
        k_e_high: hi,
        k_max,
        y_at_k_max: fit.eval(k_max),
    })
}
