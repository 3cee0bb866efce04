//! Fixed-step explicit integrators over flat state slices.
//!
//! The right-hand side receives the stage offset from the start of the step
//! rather than an absolute time, so callers can rebuild each economy's own
//! clock from integer parts and get identical rounding everywhere.

use crate::model::Method;

pub(crate) fn step<F>(method: Method, h: f64, y: &mut [f64], mut f: F)
where
    F: FnMut(f64, &[f64], &mut [f64]),
{
    let n = y.len();
    match method {
        Method::Euler => {
            let mut k1 = vec![0.0; n];
            f(0.0, y, &mut k1);
            for (yi, ki) in y.iter_mut().zip(&k1) {
                *yi += h * ki;
            }
        }
        Method::Rk4 => {
            let half = 0.5 * h;
            let mut k1 = vec![0.0; n];
            let mut k2 = vec![0.0; n];
            let mut k3 = vec![0.0; n];
            let mut k4 = vec![0.0; n];
            let mut tmp = vec![0.0; n];
            f(0.0, y, &mut k1);
            for i in 0..n {
                tmp[i] = y[i] + half * k1[i];
            }
            f(half, &tmp, &mut k2);
            for i in 0..n {
                tmp[i] = y[i] + half * k2[i];
            }
            f(half, &tmp, &mut k3);
            for i in 0..n {
                tmp[i] = y[i] + h * k3[i];
            }
            f(h, &tmp, &mut k4);
            for i in 0..n {
                y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
            }
        }
    }
}

/// Sub-steps for an interval of `len` years so that each step is at most `max_step`.
pub(crate) fn substeps(len: f64, max_step: f64) -> (usize, f64) {
    let n = ((len / max_step) - 1e-9).ceil().max(1.0) as usize;
    (n, len / n as f64)
}
