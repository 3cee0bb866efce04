use crate::{Error, Result};

/// Basket price `Σ_j h_j a_j P_j` with purchase frequencies `h`, quantities `a` and unit prices `p`.
pub fn basket_price(h: &[f64], a: &[f64], p: &[f64]) -> Result<f64> {
    if h.len() != p.len() {
        return Err(Error::Dimension { expected: p.len(), got: h.len() });
    }
    if a.len() != p.len() {
        return Err(Error::Dimension { expected: p.len(), got: a.len() });
    }
    Ok(h.iter().zip(a).zip(p).map(|((h, a), p)| h * a * p).sum())
}

/// Relative forward change of a basket price series; absent in the last year
/// and where the price is zero.
pub fn basket_inflation(prices: &[(i32, f64)]) -> Vec<(i32, Option<f64>)> {
    prices
        .iter()
        .enumerate()
        .map(|(i, &(year, p))| {
            let next = prices.get(i + 1).map(|&(_, q)| q);
            let rate = next.filter(|_| p.abs() >= crate::EPS_DIV).map(|q| (q - p) / p);
            (year, rate)
        })
        .collect()
}
