//! Point-to-currency chaining, the lending-share exponential fit, the Y(K)
//! regression and a weighted CPI basket evaluator.

mod basket;
mod chain;
mod fit;

pub use basket::{basket_inflation, basket_price};
pub use chain::{apply_chain, chain_correction, chain_correction_between, ChainCorrection};
pub use fit::{
    capital_extremes, fit_prel_exponential, fit_quadratic_yk, CapitalExtremes, PrelFit,
    PrelFitMode, QuadraticFit,
};
