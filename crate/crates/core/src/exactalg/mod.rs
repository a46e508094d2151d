//! Exact arithmetic: arbitrary-precision rationals, canonical multivariate
//! polynomials, rational functions, and truncated power series.

mod poly;
mod rf;
mod series;

pub use poly::{Monomial, Polynomial, Variable};
pub use rf::{rf_var_product, RationalFunction};
pub use series::TruncatedSeries;
