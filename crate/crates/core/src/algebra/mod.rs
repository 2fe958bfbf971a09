//! Laurent polynomials over the complex numbers, univariate root extraction,
//! and the exact (big-rational) series arithmetic behind every asymptotic
//! oracle in the crate.

mod laurent;
mod oracle;
mod series;
mod univariate;

pub use laurent::{ExponentVector, FiberPolynomial, LaurentPolynomial};
pub use oracle::laurent_oracle;
pub use series::{RationalPoly, TruncatedSeries};
pub use univariate::UnivariateComplexPolynomial;
