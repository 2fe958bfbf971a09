//! Geometry and thermodynamics of complex hypersurfaces in logarithmic scale.
//!
//! The library computes amoebas of Laurent polynomials (the image of the zero
//! set under coordinatewise log-modulus), the order function labelling the
//! complement components, the amoeba contour via the logarithmic Gauss map,
//! saddle-point asymptotics of diagonal Laurent coefficients of rational
//! functions, and the multidimensional Darwin–Fowler description of quantum
//! thermodynamic ensembles over vector-valued energy spectra: most-probable
//! and average occupation numbers, entropy, temperature vectors, and the
//! admissible domain of mean energies.
//!
//! Floating point is confined to the analytic modules ([`amoeba`], [`gauss`],
//! [`asymptotics`], the solver half of [`ensemble`]); every combinatorial or
//! counting claim ([`polytope`], the exact oracles in [`algebra`] and
//! [`ensemble`]) is carried out in arbitrary-precision rational arithmetic.

pub mod algebra;
pub mod amoeba;
pub mod asymptotics;
pub mod ensemble;
pub mod error;
pub mod gauss;
pub mod numeric;
pub mod polytope;

pub use error::{Error, Result};
