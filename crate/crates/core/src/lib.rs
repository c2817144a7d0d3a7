//! Rosen continued fractions, their natural extension, and the Tong and
//! Borel spectra of the approximation coefficients.

pub mod domain;
pub mod error;
pub mod montecarlo;
pub mod precision;
pub mod quadrature;
pub mod rosen;
pub mod sampling;
pub mod spectrum;

pub use domain::{DomainSpec, Parity};
pub use error::{Error, Result};
pub use precision::Precision;
pub use rosen::{ExtPoint, RosenDigit, RosenExpansion, RosenMap, Sign, TiePolicy};
