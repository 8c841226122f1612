//! Schauder-basis diagnostics in finite dimensions.
//!
//! - [`numerics`]: dense complex matrices, operator norms, left inverses.
//! - [`schauder`]: natural projections, basis constants, angle bounds.
//! - [`diophantine`]: simultaneous rational approximation.
//! - [`measure`]: discrete measures on the circle, moments, monomial systems.
//! - [`shiftrep`]: multiplication by `z` as a shift on a cyclic basis.

pub mod diophantine;
pub mod error;
pub mod measure;
pub mod numerics;
pub mod schauder;
pub mod shiftrep;

pub use error::{Error, Result};
pub use measure::DiscreteMeasure;
pub use num_complex::Complex64;
pub use numerics::ComplexMatrix;
pub use schauder::SchauderSystem;
