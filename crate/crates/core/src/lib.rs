//! Numerical atlas of the Riemann zeta function.
//!
//! - [`eval`]: ζ, ζ′, Γ, the Laurent expansion about s = 1 and the
//!   functional-equation reflection, each with an error estimate.
//! - [`trace`]: predictor–corrector continuation of the pre-images of the
//!   real axis and of circles |z| = r.
//! - [`zeros`]: zero location, argument-principle counting, local order.
//! - [`strips`]: strip assembly between consecutive Γ′ curves and the
//!   m-type census.
//! - [`pipeline`] / [`export`]: deterministic batch runs and file output.

pub mod eval;
pub mod trace;
pub mod export;
pub mod pipeline;
pub mod strips;
pub mod zeros;

pub use num_complex::Complex64;
