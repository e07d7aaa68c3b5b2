//! Numerical certification of curvature-pinching conditions for isometric
//! immersions into space forms.
//!
//! Everything here is pointwise: the library takes second-fundamental-form
//! data at a point (supplied directly or extracted from an immersion chart
//! by finite differences), forms the induced curvature tensor through the
//! Gauss equation, and certifies with explicit margins whether the point
//! satisfies the pinching condition `K_min >= b(n, H, c)` and the
//! consequences that follow from it: the partial-trace curvature bounds
//! used in stable-current arguments, nonnegativity of the isotropic
//! curvature in dimension four, and the spectral structure of the
//! Bochner-Weitzenboeck operator on 2-forms, including its rigid
//! equality case.
//!
//! Margins are signed (`value - bound`), searches are deterministic given a
//! seed, and every optimizer is shadowed by an independent random-sampling
//! oracle so that a silent search failure shows up as a dominance-invariant
//! violation instead of a wrong certificate.

pub mod curvature;
pub mod error;
pub mod fourdim;
pub mod harness;
pub mod immersion;
pub mod linalg;
pub mod report;
pub mod runner;
pub mod search;

pub use error::{PinchError, Result};

/// Version string embedded in every report.
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");
