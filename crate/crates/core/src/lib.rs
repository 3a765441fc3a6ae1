//! Exact autocorrelation functions of the regular tetrahedron and
//! octahedron, checked against analytic constraints and a Monte-Carlo
//! covariogram estimator, and turned into small-angle scattering
//! intensities, Porod plots and size-averaged intensities.

pub mod calculus;
pub mod cf;
pub mod error;
pub mod geometry;
pub mod mc;
pub mod quadrature;
pub mod scattering;

pub use cf::{cf_for, cf_octahedron, cf_sphere, cf_tetrahedron, PiecewiseCf};
pub use error::{Error, Result};
pub use geometry::{solid_metrics, SolidKind, SolidSpec};
pub use mc::{CurvePoint, McConfig, McEstimate};
