//! Numerical toolkit for the face-type (dynamical) elliptic R-matrix of
//! `B_{q,λ}(gl₂)`: theta-function kernels, a shift-operator calculus for
//! `e^{±σ_z ∂}` insertions, the R-matrix in both gauges with its dressings,
//! and a verification suite for the matrix identities they satisfy.

pub mod error;
pub mod params;
pub mod rmatrix;
pub mod shift;
pub mod special;
pub mod verify;

pub use error::{Error, Result};
pub use params::{Cx, Params};
pub use rmatrix::{Gauge, RPoint};
pub use shift::{CMat, DynMatrix, DynScalar, ShiftElement, ShiftMatrix};
pub use verify::{CheckReport, GridSpec, SamplePoint, Status};
