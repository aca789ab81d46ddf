//! Left-invariant Kähler geometry on Lie algebras given by structure constants:
//! Levi-Civita connections and curvature, symmetric cubic deviance tensors,
//! verification of projective special Kähler structures, the 4-dimensional
//! classification, and exact conic lifts.
//!
//! Scalar curvature follows a dimension-normalized convention throughout:
//! `scal = tr(Ric) / dim`, so complex projective space `ℙ^n` has
//! `scal = 2(n+1)`. Multiply by `dim` for the usual scalar curvature.

pub mod classify4d;
pub mod conic_lift;
pub mod deviance;
pub mod error;
pub mod format;
pub mod lie_kahler;
pub mod psk_verify;
pub mod tensor_core;

pub use error::{PskError, Result};

/// Default residual tolerance for floating point checks.
pub const TOLERANCE: f64 = 1e-9;
