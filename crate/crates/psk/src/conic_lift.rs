//! Exact exterior calculus on the conic total space `M × ℝ⁺ × S¹` of a Lie
//! group base: lifted unitary coframe, Levi-Civita connection, lifted
//! deviance, flatness of `∇ = ∇^LC + η̃`, and the defining identities of a
//! conic special Kähler structure.
//!
//! Coefficients live in the Laurent–Fourier ring `ℚ(√·)[i][r^{±1}, e^{±iϑ}]`,
//! so every identity is checked as an exact zero.

pub mod exact;
mod lift;
pub mod ring;

pub use exact::{Exact, Surd};
pub use lift::{Coeff, ConicLift, ExactBase, FlatReport, InvariantReport, LiftedForm, LiftedMatrix, RingResidual};
pub use ring::RingElem;
