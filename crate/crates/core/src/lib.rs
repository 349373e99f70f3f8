//! Substitutions on compact alphabets.
//!
//! Constant-length group substitutions, spin substitutions and a
//! non-constant-length substitution on `ℕ₀ ∪ {∞}`, together with
//! autocorrelation coefficients, per-character spectral classification,
//! diffraction estimates and the geometry of the associated Delone set.

pub mod alphabet;
pub mod autocorrelation;
pub mod builtins;
pub mod classifier;
pub mod diffraction;
pub mod error;
pub mod geometry;
pub mod selftest;
pub mod substitution;
