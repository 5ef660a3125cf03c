//! Tolerances shared by every classifier.
//!
//! All thresholds live in [`Tolerances`] so each verdict can be traced to a
//! single numeric source.

use serde::Serialize;

/// Numeric thresholds used throughout the crate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Tolerances {
    /// Maximum `|a - a*|` entry accepted as Hermitian.
    pub hermitian: f64,
    /// A spectrum is treated as positive when its minimum is `>= positivity`.
    pub positivity: f64,
    /// Absolute tolerance for exact-equality boundary cases (`λ3 = ±1/2`).
    pub boundary: f64,
    /// Oracle violation threshold: a defect eigenvalue below `-oracle` is a witness.
    pub oracle: f64,
}

impl Tolerances {
    pub const DEFAULT: Tolerances = Tolerances {
        hermitian: 1e-10,
        positivity: -1e-9,
        boundary: 1e-12,
        oracle: 1e-8,
    };
}

impl Default for Tolerances {
    fn default() -> Self {
        Self::DEFAULT
    }
}
