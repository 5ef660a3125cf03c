//! Positivity, Kadison-Schwarz and complete-positivity analysis of unital
//! trace-preserving maps on `M2(C)` and into `M2(C) ⊗ M2(C)`.
//!
//! Maps are written in the Pauli basis: a qubit channel is a real 3×3 matrix
//! `T` acting on the Bloch part of `w0·1 + w·σ`, and a tensor map is a pair
//! `(A, C)` producing `w0·1⊗1 + Aw·σ⊗1 + 1⊗Cw·σ`. Closed-form classifiers in
//! [`classify`] are cross-checked by definition-level searches in [`oracle`].
//!
//! ```
//! use ksq::classify::{classify_full, Status};
//!
//! let v = classify_full("phi:0.6,0.5,0", &Default::default()).unwrap();
//! assert_eq!(v.kadison_schwarz.status, Status::HoldsExact);
//! assert_eq!(v.completely_positive.status, Status::Fails);
//! ```

pub mod channels;
pub mod classify;
pub mod cli;
pub mod config;
pub mod error;
pub mod linalg;
pub mod oracle;
pub mod pauli;

pub use config::Tolerances;
pub use error::{Error, Result};
pub use linalg::ComplexMatrix;
pub use pauli::PauliElement;
