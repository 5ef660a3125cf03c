//! Closed-form classifiers for positivity, the Kadison-Schwarz (KS) property
//! and complete positivity (CP), plus the [`classify_full`] dispatcher.
//!
//! A [`TriState`] distinguishes exact verdicts from ones that rest on a
//! sufficient condition or on sampling: a violated sufficient condition is
//! [`Status::Inconclusive`], never [`Status::Fails`].

mod qubit;
mod tensor;

pub use qubit::{
    cp_phi_exact, ks_channel_terms, ks_cyclic_forms, ks_determinant_form, ks_phi_diag_exact,
    ks_phi_diag_sufficient, ks_phi_general, ks_phi_scalar_interval, DiagKsTerms,
};
pub use tensor::{
    cp_tensor_diag_exact, cp_tlm_exact, fibonacci_sphere, ks_tensor_diag_sufficient, ks_tensor_sufficient,
    ks_tlm_sufficient, operator_norm, positive_tensor, sphere_maximum, tensor_ks_cyclic_forms,
    tensor_ks_determinant_form, tensor_ks_terms, tlm_choi_spectrum, tlm_ks_form, TensorKsTerms,
};

use serde::Serialize;

use crate::channels::{FamilyDescriptor, MatrixMap, QubitChannel, TensorMap};
use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::linalg::{min_eigenvalue, ComplexMatrix};
use crate::oracle::{self, SampleConfig, Witness};
use crate::pauli::{PauliElement, C3};

pub(crate) const BOUNDARY_TOL: f64 = Tolerances::DEFAULT.boundary;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Status {
    HoldsExact,
    HoldsSufficient,
    Fails,
    Inconclusive,
}

impl Status {
    pub fn holds(self) -> bool {
        matches!(self, Status::HoldsExact | Status::HoldsSufficient)
    }

    pub fn label(self) -> &'static str {
        match self {
            Status::HoldsExact => "holds (exact)",
            Status::HoldsSufficient => "holds (sufficient)",
            Status::Fails => "fails",
            Status::Inconclusive => "inconclusive",
        }
    }
}

/// What backs a verdict.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Evidence {
    /// An input with the most negative eigenvalue of the relevant defect.
    Element { x: PauliElement, value: f64 },
    /// A real unit vector and the objective attained there.
    Direction { w: [f64; 3], value: f64 },
    /// A complex direction where the sampled inequality `lhs ≤ rhs` fails.
    ComplexDirection { w: C3, lhs: f64, rhs: f64 },
    /// A named inequality `lhs ≤ rhs` that fails, optionally with the input realizing it.
    Inequality {
        id: String,
        lhs: f64,
        rhs: f64,
        element: Option<PauliElement>,
        value: Option<f64>,
    },
    MinEigenvalue { value: f64 },
}

impl From<Witness> for Evidence {
    fn from(w: Witness) -> Self {
        Evidence::Element {
            x: w.x,
            value: w.violation,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TriState {
    pub status: Status,
    pub witness: Option<Evidence>,
    pub note: String,
}

impl TriState {
    pub fn holds_exact(note: impl Into<String>) -> Self {
        TriState {
            status: Status::HoldsExact,
            witness: None,
            note: note.into(),
        }
    }

    pub fn holds_sufficient(note: impl Into<String>) -> Self {
        TriState {
            status: Status::HoldsSufficient,
            witness: None,
            note: note.into(),
        }
    }

    /// A failure always names its evidence.
    pub fn fails(witness: Evidence, note: impl Into<String>) -> Self {
        TriState {
            status: Status::Fails,
            witness: Some(witness),
            note: note.into(),
        }
    }

    pub fn inconclusive(witness: Option<Evidence>, note: impl Into<String>) -> Self {
        TriState {
            status: Status::Inconclusive,
            witness,
            note: note.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Verdict {
    pub positive: TriState,
    pub kadison_schwarz: TriState,
    pub completely_positive: TriState,
}

/// Choi criterion: CP iff the Choi matrix has no eigenvalue below `-tol`.
pub fn cp_choi_numeric(choi: &ComplexMatrix, tol: f64) -> Result<TriState> {
    let m = min_eigenvalue(choi, Tolerances::DEFAULT.hermitian)?;
    Ok(if m >= -tol {
        TriState::holds_exact("Choi matrix positive semidefinite")
    } else {
        TriState::fails(Evidence::MinEigenvalue { value: m }, "negative Choi eigenvalue")
    })
}

/// Settings for [`classify_full`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ClassifyConfig {
    pub tolerances: Tolerances,
    /// Sample budget for sampled checks and oracle fallbacks.
    pub samples: usize,
    pub seed: u64,
    /// Lattice size for the sphere maximization in tensor positivity.
    pub sphere_grid: usize,
}

impl Default for ClassifyConfig {
    fn default() -> Self {
        ClassifyConfig {
            tolerances: Tolerances::DEFAULT,
            samples: 10_000,
            seed: oracle::DEFAULT_SEED,
            sphere_grid: 512,
        }
    }
}

impl ClassifyConfig {
    fn sample_config(&self) -> Result<SampleConfig> {
        SampleConfig::new(self.samples, self.seed, self.tolerances.oracle)
    }
}

/// Classifies a family descriptor such as `phi:0.6,0.5,0` at every level.
pub fn classify_full(descriptor: &str, cfg: &ClassifyConfig) -> Result<Verdict> {
    let family: FamilyDescriptor = descriptor.parse()?;
    classify_family(&family, cfg)
}

pub fn classify_family(family: &FamilyDescriptor, cfg: &ClassifyConfig) -> Result<Verdict> {
    let positivity_tol = -cfg.tolerances.positivity;
    let (positive, ks, cp, map): (TriState, TriState, TriState, Box<dyn MatrixMap>) = match family {
        FamilyDescriptor::Phi(p) => (
            TriState::holds_exact("|λk| ≤ 1 keeps the Bloch ball inside itself"),
            ks_phi_diag_exact(p),
            cp_phi_exact(p),
            Box::new(QubitChannel::diagonal(p)),
        ),
        FamilyDescriptor::TensorDiagonal(p) => {
            let m = TensorMap::diagonal(p);
            (positive_tensor(&m, cfg.sphere_grid)?, ks_tensor_diag_sufficient(p), cp_tensor_diag_exact(p), Box::new(m))
        }
        FamilyDescriptor::ScalarPair(p) => {
            let m = TensorMap::scalar_pair(p);
            (positive_tensor(&m, cfg.sphere_grid)?, ks_tlm_sufficient(p), cp_tlm_exact(p), Box::new(m))
        }
        FamilyDescriptor::TensorMatrix(m) => (
            positive_tensor(m, cfg.sphere_grid)?,
            ks_tensor_sufficient(m, cfg.samples, cfg.seed),
            cp_choi_numeric(&m.choi_matrix(), positivity_tol)?,
            Box::new(*m),
        ),
    };
    let verdict = Verdict {
        positive,
        kadison_schwarz: ks,
        completely_positive: cp,
    };
    resolve(verdict, map.as_ref(), cfg)
}

/// Fills inconclusive KS verdicts from CP or the oracle and checks the chain CP ⊂ KS ⊂ positive.
fn resolve(mut v: Verdict, map: &dyn MatrixMap, cfg: &ClassifyConfig) -> Result<Verdict> {
    if v.kadison_schwarz.status == Status::Inconclusive {
        v.kadison_schwarz = if v.completely_positive.status == Status::HoldsExact {
            TriState::holds_exact("implied by complete positivity")
        } else if v.positive.status == Status::Fails {
            TriState::fails(
                v.positive.witness.clone().expect("failures carry evidence"),
                "implied by failure of positivity",
            )
        } else {
            match oracle::ks_violation_search(map, &cfg.sample_config()?)? {
                Some(w) => TriState::fails(w.into(), "sampled KS defect has a negative eigenvalue"),
                None => TriState::holds_sufficient(format!(
                    "no KS violation in {} oracle samples",
                    cfg.samples
                )),
            }
        };
    }
    check_hierarchy(&v)?;
    Ok(v)
}

fn check_hierarchy(v: &Verdict) -> Result<()> {
    let (p, ks, cp) = (v.positive.status, v.kadison_schwarz.status, v.completely_positive.status);
    if cp == Status::HoldsExact && ks == Status::Fails {
        return Err(Error::Numeric(format!(
            "inconsistent verdict: CP holds exactly but KS fails ({})",
            v.kadison_schwarz.note
        )));
    }
    if ks.holds() && p == Status::Fails {
        return Err(Error::Numeric(format!(
            "inconsistent verdict: KS holds but positivity fails ({})",
            v.positive.note
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::{choi_matrix_qubit, DiagonalParams};

    fn classify(d: &str) -> Verdict {
        classify_full(d, &ClassifyConfig::default()).unwrap()
    }

    #[test]
    fn identity_channel() {
        let v = classify("phi:1,1,1");
        assert_eq!(v.positive.status, Status::HoldsExact);
        assert_eq!(v.kadison_schwarz.status, Status::HoldsExact);
        assert_eq!(v.completely_positive.status, Status::HoldsExact);
    }

    #[test]
    fn transpose_map() {
        let v = classify("phi:1,-1,1");
        assert_eq!(v.positive.status, Status::HoldsExact);
        assert_eq!(v.kadison_schwarz.status, Status::Fails);
        assert_eq!(v.completely_positive.status, Status::Fails);
    }

    #[test]
    fn scalar_pair_boundary() {
        let v = classify("tlm:0.5,0.5");
        assert_eq!(v.kadison_schwarz.status, Status::HoldsSufficient);
        assert_eq!(v.completely_positive.status, Status::HoldsExact);
    }

    #[test]
    fn inconclusive_ks_resolved() {
        // outside the sufficient region but CP: upgraded
        let v = classify("tdiag:-0.4,-0.4,0.2");
        assert_eq!(v.completely_positive.status, Status::HoldsExact);
        assert_eq!(v.kadison_schwarz.status, Status::HoldsExact);
        assert_eq!(v.kadison_schwarz.note, "implied by complete positivity");

        // outside the sufficient region and not positive
        let v = classify("tlm:1,1");
        assert_eq!(v.positive.status, Status::Fails);
        assert_eq!(v.kadison_schwarz.status, Status::Fails);

        // positive, not CP, sufficient test silent: the oracle decides
        let v = classify("tlm:0.5,-0.3");
        assert_eq!(v.positive.status, Status::HoldsExact);
        assert_ne!(v.kadison_schwarz.status, Status::Inconclusive);
    }

    #[test]
    fn general_tensor_matrix() {
        let d = "tmat:0.1,0,0,0,0.2,0,0,0,0.1,0.2,0,0,0,0.1,0,0,0,0.3";
        let v = classify(d);
        assert_eq!(v.positive.status, Status::HoldsSufficient);
        assert_eq!(v.kadison_schwarz.status, Status::HoldsSufficient);
        assert_eq!(v.completely_positive.status, Status::HoldsExact);
    }

    #[test]
    fn unparseable_descriptor() {
        assert!(matches!(
            classify_full("phi:2,0,0", &ClassifyConfig::default()),
            Err(Error::Parse(_))
        ));
    }

    #[test]
    fn choi_numeric_cases() {
        let half = ComplexMatrix::identity(8).scale_real(0.5);
        assert_eq!(cp_choi_numeric(&half, 1e-9).unwrap().status, Status::HoldsExact);
        let tr = QubitChannel::diagonal(&DiagonalParams::new(1.0, -1.0, 1.0).unwrap());
        let v = cp_choi_numeric(&choi_matrix_qubit(&tr), 1e-9).unwrap();
        assert_eq!(v.status, Status::Fails);
        let Some(Evidence::MinEigenvalue { value }) = v.witness else { panic!() };
        assert!((value + 1.0).abs() < 1e-12);
        let mut bad = ComplexMatrix::identity(2);
        bad[(0, 1)] = num_complex::Complex64::new(1.0, 0.0);
        assert!(matches!(cp_choi_numeric(&bad, 1e-9), Err(Error::Usage(_))));
    }
}
