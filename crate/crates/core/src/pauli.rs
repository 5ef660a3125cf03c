//! Pauli coefficient algebra on `M2(C)` and on the simple tensors of `M2(C) ⊗ M2(C)`.
//!
//! An element is `x = w0·1 + w·σ` with `w0 ∈ C`, `w ∈ C³`. Products, adjoints
//! and positivity can then be read off the coefficients directly.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{self, ComplexMatrix};

/// A triple of complex coefficients.
pub type C3 = [Complex64; 3];

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// The Pauli matrix `σk` for `k ∈ {1, 2, 3}`; `k = 0` is the identity.
pub fn sigma(k: usize) -> ComplexMatrix {
    let rows = match k {
        0 => [[ONE, ZERO], [ZERO, ONE]],
        1 => [[ZERO, ONE], [ONE, ZERO]],
        2 => [[ZERO, -I], [I, ZERO]],
        3 => [[ONE, ZERO], [ZERO, -ONE]],
        _ => panic!("Pauli index {k} out of range"),
    };
    ComplexMatrix::from_rows(&rows).expect("Pauli matrices are well formed")
}

/// `Σ vk σk` as a 2×2 matrix.
pub fn dot_sigma(v: &C3) -> ComplexMatrix {
    ComplexMatrix::from_rows(&[
        [v[2], v[0] - I * v[1]],
        [v[0] + I * v[1], -v[2]],
    ])
    .expect("finite coefficients")
}

pub fn real3(v: [f64; 3]) -> C3 {
    v.map(|x| Complex64::new(x, 0.0))
}

pub fn conj3(v: &C3) -> C3 {
    v.map(|z| z.conj())
}

/// `√(|v1|² + |v2|² + |v3|²)`.
pub fn norm3(v: &C3) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// `⟨a, b⟩ = Σ ak·conj(bk)`.
pub fn inner3(a: &C3, b: &C3) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x * y.conj()).sum()
}

pub fn add3(a: &C3, b: &C3) -> C3 {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

pub fn sub3(a: &C3, b: &C3) -> C3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

pub fn scale3(c: Complex64, v: &C3) -> C3 {
    v.map(|z| c * z)
}

/// The bracket `[u, v]`: the complex-bilinear cross product `u × v`.
///
/// With this convention `(u·σ)(v·σ) - (v·σ)(u·σ) = 2i [u, v]·σ`.
pub fn bracket(u: &C3, v: &C3) -> C3 {
    [
        u[1] * v[2] - u[2] * v[1],
        u[2] * v[0] - u[0] * v[2],
        u[0] * v[1] - u[1] * v[0],
    ]
}

/// Applies a real 3×3 matrix to a complex triple.
pub fn apply_real3(m: &[[f64; 3]; 3], v: &C3) -> C3 {
    let mut out = [ZERO; 3];
    for (i, row) in m.iter().enumerate() {
        out[i] = row.iter().zip(v).map(|(a, z)| z * *a).sum();
    }
    out
}

/// `x = w0·1 + w·σ` in `M2(C)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PauliElement {
    pub w0: Complex64,
    pub w: C3,
}

impl PauliElement {
    pub fn new(w0: Complex64, w: C3) -> Self {
        PauliElement { w0, w }
    }

    pub fn real(w0: f64, w: [f64; 3]) -> Self {
        PauliElement {
            w0: Complex64::new(w0, 0.0),
            w: real3(w),
        }
    }

    pub fn identity() -> Self {
        Self::real(1.0, [0.0; 3])
    }

    /// Largest imaginary part among the coefficients; zero iff self-adjoint.
    pub fn self_adjoint_defect(&self) -> f64 {
        self.w
            .iter()
            .map(|z| z.im.abs())
            .fold(self.w0.im.abs(), f64::max)
    }

    pub fn is_self_adjoint(&self, tol: f64) -> bool {
        self.self_adjoint_defect() <= tol
    }

    pub fn adjoint(&self) -> Self {
        PauliElement {
            w0: self.w0.conj(),
            w: conj3(&self.w),
        }
    }

    pub fn scale(&self, c: Complex64) -> Self {
        PauliElement {
            w0: c * self.w0,
            w: scale3(c, &self.w),
        }
    }

    pub fn to_matrix(&self) -> ComplexMatrix {
        let mut m = dot_sigma(&self.w);
        m[(0, 0)] += self.w0;
        m[(1, 1)] += self.w0;
        m
    }

    /// Inverse basis expansion: `w0 = tr(m)/2`, `wk = tr(σk m)/2`.
    pub fn from_matrix(m: &ComplexMatrix) -> Result<Self> {
        if m.dim() != 2 {
            return Err(Error::usage(format!(
                "expected a 2x2 matrix, got {0}x{0}",
                m.dim()
            )));
        }
        let (a, b, c, d) = (m[(0, 0)], m[(0, 1)], m[(1, 0)], m[(1, 1)]);
        Ok(PauliElement {
            w0: (a + d) * 0.5,
            w: [(b + c) * 0.5, (b - c) * I * 0.5, (a - d) * 0.5],
        })
    }

    /// Coefficients of `x* x = (|w0|² + ‖w‖²)·1 + (w0 w̄ + w̄0 w - i[w, w̄])·σ`.
    pub fn star_square(&self) -> Self {
        let wbar = conj3(&self.w);
        let n2 = norm3(&self.w).powi(2);
        let cross = bracket(&self.w, &wbar);
        let mut v = [ZERO; 3];
        for k in 0..3 {
            v[k] = self.w0 * wbar[k] + self.w0.conj() * self.w[k] - I * cross[k];
        }
        PauliElement {
            w0: Complex64::new(self.w0.norm_sqr() + n2, 0.0),
            w: v,
        }
    }

    pub fn max_abs_diff(&self, other: &PauliElement) -> f64 {
        self.w
            .iter()
            .zip(&other.w)
            .map(|(a, b)| (a - b).norm())
            .fold((self.w0 - other.w0).norm(), f64::max)
    }
}

/// Positivity of a self-adjoint qubit element: `w0 ≥ 0` and `‖w‖ ≤ w0` (boundary included).
pub fn is_positive_qubit(x: &PauliElement, tol: f64) -> Result<bool> {
    if !x.is_self_adjoint(tol) {
        return Err(Error::usage("positivity test needs a self-adjoint element"));
    }
    let w0 = x.w0.re;
    Ok(w0 >= -tol && norm3(&x.w) <= w0 + tol)
}

/// A state on `M2(C)` given by its Bloch vector.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BlochState {
    f: [f64; 3],
}

impl BlochState {
    pub fn new(f: [f64; 3]) -> Result<Self> {
        let n = f.iter().map(|v| v * v).sum::<f64>().sqrt();
        if !n.is_finite() || n > 1.0 + 1e-12 {
            return Err(Error::usage(format!("Bloch vector norm {n} exceeds 1")));
        }
        Ok(BlochState { f })
    }

    pub fn maximally_mixed() -> Self {
        BlochState { f: [0.0; 3] }
    }

    pub fn vector(&self) -> [f64; 3] {
        self.f
    }
}

/// `φ(w0·1 + w·σ) = w0 + Σ wk fk`.
pub fn eval_state(f: &BlochState, x: &PauliElement) -> Complex64 {
    x.w0 + x.w.iter().zip(f.f).map(|(w, fk)| w * fk).sum::<Complex64>()
}

/// `w0·1⊗1 + w·σ⊗1 + 1⊗r·σ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TensorPauliElement {
    pub w0: Complex64,
    pub w: C3,
    pub r: C3,
}

impl TensorPauliElement {
    pub fn real(w0: f64, w: [f64; 3], r: [f64; 3]) -> Self {
        TensorPauliElement {
            w0: Complex64::new(w0, 0.0),
            w: real3(w),
            r: real3(r),
        }
    }

    pub fn is_self_adjoint(&self, tol: f64) -> bool {
        std::iter::once(&self.w0)
            .chain(&self.w)
            .chain(&self.r)
            .all(|z| z.im.abs() <= tol)
    }

    pub fn to_matrix(&self) -> ComplexMatrix {
        let i2 = ComplexMatrix::identity(2);
        let base = ComplexMatrix::identity(4).scale(self.w0);
        let left = linalg::tensor(&dot_sigma(&self.w), &i2);
        let right = linalg::tensor(&i2, &dot_sigma(&self.r));
        &(&base + &left) + &right
    }
}

/// Closed-form spectrum `{w0 ± ‖r‖ ± ‖w‖}` of a self-adjoint simple tensor, ascending.
pub fn tensor_simple_spectrum(x: &TensorPauliElement) -> Result<[f64; 4]> {
    if !x.is_self_adjoint(1e-12) {
        return Err(Error::usage("spectrum formula needs a self-adjoint element"));
    }
    let (w0, nw, nr) = (x.w0.re, norm3(&x.w), norm3(&x.r));
    let mut ev = [w0 - nr - nw, w0 - nr + nw, w0 + nr - nw, w0 + nr + nw];
    ev.sort_by(f64::total_cmp);
    Ok(ev)
}
