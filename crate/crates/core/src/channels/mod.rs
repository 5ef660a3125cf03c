//! Unital trace-preserving map families in the Pauli parameterization.
//!
//! * [`QubitChannel`]: `Φ(w0·1 + w·σ) = w0·1 + (Tw)·σ` with a real 3×3 `T`.
//! * [`TensorMap`]: `T(w0·1 + w·σ) = w0·1⊗1 + Aw·σ⊗1 + 1⊗Cw·σ` with real 3×3 `A`, `C`.
//!
//! Both implement [`MatrixMap`], the uniform "evaluate on a Pauli element"
//! interface consumed by the oracles, as do the closures built by
//! [`conjugate_by_unitaries`] and [`convex_combination`].

mod descriptor;

pub use descriptor::FamilyDescriptor;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{self, ComplexMatrix};
use crate::pauli::{apply_real3, dot_sigma, PauliElement};

pub type Mat3 = [[f64; 3]; 3];

pub const IDENTITY3: Mat3 = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
pub const ZERO3: Mat3 = [[0.0; 3]; 3];

pub fn diag3(d: [f64; 3]) -> Mat3 {
    [[d[0], 0.0, 0.0], [0.0, d[1], 0.0], [0.0, 0.0, d[2]]]
}

pub fn scale_mat3(c: f64, m: &Mat3) -> Mat3 {
    m.map(|row| row.map(|v| c * v))
}

fn combine_mat3(wa: f64, a: &Mat3, wb: f64, b: &Mat3) -> Mat3 {
    let mut out = ZERO3;
    for i in 0..3 {
        for j in 0..3 {
            out[i][j] = wa * a[i][j] + wb * b[i][j];
        }
    }
    out
}

/// Matrix units `e11, e12, e21, e22` as Pauli elements.
pub fn matrix_units() -> [[PauliElement; 2]; 2] {
    let h = Complex64::new(0.5, 0.0);
    let ih = Complex64::new(0.0, 0.5);
    let z = Complex64::new(0.0, 0.0);
    [
        [
            PauliElement::new(h, [z, z, h]),
            PauliElement::new(z, [h, ih, z]),
        ],
        [
            PauliElement::new(z, [h, -ih, z]),
            PauliElement::new(h, [z, z, -h]),
        ],
    ]
}

/// A linear map from `M2(C)` into `n×n` matrices, evaluated on Pauli coefficients.
pub trait MatrixMap: Send + Sync {
    fn output_dim(&self) -> usize;

    fn apply_element(&self, x: &PauliElement) -> ComplexMatrix;

    /// The block matrix `[[Φ(e11), Φ(e12)], [Φ(e21), Φ(e22)]]`.
    fn choi_matrix(&self) -> ComplexMatrix {
        let n = self.output_dim();
        let mut out = ComplexMatrix::zeros(2 * n);
        for (i, row) in matrix_units().iter().enumerate() {
            for (j, e) in row.iter().enumerate() {
                out.set_block(i * n, j * n, &self.apply_element(e));
            }
        }
        out
    }
}

impl<M: MatrixMap + ?Sized> MatrixMap for &M {
    fn output_dim(&self) -> usize {
        (**self).output_dim()
    }

    fn apply_element(&self, x: &PauliElement) -> ComplexMatrix {
        (**self).apply_element(x)
    }
}

impl<M: MatrixMap + ?Sized> MatrixMap for Box<M> {
    fn output_dim(&self) -> usize {
        (**self).output_dim()
    }

    fn apply_element(&self, x: &PauliElement) -> ComplexMatrix {
        (**self).apply_element(x)
    }
}

/// Diagonal parameters `(λ1, λ2, λ3)` of `Φ_(λ1,λ2,λ3)`, each in `[-1, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DiagonalParams {
    pub l1: f64,
    pub l2: f64,
    pub l3: f64,
}

impl DiagonalParams {
    pub fn new(l1: f64, l2: f64, l3: f64) -> Result<Self> {
        check_box([l1, l2, l3], 1.0)?;
        Ok(DiagonalParams { l1, l2, l3 })
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.l1, self.l2, self.l3]
    }
}

/// Diagonal parameters of `T_(λ1,λ2,λ3)` (`A = C = diag(λ)`), each in `[-1/2, 1/2]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DiagonalTensorParams {
    pub l1: f64,
    pub l2: f64,
    pub l3: f64,
}

impl DiagonalTensorParams {
    pub fn new(l1: f64, l2: f64, l3: f64) -> Result<Self> {
        check_box([l1, l2, l3], 0.5)?;
        Ok(DiagonalTensorParams { l1, l2, l3 })
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.l1, self.l2, self.l3]
    }
}

/// `T_{λ,µ}`: `A = λ·1`, `C = µ·1`. Any finite reals are admitted.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScalarPairParams {
    pub lambda: f64,
    pub mu: f64,
}

impl ScalarPairParams {
    pub fn new(lambda: f64, mu: f64) -> Result<Self> {
        if !lambda.is_finite() || !mu.is_finite() {
            return Err(Error::usage("parameters must be finite"));
        }
        Ok(ScalarPairParams { lambda, mu })
    }
}

fn check_box(values: [f64; 3], bound: f64) -> Result<()> {
    for (k, v) in values.iter().enumerate() {
        if !v.is_finite() || v.abs() > bound {
            return Err(Error::usage(format!(
                "λ{} = {v} outside [-{bound}, {bound}]",
                k + 1
            )));
        }
    }
    Ok(())
}

/// A bistochastic map `M2 → M2` represented by its real 3×3 matrix `T`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QubitChannel {
    pub t: Mat3,
}

impl QubitChannel {
    pub fn new(t: Mat3) -> Result<Self> {
        if t.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::usage("channel matrix must be finite"));
        }
        Ok(QubitChannel { t })
    }

    pub fn identity() -> Self {
        QubitChannel { t: IDENTITY3 }
    }

    pub fn diagonal(p: &DiagonalParams) -> Self {
        QubitChannel {
            t: diag3(p.as_array()),
        }
    }

    pub fn apply(&self, x: &PauliElement) -> PauliElement {
        PauliElement::new(x.w0, apply_real3(&self.t, &x.w))
    }

    /// `λ·self + (1-λ)·other` at the level of `T` matrices.
    pub fn convex(&self, other: &QubitChannel, lambda: f64) -> Result<QubitChannel> {
        check_weight(lambda)?;
        Ok(QubitChannel {
            t: combine_mat3(lambda, &self.t, 1.0 - lambda, &other.t),
        })
    }
}

impl MatrixMap for QubitChannel {
    fn output_dim(&self) -> usize {
        2
    }

    fn apply_element(&self, x: &PauliElement) -> ComplexMatrix {
        self.apply(x).to_matrix()
    }
}

pub fn apply_qubit_channel(ch: &QubitChannel, x: &PauliElement) -> PauliElement {
    ch.apply(x)
}

/// The 4×4 Choi matrix of a qubit channel.
pub fn choi_matrix_qubit(ch: &QubitChannel) -> ComplexMatrix {
    ch.choi_matrix()
}

/// A unital map `M2 → M2 ⊗ M2` given by the pair `(A, C)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TensorMap {
    pub a: Mat3,
    pub c: Mat3,
}

impl TensorMap {
    pub fn new(a: Mat3, c: Mat3) -> Result<Self> {
        if a.iter().chain(&c).flatten().any(|v| !v.is_finite()) {
            return Err(Error::usage("tensor map matrices must be finite"));
        }
        Ok(TensorMap { a, c })
    }

    pub fn diagonal(p: &DiagonalTensorParams) -> Self {
        let d = diag3(p.as_array());
        TensorMap { a: d, c: d }
    }

    pub fn scalar_pair(p: &ScalarPairParams) -> Self {
        TensorMap {
            a: scale_mat3(p.lambda, &IDENTITY3),
            c: scale_mat3(p.mu, &IDENTITY3),
        }
    }

    pub fn apply(&self, x: &PauliElement) -> ComplexMatrix {
        let i2 = ComplexMatrix::identity(2);
        let left = linalg::tensor(&dot_sigma(&apply_real3(&self.a, &x.w)), &i2);
        let right = linalg::tensor(&i2, &dot_sigma(&apply_real3(&self.c, &x.w)));
        let base = ComplexMatrix::identity(4).scale(x.w0);
        &(&base + &left) + &right
    }
}

impl MatrixMap for TensorMap {
    fn output_dim(&self) -> usize {
        4
    }

    fn apply_element(&self, x: &PauliElement) -> ComplexMatrix {
        self.apply(x)
    }
}

pub fn apply_tensor_map(m: &TensorMap, x: &PauliElement) -> ComplexMatrix {
    m.apply(x)
}

/// The channels `Φ` (matrix `2A`) and `Ψ` (matrix `2C`) with `T(x) = ½(Φ(x)⊗1 + 1⊗Ψ(x))`.
pub fn split_phi_psi(m: &TensorMap) -> (QubitChannel, QubitChannel) {
    (
        QubitChannel {
            t: scale_mat3(2.0, &m.a),
        },
        QubitChannel {
            t: scale_mat3(2.0, &m.c),
        },
    )
}

/// The 8×8 Choi matrix of a tensor map.
pub fn choi_matrix_tensor(m: &TensorMap) -> ComplexMatrix {
    m.choi_matrix()
}

/// `x ↦ U Φ(V x V*) U*`.
#[derive(Debug, Clone)]
pub struct ConjugatedChannel {
    channel: QubitChannel,
    u: ComplexMatrix,
    v: ComplexMatrix,
}

impl ConjugatedChannel {
    pub fn channel(&self) -> &QubitChannel {
        &self.channel
    }
}

impl MatrixMap for ConjugatedChannel {
    fn output_dim(&self) -> usize {
        2
    }

    fn apply_element(&self, x: &PauliElement) -> ComplexMatrix {
        let inner = &(&self.v * &x.to_matrix()) * &linalg::adjoint(&self.v);
        let inner = PauliElement::from_matrix(&inner).expect("2x2 by construction");
        let out = self.channel.apply(&inner).to_matrix();
        &(&self.u * &out) * &linalg::adjoint(&self.u)
    }
}

pub fn conjugate_by_unitaries(
    ch: &QubitChannel,
    u: &ComplexMatrix,
    v: &ComplexMatrix,
) -> Result<ConjugatedChannel> {
    for (name, m) in [("U", u), ("V", v)] {
        if m.dim() != 2 {
            return Err(Error::usage(format!("{name} must be 2x2")));
        }
        let defect = (&linalg::adjoint(m) * m).max_abs_diff(&ComplexMatrix::identity(2));
        if defect > 1e-10 {
            return Err(Error::usage(format!(
                "{name} is not unitary (defect {defect:e})"
            )));
        }
    }
    Ok(ConjugatedChannel {
        channel: *ch,
        u: u.clone(),
        v: v.clone(),
    })
}

/// Pointwise `λ·a + (1-λ)·b`.
#[derive(Debug, Clone)]
pub struct ConvexCombination<A, B> {
    a: A,
    b: B,
    weight: f64,
}

impl<A: MatrixMap, B: MatrixMap> MatrixMap for ConvexCombination<A, B> {
    fn output_dim(&self) -> usize {
        self.a.output_dim()
    }

    fn apply_element(&self, x: &PauliElement) -> ComplexMatrix {
        let l = self.weight;
        &self.a.apply_element(x).scale_real(l) + &self.b.apply_element(x).scale_real(1.0 - l)
    }
}

pub fn convex_combination<A: MatrixMap, B: MatrixMap>(
    a: A,
    b: B,
    lambda: f64,
) -> Result<ConvexCombination<A, B>> {
    check_weight(lambda)?;
    if a.output_dim() != b.output_dim() {
        return Err(Error::usage("maps have different codomains"));
    }
    Ok(ConvexCombination {
        a,
        b,
        weight: lambda,
    })
}

fn check_weight(lambda: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&lambda) {
        return Err(Error::usage(format!("weight {lambda} outside [0, 1]")));
    }
    Ok(())
}
