//! Dense complex matrices of dimension at most 8.
//!
//! Everything the classifiers need: products, adjoints, Kronecker products
//! and Hermitian spectra. The eigensolver embeds a complex Hermitian matrix
//! `H = X + iY` into the real symmetric matrix `[[X, -Y], [Y, X]]`, runs
//! cyclic Jacobi on it and folds the doubled spectrum back.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Largest dimension admitted by the constructors.
pub const MAX_DIM: usize = 8;

const JACOBI_MAX_SWEEPS: usize = 50;
const JACOBI_REL_OFF: f64 = 1e-14;
const PAIRING_TOL: f64 = 1e-8;

/// A square complex matrix stored row-major.
#[derive(Clone, Copy)]
pub struct ComplexMatrix {
    dim: usize,
    data: [Complex64; MAX_DIM * MAX_DIM],
}

impl PartialEq for ComplexMatrix {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.entries() == other.entries()
    }
}

const CZERO: Complex64 = Complex64::new(0.0, 0.0);

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Self {
        assert!(dim > 0 && dim <= MAX_DIM, "dimension {dim} outside 1..={MAX_DIM}");
        ComplexMatrix {
            dim,
            data: [CZERO; MAX_DIM * MAX_DIM],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    /// Builds a matrix from row slices, rejecting ragged input and non-finite entries.
    pub fn from_rows<R: AsRef<[Complex64]>>(rows: &[R]) -> Result<Self> {
        let dim = rows.len();
        if dim == 0 || dim > MAX_DIM {
            return Err(Error::usage(format!("dimension {dim} outside 1..={MAX_DIM}")));
        }
        let mut m = Self::zeros(dim);
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != dim {
                return Err(Error::usage(format!(
                    "row {i} has {} entries, expected {dim}",
                    row.len()
                )));
            }
            m.data[i * dim..(i + 1) * dim].copy_from_slice(row);
        }
        if m.entries().iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::usage("matrix entries must be finite"));
        }
        Ok(m)
    }

    /// Builds a matrix from real row slices.
    pub fn from_real_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let rows: Vec<Vec<Complex64>> = rows
            .iter()
            .map(|r| r.as_ref().iter().map(|&v| Complex64::new(v, 0.0)).collect())
            .collect();
        Self::from_rows(&rows)
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    pub fn diag(entries: &[Complex64]) -> Self {
        let mut m = Self::zeros(entries.len());
        for (i, &z) in entries.iter().enumerate() {
            m[(i, i)] = z;
        }
        m
    }

    pub fn real_diag(entries: &[f64]) -> Self {
        let entries: Vec<Complex64> = entries.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        Self::diag(&entries)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// The `dim²` entries, row-major.
    pub fn entries(&self) -> &[Complex64] {
        &self.data[..self.dim * self.dim]
    }

    pub fn scale(&self, c: Complex64) -> Self {
        let mut out = *self;
        out.data[..self.dim * self.dim].iter_mut().for_each(|z| *z *= c);
        out
    }

    pub fn scale_real(&self, c: f64) -> Self {
        self.scale(Complex64::new(c, 0.0))
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries().iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &ComplexMatrix) -> f64 {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        self.entries()
            .iter()
            .zip(other.entries())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// `max |a_ij - conj(a_ji)|`.
    pub fn hermiticity_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.dim {
            for j in i..self.dim {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_defect() <= tol
    }

    /// Principal `size×size` block starting at `(row, col)`.
    pub fn block(&self, row: usize, col: usize, size: usize) -> ComplexMatrix {
        ComplexMatrix::from_fn(size, |i, j| self[(row + i, col + j)])
    }

    pub fn set_block(&mut self, row: usize, col: usize, block: &ComplexMatrix) {
        for i in 0..block.dim {
            for j in 0..block.dim {
                self[(row + i, col + j)] = block[(i, j)];
            }
        }
    }

    pub fn rows(&self) -> impl Iterator<Item = &[Complex64]> {
        self.entries().chunks(self.dim)
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.dim + j]
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix({}x{})", self.dim, self.dim)?;
        for row in self.rows() {
            let cells: Vec<String> = row
                .iter()
                .map(|z| format!("{:+.6}{:+.6}i", z.re, z.im))
                .collect();
            writeln!(f, "  [{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        let mut out = *self;
        for (a, b) in out.data.iter_mut().zip(&rhs.data) {
            *a += b;
        }
        out
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        let mut out = *self;
        for (a, b) in out.data.iter_mut().zip(&rhs.data) {
            *a -= b;
        }
        out
    }
}

/// Panicking product for internal call sites where dimensions agree by construction.
impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        mat_mul(self, rhs).expect("dimension mismatch")
    }
}

pub fn mat_mul(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    if a.dim != b.dim {
        return Err(Error::usage(format!(
            "cannot multiply {0}x{0} by {1}x{1}",
            a.dim, b.dim
        )));
    }
    let n = a.dim;
    Ok(ComplexMatrix::from_fn(n, |i, j| {
        (0..n).map(|k| a[(i, k)] * b[(k, j)]).sum()
    }))
}

/// Conjugate transpose.
pub fn adjoint(a: &ComplexMatrix) -> ComplexMatrix {
    ComplexMatrix::from_fn(a.dim, |i, j| a[(j, i)].conj())
}

/// Kronecker product, `(i·b.dim + k, j·b.dim + l) = a[i,j]·b[k,l]`.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    let n = a.dim * b.dim;
    if n > MAX_DIM {
        return Err(Error::usage(format!(
            "kron result dimension {n} exceeds {MAX_DIM}"
        )));
    }
    let m = b.dim;
    Ok(ComplexMatrix::from_fn(n, |r, c| {
        a[(r / m, c / m)] * b[(r % m, c % m)]
    }))
}

/// The matrix of the abstract tensor `x ⊗ y` on two qubits, with the first
/// factor acting on the inner (fast) index: `tensor(x, y) = kron(y, x)`.
///
/// This is the layout in which `w0 1⊗1 + w·σ⊗1 + 1⊗r·σ` reads
/// `[[w0+w3+r3, w1-iw2, r1-ir2, 0], ...]`.
pub fn tensor(x: &ComplexMatrix, y: &ComplexMatrix) -> ComplexMatrix {
    kron(y, x).expect("tensor of two qubit operators")
}

/// All eigenvalues of a Hermitian matrix in ascending order.
///
/// `tol` bounds the accepted Hermiticity defect.
pub fn hermitian_eigenvalues(a: &ComplexMatrix, tol: f64) -> Result<Vec<f64>> {
    let defect = a.hermiticity_defect();
    if defect > tol {
        return Err(Error::usage(format!(
            "matrix is not Hermitian (defect {defect:e} > {tol:e})"
        )));
    }
    let n = a.dim;
    let m = 2 * n;
    // [[X, -Y], [Y, X]] built from the Hermitian part so rounding noise below tol is symmetrized
    let mut s = vec![0.0f64; m * m];
    for i in 0..n {
        for j in 0..n {
            let z = (a[(i, j)] + a[(j, i)].conj()) * 0.5;
            s[i * m + j] = z.re;
            s[(i + n) * m + (j + n)] = z.re;
            s[i * m + (j + n)] = -z.im;
            s[(i + n) * m + j] = z.im;
        }
    }
    let mut doubled = jacobi_symmetric(&mut s, m)?;
    doubled.sort_by(f64::total_cmp);

    let scale = a.frobenius_norm().max(1.0);
    let mut out = Vec::with_capacity(n);
    for pair in doubled.chunks(2) {
        let (x, y) = (pair[0], pair[1]);
        if (x - y).abs() > PAIRING_TOL * scale {
            return Err(Error::Numeric(format!(
                "embedded spectrum did not pair up: {x} vs {y}"
            )));
        }
        out.push(0.5 * (x + y));
    }
    Ok(out)
}

pub fn min_eigenvalue(a: &ComplexMatrix, tol: f64) -> Result<f64> {
    Ok(hermitian_eigenvalues(a, tol)?[0])
}

/// Cyclic Jacobi on a dense real symmetric `m×m` matrix; returns the diagonal.
fn jacobi_symmetric(s: &mut [f64], m: usize) -> Result<Vec<f64>> {
    let total: f64 = s.iter().map(|v| v * v).sum::<f64>().sqrt();
    let target = JACOBI_REL_OFF * total;
    let off = |s: &[f64]| -> f64 {
        let mut acc = 0.0;
        for p in 0..m {
            for q in 0..m {
                if p != q {
                    acc += s[p * m + q] * s[p * m + q];
                }
            }
        }
        acc.sqrt()
    };

    let mut converged = off(s) <= target;
    let mut sweep = 0;
    while !converged {
        if sweep == JACOBI_MAX_SWEEPS {
            return Err(Error::Numeric(format!(
                "Jacobi did not converge in {JACOBI_MAX_SWEEPS} sweeps (off-diagonal {:e})",
                off(s)
            )));
        }
        for p in 0..m - 1 {
            for q in p + 1..m {
                let apq = s[p * m + q];
                if apq == 0.0 {
                    continue;
                }
                let app = s[p * m + p];
                let aqq = s[q * m + q];
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let sn = t * c;
                for k in 0..m {
                    let akp = s[k * m + p];
                    let akq = s[k * m + q];
                    s[k * m + p] = c * akp - sn * akq;
                    s[k * m + q] = sn * akp + c * akq;
                }
                for k in 0..m {
                    let apk = s[p * m + k];
                    let aqk = s[q * m + k];
                    s[p * m + k] = c * apk - sn * aqk;
                    s[q * m + k] = sn * apk + c * aqk;
                }
            }
        }
        sweep += 1;
        converged = off(s) <= target;
    }
    Ok((0..m).map(|i| s[i * m + i]).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn sigma(k: usize) -> ComplexMatrix {
        let rows = match k {
            1 => [[c(0., 0.), c(1., 0.)], [c(1., 0.), c(0., 0.)]],
            2 => [[c(0., 0.), c(0., -1.)], [c(0., 1.), c(0., 0.)]],
            _ => [[c(1., 0.), c(0., 0.)], [c(0., 0.), c(-1., 0.)]],
        };
        ComplexMatrix::from_rows(&rows).unwrap()
    }

    #[test]
    fn identity_times_sigma1() {
        let p = mat_mul(&ComplexMatrix::identity(2), &sigma(1)).unwrap();
        assert_eq!(p, sigma(1));
    }

    #[test]
    fn sigma1_sigma2_is_i_sigma3() {
        let p = mat_mul(&sigma(1), &sigma(2)).unwrap();
        assert!(p.max_abs_diff(&sigma(3).scale(c(0., 1.))) < 1e-15);
    }

    #[test]
    fn mat_mul_dimension_mismatch() {
        let err = mat_mul(&ComplexMatrix::identity(2), &ComplexMatrix::identity(4));
        assert!(matches!(err, Err(Error::Usage(_))));
    }

    #[test]
    fn adjoint_cases() {
        assert_eq!(adjoint(&sigma(2)), sigma(2));
        let d = ComplexMatrix::diag(&[c(0., 1.), c(0., -1.)]);
        assert_eq!(adjoint(&d), ComplexMatrix::diag(&[c(0., -1.), c(0., 1.)]));
    }

    #[test]
    fn kron_cases() {
        let i2 = ComplexMatrix::identity(2);
        assert_eq!(kron(&i2, &i2).unwrap(), ComplexMatrix::identity(4));
        assert_eq!(
            kron(&sigma(3), &i2).unwrap(),
            ComplexMatrix::real_diag(&[1., 1., -1., -1.])
        );
        let i4 = ComplexMatrix::identity(4);
        assert!(matches!(kron(&i4, &i4), Err(Error::Usage(_))));
    }

    #[test]
    fn tensor_reproduces_simple_tensor_layout() {
        let (w0, w, r) = (0.7, [0.11, -0.23, 0.31], [0.05, 0.17, -0.29]);
        let ws = &(&sigma(1).scale_real(w[0]) + &sigma(2).scale_real(w[1])) + &sigma(3).scale_real(w[2]);
        let rs = &(&sigma(1).scale_real(r[0]) + &sigma(2).scale_real(r[1])) + &sigma(3).scale_real(r[2]);
        let i2 = ComplexMatrix::identity(2);
        let x = &(&ComplexMatrix::identity(4).scale_real(w0) + &tensor(&ws, &i2)) + &tensor(&i2, &rs);
        let z = c(0., 0.);
        let expected = ComplexMatrix::from_rows(&[
            [c(w0 + w[2] + r[2], 0.), c(w[0], -w[1]), c(r[0], -r[1]), z],
            [c(w[0], w[1]), c(w0 - w[2] + r[2], 0.), z, c(r[0], -r[1])],
            [c(r[0], r[1]), z, c(w0 + w[2] - r[2], 0.), c(w[0], -w[1])],
            [z, c(r[0], r[1]), c(w[0], w[1]), c(w0 - w[2] - r[2], 0.)],
        ])
        .unwrap();
        assert!(x.max_abs_diff(&expected) < 1e-15);
    }

    #[test]
    fn eigenvalues_identity() {
        let ev = hermitian_eigenvalues(&ComplexMatrix::identity(4), 1e-10).unwrap();
        for v in ev {
            assert_abs_diff_eq!(v, 1.0, epsilon = 1e-14);
        }
    }

    #[test]
    fn eigenvalues_simple_tensor_matrix() {
        // w0 = 1, w = (0.3, 0, 0), r = (0, 0.4, 0)
        let i2 = ComplexMatrix::identity(2);
        let x = &(&ComplexMatrix::identity(4) + &tensor(&sigma(1).scale_real(0.3), &i2))
            + &tensor(&i2, &sigma(2).scale_real(0.4));
        let ev = hermitian_eigenvalues(&x, 1e-10).unwrap();
        for (got, want) in ev.iter().zip([0.3, 0.9, 1.1, 1.7]) {
            assert_abs_diff_eq!(*got, want, epsilon = 1e-10);
        }
    }

    #[test]
    fn min_eigenvalue_cases() {
        assert_abs_diff_eq!(min_eigenvalue(&ComplexMatrix::identity(2), 1e-10).unwrap(), 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(min_eigenvalue(&sigma(3), 1e-10).unwrap(), -1.0, epsilon = 1e-14);
        let d = ComplexMatrix::real_diag(&[0.5, 0.0, 0.0, -0.2]);
        assert_abs_diff_eq!(min_eigenvalue(&d, 1e-10).unwrap(), -0.2, epsilon = 1e-14);
    }

    #[test]
    fn non_hermitian_rejected() {
        let m = ComplexMatrix::from_rows(&[[c(0., 0.), c(1., 0.)], [c(0., 0.), c(0., 0.)]]).unwrap();
        assert!(matches!(hermitian_eigenvalues(&m, 1e-10), Err(Error::Usage(_))));
    }

    #[test]
    fn zero_matrix_spectrum() {
        let ev = hermitian_eigenvalues(&ComplexMatrix::zeros(8), 1e-10).unwrap();
        assert_eq!(ev, vec![0.0; 8]);
    }

    #[test]
    fn constructors_reject_bad_input() {
        assert!(ComplexMatrix::from_rows(&[[c(f64::NAN, 0.)]]).is_err());
        assert!(ComplexMatrix::from_rows(&[vec![c(0., 0.)], vec![c(0., 0.), c(0., 0.)]]).is_err());
    }
}
