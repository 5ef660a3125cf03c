//! Classifiers for tensor maps `T(x) = w0 1⊗1 + Aw·σ⊗1 + 1⊗Cw·σ`.

use num_complex::Complex64;

use super::{Evidence, TriState, BOUNDARY_TOL};
use crate::channels::{DiagonalTensorParams, Mat3, ScalarPairParams, TensorMap};
use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigenvalues, ComplexMatrix};
use crate::oracle::{chunk_rng, probe_directions, unit_complex};
use crate::pauli::{apply_real3, bracket, conj3, norm3, scale3, sub3, C3};

const ASCENT_ITERS: usize = 200;
const ASCENT_STOP: f64 = 1e-12;
const ASCENT_STARTS: usize = 8;
const POSITIVITY_SLACK: f64 = 1e-9;
const SAMPLED_SLACK: f64 = 1e-10;

/// `A1..A3` and `B1..B3` of the diagonal tensor map `T_(λ1,λ2,λ3)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TensorKsTerms {
    pub a: [f64; 3],
    pub b: [f64; 3],
}

impl TensorKsTerms {
    pub fn new(p: &DiagonalTensorParams) -> Self {
        let [l1, l2, l3] = p.as_array();
        TensorKsTerms {
            a: [
                (l1 - 2.0 * l2 * l3).powi(2),
                (l2 - 2.0 * l1 * l3).powi(2),
                (l3 - 2.0 * l1 * l2).powi(2),
            ],
            b: [1.0 - 4.0 * l1 * l1, 1.0 - 4.0 * l2 * l2, 1.0 - 4.0 * l3 * l3],
        }
    }

    /// `(lhs, rhs)` of `4A_i + 4A_j ≤ B_k²`.
    pub fn diagonal_bounds(&self) -> [(f64, f64); 3] {
        [0, 1, 2].map(|k| {
            let (i, j) = ((k + 1) % 3, (k + 2) % 3);
            (4.0 * (self.a[i] + self.a[j]), self.b[k] * self.b[k])
        })
    }

    /// `(lhs, rhs)` of `4A_k ≤ B_i B_j`.
    pub fn pairwise_bounds(&self) -> [(f64, f64); 3] {
        [0, 1, 2].map(|k| {
            let (i, j) = ((k + 1) % 3, (k + 2) % 3);
            (4.0 * self.a[k], self.b[i] * self.b[j])
        })
    }
}

/// `(lhs, rhs)` of `(1+4λk²)(3+4λi²+4λj²-4λk²) ≤ 4(1+8λ1λ2λ3)`.
pub fn tensor_ks_cyclic_forms(p: &DiagonalTensorParams) -> [(f64, f64); 3] {
    let l = p.as_array();
    let rhs = 4.0 * (1.0 + 8.0 * l[0] * l[1] * l[2]);
    let sq = l.map(|v| 4.0 * v * v);
    [0, 1, 2].map(|k| {
        let (i, j) = ((k + 1) % 3, (k + 2) % 3);
        ((1.0 + sq[k]) * (3.0 + sq[i] + sq[j] - sq[k]), rhs)
    })
}

/// `(lhs, rhs)` of `4λ1² + 4λ2² + 4λ3² ≤ 1 + 16λ1λ2λ3`.
pub fn tensor_ks_determinant_form(p: &DiagonalTensorParams) -> (f64, f64) {
    let [l1, l2, l3] = p.as_array();
    (4.0 * (l1 * l1 + l2 * l2 + l3 * l3), 1.0 + 16.0 * l1 * l2 * l3)
}

fn mat3_apply(m: &Mat3, w: &[f64; 3]) -> [f64; 3] {
    m.map(|row| row[0] * w[0] + row[1] * w[1] + row[2] * w[2])
}

fn norm(v: &[f64; 3]) -> f64 {
    (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
}

fn normalize(v: [f64; 3]) -> [f64; 3] {
    let n = norm(&v);
    v.map(|x| x / n)
}

fn gram(m: &Mat3) -> Mat3 {
    let mut g = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            g[i][j] = (0..3).map(|k| m[k][i] * m[k][j]).sum();
        }
    }
    g
}

/// Largest singular value via the spectrum of `mᵀm`.
pub fn operator_norm(m: &Mat3) -> Result<f64> {
    let g = ComplexMatrix::from_real_rows(&gram(m))?;
    let ev = hermitian_eigenvalues(&g, 1e-12)?;
    Ok(ev[2].max(0.0).sqrt())
}

/// `c` with `mᵀm = c·1`, if any.
fn scalar_gram(m: &Mat3) -> Option<f64> {
    let g = gram(m);
    let c = g[0][0];
    let tol = 1e-14 * c.abs().max(1.0);
    let ok = (0..3).all(|i| (0..3).all(|j| (g[i][j] - if i == j { c } else { 0.0 }).abs() <= tol));
    ok.then_some(c)
}

/// Fibonacci lattice of `n` points on the unit sphere.
pub fn fibonacci_sphere(n: usize) -> Vec<[f64; 3]> {
    let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
    (0..n)
        .map(|i| {
            let z = 1.0 - (2 * i + 1) as f64 / n as f64;
            let r = (1.0 - z * z).max(0.0).sqrt();
            let phi = golden * i as f64;
            [r * phi.cos(), r * phi.sin(), z]
        })
        .collect()
}

/// Maximum of `‖Aw‖ + ‖Cw‖` over the real unit sphere and a maximizer.
///
/// Lattice search followed by coordinate-perturbation ascent with step
/// halving from the best lattice points.
pub fn sphere_maximum(m: &TensorMap, grid: usize) -> ([f64; 3], f64) {
    let f = |w: &[f64; 3]| norm(&mat3_apply(&m.a, w)) + norm(&mat3_apply(&m.c, w));
    let mut scored: Vec<([f64; 3], f64)> = fibonacci_sphere(grid).into_iter().map(|w| (w, f(&w))).collect();
    scored.sort_by(|a, b| b.1.total_cmp(&a.1));
    scored.truncate(ASCENT_STARTS);

    let mut best = scored[0];
    let mut step = std::f64::consts::PI / (grid as f64).sqrt();
    for (w0, f0) in scored {
        let (mut w, mut fw) = (w0, f0);
        let mut h = step;
        for _ in 0..ASCENT_ITERS {
            let mut improved = false;
            for k in 0..3 {
                for s in [h, -h] {
                    let mut t = w;
                    t[k] += s;
                    let t = normalize(t);
                    let ft = f(&t);
                    if ft > fw {
                        w = t;
                        fw = ft;
                        improved = true;
                    }
                }
            }
            if !improved {
                h *= 0.5;
                if h < ASCENT_STOP {
                    break;
                }
            }
        }
        if fw > best.1 {
            best = (w, fw);
        }
        step = step.max(h);
    }
    best
}

/// Positivity of a tensor map: `‖Aw‖ + ‖Cw‖ ≤ 1` on the real unit sphere.
///
/// Exact when `A = C` (the maximum is `2‖A‖`) or when `AᵀA` and `CᵀC` are
/// both scalar (the objective is constant); sampled otherwise.
pub fn positive_tensor(m: &TensorMap, grid: usize) -> Result<TriState> {
    if grid < 64 {
        return Err(Error::usage(format!("sphere grid {grid} is below 64 points")));
    }
    let (w, value) = sphere_maximum(m, grid);
    let exact = if m.a == m.c {
        Some((2.0 * operator_norm(&m.a)?, "operator norm of A = C"))
    } else {
        match (scalar_gram(&m.a), scalar_gram(&m.c)) {
            (Some(a), Some(c)) => Some((a.max(0.0).sqrt() + c.max(0.0).sqrt(), "scalar Gram matrices")),
            _ => None,
        }
    };
    let fails = |max: f64, note: &str| {
        TriState::fails(Evidence::Direction { w, value: max.max(value) }, format!("‖Aw‖ + ‖Cw‖ > 1 ({note})"))
    };
    Ok(match exact {
        Some((max, note)) if max > 1.0 + POSITIVITY_SLACK => fails(max, note),
        Some((_, note)) => TriState::holds_exact(format!("‖Aw‖ + ‖Cw‖ ≤ 1 ({note})")),
        None if value > 1.0 + POSITIVITY_SLACK => fails(value, "sphere search"),
        None => TriState::holds_sufficient(format!("‖Aw‖ + ‖Cw‖ ≤ 1 on {grid} lattice points with ascent")),
    })
}

/// `(‖w‖² - 2‖Aw‖² - 2‖Cw‖², ‖A[w,w̄] - 2[Aw,Aw̄]‖ + ‖C[w,w̄] - 2[Cw,Cw̄]‖)`.
pub fn tensor_ks_terms(m: &TensorMap, w: &C3) -> (f64, f64) {
    let wbar = conj3(w);
    let ww = bracket(w, &wbar);
    let part = |mat: &Mat3| -> (f64, f64) {
        let mw = apply_real3(mat, w);
        let mwbar = apply_real3(mat, &wbar);
        let inner = sub3(&apply_real3(mat, &ww), &scale3(Complex64::new(2.0, 0.0), &bracket(&mw, &mwbar)));
        (norm3(&mw).powi(2), norm3(&inner))
    };
    let (na, la) = part(&m.a);
    let (nc, lc) = part(&m.c);
    (norm3(w).powi(2) - 2.0 * na - 2.0 * nc, la + lc)
}

/// Sampled check of the sufficient KS conditions for a tensor map.
pub fn ks_tensor_sufficient(m: &TensorMap, n_samples: usize, seed: u64) -> TriState {
    let violated = |w: &C3| -> Option<Evidence> {
        let n2 = norm3(w).powi(2);
        let (rhs, lhs) = tensor_ks_terms(m, w);
        if rhs < -SAMPLED_SLACK * n2 {
            Some(Evidence::ComplexDirection { w: *w, lhs: 0.0, rhs })
        } else if lhs > rhs + SAMPLED_SLACK * n2 {
            Some(Evidence::ComplexDirection { w: *w, lhs, rhs })
        } else {
            None
        }
    };
    let probes = probe_directions();
    if let Some(e) = probes.iter().find_map(&violated) {
        return TriState::inconclusive(Some(e), "sufficient tensor KS condition violated; not a refutation");
    }
    let mut remaining = n_samples;
    let mut stream = 1;
    while remaining > 0 {
        let mut rng = chunk_rng(seed, stream);
        for _ in 0..remaining.min(1024) {
            let w: C3 = unit_complex(&mut rng);
            if let Some(e) = violated(&w) {
                return TriState::inconclusive(Some(e), "sufficient tensor KS condition violated; not a refutation");
            }
        }
        remaining = remaining.saturating_sub(1024);
        stream += 1;
    }
    TriState::holds_sufficient(format!("tensor KS conditions sampled on {n_samples} directions plus probes"))
}

/// Closed-form sufficient KS test for `T_(λ1,λ2,λ3)`.
pub fn ks_tensor_diag_sufficient(p: &DiagonalTensorParams) -> TriState {
    let forms = tensor_ks_cyclic_forms(p);
    match forms.iter().position(|&(lhs, rhs)| lhs > rhs + BOUNDARY_TOL) {
        None => TriState::holds_sufficient("cyclic tensor KS inequalities"),
        Some(k) => TriState::inconclusive(
            Some(Evidence::Inequality {
                id: format!("tks-cyclic-{}", k + 1),
                lhs: forms[k].0,
                rhs: forms[k].1,
                element: None,
                value: None,
            }),
            "cyclic tensor KS inequality violated; not a refutation",
        ),
    }
}

/// Exact complete-positivity test for `T_(λ1,λ2,λ3)`.
///
/// Interior `|λ3| < 1/2`: `4Σλk² ≤ 1 + 16λ1λ2λ3` and
/// `λ1² + λ2² + √((λ1²+λ2²)² - 4λ1λ2λ3 + λ3²) ≤ 1/2`.
/// On the faces the Choi matrix has a zero diagonal entry, which forces
/// `λ1 = λ2` at `λ3 = 1/2` and `λ1 = -λ2` at `λ3 = -1/2`.
pub fn cp_tensor_diag_exact(p: &DiagonalTensorParams) -> TriState {
    let [l1, l2, l3] = p.as_array();
    let ineq = |id: &str, lhs: f64, rhs: f64| Evidence::Inequality {
        id: id.into(),
        lhs,
        rhs,
        element: None,
        value: None,
    };
    if l3 >= 0.5 - BOUNDARY_TOL {
        let gap = (l1 - l2).abs();
        return if gap <= BOUNDARY_TOL {
            TriState::holds_exact("face λ3 = 1/2 with λ1 = λ2")
        } else {
            TriState::fails(ineq("cp-face-plus", gap, 0.0), "face λ3 = 1/2 needs λ1 = λ2")
        };
    }
    if l3 <= -0.5 + BOUNDARY_TOL {
        let gap = (l1 + l2).abs();
        return if gap <= BOUNDARY_TOL {
            TriState::holds_exact("face λ3 = -1/2 with λ1 = -λ2")
        } else {
            TriState::fails(ineq("cp-face-minus", gap, 0.0), "face λ3 = -1/2 needs λ1 = -λ2")
        };
    }
    let (q_lhs, q_rhs) = tensor_ks_determinant_form(p);
    if q_lhs > q_rhs + BOUNDARY_TOL {
        return TriState::fails(ineq("cp-quadratic", q_lhs, q_rhs), "tensor CP conditions");
    }
    let s = l1 * l1 + l2 * l2;
    let radicand = s * s - 4.0 * l1 * l2 * l3 + l3 * l3;
    let r_lhs = s + radicand.max(0.0).sqrt();
    if r_lhs > 0.5 + BOUNDARY_TOL {
        return TriState::fails(ineq("cp-radical", r_lhs, 0.5), "tensor CP conditions");
    }
    TriState::holds_exact("tensor CP conditions")
}

/// Eigenvalues of the 8×8 Choi matrix of `T_{λ,µ}`, ascending:
/// `½(λ+µ+1 ± 2√(λ²-λµ+µ²))` twice each and `½(1-λ-µ)` four times.
pub fn tlm_choi_spectrum(p: &ScalarPairParams) -> [f64; 8] {
    let (l, m) = (p.lambda, p.mu);
    let r = (l * l - l * m + m * m).sqrt();
    let plus = 0.5 * (l + m + 1.0 + 2.0 * r);
    let minus = 0.5 * (l + m + 1.0 - 2.0 * r);
    let rest = 0.5 * (1.0 - l - m);
    let mut ev = [plus, plus, minus, minus, rest, rest, rest, rest];
    ev.sort_by(f64::total_cmp);
    ev
}

/// Exact complete-positivity test for `T_{λ,µ}`.
pub fn cp_tlm_exact(p: &ScalarPairParams) -> TriState {
    let (l, m) = (p.lambda, p.mu);
    let radical = l + m + 1.0 - 2.0 * (l * l - l * m + m * m).sqrt();
    let ineq = |id: &str, lhs: f64, rhs: f64| Evidence::Inequality {
        id: id.into(),
        lhs,
        rhs,
        element: None,
        value: None,
    };
    if radical < -BOUNDARY_TOL {
        TriState::fails(ineq("tlm-radical", 0.0, radical), "λ+µ+1 ≥ 2√(λ²-λµ+µ²)")
    } else if l + m > 1.0 + BOUNDARY_TOL {
        TriState::fails(ineq("tlm-trace", l + m, 1.0), "λ+µ ≤ 1")
    } else {
        TriState::holds_exact("λ+µ+1 ≥ 2√(λ²-λµ+µ²) and λ+µ ≤ 1")
    }
}

/// `(lhs, rhs)` of `|λ||1-2λ| + |µ||1-2µ| ≤ 1 - 2λ² - 2µ²`.
pub fn tlm_ks_form(p: &ScalarPairParams) -> (f64, f64) {
    let (l, m) = (p.lambda, p.mu);
    (
        l.abs() * (1.0 - 2.0 * l).abs() + m.abs() * (1.0 - 2.0 * m).abs(),
        1.0 - 2.0 * l * l - 2.0 * m * m,
    )
}

/// Closed-form sufficient KS test for `T_{λ,µ}`.
pub fn ks_tlm_sufficient(p: &ScalarPairParams) -> TriState {
    let (lhs, rhs) = tlm_ks_form(p);
    if lhs <= rhs + BOUNDARY_TOL {
        TriState::holds_sufficient("|λ||1-2λ| + |µ||1-2µ| ≤ 1-2λ²-2µ²")
    } else {
        TriState::inconclusive(
            Some(Evidence::Inequality {
                id: "tlm-ks".into(),
                lhs,
                rhs,
                element: None,
                value: None,
            }),
            "scalar tensor KS inequality violated; not a refutation",
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::{choi_matrix_tensor, diag3, scale_mat3, IDENTITY3, ZERO3};
    use crate::classify::Status;
    use crate::linalg::min_eigenvalue;

    fn tdiag(l1: f64, l2: f64, l3: f64) -> DiagonalTensorParams {
        DiagonalTensorParams::new(l1, l2, l3).unwrap()
    }

    fn tlm(l: f64, m: f64) -> ScalarPairParams {
        ScalarPairParams::new(l, m).unwrap()
    }

    fn tmap(a: Mat3, c: Mat3) -> TensorMap {
        TensorMap::new(a, c).unwrap()
    }

    #[test]
    fn positivity_examples() {
        let half = diag3([0.5; 3]);
        assert_eq!(positive_tensor(&tmap(half, half), 256).unwrap().status, Status::HoldsExact);
        assert_eq!(positive_tensor(&tmap(ZERO3, ZERO3), 64).unwrap().status, Status::HoldsExact);
        let v = positive_tensor(&tmap(diag3([0.8, 0.0, 0.0]), diag3([0.3, 0.0, 0.0])), 256).unwrap();
        assert_eq!(v.status, Status::Fails);
        let Some(Evidence::Direction { w, value }) = v.witness else { panic!() };
        assert!((value - 1.1).abs() < 1e-9);
        assert!((w[0].abs() - 1.0).abs() < 1e-6);
        assert!(positive_tensor(&tmap(half, half), 10).is_err());
    }

    #[test]
    fn positivity_sampled_case() {
        let a = [[0.3, 0.1, 0.0], [0.0, 0.2, 0.0], [0.1, 0.0, 0.1]];
        let c = [[0.2, 0.0, 0.0], [0.0, 0.1, 0.3], [0.0, 0.0, 0.1]];
        let v = positive_tensor(&tmap(a, c), 512).unwrap();
        assert_eq!(v.status, Status::HoldsSufficient);
        let big = tmap(scale_mat3(2.0, &a), scale_mat3(2.5, &c));
        assert_eq!(positive_tensor(&big, 512).unwrap().status, Status::Fails);
    }

    #[test]
    fn sphere_ascent_reaches_operator_norm() {
        let a = [[0.2, 0.3, 0.0], [0.1, -0.2, 0.4], [0.0, 0.1, 0.1]];
        let (_, max) = sphere_maximum(&tmap(a, a), 128);
        assert!((max - 2.0 * operator_norm(&a).unwrap()).abs() < 1e-9);
    }

    #[test]
    fn tensor_sufficient_examples() {
        assert_eq!(ks_tensor_sufficient(&tmap(ZERO3, ZERO3), 100, 1).status, Status::HoldsSufficient);
        let q = tmap(scale_mat3(-0.25, &IDENTITY3), scale_mat3(-0.25, &IDENTITY3));
        assert_eq!(ks_tensor_sufficient(&q, 2000, 1).status, Status::HoldsSufficient);
        let r = tmap(scale_mat3(0.5, &IDENTITY3), scale_mat3(-0.3, &IDENTITY3));
        assert_eq!(ks_tensor_sufficient(&r, 2000, 1).status, Status::Inconclusive);
        let w = [Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0), Complex64::new(0.0, 0.0)];
        let (rhs, lhs) = tensor_ks_terms(&r, &w);
        assert!((rhs - 2.0 * 0.32).abs() < 1e-12 && (lhs - 2.0 * 0.48).abs() < 1e-12);
    }

    #[test]
    fn tensor_diag_sufficient_examples() {
        assert_eq!(ks_tensor_diag_sufficient(&tdiag(0.5, 0.5, 0.5)).status, Status::HoldsSufficient);
        assert_eq!(ks_tensor_diag_sufficient(&tdiag(0.0, 0.0, 0.0)).status, Status::HoldsSufficient);
        assert_eq!(ks_tensor_diag_sufficient(&tdiag(0.5, -0.5, 0.5)).status, Status::Inconclusive);
        let t = TensorKsTerms::new(&tdiag(0.1, -0.3, 0.2));
        let cyc = tensor_ks_cyclic_forms(&tdiag(0.1, -0.3, 0.2));
        for ((l, r), (l2, r2)) in t.diagonal_bounds().iter().zip(cyc) {
            assert!(((r - l) - (r2 - l2)).abs() < 1e-12, "{l} {r} {l2} {r2}");
        }
    }

    #[test]
    fn cp_tensor_examples() {
        assert_eq!(cp_tensor_diag_exact(&tdiag(0.0, 0.0, 0.0)).status, Status::HoldsExact);
        assert_eq!(cp_tensor_diag_exact(&tdiag(0.3, 0.3, -0.5)).status, Status::Fails);
        assert_eq!(cp_tensor_diag_exact(&tdiag(0.5, -0.5, -0.5)).status, Status::HoldsExact);
        assert_eq!(cp_tensor_diag_exact(&tdiag(0.1, -0.1, -0.5)).status, Status::HoldsExact);
        assert_eq!(cp_tensor_diag_exact(&tdiag(0.2, 0.2, 0.5)).status, Status::HoldsExact);
        assert_eq!(cp_tensor_diag_exact(&tdiag(-0.5, 0.0, 0.5)).status, Status::Fails);
        let m = TensorMap::diagonal(&tdiag(-0.5, 0.0, 0.5));
        assert!(min_eigenvalue(&choi_matrix_tensor(&m), 1e-12).unwrap() < -0.2);
    }

    #[test]
    fn tlm_examples() {
        assert_eq!(cp_tlm_exact(&tlm(0.0, 0.0)).status, Status::HoldsExact);
        assert_eq!(cp_tlm_exact(&tlm(0.5, 0.5)).status, Status::HoldsExact);
        assert_eq!(cp_tlm_exact(&tlm(1.0, 1.0)).status, Status::Fails);
        assert_eq!(ks_tlm_sufficient(&tlm(0.0, 0.0)).status, Status::HoldsSufficient);
        assert_eq!(ks_tlm_sufficient(&tlm(0.5, 0.5)).status, Status::HoldsSufficient);
        let v = ks_tlm_sufficient(&tlm(0.5, -0.3));
        assert_eq!(v.status, Status::Inconclusive);
        let (lhs, rhs) = tlm_ks_form(&tlm(0.5, -0.3));
        assert!((lhs - 0.48).abs() < 1e-12 && (rhs - 0.32).abs() < 1e-12);
    }

    #[test]
    fn tlm_spectrum_matches_choi() {
        for (l, m) in [(0.3, 0.1), (-0.7, 0.4), (1.0, -1.0), (0.5, 0.5)] {
            let p = tlm(l, m);
            let ev = hermitian_eigenvalues(&choi_matrix_tensor(&TensorMap::scalar_pair(&p)), 1e-12).unwrap();
            for (a, b) in ev.iter().zip(tlm_choi_spectrum(&p)) {
                assert!((a - b).abs() < 1e-10, "({l},{m}): {a} vs {b}");
            }
        }
        let ev = tlm_choi_spectrum(&tlm(0.3, 0.1));
        assert!((ev[4] - 0.5 * (1.4 - 2.0 * 0.07f64.sqrt())).abs() < 1e-14);
    }
}
