//! Classifiers for the diagonal qubit channels `Φ_(λ1,λ2,λ3)` and for general real `T`.

use num_complex::Complex64;

use super::{Evidence, TriState, BOUNDARY_TOL};
use crate::channels::{DiagonalParams, QubitChannel};
use crate::oracle::{chunk_rng, probe_directions, unit_complex};
use crate::pauli::{apply_real3, bracket, conj3, norm3, sub3, PauliElement, C3};

/// The quantities `α, β, γ` and `A, B, C` of a diagonal channel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiagKsTerms {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl DiagKsTerms {
    pub fn new(p: &DiagonalParams) -> Self {
        let [l1, l2, l3] = p.as_array();
        DiagKsTerms {
            alpha: (1.0 - l1 * l1).abs(),
            beta: (1.0 - l2 * l2).abs(),
            gamma: (1.0 - l3 * l3).abs(),
            a: (l1 - l2 * l3).powi(2),
            b: (l2 - l1 * l3).powi(2),
            c: (l3 - l1 * l2).powi(2),
        }
    }

    /// `(lhs, rhs)` of `C ≤ αβ`, `B ≤ αγ`, `A ≤ βγ`.
    pub fn pairwise_bounds(&self) -> [(f64, f64); 3] {
        [
            (self.c, self.alpha * self.beta),
            (self.b, self.alpha * self.gamma),
            (self.a, self.beta * self.gamma),
        ]
    }

    /// `(lhs, rhs)` of `B + C ≤ α²`, `A + C ≤ β²`, `A + B ≤ γ²`.
    pub fn diagonal_bounds(&self) -> [(f64, f64); 3] {
        [
            (self.b + self.c, self.alpha * self.alpha),
            (self.a + self.c, self.beta * self.beta),
            (self.a + self.b, self.gamma * self.gamma),
        ]
    }
}

/// `(lhs, rhs)` of `(1+λk²)(3+λi²+λj²-λk²) ≤ 4(1+λ1λ2λ3)` for `k = 1, 2, 3`.
pub fn ks_cyclic_forms(p: &DiagonalParams) -> [(f64, f64); 3] {
    let l = p.as_array();
    let rhs = 4.0 * (1.0 + l[0] * l[1] * l[2]);
    let sq = l.map(|v| v * v);
    [0, 1, 2].map(|k| {
        let (i, j) = ((k + 1) % 3, (k + 2) % 3);
        ((1.0 + sq[k]) * (3.0 + sq[i] + sq[j] - sq[k]), rhs)
    })
}

/// `(lhs, rhs)` of `λ1² + λ2² + λ3² ≤ 1 + 2λ1λ2λ3`.
pub fn ks_determinant_form(p: &DiagonalParams) -> (f64, f64) {
    let [l1, l2, l3] = p.as_array();
    (l1 * l1 + l2 * l2 + l3 * l3, 1.0 + 2.0 * l1 * l2 * l3)
}

/// Exact Kadison-Schwarz test for `Φ_(λ1,λ2,λ3)`.
///
/// The defect at `w = s·e_i + i t·e_j` has minimum eigenvalue
/// `α_i s² + α_j t² - 2|λk - λiλj||st|`, so the map is KS iff every pairwise
/// bound `(λk - λiλj)² ≤ α_i α_j` holds; a failure comes with that `w`.
pub fn ks_phi_diag_exact(p: &DiagonalParams) -> TriState {
    let l = p.as_array();
    let terms = DiagKsTerms::new(p);
    let planes = [(0usize, 1usize, 2usize), (0, 2, 1), (1, 2, 0)];
    let alphas = [terms.alpha, terms.beta, terms.gamma];
    let bounds = terms.pairwise_bounds();

    let mut worst: Option<(usize, f64, PauliElement)> = None;
    for (n, &(i, j, k)) in planes.iter().enumerate() {
        let (lhs, rhs) = bounds[n];
        if lhs <= rhs + BOUNDARY_TOL {
            continue;
        }
        let kk = (l[k] - l[i] * l[j]).abs();
        let (value, s, t) = min_eigenpair_2x2(alphas[i], alphas[j], -kk);
        let mut w = [Complex64::new(0.0, 0.0); 3];
        w[i] = Complex64::new(s.abs(), 0.0);
        w[j] = Complex64::new(0.0, t.abs());
        let x = PauliElement::new(Complex64::new(0.0, 0.0), w);
        if worst.as_ref().is_none_or(|(_, v, _)| value < *v) {
            worst = Some((n, value, x));
        }
    }
    match worst {
        None => TriState::holds_exact("pairwise KS bounds (λk - λiλj)² ≤ (1-λi²)(1-λj²)"),
        Some((n, value, x)) => {
            let ids = ["ks-pair-12", "ks-pair-13", "ks-pair-23"];
            TriState::fails(
                Evidence::Inequality {
                    id: ids[n].into(),
                    lhs: bounds[n].0,
                    rhs: bounds[n].1,
                    element: Some(x),
                    value: Some(value),
                },
                "pairwise KS bounds",
            )
        }
    }
}

/// Smallest eigenvalue of `[[a, b], [b, d]]` and a unit eigenvector.
fn min_eigenpair_2x2(a: f64, d: f64, b: f64) -> (f64, f64, f64) {
    let mean = 0.5 * (a + d);
    let r = (0.25 * (a - d).powi(2) + b * b).sqrt();
    let value = mean - r;
    // (b, value - a) and (value - d, b) both solve the system; take the better conditioned
    let (s, t) = if (value - a).abs() + b.abs() >= (value - d).abs() + b.abs() {
        (b, value - a)
    } else {
        (value - d, b)
    };
    let n = (s * s + t * t).sqrt();
    if n == 0.0 {
        // b = 0 and a = d: any vector, pick the first axis
        return (value, 1.0, 0.0);
    }
    (value, s / n, t / n)
}

/// The three cyclic inequalities: sufficient for KS, never a refutation.
pub fn ks_phi_diag_sufficient(p: &DiagonalParams) -> TriState {
    let forms = ks_cyclic_forms(p);
    match forms.iter().position(|&(lhs, rhs)| lhs > rhs + BOUNDARY_TOL) {
        None => TriState::holds_sufficient("cyclic KS inequalities"),
        Some(k) => TriState::inconclusive(
            Some(Evidence::Inequality {
                id: format!("ks-cyclic-{}", k + 1),
                lhs: forms[k].0,
                rhs: forms[k].1,
                element: None,
                value: None,
            }),
            "cyclic KS inequality violated; not a refutation",
        ),
    }
}

/// `(‖Tw‖, ‖T[w,w̄] - [Tw,Tw̄]‖, ‖w‖² - ‖Tw‖²)` for a real `T`.
pub fn ks_channel_terms(ch: &QubitChannel, w: &C3) -> (f64, f64, f64) {
    let tw = apply_real3(&ch.t, w);
    let wbar = conj3(w);
    let twbar = apply_real3(&ch.t, &wbar);
    let lhs = norm3(&sub3(&apply_real3(&ch.t, &bracket(w, &wbar)), &bracket(&tw, &twbar)));
    let ntw = norm3(&tw);
    (ntw, lhs, norm3(w).powi(2) - ntw * ntw)
}

/// Samples the contraction and bracket conditions that characterize KS for a real `T`.
pub fn ks_phi_general(ch: &QubitChannel, n_samples: usize, seed: u64) -> TriState {
    let mut worst: Option<(f64, C3, f64, f64)> = None;
    let mut consider = |w: C3| {
        let nw = norm3(&w);
        let (ntw, lhs, rhs) = ks_channel_terms(ch, &w);
        let (excess, l, r) = if ntw > nw * (1.0 + 1e-12) {
            (ntw - nw, ntw, nw)
        } else {
            (lhs - rhs - 1e-10 * nw * nw, lhs, rhs)
        };
        if excess > 0.0 && worst.as_ref().is_none_or(|(e, ..)| excess > *e) {
            worst = Some((excess, w, l, r));
        }
    };
    for w in probe_directions() {
        consider(w);
    }
    let mut remaining = n_samples;
    let mut stream = 1;
    while remaining > 0 {
        let mut rng = chunk_rng(seed, stream);
        for _ in 0..remaining.min(1024) {
            consider(unit_complex(&mut rng));
        }
        remaining = remaining.saturating_sub(1024);
        stream += 1;
    }
    match worst {
        None => TriState::holds_sufficient(format!(
            "bracket condition sampled on {n_samples} directions plus probes"
        )),
        Some((_, w, lhs, rhs)) => TriState::fails(
            Evidence::ComplexDirection { w, lhs, rhs },
            "bracket condition violated",
        ),
    }
}

/// Ruskai-Szarek-Werner conditions for a diagonal qubit channel.
pub fn cp_phi_exact(p: &DiagonalParams) -> TriState {
    let [l1, l2, l3] = p.as_array();
    let s = l1 * l1 + l2 * l2 + l3 * l3;
    let forms = [
        ("cp-sum", (l1 + l2).powi(2), (1.0 + l3).powi(2)),
        ("cp-difference", (l1 - l2).powi(2), (1.0 - l3).powi(2)),
        (
            "cp-determinant",
            4.0 * (l1 * l1 * l2 * l2 + l2 * l2 * l3 * l3 + l1 * l1 * l3 * l3 - 2.0 * l1 * l2 * l3),
            (1.0 - s).powi(2),
        ),
    ];
    match forms.iter().find(|f| f.1 > f.2 + BOUNDARY_TOL) {
        None => TriState::holds_exact("Ruskai-Szarek-Werner conditions"),
        Some(&(id, lhs, rhs)) => TriState::fails(
            Evidence::Inequality {
                id: id.into(),
                lhs,
                rhs,
                element: None,
                value: None,
            },
            "Ruskai-Szarek-Werner conditions",
        ),
    }
}

/// KS for `Φ_(2λ,2λ,2λ)`: holds exactly on `λ ∈ [-1/4, 1/2]`.
pub fn ks_phi_scalar_interval(lambda: f64) -> TriState {
    if (-0.25..=0.5).contains(&lambda) {
        TriState::holds_exact("scalar interval [-1/4, 1/2]")
    } else {
        let (lhs, rhs) = if lambda < -0.25 { (-0.25, lambda) } else { (lambda, 0.5) };
        TriState::fails(
            Evidence::Inequality {
                id: "scalar-interval".into(),
                lhs,
                rhs,
                element: None,
                value: None,
            },
            "scalar interval [-1/4, 1/2]",
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::diag3;
    use crate::classify::Status;
    use crate::oracle::ks_defect;
    use crate::linalg::min_eigenvalue;

    fn p(l1: f64, l2: f64, l3: f64) -> DiagonalParams {
        DiagonalParams::new(l1, l2, l3).unwrap()
    }

    #[test]
    fn exact_examples() {
        assert_eq!(ks_phi_diag_exact(&p(1.0, 1.0, 1.0)).status, Status::HoldsExact);
        assert_eq!(ks_phi_diag_exact(&p(1.0, -1.0, 1.0)).status, Status::Fails);
        assert_eq!(ks_phi_diag_exact(&p(0.6, 0.5, 0.0)).status, Status::HoldsExact);
        // outside the cyclic inequalities yet KS
        assert_eq!(ks_phi_diag_exact(&p(-0.8, -0.6, 0.0)).status, Status::HoldsExact);
        assert_eq!(ks_phi_diag_sufficient(&p(-0.8, -0.6, 0.0)).status, Status::Inconclusive);
    }

    #[test]
    fn cyclic_form_values() {
        let f = ks_cyclic_forms(&p(0.6, 0.5, 0.0));
        for (got, want) in f.iter().zip([3.9304, 3.8875, 3.61]) {
            assert!((got.0 - want).abs() < 1e-12);
            assert!((got.1 - 4.0).abs() < 1e-12);
        }
        let t = DiagKsTerms::new(&p(0.6, 0.5, 0.0));
        for ((lhs, rhs), (l2, r2)) in t.diagonal_bounds().iter().zip(f) {
            assert!(((rhs - lhs) - (r2 - l2)).abs() < 1e-12);
        }
        assert_eq!(ks_cyclic_forms(&p(1.0, -1.0, 1.0))[0], (8.0, 0.0));
    }

    #[test]
    fn failure_witness_realizes_the_defect() {
        for l in [[1.0, -1.0, 1.0], [0.9, -0.9, 0.5], [-0.7, 0.8, 0.9], [0.5, 0.5, -0.9]] {
            let params = p(l[0], l[1], l[2]);
            let v = ks_phi_diag_exact(&params);
            let Some(Evidence::Inequality { element: Some(x), value: Some(value), .. }) = v.witness else {
                panic!("{l:?} should fail with an element");
            };
            assert!(value < 0.0);
            let d = ks_defect(&QubitChannel::diagonal(&params), &x);
            assert!((min_eigenvalue(&d, 1e-12).unwrap() - value).abs() < 1e-12);
        }
    }

    #[test]
    fn general_sampler_examples() {
        let id = QubitChannel::identity();
        assert_eq!(ks_phi_general(&id, 1000, 1).status, Status::HoldsSufficient);
        let tr = QubitChannel::diagonal(&p(1.0, -1.0, 1.0));
        let v = ks_phi_general(&tr, 10, 1);
        assert_eq!(v.status, Status::Fails);
        assert!(matches!(v.witness, Some(Evidence::ComplexDirection { .. })));
        let good = QubitChannel::diagonal(&p(0.6, 0.5, 0.0));
        assert_eq!(ks_phi_general(&good, 100_000, 1).status, Status::HoldsSufficient);
        let expanding = QubitChannel::new(diag3([1.2, 0.0, 0.0])).unwrap();
        assert_eq!(ks_phi_general(&expanding, 10, 1).status, Status::Fails);
    }

    #[test]
    fn cp_examples() {
        assert_eq!(cp_phi_exact(&p(1.0, 1.0, 1.0)).status, Status::HoldsExact);
        let v = cp_phi_exact(&p(1.0, -1.0, 1.0));
        assert_eq!(v.status, Status::Fails);
        let v = cp_phi_exact(&p(0.6, 0.5, 0.0));
        let Some(Evidence::Inequality { id, .. }) = v.witness else { panic!() };
        assert_eq!(id, "cp-sum");
        // the determinant condition fails there as well: 0.36 > 0.1521
        let v = cp_phi_exact(&p(0.6, 0.0, 0.5));
        assert_eq!(v.status, Status::Fails);
    }

    #[test]
    fn scalar_interval() {
        assert_eq!(ks_phi_scalar_interval(0.5).status, Status::HoldsExact);
        assert_eq!(ks_phi_scalar_interval(-0.25).status, Status::HoldsExact);
        assert_eq!(ks_phi_scalar_interval(-0.3).status, Status::Fails);
        for i in 0..=200 {
            let l = -0.5 + i as f64 / 200.0;
            let exact = ks_phi_diag_exact(&p(2.0 * l, 2.0 * l, 2.0 * l)).status;
            assert_eq!(exact, ks_phi_scalar_interval(l).status, "λ = {l}");
        }
    }

    #[test]
    fn eigenpair_2x2() {
        let (v, s, t) = min_eigenpair_2x2(1.0, 1.0, -2.0);
        assert!((v + 1.0).abs() < 1e-15);
        assert!((s - t).abs() < 1e-15);
        assert_eq!(min_eigenpair_2x2(2.0, 2.0, 0.0), (2.0, 1.0, 0.0));
    }
}
