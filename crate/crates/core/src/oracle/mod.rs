//! Definition-level searches for violations of the Kadison-Schwarz inequality
//! `Φ(x)*Φ(x) ≤ Φ(x*x)` and of positivity, independent of every closed form.
//!
//! Samples are split into fixed-size chunks, each drawing from its own
//! ChaCha8 stream, so the reported witness depends only on the seed.

mod harness;

pub use harness::{agreement_harness, GridSpec, HarnessFamily, HarnessReport};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;

use crate::channels::MatrixMap;
use crate::error::{Error, Result};
use crate::linalg::{self, ComplexMatrix};
use crate::pauli::{real3, PauliElement, C3};

pub const DEFAULT_SEED: u64 = 7;

const CHUNK: usize = 1024;
const DEFECT_HERMITIAN_TOL: f64 = 1e-12;
const REDUCTION_TOL: f64 = 1e-10;
const REFINE_STARTS: usize = 4;
const REFINE_ITERS: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SampleConfig {
    pub n_samples: usize,
    pub seed: u64,
    /// A defect eigenvalue below `-tol` counts as a violation.
    pub tol: f64,
    pub probe_set_enabled: bool,
}

impl SampleConfig {
    pub fn new(n_samples: usize, seed: u64, tol: f64) -> Result<Self> {
        let cfg = SampleConfig {
            n_samples,
            seed,
            tol,
            probe_set_enabled: true,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_samples == 0 {
            return Err(Error::usage("n_samples must be at least 1"));
        }
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(Error::usage(format!("tol must be positive, got {}", self.tol)));
        }
        Ok(())
    }
}

impl Default for SampleConfig {
    fn default() -> Self {
        SampleConfig {
            n_samples: 10_000,
            seed: DEFAULT_SEED,
            tol: 1e-8,
            probe_set_enabled: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum DefectKind {
    #[serde(rename = "ks")]
    Ks,
    #[serde(rename = "positivity")]
    Positivity,
}

/// An input at which the tested inequality fails.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Witness {
    pub x: PauliElement,
    /// Most negative eigenvalue of the defect (or of the output for positivity).
    pub violation: f64,
    pub defect_kind: DefectKind,
}

/// `Φ(x*x) - Φ(x)*Φ(x)`.
pub fn ks_defect<M: MatrixMap + ?Sized>(map: &M, x: &PauliElement) -> ComplexMatrix {
    let fx = map.apply_element(x);
    let lhs = map.apply_element(&x.star_square());
    &lhs - &(&linalg::adjoint(&fx) * &fx)
}

/// Structured directions `e_j` and `(e_j ± i·e_k)/√2`, `j ≠ k`.
pub fn probe_directions() -> Vec<C3> {
    let z = Complex64::new(0.0, 0.0);
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let mut out = Vec::with_capacity(15);
    for j in 0..3 {
        let mut e = [z; 3];
        e[j] = Complex64::new(1.0, 0.0);
        out.push(e);
    }
    for j in 0..3 {
        for k in 0..3 {
            if j == k {
                continue;
            }
            for s in [1.0, -1.0] {
                let mut w = [z; 3];
                w[j] = Complex64::new(h, 0.0);
                w[k] = Complex64::new(0.0, s * h);
                out.push(w);
            }
        }
    }
    out
}

/// Uniform point on the unit sphere of `C^n` as `n` complex coordinates.
pub(crate) fn unit_complex<const N: usize>(rng: &mut impl Rng) -> [Complex64; N] {
    loop {
        let mut v = [Complex64::new(0.0, 0.0); N];
        for z in v.iter_mut() {
            *z = Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal));
        }
        let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if n > 1e-300 {
            return v.map(|z| z / n);
        }
    }
}

pub(crate) fn chunk_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Minimum eigenvalue with a closed form for 2×2.
fn min_eig(d: &ComplexMatrix) -> Result<f64> {
    if d.dim() == 2 {
        let a = d[(0, 0)].re;
        let b = d[(1, 1)].re;
        let off = 0.5 * (d[(0, 1)] + d[(1, 0)].conj());
        let half = 0.5 * (a - b);
        return Ok(0.5 * (a + b) - (half * half + off.norm_sqr()).sqrt());
    }
    linalg::min_eigenvalue(d, DEFECT_HERMITIAN_TOL.max(1e-10))
}

/// Whether `d + shift·1` admits a Cholesky factorization, i.e. `λ_min(d) > -shift`.
fn cholesky_ok(d: &ComplexMatrix, shift: f64) -> bool {
    let n = d.dim();
    let mut l = [[Complex64::new(0.0, 0.0); linalg::MAX_DIM]; linalg::MAX_DIM];
    for j in 0..n {
        let mut diag = d[(j, j)].re + shift;
        for k in 0..j {
            diag -= l[j][k].norm_sqr();
        }
        if diag <= 0.0 {
            return false;
        }
        let ljj = diag.sqrt();
        l[j][j] = Complex64::new(ljj, 0.0);
        for i in j + 1..n {
            let mut s = d[(i, j)];
            for k in 0..j {
                s -= l[i][k] * l[j][k].conj();
            }
            l[i][j] = s / ljj;
        }
    }
    true
}

/// Violation of `d` if its minimum eigenvalue is below `-tol`.
fn violation(d: &ComplexMatrix, tol: f64) -> Result<Option<f64>> {
    if d.dim() > 2 && cholesky_ok(d, tol) {
        return Ok(None);
    }
    let m = min_eig(d)?;
    Ok((m < -tol).then_some(m))
}

fn checked_defect<M: MatrixMap + ?Sized>(map: &M, x: &PauliElement) -> Result<ComplexMatrix> {
    let d = ks_defect(map, x);
    let h = d.hermiticity_defect();
    if h > DEFECT_HERMITIAN_TOL * d.frobenius_norm().max(1.0) {
        return Err(Error::Numeric(format!(
            "KS defect is not Hermitian (defect {h:e}); the map does not preserve adjoints"
        )));
    }
    Ok(d)
}

/// Checks on a few random inputs that the KS defect is unchanged by `x ↦ x + c·1`
/// and scales as `|c|²` under `x ↦ c·x`, which licenses sampling `w0 = 0`, `‖w‖ = 1`.
pub fn sampling_reduction_holds<M: MatrixMap + ?Sized>(map: &M, seed: u64) -> Result<bool> {
    let mut rng = chunk_rng(seed, u64::MAX);
    for _ in 0..8 {
        let v: [Complex64; 4] = unit_complex(&mut rng);
        let x = PauliElement::new(v[0], [v[1], v[2], v[3]]);
        let c = Complex64::new(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0));
        let d = checked_defect(map, &x)?;
        let scale = d.frobenius_norm().max(1.0);

        let shifted = PauliElement::new(x.w0 + c, x.w);
        let dt = checked_defect(map, &shifted)?;
        if dt.max_abs_diff(&d) > REDUCTION_TOL * scale * (1.0 + c.norm_sqr()) {
            return Ok(false);
        }
        let ds = checked_defect(map, &x.scale(c))?;
        if ds.max_abs_diff(&d.scale_real(c.norm_sqr())) > REDUCTION_TOL * scale * (1.0 + c.norm_sqr()) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Debug, Clone, Copy)]
struct Found {
    violation: f64,
    chunk: u64,
    index: usize,
    x: PauliElement,
}

fn worse(a: &Found, b: &Found) -> bool {
    a.violation < b.violation || (a.violation == b.violation && (a.chunk, a.index) < (b.chunk, b.index))
}

fn merge(acc: Option<Found>, f: Option<Found>) -> Option<Found> {
    match (acc, f) {
        (Some(a), Some(b)) => Some(if worse(&b, &a) { b } else { a }),
        (a, b) => a.or(b),
    }
}

/// Input layout used by the sampler: `w0 = 0` on the unit sphere of `C³`,
/// or all four coefficients on the unit sphere of `C⁴`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Layout {
    Reduced,
    Full,
}

impl Layout {
    fn draw(self, rng: &mut ChaCha8Rng) -> PauliElement {
        match self {
            Layout::Reduced => {
                let w: [Complex64; 3] = unit_complex(rng);
                PauliElement::new(Complex64::new(0.0, 0.0), w)
            }
            Layout::Full => {
                let v: [Complex64; 4] = unit_complex(rng);
                PauliElement::new(v[0], [v[1], v[2], v[3]])
            }
        }
    }

    fn to_coords(self, x: &PauliElement) -> Vec<f64> {
        let mut out = Vec::with_capacity(8);
        if self == Layout::Full {
            out.extend([x.w0.re, x.w0.im]);
        }
        for z in &x.w {
            out.extend([z.re, z.im]);
        }
        out
    }

    fn from_coords(self, v: &[f64]) -> PauliElement {
        let n = v.iter().map(|a| a * a).sum::<f64>().sqrt();
        let c = |i: usize| Complex64::new(v[2 * i] / n, v[2 * i + 1] / n);
        match self {
            Layout::Reduced => PauliElement::new(Complex64::new(0.0, 0.0), [c(0), c(1), c(2)]),
            Layout::Full => PauliElement::new(c(0), [c(1), c(2), c(3)]),
        }
    }
}

/// Samples the KS defect and returns the worst violating input, if any.
///
/// The probe set (when enabled) and `n_samples` random unit inputs are
/// evaluated; for 2×2-valued maps the most negative samples are then polished
/// by a derivative-free descent on the sphere.
pub fn ks_violation_search<M: MatrixMap + ?Sized>(map: &M, cfg: &SampleConfig) -> Result<Option<Witness>> {
    cfg.validate()?;
    let layout = if sampling_reduction_holds(map, cfg.seed)? {
        Layout::Reduced
    } else {
        Layout::Full
    };
    let tol = cfg.tol;
    let mut ranked: Vec<(f64, PauliElement)> = Vec::new();
    let qubit = map.output_dim() == 2;

    let mut worst = None;
    if cfg.probe_set_enabled {
        for (index, w) in probe_directions().into_iter().enumerate() {
            let x = PauliElement::new(Complex64::new(0.0, 0.0), w);
            let d = checked_defect(map, &x)?;
            if qubit {
                ranked.push((min_eig(&d)?, x));
            }
            if let Some(v) = violation(&d, tol)? {
                worst = merge(worst, Some(Found { violation: v, chunk: 0, index, x }));
            }
        }
    }

    let chunks = cfg.n_samples.div_ceil(CHUNK);
    let per_chunk: Vec<Result<(Option<Found>, Vec<(f64, PauliElement)>)>> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = chunk_rng(cfg.seed, c as u64 + 1);
            let len = CHUNK.min(cfg.n_samples - c * CHUNK);
            let mut local = None;
            let mut best: Vec<(f64, PauliElement)> = Vec::new();
            for index in 0..len {
                let x = layout.draw(&mut rng);
                let d = checked_defect(map, &x)?;
                if qubit {
                    let m = min_eig(&d)?;
                    keep_lowest(&mut best, (m, x));
                    if m < -tol {
                        local = merge(local, Some(Found { violation: m, chunk: c as u64 + 1, index, x }));
                    }
                } else if let Some(v) = violation(&d, tol)? {
                    local = merge(local, Some(Found { violation: v, chunk: c as u64 + 1, index, x }));
                }
            }
            Ok((local, best))
        })
        .collect();
    for r in per_chunk {
        let (found, best) = r?;
        worst = merge(worst, found);
        for b in best {
            keep_lowest(&mut ranked, b);
        }
    }
    ranked.sort_by(|a, b| a.0.total_cmp(&b.0));
    ranked.truncate(REFINE_STARTS);

    for (start, (_, x0)) in ranked.into_iter().enumerate() {
        let (m, x) = refine(map, layout, &x0)?;
        if m < -tol {
            worst = merge(worst, Some(Found { violation: m, chunk: u64::MAX, index: start, x }));
        }
    }

    Ok(worst.map(|f| Witness {
        x: f.x,
        violation: f.violation,
        defect_kind: DefectKind::Ks,
    }))
}

fn keep_lowest(best: &mut Vec<(f64, PauliElement)>, item: (f64, PauliElement)) {
    if best.len() < REFINE_STARTS {
        best.push(item);
        return;
    }
    let (imax, vmax) = best
        .iter()
        .enumerate()
        .map(|(i, b)| (i, b.0))
        .fold((0, f64::NEG_INFINITY), |acc, p| if p.1 > acc.1 { p } else { acc });
    if item.0 < vmax {
        best[imax] = item;
    }
}

/// Coordinate-perturbation descent of `λ_min(D(x))` on the unit sphere.
fn refine<M: MatrixMap + ?Sized>(map: &M, layout: Layout, x0: &PauliElement) -> Result<(f64, PauliElement)> {
    let eval = |v: &[f64]| -> Result<f64> { min_eig(&checked_defect(map, &layout.from_coords(v))?) };
    let mut v = layout.to_coords(x0);
    let mut fv = eval(&v)?;
    let mut step = 0.25;
    for _ in 0..REFINE_ITERS {
        let mut improved = false;
        for i in 0..v.len() {
            for s in [step, -step] {
                let mut t = v.clone();
                t[i] += s;
                let ft = eval(&t)?;
                if ft < fv {
                    v = t;
                    fv = ft;
                    improved = true;
                }
            }
        }
        if !improved {
            step *= 0.5;
            if step < 1e-9 {
                break;
            }
        }
    }
    Ok((fv, layout.from_coords(&v)))
}

/// Samples positive inputs `1 + w·σ`, `w` uniform in the closed unit ball of
/// `R³` (plus `±e_k` on the sphere), and reports a negative output eigenvalue.
pub fn positivity_violation_search<M: MatrixMap + ?Sized>(map: &M, cfg: &SampleConfig) -> Result<Option<Witness>> {
    cfg.validate()?;
    let tol = cfg.tol;
    let check = |x: PauliElement| -> Result<Option<f64>> {
        let out = map.apply_element(&x);
        if !out.is_hermitian(1e-10) {
            return Err(Error::Numeric("map sends a positive input to a non-Hermitian output".into()));
        }
        violation(&out, tol)
    };

    let mut worst = None;
    if cfg.probe_set_enabled {
        for k in 0..6 {
            let mut w = [0.0; 3];
            w[k % 3] = if k < 3 { 1.0 } else { -1.0 };
            let x = PauliElement::real(1.0, w);
            if let Some(v) = check(x)? {
                worst = merge(worst, Some(Found { violation: v, chunk: 0, index: k, x }));
            }
        }
    }

    let chunks = cfg.n_samples.div_ceil(CHUNK);
    let per_chunk: Vec<Result<Option<Found>>> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = chunk_rng(cfg.seed, c as u64 + 1);
            let len = CHUNK.min(cfg.n_samples - c * CHUNK);
            let mut local = None;
            for index in 0..len {
                let dir: [Complex64; 3] = unit_complex(&mut rng);
                let mut w = dir.map(|z| z.re);
                let n = w.iter().map(|a| a * a).sum::<f64>().sqrt();
                let r: f64 = rng.random::<f64>().cbrt();
                if n > 0.0 {
                    w = w.map(|a| r * a / n);
                }
                let x = PauliElement::new(Complex64::new(1.0, 0.0), real3(w));
                if let Some(v) = check(x)? {
                    local = merge(local, Some(Found { violation: v, chunk: c as u64 + 1, index, x }));
                }
            }
            Ok(local)
        })
        .collect();
    for r in per_chunk {
        worst = merge(worst, r?);
    }
    Ok(worst.map(|f| Witness {
        x: f.x,
        violation: f.violation,
        defect_kind: DefectKind::Positivity,
    }))
}
