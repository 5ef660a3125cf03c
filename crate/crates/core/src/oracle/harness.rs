//! Grid cross-validation of the closed-form classifiers against the oracles.
//!
//! Every grid point is checked at each level (positivity, KS, CP). A level
//! counts as `agree` when an exact verdict matches its oracle or a sufficient
//! verdict is confirmed clean, `resolved_by_oracle` when a sufficient test was
//! silent and the oracle settled it, and `discrepancy` otherwise.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use super::{ks_violation_search, positivity_violation_search, SampleConfig};
use crate::channels::{
    split_phi_psi, DiagonalParams, DiagonalTensorParams, MatrixMap, QubitChannel, ScalarPairParams, TensorMap,
};
use crate::classify::{
    cp_choi_numeric, cp_phi_exact, cp_tensor_diag_exact, cp_tlm_exact, ks_phi_diag_exact, ks_tensor_diag_sufficient,
    ks_tlm_sufficient, positive_tensor, Status, TriState,
};
use crate::error::{Error, Result};

/// A KS failure must be at least this deep to confirm an exact `Fails`.
const CONFIRM_DEPTH: f64 = 1e-6;
const CHOI_TOL: f64 = 1e-9;
const SPHERE_GRID: usize = 256;
const MAX_DETAILS: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum HarnessFamily {
    Phi,
    TensorDiagonal,
    ScalarPair,
}

impl HarnessFamily {
    pub fn name(self) -> &'static str {
        match self {
            HarnessFamily::Phi => "phi",
            HarnessFamily::TensorDiagonal => "tdiag",
            HarnessFamily::ScalarPair => "tlm",
        }
    }

    fn axes(self) -> (usize, f64) {
        match self {
            HarnessFamily::Phi => (3, 1.0),
            HarnessFamily::TensorDiagonal => (3, 0.5),
            HarnessFamily::ScalarPair => (2, 1.0),
        }
    }
}

impl FromStr for HarnessFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "phi" => Ok(HarnessFamily::Phi),
            "tdiag" => Ok(HarnessFamily::TensorDiagonal),
            "tlm" => Ok(HarnessFamily::ScalarPair),
            other => Err(Error::parse(format!("unknown harness family `{other}` (phi, tdiag, tlm)"))),
        }
    }
}

/// A family and the number of points per axis, spread over the closed parameter box.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridSpec {
    pub family: HarnessFamily,
    pub resolution: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HarnessReport {
    pub family: String,
    pub points: usize,
    pub agree: usize,
    pub resolved_by_oracle: usize,
    pub discrepancies: usize,
    /// Points where the tensor map is KS (closed form or clean oracle) but
    /// one of its qubit components `Φ = 2A`, `Ψ = 2C` has a KS witness.
    pub split_not_ks: usize,
    pub details: Vec<String>,
}

impl fmt::Display for HarnessReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "family              {}", self.family)?;
        writeln!(f, "points              {}", self.points)?;
        writeln!(f, "agree               {}", self.agree)?;
        writeln!(f, "resolved_by_oracle  {}", self.resolved_by_oracle)?;
        writeln!(f, "discrepancies       {}", self.discrepancies)?;
        writeln!(f, "split_not_ks        {}", self.split_not_ks)?;
        for d in &self.details {
            writeln!(f, "  {d}")?;
        }
        Ok(())
    }
}

#[derive(Default)]
struct Tally {
    agree: usize,
    resolved: usize,
    discrepancies: usize,
    split_not_ks: usize,
    details: Vec<String>,
}

impl Tally {
    fn record(&mut self, ok: bool, what: impl FnOnce() -> String) {
        if ok {
            self.agree += 1;
        } else {
            self.discrepancies += 1;
            if self.details.len() < MAX_DETAILS {
                self.details.push(what());
            }
        }
    }

    fn absorb(&mut self, other: Tally) {
        self.agree += other.agree;
        self.resolved += other.resolved;
        self.discrepancies += other.discrepancies;
        self.split_not_ks += other.split_not_ks;
        for d in other.details {
            if self.details.len() < MAX_DETAILS {
                self.details.push(d);
            }
        }
    }
}

/// `n` evenly spaced points covering `[-half, half]` including both ends.
pub(crate) fn closed_axis(n: usize, half: f64) -> Vec<f64> {
    if n == 1 {
        return vec![0.0];
    }
    (0..n).map(|i| -half + 2.0 * half * i as f64 / (n - 1) as f64).collect()
}

pub fn agreement_harness(spec: GridSpec, cfg: &SampleConfig) -> Result<HarnessReport> {
    cfg.validate()?;
    if spec.resolution < 2 {
        return Err(Error::usage("harness grid needs at least 2 points per axis"));
    }
    let (dims, half) = spec.family.axes();
    let axis = closed_axis(spec.resolution, half);
    let mut points = Vec::new();
    for &x in &axis {
        for &y in &axis {
            if dims == 2 {
                points.push([x, y, 0.0]);
            } else {
                for &z in &axis {
                    points.push([x, y, z]);
                }
            }
        }
    }

    let mut tally = Tally::default();
    for p in &points {
        tally.absorb(check_point(spec.family, *p, cfg)?);
    }
    Ok(HarnessReport {
        family: spec.family.name().into(),
        points: points.len(),
        agree: tally.agree,
        resolved_by_oracle: tally.resolved,
        discrepancies: tally.discrepancies,
        split_not_ks: tally.split_not_ks,
        details: tally.details,
    })
}

fn check_point(family: HarnessFamily, p: [f64; 3], cfg: &SampleConfig) -> Result<Tally> {
    let mut t = Tally::default();
    match family {
        HarnessFamily::Phi => {
            let params = DiagonalParams::new(p[0], p[1], p[2])?;
            let ch = QubitChannel::diagonal(&params);
            let label = format!("phi:{},{},{}", p[0], p[1], p[2]);

            let pos = positivity_violation_search(&ch, cfg)?;
            t.record(pos.is_none(), || format!("{label}: positivity witness {pos:?}"));

            let exact = ks_phi_diag_exact(&params);
            let witness = ks_violation_search(&ch, cfg)?;
            let ok = match exact.status {
                Status::HoldsExact => witness.is_none(),
                _ => witness.is_some_and(|w| w.violation < -CONFIRM_DEPTH),
            };
            t.record(ok, || format!("{label}: KS {:?} vs oracle {witness:?}", exact.status));

            compare_cp(&mut t, &label, &cp_phi_exact(&params), &ch)?;
        }
        HarnessFamily::TensorDiagonal => {
            let params = DiagonalTensorParams::new(p[0], p[1], p[2])?;
            let m = TensorMap::diagonal(&params);
            let label = format!("tdiag:{},{},{}", p[0], p[1], p[2]);
            tensor_levels(&mut t, &label, &m, ks_tensor_diag_sufficient(&params), cfg)?;
            compare_cp(&mut t, &label, &cp_tensor_diag_exact(&params), &m)?;
        }
        HarnessFamily::ScalarPair => {
            let params = ScalarPairParams::new(p[0], p[1])?;
            let m = TensorMap::scalar_pair(&params);
            let label = format!("tlm:{},{}", p[0], p[1]);
            tensor_levels(&mut t, &label, &m, ks_tlm_sufficient(&params), cfg)?;
            compare_cp(&mut t, &label, &cp_tlm_exact(&params), &m)?;
        }
    }
    Ok(t)
}

fn compare_cp<M: MatrixMap>(t: &mut Tally, label: &str, exact: &TriState, map: &M) -> Result<()> {
    let numeric = cp_choi_numeric(&map.choi_matrix(), CHOI_TOL)?;
    t.record(exact.status == numeric.status, || {
        format!("{label}: CP {:?} vs Choi {:?}", exact.status, numeric.witness)
    });
    Ok(())
}

fn tensor_levels(t: &mut Tally, label: &str, m: &TensorMap, ks: TriState, cfg: &SampleConfig) -> Result<()> {
    let pos_exact = positive_tensor(m, SPHERE_GRID)?;
    let pos = positivity_violation_search(m, cfg)?;
    let ok = match pos_exact.status {
        Status::Fails => pos.is_some(),
        _ => pos.is_none(),
    };
    t.record(ok, || format!("{label}: positivity {:?} vs oracle {pos:?}", pos_exact.status));

    let witness = ks_violation_search(m, cfg)?;
    let ks_clean = match ks.status {
        Status::HoldsSufficient => {
            t.record(witness.is_none(), || format!("{label}: sufficient KS but oracle {witness:?}"));
            witness.is_none()
        }
        _ => {
            t.resolved += 1;
            witness.is_none()
        }
    };
    if ks_clean {
        let (phi, psi) = split_phi_psi(m);
        if ks_violation_search(&phi, cfg)?.is_some() || ks_violation_search(&psi, cfg)?.is_some() {
            t.split_not_ks += 1;
        }
    }
    Ok(())
}
