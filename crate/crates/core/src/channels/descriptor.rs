//! Flat text form of the map families: `phi:λ1,λ2,λ3`, `tdiag:λ1,λ2,λ3`,
//! `tlm:λ,µ` and `tmat:<A row-major>,<C row-major>` (18 reals).

use std::fmt;
use std::str::FromStr;

use super::{DiagonalParams, DiagonalTensorParams, Mat3, ScalarPairParams, TensorMap};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FamilyDescriptor {
    Phi(DiagonalParams),
    TensorDiagonal(DiagonalTensorParams),
    ScalarPair(ScalarPairParams),
    TensorMatrix(TensorMap),
}

impl FamilyDescriptor {
    pub fn family_name(&self) -> &'static str {
        match self {
            FamilyDescriptor::Phi(_) => "phi",
            FamilyDescriptor::TensorDiagonal(_) => "tdiag",
            FamilyDescriptor::ScalarPair(_) => "tlm",
            FamilyDescriptor::TensorMatrix(_) => "tmat",
        }
    }
}

fn parse_reals(body: &str, expected: usize, family: &str) -> Result<Vec<f64>> {
    let values = body
        .split(',')
        .map(|s| {
            let s = s.trim();
            s.parse::<f64>()
                .map_err(|_| Error::parse(format!("`{s}` is not a number in `{family}:` descriptor")))
        })
        .collect::<Result<Vec<f64>>>()?;
    if values.len() != expected {
        return Err(Error::parse(format!(
            "`{family}:` takes {expected} values, got {}",
            values.len()
        )));
    }
    if let Some(v) = values.iter().find(|v| !v.is_finite()) {
        return Err(Error::parse(format!("non-finite value {v} in `{family}:`")));
    }
    Ok(values)
}

fn to_mat3(v: &[f64]) -> Mat3 {
    [[v[0], v[1], v[2]], [v[3], v[4], v[5]], [v[6], v[7], v[8]]]
}

impl FromStr for FamilyDescriptor {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (family, body) = s
            .trim()
            .split_once(':')
            .ok_or_else(|| Error::parse(format!("descriptor `{s}` lacks a `family:` prefix")))?;
        // range violations surface as parse errors at this boundary
        let range = |e: Error| Error::parse(e.to_string());
        match family {
            "phi" => {
                let v = parse_reals(body, 3, family)?;
                DiagonalParams::new(v[0], v[1], v[2])
                    .map(FamilyDescriptor::Phi)
                    .map_err(range)
            }
            "tdiag" => {
                let v = parse_reals(body, 3, family)?;
                DiagonalTensorParams::new(v[0], v[1], v[2])
                    .map(FamilyDescriptor::TensorDiagonal)
                    .map_err(range)
            }
            "tlm" => {
                let v = parse_reals(body, 2, family)?;
                ScalarPairParams::new(v[0], v[1])
                    .map(FamilyDescriptor::ScalarPair)
                    .map_err(range)
            }
            "tmat" => {
                let v = parse_reals(body, 18, family)?;
                TensorMap::new(to_mat3(&v[..9]), to_mat3(&v[9..]))
                    .map(FamilyDescriptor::TensorMatrix)
                    .map_err(range)
            }
            other => Err(Error::parse(format!("unknown family `{other}`"))),
        }
    }
}

impl fmt::Display for FamilyDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilyDescriptor::Phi(p) => write!(f, "phi:{},{},{}", p.l1, p.l2, p.l3),
            FamilyDescriptor::TensorDiagonal(p) => write!(f, "tdiag:{},{},{}", p.l1, p.l2, p.l3),
            FamilyDescriptor::ScalarPair(p) => write!(f, "tlm:{},{}", p.lambda, p.mu),
            FamilyDescriptor::TensorMatrix(m) => {
                let vals: Vec<String> = m
                    .a
                    .iter()
                    .chain(&m.c)
                    .flatten()
                    .map(|v| v.to_string())
                    .collect();
                write!(f, "tmat:{}", vals.join(","))
            }
        }
    }
}
