//! Region scans on cell-centred grids, written as CSV and optional PGM rasters.

use std::io::Write;

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::channels::{
    choi_matrix_qubit, choi_matrix_tensor, DiagonalParams, DiagonalTensorParams, QubitChannel, ScalarPairParams,
    TensorMap,
};
use crate::classify::{cp_choi_numeric, cp_tlm_exact, ks_tlm_sufficient, Status};
use crate::error::{Error, Result};
use crate::oracle::chunk_rng;

const CHOI_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, clap::ValueEnum)]
pub enum Figure {
    /// `(a, b)` plane of `T_(a,a,b)` against `Φ_(2a,2a,2b)`.
    Fig1,
    /// `(λ, µ)` plane of `T_{λ,µ}`.
    Fig2,
}

impl Figure {
    pub fn columns(self) -> &'static [&'static str] {
        match self {
            Figure::Fig1 => &["t_cp", "phi_cp"],
            Figure::Fig2 => &["cp", "ks_sufficient", "ks_scalar_components"],
        }
    }

    /// `(lo, hi)` shared by both axes.
    pub fn range(self) -> (f64, f64) {
        match self {
            Figure::Fig1 => (-0.5, 0.5),
            Figure::Fig2 => (-1.0, 1.0),
        }
    }

    /// Predicate flags at one point, in column order.
    pub fn flags(self, x: f64, y: f64) -> Result<Vec<bool>> {
        Ok(match self {
            Figure::Fig1 => {
                let (a, b) = (x, y);
                vec![
                    b.abs() < 0.5 && a * a <= (1.0 + 2.0 * b) / 8.0,
                    a * a <= (1.0 + 2.0 * b).powi(2) / 16.0,
                ]
            }
            Figure::Fig2 => {
                let p = ScalarPairParams::new(x, y)?;
                let in_interval = |v: f64| (-0.25..=0.5).contains(&v);
                vec![
                    cp_tlm_exact(&p).status == Status::HoldsExact,
                    ks_tlm_sufficient(&p).status == Status::HoldsSufficient,
                    in_interval(x) && in_interval(y),
                ]
            }
        })
    }

    /// The flags that have a Choi-matrix counterpart, recomputed from spectra.
    fn choi_flags(self, x: f64, y: f64) -> Result<Vec<(usize, bool)>> {
        let cp = |choi| -> Result<bool> { Ok(cp_choi_numeric(&choi, CHOI_TOL)?.status == Status::HoldsExact) };
        Ok(match self {
            Figure::Fig1 => {
                let t = TensorMap::diagonal(&DiagonalTensorParams::new(x, x, y)?);
                let phi = QubitChannel::diagonal(&DiagonalParams::new(2.0 * x, 2.0 * x, 2.0 * y)?);
                vec![(0, cp(choi_matrix_tensor(&t))?), (1, cp(choi_matrix_qubit(&phi))?)]
            }
            Figure::Fig2 => {
                let t = TensorMap::scalar_pair(&ScalarPairParams::new(x, y)?);
                vec![(0, cp(choi_matrix_tensor(&t))?)]
            }
        })
    }
}

/// Cell centres `lo + (i + ½)(hi - lo)/n`.
pub fn cell_centres(n: usize, lo: f64, hi: f64) -> Vec<f64> {
    (0..n).map(|i| lo + (i as f64 + 0.5) * (hi - lo) / n as f64).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanTable {
    pub figure: Figure,
    pub grid: usize,
    pub xs: Vec<f64>,
    pub ys: Vec<f64>,
    /// `flags[j][i]` holds the predicate flags at `(xs[i], ys[j])`.
    pub flags: Vec<Vec<Vec<bool>>>,
}

impl ScanTable {
    pub fn points(&self) -> impl Iterator<Item = (f64, f64, &[bool])> {
        self.ys.iter().zip(&self.flags).flat_map(move |(&y, row)| {
            self.xs.iter().zip(row).map(move |(&x, f)| (x, y, f.as_slice()))
        })
    }

    /// Number of points where every listed column has the listed value.
    pub fn count(&self, wanted: &[(usize, bool)]) -> usize {
        self.points()
            .filter(|(_, _, f)| wanted.iter().all(|&(c, v)| f[c] == v))
            .count()
    }
}

pub fn scan(figure: Figure, grid: usize) -> Result<ScanTable> {
    if grid < 2 {
        return Err(Error::usage(format!("grid must be at least 2, got {grid}")));
    }
    let (lo, hi) = figure.range();
    let xs = cell_centres(grid, lo, hi);
    let ys = xs.clone();
    let flags = ys
        .par_iter()
        .map(|&y| xs.iter().map(|&x| figure.flags(x, y)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    Ok(ScanTable {
        figure,
        grid,
        xs,
        ys,
        flags,
    })
}

/// `x` with 17 significant digits in positional notation.
pub fn sig17(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let exp = x.abs().log10().floor() as i32;
    let decimals = (16 - exp).clamp(0, 60) as usize;
    format!("{x:.decimals$}")
}

pub fn write_csv(table: &ScanTable, out: &mut impl Write) -> Result<()> {
    writeln!(out, "x,y,{}", table.figure.columns().join(","))?;
    for (x, y, f) in table.points() {
        let cells: Vec<&str> = f.iter().map(|&b| if b { "1" } else { "0" }).collect();
        writeln!(out, "{},{},{}", sig17(x), sig17(y), cells.join(","))?;
    }
    Ok(())
}

/// Binary P5 raster: row `j` holds `ys[j]`, so `y` grows downward.
pub fn write_pgm(table: &ScanTable, out: &mut impl Write) -> Result<()> {
    let cols = table.figure.columns();
    let levels = (1u32 << cols.len()) - 1;
    let step = 255 / levels;
    let bits: Vec<String> = cols.iter().enumerate().map(|(k, c)| format!("bit{k}={c}")).collect();
    write!(
        out,
        "P5\n# pixel = mask * {step}; {}; row 0 is the smallest y\n{} {}\n255\n",
        bits.join(" "),
        table.grid,
        table.grid
    )?;
    let mut pixels = Vec::with_capacity(table.grid * table.grid);
    for row in &table.flags {
        for f in row {
            let mask: u32 = f.iter().enumerate().map(|(k, &b)| (b as u32) << k).sum();
            pixels.push((mask * step) as u8);
        }
    }
    out.write_all(&pixels)?;
    Ok(())
}

/// A scan point whose flag disagrees with the Choi spectrum.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChoiDisagreement {
    pub x: f64,
    pub y: f64,
    pub column: &'static str,
    pub flag: bool,
}

/// Re-checks `k` uniformly drawn grid points against Choi spectra.
pub fn verify_choi(table: &ScanTable, k: usize, seed: u64) -> Result<Vec<ChoiDisagreement>> {
    let mut rng = chunk_rng(seed, 0);
    let mut bad = Vec::new();
    for _ in 0..k {
        let i = rng.random_range(0..table.grid);
        let j = rng.random_range(0..table.grid);
        let (x, y) = (table.xs[i], table.ys[j]);
        for (col, cp) in table.figure.choi_flags(x, y)? {
            let flag = table.flags[j][i][col];
            if flag != cp {
                bad.push(ChoiDisagreement {
                    x,
                    y,
                    column: table.figure.columns()[col],
                    flag,
                });
            }
        }
    }
    Ok(bad)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::cp_tensor_diag_exact;

    fn centre_index(xs: &[f64], v: f64) -> usize {
        xs.iter().position(|&x| (x - v).abs() < 1e-12).unwrap()
    }

    #[test]
    fn fig1_examples() {
        assert_eq!(Figure::Fig1.flags(0.3, 0.0).unwrap(), vec![true, false]);
        assert_eq!(Figure::Fig1.flags(0.0, 0.0).unwrap(), vec![true, true]);
    }

    #[test]
    fn fig2_examples() {
        assert_eq!(Figure::Fig2.flags(0.5, 0.5).unwrap(), vec![true, true, true]);
        assert_eq!(Figure::Fig2.flags(0.5, -0.3).unwrap(), vec![false, false, false]);
        assert_eq!(Figure::Fig2.flags(0.3, 0.1).unwrap(), vec![true, true, true]);
    }

    #[test]
    fn centres_avoid_edges() {
        let c = cell_centres(4, -0.5, 0.5);
        assert_eq!(c, vec![-0.375, -0.125, 0.125, 0.375]);
        let c = cell_centres(401, -0.5, 0.5);
        assert_eq!(c[centre_index(&c, 0.0)], 0.0);
    }

    #[test]
    fn fig1_t_cp_matches_tensor_classifier() {
        let table = scan(Figure::Fig1, 41).unwrap();
        for (a, b, f) in table.points() {
            let p = DiagonalTensorParams::new(a, a, b).unwrap();
            assert_eq!(f[0], cp_tensor_diag_exact(&p).status == Status::HoldsExact, "({a},{b})");
        }
    }

    #[test]
    fn csv_and_pgm_layout() {
        let table = scan(Figure::Fig2, 3).unwrap();
        let mut csv = Vec::new();
        write_csv(&table, &mut csv).unwrap();
        let text = String::from_utf8(csv).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "x,y,cp,ks_sufficient,ks_scalar_components");
        assert_eq!(lines.len(), 10);
        let first: Vec<&str> = lines[1].split(',').collect();
        assert_eq!(first[0].parse::<f64>().unwrap(), table.xs[0]);
        assert_eq!(first[0].trim_start_matches("-0.").len(), 17);

        let mut pgm = Vec::new();
        write_pgm(&table, &mut pgm).unwrap();
        let header_end = pgm.windows(4).position(|w| w == b"255\n").unwrap() + 4;
        assert!(pgm.starts_with(b"P5\n# pixel = mask * 36;"));
        assert_eq!(pgm.len() - header_end, 9);
        // the centre cell (0, 0) satisfies all three predicates
        assert_eq!(pgm[header_end + 4], 7 * 36);
    }

    #[test]
    fn sig17_round_trips() {
        for v in [0.1, -0.4975, 1.0 / 3.0, 123.456, 1e-7, 0.0] {
            assert_eq!(sig17(v).parse::<f64>().unwrap(), v);
        }
        assert_eq!(sig17(0.25), "0.25000000000000000");
    }

    #[test]
    fn scan_is_deterministic_and_verified() {
        let a = scan(Figure::Fig1, 51).unwrap();
        assert_eq!(a, scan(Figure::Fig1, 51).unwrap());
        assert!(verify_choi(&a, 50, 3).unwrap().is_empty());
        assert!(verify_choi(&scan(Figure::Fig2, 51).unwrap(), 50, 3).unwrap().is_empty());
    }
}
