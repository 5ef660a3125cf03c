//! Command-line front end behind the `ksq` binary.
//!
//! Exit codes: 0 ok or clean, 1 witness found, 2 parse or usage error,
//! 3 I/O error, 4 verification or numeric failure.

mod scan;

pub use scan::{cell_centres, scan, sig17, verify_choi, write_csv, write_pgm, ChoiDisagreement, Figure, ScanTable};

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::channels::{FamilyDescriptor, MatrixMap, QubitChannel, TensorMap};
use crate::classify::{classify_family, ClassifyConfig, Evidence, TriState, Verdict};
use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::oracle::{self, agreement_harness, GridSpec, HarnessFamily, SampleConfig, Witness};

pub const EXIT_OK: i32 = 0;
pub const EXIT_WITNESS: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_IO: i32 = 3;
pub const EXIT_VERIFY: i32 = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Text,
    JsonLines,
}

#[derive(Debug, Parser)]
#[command(name = "ksq", version, about = "Positivity, Kadison-Schwarz and CP checks for bistochastic qubit maps")]
pub struct Cli {
    #[arg(long, value_enum, default_value_t = OutputFormat::Text, global = true)]
    pub format: OutputFormat,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Classify one map, e.g. `phi:0.6,0.5,0` or `tlm:0.5,0.5`.
    Classify {
        descriptor: String,
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        #[arg(long, env = "KSQ_SEED", default_value_t = oracle::DEFAULT_SEED)]
        seed: u64,
    },
    /// Scan a figure's parameter plane into CSV (and optionally PGM).
    Scan {
        #[arg(long, value_enum)]
        figure: Figure,
        #[arg(long)]
        grid: usize,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        pgm: Option<PathBuf>,
        /// Re-check this many random grid points against Choi spectra.
        #[arg(long)]
        verify_choi: Option<usize>,
        #[arg(long, env = "KSQ_SEED", default_value_t = oracle::DEFAULT_SEED)]
        seed: u64,
    },
    /// Sample the KS inequality directly and report a witness if one exists.
    Oracle {
        descriptor: String,
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        #[arg(long, env = "KSQ_SEED", default_value_t = oracle::DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = Tolerances::DEFAULT.oracle)]
        tol: f64,
    },
    /// Cross-check the closed-form classifiers against the oracles on a grid.
    Harness {
        #[arg(long)]
        family: String,
        #[arg(long)]
        grid: usize,
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        #[arg(long, env = "KSQ_SEED", default_value_t = oracle::DEFAULT_SEED)]
        seed: u64,
    },
}

/// Parses `args` (including the program name), runs the command and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_PARSE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    match execute(&cli, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "ksq: {e}");
            exit_code(&e)
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse(_) | Error::Usage(_) => EXIT_PARSE,
        Error::Io(_) => EXIT_IO,
        Error::Numeric(_) => EXIT_VERIFY,
    }
}

fn execute(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let json = cli.format == OutputFormat::JsonLines;
    match &cli.command {
        Command::Classify { descriptor, samples, seed } => {
            let family: FamilyDescriptor = descriptor.parse()?;
            let cfg = ClassifyConfig {
                samples: *samples,
                seed: *seed,
                ..ClassifyConfig::default()
            };
            let verdict = classify_family(&family, &cfg)?;
            if json {
                writeln!(out, "{}", json!({ "descriptor": family.to_string(), "verdict": verdict }))?;
            } else {
                write_verdict(out, &family, &verdict)?;
            }
            Ok(EXIT_OK)
        }
        Command::Scan {
            figure,
            grid,
            out: path,
            pgm,
            verify_choi: k,
            seed,
        } => {
            let table = scan(*figure, *grid)?;
            let mut csv = BufWriter::new(File::create(path)?);
            write_csv(&table, &mut csv)?;
            csv.flush()?;
            if let Some(p) = pgm {
                let mut f = BufWriter::new(File::create(p)?);
                write_pgm(&table, &mut f)?;
                f.flush()?;
            }
            let summary = |bad: usize| {
                json!({
                    "figure": figure.to_possible_value().map(|v| v.get_name().to_owned()),
                    "grid": grid,
                    "rows": grid * grid,
                    "out": path.display().to_string(),
                    "choi_checked": k.unwrap_or(0),
                    "choi_disagreements": bad,
                })
            };
            let bad = match k {
                Some(k) => verify_choi(&table, *k, *seed)?,
                None => Vec::new(),
            };
            if json {
                writeln!(out, "{}", summary(bad.len()))?;
            } else {
                writeln!(out, "wrote {} rows to {}", grid * grid, path.display())?;
                if let Some(k) = k {
                    writeln!(out, "choi check: {} of {k} points disagree", bad.len())?;
                }
            }
            for d in &bad {
                writeln!(err, "choi disagreement at ({}, {}): {} = {}", sig17(d.x), sig17(d.y), d.column, d.flag as u8)?;
            }
            Ok(if bad.is_empty() { EXIT_OK } else { EXIT_VERIFY })
        }
        Command::Oracle {
            descriptor,
            samples,
            seed,
            tol,
        } => {
            let family: FamilyDescriptor = descriptor.parse()?;
            let cfg = SampleConfig::new(*samples, *seed, *tol)?;
            let map = descriptor_map(&family);
            let witness = oracle::ks_violation_search(map.as_ref(), &cfg)?;
            if json {
                writeln!(
                    out,
                    "{}",
                    json!({ "descriptor": family.to_string(), "samples": samples, "seed": seed, "witness": witness })
                )?;
            } else {
                match &witness {
                    Some(w) => writeln!(out, "witness {}", format_witness(w))?,
                    None => writeln!(out, "no violation found in {samples} samples")?,
                }
            }
            Ok(if witness.is_some() { EXIT_WITNESS } else { EXIT_OK })
        }
        Command::Harness {
            family,
            grid,
            samples,
            seed,
        } => {
            let family: HarnessFamily = family.parse()?;
            let cfg = SampleConfig::new(*samples, *seed, Tolerances::DEFAULT.oracle)?;
            let report = agreement_harness(
                GridSpec {
                    family,
                    resolution: *grid,
                },
                &cfg,
            )?;
            if json {
                writeln!(out, "{}", serde_json::to_string(&report).map_err(|e| Error::Numeric(e.to_string()))?)?;
            } else {
                write!(out, "{report}")?;
            }
            Ok(if report.discrepancies == 0 { EXIT_OK } else { EXIT_VERIFY })
        }
    }
}

/// The map a descriptor names, as a trait object.
pub fn descriptor_map(family: &FamilyDescriptor) -> Box<dyn MatrixMap> {
    match family {
        FamilyDescriptor::Phi(p) => Box::new(QubitChannel::diagonal(p)),
        FamilyDescriptor::TensorDiagonal(p) => Box::new(TensorMap::diagonal(p)),
        FamilyDescriptor::ScalarPair(p) => Box::new(TensorMap::scalar_pair(p)),
        FamilyDescriptor::TensorMatrix(m) => Box::new(*m),
    }
}

/// `w0re,w0im,w1re,w1im,w2re,w2im,w3re,w3im violation=v`.
pub fn format_witness(w: &Witness) -> String {
    let coords: Vec<String> = std::iter::once(w.x.w0)
        .chain(w.x.w)
        .flat_map(|c| [sig17(c.re), sig17(c.im)])
        .collect();
    format!("{} violation={}", coords.join(","), sig17(w.violation))
}

fn format_evidence(e: &Evidence) -> String {
    match e {
        Evidence::Element { x, value } => {
            let w = Witness {
                x: *x,
                violation: *value,
                defect_kind: oracle::DefectKind::Ks,
            };
            format!("x = {}", format_witness(&w))
        }
        Evidence::Direction { w, value } => {
            format!("w = ({}, {}, {}) value={}", sig17(w[0]), sig17(w[1]), sig17(w[2]), sig17(*value))
        }
        Evidence::ComplexDirection { w, lhs, rhs } => {
            let c: Vec<String> = w.iter().map(|z| format!("{}{:+}i", sig17(z.re), z.im)).collect();
            format!("w = ({}) lhs={} rhs={}", c.join(", "), sig17(*lhs), sig17(*rhs))
        }
        Evidence::Inequality { id, lhs, rhs, .. } => format!("{id}: {} > {}", sig17(*lhs), sig17(*rhs)),
        Evidence::MinEigenvalue { value } => format!("min Choi eigenvalue {}", sig17(*value)),
    }
}

fn write_verdict(out: &mut dyn Write, family: &FamilyDescriptor, v: &Verdict) -> Result<()> {
    writeln!(out, "map {family}")?;
    let rows: [(&str, &TriState); 3] = [
        ("positive", &v.positive),
        ("kadison-schwarz", &v.kadison_schwarz),
        ("completely-positive", &v.completely_positive),
    ];
    for (level, t) in rows {
        writeln!(out, "{level:<20} {:<20} {}", t.status.label(), t.note)?;
        if let Some(e) = &t.witness {
            writeln!(out, "{:<20} witness {}", "", format_evidence(e))?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(std::iter::once("ksq").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn classify_examples() {
        let (code, out, _) = run_args(&["classify", "phi:0.6,0.5,0.0"]);
        assert_eq!(code, 0);
        assert!(out.lines().any(|l| l.starts_with("kadison-schwarz") && l.contains("holds (exact)")));
        assert!(out.lines().any(|l| l.starts_with("completely-positive") && l.contains("fails")));

        let (code, out, _) = run_args(&["--format", "json-lines", "classify", "tlm:0.5,0.5"]);
        assert_eq!(code, 0);
        let v: serde_json::Value = serde_json::from_str(out.trim()).unwrap();
        assert_eq!(v["verdict"]["completely_positive"]["status"], "HoldsExact");

        let (code, _, err) = run_args(&["classify", "phi:2,0,0"]);
        assert_eq!(code, 2);
        assert!(!err.is_empty());
    }

    #[test]
    fn oracle_examples() {
        let (code, out, _) = run_args(&["oracle", "phi:1,-1,1", "--samples", "1000", "--seed", "7"]);
        assert_eq!(code, 1);
        let coords = out.trim().strip_prefix("witness ").unwrap().split(' ').next().unwrap();
        assert_eq!(coords.split(',').count(), 8);

        let (code, out, _) = run_args(&["oracle", "phi:1,1,1", "--samples", "1000", "--seed", "7"]);
        assert_eq!(code, 0);
        assert_eq!(out.trim(), "no violation found in 1000 samples");
    }

    #[test]
    fn usage_errors() {
        assert_eq!(run_args(&["harness", "--family", "tmat", "--grid", "3"]).0, 2);
        assert_eq!(run_args(&["scan", "--figure", "fig3", "--grid", "3", "--out", "x"]).0, 2);
        assert_eq!(run_args(&["oracle", "phi:1,1,1", "--samples", "0"]).0, 2);
        assert_eq!(run_args(&["bogus"]).0, 2);
        assert_eq!(run_args(&["--help"]).0, 0);
    }

    #[test]
    fn scan_to_unwritable_path() {
        let (code, _, err) = run_args(&["scan", "--figure", "fig1", "--grid", "4", "--out", "/nonexistent/dir/a.csv"]);
        assert_eq!(code, 3);
        assert!(err.contains("io error"));
    }
}
