//! Scan the `(a, b)` plane of `T_(a,a,b)` and write `fig1.csv`.

use std::fs::File;
use std::io::BufWriter;

use ksq::cli::{scan, verify_choi, write_csv, Figure};

fn main() -> ksq::Result<()> {
    let table = scan(Figure::Fig1, 201)?;
    write_csv(&table, &mut BufWriter::new(File::create("fig1.csv")?))?;
    let t_only = table.count(&[(0, true), (1, false)]);
    let both = table.count(&[(0, true), (1, true)]);
    let phi_only = table.count(&[(0, false), (1, true)]);
    println!("tensor CP only {t_only}, both {both}, Φ CP only {phi_only}");
    println!("Choi disagreements in 100 checks: {}", verify_choi(&table, 100, 7)?.len());
    Ok(())
}
