//! Scan the `(λ, µ)` plane of `T_{λ,µ}` into `fig2.csv` and `fig2.pgm`.

use std::fs::File;
use std::io::BufWriter;

use ksq::cli::{scan, write_csv, write_pgm, Figure};

fn main() -> ksq::Result<()> {
    let table = scan(Figure::Fig2, 201)?;
    write_csv(&table, &mut BufWriter::new(File::create("fig2.csv")?))?;
    write_pgm(&table, &mut BufWriter::new(File::create("fig2.pgm")?))?;
    for (k, name) in Figure::Fig2.columns().iter().enumerate() {
        println!("{name:<22} {}", table.count(&[(k, true)]));
    }
    println!("KS beyond the componentwise square: {}", table.count(&[(1, true), (2, false)]));
    Ok(())
}
