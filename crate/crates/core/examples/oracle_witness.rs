//! Brute-force KS witness for the transpose map, checked by hand.

use ksq::channels::{DiagonalParams, QubitChannel};
use ksq::linalg::hermitian_eigenvalues;
use ksq::oracle::{ks_defect, ks_violation_search, SampleConfig};

fn main() -> ksq::Result<()> {
    let transpose = QubitChannel::diagonal(&DiagonalParams::new(1.0, -1.0, 1.0)?);
    let cfg = SampleConfig::new(1000, 7, 1e-8)?;
    let Some(w) = ks_violation_search(&transpose, &cfg)? else {
        println!("no witness found");
        return Ok(());
    };
    println!("x = {:?}", w.x);
    println!("reported violation {:.6}", w.violation);
    let spectrum = hermitian_eigenvalues(&ks_defect(&transpose, &w.x), 1e-10)?;
    println!("spectrum of Φ(x*x) - Φ(x)*Φ(x): {spectrum:?}");
    Ok(())
}
