//! The strict chain CP ⊂ KS ⊂ positive, shown with two diagonal channels.

use ksq::channels::{choi_matrix_qubit, DiagonalParams, QubitChannel};
use ksq::classify::{cp_phi_exact, ks_phi_diag_exact};
use ksq::linalg::min_eigenvalue;
use ksq::oracle::{ks_violation_search, positivity_violation_search, SampleConfig};

fn main() -> ksq::Result<()> {
    let cfg = SampleConfig::default();
    for l in [[1.0, -1.0, 1.0], [0.6, 0.5, 0.0], [0.5, 0.5, 0.0]] {
        let p = DiagonalParams::new(l[0], l[1], l[2])?;
        let ch = QubitChannel::diagonal(&p);
        let positive = positivity_violation_search(&ch, &cfg)?.is_none();
        let ks_witness = ks_violation_search(&ch, &cfg)?;
        let choi_min = min_eigenvalue(&choi_matrix_qubit(&ch), 1e-10)?;
        println!("Φ{l:?}");
        println!("  positive (sampled)    {positive}");
        println!("  KS closed form        {}", ks_phi_diag_exact(&p).status.label());
        match ks_witness {
            Some(w) => println!("  KS witness            violation {:.4}", w.violation),
            None => println!("  KS witness            none"),
        }
        println!("  CP closed form        {}", cp_phi_exact(&p).status.label());
        println!("  min Choi eigenvalue   {choi_min:.4}");
    }
    Ok(())
}
