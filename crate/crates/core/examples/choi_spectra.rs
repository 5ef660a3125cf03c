//! Choi spectra of the scalar pair family against the closed-form eigenvalues.

use ksq::channels::{choi_matrix_tensor, ScalarPairParams, TensorMap};
use ksq::classify::tlm_choi_spectrum;
use ksq::linalg::hermitian_eigenvalues;

fn main() -> ksq::Result<()> {
    println!("{:>6} {:>6}  {:>10} {:>10}  {:>9}", "λ", "µ", "min num", "min exact", "max diff");
    for (l, m) in [(0.3, 0.1), (0.5, 0.5), (-0.7, 0.4), (1.0, -1.0), (0.6, 0.6)] {
        let p = ScalarPairParams::new(l, m)?;
        let numeric = hermitian_eigenvalues(&choi_matrix_tensor(&TensorMap::scalar_pair(&p)), 1e-10)?;
        let exact = tlm_choi_spectrum(&p);
        let diff = numeric.iter().zip(exact).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        println!("{l:>6} {m:>6}  {:>10.6} {:>10.6}  {diff:>9.1e}", numeric[0], exact[0]);
    }
    Ok(())
}
