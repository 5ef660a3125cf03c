//! Pauli coefficients: products, positivity and simple tensor spectra.

use num_complex::Complex64;

use ksq::linalg::{adjoint, hermitian_eigenvalues};
use ksq::pauli::{is_positive_qubit, tensor_simple_spectrum, PauliElement, TensorPauliElement};

fn main() -> ksq::Result<()> {
    let i = Complex64::i();
    let x = PauliElement::new(Complex64::new(0.5, 0.0), [Complex64::new(0.3, 0.0), 0.4 * i, Complex64::new(0.0, 0.0)]);
    let m = x.to_matrix();
    let sq = x.star_square();
    println!("x*x coefficients  {sq:?}");
    println!("matrix difference {:.1e}", sq.to_matrix().max_abs_diff(&(&adjoint(&m) * &m)));

    let rho = PauliElement::real(1.0, [0.6, 0.0, 0.8]);
    println!("1 + 0.6σ1 + 0.8σ3 positive: {}", is_positive_qubit(&rho, 1e-12)?);

    let t = TensorPauliElement::real(1.0, [0.3, 0.0, 0.0], [0.0, 0.4, 0.0]);
    println!("w0 ± ‖w‖ ± ‖r‖     {:?}", tensor_simple_spectrum(&t)?);
    println!("eigensolver       {:?}", hermitian_eigenvalues(&t.to_matrix(), 1e-10)?);
    Ok(())
}
