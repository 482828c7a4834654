//! Phased Pauli-string algebra: products, commutation, dense realization.
//!
//! ```bash
//! cargo run --release -p braidlab --example pauli_algebra
//! ```

use braidlab::linalg::max_abs;
use braidlab::pauli::{OperatorSum, PauliString};
use num_complex::Complex64;

fn main() -> braidlab::Result<()> {
    // Products track the quarter-turn phase exactly.
    let x: PauliString = "+ XI".parse()?;
    let y: PauliString = "+ YI".parse()?;
    println!("({x}) * ({y}) = {}", x.multiply(&y)?);
    println!("({y}) * ({x}) = {}", y.multiply(&x)?);

    // Two of the four-qubit conserved charges multiply into the product of
    // the energy and parity labels: W2 W3 = (Z0 Z1)(Z2 Z3).
    let w2: PauliString = "+ YXIZ".parse()?;
    let w3: PauliString = "+ XYZI".parse()?;
    println!("W2 * W3 = {}", w2.multiply(&w3)?);

    // Commutation is decided from bitmask parity, no matrices involved.
    let h_term: PauliString = "+ XIIX".parse()?;
    println!("[{w2}, {h_term}] = 0 ? {}", w2.commutes_with(&h_term)?);

    // Junction bonds share exactly one qubit, so they anticommute and the
    // Hamiltonian squares to the identity times the coupling norm.
    let mut op = OperatorSum::zero(4);
    op.add_term(Complex64::new(0.6, 0.0), &"+ ZZII".parse()?)?;
    op.add_term(Complex64::new(0.8, 0.0), &"+ XIIX".parse()?)?;
    let dense = op.to_dense()?;
    let sq = &dense * &dense;
    println!(
        "(0.6 Z0Z1 + 0.8 X0X3)^2 = I within {:.2e}",
        max_abs(&(sq - braidlab::linalg::CMatrix::identity(16, 16)))
    );
    Ok(())
}
