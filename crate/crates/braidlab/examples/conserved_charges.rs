//! Conserved charges of the three spin systems and their sector structure.
//!
//! ```bash
//! cargo run --release -p braidlab --example conserved_charges
//! ```

use braidlab::model::{
    conserved_set, energy_and_parity_operators, hamiltonian, w3_ten_qubit, ClockArm, SystemSpec,
};
use braidlab::runner::dependent_charge_decomposition;

fn main() -> braidlab::Result<()> {
    let four = SystemSpec::four_qubit(ClockArm::new(1.0, 0.9, 2.3));
    println!("four-qubit charges:");
    let h4 = hamiltonian(&four)?;
    for w in conserved_set(&four) {
        let commutes = h4.terms().iter().all(|(_, s)| w.commutes_with(s).unwrap());
        println!("  {w}  commutes with H: {commutes}");
    }

    let ten = SystemSpec::ten_qubit(
        ClockArm::new(1.0, 0.4, 1.0),
        ClockArm::new(1.0, 1.2, 5.1),
        ClockArm::new(1.0, 0.8, 2.2),
    );
    let h10 = hamiltonian(&ten)?;
    println!("ten-qubit charges:");
    for w in conserved_set(&ten) {
        let commutes = h10.terms().iter().all(|(_, s)| w.commutes_with(s).unwrap());
        println!("  {w}  commutes with H: {commutes}");
    }
    let w3 = w3_ten_qubit();
    let w3_ok = h10
        .terms()
        .iter()
        .all(|(_, s)| w3.commutes_with(s).unwrap());
    println!("  {w3}  commutes with H: {w3_ok}  (the excluded pattern)");

    // The sixth charge is not independent: it is a signed product of the
    // sector labels, so its eigenvalue is fixed by the others.
    let (sign, subset) = dependent_charge_decomposition()?;
    println!(
        "dependent charge = {}product of label operators {subset:?}",
        if sign > 0.0 { "+" } else { "-" },
    );

    let sector = energy_and_parity_operators(&ten);
    println!("energy/parity labels:");
    for op in sector.all() {
        println!("  {op}");
    }
    Ok(())
}
