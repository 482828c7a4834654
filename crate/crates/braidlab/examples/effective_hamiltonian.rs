//! Sector projection: simultaneous eigenbasis, effective Hamiltonians, and
//! diagonal-gauge alignment against the closed forms.
//!
//! ```bash
//! cargo run --release -p braidlab --example effective_hamiltonian
//! ```

use braidlab::model::{hamiltonian, label_operators, Arm, ClockArm, SystemSpec};
use braidlab::runner::arm_selector;
use braidlab::subspace::{
    effective_hamiltonian, gauge_align, ideal_effective_hamiltonian, simultaneous_eigenbasis,
    traceless,
};
use std::f64::consts::PI;

fn main() -> braidlab::Result<()> {
    let four = SystemSpec::four_qubit(ClockArm::idle(1.0));
    let basis = simultaneous_eigenbasis(&label_operators(&four), 4)?;
    println!("four-qubit labeled basis: {} states", basis.n_states());

    let (theta, phi) = (0.95, 2.4);
    let spec = SystemSpec::four_qubit(ClockArm::new(1.0, theta, phi));
    let h = hamiltonian(&spec)?;
    let eff = effective_hamiltonian(&h, &basis, |l| l[2] == -1 && l[3] == -1)?;
    println!("projected block at (theta, phi) = ({theta}, {phi}):");
    for r in 0..4 {
        let row: Vec<String> = (0..4)
            .map(|c| {
                format!(
                    "{:+.3}{:+.3}i",
                    eff.matrix[(r, c)].re,
                    eff.matrix[(r, c)].im
                )
            })
            .collect();
        println!("  [{}]", row.join("  "));
    }
    let target = ideal_effective_hamiltonian(Arm::Left, theta, phi);
    let alignment = gauge_align(&traceless(&eff.matrix), &target)?;
    println!(
        "gauge-aligned residual vs closed form: {:.3e}",
        alignment.residual
    );

    // Ten-qubit middle arm: the projected block is 8x8.
    let ten = SystemSpec::ten_qubit(
        ClockArm::idle(1.0),
        ClockArm::idle(1.0),
        ClockArm::idle(1.0),
    );
    let basis10 = simultaneous_eigenbasis(&label_operators(&ten), 10)?;
    let selector = arm_selector(&ten, Arm::Middle)?;
    let mut worst: f64 = 0.0;
    for i in 0..7 {
        for j in 0..7 {
            let a = PI * (i as f64 + 0.5) / 7.0;
            let b = 2.0 * PI * (j as f64 + 0.5) / 7.0;
            let moved = ten.with_arm(Arm::Middle, ClockArm::new(1.0, a, b))?;
            let eff = effective_hamiltonian(&hamiltonian(&moved)?, &basis10, &selector)?;
            let target = ideal_effective_hamiltonian(Arm::Middle, a, b);
            worst = worst.max(gauge_align(&traceless(&eff.matrix), &target)?.residual);
        }
    }
    println!("middle-arm worst residual over a 7x7 grid: {worst:.3e}");
    Ok(())
}
