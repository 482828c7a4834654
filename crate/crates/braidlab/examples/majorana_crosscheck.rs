//! Cross-validation of the spin systems against the fermionic reference
//! models: spectra up to gauge-copy multiplicity, zero modes at idle, and
//! ground-space holonomies.
//!
//! ```bash
//! cargo run --release -p braidlab --example majorana_crosscheck
//! ```

use braidlab::holonomy::{braid_sector, holonomy_eigenphases, wilson_loop, ParamPath};
use braidlab::linalg::{eigh, max_abs};
use braidlab::majorana::MajoranaSystem;
use braidlab::model::{hamiltonian, Arm, ClockArm, SystemSpec};
use std::f64::consts::FRAC_PI_2;

fn main() -> braidlab::Result<()> {
    let junction = MajoranaSystem::junction();

    // Spectra agree up to the fourfold gauge multiplicity.
    let arm = ClockArm::new(1.0, 0.77, 4.1);
    let spin_vals = eigh(&hamiltonian(&SystemSpec::four_qubit(arm))?.to_dense()?).0;
    let maj_vals = eigh(&junction.hamiltonian(&[arm])?.to_dense()?).0;
    println!("fermionic spectrum: {maj_vals:?}");
    println!(
        "spin spectrum groups of four: {:?}",
        spin_vals.chunks(4).map(|c| c[0]).collect::<Vec<_>>()
    );

    // Zero modes commute with the idle Hamiltonian.
    let idle = junction.hamiltonian(&[ClockArm::idle(1.0)])?.to_dense()?;
    for a in [2usize, 3] {
        let g = junction.majorana(a).to_dense()?;
        println!(
            "[H_idle, gamma_{a}] = 0 within {:.2e}",
            max_abs(&(&g * &idle - &idle * &g))
        );
    }

    // Ground-space holonomies agree between the two representations.
    let path = ParamPath::clock_face(FRAC_PI_2);
    let spec = SystemSpec::four_qubit(ClockArm::idle(1.0));
    let spin_family =
        |theta: f64, phi: f64| hamiltonian(&SystemSpec::four_qubit(ClockArm::new(1.0, theta, phi)));
    let maj_family = |theta: f64, phi: f64| junction.hamiltonian(&[ClockArm::new(1.0, theta, phi)]);
    let spin_u = wilson_loop(spin_family, &path, &braid_sector(&spec, Arm::Left), 2, 5000)?;
    let maj_u = wilson_loop(maj_family, &path, &[], 2, 5000)?;
    println!(
        "octant holonomy phases, spin side:      {:?}",
        holonomy_eigenphases(&spin_u)
    );
    println!(
        "octant holonomy phases, fermionic side: {:?}",
        holonomy_eigenphases(&maj_u)
    );
    Ok(())
}
