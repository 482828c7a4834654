//! Logical state tomography and Choi-matrix process fidelity.
//!
//! ```bash
//! cargo run --release -p braidlab --example process_tomography
//! ```

use braidlab::model::{Arm, ClockArm, SystemSpec};
use braidlab::runner::{run_braid_tomography, BraidConfig, ExperimentConfig};
use braidlab::tomography::{process_fidelity, ChoiMatrix};
use num_complex::Complex64;
use std::f64::consts::FRAC_PI_2;

fn main() -> braidlab::Result<()> {
    // Unitary identities of the fidelity functional.
    let i2 = ChoiMatrix::identity(2);
    let x = ChoiMatrix::from_unitary(&braidlab::linalg::pauli2('X'));
    let s = ChoiMatrix::from_unitary(&braidlab::linalg::CMatrix::from_row_slice(
        2,
        2,
        &[
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 1.0),
        ],
    ));
    println!("F(I, I) = {}", process_fidelity(&i2, &i2)?);
    println!("F(I, X) = {}", process_fidelity(&i2, &x)?);
    println!("F(I, S) = {}", process_fidelity(&i2, &s)?);

    // Full pipeline: initialize, braid, tomograph, reconstruct, score.
    let config = ExperimentConfig {
        system: SystemSpec::four_qubit(ClockArm::idle(1.0)),
        operation: None,
        braid: Some(BraidConfig {
            arm: Arm::Left,
            target_phi: FRAC_PI_2,
            delta_tilde: 3.8,
            n_equator: 3,
        }),
        noise: None,
        shots: None,
        seed: 5,
        sweep: None,
        verify: None,
        export_format: None,
    };
    let report = run_braid_tomography(&config)?;
    println!(
        "\n{} braid at delta_tilde {:.1}, {} steps:",
        report.gate,
        report.delta_tilde.unwrap(),
        report.n_total
    );
    println!("  process fidelity {:.6}", report.process_fidelity);
    println!("  leakage          {:.3e}", report.leakage);
    println!("  Choi min eigenvalue {:.3e}", report.choi_min_eigenvalue);
    for f in &report.per_input_state_fidelities {
        println!(
            "  input |{}>: state fidelity {:.6}",
            f.input, f.state_fidelity
        );
    }
    Ok(())
}
