//! Process-fidelity sweep over the exchange constant, reproducing the
//! oscillatory tuning landscape of the nine-step braid.
//!
//! ```bash
//! cargo run --release -p braidlab --example fidelity_sweep
//! ```

use braidlab::model::{Arm, ClockArm, SystemSpec};
use braidlab::runner::{run_sweep, sweep_to_csv, BraidConfig, ExperimentConfig, SweepConfig};
use std::f64::consts::FRAC_PI_2;

fn main() -> braidlab::Result<()> {
    let config = ExperimentConfig {
        system: SystemSpec::four_qubit(ClockArm::idle(1.0)),
        operation: None,
        braid: Some(BraidConfig {
            arm: Arm::Left,
            target_phi: FRAC_PI_2,
            delta_tilde: 0.0,
            n_equator: 3,
        }),
        noise: None,
        shots: None,
        seed: 1,
        sweep: Some(SweepConfig {
            delta_tilde_from: 2.0,
            delta_tilde_to: 10.0,
            delta_tilde_step: 0.5,
            n_equator: vec![3, 10],
        }),
        verify: None,
        export_format: None,
    };
    let rows = run_sweep(&config, false)?;
    print!("{}", sweep_to_csv(&rows, None));

    let best = rows
        .iter()
        .max_by(|a, b| a.process_fidelity.total_cmp(&b.process_fidelity))
        .unwrap();
    println!(
        "\nbest: {} at delta_tilde {:.2}, N {} -> F = {:.6}",
        best.gate, best.delta_tilde, best.n_equator, best.process_fidelity
    );
    Ok(())
}
