//! The Trotterized braid: plan construction, step-count rules, execution,
//! and logical-gate extraction.
//!
//! ```bash
//! cargo run --release -p braidlab --example trotter_braid
//! ```

use braidlab::model::{Arm, ClockArm, SystemSpec};
use braidlab::protocol::{
    clock_path, execute_braid, extract_logical_gate, prepare_logical, trotterize, LogicalLabel,
    PrepMethod,
};
use braidlab::runner::ideal_braid_unitary;
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

fn main() -> braidlab::Result<()> {
    let four = SystemSpec::four_qubit(ClockArm::idle(1.0));

    // The quarter-sweep braid at three equatorial steps: 3 steps per segment.
    let plan = trotterize(&clock_path(FRAC_PI_2)?, 6.3, 3, &four, Arm::Left)?;
    println!(
        "S braid: {} steps ({} per segment), {} rotations",
        plan.total_steps(),
        plan.segments[0].steps,
        plan.gate_count()
    );
    // The eighth-sweep braid: constant step size forces 6 steps on the ramps.
    let plan_t = trotterize(&clock_path(FRAC_PI_4)?, 4.2, 3, &four, Arm::Left)?;
    println!(
        "T braid: {} steps {:?}",
        plan_t.total_steps(),
        plan_t.segments.iter().map(|s| s.steps).collect::<Vec<_>>()
    );

    // Execute a well-converged braid and extract the logical gate.
    let plan = trotterize(&clock_path(FRAC_PI_2)?, 0.8, 60, &four, Arm::Left)?;
    let mut st = prepare_logical(&[LogicalLabel::Plus], &four, PrepMethod::ExplicitAmplitudes)?;
    execute_braid(&plan, &mut st)?;

    let gate = extract_logical_gate(&plan, &four)?;
    println!("extracted logical gate (leakage {:.2e}):", gate.leakage);
    for r in 0..2 {
        println!(
            "  [{:+.4}{:+.4}i  {:+.4}{:+.4}i]",
            gate.unitary[(r, 0)].re,
            gate.unitary[(r, 0)].im,
            gate.unitary[(r, 1)].re,
            gate.unitary[(r, 1)].im
        );
    }
    let ideal = ideal_braid_unitary(&four, Arm::Left, Some(FRAC_PI_2));
    let tr = (ideal.adjoint() * &gate.unitary).trace();
    println!(
        "unitary overlap with the quarter z-rotation: |Tr|^2/4 = {:.6}",
        tr.norm_sqr() / 4.0
    );
    Ok(())
}
