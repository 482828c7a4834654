//! Logical state preparation: circuit replay vs explicit amplitudes, charge
//! sector checks, and the fixed logical Pauli frames.
//!
//! ```bash
//! cargo run --release -p braidlab --example logical_states
//! ```

use braidlab::engine::expectation_pauli;
use braidlab::model::{conserved_set, logical_operators, ClockArm, SystemSpec};
use braidlab::protocol::{prepare_logical, LogicalLabel, PrepMethod};

fn main() -> braidlab::Result<()> {
    let four = SystemSpec::four_qubit(ClockArm::idle(1.0));
    let frames = logical_operators(&four)?;
    println!("four-qubit logical frame:");
    println!("  X_L = {}", frames[0].x);
    println!("  Y_L = {}", frames[0].y);
    println!("  Z_L = {}", frames[0].z);

    println!("\nfour-qubit initialization (replay vs explicit):");
    for label in LogicalLabel::ALL {
        let replay = prepare_logical(&[label], &four, PrepMethod::CircuitReplay)?;
        let explicit = prepare_logical(&[label], &four, PrepMethod::ExplicitAmplitudes)?;
        let overlap = replay.overlap(&explicit)?;
        let z = expectation_pauli(&replay, &frames[0].z)?;
        println!(
            "  |{}>_L: overlap {overlap:.12}, <Z_L> = {z:+.3}",
            label.token()
        );
    }

    let ten = SystemSpec::ten_qubit(
        ClockArm::idle(1.0),
        ClockArm::idle(1.0),
        ClockArm::idle(1.0),
    );
    let frames10 = logical_operators(&ten)?;
    println!("\nten-qubit logical frames:");
    for (q, f) in frames10.iter().enumerate() {
        println!("  q{q}: X_L = {}  Y_L = {}  Z_L = {}", f.x, f.y, f.z);
    }

    println!("\nten-qubit |0>|0> charge expectations:");
    let st = prepare_logical(
        &[LogicalLabel::Zero, LogicalLabel::Zero],
        &ten,
        PrepMethod::CircuitReplay,
    )?;
    for w in &conserved_set(&ten)[..5] {
        println!("  <{w}> = {:+.6}", expectation_pauli(&st, w)?);
    }
    Ok(())
}
