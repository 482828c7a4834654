//! Gate-schedule export: native line format and OpenQASM 2.0.
//!
//! ```bash
//! cargo run --release -p braidlab --example export_circuit
//! ```

use braidlab::model::{Arm, ClockArm, SystemSpec};
use braidlab::protocol::{
    clock_path, export_circuit, parse_native_circuit, trotterize, CircuitFormat,
};
use std::f64::consts::FRAC_PI_2;

fn main() -> braidlab::Result<()> {
    let ten = SystemSpec::ten_qubit(
        ClockArm::idle(1.0),
        ClockArm::idle(1.0),
        ClockArm::idle(1.0),
    );
    let plan = trotterize(&clock_path(FRAC_PI_2)?, 6.3, 3, &ten, Arm::Middle)?;

    let native = export_circuit(&plan, CircuitFormat::Native)?;
    println!("--- native ---");
    print!("{native}");

    let (n_qubits, gates) = parse_native_circuit(&native)?;
    println!(
        "--- round trip: {n_qubits} qubits, {} gates ---\n",
        gates.len()
    );

    let qasm = export_circuit(&plan, CircuitFormat::Qasm2)?;
    println!("--- OpenQASM 2.0 ---");
    print!("{qasm}");
    Ok(())
}
