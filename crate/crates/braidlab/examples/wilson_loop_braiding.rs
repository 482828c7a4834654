//! Wilson-loop holonomies: the solid-angle law on one junction and the
//! entangling holonomy of the interface arm.
//!
//! ```bash
//! cargo run --release -p braidlab --example wilson_loop_braiding
//! ```

use braidlab::holonomy::{
    braid_sector, holonomy_eigenphases, middle_arm_holonomy, wilson_loop, ParamPath,
};
use braidlab::model::{hamiltonian, Arm, ClockArm, SystemSpec};
use std::f64::consts::FRAC_PI_2;

fn main() -> braidlab::Result<()> {
    let spec = SystemSpec::four_qubit(ClockArm::idle(1.0));
    let sector = braid_sector(&spec, Arm::Left);
    let family =
        |theta: f64, phi: f64| hamiltonian(&SystemSpec::four_qubit(ClockArm::new(1.0, theta, phi)));

    println!("single-junction holonomy eigenphases vs half the solid angle:");
    for sweep in [FRAC_PI_2, 0.6, 1.9, -1.1] {
        let path = ParamPath::clock_face(sweep);
        let u = wilson_loop(family, &path, &sector, 2, 2000)?;
        let phases = holonomy_eigenphases(&u);
        println!(
            "  sweep {sweep:+.4}: solid angle {:+.4}, phases ({:+.6}, {:+.6}), expect +-{:.6}",
            path.solid_angle(),
            phases[0],
            phases[1],
            sweep.abs() / 2.0
        );
    }

    let zero_area = ParamPath::out_and_back(0.7);
    let u = wilson_loop(family, &zero_area, &sector, 2, 2000)?;
    println!(
        "  out-and-back: phases {:?} (no enclosed area, identity holonomy)",
        holonomy_eigenphases(&u)
    );

    let ten = SystemSpec::ten_qubit(
        ClockArm::idle(1.0),
        ClockArm::idle(1.0),
        ClockArm::idle(1.0),
    );
    let u = middle_arm_holonomy(&ten, &ParamPath::clock_face(FRAC_PI_2), 1500)?;
    println!(
        "interface-arm quarter loop: eigenphases {:?}",
        holonomy_eigenphases(&u)
            .iter()
            .map(|p| format!("{p:+.6}"))
            .collect::<Vec<_>>()
    );
    println!("  (doubly degenerate +-pi/4: the entangling xx-rotation generator)");
    Ok(())
}
