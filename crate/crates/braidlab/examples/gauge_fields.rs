//! Analytic gauge fields of the three clock arms against finite-difference
//! derivatives of the unitary frames.
//!
//! ```bash
//! cargo run --release -p braidlab --example gauge_fields
//! ```

use braidlab::holonomy::{analytic_gauge_fields, finite_difference_connection};
use braidlab::linalg::max_abs;
use braidlab::model::Arm;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for arm in [Arm::Left, Arm::Right, Arm::Middle] {
        let mut worst: f64 = 0.0;
        for _ in 0..50 {
            let theta = rng.random::<f64>() * PI;
            let phi = rng.random::<f64>() * 2.0 * PI;
            let analytic = analytic_gauge_fields(arm, theta, phi);
            let fd = finite_difference_connection(arm, theta, phi, 1e-5);
            worst = worst
                .max(max_abs(&(&analytic.d_polar - &fd.d_polar)))
                .max(max_abs(&(&analytic.d_azimuth - &fd.d_azimuth)));
        }
        println!("{arm:?}: max |analytic - finite difference| = {worst:.3e} over 50 points");
    }

    // The polar component is constant; the azimuthal one interpolates
    // between the parity rotation at the pole and the frame-tilted form.
    let at_pole = analytic_gauge_fields(Arm::Left, 0.0, 1.0);
    println!("A_phi at the pole (x2/i):");
    for r in 0..4 {
        let row: Vec<String> = (0..4)
            .map(|c| {
                let v = at_pole.d_azimuth[(r, c)] * num_complex::Complex64::new(0.0, -2.0);
                format!("{:+.1}", v.re)
            })
            .collect();
        println!("  [{}]", row.join(" "));
    }
}
