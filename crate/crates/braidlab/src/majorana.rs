//! Fermionic reference models: the junction Hamiltonians written directly in
//! Majorana operators, realized on auxiliary qubits through a chain mapping.
//!
//! This module is an independent oracle. It never touches the spin systems in
//! [`crate::model`]; agreement of spectra and holonomies between the two
//! routes is what validates the Majorana interpretation of the spin models.
//!
//! Chain mapping: gamma_{2k} = (prod_{j<k} Z_j) X_k,
//! gamma_{2k+1} = (prod_{j<k} Z_j) Y_k, so {gamma_a, gamma_b} = 2 delta_ab
//! and each gamma is Hermitian with square one. Mode order is frozen as
//! (g0,g1), (g2,g3) for the single junction and
//! (g0,g1), (g2,g3), (g0',g1'), (g2',g3'), (z0,z1) for the triple junction.

use crate::model::ClockArm;
use crate::pauli::{Letter, OperatorSum, PauliString};
use crate::{Error, Result};
use num_complex::Complex64;

/// A register of 2 n_modes Majorana operators on n_modes auxiliary qubits.
#[derive(Debug, Clone)]
pub struct MajoranaSystem {
    n_modes: usize,
    ops: Vec<PauliString>,
}

/// Majorana indices of the single-junction system.
pub const JUNCTION_MAJORANAS: usize = 4;
/// Majorana indices of the triple-junction system.
pub const TRIPLE_MAJORANAS: usize = 10;

impl MajoranaSystem {
    /// Four Majoranas (one Y-junction) on two auxiliary qubits.
    pub fn junction() -> MajoranaSystem {
        Self::with_majoranas(JUNCTION_MAJORANAS)
    }

    /// Ten Majoranas (triple junction) on five auxiliary qubits.
    pub fn triple_junction() -> MajoranaSystem {
        Self::with_majoranas(TRIPLE_MAJORANAS)
    }

    fn with_majoranas(count: usize) -> MajoranaSystem {
        assert!(count % 2 == 0);
        let n_modes = count / 2;
        let mut ops = Vec::with_capacity(count);
        for a in 0..count {
            let mode = a / 2;
            let mut letters = vec![Letter::I; n_modes];
            for l in letters.iter_mut().take(mode) {
                *l = Letter::Z;
            }
            letters[mode] = if a % 2 == 0 { Letter::X } else { Letter::Y };
            ops.push(PauliString::from_letters(&letters));
        }
        MajoranaSystem { n_modes, ops }
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn n_qubits(&self) -> usize {
        self.n_modes
    }

    /// The a-th Majorana operator as a phased Pauli string.
    pub fn majorana(&self, a: usize) -> PauliString {
        self.ops[a]
    }

    /// i gamma_a gamma_b as a Hermitian operator sum.
    pub fn bilinear(&self, a: usize, b: usize, coefficient: f64) -> Result<OperatorSum> {
        let prod = self.ops[a].multiply(&self.ops[b])?;
        OperatorSum::from_terms(
            self.n_modes,
            vec![(
                Complex64::new(0.0, coefficient) * Complex64::new(1.0, 0.0),
                prod,
            )],
        )
    }

    /// Junction Hamiltonian for 1 arm (four Majoranas) or 3 arms (ten).
    ///
    /// One arm: i gamma_0 (D_z gamma_1 + D_y gamma_2 + D_x gamma_3).
    /// Three arms add the primed copy on (g0'..g3') and the interface
    /// i z0 (L_z z1 + L_y g3' + L_x g2).
    pub fn hamiltonian(&self, arms: &[ClockArm]) -> Result<OperatorSum> {
        let mut op = OperatorSum::zero(self.n_modes);
        let add = |a: usize, b: usize, c: f64, op: &mut OperatorSum| -> Result<()> {
            if c.abs() <= 1e-14 {
                return Ok(());
            }
            let term = self.bilinear(a, b, c)?;
            *op = op.add(&term)?;
            Ok(())
        };
        match (self.ops.len(), arms.len()) {
            (JUNCTION_MAJORANAS, 1) => {
                let [dx, dy, dz] = arms[0].cartesian();
                add(0, 1, dz, &mut op)?;
                add(0, 2, dy, &mut op)?;
                add(0, 3, dx, &mut op)?;
            }
            (TRIPLE_MAJORANAS, 3) => {
                // Majorana labels: 0..3 unprimed, 4..7 primed (g0'..g3'),
                // 8..9 interface (z0, z1).
                let [dx, dy, dz] = arms[0].cartesian();
                add(0, 1, dz, &mut op)?;
                add(0, 2, dy, &mut op)?;
                add(0, 3, dx, &mut op)?;
                let [px, py, pz] = arms[1].cartesian();
                add(4, 5, pz, &mut op)?;
                add(4, 6, py, &mut op)?;
                add(4, 7, px, &mut op)?;
                let [lx, ly, lz] = arms[2].cartesian();
                add(8, 9, lz, &mut op)?;
                add(8, 7, ly, &mut op)?;
                add(8, 2, lx, &mut op)?;
            }
            (m, a) => {
                return Err(Error::InvalidArgument(format!(
                    "{m}-Majorana system takes {} arms, got {a}",
                    if m == JUNCTION_MAJORANAS { 1 } else { 3 }
                )))
            }
        }
        Ok(op)
    }

    /// Parity and energy bilinears: n~ = i g2 g3, h~ = i g0 g1, and for the
    /// triple junction also n~' = i g2' g3', h~' = i g0' g1', h~a = i z0 z1.
    pub fn parity_operators(&self) -> Result<Vec<(String, OperatorSum)>> {
        let mut out = vec![
            ("n".to_string(), self.bilinear(2, 3, 1.0)?),
            ("h".to_string(), self.bilinear(0, 1, 1.0)?),
        ];
        if self.ops.len() == TRIPLE_MAJORANAS {
            out.push(("n_prime".to_string(), self.bilinear(6, 7, 1.0)?));
            out.push(("h_prime".to_string(), self.bilinear(4, 5, 1.0)?));
            out.push(("h_mid".to_string(), self.bilinear(8, 9, 1.0)?));
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{eigh, max_abs, CMatrix};
    use crate::model::{hamiltonian, ClockArm, SystemSpec};

    #[test]
    fn anticommutators_are_canonical() {
        for sys in [
            MajoranaSystem::junction(),
            MajoranaSystem::triple_junction(),
        ] {
            let count = 2 * sys.n_modes();
            for a in 0..count {
                let ga = sys.majorana(a).to_dense().unwrap();
                assert!(
                    max_abs(&(ga.clone() - ga.adjoint())) < 1e-15,
                    "not Hermitian"
                );
                for b in 0..count {
                    let gb = sys.majorana(b).to_dense().unwrap();
                    let anti = &ga * &gb + &gb * &ga;
                    let expect = if a == b {
                        CMatrix::identity(ga.nrows(), ga.ncols()).scale(2.0)
                    } else {
                        CMatrix::zeros(ga.nrows(), ga.ncols())
                    };
                    assert!(max_abs(&(anti - expect)) < 1e-12);
                }
            }
        }
    }

    #[test]
    fn junction_hamiltonian_squares_to_coupling_norm() {
        let sys = MajoranaSystem::junction();
        let h = sys
            .hamiltonian(&[ClockArm::new(1.3, 0.7, 2.1)])
            .unwrap()
            .to_dense()
            .unwrap();
        assert!(max_abs(&(h.clone() - h.adjoint())) < 1e-14);
        let sq = &h * &h;
        let expect = CMatrix::identity(4, 4).scale(1.3 * 1.3);
        assert!(max_abs(&(sq - expect)) < 1e-12);
    }

    #[test]
    fn idle_junction_spectrum_is_two_by_two() {
        let sys = MajoranaSystem::junction();
        let h = sys
            .hamiltonian(&[ClockArm::idle(1.0)])
            .unwrap()
            .to_dense()
            .unwrap();
        let (vals, _) = eigh(&h);
        assert!((vals[0] + 1.0).abs() < 1e-12);
        assert!((vals[1] + 1.0).abs() < 1e-12);
        assert!((vals[2] - 1.0).abs() < 1e-12);
        assert!((vals[3] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn zero_modes_commute_at_idle() {
        // [H, i g2 g3] = 0 and [H, g2] = [H, g3] = 0 at idle.
        let sys = MajoranaSystem::junction();
        let h = sys
            .hamiltonian(&[ClockArm::idle(2.0)])
            .unwrap()
            .to_dense()
            .unwrap();
        for a in [2, 3] {
            let g = sys.majorana(a).to_dense().unwrap();
            assert!(max_abs(&(&g * &h - &h * &g)) < 1e-12);
        }

        let sys10 = MajoranaSystem::triple_junction();
        let idle = [
            ClockArm::idle(1.0),
            ClockArm::idle(0.8),
            ClockArm::idle(1.2),
        ];
        let h10 = sys10.hamiltonian(&idle).unwrap().to_dense().unwrap();
        let zero_mode = sys10.bilinear(2, 3, 1.0).unwrap().to_dense().unwrap();
        assert!(max_abs(&(&zero_mode * &h10 - &h10 * &zero_mode)) < 1e-12);
        for a in [2, 3, 6, 7] {
            let g = sys10.majorana(a).to_dense().unwrap();
            assert!(max_abs(&(&g * &h10 - &h10 * &g)) < 1e-12);
        }
    }

    #[test]
    fn parity_operators_square_to_identity_and_commute() {
        let sys = MajoranaSystem::junction();
        let ops = sys.parity_operators().unwrap();
        let n = ops[0].1.to_dense().unwrap();
        let h = ops[1].1.to_dense().unwrap();
        let id = CMatrix::identity(4, 4);
        assert!(max_abs(&(&n * &n - &id)) < 1e-14);
        assert!(max_abs(&(&h * &h - &id)) < 1e-14);
        assert!(max_abs(&(&n * &h - &h * &n)) < 1e-14);

        // At idle, H = |D| * (i g0 g1) * sign; energy labels are h~ values.
        let hd = sys
            .hamiltonian(&[ClockArm::idle(1.0)])
            .unwrap()
            .to_dense()
            .unwrap();
        assert!(max_abs(&(&hd - &h)) < 1e-13);
    }

    #[test]
    fn wrong_arm_count_is_rejected() {
        let sys = MajoranaSystem::junction();
        assert!(sys.hamiltonian(&[]).is_err());
        assert!(sys
            .hamiltonian(&[ClockArm::idle(1.0), ClockArm::idle(1.0)])
            .is_err());
    }

    #[test]
    fn spin_and_majorana_spectra_agree_up_to_multiplicity_four() {
        let sys = MajoranaSystem::junction();
        for k in 0..20 {
            let theta = 0.05 + 0.15 * k as f64;
            let phi = (1.7 * k as f64) % std::f64::consts::TAU;
            let arm = ClockArm::new(1.0, theta % std::f64::consts::PI, phi);
            let spin = hamiltonian(&SystemSpec::four_qubit(arm)).unwrap();
            let (spin_vals, _) = eigh(&spin.to_dense().unwrap());
            let (maj_vals, _) = eigh(&sys.hamiltonian(&[arm]).unwrap().to_dense().unwrap());
            for (i, mv) in maj_vals.iter().enumerate() {
                for rep in 0..4 {
                    let sv = spin_vals[4 * i + rep];
                    assert!((sv - mv).abs() < 1e-10, "spectrum mismatch {sv} vs {mv}");
                }
            }
        }
    }

    #[test]
    fn triple_junction_matches_ten_qubit_spectrum_structure_at_idle() {
        let sys = MajoranaSystem::triple_junction();
        let arms = [
            ClockArm::idle(1.0),
            ClockArm::idle(1.0),
            ClockArm::idle(1.0),
        ];
        let (maj_vals, _) = eigh(&sys.hamiltonian(&arms).unwrap().to_dense().unwrap());
        // Idle: three commuting +-1 bilinears -> energies -3..3 with binomial
        // multiplicities (x4 zero-mode degeneracy of n, n').
        let count = |vals: &[f64], e: f64| vals.iter().filter(|v| (**v - e).abs() < 1e-10).count();
        assert_eq!(count(&maj_vals, -3.0), 4);
        assert_eq!(count(&maj_vals, -1.0), 12);
        assert_eq!(count(&maj_vals, 1.0), 12);
        assert_eq!(count(&maj_vals, 3.0), 4);

        let spec = SystemSpec::ten_qubit(
            ClockArm::idle(1.0),
            ClockArm::idle(1.0),
            ClockArm::idle(1.0),
        );
        let spin = hamiltonian(&spec).unwrap().to_dense().unwrap();
        let (spin_vals, _) = eigh(&spin);
        // 1024 = 32 x 32: the spin spectrum repeats each Majorana level 32x.
        assert_eq!(count(&spin_vals, -3.0), 4 * 32);
        assert_eq!(count(&spin_vals, -1.0), 12 * 32);
    }
}
