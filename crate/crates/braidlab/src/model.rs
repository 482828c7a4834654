//! The spin systems: Hamiltonians, conserved charges, sector labels, logical
//! states and logical operators.
//!
//! Three systems are supported: the four-qubit Y-junction, the ten-qubit
//! triple junction (two logical qubits), and the four-qubit tetrad on a torus
//! (the Y-junction plus three extra couplings). Couplings are parameterized
//! by clock arms: points on a sphere scaled by an exchange magnitude.
//!
//! Qubit layout for the ten-qubit system: unprimed junction {0,1,2,3},
//! interface {4,5}, primed junction {0',1',2',3'} = {6,7,8,9}.

use crate::engine::{expectation_complex, QuantumState};
use crate::linalg::CVector;
use crate::pauli::{Letter, OperatorSum, PauliString};
use crate::{Error, Result};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

const RE: fn(f64) -> Complex64 = |x| Complex64::new(x, 0.0);

/// Spherical coupling parameterization of one junction arm.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClockArm {
    /// Exchange magnitude (|Delta|, |Delta'| or |Lambda|).
    pub magnitude: f64,
    /// Polar angle in [0, pi].
    pub polar: f64,
    /// Azimuthal angle in [0, 2 pi).
    pub azimuth: f64,
}

impl ClockArm {
    pub fn new(magnitude: f64, polar: f64, azimuth: f64) -> ClockArm {
        ClockArm {
            magnitude,
            polar,
            azimuth,
        }
    }

    /// Arm pointing at the idle position (north pole).
    pub fn idle(magnitude: f64) -> ClockArm {
        ClockArm::new(magnitude, 0.0, 0.0)
    }

    /// (x, y, z) couplings: magnitude * (sin t cos p, sin t sin p, cos t).
    pub fn cartesian(&self) -> [f64; 3] {
        let (st, ct) = self.polar.sin_cos();
        let (sp, cp) = self.azimuth.sin_cos();
        [
            self.magnitude * st * cp,
            self.magnitude * st * sp,
            self.magnitude * ct,
        ]
    }

    pub fn is_idle(&self) -> bool {
        self.polar == 0.0
    }
}

/// Which clock arm of a system.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Arm {
    /// The unprimed junction (the only arm of the four-qubit system).
    Left,
    /// The primed junction of the ten-qubit system.
    Right,
    /// The interface junction of the ten-qubit system.
    Middle,
}

/// One of the three simulated systems with its coupling configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum SystemSpec {
    FourQubit {
        arm: ClockArm,
    },
    TenQubit {
        left: ClockArm,
        right: ClockArm,
        middle: ClockArm,
    },
    /// Tetrad on a torus: the four-qubit junction plus the three
    /// counter-diagonal couplings (x, y, z components of `bar`; zero by
    /// default, which recovers the plain junction).
    TetradTorus {
        arm: ClockArm,
        #[serde(default)]
        bar: [f64; 3],
    },
}

/// The coupling bonds of one arm: qubit pairs for the z, y, x components.
#[derive(Debug, Clone, Copy)]
pub struct ArmBonds {
    pub z: (usize, usize),
    pub y: (usize, usize),
    pub x: (usize, usize),
}

impl SystemSpec {
    pub fn four_qubit(arm: ClockArm) -> SystemSpec {
        SystemSpec::FourQubit { arm }
    }

    pub fn ten_qubit(left: ClockArm, right: ClockArm, middle: ClockArm) -> SystemSpec {
        SystemSpec::TenQubit {
            left,
            right,
            middle,
        }
    }

    pub fn n_qubits(&self) -> usize {
        match self {
            SystemSpec::FourQubit { .. } | SystemSpec::TetradTorus { .. } => 4,
            SystemSpec::TenQubit { .. } => 10,
        }
    }

    pub fn n_logical(&self) -> usize {
        match self {
            SystemSpec::TenQubit { .. } => 2,
            _ => 1,
        }
    }

    /// All clock arms at the north pole (all polar angles zero).
    pub fn is_idle(&self) -> bool {
        match self {
            SystemSpec::FourQubit { arm } | SystemSpec::TetradTorus { arm, .. } => arm.is_idle(),
            SystemSpec::TenQubit {
                left,
                right,
                middle,
            } => left.is_idle() && right.is_idle() && middle.is_idle(),
        }
    }

    pub fn arm(&self, which: Arm) -> Result<ClockArm> {
        match (self, which) {
            (SystemSpec::FourQubit { arm }, Arm::Left)
            | (SystemSpec::TetradTorus { arm, .. }, Arm::Left) => Ok(*arm),
            (SystemSpec::TenQubit { left, .. }, Arm::Left) => Ok(*left),
            (SystemSpec::TenQubit { right, .. }, Arm::Right) => Ok(*right),
            (SystemSpec::TenQubit { middle, .. }, Arm::Middle) => Ok(*middle),
            _ => Err(Error::InvalidArgument(format!(
                "system has no {which:?} arm"
            ))),
        }
    }

    pub fn with_arm(&self, which: Arm, new_arm: ClockArm) -> Result<SystemSpec> {
        let mut out = self.clone();
        match (&mut out, which) {
            (SystemSpec::FourQubit { arm }, Arm::Left)
            | (SystemSpec::TetradTorus { arm, .. }, Arm::Left) => *arm = new_arm,
            (SystemSpec::TenQubit { left, .. }, Arm::Left) => *left = new_arm,
            (SystemSpec::TenQubit { right, .. }, Arm::Right) => *right = new_arm,
            (SystemSpec::TenQubit { middle, .. }, Arm::Middle) => *middle = new_arm,
            _ => {
                return Err(Error::InvalidArgument(format!(
                    "system has no {which:?} arm"
                )))
            }
        }
        Ok(out)
    }

    /// Coupling bonds of the requested arm.
    pub fn arm_bonds(&self, which: Arm) -> Result<ArmBonds> {
        match (self, which) {
            (SystemSpec::FourQubit { .. } | SystemSpec::TetradTorus { .. }, Arm::Left) => {
                Ok(ArmBonds {
                    z: (0, 1),
                    y: (0, 2),
                    x: (0, 3),
                })
            }
            (SystemSpec::TenQubit { .. }, Arm::Left) => Ok(ArmBonds {
                z: (0, 1),
                y: (0, 2),
                x: (0, 3),
            }),
            (SystemSpec::TenQubit { .. }, Arm::Right) => Ok(ArmBonds {
                z: (6, 7),
                y: (6, 8),
                x: (6, 9),
            }),
            (SystemSpec::TenQubit { .. }, Arm::Middle) => Ok(ArmBonds {
                z: (4, 5),
                y: (4, 9),
                x: (2, 4),
            }),
            _ => Err(Error::InvalidArgument(format!(
                "system has no {which:?} arm"
            ))),
        }
    }

    pub fn arms(&self) -> Vec<Arm> {
        match self {
            SystemSpec::TenQubit { .. } => vec![Arm::Left, Arm::Right, Arm::Middle],
            _ => vec![Arm::Left],
        }
    }
}

fn bond_term(
    op: &mut OperatorSum,
    n: usize,
    coupling: f64,
    letter: Letter,
    bond: (usize, usize),
) -> Result<()> {
    // Skip pure floating-point noise from sin/cos at exact poles.
    if coupling.abs() <= 1e-14 {
        return Ok(());
    }
    let s = PauliString::product_at(n, &[(bond.0, letter), (bond.1, letter)]);
    op.add_term(RE(coupling), &s)
}

/// The system Hamiltonian as a Hermitian operator sum.
pub fn hamiltonian(spec: &SystemSpec) -> Result<OperatorSum> {
    let n = spec.n_qubits();
    let mut op = OperatorSum::zero(n);
    for which in spec.arms() {
        let arm = spec.arm(which)?;
        let bonds = spec.arm_bonds(which)?;
        let [cx, cy, cz] = arm.cartesian();
        bond_term(&mut op, n, cz, Letter::Z, bonds.z)?;
        bond_term(&mut op, n, cy, Letter::Y, bonds.y)?;
        bond_term(&mut op, n, cx, Letter::X, bonds.x)?;
    }
    if let SystemSpec::TetradTorus { bar, .. } = spec {
        bond_term(&mut op, n, bar[2], Letter::Z, (2, 3))?;
        bond_term(&mut op, n, bar[1], Letter::Y, (1, 3))?;
        bond_term(&mut op, n, bar[0], Letter::X, (1, 2))?;
    }
    Ok(op)
}

fn ps(n: usize, letters: &[(usize, Letter)]) -> PauliString {
    PauliString::product_at(n, letters)
}

use Letter::{X, Y, Z};

/// The integrals of motion that label gauge sectors.
///
/// Four-qubit and tetrad systems: {W1, W2, W3}. Ten-qubit system:
/// {W1, W2, W4, W5, W6, W7}; the W3 pattern does not commute with the
/// ten-qubit Hamiltonian and is excluded.
pub fn conserved_set(spec: &SystemSpec) -> Vec<PauliString> {
    match spec {
        SystemSpec::FourQubit { .. } | SystemSpec::TetradTorus { .. } => vec![
            ps(4, &[(0, Z), (2, X), (3, Y)]),
            ps(4, &[(0, Y), (1, X), (3, Z)]),
            ps(4, &[(0, X), (1, Y), (2, Z)]),
        ],
        SystemSpec::TenQubit { .. } => vec![
            ps(10, &[(0, Z), (2, X), (3, Y)]),
            ps(10, &[(0, Y), (1, X), (3, Z)]),
            ps(10, &[(6, Z), (8, X), (9, Y)]),
            ps(10, &[(6, X), (7, Y), (8, Z)]),
            ps(10, &[(0, X), (1, Y), (2, Z), (4, Y), (5, Y)]),
            ps(10, &[(4, X), (5, X), (6, Y), (7, X), (9, Z)]),
        ],
    }
}

/// The W3-patterned string on ten qubits (not conserved there; exposed for
/// verification reports that demonstrate the failure).
pub fn w3_ten_qubit() -> PauliString {
    ps(10, &[(0, X), (1, Y), (2, Z)])
}

/// Energy and parity sector operators.
#[derive(Debug, Clone)]
pub struct SectorOps {
    /// h: energy label of the left junction (Z0 Z1).
    pub energy_left: PauliString,
    /// n: parity label of the left junction (Z2 Z3).
    pub parity_left: PauliString,
    /// h': energy label of the primed junction (Z0' Z1'), ten-qubit only.
    pub energy_right: Option<PauliString>,
    /// n': parity label of the primed junction (Z2' Z3'), ten-qubit only.
    pub parity_right: Option<PauliString>,
    /// h^a: energy label of the interface pair (Z4 Z5), ten-qubit only.
    pub energy_middle: Option<PauliString>,
}

impl SectorOps {
    pub fn all(&self) -> Vec<PauliString> {
        let mut v = vec![self.energy_left, self.parity_left];
        v.extend(self.energy_right);
        v.extend(self.parity_right);
        v.extend(self.energy_middle);
        v
    }
}

pub fn energy_and_parity_operators(spec: &SystemSpec) -> SectorOps {
    let n = spec.n_qubits();
    let base = SectorOps {
        energy_left: ps(n, &[(0, Z), (1, Z)]),
        parity_left: ps(n, &[(2, Z), (3, Z)]),
        energy_right: None,
        parity_right: None,
        energy_middle: None,
    };
    match spec {
        SystemSpec::TenQubit { .. } => SectorOps {
            energy_right: Some(ps(10, &[(6, Z), (7, Z)])),
            parity_right: Some(ps(10, &[(8, Z), (9, Z)])),
            energy_middle: Some(ps(10, &[(4, Z), (5, Z)])),
            ..base
        },
        _ => base,
    }
}

/// Ordered label operators for simultaneous-eigenbasis construction.
///
/// Four-qubit: (n, h, W1, W2). Ten-qubit:
/// (n, n', h, h', h^a, W1, W2, W4, W5, W6). Each set is independent and
/// mutually commuting, so every label tuple names exactly one basis state.
pub fn label_operators(spec: &SystemSpec) -> Vec<PauliString> {
    let sector = energy_and_parity_operators(spec);
    let w = conserved_set(spec);
    match spec {
        SystemSpec::FourQubit { .. } | SystemSpec::TetradTorus { .. } => {
            vec![sector.parity_left, sector.energy_left, w[0], w[1]]
        }
        SystemSpec::TenQubit { .. } => vec![
            sector.parity_left,
            sector.parity_right.unwrap(),
            sector.energy_left,
            sector.energy_right.unwrap(),
            sector.energy_middle.unwrap(),
            w[0],
            w[1],
            w[2],
            w[3],
            w[4],
        ],
    }
}

// ---------------------------------------------------------------------------
// Logical states
// ---------------------------------------------------------------------------

fn state_from(n_qubits: usize, entries: &[(usize, Complex64)]) -> CVector {
    let mut v = CVector::zeros(1 << n_qubits);
    for &(idx, amp) in entries {
        v[idx] = amp;
    }
    v
}

/// Explicit |0>_L of the four-qubit system:
/// (|0101> + |1010>)/2 + i (|0110> + |1001>)/2.
pub fn four_qubit_logical_zero() -> CVector {
    let h = RE(0.5);
    let ih = Complex64::new(0.0, 0.5);
    state_from(4, &[(0b0101, h), (0b1010, h), (0b0110, ih), (0b1001, ih)])
}

/// Explicit |1>_L of the four-qubit system:
/// (|0100> + |1011>)/2 - i (|0111> + |1000>)/2.
pub fn four_qubit_logical_one() -> CVector {
    let h = RE(0.5);
    let mih = Complex64::new(0.0, -0.5);
    state_from(4, &[(0b0100, h), (0b1011, h), (0b0111, mih), (0b1000, mih)])
}

/// Explicit |0>^{q0}_L on the six qubits {0..5} of the ten-qubit system.
pub fn ten_qubit_q0_logical_zero() -> CVector {
    let a = RE(std::f64::consts::SQRT_2 / 4.0);
    let ia = Complex64::new(0.0, std::f64::consts::SQRT_2 / 4.0);
    state_from(
        6,
        &[
            (0b010101, a),
            (0b010110, a),
            (0b101001, a),
            (0b101010, a),
            (0b011001, ia),
            (0b011010, ia),
            (0b100101, ia),
            (0b100110, ia),
        ],
    )
}

/// Explicit |1>^{q0}_L on the six qubits {0..5} of the ten-qubit system.
pub fn ten_qubit_q0_logical_one() -> CVector {
    let a = std::f64::consts::SQRT_2 / 4.0;
    let re = |s: f64| RE(s * a);
    let im = |s: f64| Complex64::new(0.0, s * a);
    state_from(
        6,
        &[
            (0b011101, re(-1.0)),
            (0b011110, re(1.0)),
            (0b100001, re(-1.0)),
            (0b100010, re(1.0)),
            (0b010001, im(-1.0)),
            (0b010010, im(1.0)),
            (0b101101, im(-1.0)),
            (0b101110, im(1.0)),
        ],
    )
}

/// Explicit |0>^{q1}_L on the four primed qubits {0'..3'} (local indices).
pub fn ten_qubit_q1_logical_zero() -> CVector {
    let c = std::f64::consts::SQRT_2 / 4.0;
    let plus = Complex64::new(c, c); // sqrt2 (1 + i)/4
    let minus = Complex64::new(c, -c); // -sqrt2 (i - 1)/4
    state_from(
        4,
        &[
            (0b0110, plus),
            (0b1001, plus),
            (0b0101, minus),
            (0b1010, minus),
        ],
    )
}

/// Explicit |1>^{q1}_L on the four primed qubits {0'..3'} (local indices).
///
/// Defined as (sigma_0'^z sigma_2'^x)|0>^{q1}, the logical flip that stays in
/// the primed junction's charge sector; the replay of the corresponding
/// initialization circuit lands exactly on this state.
pub fn ten_qubit_q1_logical_one() -> CVector {
    let c = std::f64::consts::SQRT_2 / 4.0;
    let p = Complex64::new(c, c); // sqrt2 (1 + i)/4
    let m = Complex64::new(c, -c); // sqrt2 (1 - i)/4
    state_from(4, &[(0b0100, p), (0b1011, -p), (0b0111, m), (0b1000, -m)])
}

// ---------------------------------------------------------------------------
// Logical operators
// ---------------------------------------------------------------------------

/// Hermitian logical Pauli frame of one encoded qubit, as physical strings.
///
/// On the code subspace the triple satisfies the qubit algebra:
/// X_L |0>_L = |1>_L, Z_L |0>_L = +|0>_L, and X_L Y_L = i Z_L.
#[derive(Debug, Clone)]
pub struct LogicalFrame {
    pub x: PauliString,
    pub y: PauliString,
    pub z: PauliString,
}

impl LogicalFrame {
    pub fn by_letter(&self, l: Letter) -> Option<PauliString> {
        match l {
            Letter::X => Some(self.x),
            Letter::Y => Some(self.y),
            Letter::Z => Some(self.z),
            Letter::I => None,
        }
    }
}

/// Fix the signs of candidate bare strings against explicit code states.
///
/// Only the code-subspace action of a logical operator is physical, so any
/// scalar prefactor is dropped and the sign of each bare string is chosen so
/// that Z|0> = +|0>, X|0> = |1> and X Y = i Z hold exactly, verifying each
/// anchor as it goes.
fn fix_frame(
    n_qubits: usize,
    state0: &CVector,
    state1: &CVector,
    x_cand: PauliString,
    y_cand: PauliString,
    z_cand: PauliString,
) -> Result<LogicalFrame> {
    let s0 = QuantumState::from_amplitudes(n_qubits, state0.clone())?;
    let one_term = |p: PauliString| {
        OperatorSum::from_terms(n_qubits, vec![(Complex64::new(1.0, 0.0), p)]).unwrap()
    };
    let bra_ket = |bra: &CVector, p: PauliString, ket: &QuantumState| -> Complex64 {
        let applied = crate::engine::pauli_apply_vec(&p, ket.amplitudes().unwrap());
        bra.dotc(&applied)
    };

    // Z sign: <0|Z|0> = +1.
    let z_val = expectation_complex(&s0, &one_term(z_cand.bare()))?;
    if (z_val.norm() - 1.0).abs() > 1e-10 || z_val.im.abs() > 1e-10 {
        return Err(Error::InvalidArgument(format!(
            "Z candidate is not diagonal on the code states: <0|Z|0> = {z_val}"
        )));
    }
    let z = if z_val.re > 0.0 {
        z_cand.bare()
    } else {
        z_cand.bare().with_phase(crate::pauli::Phase::MINUS_ONE)
    };

    // X sign: <1|X|0> = +1.
    let x_val = bra_ket(state1, x_cand.bare(), &s0);
    if (x_val.norm() - 1.0).abs() > 1e-10 || x_val.im.abs() > 1e-10 {
        return Err(Error::InvalidArgument(format!(
            "X candidate does not map |0> to |1> with a real amplitude: <1|X|0> = {x_val}"
        )));
    }
    let x = if x_val.re > 0.0 {
        x_cand.bare()
    } else {
        x_cand.bare().with_phase(crate::pauli::Phase::MINUS_ONE)
    };

    // Y sign from the algebra X Y = i Z.
    let xy = x.multiply(&y_cand.bare())?;
    let iz = z.with_phase(z.phase().times(crate::pauli::Phase::PLUS_I));
    if xy.bare() != iz.bare() {
        return Err(Error::InvalidArgument(
            "X * Y does not produce the Z string".into(),
        ));
    }
    // xy = i^k * bare, need s_y * xy == iz.
    let rel = (iz.phase().exponent() + 4 - xy.phase().exponent()) % 4;
    let y = match rel {
        0 => y_cand.bare(),
        2 => y_cand.bare().with_phase(crate::pauli::Phase::MINUS_ONE),
        _ => {
            return Err(Error::InvalidArgument(
                "X * Y differs from i Z by an imaginary unit; candidates are inconsistent".into(),
            ))
        }
    };

    // Verify the full anchor set.
    let y_val = bra_ket(state1, y, &s0);
    if (y_val - Complex64::new(0.0, 1.0)).norm() > 1e-10 {
        return Err(Error::InvalidArgument(format!(
            "Y anchor failed: <1|Y|0> = {y_val}"
        )));
    }
    Ok(LogicalFrame { x, y, z })
}

/// Embed a string on local qubits [offset, offset + local_n) into n qubits.
fn embed(local: &PauliString, n: usize, offset: usize) -> PauliString {
    let mut letters = vec![Letter::I; n];
    for q in 0..local.n_qubits() {
        letters[offset + q] = local.letter(q);
    }
    PauliString::from_letters(&letters).with_phase(local.phase())
}

/// Logical Pauli frames, one per encoded qubit.
///
/// Four-qubit frame: X_L from sigma_2^y sigma_3^z, Y_L from sigma_2^x,
/// Z_L = -sigma_2^z sigma_3^z. The ten-qubit q0 frame appends sigma_5^z to
/// X_L and Y_L so they commute with the interface charge W6. The q1 frame is
/// built from sigma_0'^z sigma_2'^x and partners, which commute with every
/// sector label of the primed junction (see module tests).
pub fn logical_operators(spec: &SystemSpec) -> Result<Vec<LogicalFrame>> {
    match spec {
        SystemSpec::FourQubit { .. } | SystemSpec::TetradTorus { .. } => {
            let frame = fix_frame(
                4,
                &four_qubit_logical_zero(),
                &four_qubit_logical_one(),
                ps(4, &[(2, Y), (3, Z)]),
                ps(4, &[(2, X)]),
                ps(4, &[(2, Z), (3, Z)]),
            )?;
            Ok(vec![frame])
        }
        SystemSpec::TenQubit { .. } => {
            let q0 = fix_frame(
                6,
                &ten_qubit_q0_logical_zero(),
                &ten_qubit_q0_logical_one(),
                ps(6, &[(2, X), (5, Z)]),
                ps(6, &[(2, Y), (3, Z), (5, Z)]),
                ps(6, &[(2, Z), (3, Z)]),
            )?;
            let q1 = fix_frame(
                4,
                &ten_qubit_q1_logical_zero(),
                &ten_qubit_q1_logical_one(),
                ps(4, &[(0, Z), (2, X)]),
                ps(4, &[(0, Z), (2, Y), (3, Z)]),
                ps(4, &[(2, Z), (3, Z)]),
            )?;
            Ok(vec![
                LogicalFrame {
                    x: embed(&q0.x, 10, 0),
                    y: embed(&q0.y, 10, 0),
                    z: embed(&q0.z, 10, 0),
                },
                LogicalFrame {
                    x: embed(&q1.x, 10, 6),
                    y: embed(&q1.y, 10, 6),
                    z: embed(&q1.z, 10, 6),
                },
            ])
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{eigh, max_abs, CMatrix};

    fn arm(theta: f64, phi: f64) -> ClockArm {
        ClockArm::new(1.0, theta, phi)
    }

    #[test]
    fn cartesian_norm_matches_magnitude() {
        for (t, p) in [(0.3, 1.2), (1.9, 4.4), (0.0, 0.0), (3.1, 0.01)] {
            let a = ClockArm::new(2.5, t, p);
            let [x, y, z] = a.cartesian();
            assert!(((x * x + y * y + z * z).sqrt() - 2.5).abs() < 1e-12);
        }
    }

    #[test]
    fn idle_four_qubit_is_single_zz_term() {
        let h = hamiltonian(&SystemSpec::four_qubit(ClockArm::idle(1.0))).unwrap();
        assert_eq!(h.num_terms(), 1);
        assert_eq!(h.terms()[0].1, "+ ZZII".parse().unwrap());
        assert!((h.terms()[0].0.re - 1.0).abs() < 1e-15);
    }

    #[test]
    fn equatorial_four_qubit_is_single_xx_term() {
        let h = hamiltonian(&SystemSpec::four_qubit(arm(
            std::f64::consts::FRAC_PI_2,
            0.0,
        )))
        .unwrap();
        assert_eq!(h.num_terms(), 1);
        assert_eq!(h.terms()[0].1, "+ XIIX".parse().unwrap());
    }

    #[test]
    fn idle_ten_qubit_has_three_terms() {
        let spec = SystemSpec::ten_qubit(
            ClockArm::idle(1.0),
            ClockArm::idle(1.0),
            ClockArm::idle(1.0),
        );
        let h = hamiltonian(&spec).unwrap();
        assert_eq!(h.num_terms(), 3);
        let strings: Vec<String> = h.terms().iter().map(|(_, s)| s.to_string()).collect();
        assert!(strings.contains(&"+ ZZIIIIIIII".to_string()));
        assert!(strings.contains(&"+ IIIIZZIIII".to_string()));
        assert!(strings.contains(&"+ IIIIIIZZII".to_string()));
    }

    #[test]
    fn conserved_charges_commute_with_hamiltonian() {
        let mut rng_angles = vec![];
        for k in 0..20 {
            let t = 0.1 + 0.15 * k as f64;
            rng_angles.push((t % 3.1, (2.1 * t) % 6.2));
        }
        for (t, p) in rng_angles {
            let spec = SystemSpec::four_qubit(arm(t, p));
            let h = hamiltonian(&spec).unwrap();
            for w in conserved_set(&spec) {
                for (_, s) in h.terms() {
                    assert!(w.commutes_with(s).unwrap(), "{w} vs {s}");
                }
            }
        }

        let spec = SystemSpec::ten_qubit(arm(0.7, 1.1), arm(1.3, 2.9), arm(0.4, 5.0));
        let h = hamiltonian(&spec).unwrap();
        for w in conserved_set(&spec) {
            for (_, s) in h.terms() {
                assert!(w.commutes_with(s).unwrap(), "{w} vs {s}");
            }
        }
    }

    #[test]
    fn w3_fails_on_ten_qubit_middle_arm() {
        let spec = SystemSpec::ten_qubit(arm(0.7, 1.1), arm(1.3, 2.9), arm(0.4, 5.0));
        let h = hamiltonian(&spec).unwrap();
        let w3 = w3_ten_qubit();
        let breaks = h.terms().iter().any(|(_, s)| !w3.commutes_with(s).unwrap());
        assert!(breaks);
    }

    #[test]
    fn dense_commutator_oracle_spot_check() {
        // [W1, H] = 0 checked on dense 16x16 matrices.
        let spec = SystemSpec::four_qubit(arm(0.9, 2.3));
        let h = hamiltonian(&spec).unwrap().to_dense().unwrap();
        for w in conserved_set(&spec) {
            let wd = w.to_dense().unwrap();
            assert!(max_abs(&(&wd * &h - &h * &wd)) < 1e-12);
        }
    }

    #[test]
    fn tetrad_charges_commute_with_full_torus_hamiltonian() {
        let spec = SystemSpec::TetradTorus {
            arm: arm(0.8, 0.5),
            bar: [0.3, -0.7, 1.1],
        };
        let h = hamiltonian(&spec).unwrap();
        assert_eq!(h.num_terms(), 6);
        for w in conserved_set(&spec) {
            for (_, s) in h.terms() {
                assert!(w.commutes_with(s).unwrap());
            }
        }
    }

    #[test]
    fn four_qubit_h_squares_to_identity() {
        for (t, p) in [(0.3, 0.9), (1.2, 4.0), (2.8, 2.2)] {
            let h = hamiltonian(&SystemSpec::four_qubit(ClockArm::new(1.7, t, p))).unwrap();
            let hd = h.to_dense().unwrap();
            let sq = &hd * &hd;
            let expect = CMatrix::identity(16, 16).scale(1.7 * 1.7);
            assert!(max_abs(&(sq - expect)) < 1e-12);
        }
    }

    #[test]
    fn four_qubit_spectrum_is_half_and_half() {
        let h = hamiltonian(&SystemSpec::four_qubit(arm(0.6, 5.1))).unwrap();
        let (vals, _) = eigh(&h.to_dense().unwrap());
        assert_eq!(vals.iter().filter(|v| (**v + 1.0).abs() < 1e-12).count(), 8);
        assert_eq!(vals.iter().filter(|v| (**v - 1.0).abs() < 1e-12).count(), 8);
    }

    #[test]
    fn sector_ops_commute_with_everything_relevant() {
        let spec = SystemSpec::ten_qubit(arm(0.0, 0.0), arm(0.0, 0.0), arm(0.0, 0.0));
        let sector = energy_and_parity_operators(&spec);
        let all = sector.all();
        assert_eq!(all.len(), 5);
        for a in &all {
            for b in &all {
                assert!(a.commutes_with(b).unwrap());
            }
            for w in conserved_set(&spec) {
                assert!(a.commutes_with(&w).unwrap(), "{a} vs {w}");
            }
        }
    }

    #[test]
    fn label_operators_are_independent_and_commuting() {
        for spec in [
            SystemSpec::four_qubit(arm(0.0, 0.0)),
            SystemSpec::ten_qubit(arm(0.0, 0.0), arm(0.0, 0.0), arm(0.0, 0.0)),
        ] {
            let labels = label_operators(&spec);
            for (i, a) in labels.iter().enumerate() {
                for b in labels.iter().skip(i + 1) {
                    assert!(a.commutes_with(b).unwrap());
                }
            }
            // Independence: no nonempty subset multiplies to the identity.
            // Equivalent to GF(2) linear independence of (x|z) rows; for these
            // small sets brute-force over subsets is fine for the 4-qubit case
            // and a rank computation handles the 10-qubit case.
            let n = labels.len();
            if n <= 4 {
                for mask in 1..(1u32 << n) {
                    let mut prod = PauliString::identity(spec.n_qubits());
                    for (k, l) in labels.iter().enumerate() {
                        if mask >> k & 1 == 1 {
                            prod = prod.multiply(l).unwrap();
                        }
                    }
                    assert!(!prod.is_identity());
                }
            } else {
                // GF(2) Gaussian elimination on symplectic rows.
                let mut rows: Vec<u64> = labels
                    .iter()
                    .map(|l| {
                        let (z, x) = l.key();
                        ((z as u64) << 32) | x as u64
                    })
                    .collect();
                let mut rank = 0;
                for bit in (0..64).rev() {
                    let Some(pos) = (rank..rows.len()).find(|&r| rows[r] >> bit & 1 == 1) else {
                        continue;
                    };
                    rows.swap(rank, pos);
                    for r in 0..rows.len() {
                        if r != rank && rows[r] >> bit & 1 == 1 {
                            rows[r] ^= rows[rank];
                        }
                    }
                    rank += 1;
                }
                assert_eq!(rank, labels.len());
            }
        }
    }

    #[test]
    fn explicit_states_are_normalized() {
        for v in [
            four_qubit_logical_zero(),
            four_qubit_logical_one(),
            ten_qubit_q1_logical_zero(),
            ten_qubit_q1_logical_one(),
        ] {
            assert!((v.norm() - 1.0).abs() < 1e-12);
        }
        for v in [ten_qubit_q0_logical_zero(), ten_qubit_q0_logical_one()] {
            assert!((v.norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn four_qubit_code_states_sit_in_minus_sector() {
        let spec = SystemSpec::four_qubit(arm(0.0, 0.0));
        let ws = conserved_set(&spec);
        for v in [four_qubit_logical_zero(), four_qubit_logical_one()] {
            let st = QuantumState::from_amplitudes(4, v).unwrap();
            for w in &ws[..2] {
                let val = crate::engine::expectation_pauli(&st, w).unwrap();
                assert!((val + 1.0).abs() < 1e-12, "{w} gave {val}");
            }
        }
    }

    #[test]
    fn q1_code_states_sit_in_primed_minus_sector() {
        // Local sector labels of the primed junction: the W1 pattern, the W3
        // pattern, and the energy label; all must read -1 on both states.
        for v in [ten_qubit_q1_logical_zero(), ten_qubit_q1_logical_one()] {
            let st = QuantumState::from_amplitudes(4, v).unwrap();
            for s in ["+ ZIXY", "+ XYZI", "+ ZZII"] {
                let p: PauliString = s.parse().unwrap();
                let val = crate::engine::expectation_pauli(&st, &p).unwrap();
                assert!((val + 1.0).abs() < 1e-12, "{p} gave {val}");
            }
        }
    }

    #[test]
    fn four_qubit_logical_frame_closes() {
        let spec = SystemSpec::four_qubit(arm(0.0, 0.0));
        let frames = logical_operators(&spec).unwrap();
        assert_eq!(frames.len(), 1);
        let f = &frames[0];
        // Z_L = -sigma_2^z sigma_3^z: the parity label enters with a minus sign.
        assert_eq!(f.z, "- IIZZ".parse().unwrap());
        // Z|0> = +|0>.
        let st0 = QuantumState::from_amplitudes(4, four_qubit_logical_zero()).unwrap();
        assert!((crate::engine::expectation_pauli(&st0, &f.z).unwrap() - 1.0).abs() < 1e-12);
        // Frame members are Hermitian involutions and pairwise anticommute.
        for p in [f.x, f.y, f.z] {
            assert!(p.is_hermitian());
            assert!(p.bare().multiply(&p.bare()).unwrap().is_identity());
        }
        assert!(!f.x.commutes_with(&f.y).unwrap());
        assert!(!f.y.commutes_with(&f.z).unwrap());
        assert!(!f.x.commutes_with(&f.z).unwrap());
    }

    #[test]
    fn ten_qubit_logical_frames_commute_across_qubits() {
        let spec = SystemSpec::ten_qubit(arm(0.0, 0.0), arm(0.0, 0.0), arm(0.0, 0.0));
        let frames = logical_operators(&spec).unwrap();
        assert_eq!(frames.len(), 2);
        for a in [frames[0].x, frames[0].y, frames[0].z] {
            for b in [frames[1].x, frames[1].y, frames[1].z] {
                assert!(a.commutes_with(&b).unwrap());
            }
        }
    }

    #[test]
    fn q0_frame_commutes_with_every_sector_label() {
        let spec = SystemSpec::ten_qubit(arm(0.0, 0.0), arm(0.0, 0.0), arm(0.0, 0.0));
        let frames = logical_operators(&spec).unwrap();
        let sector = energy_and_parity_operators(&spec);
        let stabilizers: Vec<PauliString> = conserved_set(&spec)
            .into_iter()
            .take(5)
            .chain([
                sector.energy_left,
                sector.energy_right.unwrap(),
                sector.energy_middle.unwrap(),
            ])
            .collect();
        for (qi, frame) in frames.iter().enumerate() {
            for p in [frame.x, frame.y, frame.z] {
                for s in &stabilizers {
                    assert!(
                        p.commutes_with(s).unwrap(),
                        "logical q{qi} operator {p} fails against label {s}"
                    );
                }
            }
            // X and Y anticommute with the own-parity label, Z commutes.
            let parity = if qi == 0 {
                sector.parity_left
            } else {
                sector.parity_right.unwrap()
            };
            assert!(!frame.x.commutes_with(&parity).unwrap());
            assert!(!frame.y.commutes_with(&parity).unwrap());
            assert!(frame.z.commutes_with(&parity).unwrap());
        }
    }
}
