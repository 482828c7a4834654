//! Dense statevector and density-matrix simulation.
//!
//! States hold at most ten qubits, so a pure state is a 2^n vector and a
//! density matrix a 2^n x 2^n dense array (~16 MB worst case). Gates are
//! applied with bit-indexed kernels; exact Hamiltonian evolution goes through
//! a Hermitian eigendecomposition of the dense operator. All stochastic
//! output is reproducible from the seed: one ChaCha8 stream per call, draws
//! consumed in shot order.

use crate::linalg::{self, CMatrix, CVector, I as IM, ONE, ZERO};
use crate::pauli::{Letter, OperatorSum, PauliString};
use crate::{Error, Result};
use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub const NORM_TOL: f64 = 1e-10;

/// Pure statevector or density matrix over n qubits.
///
/// Qubit 0 is the most significant bit of a basis index, matching the text
/// order of [`PauliString`].
#[derive(Debug, Clone)]
pub enum QuantumState {
    Pure { n_qubits: usize, amps: CVector },
    Density { n_qubits: usize, rho: CMatrix },
}

impl QuantumState {
    /// |basis_index> as a pure state.
    pub fn basis_state(n_qubits: usize, basis_index: usize) -> QuantumState {
        let dim = 1usize << n_qubits;
        assert!(basis_index < dim);
        let mut amps = CVector::zeros(dim);
        amps[basis_index] = ONE;
        QuantumState::Pure { n_qubits, amps }
    }

    /// |0...0>.
    pub fn zero_state(n_qubits: usize) -> QuantumState {
        Self::basis_state(n_qubits, 0)
    }

    pub fn from_amplitudes(n_qubits: usize, amps: CVector) -> Result<QuantumState> {
        if amps.len() != 1 << n_qubits {
            return Err(Error::InvalidArgument(format!(
                "amplitude vector length {} != 2^{}",
                amps.len(),
                n_qubits
            )));
        }
        let norm = amps.norm();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::InvalidArgument(format!(
                "state norm {norm} not 1 within {NORM_TOL}"
            )));
        }
        Ok(QuantumState::Pure { n_qubits, amps })
    }

    pub fn n_qubits(&self) -> usize {
        match self {
            QuantumState::Pure { n_qubits, .. } | QuantumState::Density { n_qubits, .. } => {
                *n_qubits
            }
        }
    }

    pub fn dim(&self) -> usize {
        1 << self.n_qubits()
    }

    pub fn is_density(&self) -> bool {
        matches!(self, QuantumState::Density { .. })
    }

    pub fn amplitudes(&self) -> Option<&CVector> {
        match self {
            QuantumState::Pure { amps, .. } => Some(amps),
            QuantumState::Density { .. } => None,
        }
    }

    pub fn density(&self) -> Option<&CMatrix> {
        match self {
            QuantumState::Density { rho, .. } => Some(rho),
            QuantumState::Pure { .. } => None,
        }
    }

    /// Promote to density-matrix mode (no-op if already there).
    pub fn to_density(&self) -> QuantumState {
        match self {
            QuantumState::Density { .. } => self.clone(),
            QuantumState::Pure { n_qubits, amps } => QuantumState::Density {
                n_qubits: *n_qubits,
                rho: amps * amps.adjoint(),
            },
        }
    }

    /// Squared-norm (pure) or trace (density); should be 1.
    pub fn weight(&self) -> f64 {
        match self {
            QuantumState::Pure { amps, .. } => amps.norm_squared(),
            QuantumState::Density { rho, .. } => rho.trace().re,
        }
    }

    /// Overlap |<self|other>| for two pure states.
    pub fn overlap(&self, other: &QuantumState) -> Result<f64> {
        match (self, other) {
            (QuantumState::Pure { amps: a, .. }, QuantumState::Pure { amps: b, .. }) => {
                if a.len() != b.len() {
                    return Err(Error::DimensionMismatch(self.n_qubits(), other.n_qubits()));
                }
                Ok(a.dotc(b).norm())
            }
            _ => Err(Error::InvalidArgument(
                "overlap requires two pure states".into(),
            )),
        }
    }
}

/// Named one-qubit gates.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub enum OneQubitKind {
    X,
    Y,
    Z,
    H,
    S,
    Sdg,
    SqrtX,
    Rx(f64),
    Ry(f64),
    Rz(f64),
}

impl OneQubitKind {
    pub fn matrix(self) -> CMatrix {
        let s2 = std::f64::consts::FRAC_1_SQRT_2;
        match self {
            OneQubitKind::X => linalg::pauli2('X'),
            OneQubitKind::Y => linalg::pauli2('Y'),
            OneQubitKind::Z => linalg::pauli2('Z'),
            OneQubitKind::H => CMatrix::from_row_slice(
                2,
                2,
                &[
                    Complex64::new(s2, 0.0),
                    Complex64::new(s2, 0.0),
                    Complex64::new(s2, 0.0),
                    Complex64::new(-s2, 0.0),
                ],
            ),
            OneQubitKind::S => {
                CMatrix::from_row_slice(2, 2, &[ONE, ZERO, ZERO, Complex64::new(0.0, 1.0)])
            }
            OneQubitKind::Sdg => {
                CMatrix::from_row_slice(2, 2, &[ONE, ZERO, ZERO, Complex64::new(0.0, -1.0)])
            }
            OneQubitKind::SqrtX => CMatrix::from_row_slice(
                2,
                2,
                &[
                    Complex64::new(0.5, 0.5),
                    Complex64::new(0.5, -0.5),
                    Complex64::new(0.5, -0.5),
                    Complex64::new(0.5, 0.5),
                ],
            ),
            OneQubitKind::Rx(t) => {
                let (c, s) = ((t / 2.0).cos(), (t / 2.0).sin());
                CMatrix::from_row_slice(
                    2,
                    2,
                    &[
                        Complex64::new(c, 0.0),
                        Complex64::new(0.0, -s),
                        Complex64::new(0.0, -s),
                        Complex64::new(c, 0.0),
                    ],
                )
            }
            OneQubitKind::Ry(t) => {
                let (c, s) = ((t / 2.0).cos(), (t / 2.0).sin());
                CMatrix::from_row_slice(
                    2,
                    2,
                    &[
                        Complex64::new(c, 0.0),
                        Complex64::new(-s, 0.0),
                        Complex64::new(s, 0.0),
                        Complex64::new(c, 0.0),
                    ],
                )
            }
            OneQubitKind::Rz(t) => {
                let half = t / 2.0;
                CMatrix::from_diagonal(&CVector::from_vec(vec![
                    (-IM * half).exp(),
                    (IM * half).exp(),
                ]))
            }
        }
    }
}

/// A gate operation on a state.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub enum Gate {
    /// exp(-i angle (sigma_a x sigma_b) / 2) on (qubit_a, qubit_b).
    TwoPauliRotation {
        axis_a: Letter,
        axis_b: Letter,
        qubit_a: usize,
        qubit_b: usize,
        angle: f64,
    },
    OneQubit {
        kind: OneQubitKind,
        qubit: usize,
    },
    Controlled {
        control: usize,
        target: usize,
        kind: OneQubitKind,
    },
}

fn letter_matrix(l: Letter) -> CMatrix {
    linalg::pauli2(l.ch())
}

impl Gate {
    pub fn cnot(control: usize, target: usize) -> Gate {
        Gate::Controlled {
            control,
            target,
            kind: OneQubitKind::X,
        }
    }

    /// Qubits the gate acts on.
    pub fn support(&self) -> Vec<usize> {
        match self {
            Gate::TwoPauliRotation {
                qubit_a, qubit_b, ..
            } => vec![*qubit_a, *qubit_b],
            Gate::OneQubit { qubit, .. } => vec![*qubit],
            Gate::Controlled {
                control, target, ..
            } => vec![*control, *target],
        }
    }

    pub fn is_two_qubit(&self) -> bool {
        self.support().len() == 2
    }

    /// Dense matrix on the gate's local space; for two-qubit gates the first
    /// listed qubit is the most significant local bit.
    pub fn local_matrix(&self) -> CMatrix {
        match self {
            Gate::TwoPauliRotation {
                axis_a,
                axis_b,
                angle,
                ..
            } => {
                // (sigma_a x sigma_b)^2 = I, so the exponential is closed-form.
                let g = linalg::kron(&letter_matrix(*axis_a), &letter_matrix(*axis_b));
                let c = (angle / 2.0).cos();
                let s = (angle / 2.0).sin();
                CMatrix::identity(4, 4).scale(c) + g.map(|e| e * Complex64::new(0.0, -s))
            }
            Gate::OneQubit { kind, .. } => kind.matrix(),
            Gate::Controlled { kind, .. } => {
                let u = kind.matrix();
                let mut m = CMatrix::identity(4, 4);
                for r in 0..2 {
                    for c in 0..2 {
                        m[(2 + r, 2 + c)] = u[(r, c)];
                    }
                }
                m
            }
        }
    }
}

fn check_support(n_qubits: usize, support: &[usize]) -> Result<()> {
    for &q in support {
        if q >= n_qubits {
            return Err(Error::QubitOutOfRange { index: q, n_qubits });
        }
    }
    if support.len() == 2 && support[0] == support[1] {
        return Err(Error::InvalidArgument(format!(
            "two-qubit gate with repeated qubit {}",
            support[0]
        )));
    }
    Ok(())
}

/// Apply a 2x2 matrix to qubit q of a vector, in place.
fn apply_1q_vec(amps: &mut CVector, n: usize, q: usize, u: &CMatrix) {
    let dim = 1usize << n;
    let mask = 1usize << (n - 1 - q);
    for base in 0..dim {
        if base & mask != 0 {
            continue;
        }
        let i0 = base;
        let i1 = base | mask;
        let a0 = amps[i0];
        let a1 = amps[i1];
        amps[i0] = u[(0, 0)] * a0 + u[(0, 1)] * a1;
        amps[i1] = u[(1, 0)] * a0 + u[(1, 1)] * a1;
    }
}

/// Apply a 4x4 matrix to qubits (qa, qb) of a vector, in place.
/// qa is the most significant local bit.
fn apply_2q_vec(amps: &mut CVector, n: usize, qa: usize, qb: usize, u: &CMatrix) {
    let dim = 1usize << n;
    let ma = 1usize << (n - 1 - qa);
    let mb = 1usize << (n - 1 - qb);
    for base in 0..dim {
        if base & ma != 0 || base & mb != 0 {
            continue;
        }
        let idx = [base, base | mb, base | ma, base | ma | mb];
        let old = [amps[idx[0]], amps[idx[1]], amps[idx[2]], amps[idx[3]]];
        for r in 0..4 {
            let mut acc = ZERO;
            for c in 0..4 {
                acc += u[(r, c)] * old[c];
            }
            amps[idx[r]] = acc;
        }
    }
}

/// rho <- U rho U(dagger) restricted to one qubit.
fn apply_1q_density(rho: &mut CMatrix, n: usize, q: usize, u: &CMatrix) {
    let dim = 1usize << n;
    let mask = 1usize << (n - 1 - q);
    // Left multiply.
    for col in 0..dim {
        for base in 0..dim {
            if base & mask != 0 {
                continue;
            }
            let (i0, i1) = (base, base | mask);
            let a0 = rho[(i0, col)];
            let a1 = rho[(i1, col)];
            rho[(i0, col)] = u[(0, 0)] * a0 + u[(0, 1)] * a1;
            rho[(i1, col)] = u[(1, 0)] * a0 + u[(1, 1)] * a1;
        }
    }
    // Right multiply by U(dagger).
    for row in 0..dim {
        for base in 0..dim {
            if base & mask != 0 {
                continue;
            }
            let (j0, j1) = (base, base | mask);
            let a0 = rho[(row, j0)];
            let a1 = rho[(row, j1)];
            rho[(row, j0)] = a0 * u[(0, 0)].conj() + a1 * u[(0, 1)].conj();
            rho[(row, j1)] = a0 * u[(1, 0)].conj() + a1 * u[(1, 1)].conj();
        }
    }
}

/// rho <- U rho U(dagger) restricted to a qubit pair.
fn apply_2q_density(rho: &mut CMatrix, n: usize, qa: usize, qb: usize, u: &CMatrix) {
    let dim = 1usize << n;
    let ma = 1usize << (n - 1 - qa);
    let mb = 1usize << (n - 1 - qb);
    for col in 0..dim {
        for base in 0..dim {
            if base & ma != 0 || base & mb != 0 {
                continue;
            }
            let idx = [base, base | mb, base | ma, base | ma | mb];
            let old = [
                rho[(idx[0], col)],
                rho[(idx[1], col)],
                rho[(idx[2], col)],
                rho[(idx[3], col)],
            ];
            for r in 0..4 {
                let mut acc = ZERO;
                for c in 0..4 {
                    acc += u[(r, c)] * old[c];
                }
                rho[(idx[r], col)] = acc;
            }
        }
    }
    for row in 0..dim {
        for base in 0..dim {
            if base & ma != 0 || base & mb != 0 {
                continue;
            }
            let idx = [base, base | mb, base | ma, base | ma | mb];
            let old = [
                rho[(row, idx[0])],
                rho[(row, idx[1])],
                rho[(row, idx[2])],
                rho[(row, idx[3])],
            ];
            for c in 0..4 {
                let mut acc = ZERO;
                for k in 0..4 {
                    acc += old[k] * u[(c, k)].conj();
                }
                rho[(row, idx[c])] = acc;
            }
        }
    }
}

/// Apply a gate in place; unitary, so norm/trace is preserved.
pub fn apply_gate(state: &mut QuantumState, gate: &Gate) -> Result<()> {
    let n = state.n_qubits();
    let support = gate.support();
    check_support(n, &support)?;
    let u = gate.local_matrix();
    match state {
        QuantumState::Pure { amps, .. } => match support.as_slice() {
            [q] => apply_1q_vec(amps, n, *q, &u),
            [qa, qb] => apply_2q_vec(amps, n, *qa, *qb, &u),
            _ => unreachable!(),
        },
        QuantumState::Density { rho, .. } => match support.as_slice() {
            [q] => apply_1q_density(rho, n, *q, &u),
            [qa, qb] => apply_2q_density(rho, n, *qa, *qb, &u),
            _ => unreachable!(),
        },
    }
    Ok(())
}

pub fn apply_circuit(state: &mut QuantumState, gates: &[Gate]) -> Result<()> {
    for g in gates {
        apply_gate(state, g)?;
    }
    Ok(())
}

/// Apply a full 2^n x 2^n unitary.
pub fn apply_dense_unitary(state: &mut QuantumState, u: &CMatrix) -> Result<()> {
    if u.nrows() != state.dim() {
        return Err(Error::InvalidArgument(format!(
            "unitary dim {} != state dim {}",
            u.nrows(),
            state.dim()
        )));
    }
    match state {
        QuantumState::Pure { amps, .. } => {
            let new = u * &*amps;
            *amps = new;
        }
        QuantumState::Density { rho, .. } => {
            let new = u * &*rho * u.adjoint();
            *rho = new;
        }
    }
    Ok(())
}

/// exp(-i H t) |psi> via eigendecomposition of the dense Hamiltonian.
pub fn evolve_exact(state: &mut QuantumState, hamiltonian: &OperatorSum, t: f64) -> Result<()> {
    if !hamiltonian.is_hermitian() {
        let worst = hamiltonian
            .terms()
            .iter()
            .map(|(c, _)| c.im.abs())
            .fold(0.0, f64::max);
        return Err(Error::NotHermitian(worst));
    }
    if hamiltonian.n_qubits() != state.n_qubits() {
        return Err(Error::DimensionMismatch(
            hamiltonian.n_qubits(),
            state.n_qubits(),
        ));
    }
    let u = linalg::expm_neg_i_hermitian(&hamiltonian.to_dense()?, t);
    apply_dense_unitary(state, &u)
}

/// Apply a Pauli string to a vector: out = P v.
pub fn pauli_apply_vec(p: &PauliString, v: &CVector) -> CVector {
    let dim = v.len();
    let flip = p.flip_mask();
    let mut out = CVector::zeros(dim);
    for b in 0..dim {
        out[b ^ flip] = p.basis_factor(b) * v[b];
    }
    out
}

/// <state| op |state> (or Tr(rho op)); must be Hermitian to 1e-12.
pub fn expectation(state: &QuantumState, op: &OperatorSum) -> Result<f64> {
    if !op.is_hermitian() {
        let worst = op
            .terms()
            .iter()
            .map(|(c, _)| c.im.abs())
            .fold(0.0, f64::max);
        return Err(Error::NotHermitian(worst));
    }
    let val = expectation_complex(state, op)?;
    Ok(val.re)
}

/// Raw (possibly complex) expectation of an arbitrary operator sum.
pub fn expectation_complex(state: &QuantumState, op: &OperatorSum) -> Result<Complex64> {
    if op.n_qubits() != state.n_qubits() {
        return Err(Error::DimensionMismatch(op.n_qubits(), state.n_qubits()));
    }
    let mut total = ZERO;
    match state {
        QuantumState::Pure { amps, .. } => {
            for (c, s) in op.terms() {
                let flip = s.flip_mask();
                let mut acc = ZERO;
                for b in 0..amps.len() {
                    acc += amps[b ^ flip].conj() * s.basis_factor(b) * amps[b];
                }
                total += c * acc;
            }
        }
        QuantumState::Density { rho, .. } => {
            for (c, s) in op.terms() {
                let flip = s.flip_mask();
                let mut acc = ZERO;
                for b in 0..rho.nrows() {
                    // (rho P)[b, b] = rho[b, b ^ flip] * f(b)
                    acc += rho[(b, b ^ flip)] * s.basis_factor(b);
                }
                total += c * acc;
            }
        }
    }
    Ok(total)
}

/// Expectation of a single Hermitian Pauli string.
pub fn expectation_pauli(state: &QuantumState, p: &PauliString) -> Result<f64> {
    if !p.phase().is_real() {
        return Err(Error::NotHermitian(1.0));
    }
    let op = OperatorSum::from_terms(p.n_qubits(), vec![(ONE, *p)])?;
    expectation(state, &op)
}

/// Unbiased shot estimate of a single Pauli string expectation.
///
/// Each shot is a fresh projective +-1 measurement; outcomes are drawn from
/// a ChaCha8 stream seeded with `seed`, one draw per shot in order.
pub fn sample_expectation(
    state: &QuantumState,
    op: &PauliString,
    shots: usize,
    seed: u64,
) -> Result<f64> {
    if !op.phase().is_real() {
        return Err(Error::NotHermitian(1.0));
    }
    if op.n_qubits() != state.n_qubits() {
        return Err(Error::DimensionMismatch(op.n_qubits(), state.n_qubits()));
    }
    let mean = expectation_pauli(state, op)?;
    let p_plus = ((1.0 + mean) / 2.0).clamp(0.0, 1.0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut plus = 0usize;
    for _ in 0..shots {
        if rng.random::<f64>() < p_plus {
            plus += 1;
        }
    }
    Ok(2.0 * plus as f64 / shots as f64 - 1.0)
}

/// Depolarize the listed qubits: rho <- (1-p) rho + p * uniform Pauli mixture.
///
/// The mixture averages rho over all 4^k Pauli conjugations on the listed
/// qubits, which fully depolarizes that subsystem at p = 1.
pub fn apply_depolarizing(state: &mut QuantumState, qubits: &[usize], p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidArgument(format!("p = {p} outside [0, 1]")));
    }
    let n = state.n_qubits();
    check_support(n, &[])?;
    for &q in qubits {
        if q >= n {
            return Err(Error::QubitOutOfRange {
                index: q,
                n_qubits: n,
            });
        }
    }
    let QuantumState::Density { rho, .. } = state else {
        return Err(Error::NotDensityMatrix);
    };
    if p == 0.0 {
        return Ok(());
    }
    // The uniform Pauli mixture over a subsystem equals full depolarization
    // of that subsystem: (1/4^k) sum_P P rho P = I/2^k (x) Tr_sub(rho).
    // Computing the partial trace directly costs O(4^n) instead of the
    // 4^k conjugations of the literal sum; a unit test pins the equivalence.
    let dim = rho.nrows();
    let k = qubits.len();
    let sub_dim = 1usize << k;
    let mut masks = Vec::with_capacity(k);
    for &q in qubits {
        masks.push(1usize << (n - 1 - q));
    }
    let rest_mask = !masks.iter().fold(0usize, |acc, m| acc | m) & (dim - 1);
    let embed = |rest: usize, sub: usize| -> usize {
        let mut idx = rest;
        for (bit, m) in masks.iter().enumerate() {
            if sub >> (k - 1 - bit) & 1 == 1 {
                idx |= m;
            }
        }
        idx
    };

    // Reduced matrix over the untouched qubits, indexed by rest-bit patterns.
    let mut out = rho.scale(1.0 - p);
    let weight = p / sub_dim as f64;
    for row_rest in 0..dim {
        if row_rest & rest_mask != row_rest {
            continue;
        }
        for col_rest in 0..dim {
            if col_rest & rest_mask != col_rest {
                continue;
            }
            let mut reduced = ZERO;
            for b in 0..sub_dim {
                reduced += rho[(embed(row_rest, b), embed(col_rest, b))];
            }
            let contribution = reduced * weight;
            for b in 0..sub_dim {
                out[(embed(row_rest, b), embed(col_rest, b))] += contribution;
            }
        }
    }
    *rho = out;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{eigh, kron, max_abs, pauli2};
    use proptest::prelude::*;

    fn ps(s: &str) -> PauliString {
        s.parse().unwrap()
    }

    fn op1(n: usize, s: &str) -> OperatorSum {
        OperatorSum::from_terms(n, vec![(ONE, ps(s))]).unwrap()
    }

    /// Matrix exponential by scaled Taylor series; independent of eigh.
    fn expm_taylor(m: &CMatrix) -> CMatrix {
        let norm = max_abs(m) * m.nrows() as f64;
        let squarings = norm.log2().ceil().max(0.0) as u32 + 4;
        let scaled = m.scale(1.0 / f64::powi(2.0, squarings as i32));
        let mut term = CMatrix::identity(m.nrows(), m.ncols());
        let mut acc = term.clone();
        for k in 1..24 {
            term = &term * &scaled / Complex64::new(k as f64, 0.0);
            acc += &term;
        }
        for _ in 0..squarings {
            acc = &acc * &acc;
        }
        acc
    }

    fn dense_gate(n: usize, gate: &Gate) -> CMatrix {
        // Independent embedding: kron over all qubits with explicit placement,
        // via basis-state application of the local matrix.
        let dim = 1 << n;
        let mut m = CMatrix::zeros(dim, dim);
        for col in 0..dim {
            let mut st = QuantumState::basis_state(n, col);
            apply_gate(&mut st, gate).unwrap();
            m.set_column(col, st.amplitudes().unwrap());
        }
        m
    }

    #[test]
    fn x_flips_zero() {
        let mut st = QuantumState::zero_state(1);
        apply_gate(
            &mut st,
            &Gate::OneQubit {
                kind: OneQubitKind::X,
                qubit: 0,
            },
        )
        .unwrap();
        assert!((st.amplitudes().unwrap()[1] - ONE).norm() < 1e-15);
    }

    #[test]
    fn rzz_two_pi_is_minus_identity() {
        let gate = Gate::TwoPauliRotation {
            axis_a: Letter::Z,
            axis_b: Letter::Z,
            qubit_a: 0,
            qubit_b: 1,
            angle: 2.0 * std::f64::consts::PI,
        };
        let u = gate.local_matrix();
        assert!(max_abs(&(u + CMatrix::identity(4, 4))) < 1e-14);
    }

    #[test]
    fn rxx_half_pi_entangles_00() {
        let mut st = QuantumState::zero_state(2);
        apply_gate(
            &mut st,
            &Gate::TwoPauliRotation {
                axis_a: Letter::X,
                axis_b: Letter::X,
                qubit_a: 0,
                qubit_b: 1,
                angle: std::f64::consts::FRAC_PI_2,
            },
        )
        .unwrap();
        // Oracle: 4x4 matrix exponential of -i (pi/4) XX by Taylor series.
        let xx = kron(&pauli2('X'), &pauli2('X'));
        let oracle =
            expm_taylor(&xx.map(|c| c * Complex64::new(0.0, -std::f64::consts::FRAC_PI_4)));
        let expected = oracle.column(0).into_owned();
        let amps = st.amplitudes().unwrap();
        assert!((amps - expected).norm() < 1e-13);
        // Frozen values: (|00> - i |11>)/sqrt(2).
        let s2 = std::f64::consts::FRAC_1_SQRT_2;
        assert!((amps[0] - Complex64::new(s2, 0.0)).norm() < 1e-13);
        assert!((amps[3] - Complex64::new(0.0, -s2)).norm() < 1e-13);
    }

    #[test]
    fn gate_index_out_of_range() {
        let mut st = QuantumState::zero_state(2);
        let g = Gate::OneQubit {
            kind: OneQubitKind::H,
            qubit: 5,
        };
        assert!(matches!(
            apply_gate(&mut st, &g),
            Err(Error::QubitOutOfRange { index: 5, .. })
        ));
    }

    #[test]
    fn evolve_exact_identity_at_zero_time() {
        let h = op1(2, "+ ZZ");
        let mut st = QuantumState::from_amplitudes(
            2,
            CVector::from_vec(vec![
                Complex64::new(0.5, 0.0),
                Complex64::new(0.5, 0.0),
                Complex64::new(0.5, 0.0),
                Complex64::new(0.5, 0.0),
            ]),
        )
        .unwrap();
        let before = st.amplitudes().unwrap().clone();
        evolve_exact(&mut st, &h, 0.0).unwrap();
        assert!((st.amplitudes().unwrap() - before).norm() < 1e-14);
    }

    #[test]
    fn evolve_exact_z_pi_gives_global_minus() {
        let h = op1(1, "+ Z");
        let mut st = QuantumState::from_amplitudes(
            1,
            CVector::from_vec(vec![
                Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0),
                Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0),
            ]),
        )
        .unwrap();
        evolve_exact(&mut st, &h, std::f64::consts::PI).unwrap();
        let amps = st.amplitudes().unwrap();
        // e^{-i pi Z} = -I
        let s2 = std::f64::consts::FRAC_1_SQRT_2;
        assert!((amps[0] + Complex64::new(s2, 0.0)).norm() < 1e-12);
        assert!((amps[1] + Complex64::new(s2, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn evolve_exact_matches_taylor_oracle() {
        // Clock-arm Hamiltonian at theta = pi/4 on four qubits.
        let t = std::f64::consts::FRAC_PI_4;
        let mut h = OperatorSum::zero(4);
        h.add_term(Complex64::new(t.cos(), 0.0), &ps("+ ZZII"))
            .unwrap();
        h.add_term(Complex64::new(t.sin(), 0.0), &ps("+ XIIX"))
            .unwrap();
        let dense = h.to_dense().unwrap();
        let oracle = expm_taylor(&dense.map(|c| c * Complex64::new(0.0, -0.9)));

        let mut st = QuantumState::basis_state(4, 5);
        evolve_exact(&mut st, &h, 0.9).unwrap();
        let expected = oracle.column(5).into_owned();
        assert!((st.amplitudes().unwrap() - expected).norm() < 1e-10);
    }

    #[test]
    fn evolve_exact_rejects_non_hermitian() {
        let h = OperatorSum::from_terms(1, vec![(Complex64::new(0.0, 1.0), ps("+ X"))]).unwrap();
        let mut st = QuantumState::zero_state(1);
        assert!(matches!(
            evolve_exact(&mut st, &h, 1.0),
            Err(Error::NotHermitian(_))
        ));
    }

    #[test]
    fn evolve_composes_in_time() {
        let mut h = OperatorSum::zero(3);
        h.add_term(Complex64::new(0.8, 0.0), &ps("+ ZZI")).unwrap();
        h.add_term(Complex64::new(0.6, 0.0), &ps("+ IXX")).unwrap();
        let mut a = QuantumState::basis_state(3, 3);
        let mut b = a.clone();
        evolve_exact(&mut a, &h, 1.1).unwrap();
        evolve_exact(&mut b, &h, 0.4).unwrap();
        evolve_exact(&mut b, &h, 0.7).unwrap();
        let (QuantumState::Pure { amps: av, .. }, QuantumState::Pure { amps: bv, .. }) = (&a, &b)
        else {
            panic!()
        };
        assert!((av - bv).norm() < 1e-10);
    }

    #[test]
    fn expectation_basics() {
        let st = QuantumState::zero_state(1);
        assert!((expectation(&st, &op1(1, "+ Z")).unwrap() - 1.0).abs() < 1e-15);
        assert!(expectation(&st, &op1(1, "+ X")).unwrap().abs() < 1e-15);
    }

    #[test]
    fn expectation_density_matches_pure() {
        let mut st = QuantumState::basis_state(3, 1);
        apply_gate(
            &mut st,
            &Gate::OneQubit {
                kind: OneQubitKind::H,
                qubit: 0,
            },
        )
        .unwrap();
        apply_gate(&mut st, &Gate::cnot(0, 2)).unwrap();
        let mut obs = OperatorSum::zero(3);
        obs.add_term(Complex64::new(0.7, 0.0), &ps("+ XIX"))
            .unwrap();
        obs.add_term(Complex64::new(0.3, 0.0), &ps("+ ZII"))
            .unwrap();
        let pure_val = expectation(&st, &obs).unwrap();
        let dens_val = expectation(&st.to_density(), &obs).unwrap();
        assert!((pure_val - dens_val).abs() < 1e-12);
    }

    #[test]
    fn sampling_deterministic_outcome_is_exact() {
        let st = QuantumState::zero_state(2);
        let est = sample_expectation(&st, &ps("+ ZI"), 64, 7).unwrap();
        assert_eq!(est, 1.0);
    }

    #[test]
    fn sampling_is_reproducible_and_unbiased() {
        let mut st = QuantumState::zero_state(1);
        apply_gate(
            &mut st,
            &Gate::OneQubit {
                kind: OneQubitKind::H,
                qubit: 0,
            },
        )
        .unwrap();
        let shots = 1 << 13;
        let a = sample_expectation(&st, &ps("+ X"), shots, 42).unwrap();
        let b = sample_expectation(&st, &ps("+ X"), shots, 42).unwrap();
        assert_eq!(a, b);
        // <X> = 1 on |+>, exactly deterministic
        assert_eq!(a, 1.0);
        // <Z> = 0 within 5 sigma
        let z = sample_expectation(&st, &ps("+ Z"), shots, 42).unwrap();
        assert!(z.abs() < 5.0 / (shots as f64).sqrt());
    }

    #[test]
    fn depolarizing_limits() {
        let mut st = QuantumState::zero_state(1).to_density();
        apply_depolarizing(&mut st, &[0], 0.0).unwrap();
        assert!((st.density().unwrap()[(0, 0)] - ONE).norm() < 1e-15);

        apply_depolarizing(&mut st, &[0], 1.0).unwrap();
        let rho = st.density().unwrap();
        assert!((rho[(0, 0)] - Complex64::new(0.5, 0.0)).norm() < 1e-14);
        assert!((rho[(1, 1)] - Complex64::new(0.5, 0.0)).norm() < 1e-14);
        assert!(rho[(0, 1)].norm() < 1e-14);
    }

    #[test]
    fn depolarizing_preserves_trace() {
        let mut st = QuantumState::basis_state(2, 0);
        apply_gate(
            &mut st,
            &Gate::OneQubit {
                kind: OneQubitKind::H,
                qubit: 0,
            },
        )
        .unwrap();
        apply_gate(&mut st, &Gate::cnot(0, 1)).unwrap();
        let mut dm = st.to_density();
        apply_depolarizing(&mut dm, &[0, 1], 0.3).unwrap();
        assert!((dm.weight() - 1.0).abs() < 1e-12);
        // still positive semidefinite
        let (vals, _) = eigh(dm.density().unwrap());
        assert!(vals.iter().all(|v| *v > -1e-12));
    }

    #[test]
    fn depolarizing_requires_density_mode() {
        let mut st = QuantumState::zero_state(1);
        assert!(matches!(
            apply_depolarizing(&mut st, &[0], 0.1),
            Err(Error::NotDensityMatrix)
        ));
    }

    #[test]
    fn sampling_agrees_with_expectation_over_random_states() {
        // Statistical oracle: 100 random states, 4096 shots each, estimates
        // within five standard errors of the exact expectation.
        use rand::Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        let shots = 4096usize;
        let observable = ps("+ XZI");
        for trial in 0..100u64 {
            let mut v = CVector::from_iterator(
                8,
                (0..8)
                    .map(|_| Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)),
            );
            let norm = v.norm();
            v.scale_mut(1.0 / norm);
            let st = QuantumState::Pure {
                n_qubits: 3,
                amps: v,
            };
            let exact = expectation_pauli(&st, &observable).unwrap();
            let est = sample_expectation(&st, &observable, shots, 7000 + trial).unwrap();
            let sigma = ((1.0 - exact * exact).max(1e-12) / shots as f64).sqrt();
            assert!(
                (est - exact).abs() <= 5.0 * sigma + 1e-12,
                "trial {trial}: est {est} exact {exact} sigma {sigma}"
            );
        }
    }

    #[test]
    fn density_promotion_commutes_with_evolution() {
        let mut h = OperatorSum::zero(3);
        h.add_term(Complex64::new(0.9, 0.0), &ps("+ ZZI")).unwrap();
        h.add_term(Complex64::new(0.4, 0.0), &ps("+ IXX")).unwrap();
        let mut pure = QuantumState::basis_state(3, 5);
        apply_gate(
            &mut pure,
            &Gate::OneQubit {
                kind: OneQubitKind::H,
                qubit: 1,
            },
        )
        .unwrap();

        let mut promoted_first = pure.to_density();
        evolve_exact(&mut promoted_first, &h, 0.83).unwrap();

        let mut evolved_first = pure.clone();
        evolve_exact(&mut evolved_first, &h, 0.83).unwrap();
        let promoted_last = evolved_first.to_density();

        assert!(
            max_abs(&(promoted_first.density().unwrap() - promoted_last.density().unwrap()))
                < 1e-10
        );
    }

    #[test]
    fn depolarizing_matches_pauli_mixture_oracle() {
        // The partial-trace implementation must equal the literal uniform
        // Pauli mixture (1-p) rho + (p/16) sum_PQ (PQ) rho (PQ).
        let mut st = QuantumState::basis_state(3, 1);
        apply_gate(
            &mut st,
            &Gate::OneQubit {
                kind: OneQubitKind::H,
                qubit: 0,
            },
        )
        .unwrap();
        apply_gate(&mut st, &Gate::cnot(0, 2)).unwrap();
        apply_gate(
            &mut st,
            &Gate::OneQubit {
                kind: OneQubitKind::Rz(0.7),
                qubit: 2,
            },
        )
        .unwrap();
        let rho0 = st.to_density();
        let p = 0.37;

        let mut fast = rho0.clone();
        apply_depolarizing(&mut fast, &[0, 2], p).unwrap();

        let letters = [Letter::I, Letter::X, Letter::Y, Letter::Z];
        let mut mixture = CMatrix::zeros(8, 8);
        for a in letters {
            for b in letters {
                let mut conj = rho0.clone();
                for (q, l) in [(0usize, a), (2usize, b)] {
                    if l != Letter::I {
                        let g = Gate::OneQubit {
                            kind: match l {
                                Letter::X => OneQubitKind::X,
                                Letter::Y => OneQubitKind::Y,
                                Letter::Z => OneQubitKind::Z,
                                Letter::I => unreachable!(),
                            },
                            qubit: q,
                        };
                        apply_gate(&mut conj, &g).unwrap();
                    }
                }
                mixture += conj.density().unwrap();
            }
        }
        let expect = rho0.density().unwrap().scale(1.0 - p) + mixture.scale(p / 16.0);
        assert!(max_abs(&(fast.density().unwrap() - expect)) < 1e-13);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn gates_agree_with_dense_oracle(
            kind_sel in 0..6usize,
            qa in 0..3usize,
            qb in 0..3usize,
            angle in -3.0f64..3.0,
            seed_amp in proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 8),
        ) {
            prop_assume!(qa != qb);
            let gate = match kind_sel {
                0 => Gate::OneQubit { kind: OneQubitKind::H, qubit: qa },
                1 => Gate::OneQubit { kind: OneQubitKind::Rz(angle), qubit: qa },
                2 => Gate::Controlled { control: qa, target: qb, kind: OneQubitKind::Y },
                3 => Gate::TwoPauliRotation { axis_a: Letter::X, axis_b: Letter::X, qubit_a: qa, qubit_b: qb, angle },
                4 => Gate::TwoPauliRotation { axis_a: Letter::Z, axis_b: Letter::Z, qubit_a: qa, qubit_b: qb, angle },
                _ => Gate::TwoPauliRotation { axis_a: Letter::Y, axis_b: Letter::Z, qubit_a: qa, qubit_b: qb, angle },
            };
            // Random normalized 3-qubit state.
            let mut v = CVector::from_iterator(8, seed_amp.iter().map(|(r, i)| Complex64::new(*r, *i)));
            let norm = v.norm();
            prop_assume!(norm > 1e-3);
            v.scale_mut(1.0 / norm);

            let mut st = QuantumState::Pure { n_qubits: 3, amps: v.clone() };
            apply_gate(&mut st, &gate).unwrap();

            let dense = dense_gate(3, &gate);
            // unitarity of embedding
            prop_assert!(max_abs(&(&dense * dense.adjoint() - CMatrix::identity(8, 8))) < 1e-12);
            let expect = &dense * &v;
            prop_assert!((st.amplitudes().unwrap() - expect).norm() < 1e-12);

            // density route agrees with pure route
            let mut dm = QuantumState::Pure { n_qubits: 3, amps: v }.to_density();
            apply_gate(&mut dm, &gate).unwrap();
            let from_pure = st.to_density();
            prop_assert!(max_abs(&(dm.density().unwrap() - from_pure.density().unwrap())) < 1e-12);
        }
    }
}
