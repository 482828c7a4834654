//! State tomography in the logical basis, Choi-matrix reconstruction by
//! linear inversion, and process fidelity.
//!
//! The Choi matrix is normalized to trace d (the logical dimension), so a
//! perfect gate scores process fidelity Tr[chi_ideal^dag chi] / d^2 = 1.
//! Linear inversion is the default reconstructor: it is exact on noiseless
//! data and reports (rather than hides) any unphysical negativity; an
//! optional positivity projection clips negative eigenvalues and restores
//! the trace for noisy runs.

use crate::engine::{expectation_pauli, sample_expectation, QuantumState};
use crate::linalg::{eigh, CMatrix, CVector};
use crate::model::LogicalFrame;
use crate::pauli::{Letter, PauliString};
use crate::protocol::LogicalLabel;
use crate::{Error, Result};
use num_complex::Complex64;

const RE: fn(f64) -> Complex64 = |x| Complex64::new(x, 0.0);

/// Channel representation on d^2 x d^2 entries, trace = d.
#[derive(Debug, Clone)]
pub struct ChoiMatrix {
    pub d: usize,
    pub matrix: CMatrix,
}

impl ChoiMatrix {
    /// The rank-one Choi matrix of a logical unitary.
    pub fn from_unitary(u: &CMatrix) -> ChoiMatrix {
        let d = u.nrows();
        let mut v = CVector::zeros(d * d);
        for i in 0..d {
            for r in 0..d {
                v[i * d + r] = u[(r, i)];
            }
        }
        ChoiMatrix {
            d,
            matrix: &v * v.adjoint(),
        }
    }

    pub fn identity(d: usize) -> ChoiMatrix {
        Self::from_unitary(&CMatrix::identity(d, d))
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    /// Eigenvalues of the Choi matrix, ascending; negative entries signal an
    /// unphysical reconstruction.
    pub fn eigenvalues(&self) -> Vec<f64> {
        eigh(&self.matrix).0
    }

    /// Minimal eigenvalue (negativity report).
    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues()[0]
    }

    /// Clip negative eigenvalues and renormalize the trace to d.
    pub fn positivity_projected(&self) -> ChoiMatrix {
        let (vals, vecs) = eigh(&self.matrix);
        let clipped: Vec<f64> = vals.iter().map(|v| v.max(0.0)).collect();
        let total: f64 = clipped.iter().sum();
        let scale = self.d as f64 / total;
        let diag = CMatrix::from_diagonal(&CVector::from_iterator(
            clipped.len(),
            clipped.iter().map(|v| RE(v * scale)),
        ));
        ChoiMatrix {
            d: self.d,
            matrix: &vecs * diag * vecs.adjoint(),
        }
    }
}

/// F = Tr[ideal^dag actual] / d^2; equals |Tr(U^dag V)|^2 / d^2 on unitaries.
pub fn process_fidelity(ideal: &ChoiMatrix, actual: &ChoiMatrix) -> Result<f64> {
    if ideal.d != actual.d {
        return Err(Error::DimensionMismatch(ideal.d, actual.d));
    }
    let d2 = (ideal.d * ideal.d) as f64;
    Ok((ideal.matrix.adjoint() * &actual.matrix).trace().re / d2)
}

/// Optional shot sampling for tomography measurements.
#[derive(Debug, Clone, Copy)]
pub struct ShotPlan {
    pub shots: usize,
    pub seed: u64,
}

fn logical_pauli_product(
    frames: &[LogicalFrame],
    letters: &[Letter],
) -> Result<Option<PauliString>> {
    let mut acc: Option<PauliString> = None;
    for (frame, letter) in frames.iter().zip(letters) {
        if let Some(op) = frame.by_letter(*letter) {
            acc = Some(match acc {
                None => op,
                Some(prev) => prev.multiply(&op)?,
            });
        }
    }
    Ok(acc)
}

fn abstract_pauli_product(letters: &[Letter]) -> CMatrix {
    let mut m = CMatrix::identity(1, 1);
    for l in letters {
        m = crate::linalg::kron(&m, &crate::linalg::pauli2(l.ch()));
    }
    m
}

fn letter_grid(n: usize) -> Vec<Vec<Letter>> {
    let letters = [Letter::I, Letter::X, Letter::Y, Letter::Z];
    let mut out = Vec::with_capacity(4usize.pow(n as u32));
    for combo in 0..4usize.pow(n as u32) {
        let mut c = combo;
        let mut ls = Vec::with_capacity(n);
        for _ in 0..n {
            ls.push(letters[c % 4]);
            c /= 4;
        }
        ls.reverse();
        out.push(ls);
    }
    out
}

/// Reconstruct the logical density matrix of a physical state.
///
/// rho = (1/d) sum_P <P> sigma_P over the logical Pauli frame, with <P>
/// measured exactly or by `shots` projective samples per operator. Each
/// sampled operator consumes its own ChaCha stream seeded by
/// `seed + operator index` in grid order.
pub fn state_tomography(
    state: &QuantumState,
    frames: &[LogicalFrame],
    shots: Option<ShotPlan>,
) -> Result<CMatrix> {
    let n = frames.len();
    let d = 1usize << n;
    let mut rho = CMatrix::zeros(d, d);
    for (index, letters) in letter_grid(n).iter().enumerate() {
        let value = match logical_pauli_product(frames, letters)? {
            None => 1.0,
            Some(op) => {
                if !op.phase().is_real() {
                    return Err(Error::NotHermitian(1.0));
                }
                match shots {
                    None => expectation_pauli(state, &op.bare())? * op.phase().complex().re,
                    Some(plan) => {
                        sample_expectation(state, &op.bare(), plan.shots, plan.seed + index as u64)?
                            * op.phase().complex().re
                    }
                }
            }
        };
        rho += abstract_pauli_product(letters).scale(value / d as f64);
    }
    Ok(rho)
}

/// Eigenvalues of a reconstructed density matrix (negativity report).
pub fn density_eigenvalues(rho: &CMatrix) -> Vec<f64> {
    eigh(rho).0
}

/// Single-qubit decomposition |a><b| = sum_s w |phi_s><phi_s| over the
/// canonical input set {|0>, |1>, |+>, |i+>}.
fn input_weights(a: usize, b: usize) -> [Complex64; 4] {
    let zero = RE(0.0);
    match (a, b) {
        (0, 0) => [RE(1.0), zero, zero, zero],
        (1, 1) => [zero, RE(1.0), zero, zero],
        (0, 1) => [
            Complex64::new(-0.5, -0.5),
            Complex64::new(-0.5, -0.5),
            RE(1.0),
            Complex64::new(0.0, 1.0),
        ],
        (1, 0) => [
            Complex64::new(-0.5, 0.5),
            Complex64::new(-0.5, 0.5),
            RE(1.0),
            Complex64::new(0.0, -1.0),
        ],
        _ => unreachable!(),
    }
}

/// All product input labels for n logical qubits, in grid order.
pub fn input_labels(n_logical: usize) -> Vec<Vec<LogicalLabel>> {
    let mut out = Vec::with_capacity(4usize.pow(n_logical as u32));
    for combo in 0..4usize.pow(n_logical as u32) {
        let mut c = combo;
        let mut labels = Vec::with_capacity(n_logical);
        for _ in 0..n_logical {
            labels.push(LogicalLabel::ALL[c % 4]);
            c /= 4;
        }
        labels.reverse();
        out.push(labels);
    }
    out
}

/// Reconstruct the Choi matrix of a channel by linear inversion from its
/// action on the canonical input set (4 states per logical qubit).
///
/// `channel` maps each input label tuple to the tomographed output density
/// matrix. The inversion is exact for exact inputs; the fixed input set is
/// informationally complete, so the linear system is never singular.
pub fn choi_from_inputs(
    channel: impl Fn(&[LogicalLabel]) -> Result<CMatrix>,
    n_logical: usize,
) -> Result<ChoiMatrix> {
    let d = 1usize << n_logical;
    let labels = input_labels(n_logical);
    let mut outputs: Vec<CMatrix> = Vec::with_capacity(labels.len());
    for label in &labels {
        let rho = channel(label)?;
        if rho.nrows() != d {
            return Err(Error::DimensionMismatch(rho.nrows(), d));
        }
        outputs.push(rho);
    }

    let label_index = |l: LogicalLabel| LogicalLabel::ALL.iter().position(|x| *x == l).unwrap();
    let mut choi = CMatrix::zeros(d * d, d * d);
    for i in 0..d {
        for j in 0..d {
            // Lambda(|i><j|) as a weighted sum of measured outputs.
            let mut block = CMatrix::zeros(d, d);
            for (out_idx, label) in labels.iter().enumerate() {
                let mut weight = RE(1.0);
                for (q, l) in label.iter().enumerate() {
                    let aq = (i >> (n_logical - 1 - q)) & 1;
                    let bq = (j >> (n_logical - 1 - q)) & 1;
                    weight *= input_weights(aq, bq)[label_index(*l)];
                }
                if weight != RE(0.0) {
                    block += outputs[out_idx].map(|x| x * weight);
                }
            }
            for r in 0..d {
                for c in 0..d {
                    choi[(i * d + r, j * d + c)] = block[(r, c)];
                }
            }
        }
    }
    Ok(ChoiMatrix { d, matrix: choi })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::pauli_apply_vec;
    use crate::linalg::{max_abs, polar_unitary};
    use crate::model::{logical_operators, ClockArm, SystemSpec};
    use crate::protocol::{prepare_logical, PrepMethod};
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn four_qubit() -> SystemSpec {
        SystemSpec::four_qubit(ClockArm::idle(1.0))
    }

    fn ten_qubit() -> SystemSpec {
        SystemSpec::ten_qubit(
            ClockArm::idle(1.0),
            ClockArm::idle(1.0),
            ClockArm::idle(1.0),
        )
    }

    fn random_unitary(d: usize, rng: &mut ChaCha8Rng) -> CMatrix {
        let m = CMatrix::from_fn(d, d, |_, _| {
            Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
        });
        polar_unitary(&m)
    }

    /// The ideal channel of a logical unitary, as label -> exact output.
    fn unitary_channel(u: CMatrix) -> impl Fn(&[LogicalLabel]) -> Result<CMatrix> {
        move |labels| {
            let d = u.nrows();
            let n = labels.len();
            assert_eq!(1 << n, d);
            // Build the logical input state abstractly.
            let mut v = CVector::from_vec(vec![RE(1.0)]);
            for l in labels {
                let ql: CVector = match l {
                    LogicalLabel::Zero => CVector::from_vec(vec![RE(1.0), RE(0.0)]),
                    LogicalLabel::One => CVector::from_vec(vec![RE(0.0), RE(1.0)]),
                    LogicalLabel::Plus => {
                        CVector::from_vec(vec![RE(1.0), RE(1.0)]).scale(0.5f64.sqrt())
                    }
                    LogicalLabel::IPlus => {
                        CVector::from_vec(vec![RE(1.0), Complex64::new(0.0, 1.0)])
                            .scale(0.5f64.sqrt())
                    }
                };
                let mut next = CVector::zeros(v.len() * 2);
                for i in 0..v.len() {
                    for j in 0..2 {
                        next[i * 2 + j] = v[i] * ql[j];
                    }
                }
                v = next;
            }
            let out = &u * v;
            Ok(&out * out.adjoint())
        }
    }

    #[test]
    fn tomography_of_basis_states() {
        let spec = four_qubit();
        let frames = logical_operators(&spec).unwrap();
        let st =
            prepare_logical(&[LogicalLabel::Zero], &spec, PrepMethod::ExplicitAmplitudes).unwrap();
        let rho = state_tomography(&st, &frames, None).unwrap();
        let expect = CMatrix::from_row_slice(2, 2, &[RE(1.0), RE(0.0), RE(0.0), RE(0.0)]);
        assert!(max_abs(&(rho - expect)) < 1e-12);

        let st =
            prepare_logical(&[LogicalLabel::Plus], &spec, PrepMethod::ExplicitAmplitudes).unwrap();
        let rho = state_tomography(&st, &frames, None).unwrap();
        let expect = CMatrix::from_row_slice(2, 2, &[RE(0.5), RE(0.5), RE(0.5), RE(0.5)]);
        assert!(max_abs(&(rho - expect)) < 1e-12);
    }

    #[test]
    fn two_qubit_tomography_of_product_state() {
        let spec = ten_qubit();
        let frames = logical_operators(&spec).unwrap();
        let st = prepare_logical(
            &[LogicalLabel::Zero, LogicalLabel::IPlus],
            &spec,
            PrepMethod::ExplicitAmplitudes,
        )
        .unwrap();
        let rho = state_tomography(&st, &frames, None).unwrap();
        // |0><0| (x) [[1, -i], [i, 1]]/2
        let mut expect = CMatrix::zeros(4, 4);
        expect[(0, 0)] = RE(0.5);
        expect[(0, 1)] = Complex64::new(0.0, -0.5);
        expect[(1, 0)] = Complex64::new(0.0, 0.5);
        expect[(1, 1)] = RE(0.5);
        assert!(max_abs(&(rho.clone() - expect)) < 1e-12, "rho = {rho}");
    }

    #[test]
    fn two_qubit_tomography_matches_dense_oracle() {
        // Reconstruct an entangled code state and compare against the direct
        // projection of the physical state onto the code basis.
        let spec = ten_qubit();
        let frames = logical_operators(&spec).unwrap();
        // Entangle by superposing code basis states directly.
        let basis = crate::protocol::code_basis(&spec);
        let mut v = &basis[0] + &basis[3].map(|x| x * Complex64::new(0.0, 1.0));
        v.scale_mut(1.0 / v.norm());
        let st = QuantumState::from_amplitudes(10, v.clone()).unwrap();
        let rho = state_tomography(&st, &frames, None).unwrap();

        let mut logical = CVector::zeros(4);
        for (k, b) in basis.iter().enumerate() {
            logical[k] = b.dotc(&v);
        }
        let expect = &logical * logical.adjoint();
        assert!(max_abs(&(rho - expect)) < 1e-12);
    }

    #[test]
    fn fidelity_identities() {
        let i2 = ChoiMatrix::identity(2);
        assert!((process_fidelity(&i2, &i2).unwrap() - 1.0).abs() < 1e-12);

        let x = ChoiMatrix::from_unitary(&crate::linalg::pauli2('X'));
        assert!(process_fidelity(&i2, &x).unwrap().abs() < 1e-12);

        let s = ChoiMatrix::from_unitary(&CMatrix::from_row_slice(
            2,
            2,
            &[RE(1.0), RE(0.0), RE(0.0), Complex64::new(0.0, 1.0)],
        ));
        assert!((process_fidelity(&i2, &s).unwrap() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn choi_trace_is_dimension_and_identity_channel_is_rank_one() {
        let choi = choi_from_inputs(unitary_channel(CMatrix::identity(2, 2)), 1).unwrap();
        assert!((choi.trace() - 2.0).abs() < 1e-12);
        let vals = choi.eigenvalues();
        assert!(vals[..3].iter().all(|v| v.abs() < 1e-12));
        assert!((vals[3] - 2.0).abs() < 1e-12);
        // Orthogonal to the Choi of X.
        let x = ChoiMatrix::from_unitary(&crate::linalg::pauli2('X'));
        assert!(process_fidelity(&x, &choi).unwrap().abs() < 1e-12);
    }

    #[test]
    fn linear_inversion_reproduces_unitary_overlap_formula() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for n_logical in [1usize, 2] {
            let d = 1 << n_logical;
            for _ in 0..10 {
                let u = random_unitary(d, &mut rng);
                let v = random_unitary(d, &mut rng);
                let chi_u = ChoiMatrix::from_unitary(&u);
                let chi_v = choi_from_inputs(unitary_channel(v.clone()), n_logical).unwrap();
                let f = process_fidelity(&chi_u, &chi_v).unwrap();
                let tr = (u.adjoint() * &v).trace();
                let expect = tr.norm_sqr() / ((d * d) as f64);
                assert!((f - expect).abs() < 1e-8, "{f} vs {expect}");
            }
        }
    }

    #[test]
    fn fidelity_is_linear_and_conjugation_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        let u = random_unitary(2, &mut rng);
        let v = random_unitary(2, &mut rng);
        let w = random_unitary(2, &mut rng);
        let chi_u = ChoiMatrix::from_unitary(&u);
        let chi_v = ChoiMatrix::from_unitary(&v);
        let chi_w = ChoiMatrix::from_unitary(&w);

        // Linearity in the second argument.
        let mixed = ChoiMatrix {
            d: 2,
            matrix: chi_v.matrix.scale(0.3) + chi_w.matrix.scale(0.7),
        };
        let f_mixed = process_fidelity(&chi_u, &mixed).unwrap();
        let f_parts = 0.3 * process_fidelity(&chi_u, &chi_v).unwrap()
            + 0.7 * process_fidelity(&chi_u, &chi_w).unwrap();
        assert!((f_mixed - f_parts).abs() < 1e-10);

        // Invariance under joint unitary conjugation.
        let gu = ChoiMatrix::from_unitary(&(&w * &u * w.adjoint()));
        let gv = ChoiMatrix::from_unitary(&(&w * &v * w.adjoint()));
        let a = process_fidelity(&chi_u, &chi_v).unwrap();
        let b = process_fidelity(&gu, &gv).unwrap();
        assert!((a - b).abs() < 1e-10);
    }

    #[test]
    fn sampled_tomography_stays_within_five_sigma() {
        let spec = four_qubit();
        let frames = logical_operators(&spec).unwrap();
        let st = prepare_logical(
            &[LogicalLabel::IPlus],
            &spec,
            PrepMethod::ExplicitAmplitudes,
        )
        .unwrap();
        let shots = 1 << 13;
        let exact = state_tomography(&st, &frames, None).unwrap();
        let sampled = state_tomography(&st, &frames, Some(ShotPlan { shots, seed: 99 })).unwrap();
        // Each Pauli expectation has standard error <= 1/sqrt(shots).
        let sigma = 1.0 / (shots as f64).sqrt();
        // rho entries combine 4 Pauli terms with weight 1/2 each.
        assert!(max_abs(&(sampled.clone() - exact)) < 5.0 * sigma * 2.0);
        // Determinism.
        let again = state_tomography(&st, &frames, Some(ShotPlan { shots, seed: 99 })).unwrap();
        assert!(max_abs(&(sampled - again)) < 1e-15);
    }

    #[test]
    fn positivity_projection_restores_physicality() {
        // Start from a slightly negative reconstruction.
        let mut chi = ChoiMatrix::identity(2);
        chi.matrix[(0, 0)] -= RE(0.1);
        chi.matrix[(1, 1)] -= RE(0.05);
        let fixed = chi.positivity_projected();
        assert!((fixed.trace() - 2.0).abs() < 1e-10);
        assert!(fixed.min_eigenvalue() > -1e-12);
    }

    #[test]
    fn logical_frame_expectations_use_phase_correctly() {
        // Products of logical operators can carry a -1 phase; expectation
        // bookkeeping must fold it back in.
        let spec = four_qubit();
        let frames = logical_operators(&spec).unwrap();
        let st = prepare_logical(
            &[LogicalLabel::IPlus],
            &spec,
            PrepMethod::ExplicitAmplitudes,
        )
        .unwrap();
        // <Y_L> on |i+> is +1 by construction.
        let y = frames[0].y;
        let applied = pauli_apply_vec(&y, st.amplitudes().unwrap());
        let val = st.amplitudes().unwrap().dotc(&applied).re;
        assert!((val - 1.0).abs() < 1e-12);
    }
}
