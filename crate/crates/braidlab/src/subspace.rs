//! Simultaneous eigenbases of commuting Pauli sets, sector projection of
//! Hamiltonians, and diagonal-gauge alignment against analytic forms.
//!
//! Sectors are resolved operator by operator: diagonal (Z-type) labels first
//! by partitioning computational indices, then each remaining label splits
//! every sector through the eigendecomposition of its restriction, which is a
//! Hermitian involution. The per-state gauge is fixed by making the
//! largest-magnitude computational amplitude real and positive (ties broken
//! by lowest basis index), so the output is deterministic.

use crate::engine::pauli_apply_vec;
use crate::linalg::{eigh, frobenius_norm, kron3, pauli2, CMatrix, CVector};
use crate::model::Arm;
use crate::pauli::{OperatorSum, PauliString};
use crate::{Error, Result};
use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const EIGEN_TOL: f64 = 1e-10;

/// Orthonormal basis labeled by eigenvalues of a commuting operator set.
#[derive(Debug, Clone)]
pub struct LabeledBasis {
    operators: Vec<PauliString>,
    /// One column per state, sorted by reversed label tuple (-1 before +1).
    states: CMatrix,
    /// Label tuple of each state, aligned with `operators`.
    labels: Vec<Vec<i8>>,
}

impl LabeledBasis {
    pub fn operators(&self) -> &[PauliString] {
        &self.operators
    }

    pub fn n_states(&self) -> usize {
        self.states.ncols()
    }

    pub fn state(&self, k: usize) -> CVector {
        self.states.column(k).into_owned()
    }

    pub fn labels(&self, k: usize) -> &[i8] {
        &self.labels[k]
    }

    /// Indices of states whose labels satisfy the predicate, in basis order.
    pub fn select(&self, predicate: impl Fn(&[i8]) -> bool) -> Vec<usize> {
        (0..self.n_states())
            .filter(|&k| predicate(&self.labels[k]))
            .collect()
    }

    /// Basis matrix of the selected states (columns in basis order).
    pub fn sector_basis(&self, indices: &[usize]) -> CMatrix {
        let mut m = CMatrix::zeros(self.states.nrows(), indices.len());
        for (col, &k) in indices.iter().enumerate() {
            m.set_column(col, &self.states.column(k));
        }
        m
    }
}

/// Build the simultaneous eigenbasis of a set of commuting Pauli strings.
pub fn simultaneous_eigenbasis(operators: &[PauliString], n_qubits: usize) -> Result<LabeledBasis> {
    for op in operators {
        if op.n_qubits() != n_qubits {
            return Err(Error::DimensionMismatch(op.n_qubits(), n_qubits));
        }
        if !op.phase().is_real() {
            return Err(Error::NotHermitian(1.0));
        }
    }
    for i in 0..operators.len() {
        for j in (i + 1)..operators.len() {
            if !operators[i].commutes_with(&operators[j])? {
                return Err(Error::NonCommuting(i, j));
            }
        }
    }

    let dim = 1usize << n_qubits;
    // Internal refinement order: diagonal labels first. Diagonal strings are
    // resolved by partitioning computational indices (no linear algebra);
    // only the remaining operators need per-sector eigendecompositions.
    let mut order: Vec<usize> = (0..operators.len()).collect();
    order.sort_by_key(|&k| !operators[k].is_diagonal());
    let n_diagonal = order
        .iter()
        .take_while(|&&k| operators[k].is_diagonal())
        .count();

    let mut index_sectors: std::collections::BTreeMap<Vec<i8>, Vec<usize>> =
        std::collections::BTreeMap::new();
    for b in 0..dim {
        let mut labs = Vec::with_capacity(n_diagonal);
        for &op_idx in order.iter().take(n_diagonal) {
            let f = operators[op_idx].basis_factor(b).re;
            labs.push(if f > 0.0 { 1i8 } else { -1i8 });
        }
        index_sectors.entry(labs).or_default().push(b);
    }

    // Sector = (labels in internal order, basis columns).
    let mut sectors: Vec<(Vec<i8>, CMatrix)> = index_sectors
        .into_iter()
        .map(|(labs, indices)| {
            let mut basis = CMatrix::zeros(dim, indices.len());
            for (c, &b) in indices.iter().enumerate() {
                basis[(b, c)] = Complex64::new(1.0, 0.0);
            }
            (labs, basis)
        })
        .collect();

    for &op_idx in order.iter().skip(n_diagonal) {
        let op = &operators[op_idx];
        let mut next: Vec<(Vec<i8>, CMatrix)> = Vec::with_capacity(2 * sectors.len());
        for (labels, basis) in sectors.drain(..) {
            let k = basis.ncols();
            // Restriction of the involution to this sector.
            let mut applied = CMatrix::zeros(dim, k);
            for c in 0..k {
                applied.set_column(c, &pauli_apply_vec(op, &basis.column(c).into_owned()));
            }
            let restricted = basis.adjoint() * &applied;
            let (vals, vecs) = eigh(&restricted);
            let mut plus_cols: Vec<usize> = Vec::new();
            let mut minus_cols: Vec<usize> = Vec::new();
            for (c, v) in vals.iter().enumerate() {
                if (v - 1.0).abs() < EIGEN_TOL {
                    plus_cols.push(c);
                } else if (v + 1.0).abs() < EIGEN_TOL {
                    minus_cols.push(c);
                } else {
                    return Err(Error::InvalidArgument(format!(
                        "label operator eigenvalue {v} is not +-1"
                    )));
                }
            }
            for (sign, cols) in [(-1i8, minus_cols), (1i8, plus_cols)] {
                if cols.is_empty() {
                    continue;
                }
                let mut sub = CMatrix::zeros(k, cols.len());
                for (c, &src) in cols.iter().enumerate() {
                    sub.set_column(c, &vecs.column(src));
                }
                let mut labs = labels.clone();
                labs.push(sign);
                next.push((labs, &basis * sub));
            }
        }
        sectors = next;
    }

    // Assemble states with labels mapped back to caller order.
    let mut entries: Vec<(Vec<i8>, CVector)> = Vec::with_capacity(dim);
    for (labels_internal, basis) in &sectors {
        for c in 0..basis.ncols() {
            let mut labels = vec![0i8; operators.len()];
            for (pos, &op_idx) in order.iter().enumerate() {
                labels[op_idx] = labels_internal[pos];
            }
            entries.push((labels, basis.column(c).into_owned()));
        }
    }
    // Sort by reversed tuple, -1 < +1.
    entries.sort_by(|a, b| a.0.iter().rev().cmp(b.0.iter().rev()));

    let mut states = CMatrix::zeros(dim, dim);
    let mut labels = Vec::with_capacity(dim);
    for (k, (labs, mut v)) in entries.into_iter().enumerate() {
        // Gauge: largest-magnitude amplitude real positive, ties by index.
        let mut best = 0usize;
        let mut best_mag = 0.0f64;
        for i in 0..v.len() {
            let m = v[i].norm();
            if m > best_mag + 1e-12 {
                best_mag = m;
                best = i;
            }
        }
        let phase = v[best] / Complex64::new(best_mag, 0.0);
        v.scale_mut(1.0);
        let v = v.map(|x| x * phase.conj());
        states.set_column(k, &v);
        labels.push(labs);
    }

    let basis = LabeledBasis {
        operators: operators.to_vec(),
        states,
        labels,
    };

    // Contract checks: eigen-residuals and orthonormality.
    for k in 0..basis.n_states() {
        let v = basis.state(k);
        for (oi, op) in operators.iter().enumerate() {
            let expect = basis.labels[k][oi] as f64;
            let residual = (pauli_apply_vec(op, &v) - v.map(|x| x * expect)).norm();
            if residual > EIGEN_TOL {
                return Err(Error::InvalidArgument(format!(
                    "state {k} eigen-residual {residual:.2e} for operator {oi}"
                )));
            }
        }
    }
    Ok(basis)
}

/// Orthonormal basis of the single sector where each listed operator takes
/// the given eigenvalue sign. Cheaper than a full labeled basis: diagonal
/// operators partition computational indices, the rest refine one branch.
pub fn sector_subspace(
    operators: &[PauliString],
    signs: &[i8],
    n_qubits: usize,
) -> Result<CMatrix> {
    if operators.len() != signs.len() {
        return Err(Error::InvalidArgument(
            "one sign per sector operator required".into(),
        ));
    }
    for i in 0..operators.len() {
        for j in (i + 1)..operators.len() {
            if !operators[i].commutes_with(&operators[j])? {
                return Err(Error::NonCommuting(i, j));
            }
        }
    }
    let dim = 1usize << n_qubits;

    let mut diag: Vec<(usize, i8)> = Vec::new();
    let mut general: Vec<(usize, i8)> = Vec::new();
    for (k, op) in operators.iter().enumerate() {
        if op.is_diagonal() {
            diag.push((k, signs[k]));
        } else {
            general.push((k, signs[k]));
        }
    }

    let indices: Vec<usize> = (0..dim)
        .filter(|&b| {
            diag.iter().all(|&(k, sign)| {
                let f = operators[k].basis_factor(b).re;
                (f > 0.0) == (sign > 0)
            })
        })
        .collect();
    if indices.is_empty() {
        return Err(Error::EmptySelection);
    }
    let mut basis = CMatrix::zeros(dim, indices.len());
    for (c, &b) in indices.iter().enumerate() {
        basis[(b, c)] = Complex64::new(1.0, 0.0);
    }

    for &(k, sign) in &general {
        let op = &operators[k];
        let cols = basis.ncols();
        let mut applied = CMatrix::zeros(dim, cols);
        for c in 0..cols {
            applied.set_column(c, &pauli_apply_vec(op, &basis.column(c).into_owned()));
        }
        let restricted = basis.adjoint() * &applied;
        let (vals, vecs) = eigh(&restricted);
        let keep: Vec<usize> = vals
            .iter()
            .enumerate()
            .filter(|(_, v)| (**v - sign as f64).abs() < EIGEN_TOL)
            .map(|(c, _)| c)
            .collect();
        if keep.is_empty() {
            return Err(Error::EmptySelection);
        }
        let mut sub = CMatrix::zeros(cols, keep.len());
        for (c, &src) in keep.iter().enumerate() {
            sub.set_column(c, &vecs.column(src));
        }
        basis = &basis * sub;
    }
    Ok(basis)
}

/// A Hamiltonian projected onto a labeled sector.
#[derive(Debug, Clone)]
pub struct EffectiveHamiltonian {
    pub matrix: CMatrix,
    pub basis_labels: Vec<Vec<i8>>,
}

/// Project `hamiltonian` onto the states selected from `basis`.
pub fn effective_hamiltonian(
    hamiltonian: &OperatorSum,
    basis: &LabeledBasis,
    selector: impl Fn(&[i8]) -> bool,
) -> Result<EffectiveHamiltonian> {
    if !hamiltonian.is_hermitian() {
        return Err(Error::NotHermitian(0.0));
    }
    let sel = basis.select(selector);
    if sel.is_empty() {
        return Err(Error::EmptySelection);
    }
    let cols = basis.sector_basis(&sel);
    let mut applied = CMatrix::zeros(cols.nrows(), cols.ncols());
    for c in 0..cols.ncols() {
        let v = cols.column(c).into_owned();
        let mut acc = CVector::zeros(cols.nrows());
        for (coef, s) in hamiltonian.terms() {
            acc += pauli_apply_vec(s, &v).map(|x| x * coef);
        }
        applied.set_column(c, &acc);
    }
    let matrix = cols.adjoint() * applied;
    Ok(EffectiveHamiltonian {
        matrix,
        basis_labels: sel.iter().map(|&k| basis.labels[k].to_vec()).collect(),
    })
}

/// Result of a diagonal-gauge alignment.
#[derive(Debug, Clone)]
pub struct GaugeAlignment {
    /// Diagonal unitary entries e^{i phi_j}.
    pub phases: Vec<Complex64>,
    /// Frobenius norm of D^dag M D - target at the optimum.
    pub residual: f64,
}

/// Find the diagonal unitary D minimizing ||D^dag M D - target||_F.
///
/// Phase synchronization: the objective reduces to maximizing z^dag H z over
/// unit-modulus z, solved by a spectral initialization plus fixed-point
/// iteration, with random restarts as a safety net.
pub fn gauge_align(m: &CMatrix, target: &CMatrix) -> Result<GaugeAlignment> {
    let k = m.nrows();
    if target.nrows() != k || target.ncols() != m.ncols() || m.ncols() != k {
        return Err(Error::DimensionMismatch(k, target.nrows()));
    }
    // w_jk = conj(T_jk) M_jk; maximize Re(z^dag W z) => z^dag H z, H Hermitian.
    let mut w = CMatrix::zeros(k, k);
    for j in 0..k {
        for c in 0..k {
            w[(j, c)] = target[(j, c)].conj() * m[(j, c)];
        }
    }
    let h = (&w + w.adjoint()).scale(0.5);

    // Diagonal shift keeps the coordinate ascent monotone; sequential
    // (Gauss-Seidel) updates avoid the two-cycle oscillation that plain
    // simultaneous updates exhibit on bipartite sparsity patterns.
    let shift = frobenius_norm(&h) + 1.0;
    let refine = |z0: CVector| -> CVector {
        let mut z = z0;
        for _ in 0..500 {
            let mut moved = 0.0f64;
            for j in 0..k {
                let mut val = z[j] * Complex64::new(shift, 0.0);
                for c in 0..k {
                    val += h[(j, c)] * z[c];
                }
                if val.norm() > 1e-14 {
                    let nj = val / Complex64::new(val.norm(), 0.0);
                    moved = moved.max((nj - z[j]).norm());
                    z[j] = nj;
                }
            }
            if moved < 1e-15 {
                break;
            }
        }
        z
    };
    let score = |z: &CVector| -> f64 {
        let hz = &h * z;
        z.dotc(&hz).re
    };

    let residual_of = |z: &CVector| -> f64 {
        let mut aligned = m.clone();
        for j in 0..k {
            for c in 0..k {
                aligned[(j, c)] = z[j].conj() * m[(j, c)] * z[c];
            }
        }
        frobenius_norm(&(aligned - target))
    };
    let scale = frobenius_norm(m).max(frobenius_norm(target)).max(1e-30);

    // Spanning-tree start: when M and T really are diagonal-gauge images of
    // each other, propagating phase ratios over a spanning tree of the
    // shared sparsity graph solves the problem exactly.
    let tree_start = || -> CVector {
        let mut z = CVector::from_element(k, Complex64::new(1.0, 0.0));
        let mut assigned = vec![false; k];
        let significant = 1e-9 * scale;
        for root in 0..k {
            if assigned[root] {
                continue;
            }
            assigned[root] = true;
            let mut queue = std::collections::VecDeque::from([root]);
            while let Some(j) = queue.pop_front() {
                for c in 0..k {
                    if assigned[c]
                        || m[(j, c)].norm() < significant
                        || target[(j, c)].norm() < significant
                    {
                        continue;
                    }
                    // want conj(z_j) M_jc z_c = T_jc.
                    let ratio = target[(j, c)] / m[(j, c)];
                    z[c] = z[j] * ratio / Complex64::new(ratio.norm().max(1e-300), 0.0)
                        * Complex64::new(1.0, 0.0);
                    let nrm = z[c].norm();
                    z[c] /= Complex64::new(nrm, 0.0);
                    assigned[c] = true;
                    queue.push_back(c);
                }
            }
        }
        z
    };

    let mut best = refine(tree_start());
    let mut best_score = score(&best);
    let mut best_residual = residual_of(&best);

    if best_residual > 1e-11 * scale {
        let (_, vecs) = eigh(&h);
        let spectral = vecs.column(k - 1).map(|x| {
            if x.norm() > 1e-14 {
                x / Complex64::new(x.norm(), 0.0)
            } else {
                Complex64::new(1.0, 0.0)
            }
        });
        let z = refine(CVector::from_iterator(k, spectral.iter().copied()));
        let s = score(&z);
        if s > best_score {
            best_score = s;
            best_residual = residual_of(&z);
            best = z;
        }
    }

    if best_residual > 1e-11 * scale {
        let mut rng = ChaCha8Rng::seed_from_u64(0x9a1d);
        for _ in 0..8 {
            let z0 = CVector::from_iterator(
                k,
                (0..k).map(|_| {
                    let phi: f64 = rng.random::<f64>() * std::f64::consts::TAU;
                    Complex64::from_polar(1.0, phi)
                }),
            );
            let z = refine(z0);
            let s = score(&z);
            if s > best_score {
                best_score = s;
                best_residual = residual_of(&z);
                best = z;
                if best_residual <= 1e-11 * scale {
                    break;
                }
            }
        }
    }

    Ok(GaugeAlignment {
        phases: best.iter().copied().collect(),
        residual: best_residual,
    })
}

/// The traceless part of a square matrix.
///
/// The closed-form effective Hamiltonians are traceless; idle arms of the
/// larger system add a constant energy to the projected block, which carries
/// no dynamical or geometric content. Comparisons therefore align traceless
/// parts.
pub fn traceless(m: &CMatrix) -> CMatrix {
    let k = m.nrows();
    let shift = m.trace() / Complex64::new(k as f64, 0.0);
    m - CMatrix::identity(k, k).map(|x| x * shift)
}

/// Analytic effective Hamiltonian of one active clock arm, in the basis
/// ordering produced by [`simultaneous_eigenbasis`] restricted to the code
/// sector (labels sorted reversed-tuple, -1 first).
///
/// Left/right arm (4x4, energy factor outer, parity factor inner):
///   -cos(theta) Z(x)I - sin(theta)cos(phi) X(x)X + sin(theta)sin(phi) X(x)Y.
/// Middle arm (8x8, factors ordered interface-energy, primed parity, parity):
///   -cos(a) Z(x)I(x)I + sin(a)cos(b) X(x)I(x)Y + sin(a)sin(b) Y(x)X(x)I.
pub fn ideal_effective_hamiltonian(arm: Arm, polar: f64, azimuth: f64) -> CMatrix {
    let (st, ct) = polar.sin_cos();
    let (sp, cp) = azimuth.sin_cos();
    match arm {
        Arm::Left | Arm::Right => {
            let zi = crate::linalg::kron(&pauli2('Z'), &pauli2('I'));
            let xx = crate::linalg::kron(&pauli2('X'), &pauli2('X'));
            let xy = crate::linalg::kron(&pauli2('X'), &pauli2('Y'));
            zi.scale(-ct) + xx.scale(-st * cp) + xy.scale(st * sp)
        }
        Arm::Middle => {
            let zii = kron3(&pauli2('Z'), &pauli2('I'), &pauli2('I'));
            // chi^x eta^y: X on the interface-energy factor, Y on the
            // unprimed parity factor (innermost).
            let xiy = kron3(&pauli2('X'), &pauli2('I'), &pauli2('Y'));
            // chi^y eta^x': Y on the interface factor, X on the primed parity.
            let yxi = kron3(&pauli2('Y'), &pauli2('X'), &pauli2('I'));
            zii.scale(-ct) + xiy.scale(st * cp) + yxi.scale(st * sp)
        }
    }
}
