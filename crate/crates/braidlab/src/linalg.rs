//! Small dense complex linear-algebra helpers shared across the crate.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

pub const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };
pub const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
pub const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Kronecker product with the first factor as the most significant block.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    let (ar, ac) = a.shape();
    let (br, bc) = b.shape();
    let mut out = CMatrix::zeros(ar * br, ac * bc);
    for i in 0..ar {
        for j in 0..ac {
            let aij = a[(i, j)];
            if aij == ZERO {
                continue;
            }
            for k in 0..br {
                for l in 0..bc {
                    out[(i * br + k, j * bc + l)] = aij * b[(k, l)];
                }
            }
        }
    }
    out
}

pub fn kron3(a: &CMatrix, b: &CMatrix, c: &CMatrix) -> CMatrix {
    kron(&kron(a, b), c)
}

/// 2x2 Pauli matrices indexed by letter.
pub fn pauli2(letter: char) -> CMatrix {
    match letter {
        'I' => CMatrix::from_row_slice(2, 2, &[ONE, ZERO, ZERO, ONE]),
        'X' => CMatrix::from_row_slice(2, 2, &[ZERO, ONE, ONE, ZERO]),
        'Y' => CMatrix::from_row_slice(2, 2, &[ZERO, -I, I, ZERO]),
        'Z' => CMatrix::from_row_slice(2, 2, &[ONE, ZERO, ZERO, -ONE]),
        _ => panic!("unknown Pauli letter {letter}"),
    }
}

pub fn frobenius_norm(m: &CMatrix) -> f64 {
    m.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
}

pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|c| c.norm()).fold(0.0, f64::max)
}

pub fn hermiticity_residual(m: &CMatrix) -> f64 {
    max_abs(&(m - m.adjoint()))
}

pub fn anti_hermiticity_residual(m: &CMatrix) -> f64 {
    max_abs(&(m + m.adjoint()))
}

/// Hermitian eigendecomposition, eigenvalues ascending.
pub fn eigh(m: &CMatrix) -> (Vec<f64>, CMatrix) {
    let se = m.clone().symmetric_eigen();
    let n = m.nrows();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| se.eigenvalues[a].total_cmp(&se.eigenvalues[b]));
    let vals: Vec<f64> = order.iter().map(|&k| se.eigenvalues[k]).collect();
    let mut vecs = CMatrix::zeros(n, n);
    for (col, &k) in order.iter().enumerate() {
        vecs.set_column(col, &se.eigenvectors.column(k));
    }
    (vals, vecs)
}

/// exp(-i H t) for Hermitian H, via eigendecomposition.
pub fn expm_neg_i_hermitian(h: &CMatrix, t: f64) -> CMatrix {
    let (vals, vecs) = eigh(h);
    let phases = CVector::from_iterator(vals.len(), vals.iter().map(|&l| (-I * l * t).exp()));
    &vecs * CMatrix::from_diagonal(&phases) * vecs.adjoint()
}

/// exp(A) for anti-Hermitian A (A = iH with H Hermitian).
pub fn expm_anti_hermitian(a: &CMatrix) -> CMatrix {
    // A = i H with H = -i A Hermitian; exp(A) = exp(i H) = exp(-i H (-1)).
    let h = a.map(|c| c * (-I));
    expm_neg_i_hermitian(&h, -1.0)
}

/// Unitary polar factor of `m` via SVD: m = U P with U unitary.
pub fn polar_unitary(m: &CMatrix) -> CMatrix {
    let svd = m.clone().svd(true, true);
    let u = svd.u.expect("svd requested u");
    let v_t = svd.v_t.expect("svd requested v_t");
    u * v_t
}

/// Phases of the eigenvalues of a unitary matrix, sorted ascending.
///
/// A unitary is normal, so its Hermitian part C = (U + U^dag)/2 and
/// anti-Hermitian part S = (U - U^dag)/(2i) commute and share eigenvectors
/// with eigenvalue pairs (cos p, sin p). C alone cannot distinguish p from
/// -p (the usual conjugate pairs of a rotation), so S is diagonalized inside
/// each degenerate cluster of C before reading the angles off atan2.
pub fn unitary_eigenphases(u: &CMatrix) -> Vec<f64> {
    let n = u.nrows();
    let cos_part = (u + u.adjoint()).scale(0.5);
    let sin_part = (u - u.adjoint()).map(|x| x * Complex64::new(0.0, -0.5));
    let (cvals, cvecs) = eigh(&cos_part);

    let mut phases = Vec::with_capacity(n);
    let mut start = 0usize;
    while start < n {
        let mut end = start + 1;
        while end < n && (cvals[end] - cvals[start]).abs() < 1e-8 {
            end += 1;
        }
        let cluster = cvecs.columns(start, end - start).into_owned();
        let restricted = cluster.adjoint() * &sin_part * &cluster;
        let (svals, _) = eigh(&restricted);
        for s in svals {
            phases.push(s.atan2(cvals[start]));
        }
        start = end;
    }
    phases.sort_by(f64::total_cmp);
    phases
}

/// Gram-Schmidt orthonormalization of the columns of `m` (full column rank).
pub fn orthonormalize_columns(m: &CMatrix) -> CMatrix {
    let mut out = m.clone();
    let cols = m.ncols();
    for j in 0..cols {
        for k in 0..j {
            let proj: Complex64 = out.column(k).dotc(&out.column(j));
            let col_k = out.column(k).into_owned();
            let mut col_j = out.column_mut(j);
            col_j.axpy(-proj, &col_k, ONE);
        }
        let norm = out.column(j).norm();
        assert!(norm > 1e-12, "rank-deficient column set");
        let mut col_j = out.column_mut(j);
        col_j.scale_mut(1.0 / norm);
    }
    out
}
