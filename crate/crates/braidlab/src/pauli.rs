//! Exact algebra of phased Pauli strings and weighted sums of them.
//!
//! A [`PauliString`] is a tensor product of single-qubit Paulis {I, X, Y, Z}
//! carrying a global phase from {+1, -1, +i, -i}. Letters are encoded as two
//! bitmasks (X-part and Z-part) so products and commutation checks cost a few
//! popcounts. Phase arithmetic is exact; no floating point is involved until
//! an operator is realized as a dense matrix.
//!
//! [`OperatorSum`] is a complex-weighted sum of strings with the phases folded
//! into the coefficients; it represents Hamiltonians and observables.
//!
//! Text form: `"+i XIZY"` (phase token, then one letter per qubit, qubit 0
//! leftmost). Qubit 0 is the most significant bit of a basis index, so the
//! dense realization is `kron(letter_0, ..., letter_{n-1})`.

use crate::linalg::CMatrix;
use crate::{Error, Result};
use num_complex::Complex64;
use std::fmt;
use std::str::FromStr;

/// One of the four quarter-turn phases i^k.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Phase(u8);

impl Phase {
    pub const PLUS_ONE: Phase = Phase(0);
    pub const PLUS_I: Phase = Phase(1);
    pub const MINUS_ONE: Phase = Phase(2);
    pub const MINUS_I: Phase = Phase(3);

    pub fn from_exponent(k: u8) -> Phase {
        Phase(k % 4)
    }

    pub fn exponent(self) -> u8 {
        self.0
    }

    pub fn times(self, other: Phase) -> Phase {
        Phase((self.0 + other.0) % 4)
    }

    pub fn complex(self) -> Complex64 {
        match self.0 {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        }
    }

    /// Phase is real (+1 or -1); a bare string with real phase is Hermitian.
    pub fn is_real(self) -> bool {
        self.0 % 2 == 0
    }

    fn token(self) -> &'static str {
        match self.0 {
            0 => "+",
            1 => "+i",
            2 => "-",
            _ => "-i",
        }
    }
}

/// Single-qubit Pauli letter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum Letter {
    I,
    X,
    Y,
    Z,
}

impl Letter {
    fn bits(self) -> (u32, u32) {
        match self {
            Letter::I => (0, 0),
            Letter::X => (1, 0),
            Letter::Y => (1, 1),
            Letter::Z => (0, 1),
        }
    }

    fn from_bits(x: u32, z: u32) -> Letter {
        match (x, z) {
            (0, 0) => Letter::I,
            (1, 0) => Letter::X,
            (1, 1) => Letter::Y,
            _ => Letter::Z,
        }
    }

    pub fn ch(self) -> char {
        match self {
            Letter::I => 'I',
            Letter::X => 'X',
            Letter::Y => 'Y',
            Letter::Z => 'Z',
        }
    }
}

/// An n-qubit Pauli operator with a tracked global phase.
///
/// Internal convention: the string equals
/// `phase * i^(popcount(x & z)) * X^x Z^z` acting qubit-wise, which makes the
/// (1,1) letter exactly Y. Values are immutable once built.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PauliString {
    n_qubits: usize,
    x: u32,
    z: u32,
    phase: Phase,
}

impl PauliString {
    pub const MAX_QUBITS: usize = 16;

    pub fn identity(n_qubits: usize) -> PauliString {
        assert!(n_qubits <= Self::MAX_QUBITS);
        PauliString {
            n_qubits,
            x: 0,
            z: 0,
            phase: Phase::PLUS_ONE,
        }
    }

    /// Single-letter string, identity elsewhere.
    pub fn single(n_qubits: usize, qubit: usize, letter: Letter) -> PauliString {
        Self::from_letters(&{
            let mut ls = vec![Letter::I; n_qubits];
            ls[qubit] = letter;
            ls
        })
    }

    pub fn from_letters(letters: &[Letter]) -> PauliString {
        assert!(letters.len() <= Self::MAX_QUBITS);
        let mut x = 0u32;
        let mut z = 0u32;
        for (q, l) in letters.iter().enumerate() {
            let (xb, zb) = l.bits();
            x |= xb << q;
            z |= zb << q;
        }
        PauliString {
            n_qubits: letters.len(),
            x,
            z,
            phase: Phase::PLUS_ONE,
        }
    }

    /// Product of single-qubit letters at the given qubits, e.g.
    /// `product_at(4, &[(0, Z), (2, X), (3, Y)])`.
    pub fn product_at(n_qubits: usize, letters: &[(usize, Letter)]) -> PauliString {
        let mut ls = vec![Letter::I; n_qubits];
        for &(q, l) in letters {
            assert!(ls[q] == Letter::I, "duplicate qubit {q}");
            ls[q] = l;
        }
        Self::from_letters(&ls)
    }

    pub fn with_phase(mut self, phase: Phase) -> PauliString {
        self.phase = phase;
        self
    }

    /// Same string with phase reset to +1.
    pub fn bare(mut self) -> PauliString {
        self.phase = Phase::PLUS_ONE;
        self
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn phase(&self) -> Phase {
        self.phase
    }

    pub fn letter(&self, qubit: usize) -> Letter {
        Letter::from_bits((self.x >> qubit) & 1, (self.z >> qubit) & 1)
    }

    pub fn letters(&self) -> Vec<Letter> {
        (0..self.n_qubits).map(|q| self.letter(q)).collect()
    }

    /// Number of non-identity letters.
    pub fn weight(&self) -> usize {
        (self.x | self.z).count_ones() as usize
    }

    pub fn is_identity(&self) -> bool {
        self.x == 0 && self.z == 0
    }

    /// Hermitian iff the global phase is real.
    pub fn is_hermitian(&self) -> bool {
        self.phase.is_real()
    }

    /// Symplectic key ignoring phase; used for canonical ordering.
    pub fn key(&self) -> (u32, u32) {
        (self.z, self.x)
    }

    /// Phased product `self * other`.
    pub fn multiply(&self, other: &PauliString) -> Result<PauliString> {
        if self.n_qubits != other.n_qubits {
            return Err(Error::DimensionMismatch(self.n_qubits, other.n_qubits));
        }
        let xc = self.x ^ other.x;
        let zc = self.z ^ other.z;
        // i-exponent bookkeeping for (i^ya X^xa Z^za)(i^yb X^xb Z^zb):
        // Z^za X^xb reorders with (-1)^(za.xb); the Y-normalization factors
        // i^ya i^yb i^(-yc) complete the phase.
        let ya = (self.x & self.z).count_ones();
        let yb = (other.x & other.z).count_ones();
        let yc = (xc & zc).count_ones();
        let swaps = (self.z & other.x).count_ones();
        let exponent = (self.phase.exponent() as u32
            + other.phase.exponent() as u32
            + ya
            + yb
            + 2 * swaps
            + 4 * yc // keep the subtraction non-negative
            - yc)
            % 4;
        Ok(PauliString {
            n_qubits: self.n_qubits,
            x: xc,
            z: zc,
            phase: Phase::from_exponent(exponent as u8),
        })
    }

    /// True iff the two strings commute (phases are irrelevant).
    pub fn commutes_with(&self, other: &PauliString) -> Result<bool> {
        if self.n_qubits != other.n_qubits {
            return Err(Error::DimensionMismatch(self.n_qubits, other.n_qubits));
        }
        let anti = (self.x & other.z).count_ones() + (self.z & other.x).count_ones();
        Ok(anti % 2 == 0)
    }

    /// Diagonal in the computational basis (no X component).
    pub fn is_diagonal(&self) -> bool {
        self.x == 0
    }

    /// Basis-index flip mask: `P|b> = basis_factor(b) |b ^ flip_mask()>`.
    pub fn flip_mask(&self) -> usize {
        // Qubit q occupies bit (n-1-q) of a basis index.
        let mut mask = 0usize;
        for q in 0..self.n_qubits {
            if (self.x >> q) & 1 == 1 {
                mask |= 1 << (self.n_qubits - 1 - q);
            }
        }
        mask
    }

    /// The amplitude factor f(b) in `P|b> = f(b) |b ^ flip_mask()>`.
    pub fn basis_factor(&self, b: usize) -> Complex64 {
        let mut zmask = 0usize;
        for q in 0..self.n_qubits {
            if (self.z >> q) & 1 == 1 {
                zmask |= 1 << (self.n_qubits - 1 - q);
            }
        }
        let sign = if (b & zmask).count_ones() % 2 == 0 {
            1.0
        } else {
            -1.0
        };
        let y_phase = Phase::from_exponent(((self.x & self.z).count_ones() % 4) as u8);
        self.phase.times(y_phase).complex() * sign
    }

    /// Dense 2^n x 2^n realization.
    pub fn to_dense(&self) -> Result<CMatrix> {
        self.to_dense_with_cap(10)
    }

    pub fn to_dense_with_cap(&self, cap: usize) -> Result<CMatrix> {
        if self.n_qubits > cap {
            return Err(Error::SizeCapExceeded {
                n: self.n_qubits,
                cap,
            });
        }
        let dim = 1usize << self.n_qubits;
        let mut m = CMatrix::zeros(dim, dim);
        let flip = self.flip_mask();
        for b in 0..dim {
            m[(b ^ flip, b)] = self.basis_factor(b);
        }
        Ok(m)
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ", self.phase.token())?;
        for q in 0..self.n_qubits {
            write!(f, "{}", self.letter(q).ch())?;
        }
        Ok(())
    }
}

impl FromStr for PauliString {
    type Err = Error;

    fn from_str(s: &str) -> Result<PauliString> {
        let s = s.trim();
        let (token, rest) = match s.split_once(' ') {
            Some((t, r)) => (t, r.trim()),
            None => ("+", s),
        };
        let phase = match token {
            "+" | "+1" => Phase::PLUS_ONE,
            "-" | "-1" => Phase::MINUS_ONE,
            "+i" | "i" => Phase::PLUS_I,
            "-i" => Phase::MINUS_I,
            _ => return Err(Error::Parse(format!("bad phase token {token:?}"))),
        };
        let mut letters = Vec::new();
        for c in rest.chars() {
            letters.push(match c {
                'I' => Letter::I,
                'X' => Letter::X,
                'Y' => Letter::Y,
                'Z' => Letter::Z,
                _ => return Err(Error::Parse(format!("bad Pauli letter {c:?}"))),
            });
        }
        if letters.is_empty() || letters.len() > PauliString::MAX_QUBITS {
            return Err(Error::Parse(format!("bad string length {}", letters.len())));
        }
        Ok(PauliString::from_letters(&letters).with_phase(phase))
    }
}

/// Complex-weighted sum of Pauli strings.
///
/// Terms are canonicalized on construction: string phases are folded into
/// coefficients, duplicate strings merged, exact-zero coefficients dropped,
/// and terms sorted by symplectic key. Hermitian iff every coefficient is
/// real (within [`HERMITIAN_TOL`]).
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorSum {
    n_qubits: usize,
    terms: Vec<(Complex64, PauliString)>,
}

pub const HERMITIAN_TOL: f64 = 1e-12;

impl OperatorSum {
    pub fn zero(n_qubits: usize) -> OperatorSum {
        OperatorSum {
            n_qubits,
            terms: Vec::new(),
        }
    }

    pub fn from_terms(
        n_qubits: usize,
        terms: Vec<(Complex64, PauliString)>,
    ) -> Result<OperatorSum> {
        let mut op = OperatorSum::zero(n_qubits);
        for (c, s) in terms {
            op.add_term(c, &s)?;
        }
        Ok(op)
    }

    pub fn add_term(&mut self, coefficient: Complex64, string: &PauliString) -> Result<()> {
        if string.n_qubits() != self.n_qubits {
            return Err(Error::DimensionMismatch(self.n_qubits, string.n_qubits()));
        }
        let folded = coefficient * string.phase().complex();
        let bare = string.bare();
        match self
            .terms
            .binary_search_by_key(&bare.key(), |(_, s)| s.key())
        {
            Ok(idx) => {
                self.terms[idx].0 += folded;
                if self.terms[idx].0 == Complex64::new(0.0, 0.0) {
                    self.terms.remove(idx);
                }
            }
            Err(idx) => {
                if folded != Complex64::new(0.0, 0.0) {
                    self.terms.insert(idx, (folded, bare));
                }
            }
        }
        Ok(())
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn terms(&self) -> &[(Complex64, PauliString)] {
        &self.terms
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn scale(&self, factor: Complex64) -> OperatorSum {
        OperatorSum {
            n_qubits: self.n_qubits,
            terms: self
                .terms
                .iter()
                .filter(|(c, _)| *c * factor != Complex64::new(0.0, 0.0))
                .map(|(c, s)| (*c * factor, *s))
                .collect(),
        }
    }

    pub fn add(&self, other: &OperatorSum) -> Result<OperatorSum> {
        if self.n_qubits != other.n_qubits {
            return Err(Error::DimensionMismatch(self.n_qubits, other.n_qubits));
        }
        let mut out = self.clone();
        for (c, s) in &other.terms {
            out.add_term(*c, s)?;
        }
        Ok(out)
    }

    /// Drop terms with |coefficient| <= tol.
    pub fn pruned(&self, tol: f64) -> OperatorSum {
        OperatorSum {
            n_qubits: self.n_qubits,
            terms: self
                .terms
                .iter()
                .filter(|(c, _)| c.norm() > tol)
                .cloned()
                .collect(),
        }
    }

    pub fn is_hermitian(&self) -> bool {
        self.terms.iter().all(|(c, _)| c.im.abs() <= HERMITIAN_TOL)
    }

    pub fn to_dense(&self) -> Result<CMatrix> {
        self.to_dense_with_cap(10)
    }

    pub fn to_dense_with_cap(&self, cap: usize) -> Result<CMatrix> {
        if self.n_qubits > cap {
            return Err(Error::SizeCapExceeded {
                n: self.n_qubits,
                cap,
            });
        }
        let dim = 1usize << self.n_qubits;
        let mut m = CMatrix::zeros(dim, dim);
        for (c, s) in &self.terms {
            let flip = s.flip_mask();
            for b in 0..dim {
                m[(b ^ flip, b)] += *c * s.basis_factor(b);
            }
        }
        Ok(m)
    }
}

impl fmt::Display for OperatorSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (c, s)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({:.6}{:+.6}i) {}", c.re, c.im, s)?;
        }
        Ok(())
    }
}
