//! Symbolic Pauli words with a phase in `{+1, +i, -1, -i}`.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::linalg::{bit_position, Operator, C64, I, ONE, ZERO};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub const ALL: [Pauli; 4] = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];

    pub fn matrix(self) -> Operator {
        let m = match self {
            Pauli::I => [ONE, ZERO, ZERO, ONE],
            Pauli::X => [ZERO, ONE, ONE, ZERO],
            Pauli::Y => [ZERO, -I, I, ZERO],
            Pauli::Z => [ONE, ZERO, ZERO, -ONE],
        };
        Operator::from_row_slice(2, 2, &m)
    }

    fn flips(self) -> bool {
        matches!(self, Pauli::X | Pauli::Y)
    }

    fn signs(self) -> bool {
        matches!(self, Pauli::Y | Pauli::Z)
    }

    /// Single-qubit product `self * other = phase * result`.
    pub fn mul(self, other: Pauli) -> (Phase, Pauli) {
        use Pauli::*;
        match (self, other) {
            (I, p) | (p, I) => (Phase::ONE, p),
            (X, X) | (Y, Y) | (Z, Z) => (Phase::ONE, I),
            (X, Y) => (Phase::I, Z),
            (Y, X) => (Phase::MINUS_I, Z),
            (Y, Z) => (Phase::I, X),
            (Z, Y) => (Phase::MINUS_I, X),
            (Z, X) => (Phase::I, Y),
            (X, Z) => (Phase::MINUS_I, Y),
        }
    }

    fn symbol(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }
}

/// Power of `i`, stored mod 4.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct Phase(u8);

impl Phase {
    pub const ONE: Phase = Phase(0);
    pub const I: Phase = Phase(1);
    pub const MINUS_ONE: Phase = Phase(2);
    pub const MINUS_I: Phase = Phase(3);

    pub fn from_power(k: u32) -> Phase {
        Phase((k % 4) as u8)
    }

    pub fn power(self) -> u8 {
        self.0
    }

    pub fn to_complex(self) -> C64 {
        match self.0 {
            0 => ONE,
            1 => I,
            2 => -ONE,
            _ => -I,
        }
    }

    pub fn conj(self) -> Phase {
        Phase((4 - self.0) % 4)
    }
}

impl std::ops::Mul for Phase {
    type Output = Phase;
    fn mul(self, rhs: Phase) -> Phase {
        Phase((self.0 + rhs.0) % 4)
    }
}

/// Tensor product of single-qubit Paulis with an overall phase.
///
/// `word[q]` acts on qubit `q`; qubit 0 is the most significant bit of a basis index.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PauliString {
    word: Vec<Pauli>,
    phase: Phase,
}

impl PauliString {
    pub fn new(word: Vec<Pauli>, phase: Phase) -> Self {
        Self { word, phase }
    }

    pub fn from_word(word: Vec<Pauli>) -> Self {
        Self::new(word, Phase::ONE)
    }

    pub fn identity(n_qubits: usize) -> Self {
        Self::from_word(vec![Pauli::I; n_qubits])
    }

    /// Pauli `p` on `qubit`, identity elsewhere.
    pub fn single(n_qubits: usize, qubit: usize, p: Pauli) -> Self {
        let mut word = vec![Pauli::I; n_qubits];
        word[qubit] = p;
        Self::from_word(word)
    }

    /// The `index`-th element of `{I,X,Y,Z}^n` in base-4 order (qubit 0 most significant).
    pub fn from_index(n_qubits: usize, mut index: usize) -> Self {
        let mut word = vec![Pauli::I; n_qubits];
        for q in (0..n_qubits).rev() {
            word[q] = Pauli::ALL[index % 4];
            index /= 4;
        }
        Self::from_word(word)
    }

    /// All `4^n` phase-free Pauli strings.
    pub fn all(n_qubits: usize) -> impl Iterator<Item = PauliString> {
        (0..1usize << (2 * n_qubits)).map(move |i| Self::from_index(n_qubits, i))
    }

    /// Uniform draw from `{I,X,Y,Z}^n` with phase +1.
    pub fn random<R: Rng + ?Sized>(n_qubits: usize, rng: &mut R) -> Self {
        Self::from_word((0..n_qubits).map(|_| Pauli::ALL[rng.random_range(0..4)]).collect())
    }

    pub fn n_qubits(&self) -> usize {
        self.word.len()
    }

    pub fn word(&self) -> &[Pauli] {
        &self.word
    }

    pub fn phase(&self) -> Phase {
        self.phase
    }

    pub fn is_identity(&self) -> bool {
        self.word.iter().all(|&p| p == Pauli::I)
    }

    pub fn weight(&self) -> usize {
        self.word.iter().filter(|&&p| p != Pauli::I).count()
    }

    fn mask(&self, pred: impl Fn(Pauli) -> bool) -> usize {
        let n = self.n_qubits();
        self.word
            .iter()
            .enumerate()
            .filter(|(_, &p)| pred(p))
            .fold(0, |m, (q, _)| m | 1 << bit_position(q, n))
    }

    pub fn x_mask(&self) -> usize {
        self.mask(Pauli::flips)
    }

    pub fn z_mask(&self) -> usize {
        self.mask(Pauli::signs)
    }

    fn base_phase(&self) -> C64 {
        let n_y = self.word.iter().filter(|&&p| p == Pauli::Y).count() as u32;
        (self.phase * Phase::from_power(n_y)).to_complex()
    }

    /// `P|i> = c |j>`, returned as `(j, c)`.
    pub fn action(&self, basis: usize) -> (usize, C64) {
        let (x, z) = (self.x_mask(), self.z_mask());
        let mut c = self.base_phase();
        if (basis & z).count_ones() % 2 == 1 {
            c = -c;
        }
        (basis ^ x, c)
    }

    /// Applies the string to a full-register amplitude slice in place.
    pub fn apply(&self, amps: &mut [C64]) {
        let (x, z) = (self.x_mask(), self.z_mask());
        let c0 = self.base_phase();
        let coeff = |i: usize| if (i & z).count_ones() % 2 == 1 { -c0 } else { c0 };
        if x == 0 {
            for (i, a) in amps.iter_mut().enumerate() {
                *a *= coeff(i);
            }
            return;
        }
        for i in 0..amps.len() {
            let j = i ^ x;
            if i < j {
                let (ai, aj) = (amps[i], amps[j]);
                amps[j] = coeff(i) * ai;
                amps[i] = coeff(j) * aj;
            }
        }
    }

    /// Adds `coef * P` to a dense matrix.
    pub fn add_scaled_to(&self, m: &mut Operator, coef: C64) {
        for i in 0..m.ncols() {
            let (j, c) = self.action(i);
            m[(j, i)] += coef * c;
        }
    }

    pub fn to_operator(&self) -> Operator {
        let dim = 1usize << self.n_qubits();
        let mut m = Operator::zeros(dim, dim);
        self.add_scaled_to(&mut m, ONE);
        m
    }

    /// Ordered product `self * other`.
    pub fn mul(&self, other: &PauliString) -> Result<PauliString> {
        if self.n_qubits() != other.n_qubits() {
            return Err(Error::DimensionMismatch {
                expected: self.n_qubits(),
                found: other.n_qubits(),
            });
        }
        let mut phase = self.phase * other.phase;
        let word = self
            .word
            .iter()
            .zip(&other.word)
            .map(|(&a, &b)| {
                let (ph, p) = a.mul(b);
                phase = phase * ph;
                p
            })
            .collect();
        Ok(PauliString { word, phase })
    }

    pub fn adjoint(&self) -> PauliString {
        PauliString {
            word: self.word.clone(),
            phase: self.phase.conj(),
        }
    }

    /// Sub-word on `targets`, phase dropped.
    pub fn restrict(&self, targets: &[usize]) -> PauliString {
        PauliString::from_word(targets.iter().map(|&q| self.word[q]).collect())
    }

    pub fn commutes_with(&self, other: &PauliString) -> bool {
        let anti = self
            .word
            .iter()
            .zip(&other.word)
            .filter(|(&a, &b)| a != Pauli::I && b != Pauli::I && a != b)
            .count();
        anti % 2 == 0
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prefix = match self.phase.0 {
            0 => "+",
            1 => "+i",
            2 => "-",
            _ => "-i",
        };
        write!(f, "{prefix}")?;
        for p in &self.word {
            write!(f, "{}", p.symbol())?;
        }
        Ok(())
    }
}

impl Serialize for PauliString {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for PauliString {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl FromStr for PauliString {
    type Err = Error;

    /// Parses words like `XIZ`, `-YY`, `+iZ`.
    fn from_str(s: &str) -> Result<Self> {
        let (phase, rest) = if let Some(r) = s.strip_prefix("-i") {
            (Phase::MINUS_I, r)
        } else if let Some(r) = s.strip_prefix("+i") {
            (Phase::I, r)
        } else if let Some(r) = s.strip_prefix('-') {
            (Phase::MINUS_ONE, r)
        } else {
            (Phase::ONE, s.strip_prefix('+').unwrap_or(s))
        };
        let word = rest
            .chars()
            .map(|c| match c {
                'I' => Ok(Pauli::I),
                'X' => Ok(Pauli::X),
                'Y' => Ok(Pauli::Y),
                'Z' => Ok(Pauli::Z),
                other => Err(Error::InvalidParameter(format!("bad Pauli symbol '{other}'"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(PauliString::new(word, phase))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::linalg::{hs_inner, kron, max_abs_diff, trace, unitarity_defect};

    fn kron_matrix(p: &PauliString) -> Operator {
        let mut m = Operator::identity(1, 1);
        for q in p.word() {
            m = kron(&m, &q.matrix());
        }
        m * p.phase().to_complex()
    }

    #[test]
    fn expansion_matches_kronecker_product() {
        for p in PauliString::all(3) {
            let p = PauliString::new(p.word().to_vec(), Phase::MINUS_I);
            assert!(max_abs_diff(&p.to_operator(), &kron_matrix(&p)) < 1e-15, "{p}");
        }
    }

    #[test]
    fn pauli_basis_is_orthogonal() {
        let ops: Vec<_> = PauliString::all(2).map(|p| p.to_operator()).collect();
        for (a, pa) in ops.iter().enumerate() {
            assert!(unitarity_defect(pa) < 1e-15);
            for (b, pb) in ops.iter().enumerate() {
                let ip = hs_inner(pa, pb);
                let expected = if a == b { 4.0 } else { 0.0 };
                assert!((ip - C64::from(expected)).norm() < 1e-14);
            }
            let tr = trace(pa).norm();
            if a == 0 {
                assert!((tr - 4.0).abs() < 1e-14);
            } else {
                assert!(tr < 1e-14);
            }
        }
    }

    #[test]
    fn product_and_apply_agree_with_matrices() {
        let a: PauliString = "XYZI".parse().unwrap();
        let b: PauliString = "-iZZXY".parse().unwrap();
        let ab = a.mul(&b).unwrap();
        let dense = a.to_operator() * b.to_operator();
        assert!(max_abs_diff(&ab.to_operator(), &dense) < 1e-14);

        let mut amps: Vec<C64> = (0..16).map(|i| C64::new(i as f64, 1.0 - i as f64)).collect();
        let v = nalgebra::DVector::from_vec(amps.clone());
        ab.apply(&mut amps);
        let expect = &dense * v;
        for (x, y) in amps.iter().zip(expect.iter()) {
            assert!((x - y).norm() < 1e-12);
        }
        assert_eq!(a.commutes_with(&b), {
            let p = a.to_operator();
            let q = b.to_operator();
            max_abs_diff(&(&p * &q), &(&q * &p)) < 1e-12
        });
    }

    #[test]
    fn parse_round_trip() {
        for s in ["+XYZ", "-iII", "+iZX", "-Y"] {
            let p: PauliString = s.parse().unwrap();
            assert_eq!(p.to_string(), s);
        }
        assert!("XQ".parse::<PauliString>().is_err());
    }
}
