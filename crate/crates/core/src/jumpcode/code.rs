//! Constant-excitation codes correcting one detected decay, their recovery and the
//! flip pulse used for decoupling inside the code space.

use std::f64::consts::FRAC_1_SQRT_2;

use serde::{Deserialize, Serialize};

use crate::algos::{Gate, GateSequence};
use crate::error::{Error, Result};
use crate::qcore::gates::{cnot, hadamard, pauli_x};
use crate::qcore::linalg::{Operator, C64, ZERO};
use crate::qcore::{Pauli, PauliString, StateVector};
use crate::tol;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum CodeVariant {
    /// Two physical qubits per logical qubit plus an ancilla pair.
    Tensor,
    /// Three codewords on four physical qubits.
    FourQubit,
}

/// Codewords `(|w_k> + e^{i phi} |~w_k>)/sqrt(2)`, with `~w` the bitwise complement.
#[derive(Clone, Debug, PartialEq)]
pub struct JumpCode {
    variant: CodeVariant,
    n_logical: usize,
    n_physical: usize,
    phase: f64,
    /// Basis index of the first component of each codeword.
    words: Vec<usize>,
    codewords: Vec<StateVector>,
}

/// Basis index of logical word `k` (logical qubit 0 most significant): each logical bit
/// becomes `01` or `10`, followed by the ancilla pair `01`.
fn tensor_word(k: usize, n_logical: usize) -> usize {
    let mut w = 0usize;
    for q in 0..n_logical {
        let bit = (k >> (n_logical - 1 - q)) & 1;
        w = (w << 2) | if bit == 0 { 0b01 } else { 0b10 };
    }
    (w << 2) | 0b01
}

fn bits(s: &str) -> usize {
    usize::from_str_radix(s, 2).expect("literal bit string")
}

pub fn build_code(n_logical: usize, phase: f64, variant: CodeVariant) -> Result<JumpCode> {
    let (n_logical, n_physical, words) = match variant {
        CodeVariant::Tensor => {
            if n_logical == 0 {
                return Err(Error::InvalidParameter("need at least one logical qubit".into()));
            }
            let n_p = 2 * n_logical + 2;
            if n_p > tol::MAX_QUBITS {
                return Err(Error::TooManyQubits(n_p));
            }
            (n_logical, n_p, (0..1usize << n_logical).map(|k| tensor_word(k, n_logical)).collect::<Vec<_>>())
        }
        CodeVariant::FourQubit => (0, 4, vec![bits("0011"), bits("0101"), bits("0110")]),
    };
    let dim = 1usize << n_physical;
    let full = dim - 1;
    let rel = C64::from_polar(1.0, phase);
    let codewords = words
        .iter()
        .map(|&w| {
            let mut amps = vec![ZERO; dim];
            amps[w] = C64::from(FRAC_1_SQRT_2);
            amps[full ^ w] = rel * FRAC_1_SQRT_2;
            StateVector::from_amplitudes(n_physical, amps)
        })
        .collect::<Result<_>>()?;
    Ok(JumpCode {
        variant,
        n_logical,
        n_physical,
        phase,
        words,
        codewords,
    })
}

impl JumpCode {
    pub fn variant(&self) -> CodeVariant {
        self.variant
    }

    /// Logical qubits; zero for the four-qubit code, whose span is three-dimensional.
    pub fn n_logical(&self) -> usize {
        self.n_logical
    }

    pub fn n_physical(&self) -> usize {
        self.n_physical
    }

    pub fn phase(&self) -> f64 {
        self.phase
    }

    pub fn codewords(&self) -> &[StateVector] {
        &self.codewords
    }

    pub fn words(&self) -> &[usize] {
        &self.words
    }

    /// `sum_k a_k |c_k>`.
    pub fn encode_amplitudes(&self, amps: &[C64]) -> Result<StateVector> {
        if amps.len() != self.codewords.len() {
            return Err(Error::DimensionMismatch {
                expected: self.codewords.len(),
                found: amps.len(),
            });
        }
        let dim = 1usize << self.n_physical;
        let mut out = nalgebra::DVector::from_element(dim, ZERO);
        for (a, c) in amps.iter().zip(&self.codewords) {
            out += c.amplitudes() * *a;
        }
        StateVector::from_vector(self.n_physical, out)
    }

    /// Linear isometry from the `n_L`-qubit register onto the code space.
    pub fn encode(&self, logical: &StateVector) -> Result<StateVector> {
        if self.variant != CodeVariant::Tensor {
            return Err(Error::InvalidParameter("encoding a qubit register needs the tensor code".into()));
        }
        if logical.n_qubits() != self.n_logical {
            return Err(Error::DimensionMismatch {
                expected: self.n_logical,
                found: logical.n_qubits(),
            });
        }
        self.encode_amplitudes(logical.amplitudes().as_slice())
    }

    /// Projector onto the span of the codewords.
    pub fn projector(&self) -> Operator {
        let dim = 1usize << self.n_physical;
        let mut p = Operator::zeros(dim, dim);
        for c in &self.codewords {
            let v = c.amplitudes();
            p += v * v.adjoint();
        }
        p
    }

    /// `(basis index, [re, im])` for every nonzero amplitude of codeword `k`.
    pub fn codeword_entries(&self, k: usize) -> Vec<(usize, [f64; 2])> {
        self.codewords[k]
            .amplitudes()
            .iter()
            .enumerate()
            .filter(|(_, a)| a.norm() > 0.0)
            .map(|(i, a)| (i, [a.re, a.im]))
            .collect()
    }
}

/// Projector onto all basis states with exactly `n/2` excitations.
pub fn dfs_projector(n_qubits: usize) -> Operator {
    let dim = 1usize << n_qubits;
    let mut p = Operator::zeros(dim, dim);
    for b in 0..dim {
        if 2 * b.count_ones() as usize == n_qubits {
            p[(b, b)] = C64::from(1.0);
        }
    }
    p
}

/// `R_i = X_i prod_{j != i} CNOT_{i,j} H_i`, with `H_i` acting first.
pub fn recovery_sequence(n_qubits: usize, qubit: usize) -> Result<GateSequence> {
    if qubit >= n_qubits {
        return Err(Error::QubitOutOfRange {
            index: qubit,
            n_qubits,
        });
    }
    let mut seq = GateSequence::new(n_qubits)?;
    seq.push(Gate::local(format!("H{qubit}"), hadamard(), vec![qubit]))?;
    for j in (0..n_qubits).filter(|&j| j != qubit) {
        seq.push(Gate::local(format!("CX{qubit},{j}"), cnot(), vec![qubit, j]))?;
    }
    seq.push(Gate::local(format!("X{qubit}"), pauli_x(), vec![qubit]))?;
    Ok(seq)
}

pub fn recovery_operator(n_qubits: usize, qubit: usize) -> Result<Operator> {
    Ok(recovery_sequence(n_qubits, qubit)?.product())
}

/// Applies `R_i` to a post-jump state.
pub fn recover(state: &StateVector, qubit: usize) -> Result<StateVector> {
    let mut s = state.clone();
    recovery_sequence(state.n_qubits(), qubit)?.apply_to_state(&mut s)?;
    Ok(s)
}

/// `|0><1|` on `qubit`, without renormalization.
pub fn lower(state: &mut StateVector, qubit: usize) -> Result<()> {
    let n = state.n_qubits();
    if qubit >= n {
        return Err(Error::QubitOutOfRange { index: qubit, n_qubits: n });
    }
    let bit = 1usize << crate::qcore::linalg::bit_position(qubit, n);
    let amps = state.amplitudes_mut();
    for b in 0..amps.len() {
        if b & bit == 0 {
            amps[b] = amps[b | bit];
            amps[b | bit] = ZERO;
        }
    }
    Ok(())
}

/// Normalized `L_i |psi> / ||L_i |psi>||`.
pub fn apply_jump(state: &StateVector, qubit: usize) -> Result<StateVector> {
    let mut s = state.clone();
    lower(&mut s, qubit)?;
    s.normalize()?;
    Ok(s)
}

/// `Z` on even positions, `I` on odd ones.
pub fn flip_operator(n_qubits: usize) -> Result<PauliString> {
    if n_qubits % 2 != 0 {
        return Err(Error::InvalidParameter(format!("flip needs an even register, got {n_qubits}")));
    }
    Ok(PauliString::from_word(
        (0..n_qubits).map(|q| if q % 2 == 0 { Pauli::Z } else { Pauli::I }).collect(),
    ))
}

/// Whether the flip maps the code space into itself.
pub fn flip_preserves_code(code: &JumpCode) -> Result<bool> {
    let f = flip_operator(code.n_physical())?.to_operator();
    let p = code.projector();
    let fp = &f * &p;
    let pfp = &p * &fp;
    Ok(crate::qcore::linalg::max_abs_diff(&pfp, &fp) < 1e-12)
}
