//! Gate sequences `U = U_{n_g} ... U_2 U_1`.

use crate::error::{Error, Result};
use crate::qcore::linalg::{
    apply_local_to_columns, check_targets, identity, is_unitary, unitarity_defect, Operator, C64,
};
use crate::qcore::{PauliString, StateVector};
use crate::tol;

#[derive(Clone, Debug, PartialEq)]
pub enum GateOp {
    /// `2^k x 2^k` unitary on `targets` (`targets[0]` most significant locally).
    Local { op: Operator, targets: Vec<usize> },
    /// Register-wide Pauli string.
    Pauli(PauliString),
    /// Register-wide dense unitary.
    Full(Operator),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Gate {
    pub label: String,
    pub op: GateOp,
}

impl Gate {
    pub fn local(label: impl Into<String>, op: Operator, targets: Vec<usize>) -> Self {
        Self {
            label: label.into(),
            op: GateOp::Local { op, targets },
        }
    }

    pub fn pauli(label: impl Into<String>, p: PauliString) -> Self {
        Self {
            label: label.into(),
            op: GateOp::Pauli(p),
        }
    }

    pub fn full(label: impl Into<String>, op: Operator) -> Self {
        Self {
            label: label.into(),
            op: GateOp::Full(op),
        }
    }

    /// `m <- G m`.
    pub fn left_apply(&self, m: &mut Operator, n_qubits: usize) {
        match &self.op {
            GateOp::Local { op, targets } => apply_local_to_columns(m, n_qubits, op, targets),
            GateOp::Pauli(p) => {
                for mut col in m.column_iter_mut() {
                    p.apply(col.as_mut_slice());
                }
            }
            GateOp::Full(u) => {
                let out = u * &*m;
                *m = out;
            }
        }
    }

    pub fn apply_to_state(&self, state: &mut StateVector) -> Result<()> {
        match &self.op {
            GateOp::Local { op, targets } => state.apply_gate(op, targets),
            GateOp::Pauli(p) => state.apply_pauli(p),
            GateOp::Full(u) => state.apply_operator(u),
        }
    }

    /// Register-wide matrix.
    pub fn matrix(&self, n_qubits: usize) -> Operator {
        let mut m = identity(1 << n_qubits);
        self.left_apply(&mut m, n_qubits);
        m
    }

    /// Trace over the whole register.
    pub fn trace(&self, n_qubits: usize) -> C64 {
        match &self.op {
            GateOp::Local { op, targets } => {
                let rest = (1usize << (n_qubits - targets.len())) as f64;
                op.diagonal().iter().sum::<C64>() * rest
            }
            GateOp::Pauli(p) => {
                if p.is_identity() {
                    p.phase().to_complex() * (1usize << n_qubits) as f64
                } else {
                    C64::from(0.0)
                }
            }
            GateOp::Full(u) => u.diagonal().iter().sum(),
        }
    }

    fn validate(&self, n_qubits: usize) -> Result<()> {
        match &self.op {
            GateOp::Local { op, targets } => {
                check_targets(op.nrows(), targets, n_qubits)?;
                if !is_unitary(op, tol::UNITARITY) {
                    return Err(Error::NotUnitary(unitarity_defect(op)));
                }
            }
            GateOp::Pauli(p) => {
                if p.n_qubits() != n_qubits {
                    return Err(Error::DimensionMismatch {
                        expected: n_qubits,
                        found: p.n_qubits(),
                    });
                }
            }
            GateOp::Full(u) => {
                if u.nrows() != 1 << n_qubits {
                    return Err(Error::DimensionMismatch {
                        expected: 1 << n_qubits,
                        found: u.nrows(),
                    });
                }
                if !is_unitary(u, tol::UNITARITY) {
                    return Err(Error::NotUnitary(unitarity_defect(u)));
                }
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GateSequence {
    n_qubits: usize,
    gates: Vec<Gate>,
}

impl GateSequence {
    pub fn new(n_qubits: usize) -> Result<Self> {
        if n_qubits == 0 || n_qubits > tol::MAX_QUBITS {
            return Err(Error::TooManyQubits(n_qubits));
        }
        Ok(Self {
            n_qubits,
            gates: Vec::new(),
        })
    }

    pub fn from_gates(n_qubits: usize, gates: Vec<Gate>) -> Result<Self> {
        let mut s = Self::new(n_qubits)?;
        for g in gates {
            s.push(g)?;
        }
        Ok(s)
    }

    pub fn push(&mut self, gate: Gate) -> Result<()> {
        gate.validate(self.n_qubits)?;
        self.gates.push(gate);
        Ok(())
    }

    pub(crate) fn push_unchecked(&mut self, gate: Gate) {
        self.gates.push(gate);
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        1 << self.n_qubits
    }

    /// `n_g`.
    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    /// `U_{n_g} ... U_1`.
    pub fn product(&self) -> Operator {
        let mut m = identity(self.dim());
        for g in &self.gates {
            g.left_apply(&mut m, self.n_qubits);
        }
        m
    }

    /// `W_0 = I, W_j = U_j ... U_1` for `j = 0..=n_g`.
    pub fn prefix_products(&self) -> Vec<Operator> {
        let mut out = Vec::with_capacity(self.len() + 1);
        let mut m = identity(self.dim());
        out.push(m.clone());
        for g in &self.gates {
            g.left_apply(&mut m, self.n_qubits);
            out.push(m.clone());
        }
        out
    }

    pub fn apply_to_state(&self, state: &mut StateVector) -> Result<()> {
        for g in &self.gates {
            g.apply_to_state(state)?;
        }
        Ok(())
    }

    /// Register-wide matrix of every gate in order.
    pub fn gate_matrices(&self) -> Vec<Operator> {
        self.gates.iter().map(|g| g.matrix(self.n_qubits)).collect()
    }
}
