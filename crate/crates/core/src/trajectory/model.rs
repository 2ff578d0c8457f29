//! Lindblad model with single-qubit decay channels `L_k = sqrt(kappa_k) |0><1|_k`.

use crate::error::{Error, Result};
use crate::qcore::linalg::{bit_position, is_hermitian, Operator, C64};
use crate::tol;

#[derive(Clone, Debug, PartialEq)]
pub struct LindbladModel {
    n_qubits: usize,
    hamiltonian: Operator,
    rates: Vec<f64>,
}

impl LindbladModel {
    pub fn new(n_qubits: usize, hamiltonian: Operator, rates: Vec<f64>) -> Result<Self> {
        if n_qubits == 0 || n_qubits > tol::MAX_QUBITS {
            return Err(Error::TooManyQubits(n_qubits));
        }
        let dim = 1usize << n_qubits;
        if hamiltonian.nrows() != dim || hamiltonian.ncols() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: hamiltonian.nrows(),
            });
        }
        if !is_hermitian(&hamiltonian, tol::HERMITICITY) {
            return Err(Error::InvalidParameter("Hamiltonian is not Hermitian".into()));
        }
        if rates.len() != n_qubits {
            return Err(Error::LengthMismatch {
                what: "decay rates",
                expected: n_qubits,
                found: rates.len(),
            });
        }
        if let Some(k) = rates.iter().find(|k| !(k.is_finite() && **k >= 0.0)) {
            return Err(Error::InvalidParameter(format!("decay rate must be finite and >= 0, got {k}")));
        }
        Ok(Self {
            n_qubits,
            hamiltonian,
            rates,
        })
    }

    /// Equal rate `kappa` on every qubit.
    pub fn uniform(n_qubits: usize, hamiltonian: Operator, kappa: f64) -> Result<Self> {
        Self::new(n_qubits, hamiltonian, vec![kappa; n_qubits])
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        1 << self.n_qubits
    }

    pub fn hamiltonian(&self) -> &Operator {
        &self.hamiltonian
    }

    pub fn rates(&self) -> &[f64] {
        &self.rates
    }

    pub fn has_equal_rates(&self) -> bool {
        self.rates.iter().all(|&k| k == self.rates[0])
    }

    /// `H - (i/2) sum_k kappa_k n_k`.
    pub fn effective_hamiltonian(&self) -> Operator {
        let mut h = self.hamiltonian.clone();
        for b in 0..self.dim() {
            h[(b, b)] -= C64::new(0.0, 0.5 * self.decay_rate_of_basis(b));
        }
        h
    }

    /// `sum_k kappa_k n_k` evaluated on a computational basis state.
    pub fn decay_rate_of_basis(&self, basis: usize) -> f64 {
        (0..self.n_qubits)
            .filter(|&q| basis >> bit_position(q, self.n_qubits) & 1 == 1)
            .map(|q| self.rates[q])
            .sum()
    }

    /// Dense `L_k`.
    pub fn jump_operator(&self, qubit: usize) -> Result<Operator> {
        if qubit >= self.n_qubits {
            return Err(Error::QubitOutOfRange {
                index: qubit,
                n_qubits: self.n_qubits,
            });
        }
        let dim = self.dim();
        let bit = 1usize << bit_position(qubit, self.n_qubits);
        let mut l = Operator::zeros(dim, dim);
        let amp = C64::from(self.rates[qubit].sqrt());
        for b in (0..dim).filter(|b| b & bit != 0) {
            l[(b ^ bit, b)] = amp;
        }
        Ok(l)
    }
}
