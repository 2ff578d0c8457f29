use nalgebra::DVector;
use rand::Rng;
use rand_distr::StandardNormal;

use super::linalg::{apply_local, bit_position, check_targets, Operator, C64, ONE, ZERO};
use super::pauli::PauliString;
use crate::error::{Error, Result};
use crate::tol;

/// Pure state of an `n`-qubit register; `amps[i]` is the amplitude of basis state `|i>`.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amps: DVector<C64>,
}

fn check_size(n_qubits: usize) -> Result<()> {
    if n_qubits > tol::MAX_QUBITS {
        Err(Error::TooManyQubits(n_qubits))
    } else {
        Ok(())
    }
}

impl StateVector {
    /// `|0...0>`.
    pub fn zero(n_qubits: usize) -> Result<Self> {
        Self::basis(n_qubits, 0)
    }

    pub fn basis(n_qubits: usize, index: usize) -> Result<Self> {
        check_size(n_qubits)?;
        let dim = 1usize << n_qubits;
        if index >= dim {
            return Err(Error::InvalidParameter(format!(
                "basis index {index} out of range for dimension {dim}"
            )));
        }
        let mut amps = DVector::from_element(dim, ZERO);
        amps[index] = ONE;
        Ok(Self { n_qubits, amps })
    }

    /// Basis state from a bit string such as `"0110"`, qubit 0 first.
    pub fn from_bits(bits: &str) -> Result<Self> {
        let index = usize::from_str_radix(bits, 2)
            .map_err(|_| Error::InvalidParameter(format!("bad bit string '{bits}'")))?;
        Self::basis(bits.len(), index)
    }

    pub fn from_amplitudes(n_qubits: usize, amps: Vec<C64>) -> Result<Self> {
        check_size(n_qubits)?;
        let dim = 1usize << n_qubits;
        if amps.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: amps.len(),
            });
        }
        Ok(Self {
            n_qubits,
            amps: DVector::from_vec(amps),
        })
    }

    pub fn from_vector(n_qubits: usize, amps: DVector<C64>) -> Result<Self> {
        Self::from_amplitudes(n_qubits, amps.as_slice().to_vec())
    }

    /// Haar-random pure state (normalized complex Gaussian vector).
    pub fn random<R: Rng + ?Sized>(n_qubits: usize, rng: &mut R) -> Result<Self> {
        check_size(n_qubits)?;
        let dim = 1usize << n_qubits;
        let amps = DVector::from_fn(dim, |_, _| {
            C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
        });
        let mut s = Self { n_qubits, amps };
        s.normalize()?;
        Ok(s)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &DVector<C64> {
        &self.amps
    }

    pub fn amplitudes_mut(&mut self) -> &mut DVector<C64> {
        &mut self.amps
    }

    pub fn into_amplitudes(self) -> DVector<C64> {
        self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.norm_squared()
    }

    pub fn is_normalized(&self) -> bool {
        (self.norm_sqr() - 1.0).abs() < tol::NORM
    }

    pub fn normalize(&mut self) -> Result<f64> {
        let n2 = self.norm_sqr();
        if !(n2 > 1e-300) {
            return Err(Error::NotNormalized(n2));
        }
        self.amps.unscale_mut(n2.sqrt());
        Ok(n2)
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &StateVector) -> C64 {
        self.amps.dotc(&other.amps)
    }

    /// `|<a|b>|^2 / (|a|^2 |b|^2)`; unnormalized inputs are allowed.
    pub fn fidelity(&self, other: &StateVector) -> f64 {
        self.inner(other).norm_sqr() / (self.norm_sqr() * other.norm_sqr())
    }

    /// Probability that `qubit` reads `|1>`.
    pub fn excitation_probability(&self, qubit: usize) -> f64 {
        let bit = 1 << bit_position(qubit, self.n_qubits);
        self.amps
            .iter()
            .enumerate()
            .filter(|(i, _)| i & bit != 0)
            .map(|(_, a)| a.norm_sqr())
            .sum()
    }

    /// Applies `op` (dimension `2^|targets|`) on `targets`, identity elsewhere.
    pub fn apply_gate(&mut self, op: &Operator, targets: &[usize]) -> Result<()> {
        check_targets(op.nrows(), targets, self.n_qubits)?;
        apply_local(self.amps.as_mut_slice(), self.n_qubits, op, targets);
        Ok(())
    }

    /// Functional form of [`StateVector::apply_gate`].
    pub fn with_gate(mut self, op: &Operator, targets: &[usize]) -> Result<Self> {
        self.apply_gate(op, targets)?;
        Ok(self)
    }

    pub fn apply_pauli(&mut self, p: &PauliString) -> Result<()> {
        if p.n_qubits() != self.n_qubits {
            return Err(Error::DimensionMismatch {
                expected: self.n_qubits,
                found: p.n_qubits(),
            });
        }
        p.apply(self.amps.as_mut_slice());
        Ok(())
    }

    /// Multiplies by a full-register operator.
    pub fn apply_operator(&mut self, op: &Operator) -> Result<()> {
        if op.ncols() != self.dim() || op.nrows() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: op.nrows(),
            });
        }
        self.amps = op * &self.amps;
        Ok(())
    }
}
