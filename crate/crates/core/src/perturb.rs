//! Static-imperfection models: nearest-neighbour Heisenberg chains with detunings,
//! and traceless GUE random Hamiltonians.

use rand::Rng;
use rand_distr::{Distribution, StandardNormal, Uniform};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qcore::linalg::{identity, trace, Operator, C64};
use crate::qcore::{Pauli, PauliString};

/// Open linear chain `H = sum_i d_i Z_i + sum_K sum_j J_{K,j} K_j K_{j+1}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChainModel {
    pub n_qubits: usize,
    pub detunings: Vec<f64>,
    pub jx: Vec<f64>,
    pub jy: Vec<f64>,
    pub jz: Vec<f64>,
}

impl ChainModel {
    pub fn zero(n_qubits: usize) -> Self {
        let m = n_qubits.saturating_sub(1);
        Self {
            n_qubits,
            detunings: vec![0.0; n_qubits],
            jx: vec![0.0; m],
            jy: vec![0.0; m],
            jz: vec![0.0; m],
        }
    }

    /// Z detunings and ZZ couplings only.
    pub fn ising(detunings: Vec<f64>, jz: Vec<f64>) -> Self {
        let n = detunings.len();
        let m = n.saturating_sub(1);
        Self {
            n_qubits: n,
            detunings,
            jx: vec![0.0; m],
            jy: vec![0.0; m],
            jz,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_qubits < 2 {
            return Err(Error::InvalidParameter(format!(
                "chain needs at least 2 qubits, got {}",
                self.n_qubits
            )));
        }
        if self.detunings.len() != self.n_qubits {
            return Err(Error::LengthMismatch {
                what: "detunings",
                expected: self.n_qubits,
                found: self.detunings.len(),
            });
        }
        for (what, c) in [("jx", &self.jx), ("jy", &self.jy), ("jz", &self.jz)] {
            if c.len() != self.n_qubits - 1 {
                return Err(Error::LengthMismatch {
                    what,
                    expected: self.n_qubits - 1,
                    found: c.len(),
                });
            }
        }
        Ok(())
    }

    /// Every nonzero term as `(coefficient, Pauli string)`.
    pub fn terms(&self) -> Vec<(f64, PauliString)> {
        let n = self.n_qubits;
        let mut out = Vec::new();
        for (i, &d) in self.detunings.iter().enumerate() {
            if d != 0.0 {
                out.push((d, PauliString::single(n, i, Pauli::Z)));
            }
        }
        for (k, couplings) in [(Pauli::X, &self.jx), (Pauli::Y, &self.jy), (Pauli::Z, &self.jz)] {
            for (j, &c) in couplings.iter().enumerate() {
                if c != 0.0 {
                    let mut word = vec![Pauli::I; n];
                    word[j] = k;
                    word[j + 1] = k;
                    out.push((c, PauliString::from_word(word)));
                }
            }
        }
        out
    }

    /// The chain Hamiltonian as a dense Hermitian, traceless matrix.
    pub fn hamiltonian(&self) -> Result<Operator> {
        self.validate()?;
        let dim = 1usize << self.n_qubits;
        let mut h = Operator::zeros(dim, dim);
        for (c, p) in self.terms() {
            p.add_scaled_to(&mut h, C64::from(c));
        }
        Ok(h)
    }

    /// Same chain with the X and Y couplings removed.
    pub fn ising_part(&self) -> ChainModel {
        ChainModel::ising(self.detunings.clone(), self.jz.clone())
    }
}

pub fn build_chain_hamiltonian(model: &ChainModel) -> Result<Operator> {
    model.hamiltonian()
}

/// Detunings and couplings drawn i.i.d. uniform on `[-sqrt(3) eps, sqrt(3) eps]`, which has
/// variance `eps^2`. With `full_heisenberg = false` the X and Y couplings are zero.
pub fn sample_uniform_chain<R: Rng + ?Sized>(
    n_qubits: usize,
    eps: f64,
    full_heisenberg: bool,
    rng: &mut R,
) -> Result<ChainModel> {
    if !(eps >= 0.0) {
        return Err(Error::InvalidParameter(format!("eps must be >= 0, got {eps}")));
    }
    if n_qubits < 2 {
        return Err(Error::InvalidParameter("chain needs at least 2 qubits".into()));
    }
    let mut model = ChainModel::zero(n_qubits);
    if eps == 0.0 {
        return Ok(model);
    }
    let a = 3f64.sqrt() * eps;
    let dist = Uniform::new_inclusive(-a, a).expect("finite bounds");
    model.detunings = (0..n_qubits).map(|_| dist.sample(rng)).collect();
    model.jz = (0..n_qubits - 1).map(|_| dist.sample(rng)).collect();
    if full_heisenberg {
        model.jx = (0..n_qubits - 1).map(|_| dist.sample(rng)).collect();
        model.jy = (0..n_qubits - 1).map(|_| dist.sample(rng)).collect();
    }
    Ok(model)
}

/// GUE sample `V` with `<V_jk V_lm> = delta_jm delta_kl / N`, projected to be traceless.
#[derive(Clone, Debug)]
pub struct GuePerturbation {
    pub dim: usize,
    /// Sample before the traceless projection.
    pub raw: Operator,
    /// `raw - I tr(raw)/N`.
    pub matrix: Operator,
    pub strength: f64,
}

impl GuePerturbation {
    pub fn sample<R: Rng + ?Sized>(dim: usize, strength: f64, rng: &mut R) -> Result<Self> {
        if dim < 2 {
            return Err(Error::InvalidParameter(format!("GUE dimension must be >= 2, got {dim}")));
        }
        let raw = sample_gue_raw(dim, rng);
        let shift = trace(&raw) / dim as f64;
        let matrix = &raw - identity(dim) * shift;
        Ok(Self {
            dim,
            raw,
            matrix,
            strength,
        })
    }

    /// `delta H = V * strength`.
    pub fn delta_h(&self) -> Operator {
        &self.matrix * C64::from(self.strength)
    }
}

/// Diagonal real with variance `1/N`; off-diagonal complex with variance `1/(2N)` per part.
pub fn sample_gue_raw<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Operator {
    let n = dim as f64;
    let sd_diag = (1.0 / n).sqrt();
    let sd_off = (0.5 / n).sqrt();
    let mut v = Operator::zeros(dim, dim);
    for j in 0..dim {
        let d: f64 = rng.sample(StandardNormal);
        v[(j, j)] = C64::from(d * sd_diag);
        for k in (j + 1)..dim {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            let z = C64::new(re * sd_off, im * sd_off);
            v[(j, k)] = z;
            v[(k, j)] = z.conj();
        }
    }
    v
}

pub fn sample_gue<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Result<GuePerturbation> {
    GuePerturbation::sample(dim, 1.0, rng)
}
