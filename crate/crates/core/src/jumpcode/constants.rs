//! Permutation-averaged moments of the Ising chain on half-filled code spaces.

use serde::Serialize;

use super::code::JumpCode;
use super::permutation::{permutation_average, permutation_mean};
use crate::error::{Error, Result};
use crate::perturb::ChainModel;
use crate::qcore::linalg::max_abs;
use crate::qcore::StateVector;

/// `<Z_a Z_b>` for distinct `a, b` over words with `n/2` excitations.
pub fn zz_expectation(n_qubits: usize) -> f64 {
    -1.0 / (n_qubits as f64 - 1.0)
}

/// `p'_+ - p'_-` for the eigenvalue of `Z Z Z Z` on four distinct qubits of a half-filled word.
pub fn zzzz_bias(n_qubits: usize) -> f64 {
    let n = n_qubits as f64;
    3.0 / (3.0 - 4.0 * n + n * n)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CodeConstants {
    pub c1: f64,
    pub c2: f64,
    pub c3_lower: f64,
    pub c3_upper: f64,
    pub zzzz_bias: f64,
}

/// Closed forms of `c1`, `c2` and the bounds on `c3`. Only detunings and `z` couplings enter.
pub fn code_constants(chain: &ChainModel, code: &JumpCode) -> Result<CodeConstants> {
    chain.validate()?;
    let n = chain.n_qubits;
    if n != code.n_physical() {
        return Err(Error::DimensionMismatch {
            expected: code.n_physical(),
            found: n,
        });
    }
    let zz = zz_expectation(n);
    let d = &chain.detunings;
    let j = &chain.jz;
    let c1 = zz * j.iter().sum::<f64>();
    let mut det_cross = 0.0;
    for a in 0..n {
        for b in a + 1..n {
            det_cross += d[a] * d[b];
        }
    }
    let det_part = d.iter().map(|x| x * x).sum::<f64>() + 2.0 * zz * det_cross;
    let neighbour: f64 = j.windows(2).map(|w| w[0] * w[1]).sum();
    let bias = if n >= 4 { zzzz_bias(n) } else { 0.0 };
    let mut distant = 0.0;
    for a in 0..j.len() {
        for b in a + 2..j.len() {
            distant += j[a] * j[b];
        }
    }
    let c2 = det_part + j.iter().map(|x| x * x).sum::<f64>() + 2.0 * zz * neighbour + 2.0 * bias * distant;
    Ok(CodeConstants {
        c1,
        c2,
        c3_lower: c1 * c1,
        c3_upper: c2 - det_part,
        zzzz_bias: bias,
    })
}

/// Brute-force permutation moments of `H'` in a state.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EnergyMoments {
    /// `<psi| <H'^2>_P |psi>`.
    pub mean_square: f64,
    /// `< <psi|H'|psi>^2 >_P`, the constant `c3`.
    pub c3: f64,
    /// `<psi| <H'>_P^2 |psi>`.
    pub square_of_mean: f64,
    /// `< <psi|H'|psi> >_P^2`.
    pub mean_expectation_squared: f64,
}

impl EnergyMoments {
    /// Coefficient of `N (dt)^2` in the swap-decoupled infidelity.
    pub fn linear_coefficient(&self) -> f64 {
        self.mean_square - self.c3
    }

    /// Coefficient of `(N^2 - N)(dt)^2`.
    pub fn quadratic_coefficient(&self) -> f64 {
        self.square_of_mean - self.mean_expectation_squared
    }
}

/// Moments of the chain Hamiltonian averaged over all qubit permutations, by enumeration.
pub fn permuted_energy_moments(chain: &ChainModel, state: &StateVector) -> Result<EnergyMoments> {
    let h = chain.hamiltonian()?;
    if state.n_qubits() != chain.n_qubits {
        return Err(Error::DimensionMismatch {
            expected: chain.n_qubits,
            found: state.n_qubits(),
        });
    }
    let psi = state.amplitudes();
    let avg = permutation_average(&h)?;
    let avg_psi = &avg * psi;
    let square_of_mean = avg_psi.norm_squared();
    let h2 = &h * &h;
    let mean_square = psi.dotc(&(permutation_average(&h2)? * psi)).re;
    let mean_expectation = psi.dotc(&avg_psi).re;

    let diagonal = max_abs(&(&h - nalgebra::DMatrix::from_diagonal(&h.diagonal()))) == 0.0;
    let c3 = if diagonal {
        let d: Vec<f64> = h.diagonal().iter().map(|x| x.re).collect();
        let w: Vec<f64> = psi.iter().map(|a| a.norm_sqr()).collect();
        permutation_mean(chain.n_qubits, |p| {
            let e: f64 = w.iter().enumerate().map(|(b, wb)| wb * d[p.apply_index(b)]).sum();
            e * e
        })?
    } else {
        permutation_mean(chain.n_qubits, |p| {
            let hp = p.conjugate(&h);
            let e = psi.dotc(&(hp * psi)).re;
            e * e
        })?
    };
    Ok(EnergyMoments {
        mean_square,
        c3,
        square_of_mean,
        mean_expectation_squared: mean_expectation * mean_expectation,
    })
}

pub fn c3_for_state(chain: &ChainModel, state: &StateVector) -> Result<f64> {
    Ok(permuted_energy_moments(chain, state)?.c3)
}
