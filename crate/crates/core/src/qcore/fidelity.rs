//! Fidelity measures between an ideal and an actual unitary.

use super::linalg::{hs_inner, Operator, C64};
use crate::error::{Error, Result};

/// Fidelity amplitude `A = tr{U_ideal† U_actual} / N`.
pub fn fidelity_amplitude(ideal: &Operator, actual: &Operator) -> Result<C64> {
    if ideal.shape() != actual.shape() || !ideal.is_square() {
        return Err(Error::DimensionMismatch {
            expected: ideal.nrows(),
            found: actual.nrows(),
        });
    }
    Ok(hs_inner(ideal, actual) / ideal.nrows() as f64)
}

/// Entanglement fidelity `|tr{U_ideal† U_actual} / N|^2`.
pub fn entanglement_fidelity(ideal: &Operator, actual: &Operator) -> Result<f64> {
    Ok(fidelity_amplitude(ideal, actual)?.norm_sqr())
}

/// Haar-averaged state fidelity implied by an entanglement fidelity in dimension `dim`.
pub fn average_fidelity_from_entanglement(f_e: f64, dim: usize) -> f64 {
    let n = dim as f64;
    (n * f_e + 1.0) / (n + 1.0)
}
