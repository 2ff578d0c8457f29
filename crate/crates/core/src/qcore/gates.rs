//! Elementary one- and two-qubit gate matrices.
//!
//! Two-qubit gates are written in the local basis `|a b>` where `a` is the first
//! target (control, where applicable).

use std::f64::consts::FRAC_1_SQRT_2;

use super::linalg::{Operator, C64, ONE, ZERO};

pub fn hadamard() -> Operator {
    let h = C64::from(FRAC_1_SQRT_2);
    Operator::from_row_slice(2, 2, &[h, h, h, -h])
}

pub fn pauli_x() -> Operator {
    Operator::from_row_slice(2, 2, &[ZERO, ONE, ONE, ZERO])
}

/// `diag(1, e^{i phi})`.
pub fn phase(phi: f64) -> Operator {
    Operator::from_row_slice(2, 2, &[ONE, ZERO, ZERO, C64::from_polar(1.0, phi)])
}

pub fn cnot() -> Operator {
    let mut m = Operator::zeros(4, 4);
    m[(0, 0)] = ONE;
    m[(1, 1)] = ONE;
    m[(2, 3)] = ONE;
    m[(3, 2)] = ONE;
    m
}

/// `diag(1, 1, 1, e^{i phi})`.
pub fn controlled_phase(phi: f64) -> Operator {
    let mut m = Operator::identity(4, 4);
    m[(3, 3)] = C64::from_polar(1.0, phi);
    m
}

pub fn swap() -> Operator {
    let mut m = Operator::zeros(4, 4);
    m[(0, 0)] = ONE;
    m[(1, 2)] = ONE;
    m[(2, 1)] = ONE;
    m[(3, 3)] = ONE;
    m
}
