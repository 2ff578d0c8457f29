//! Dense complex linear algebra helpers on top of `nalgebra`.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;
/// Dense `N x N` complex operator (unitary, Hamiltonian or projector).
pub type Operator = DMatrix<C64>;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

pub fn identity(dim: usize) -> Operator {
    Operator::identity(dim, dim)
}

pub fn trace(op: &Operator) -> C64 {
    op.diagonal().iter().sum()
}

/// Hilbert-Schmidt inner product `tr{A† B}`.
pub fn hs_inner(a: &Operator, b: &Operator) -> C64 {
    a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum()
}

pub fn max_abs_diff(a: &Operator, b: &Operator) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

pub fn max_abs(a: &Operator) -> f64 {
    a.iter().map(|x| x.norm()).fold(0.0, f64::max)
}

/// `max |U†U - I|` over all entries.
pub fn unitarity_defect(u: &Operator) -> f64 {
    let prod = u.adjoint() * u;
    max_abs_diff(&prod, &identity(u.nrows()))
}

pub fn is_unitary(u: &Operator, tol: f64) -> bool {
    u.is_square() && unitarity_defect(u) < tol
}

pub fn hermiticity_defect(h: &Operator) -> f64 {
    max_abs_diff(h, &h.adjoint())
}

pub fn is_hermitian(h: &Operator, tol: f64) -> bool {
    h.is_square() && hermiticity_defect(h) < tol
}

/// Largest singular value of a square matrix.
pub fn operator_two_norm(op: &Operator) -> Result<f64> {
    if !op.is_square() {
        return Err(Error::DimensionMismatch {
            expected: op.nrows(),
            found: op.ncols(),
        });
    }
    if op.nrows() == 0 {
        return Ok(0.0);
    }
    let sv = op.clone().singular_values();
    Ok(sv.iter().copied().fold(0.0, f64::max))
}

/// Induced 1-norm (max column sum); an upper bound on the 2-norm.
pub fn one_norm(op: &Operator) -> f64 {
    op.column_iter()
        .map(|c| c.iter().map(|x| x.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

pub fn kron(a: &Operator, b: &Operator) -> Operator {
    a.kronecker(b)
}

/// Real eigen-decomposition of a Hermitian operator: `(eigenvalues, eigenvectors)`.
pub fn hermitian_eigen(h: &Operator) -> (Vec<f64>, Operator) {
    let eig = SymmetricEigen::new(h.clone());
    (eig.eigenvalues.iter().copied().collect(), eig.eigenvectors)
}

/// `exp(-i H t)` for Hermitian `H`, by exact eigendecomposition.
pub fn expm_hermitian(h: &Operator, t: f64) -> Operator {
    let (vals, vecs) = hermitian_eigen(h);
    let mut scaled = vecs.clone();
    for (j, lam) in vals.iter().enumerate() {
        let phase = C64::from_polar(1.0, -lam * t);
        for x in scaled.column_mut(j).iter_mut() {
            *x *= phase;
        }
    }
    scaled * vecs.adjoint()
}

/// General matrix exponential `exp(A)` by scaling and squaring of a Taylor series.
pub fn expm(a: &Operator) -> Operator {
    let dim = a.nrows();
    let norm = one_norm(a);
    let mut squarings = 0u32;
    if norm > 0.5 {
        squarings = (norm / 0.5).log2().ceil() as u32;
    }
    let scaled = a / C64::from(2f64.powi(squarings as i32));
    let mut result = identity(dim);
    let mut term = identity(dim);
    for k in 1..40 {
        term = &term * &scaled / C64::from(k as f64);
        result += &term;
        if max_abs(&term) < 1e-18 * max_abs(&result).max(1.0) {
            break;
        }
    }
    for _ in 0..squarings {
        result = &result * &result;
    }
    result
}

/// Action `exp(t A) v` by sub-stepped Taylor series, without forming the exponential.
pub fn expm_multiply(a: &Operator, v: &DVector<C64>, t: f64) -> DVector<C64> {
    let norm = one_norm(a) * t.abs();
    let steps = (norm / 0.5).ceil().max(1.0) as usize;
    let h = t / steps as f64;
    let mut out = v.clone();
    for _ in 0..steps {
        let mut term = out.clone();
        let mut acc = out.clone();
        for k in 1..60 {
            term = (a * &term) * C64::from(h / k as f64);
            acc += &term;
            if term.norm() <= 1e-17 * acc.norm().max(1e-300) {
                break;
            }
        }
        out = acc;
    }
    out
}

/// Bit position (from the least significant end) of `qubit` in an `n_qubits` register.
/// Qubit 0 is the most significant bit.
#[inline]
pub fn bit_position(qubit: usize, n_qubits: usize) -> usize {
    n_qubits - 1 - qubit
}

/// Checks targets are distinct and in range and that `op` acts on `2^k` dimensions.
pub fn check_targets(op_dim: usize, targets: &[usize], n_qubits: usize) -> Result<()> {
    let expected = 1usize << targets.len();
    if op_dim != expected {
        return Err(Error::DimensionMismatch {
            expected,
            found: op_dim,
        });
    }
    for (i, &q) in targets.iter().enumerate() {
        if q >= n_qubits {
            return Err(Error::QubitOutOfRange { index: q, n_qubits });
        }
        if targets[..i].contains(&q) {
            return Err(Error::DuplicateTarget(q));
        }
    }
    Ok(())
}

/// Index layout of a local operator inside the register.
struct LocalLayout {
    mask: usize,
    offsets: Vec<usize>,
}

impl LocalLayout {
    fn new(n_qubits: usize, targets: &[usize]) -> Self {
        let k = targets.len();
        let offsets = (0..1usize << k)
            .map(|a| {
                targets
                    .iter()
                    .enumerate()
                    .filter(|(t, _)| (a >> (k - 1 - t)) & 1 == 1)
                    .fold(0, |off, (_, &q)| off | 1 << bit_position(q, n_qubits))
            })
            .collect();
        let mask = targets.iter().fold(0, |m, &q| m | 1 << bit_position(q, n_qubits));
        Self { mask, offsets }
    }

    fn apply(&self, amps: &mut [C64], op: &Operator, gathered: &mut [C64]) {
        for base in 0..amps.len() {
            if base & self.mask != 0 {
                continue;
            }
            for (g, off) in gathered.iter_mut().zip(&self.offsets) {
                *g = amps[base + off];
            }
            for (a, off) in self.offsets.iter().enumerate() {
                let mut acc = ZERO;
                for (b, g) in gathered.iter().enumerate() {
                    acc += op[(a, b)] * g;
                }
                amps[base + off] = acc;
            }
        }
    }
}

/// Applies a `2^k x 2^k` operator to `targets` of an amplitude slice in place.
///
/// `targets[0]` is the most significant bit of the local operator index. Targets are
/// assumed validated by [`check_targets`].
pub fn apply_local(amps: &mut [C64], n_qubits: usize, op: &Operator, targets: &[usize]) {
    let layout = LocalLayout::new(n_qubits, targets);
    let mut gathered = vec![ZERO; layout.offsets.len()];
    layout.apply(amps, op, &mut gathered);
}

/// Left-multiplies every column of `m` by the operator embedded on `targets`.
pub fn apply_local_to_columns(m: &mut Operator, n_qubits: usize, op: &Operator, targets: &[usize]) {
    let rows = m.nrows();
    let layout = LocalLayout::new(n_qubits, targets);
    let mut gathered = vec![ZERO; layout.offsets.len()];
    for col in m.as_mut_slice().chunks_mut(rows) {
        layout.apply(col, op, &mut gathered);
    }
}

/// Full `2^n x 2^n` matrix of `op` acting on `targets`, identity elsewhere.
pub fn embed(op: &Operator, targets: &[usize], n_qubits: usize) -> Result<Operator> {
    check_targets(op.nrows(), targets, n_qubits)?;
    let mut m = identity(1 << n_qubits);
    apply_local_to_columns(&mut m, n_qubits, op, targets);
    Ok(m)
}
