//! Quantum Fourier transform from Hadamards, controlled phases and terminal swaps.

use std::f64::consts::PI;

use super::circuit::{Gate, GateSequence};
use crate::error::Result;
use crate::qcore::gates::{controlled_phase, hadamard, swap};
use crate::qcore::linalg::{Operator, C64};

fn qft_core(n_qubits: usize) -> Result<GateSequence> {
    let mut seq = GateSequence::new(n_qubits)?;
    for i in 0..n_qubits {
        seq.push(Gate::local(format!("H{i}"), hadamard(), vec![i]))?;
        for k in (i + 1)..n_qubits {
            let phi = PI / (1u64 << (k - i)) as f64;
            seq.push(Gate::local(format!("CP{k},{i}"), controlled_phase(phi), vec![k, i]))?;
        }
    }
    Ok(seq)
}

/// QFT whose product is exactly the DFT matrix `N^{-1/2} exp(2 pi i jk / N)`.
///
/// Gate count is `n(n+1)/2` plus `floor(n/2)` output swaps, i.e. `floor(n(n+2)/2)`.
pub fn build_qft(n_qubits: usize) -> Result<GateSequence> {
    let mut seq = qft_core(n_qubits)?;
    for i in 0..n_qubits / 2 {
        seq.push(Gate::local(format!("SWAP{i},{}", n_qubits - 1 - i), swap(), vec![i, n_qubits - 1 - i]))?;
    }
    Ok(seq)
}

/// QFT without the output swaps: row `bit_reverse(j)` of the product is row `j` of the DFT.
pub fn build_qft_unswapped(n_qubits: usize) -> Result<GateSequence> {
    qft_core(n_qubits)
}

pub fn qft_gate_count(n_qubits: usize) -> usize {
    n_qubits * (n_qubits + 2) / 2
}

pub fn bit_reverse(index: usize, n_bits: usize) -> usize {
    (0..n_bits).fold(0, |acc, b| acc | ((index >> b) & 1) << (n_bits - 1 - b))
}

/// Dense DFT matrix, the reference for the circuit.
pub fn dft_matrix(dim: usize) -> Operator {
    let norm = 1.0 / (dim as f64).sqrt();
    Operator::from_fn(dim, dim, |j, k| {
        let phase = 2.0 * PI * ((j * k) % dim) as f64 / dim as f64;
        C64::from_polar(norm, phase)
    })
}
