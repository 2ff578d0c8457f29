//! Gate sequences, the quantum Fourier transform, Pauli-random rewriting, correlation
//! matrices and the second-order fidelity amplitude.

pub mod circuit;
pub mod correlation;
pub mod parec;
pub mod perturbative;
pub mod qft;

pub use circuit::{Gate, GateOp, GateSequence};
pub use correlation::{
    correlation_matrix_for, correlation_matrix_gue_average, parec_correlation_average, parec_expected_fidelity,
    parec_expected_pattern, parec_fidelity_bound, CorrelationMatrix, Normalization, ParecCorrelation,
};
pub use parec::{parec_mean_fidelity_trace, parec_transform, static_error_fidelity_trace, ParecCircuit};
pub use perturbative::{
    exact_amplitude, fidelity_amplitude_second_order, perturbed_iterated_product, perturbed_product,
    static_fidelity_second_order, IterationPerturbation, SecondOrderTerms,
};
pub use qft::{build_qft, build_qft_unswapped, dft_matrix};
