//! Jump codes, recovery, flip and swap decoupling, and permutation-averaged constants.

mod code;
mod constants;
mod permutation;

pub use code::{
    apply_jump, build_code, dfs_projector, flip_operator, flip_preserves_code, lower, recover, recovery_operator,
    recovery_sequence, CodeVariant, JumpCode,
};
pub use constants::{
    c3_for_state, code_constants, permuted_energy_moments, zz_expectation, zzzz_bias, CodeConstants,
    EnergyMoments,
};
pub use permutation::{
    for_each_permutation, permutation_average, permutation_average_sampled, permutation_mean, random_swap_layer,
    Permutation, PermutationTracker, EXACT_AVERAGE_MAX_QUBITS,
};
