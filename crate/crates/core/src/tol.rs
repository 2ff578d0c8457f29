//! Numerical tolerances shared by every module.

/// Unitarity of constructed operators, `max |U†U - I|`.
pub const UNITARITY: f64 = 1e-10;
/// Hermiticity of constructed Hamiltonians, `max |H - H†|`.
pub const HERMITICITY: f64 = 1e-12;
/// Norm preservation of state vectors under unitary evolution.
pub const NORM: f64 = 1e-10;
/// Relative trace threshold above which a perturbation counts as not traceless.
pub const TRACELESS: f64 = 1e-10;
/// Largest register the dense kernels accept.
pub const MAX_QUBITS: usize = 14;
