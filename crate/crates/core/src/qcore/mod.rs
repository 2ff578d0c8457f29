//! Dense state-vector and operator kernel.

pub mod fidelity;
pub mod gates;
pub mod linalg;
pub mod pauli;
pub mod state;

pub use fidelity::{average_fidelity_from_entanglement, entanglement_fidelity, fidelity_amplitude};
pub use linalg::{operator_two_norm, Operator, C64};
pub use pauli::{Pauli, PauliString, Phase};
pub use state::StateVector;
