//! Hamiltonian dynamics on Poisson, Jacobi, Nambu and generalized structures.
//!
//! [`HamiltonianSystem`] pairs a structure with its Hamiltonians and builds
//! the Hamiltonian vector field, [`integrate`] runs a fixed-step RK4 flow,
//! and [`run_diagnostics`] checks conservation, dissipation, homomorphism
//! and bi-Hamiltonian laws, symbolically where the law is an identity and
//! along the trajectory where it is a statement about time evolution.

mod diagnostics;
mod integrate;
mod system;

pub use diagnostics::{run_diagnostics, DiagnosticsOptions, DiagnosticsReport, Law, LawResult};
pub use integrate::{integrate, integrate_field, Trajectory};
pub use system::{field_of, hamiltonian_vector_field, DynamicsError, HamiltonianSystem};
