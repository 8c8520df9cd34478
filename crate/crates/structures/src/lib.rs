//! Bracket structures built from multivector data.
//!
//! A [`Candidate`] pairs a main tensor `η` (and, for Jacobi-type kinds, a
//! companion `𝓔`) with the kind it claims to be. [`verify`] checks the
//! defining identities of that kind; [`make_bracket`] evaluates the induced
//! k-ary bracket on symbolic functions.

mod bracket;
mod candidate;
mod cascade;
mod family;
mod report;
mod verify;

pub use bracket::{first_order_residual, fundamental_identity_residual, make_bracket, Bracket};
pub use candidate::{Candidate, Kind, StructureError};
pub use cascade::{
    cascade_contract, cascade_stepwise, compatibility, contract_step, fix_entries, jacobi_identities, nj_jacobi_pairs,
    JacobiPair,
};
pub use family::FunctionFamily;
pub use report::{IdentityResult, VerificationReport, Witness};
pub use verify::{verify, verify_with, VerifyOptions};
