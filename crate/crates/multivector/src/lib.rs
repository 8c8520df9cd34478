//! Graded skew-symmetric calculus on a coordinate chart.
//!
//! Conventions: the right contraction `ι_β X` inserts `β` into the last
//! argument slot, `(ι_β X)(α₁,…,α_{m−1}) = X(α₁,…,α_{m−1},β)`, and
//! `ι_{α∧β} = ι_α ι_β`. All other signs follow from these two choices.

mod calculus;
pub mod random;
mod skew;

pub use calculus::{apply, contract_right, lie_derivative, sn_bracket, wedge, Twisted};
pub use skew::{Covector, Form, MultiVector, MvError, Skew, Vector};
