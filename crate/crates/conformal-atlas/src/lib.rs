//! Locally conformal Poisson, Nambu–Poisson and generalized Poisson atlases.
//!
//! Each chart carries a local tensor `η_α` and a potential `σ_α`. On
//! overlaps the rescaled tensors `e^{−wσ_α}η_α` (weight `w = k − 1`) must
//! agree and the Lee forms `dσ_α` must coincide. Gluing yields a global
//! tensor `η`, the Lee form `θ` and the companion `𝓔 = (−1)^k ι_θ η`, a
//! Jacobi-type pair. Charts share one coordinate system and are boxes.

mod atlas;
mod contract;
mod file;
mod glue;
mod lift;

pub use atlas::{AtlasError, AtlasOptions, Chart, ConformalAtlas, TransitionScalar};
pub use contract::{contracted_pair, contracted_pair_literal, contracted_pair_twisted, Fixer};
pub use file::{AtlasDoc, ChartDoc};
pub use glue::{companion_of, induced_bracket, GlobalPair, Piece};
pub use lift::{lift_to_4gp, Lift};
