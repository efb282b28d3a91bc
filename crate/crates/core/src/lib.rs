//! Window-exact computations for labeled subshifts.
//!
//! Labels are hereditary sets of ℕ-vectors. Each label `M` determines a point
//! `x[M] ∈ {0,1}^ℤ` through a signed-digit numeration built from an expanding
//! function, and the dynamics of its orbit closure is read off the label.

pub mod analysis;
pub mod cli;
pub mod expanding;
pub mod labels;
pub mod ordinals;
pub mod subshift;
pub mod zoo;

pub use expanding::{ExpandingSystem, Expansion, IpMode};
pub use labels::{FiniteLabel, Label, NVector};
