//! Computational model of genus-2 translation surfaces with a single cone
//! point and of the index-6 subgroup of Sp(4, Z) generated by the homology
//! actions of their elementary moves.
//!
//! The crate has four mathematical layers:
//!
//! - [`symplectic`]: exact integer 4x4 matrices over the form diag(J, J),
//!   with the named generators as constants;
//! - [`gamma`]: the subgroup generated by {T, S, R} of Sp(4, Z) - mod-2
//!   orbits, a membership oracle through the order-720 quotient, the six
//!   cosets and their action table, and the generating word identities;
//! - [`theta`]: first-order theta functions with integer characteristics,
//!   evaluated with a certified truncation bound;
//! - [`hyperelliptic`]: period matrices of hyperelliptic curves by contour
//!   integration, Abel images of ramification points as half-periods, and
//!   branch-point recovery from the period matrix by theta quotients;
//! - [`flat`]: surfaces built from three parallelograms, the T/S/R moves,
//!   and the check that their homology matrices reproduce the geometric
//!   action on period vectors.

pub mod flat;
pub mod gamma;
pub mod hyperelliptic;
pub mod symplectic;
pub mod theta;

pub use num_complex::Complex64;
