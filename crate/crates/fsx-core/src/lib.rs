//! Calculus engine for quasi-normed ideal function spaces on (0,1) and (0,∞).
//!
//! The crate has two layers that deliberately overlap:
//!
//! * a **numeric kernel** over exact step functions ([`stepfn`]), closed-form
//!   Hardy-type transforms ([`operators`]) and quasi-norm evaluation for a
//!   catalog of space families ([`norms`]);
//! * a **symbolic layer** ([`algebra`], [`expr`]) that rewrites space
//!   expressions — duals, pointwise products, multiplier spaces,
//!   symmetrizations, convexifications, Cesàro/Tandori constructions — using
//!   index arithmetic with explicit hypothesis gates.
//!
//! [`factorize`] produces explicit factorizations through product spaces and
//! [`verify`] cross-checks the two layers against each other: every symbolic
//! identity is certified numerically on seeded function banks, and the known
//! failure modes (dilation blow-ups, symmetrization gaps, non-factorizable
//! pairs) are reproduced as regression scenarios.

pub mod algebra;
pub mod closedform;
pub mod error;
pub mod expr;
pub mod factorize;
pub mod norms;
pub mod operators;
pub mod stepfn;
pub mod verify;

pub use error::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
