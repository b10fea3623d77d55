//! Generating operator `T` for the Rankin–Cohen brackets.
//!
//! `T f(z, t) = (2πi)^{-2} ∮∮ f(ζ1, ζ2) / Q dζ1 dζ2` with
//! `Q = (ζ1 − z)(ζ2 − z) + t(ζ1 − ζ2)`, whose `t`-Taylor coefficients are the
//! brackets `R_ℓ f / ℓ!`. The crate evaluates `T` by contour quadrature,
//! computes brackets from exact Taylor jets, and checks the surrounding
//! identities numerically.

pub mod brackets;
pub mod contour;
pub mod covariance;
pub mod error;
pub mod genop;
pub mod holo;
pub mod hardy;
pub mod holography;
pub mod numerics;
pub mod pde;
pub mod residues;

pub use error::{Error, Result};
pub mod verify;
