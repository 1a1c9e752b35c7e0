//! Desk-scale verification of Bertini-type density theorems: the proportion
//! of global sections whose divisor is smooth (over a finite field) or regular
//! (over Spec Z), the zeta values those proportions converge to, and the
//! explicit error bounds along the way.
//!
//! Layers, bottom up:
//!
//! - [`ff`]: F_p, F_{p^e}, GR(p^2, e), rank and kernel computations.
//! - [`geom`]: homogeneous forms, projective schemes, closed points,
//!   Jacobian smoothness.
//! - [`zeta`]: point-count tables, truncated zeta products, bound checks.
//! - [`fiber`]: mod-p^2 classification of points on a divisor, jet maps and
//!   fiber densities.
//! - [`arith`]: integer sections, equidistribution audits, multi-fiber
//!   experiments and the monic-polynomial (maximal order) track.
//! - [`cli`]: configuration, dispatch and report emission for the `bertini`
//!   binary.

pub mod error;
pub mod ff;
pub mod geom;
pub mod zeta;
pub mod fiber;
pub mod arith;
pub mod sampling;
pub mod cli;

pub use error::{Error, Result};
