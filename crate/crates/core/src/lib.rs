//! Biquadratic Bezier approximation of the unit sphere.
//!
//! The building block is a tensor-product quadratic Bezier patch over
//! `[-1,1]^2` whose 3x3 control net keeps the four corners on the unit sphere
//! and respects all symmetries of the underlying spherical square (or
//! rectangle). That leaves two free shape parameters: an edge weight `alpha`
//! and a center height `beta`.
//!
//! * [`patch`] defines the nets and the radial error measures together with
//!   closed forms of the error restricted to a patch side and diagonal.
//! * [`square`] finds the parameter pair minimizing the maximum radial error
//!   over a square patch (a two-variable Newton solve on the equioscillation
//!   conditions), plus the bracket and interior-extremum certificates that
//!   justify checking only the side and diagonal.
//! * [`assembly`] stitches optimized patches into 2- and 6-patch sphere
//!   covers and builds the tangent-continuous 6-patch variant.
//! * [`rect`] explores rectangular patches, where a whole triangle of
//!   parameter pairs attains the optimal error.
//! * [`oracle`] is a brute-force grid minimax used to validate the solvers
//!   through an independent evaluation path.
#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

#[cfg(all(not(feature = "std"), not(feature = "libm")))]
compile_error!("quadsphere requires either the `std` or the `libm` feature");

mod math;
mod scan;

pub mod assembly;
pub mod error;
pub mod oracle;
pub mod patch;
pub mod rect;
pub mod square;
pub mod vec3;

pub use error::{Error, Result};
pub use patch::{ControlNet, ErrorKind, RectParams, SquareParams};
