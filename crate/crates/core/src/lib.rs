//! Numerical seminorms `sup_𝓛 ‖Lf‖` for big-O function spaces and estimates
//! of the distance to their little-o subspaces, computed as the limsup of
//! `‖Lf‖` at infinity.
//!
//! Six spaces are covered: BMO on the circle, the Bloch space, `Q_K`
//! spaces, weighted sup spaces, Hölder spaces and rectangular BMO on the
//! torus.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod approx;
pub mod cli;
pub mod distance;
pub mod error;
pub mod family;
pub mod funcrep;
pub mod spaces;

pub use error::{Error, Result};
