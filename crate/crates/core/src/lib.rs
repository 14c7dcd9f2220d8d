// Negated float comparisons are deliberate: they reject NaN along with the
// out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod atoms;
pub mod constants;
pub mod error;
pub mod greens;
pub mod potentials;
pub mod quadrature;
pub mod specfun;
pub mod verify;

pub use error::{Error, Result};
