#![cfg_attr(not(test), no_std)]
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]
extern crate alloc;

pub mod error;
pub mod exactpoly;
pub mod grassmann;
pub mod hypersurface;
pub mod quotient;
pub mod reallocus;
pub mod rng;
pub mod scalar;

pub use error::{Error, Result};
pub use num_complex;
pub use num_rational;
