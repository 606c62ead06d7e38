//! Cohn–Elkies linear-programming bounds for sphere packing, with zero-set
//! analysis of candidate functions and operators that improve them.

// `!(x > 0.0)` guards are meant to reject NaN as well
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod geometry;
pub mod improve;
pub mod lp;
pub mod radial;
mod scan;
pub mod special;
pub mod zeros;

pub use error::{Error, ErrorClass, Result};
