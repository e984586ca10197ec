#![allow(clippy::needless_range_loop, clippy::neg_cmp_op_on_partial_ord, clippy::should_implement_trait)]

pub mod dirac;
pub mod error;
pub mod fieldlang;
pub mod gauge;
pub mod geometry;
pub mod harness;
pub mod linalg;
pub mod operator;
pub mod residual;

pub use error::{Error, Result};
