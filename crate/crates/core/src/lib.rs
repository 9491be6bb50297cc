#![allow(clippy::needless_range_loop, clippy::mutable_key_type, clippy::too_many_arguments)]

//! Exact computations with finite rings and the ordered VIC(R) morphism calculus.

pub mod error;
pub mod io;
pub mod noether;
pub mod oracle;
pub mod ordering;
pub mod ovic;
pub mod ring;
pub mod selftest;
pub mod wedderburn;

pub use error::{Error, Result};
