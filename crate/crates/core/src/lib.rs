#![allow(clippy::needless_range_loop)]

pub mod changevar;
pub mod cli;
pub mod chart;
pub mod deform;
pub mod document;
pub mod error;
pub mod fixtures;
pub mod lift;
pub mod multivec;
pub mod poisson;
pub mod random;
pub mod symexpr;

pub use error::{Error, Result};
