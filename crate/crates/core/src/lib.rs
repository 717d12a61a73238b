//! Reduction of unconstrained binary quadratic programming to a linear
//! program over lifted pair variables, with an exact simplex solver and a
//! brute-force oracle to compare against.

#![allow(clippy::needless_range_loop)]

pub mod campaign;
pub mod cli;
pub mod error;
pub mod instance;
pub mod layout;
pub mod lift;
pub mod lpsolve;
pub mod oracle;
pub mod reduction;
pub mod scalar;
pub mod selftest;

pub use error::{Error, Result};
