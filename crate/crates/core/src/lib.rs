//! Exact computation of MacLane homology of finite rings.
//!
//! The pipeline is: finite rings and bimodules ([`abgroup`]) feed the cubical
//! Q-construction ([`qcomplex`]), whose chain algebra is placed in a cyclic bar
//! construction generated from the category of sets with ordered fibers
//! ([`abop`]) and totalized ([`hochschild`]). All homology is computed over the
//! integers through Smith normal form ([`intlinalg`]).

pub mod abgroup;
pub mod abop;
pub mod cache;
pub mod cli;
pub mod error;
pub mod hochschild;
pub mod intlinalg;
pub mod qcomplex;
pub mod selftest;

pub use error::{Error, Result};
