//! Numerical core for the porous-medium equation with a bistable or
//! monostable reaction term,
//!
//! ```text
//! rho_t = (rho^m)_xx + rho f(p),    p = m/(m-1) rho^(m-1),
//! ```
//!
//! in one space dimension, together with the objects that govern its
//! incompressible (`m -> infinity`) limit: the pressure boundary-value problem
//! `-u'' = f(u)` on `(0, L)` and the travelling waves.
//!
//! The crate is `no_std` (it needs `alloc`); file formats, the command line and
//! the multi-run experiments live in the `pmelab` crate.

#![no_std]

extern crate alloc;

pub mod elliptic;
pub mod error;
pub mod numeric;
pub mod pme;
pub mod reaction;
pub mod waves;

pub use error::{Error, Result};
pub use reaction::{CriticalLengths, ReactionClass, ReactionKind, ReactionModel};
