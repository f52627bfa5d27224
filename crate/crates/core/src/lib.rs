//! Exact and p-adic machinery for reconstructing modular-form and formal-group
//! objects and checking Atkin–Swinnerton-Dyer type congruences on them.
//!
//! The crate is `no_std` (it needs `alloc`). Everything that touches files,
//! threads or the terminal lives in the `asd-forge` companion crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod arith;
pub mod asd;
pub mod curves;
pub mod error;
pub mod fgl;
pub mod hyp;
pub mod odekit;
pub mod padic;
pub mod qforms;
pub mod ring;
pub mod series;

pub use error::{Error, Result};
pub use ring::{CoeffRing, Integers, ModPrimePower, QuadraticField, Rationals};
pub use series::PuiseuxSeries;
