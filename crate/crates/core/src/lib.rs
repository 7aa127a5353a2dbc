//! Finite-dimensional quantum clocks.
//!
//! A clock is a Hamiltonian with `p + 1` levels whose gaps are rational
//! multiples of each other, so the evolution is periodic with period `T`.
//! The crate builds such spectra, constructs time states and the covariant
//! time POVM, samples readings, and evaluates the relativistic limits on how
//! finely the dial can be divided and read.

pub mod bounds;
pub mod cli;
pub mod clockstates;
pub mod error;
pub mod measurement;
pub mod spectrum;
pub mod units;

mod linalg;
mod optimize;

pub use error::{ClockError, Result};
pub use units::{ConstantsSet, UnitMode};
