//! Quantum-dot-array quantum walks driven by STIRAP pulse sequences.
//!
//! Coins are double 3-photon STIRAP processes acting on `(|↑⟩, |↓⟩)` of one
//! dot, translations are 2-photon STIRAP transfers through a shared
//! auxiliary level. Everything is in meV and ps.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod dotmodel;
pub mod error;
pub mod noise;
pub mod optimizer;
pub mod propagator;
pub mod pulses;
pub mod stirap;
pub mod units;
pub mod walk;

pub use error::{Error, Result};
pub use units::HBAR;
