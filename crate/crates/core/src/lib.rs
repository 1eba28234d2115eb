//! Quantitative audit of QKD security criteria.
//!
//! The crate works on small, explicit objects: distributions over n-bit keys,
//! density operators of dimension at most 64, binary hash matrices, and a
//! seeded single-photon channel simulator. Everything here is `no_std` with
//! `alloc`; file formats and the command line live in the `qkd-audit` crate.
//!
//! * [`dist`] guessing probability, variational distance, subset gaps, conditioning
//! * [`extremal`] worst-case distributions behind entropy and distance bounds
//! * [`quantum`] trace distance, measurements, couplings, unambiguous discrimination
//! * [`pa`] linear hashing over GF(2) and its effect on the guessing probability
//! * [`loss`] lossy-channel protocol runs and intercept-resend style attacks
#![no_std]

extern crate alloc;

pub mod dist;
pub mod error;
pub mod extremal;
pub mod loss;
pub mod pa;
pub mod quantum;
pub mod random;

mod math;

#[cfg(feature = "serde")]
mod serde_impls;

pub use error::{Error, Result};
pub use math::{binary_entropy, neumaier_sum};
