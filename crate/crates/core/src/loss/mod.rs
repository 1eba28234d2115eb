//! Seeded Monte Carlo runs of B92 and BB84 over a lossy line.
//!
//! Signals are single qubits. Bob's B92 receiver is the zero-error
//! (unambiguous discrimination) measurement, so an honest noiseless run sifts
//! a fraction `1 − s` of the pulses; BB84 sifts on basis agreement. Loss,
//! the optional pre-detection filter, and detector efficiency are independent
//! Bernoulli survivals, and a dark count produces a random conclusive click.
//!
//! Every pulse draws from its own ChaCha stream selected by the pulse index,
//! so runs can be split across workers and merged without changing results.

mod config;
mod run;
mod tallies;

pub use config::{AttackStrategy, ConfigWarning, Protocol, ProtocolConfig};
pub use run::{loss_sweep, run_protocol, simulate_pulses, sweep_seed};
pub use tallies::{perceived_vs_real_rates, Counts, RateReport, RunTallies};

use crate::error::{Error, Result};
use crate::math;

/// Largest transmittance at which B92 under unambiguous-discrimination resend
/// still matches the honest sifted rate with zero errors: `η* = 1 − s`.
///
/// Eve identifies the state with probability `1 − s` and forwards it over a
/// lossless line, while the honest sifted rate scales with `η`. Detector
/// efficiency and the pre-detection filter act on both paths alike.
pub fn breach_threshold(overlap_s: f64, config: &ProtocolConfig) -> Result<f64> {
    if config.protocol != Protocol::B92 {
        return Err(Error::InvalidConfig(
            "breach threshold is defined for B92 only".into(),
        ));
    }
    if !(0.0..1.0).contains(&overlap_s) {
        return Err(Error::OutOfRange {
            name: "overlap_s",
            value: overlap_s,
            range: "[0, 1)",
        });
    }
    Ok(1.0 - overlap_s)
}

/// Best success probability for cloning one of two equiprobable pure states
/// with overlap `s` exactly: `1 / (1 + s)`.
pub fn cloning_success(overlap_s: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&overlap_s) {
        return Err(Error::OutOfRange {
            name: "overlap_s",
            value: overlap_s,
            range: "[0, 1]",
        });
    }
    Ok(1.0 / (1.0 + overlap_s))
}

/// `(rate difference, standard error of the difference)` of two runs.
fn rate_gap(honest: &RunTallies, attacked: &RunTallies) -> (f64, f64) {
    let sh = honest.detection_rate_sigma();
    let sa = attacked.detection_rate_sigma();
    (
        honest.detection_rate - attacked.detection_rate,
        math::sqrt(sh * sh + sa * sa),
    )
}

/// The attacked sifted rate falls short of the honest one by more than
/// `sigmas` standard errors.
pub fn detectable_rate_deficit(honest: &RunTallies, attacked: &RunTallies, sigmas: f64) -> bool {
    let (gap, sigma) = rate_gap(honest, attacked);
    gap > sigmas * sigma
}

/// The attacked sifted rate is at least the honest one, up to `sigmas` standard errors.
pub fn rate_covered(honest: &RunTallies, attacked: &RunTallies, sigmas: f64) -> bool {
    let (gap, sigma) = rate_gap(honest, attacked);
    gap <= sigmas * sigma
}
