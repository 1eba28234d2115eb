use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Protocol {
    B92,
    BB84,
}

/// Parameters of one simulated protocol run.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(deny_unknown_fields))]
pub struct ProtocolConfig {
    pub protocol: Protocol,
    /// `⟨ψ₀|ψ₁⟩` of the B92 signal states. BB84 always uses its two
    /// conjugate bases and ignores this value.
    pub overlap_s: f64,
    pub transmittance_eta: f64,
    pub detector_efficiency: f64,
    pub dark_count_prob: f64,
    /// Success probability of the receiver's pre-detection filter; 1 disables it.
    pub pre_detection_success: f64,
    pub n_pulses: u64,
    pub seed: u64,
}

/// Non-fatal configuration findings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ConfigWarning {
    /// A pre-detection stage cannot herald arrivals more often than photons arrive.
    PreDetectionExceedsTransmittance { pre_detection: f64, eta: f64 },
}

impl core::fmt::Display for ConfigWarning {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            ConfigWarning::PreDetectionExceedsTransmittance { pre_detection, eta } => write!(
                f,
                "pre_detection_success = {pre_detection} exceeds transmittance {eta}"
            ),
        }
    }
}

fn in_range(name: &str, value: f64, ok: bool, range: &str) -> Result<()> {
    if ok && value.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidConfig(format!("{name} = {value} outside {range}")))
    }
}

impl ProtocolConfig {
    /// Noiseless defaults: perfect detector, no dark counts, no pre-detection, 10⁵ pulses.
    pub fn new(protocol: Protocol, overlap_s: f64, transmittance_eta: f64) -> Self {
        Self {
            protocol,
            overlap_s,
            transmittance_eta,
            detector_efficiency: 1.0,
            dark_count_prob: 0.0,
            pre_detection_success: 1.0,
            n_pulses: 100_000,
            seed: 0,
        }
    }

    pub fn b92(overlap_s: f64, transmittance_eta: f64) -> Self {
        Self::new(Protocol::B92, overlap_s, transmittance_eta)
    }

    pub fn bb84(transmittance_eta: f64) -> Self {
        Self::new(Protocol::BB84, core::f64::consts::FRAC_1_SQRT_2, transmittance_eta)
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_pulses(mut self, n_pulses: u64) -> Self {
        self.n_pulses = n_pulses;
        self
    }

    pub fn validate(&self) -> Result<Vec<ConfigWarning>> {
        let s = self.overlap_s;
        in_range("overlap_s", s, (0.0..1.0).contains(&s), "[0, 1)")?;
        let eta = self.transmittance_eta;
        in_range("transmittance_eta", eta, eta > 0.0 && eta <= 1.0, "(0, 1]")?;
        let d = self.detector_efficiency;
        in_range("detector_efficiency", d, d > 0.0 && d <= 1.0, "(0, 1]")?;
        let dc = self.dark_count_prob;
        in_range("dark_count_prob", dc, (0.0..=1.0).contains(&dc), "[0, 1]")?;
        let pre = self.pre_detection_success;
        in_range("pre_detection_success", pre, pre > 0.0 && pre <= 1.0, "(0, 1]")?;
        if self.n_pulses == 0 {
            return Err(Error::InvalidConfig("n_pulses must be at least 1".into()));
        }
        let mut warnings = Vec::new();
        if pre < 1.0 && pre > eta {
            warnings.push(ConfigWarning::PreDetectionExceedsTransmittance {
                pre_detection: pre,
                eta,
            });
        }
        Ok(warnings)
    }
}

/// Eve's strategy on the line between Alice and Bob. Attacks that resend
/// use a lossless line of their own.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "kind", rename_all = "snake_case"))]
pub enum AttackStrategy {
    /// Honest lossy channel.
    None,
    /// Measure and always resend. BB84: random basis. B92: unambiguous
    /// discrimination, resending a random guess when inconclusive. Pulses
    /// not intercepted take the lossy channel.
    InterceptResend {
        #[cfg_attr(feature = "serde", serde(default = "one"))]
        intercept_fraction: f64,
    },
    /// B92 only: unambiguous discrimination, resend on success, vacuum otherwise.
    UsdResend,
    /// B92 only: probabilistic exact cloning, keep one copy and resend the
    /// other on success, vacuum otherwise.
    CloningResend,
}

#[cfg(feature = "serde")]
fn one() -> f64 {
    1.0
}

impl AttackStrategy {
    pub fn name(&self) -> &'static str {
        match self {
            AttackStrategy::None => "none",
            AttackStrategy::InterceptResend { .. } => "intercept_resend",
            AttackStrategy::UsdResend => "usd_resend",
            AttackStrategy::CloningResend => "cloning_resend",
        }
    }

    pub fn validate(&self, protocol: Protocol) -> Result<()> {
        match (self, protocol) {
            (AttackStrategy::InterceptResend { intercept_fraction: f }, _) => {
                in_range("intercept_fraction", *f, (0.0..=1.0).contains(f), "[0, 1]")
            }
            (AttackStrategy::UsdResend | AttackStrategy::CloningResend, Protocol::BB84) => {
                Err(Error::InvalidConfig(format!(
                    "{} needs two signal states; not available for BB84",
                    self.name()
                )))
            }
            _ => Ok(()),
        }
    }
}
