use crate::error::{Error, Result};
use crate::math::{self, binary_entropy, neg_log2, xlog2x};

/// Additive counters of a run.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Counts {
    pub pulses_sent: u64,
    /// Receiver clicks, including dark counts and inconclusive results.
    pub pulses_detected: u64,
    pub sifted_bits: u64,
    pub error_bits: u64,
    /// Sifted bits whose value Eve holds with certainty.
    pub eve_known_bits: u64,
    /// `[a][b]` counts of Alice's and Bob's sifted bits.
    pub ab_counts: [[u64; 2]; 2],
    /// Alice's bit values among the sifted bits Eve does not know.
    pub unknown_a_counts: [u64; 2],
}

impl Counts {
    pub(crate) fn record_sifted(&mut self, a: bool, b: bool, eve_knows: bool) {
        self.sifted_bits += 1;
        self.error_bits += u64::from(a != b);
        self.ab_counts[usize::from(a)][usize::from(b)] += 1;
        if eve_knows {
            self.eve_known_bits += 1;
        } else {
            self.unknown_a_counts[usize::from(a)] += 1;
        }
    }

    pub fn merge(&mut self, other: &Counts) {
        self.pulses_sent += other.pulses_sent;
        self.pulses_detected += other.pulses_detected;
        self.sifted_bits += other.sifted_bits;
        self.error_bits += other.error_bits;
        self.eve_known_bits += other.eve_known_bits;
        for (row, orow) in self.ab_counts.iter_mut().zip(&other.ab_counts) {
            for (c, oc) in row.iter_mut().zip(orow) {
                *c += oc;
            }
        }
        for (c, oc) in self.unknown_a_counts.iter_mut().zip(&other.unknown_a_counts) {
            *c += oc;
        }
    }
}

/// Counters of a run plus the rates derived from them.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RunTallies {
    #[cfg_attr(feature = "serde", serde(flatten))]
    pub counts: Counts,
    /// `error_bits / sifted_bits` (0 without sifted bits).
    pub qber: f64,
    /// `sifted_bits / pulses_sent`
    pub detection_rate: f64,
    /// `eve_known_bits / sifted_bits`
    pub eve_known_fraction: f64,
    /// Rate the users would claim from the observed error rate alone.
    pub perceived_rate: f64,
    /// `−log2` of Eve's per-bit guessing probability.
    pub real_rate_exponent: f64,
}

fn ratio(num: u64, den: u64) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

impl RunTallies {
    pub fn from_counts(counts: Counts) -> Self {
        let mut tallies = Self {
            counts,
            qber: ratio(counts.error_bits, counts.sifted_bits),
            detection_rate: ratio(counts.sifted_bits, counts.pulses_sent),
            eve_known_fraction: ratio(counts.eve_known_bits, counts.sifted_bits),
            perceived_rate: 0.0,
            real_rate_exponent: 0.0,
        };
        if let Ok(report) = perceived_vs_real_rates(&tallies) {
            tallies.perceived_rate = report.perceived_rate;
            tallies.real_rate_exponent = report.real_exponent;
        }
        tallies
    }

    pub fn pulses_sent(&self) -> u64 {
        self.counts.pulses_sent
    }

    pub fn sifted_bits(&self) -> u64 {
        self.counts.sifted_bits
    }

    pub fn error_bits(&self) -> u64 {
        self.counts.error_bits
    }

    /// Binomial standard error of `detection_rate`.
    pub fn detection_rate_sigma(&self) -> f64 {
        let n = self.counts.pulses_sent as f64;
        math::sqrt(self.detection_rate * (1.0 - self.detection_rate) / n)
    }
}

/// Both columns of the key-rate comparison, with the entropies behind them.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RateReport {
    /// Empirical `H(A|B)` of the sifted bits.
    pub h_a_given_b: f64,
    /// `H(A|E)` as the users infer it from disturbance: `1 − h(qber)`.
    pub h_a_given_e_perceived: f64,
    /// Empirical `H(A|E)` where Eve's record is either the bit or "unknown".
    pub h_a_given_e_actual: f64,
    /// `max(0, H(A|E)_perceived − H(A|B))`
    pub perceived_rate: f64,
    /// `max(0, H(A|E)_actual − H(A|B))`
    pub informed_rate: f64,
    /// `f + (1 − f) / 2` for known fraction `f`.
    pub per_bit_p1: f64,
    /// `−log2 per_bit_p1`
    pub real_exponent: f64,
}

/// Entropy of a count vector, in bits.
fn count_entropy(counts: &[u64]) -> f64 {
    let total: u64 = counts.iter().sum();
    if total == 0 {
        return 0.0;
    }
    let t = total as f64;
    0.0 - counts.iter().map(|&c| xlog2x(c as f64 / t)).sum::<f64>()
}

/// Perceived key rate (error-rate based, blind to what loss lets Eve learn)
/// against the exponent of Eve's per-bit guessing probability.
pub fn perceived_vs_real_rates(tallies: &RunTallies) -> Result<RateReport> {
    let c = &tallies.counts;
    if c.sifted_bits == 0 {
        return Err(Error::NoSiftedBits);
    }
    let joint = [
        c.ab_counts[0][0],
        c.ab_counts[0][1],
        c.ab_counts[1][0],
        c.ab_counts[1][1],
    ];
    let bob = [
        c.ab_counts[0][0] + c.ab_counts[1][0],
        c.ab_counts[0][1] + c.ab_counts[1][1],
    ];
    let h_a_given_b = (count_entropy(&joint) - count_entropy(&bob)).max(0.0);
    let h_a_given_e_perceived = 1.0 - binary_entropy(tallies.qber);
    let unknown = 1.0 - tallies.eve_known_fraction;
    let h_a_given_e_actual = unknown * count_entropy(&c.unknown_a_counts);
    let per_bit_p1 = tallies.eve_known_fraction + unknown * 0.5;
    Ok(RateReport {
        h_a_given_b,
        h_a_given_e_perceived,
        h_a_given_e_actual,
        perceived_rate: (h_a_given_e_perceived - h_a_given_b).max(0.0),
        informed_rate: (h_a_given_e_actual - h_a_given_b).max(0.0),
        per_bit_p1,
        real_exponent: neg_log2(per_bit_p1),
    })
}
