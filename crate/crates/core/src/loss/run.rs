use alloc::boxed::Box;
use alloc::vec::Vec;
use core::ops::Range;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::config::{AttackStrategy, Protocol, ProtocolConfig};
use super::tallies::{Counts, RunTallies};
use crate::error::{Error, Result};
use crate::quantum::{measure, signal_density_operators, usd_povm, IDENTIFY_0, IDENTIFY_1};

/// Outcome probabilities `[identify-0, identify-1, inconclusive]` of the
/// unambiguous-discrimination receiver on each of the two B92 states.
#[derive(Debug, Clone, Copy)]
struct UsdTable {
    outcomes: [[f64; 3]; 2],
}

impl UsdTable {
    fn new(overlap: f64) -> Result<Self> {
        let usd = usd_povm(overlap)?;
        let states = signal_density_operators(overlap)?;
        let mut outcomes = [[0.0; 3]; 2];
        for (row, state) in outcomes.iter_mut().zip(&states) {
            let probs = measure(state, &usd.povm)?;
            row.copy_from_slice(probs.probs());
        }
        Ok(Self { outcomes })
    }

    /// `Some(bit)` on a conclusive result.
    fn sample(&self, state: bool, rng: &mut ChaCha8Rng) -> Option<bool> {
        let row = &self.outcomes[usize::from(state)];
        let u: f64 = rng.random();
        if u < row[IDENTIFY_0] {
            Some(false)
        } else if u < row[IDENTIFY_0] + row[IDENTIFY_1] {
            Some(true)
        } else {
            None
        }
    }
}

/// What reaches Bob's receiver.
#[derive(Debug, Clone, Copy)]
enum Arrival {
    Vacuum,
    /// B92 signal state index, or BB84 (bit, basis).
    Photon { bit: bool, basis: bool },
}

struct Pulse {
    arrival: Arrival,
    eve_knows: bool,
}

/// Per-pulse generator: the stream of pulse `index` under `seed`, independent
/// of how pulses are scheduled.
fn pulse_rng(base: &ChaCha8Rng, index: u64) -> ChaCha8Rng {
    let mut rng = base.clone();
    rng.set_stream(index);
    rng.set_word_pos(0);
    rng
}

fn bernoulli(rng: &mut ChaCha8Rng, p: f64) -> bool {
    p >= 1.0 || rng.random::<f64>() < p
}

struct Simulator<'a> {
    config: &'a ProtocolConfig,
    attack: AttackStrategy,
    usd: Option<UsdTable>,
    base: ChaCha8Rng,
}

impl<'a> Simulator<'a> {
    fn new(config: &'a ProtocolConfig, attack: AttackStrategy) -> Result<Self> {
        config.validate()?;
        attack.validate(config.protocol)?;
        let usd = match config.protocol {
            Protocol::B92 => Some(UsdTable::new(config.overlap_s)?),
            Protocol::BB84 => None,
        };
        Ok(Self {
            config,
            attack,
            usd,
            base: ChaCha8Rng::seed_from_u64(config.seed),
        })
    }

    fn channel(&self, rng: &mut ChaCha8Rng, bit: bool, basis: bool) -> Arrival {
        if bernoulli(rng, self.config.transmittance_eta) {
            Arrival::Photon { bit, basis }
        } else {
            Arrival::Vacuum
        }
    }

    fn b92_line(&self, usd: &UsdTable, rng: &mut ChaCha8Rng, a: bool) -> Pulse {
        let honest = |rng: &mut ChaCha8Rng| Pulse {
            arrival: self.channel(rng, a, false),
            eve_knows: false,
        };
        match self.attack {
            AttackStrategy::None => honest(rng),
            AttackStrategy::InterceptResend { intercept_fraction } => {
                if !bernoulli(rng, intercept_fraction) {
                    return honest(rng);
                }
                match usd.sample(a, rng) {
                    Some(bit) => Pulse {
                        arrival: Arrival::Photon { bit, basis: false },
                        eve_knows: true,
                    },
                    None => Pulse {
                        arrival: Arrival::Photon {
                            bit: rng.random(),
                            basis: false,
                        },
                        eve_knows: false,
                    },
                }
            }
            AttackStrategy::UsdResend => match usd.sample(a, rng) {
                Some(bit) => Pulse {
                    arrival: Arrival::Photon { bit, basis: false },
                    eve_knows: true,
                },
                None => Pulse {
                    arrival: Arrival::Vacuum,
                    eve_knows: false,
                },
            },
            AttackStrategy::CloningResend => {
                let success = super::cloning_success(self.config.overlap_s).unwrap_or(0.5);
                if bernoulli(rng, success) {
                    // Eve reads her copy with the same zero-error measurement.
                    let eve_knows = usd.sample(a, rng).is_some();
                    Pulse {
                        arrival: Arrival::Photon {
                            bit: a,
                            basis: false,
                        },
                        eve_knows,
                    }
                } else {
                    Pulse {
                        arrival: Arrival::Vacuum,
                        eve_knows: false,
                    }
                }
            }
        }
    }

    fn bb84_line(&self, rng: &mut ChaCha8Rng, a: bool, alpha: bool) -> Pulse {
        let honest = |rng: &mut ChaCha8Rng| Pulse {
            arrival: self.channel(rng, a, alpha),
            eve_knows: false,
        };
        match self.attack {
            AttackStrategy::None => honest(rng),
            AttackStrategy::InterceptResend { intercept_fraction } => {
                if !bernoulli(rng, intercept_fraction) {
                    return honest(rng);
                }
                let gamma: bool = rng.random();
                let e = if gamma == alpha { a } else { rng.random() };
                Pulse {
                    arrival: Arrival::Photon {
                        bit: e,
                        basis: gamma,
                    },
                    eve_knows: gamma == alpha,
                }
            }
            // rejected by validation
            AttackStrategy::UsdResend | AttackStrategy::CloningResend => honest(rng),
        }
    }

    /// Survives the receiver's pre-detection filter and detector, or fires a dark count.
    fn detects(&self, rng: &mut ChaCha8Rng, arrival: Arrival) -> Option<Arrival> {
        if let Arrival::Photon { .. } = arrival {
            if bernoulli(rng, self.config.pre_detection_success)
                && bernoulli(rng, self.config.detector_efficiency)
            {
                return Some(arrival);
            }
        }
        (self.config.dark_count_prob > 0.0 && bernoulli(rng, self.config.dark_count_prob))
            .then_some(Arrival::Vacuum)
    }

    fn pulse(&self, index: u64, counts: &mut Counts) {
        let mut rng = pulse_rng(&self.base, index);
        counts.pulses_sent += 1;
        let a: bool = rng.random();
        let (line, sift_basis) = match (self.config.protocol, &self.usd) {
            (Protocol::B92, Some(usd)) => (self.b92_line(usd, &mut rng, a), None),
            _ => {
                let alpha: bool = rng.random();
                (self.bb84_line(&mut rng, a, alpha), Some(alpha))
            }
        };
        let Some(detected) = self.detects(&mut rng, line.arrival) else {
            return;
        };
        counts.pulses_detected += 1;
        let bob = match (sift_basis, detected) {
            // dark count: random click
            (None, Arrival::Vacuum) => Some(rng.random()),
            (None, Arrival::Photon { bit, .. }) => self
                .usd
                .as_ref()
                .and_then(|usd| usd.sample(bit, &mut rng)),
            (Some(alpha), arrival) => {
                let beta: bool = rng.random();
                let b = match arrival {
                    Arrival::Photon { bit, basis } if basis == beta => bit,
                    _ => rng.random(),
                };
                (beta == alpha).then_some(b)
            }
        };
        if let Some(b) = bob {
            counts.record_sifted(a, b, line.eve_knows);
        }
    }
}

/// Raw counters for pulses `range` of a run. Partitioning the pulse range
/// across workers and merging with [`Counts::merge`] gives the same result as
/// one sequential pass.
pub fn simulate_pulses(
    config: &ProtocolConfig,
    attack: AttackStrategy,
    range: Range<u64>,
) -> Result<Counts> {
    let sim = Simulator::new(config, attack)?;
    let mut counts = Counts::default();
    for index in range {
        sim.pulse(index, &mut counts);
    }
    Ok(counts)
}

/// Pulse-by-pulse simulation of one run; deterministic given the seed.
pub fn run_protocol(config: &ProtocolConfig, attack: AttackStrategy) -> Result<RunTallies> {
    simulate_pulses(config, attack, 0..config.n_pulses).map(RunTallies::from_counts)
}

/// Seed for point `index` of a sweep; point 0 keeps the base seed.
pub fn sweep_seed(seed: u64, index: usize) -> u64 {
    seed.wrapping_add((index as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

/// One run per transmittance value, in grid order.
pub fn loss_sweep(
    config: &ProtocolConfig,
    attack: AttackStrategy,
    eta_grid: &[f64],
) -> Result<Vec<RunTallies>> {
    eta_grid
        .iter()
        .enumerate()
        .map(|(index, &eta)| {
            let point = ProtocolConfig {
                transmittance_eta: eta,
                seed: sweep_seed(config.seed, index),
                ..config.clone()
            };
            run_protocol(&point, attack).map_err(|source| Error::SweepPoint {
                index,
                source: Box::new(source),
            })
        })
        .collect()
}
