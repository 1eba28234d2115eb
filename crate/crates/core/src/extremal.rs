//! Worst-case distributions that saturate single-number criteria.
//!
//! Given a bound on Eve's information or on the variational distance to the
//! uniform key, these constructions return the distribution that maximizes
//! her probability of guessing the whole key while still meeting the bound.

use alloc::vec::Vec;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dist::{
    condition_on_revealed_bits, guessing_probability, posterior_guess_by_fiber, KeyDistribution,
    SubsetSpec, MAX_BITS, MAX_DENSE_BITS,
};
use crate::error::{Error, Result};
use crate::math::{self, binary_entropy, pow2_neg};

/// Bisection stops once the bracket is narrower than this.
pub const BISECTION_TOL: f64 = 1e-12;
pub const BISECTION_MAX_ITER: u32 = 200;

/// Maximal guessing probability under a constraint and a distribution attaining it.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ExtremalResult {
    pub p1_star: f64,
    pub witness: KeyDistribution,
    /// `-log2 p1_star`
    pub l_exponent: f64,
}

impl ExtremalResult {
    fn from_witness(p1_star: f64, witness: KeyDistribution) -> Self {
        Self {
            p1_star,
            witness,
            l_exponent: math::neg_log2(p1_star),
        }
    }
}

/// A key whose first `l_prime` bits determine the rest.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct KpaWitness {
    pub distribution: KeyDistribution,
    /// First `l_prime` positions, with the values of the smallest supported string.
    pub revealed: SubsetSpec,
    pub p1_before: f64,
    pub p1_after: f64,
    pub l_prime: u32,
    pub seed: u64,
}

impl KpaWitness {
    /// Smallest posterior guessing probability over every possible value of
    /// the revealed bits. Equal to 1 when every fiber is a single string.
    pub fn worst_case_posterior(&self) -> f64 {
        let positions = SubsetSpec::new(self.revealed.positions.clone());
        posterior_guess_by_fiber(&self.distribution, &positions)
            .map(|fibers| fibers.values().copied().fold(1.0, f64::min))
            .unwrap_or(0.0)
    }
}

fn check_dense_bits(n_bits: u32) -> Result<()> {
    if n_bits == 0 || n_bits > MAX_DENSE_BITS {
        return Err(Error::BitLength {
            n_bits,
            max: MAX_DENSE_BITS,
        });
    }
    Ok(())
}

/// Entropy of the spike distribution with peak `p1` on `n_bits`:
/// `h(p1) + (1 - p1) log2(N - 1)`.
pub fn spike_entropy(n_bits: u32, p1: f64) -> f64 {
    let others = math::exp2(f64::from(n_bits)) - 1.0;
    binary_entropy(p1) + (1.0 - p1) * math::log2(others)
}

/// Mass `p1` on `spike_index`, the remainder spread evenly over the other strings.
pub fn spike_distribution(n_bits: u32, p1: f64, spike_index: u32) -> Result<KeyDistribution> {
    check_dense_bits(n_bits)?;
    let floor = pow2_neg(n_bits);
    if !(p1 >= floor && p1 <= 1.0) {
        return Err(Error::OutOfRange {
            name: "p1",
            value: p1,
            range: "[2^-n, 1]",
        });
    }
    let n = 1usize << n_bits;
    if spike_index as usize >= n {
        return Err(Error::IndexOutOfRange {
            index: spike_index.into(),
            n_bits,
        });
    }
    let tail = ((1.0 - p1) / (n - 1) as f64).max(0.0);
    let mut probs = alloc::vec![tail; n];
    probs[spike_index as usize] = p1;
    KeyDistribution::from_dense(n_bits, probs)
}

/// Largest guessing probability among distributions with `n - H(P) <= info_bits`.
///
/// The spike family is extremal: for fixed `p1` it has the largest entropy,
/// and its entropy decreases monotonically on `[2^-n, 1]`, so the optimum is
/// the root of `spike_entropy(n, p1) = n - info_bits`. The returned value is
/// the feasible end of the bisection bracket.
pub fn max_guess_given_information(n_bits: u32, info_bits: f64) -> Result<ExtremalResult> {
    check_dense_bits(n_bits)?;
    let n = f64::from(n_bits);
    if !(0.0..=n).contains(&info_bits) {
        return Err(Error::OutOfRange {
            name: "info_bits",
            value: info_bits,
            range: "[0, n_bits]",
        });
    }
    let floor = pow2_neg(n_bits);
    let p1 = if info_bits == 0.0 {
        floor
    } else if info_bits == n {
        1.0
    } else {
        let target = n - info_bits;
        let (mut lo, mut hi) = (floor, 1.0);
        let mut iter = 0;
        while hi - lo > BISECTION_TOL && iter < BISECTION_MAX_ITER {
            let mid = 0.5 * (lo + hi);
            if spike_entropy(n_bits, mid) >= target {
                lo = mid;
            } else {
                hi = mid;
            }
            iter += 1;
        }
        lo
    };
    Ok(ExtremalResult::from_witness(
        p1,
        spike_distribution(n_bits, p1, 0)?,
    ))
}

/// Largest guessing probability among distributions with `δ(P, U) <= epsilon`:
/// `2^-n + epsilon`, reached by moving `epsilon` of mass onto one string.
pub fn max_guess_given_vd(n_bits: u32, epsilon: f64) -> Result<ExtremalResult> {
    check_dense_bits(n_bits)?;
    let floor = pow2_neg(n_bits);
    if !(epsilon >= 0.0 && epsilon <= 1.0 - floor) {
        return Err(Error::OutOfRange {
            name: "epsilon",
            value: epsilon,
            range: "[0, 1 - 2^-n]",
        });
    }
    let p1 = (floor + epsilon).min(1.0);
    Ok(ExtremalResult::from_witness(
        p1,
        spike_distribution(n_bits, p1, 0)?,
    ))
}

/// Number of revealed key bits that drive `p1 = 2^-l` to 1: `l + log2 n`.
pub fn kpa_break_length(n_bits: u64, l: f64) -> Result<f64> {
    if n_bits == 0 {
        return Err(Error::OutOfRange {
            name: "n_bits",
            value: 0.0,
            range: "[1, inf)",
        });
    }
    if !(l >= 0.0) {
        return Err(Error::OutOfRange {
            name: "l",
            value: l,
            range: "[0, inf)",
        });
    }
    Ok(l + math::log2(n_bits as f64))
}

/// Uniform distribution over `{(b, f(b)) : b in {0,1}^l_prime}` for a seeded
/// pseudorandom `f`. Revealing the leading `l_prime` bits pins down the key.
pub fn kpa_witness_family(n_bits: u32, l_prime: u32, seed: u64) -> Result<KpaWitness> {
    if n_bits == 0 || n_bits > MAX_BITS {
        return Err(Error::BitLength {
            n_bits,
            max: MAX_BITS,
        });
    }
    if l_prime == 0 || l_prime > n_bits {
        return Err(Error::OutOfRange {
            name: "l_prime",
            value: f64::from(l_prime),
            range: "[1, n_bits]",
        });
    }
    let rest = n_bits - l_prime;
    let mask = if rest == 0 { 0 } else { u32::MAX >> (32 - rest) };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mass = pow2_neg(l_prime);
    let support: Vec<(u32, f64)> = (0..1u32 << l_prime)
        .map(|b| ((b << rest) | (rng.next_u32() & mask), mass))
        .collect();
    let distribution = KeyDistribution::from_sparse(n_bits, support.iter().copied())?;

    let positions: Vec<u32> = (0..l_prime).collect();
    let first = support[0].0;
    let values = positions
        .iter()
        .map(|&pos| crate::dist::bit_at(first, n_bits, pos))
        .collect();
    let revealed = SubsetSpec::revealed(positions, values);
    let p1_before = guessing_probability(&distribution).p1;
    let p1_after = guessing_probability(&condition_on_revealed_bits(&distribution, &revealed)?).p1;
    Ok(KpaWitness {
        distribution,
        revealed,
        p1_before,
        p1_after,
        l_prime,
        seed,
    })
}

/// Individual bound from an average one via Markov's inequality: the bound
/// `epsilon_avg / confidence` fails with probability at most `confidence`.
pub fn markov_individual(epsilon_avg: f64, confidence: f64) -> Result<f64> {
    if !(confidence > 0.0 && confidence <= 1.0) {
        return Err(Error::OutOfRange {
            name: "confidence",
            value: confidence,
            range: "(0, 1]",
        });
    }
    if !(epsilon_avg >= 0.0) {
        return Err(Error::OutOfRange {
            name: "epsilon_avg",
            value: epsilon_avg,
            range: "[0, inf)",
        });
    }
    Ok(epsilon_avg / confidence)
}

/// `p1 * n / I` for a result of [`max_guess_given_information`]; how far the
/// extremal point sits from the heuristic `p1 ~ I / n`.
pub fn guess_information_ratio(n_bits: u32, result: &ExtremalResult) -> Option<f64> {
    let info = crate::dist::eve_information(&result.witness);
    (info > 0.0).then(|| result.p1_star * f64::from(n_bits) / info)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dist::{eve_information, shannon_entropy, variational_distance};

    #[test]
    fn spike_examples() {
        let p = spike_distribution(2, 0.4, 0).unwrap();
        for (i, want) in [0.4, 0.2, 0.2, 0.2].iter().enumerate() {
            assert!((p.prob(i as u32) - want).abs() < 1e-15);
        }
        assert_eq!(
            spike_distribution(5, 1.0 / 32.0, 7).unwrap(),
            KeyDistribution::uniform(5).unwrap()
        );
        assert_eq!(
            spike_distribution(5, 1.0, 7).unwrap(),
            KeyDistribution::point_mass(5, 7).unwrap()
        );
        assert!(spike_distribution(3, 0.1, 0).is_err());
        assert!(spike_distribution(3, 1.1, 0).is_err());
        assert!(spike_distribution(3, 0.5, 8).is_err());
    }

    #[test]
    fn spike_entropy_matches_direct_entropy() {
        for &(n, p) in &[(3u32, 0.3), (8, 0.01), (10, 0.9)] {
            let d = spike_distribution(n, p, 2).unwrap();
            assert!((shannon_entropy(&d) - spike_entropy(n, p)).abs() < 1e-10);
        }
    }

    #[test]
    fn information_endpoints_exact() {
        for n in 1..=8 {
            let r = max_guess_given_information(n, 0.0).unwrap();
            assert_eq!(r.p1_star, pow2_neg(n));
            assert_eq!(r.l_exponent, f64::from(n));
            assert_eq!(max_guess_given_information(n, f64::from(n)).unwrap().p1_star, 1.0);
        }
        assert!(max_guess_given_information(4, -0.1).is_err());
        assert!(max_guess_given_information(4, 4.5).is_err());
    }

    #[test]
    fn information_witness_meets_constraint() {
        for &(n, info) in &[(2u32, 0.5), (4, 1.7), (8, 1.0), (12, 0.01)] {
            let r = max_guess_given_information(n, info).unwrap();
            assert!(eve_information(&r.witness) <= info + 1e-9);
            assert!((eve_information(&r.witness) - info).abs() < 1e-9);
            assert!((guessing_probability(&r.witness).p1 - r.p1_star).abs() < 1e-9);
        }
    }

    #[test]
    fn vd_examples() {
        assert_eq!(max_guess_given_vd(3, 0.0).unwrap().p1_star, 0.125);
        assert_eq!(max_guess_given_vd(3, 0.875).unwrap().p1_star, 1.0);
        let r = max_guess_given_vd(4, 0.1).unwrap();
        let u = KeyDistribution::uniform(4).unwrap();
        assert!((variational_distance(&r.witness, &u).unwrap() - 0.1).abs() < 1e-12);
        assert!(max_guess_given_vd(3, 0.9).is_err());
    }

    #[test]
    fn break_length_examples() {
        assert_eq!(kpa_break_length(1, 0.0).unwrap(), 0.0);
        assert_eq!(kpa_break_length(1024, 20.0).unwrap(), 30.0);
        assert_eq!(kpa_break_length(16, 3.0).unwrap(), 7.0);
        assert!(kpa_break_length(0, 1.0).is_err());
    }

    #[test]
    fn kpa_full_revelation() {
        let w = kpa_witness_family(5, 5, 1).unwrap();
        assert_eq!(w.distribution, KeyDistribution::uniform(5).unwrap());
        assert_eq!(w.p1_after, 1.0);
        assert_eq!(w.worst_case_posterior(), 1.0);
        assert!(kpa_witness_family(5, 0, 1).is_err());
        assert!(kpa_witness_family(5, 6, 1).is_err());
    }

    #[test]
    fn kpa_small_case() {
        let w = kpa_witness_family(4, 2, 42).unwrap();
        assert_eq!(w.p1_before, 0.25);
        assert_eq!(w.p1_after, 1.0);
        assert_eq!(w.revealed.positions, [0, 1]);
        assert_eq!(w.distribution.support_size(), 4);
    }

    #[test]
    fn markov_examples() {
        assert!((markov_individual(0.01, 0.1).unwrap() - 0.1).abs() < 1e-15);
        assert_eq!(markov_individual(0.3, 1.0).unwrap(), 0.3);
        assert_eq!(
            markov_individual(pow2_neg(20), pow2_neg(10)).unwrap(),
            pow2_neg(10)
        );
        assert!(markov_individual(0.1, 0.0).is_err());
        assert!(markov_individual(-0.1, 0.5).is_err());
    }
}
