//! Finite distributions over n-bit strings and the classical security
//! functionals built on them.
//!
//! A string is identified with its integer value, position 0 being the most
//! significant bit. Distributions with `n_bits <= 20` are stored densely,
//! larger ones (up to 30 bits) as a sorted list of nonzero entries.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math::{self, neumaier_sum};

/// Hard cap on the key length handled by [`KeyDistribution`].
pub const MAX_BITS: u32 = 30;
/// Largest key length stored as a dense vector.
pub const MAX_DENSE_BITS: u32 = 20;
/// Tolerance on normalization and structural equality.
pub const STRUCTURAL_TOL: f64 = 1e-12;

/// Bit of `index` at `position` (position 0 is the most significant of `n_bits`).
#[inline]
pub fn bit_at(index: u32, n_bits: u32, position: u32) -> bool {
    (index >> (n_bits - 1 - position)) & 1 == 1
}

/// Probability distribution over `2^n_bits` bit strings.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(
    feature = "serde",
    derive(serde::Serialize, serde::Deserialize),
    serde(
        try_from = "crate::serde_impls::KeyDistributionRepr",
        into = "crate::serde_impls::KeyDistributionRepr"
    )
)]
pub struct KeyDistribution {
    n_bits: u32,
    support: Support,
}

#[derive(Debug, Clone, PartialEq)]
enum Support {
    Dense(Vec<f64>),
    /// Sorted by index, strictly positive entries only.
    Sparse(Vec<(u32, f64)>),
}

fn check_bits(n_bits: u32, max: u32) -> Result<()> {
    if n_bits == 0 || n_bits > max {
        return Err(Error::BitLength { n_bits, max });
    }
    Ok(())
}

fn check_entry(index: u64, value: f64) -> Result<()> {
    if !value.is_finite() || value < 0.0 {
        return Err(Error::NegativeProbability { index, value });
    }
    Ok(())
}

fn check_sum(sum: f64) -> Result<()> {
    if math::abs(sum - 1.0) > STRUCTURAL_TOL {
        return Err(Error::NotNormalized { sum });
    }
    Ok(())
}

impl KeyDistribution {
    /// Builds a dense distribution from all `2^n_bits` probabilities.
    pub fn from_dense(n_bits: u32, probs: Vec<f64>) -> Result<Self> {
        check_bits(n_bits, MAX_DENSE_BITS)?;
        let expected = 1usize << n_bits;
        if probs.len() != expected {
            return Err(Error::Length {
                expected,
                got: probs.len(),
            });
        }
        for (i, &p) in probs.iter().enumerate() {
            check_entry(i as u64, p)?;
        }
        check_sum(neumaier_sum(probs.iter().copied()))?;
        Ok(Self {
            n_bits,
            support: Support::Dense(probs),
        })
    }

    /// Builds a distribution from `(index, probability)` pairs. Indices not
    /// listed have probability zero; duplicates are rejected.
    pub fn from_sparse<I>(n_bits: u32, pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (u32, f64)>,
    {
        check_bits(n_bits, MAX_BITS)?;
        let mut map = BTreeMap::new();
        for (index, p) in pairs {
            if u64::from(index) >= 1u64 << n_bits {
                return Err(Error::IndexOutOfRange {
                    index: index.into(),
                    n_bits,
                });
            }
            check_entry(index.into(), p)?;
            if map.insert(index, p).is_some() {
                return Err(Error::InvalidSubset(alloc::format!(
                    "duplicate index {index} in sparse distribution"
                )));
            }
        }
        check_sum(neumaier_sum(map.values().copied()))?;
        Ok(Self::from_map(n_bits, map))
    }

    fn from_map(n_bits: u32, map: BTreeMap<u32, f64>) -> Self {
        let support = if n_bits <= MAX_DENSE_BITS {
            let mut dense = alloc::vec![0.0; 1usize << n_bits];
            for (i, p) in map {
                dense[i as usize] = p;
            }
            Support::Dense(dense)
        } else {
            Support::Sparse(map.into_iter().filter(|&(_, p)| p > 0.0).collect())
        };
        Self { n_bits, support }
    }

    /// Uniform distribution `U` on `n_bits` (dense range only).
    pub fn uniform(n_bits: u32) -> Result<Self> {
        check_bits(n_bits, MAX_DENSE_BITS)?;
        let n = 1usize << n_bits;
        Ok(Self {
            n_bits,
            support: Support::Dense(alloc::vec![math::pow2_neg(n_bits); n]),
        })
    }

    /// Deterministic distribution on `index`.
    pub fn point_mass(n_bits: u32, index: u32) -> Result<Self> {
        Self::from_sparse(n_bits, [(index, 1.0)])
    }

    pub fn n_bits(&self) -> u32 {
        self.n_bits
    }

    /// Number of strings, `2^n_bits`.
    pub fn num_outcomes(&self) -> u64 {
        1u64 << self.n_bits
    }

    pub fn is_dense(&self) -> bool {
        matches!(self.support, Support::Dense(_))
    }

    pub fn prob(&self, index: u32) -> f64 {
        match &self.support {
            Support::Dense(v) => v.get(index as usize).copied().unwrap_or(0.0),
            Support::Sparse(v) => v
                .binary_search_by_key(&index, |&(i, _)| i)
                .map(|k| v[k].1)
                .unwrap_or(0.0),
        }
    }

    /// Entries with positive probability, in increasing index order.
    pub fn iter_nonzero(&self) -> NonZero<'_> {
        match &self.support {
            Support::Dense(v) => NonZero::Dense(v.iter().enumerate()),
            Support::Sparse(v) => NonZero::Sparse(v.iter()),
        }
    }

    /// Number of strings with positive probability.
    pub fn support_size(&self) -> usize {
        self.iter_nonzero().count()
    }

    /// Full probability vector. Fails above the dense cap.
    pub fn to_dense(&self) -> Result<Vec<f64>> {
        match &self.support {
            Support::Dense(v) => Ok(v.clone()),
            Support::Sparse(_) => Err(Error::BitLength {
                n_bits: self.n_bits,
                max: MAX_DENSE_BITS,
            }),
        }
    }

    pub fn total_mass(&self) -> f64 {
        neumaier_sum(self.iter_nonzero().map(|(_, p)| p))
    }
}

/// Iterator over the positive entries of a [`KeyDistribution`].
pub enum NonZero<'a> {
    Dense(core::iter::Enumerate<core::slice::Iter<'a, f64>>),
    Sparse(core::slice::Iter<'a, (u32, f64)>),
}

impl Iterator for NonZero<'_> {
    type Item = (u32, f64);

    fn next(&mut self) -> Option<Self::Item> {
        match self {
            NonZero::Dense(it) => it
                .find(|(_, &p)| p > 0.0)
                .map(|(i, &p)| (i as u32, p)),
            NonZero::Sparse(it) => it.next().copied(),
        }
    }
}

/// Compensated per-bin accumulator used to build derived distributions
/// (marginals, pushforwards) without drifting off normalization.
pub(crate) struct Accumulator {
    n_bits: u32,
    bins: AccBins,
}

enum AccBins {
    Dense(Vec<(f64, f64)>),
    Sparse(BTreeMap<u32, (f64, f64)>),
}

#[inline]
fn kahan_add(bin: &mut (f64, f64), v: f64) {
    let (sum, comp) = *bin;
    let t = sum + v;
    let c = if math::abs(sum) >= math::abs(v) {
        (sum - t) + v
    } else {
        (v - t) + sum
    };
    *bin = (t, comp + c);
}

impl Accumulator {
    pub(crate) fn new(n_bits: u32) -> Result<Self> {
        check_bits(n_bits, MAX_BITS)?;
        let bins = if n_bits <= MAX_DENSE_BITS {
            AccBins::Dense(alloc::vec![(0.0, 0.0); 1usize << n_bits])
        } else {
            AccBins::Sparse(BTreeMap::new())
        };
        Ok(Self { n_bits, bins })
    }

    pub(crate) fn add(&mut self, index: u32, p: f64) {
        match &mut self.bins {
            AccBins::Dense(v) => kahan_add(&mut v[index as usize], p),
            AccBins::Sparse(m) => kahan_add(m.entry(index).or_insert((0.0, 0.0)), p),
        }
    }

    pub(crate) fn finish(self) -> KeyDistribution {
        let support = match self.bins {
            AccBins::Dense(v) => Support::Dense(v.into_iter().map(|(s, c)| s + c).collect()),
            AccBins::Sparse(m) => Support::Sparse(
                m.into_iter()
                    .map(|(i, (s, c))| (i, s + c))
                    .filter(|&(_, p)| p > 0.0)
                    .collect(),
            ),
        };
        KeyDistribution {
            n_bits: self.n_bits,
            support,
        }
    }
}

/// A set of bit positions, optionally with the values observed there.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SubsetSpec {
    pub positions: Vec<u32>,
    #[cfg_attr(feature = "serde", serde(default, skip_serializing_if = "Option::is_none"))]
    pub values: Option<Vec<bool>>,
}

impl SubsetSpec {
    /// A pure marginal subset.
    pub fn new(positions: Vec<u32>) -> Self {
        Self {
            positions,
            values: None,
        }
    }

    /// A subset together with revealed bit values.
    pub fn revealed(positions: Vec<u32>, values: Vec<bool>) -> Self {
        Self {
            positions,
            values: Some(values),
        }
    }

    /// The first `k` positions.
    pub fn leading(k: u32) -> Self {
        Self::new((0..k).collect())
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    /// Checks ordering, range and value length against a key length.
    pub fn validate(&self, n_bits: u32) -> Result<()> {
        if self.positions.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidSubset("positions must be strictly increasing".into()));
        }
        if let Some(&last) = self.positions.last() {
            if last >= n_bits {
                return Err(Error::InvalidSubset(alloc::format!(
                    "position {last} out of range for {n_bits} bits"
                )));
            }
        }
        if let Some(values) = &self.values {
            if values.len() != self.positions.len() {
                return Err(Error::InvalidSubset(alloc::format!(
                    "{} values for {} positions",
                    values.len(),
                    self.positions.len()
                )));
            }
        }
        Ok(())
    }

    /// Projects a full string onto this subset; the first position becomes
    /// the most significant bit of the result.
    pub fn project(&self, index: u32, n_bits: u32) -> u32 {
        self.positions
            .iter()
            .fold(0u32, |acc, &pos| (acc << 1) | u32::from(bit_at(index, n_bits, pos)))
    }

    fn matches(&self, index: u32, n_bits: u32, values: &[bool]) -> bool {
        self.positions
            .iter()
            .zip(values)
            .all(|(&pos, &v)| bit_at(index, n_bits, pos) == v)
    }
}

/// Maximum probability and the smallest string attaining it.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Guess {
    pub p1: f64,
    pub argmax: u32,
}

/// Result of the subset envelope check `|p1(K~) - 2^-|K~||`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SubsetGap {
    pub epsilon: f64,
    pub p1_subset: f64,
}

/// Shannon entropy in bits.
pub fn shannon_entropy(p: &KeyDistribution) -> f64 {
    let h = 0.0 - neumaier_sum(p.iter_nonzero().map(|(_, x)| math::xlog2x(x)));
    h.clamp(0.0, f64::from(p.n_bits))
}

/// Information proxy `n - H(P)` of a single posterior.
pub fn eve_information(p: &KeyDistribution) -> f64 {
    (f64::from(p.n_bits) - shannon_entropy(p)).clamp(0.0, f64::from(p.n_bits))
}

/// Half-L1 distance between two probability vectors of equal length.
pub fn half_l1(p: &[f64], q: &[f64]) -> Result<f64> {
    if p.len() != q.len() {
        return Err(Error::DimensionMismatch {
            left: p.len(),
            right: q.len(),
        });
    }
    Ok(0.5 * neumaier_sum(p.iter().zip(q).map(|(a, b)| math::abs(a - b))))
}

/// Variational distance `½ Σ |p_i - q_i|`.
pub fn variational_distance(p: &KeyDistribution, q: &KeyDistribution) -> Result<f64> {
    if p.n_bits != q.n_bits {
        return Err(Error::DimensionMismatch {
            left: p.n_bits as usize,
            right: q.n_bits as usize,
        });
    }
    if let (Support::Dense(a), Support::Dense(b)) = (&p.support, &q.support) {
        return half_l1(a, b);
    }
    // merge the two sorted supports
    let mut diffs = Vec::new();
    let mut a = p.iter_nonzero().peekable();
    let mut b = q.iter_nonzero().peekable();
    loop {
        match (a.peek().copied(), b.peek().copied()) {
            (Some((i, x)), Some((j, y))) => {
                if i == j {
                    diffs.push(math::abs(x - y));
                    a.next();
                    b.next();
                } else if i < j {
                    diffs.push(x);
                    a.next();
                } else {
                    diffs.push(y);
                    b.next();
                }
            }
            (Some((_, x)), None) => {
                diffs.push(x);
                a.next();
            }
            (None, Some((_, y))) => {
                diffs.push(y);
                b.next();
            }
            (None, None) => break,
        }
    }
    Ok((0.5 * neumaier_sum(diffs)).min(1.0))
}

/// `δ(P, U)` against the uniform distribution, for any supported length.
pub fn distance_to_uniform(p: &KeyDistribution) -> f64 {
    let u = math::pow2_neg(p.n_bits);
    let unsupported = p.num_outcomes() - p.support_size() as u64;
    let terms = p
        .iter_nonzero()
        .map(|(_, x)| math::abs(x - u))
        .chain(core::iter::once(unsupported as f64 * u));
    (0.5 * neumaier_sum(terms)).min(1.0)
}

/// Maximum probability `p1`; ties go to the smallest index.
pub fn guessing_probability(p: &KeyDistribution) -> Guess {
    let mut best = Guess { p1: 0.0, argmax: 0 };
    for (i, x) in p.iter_nonzero() {
        if x > best.p1 {
            best = Guess { p1: x, argmax: i };
        }
    }
    best
}

/// Marginal distribution on the given positions (values, if any, are ignored).
pub fn marginal(p: &KeyDistribution, subset: &SubsetSpec) -> Result<KeyDistribution> {
    subset.validate(p.n_bits)?;
    if subset.is_empty() {
        return Err(Error::InvalidSubset("subset is empty".into()));
    }
    let k = subset.len() as u32;
    let mut acc = Accumulator::new(k)?;
    for (i, x) in p.iter_nonzero() {
        acc.add(subset.project(i, p.n_bits), x);
    }
    Ok(acc.finish())
}

/// Subset envelope `ε(K~) = |p1(K~) - 2^-|K~||` for a pure marginal subset.
pub fn subset_security_gap(p: &KeyDistribution, subset: &SubsetSpec) -> Result<SubsetGap> {
    if subset.values.is_some() {
        return Err(Error::InvalidSubset(
            "security gap is defined on a marginal subset without values".into(),
        ));
    }
    let m = marginal(p, subset)?;
    let p1_subset = guessing_probability(&m).p1;
    let baseline = math::pow2_neg(subset.len() as u32);
    Ok(SubsetGap {
        epsilon: math::abs(p1_subset - baseline),
        p1_subset,
    })
}

/// Posterior of `p` after the bits at `revealed.positions` are learned to
/// equal `revealed.values`. The result keeps the original length.
pub fn condition_on_revealed_bits(
    p: &KeyDistribution,
    revealed: &SubsetSpec,
) -> Result<KeyDistribution> {
    revealed.validate(p.n_bits)?;
    let values = revealed
        .values
        .as_deref()
        .ok_or_else(|| Error::InvalidSubset("revealed subset carries no values".into()))?;
    let n = p.n_bits;
    let kept: Vec<(u32, f64)> = p
        .iter_nonzero()
        .filter(|&(i, _)| revealed.matches(i, n, values))
        .collect();
    let mass = neumaier_sum(kept.iter().map(|&(_, x)| x));
    if mass <= 0.0 {
        return Err(Error::InconsistentRevelation);
    }
    let mut acc = Accumulator::new(n)?;
    for (i, x) in kept {
        acc.add(i, x / mass);
    }
    Ok(acc.finish())
}

/// Posterior guessing probability for every revealed value of `subset`
/// that has positive mass, keyed by the projected value.
pub fn posterior_guess_by_fiber(
    p: &KeyDistribution,
    subset: &SubsetSpec,
) -> Result<BTreeMap<u32, f64>> {
    subset.validate(p.n_bits)?;
    if subset.is_empty() {
        return Err(Error::InvalidSubset("subset is empty".into()));
    }
    // (fiber mass, compensation, largest entry)
    let mut fibers: BTreeMap<u32, ((f64, f64), f64)> = BTreeMap::new();
    for (i, x) in p.iter_nonzero() {
        let entry = fibers
            .entry(subset.project(i, p.n_bits))
            .or_insert(((0.0, 0.0), 0.0));
        kahan_add(&mut entry.0, x);
        entry.1 = entry.1.max(x);
    }
    Ok(fibers
        .into_iter()
        .map(|(k, ((s, c), max))| (k, max / (s + c)))
        .collect())
}
