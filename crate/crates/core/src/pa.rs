//! Error correction and privacy amplification as one known linear map over GF(2).

use alloc::format;
use alloc::vec::Vec;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dist::{guessing_probability, Accumulator, KeyDistribution, STRUCTURAL_TOL};
use crate::error::{Error, Result};
use crate::math;

/// Largest input length accepted by [`LinearHash`].
pub const MAX_HASH_BITS: u32 = 24;
/// Redraw cap for [`random_toeplitz_hash`].
pub const MAX_TOEPLITZ_ATTEMPTS: u32 = 64;

/// Surjective linear map `{0,1}^m → {0,1}^n`.
///
/// `rows[i]` is a bitmask over the input string (same bit order as the
/// string's integer value); output bit `i` is the parity of `rows[i] & x`
/// and lands at position `i`, i.e. row 0 is the most significant output bit.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(
    feature = "serde",
    derive(serde::Serialize, serde::Deserialize),
    serde(
        try_from = "crate::serde_impls::LinearHashRepr",
        into = "crate::serde_impls::LinearHashRepr"
    )
)]
pub struct LinearHash {
    in_bits: u32,
    out_bits: u32,
    rows: Vec<u32>,
    seed: u64,
}

/// Rank of a set of row bitmasks over GF(2).
pub fn gf2_rank(rows: &[u32]) -> u32 {
    let mut basis: Vec<u32> = Vec::new();
    for &row in rows {
        let mut r = row;
        for &b in &basis {
            r = r.min(r ^ b);
        }
        if r != 0 {
            basis.push(r);
            // keep the basis sorted descending so `min` reduction works
            basis.sort_unstable_by(|a, b| b.cmp(a));
        }
    }
    basis.len() as u32
}

impl LinearHash {
    /// Validates dimensions and full row rank.
    pub fn from_rows(in_bits: u32, out_bits: u32, rows: Vec<u32>, seed: u64) -> Result<Self> {
        if !(1..=MAX_HASH_BITS).contains(&in_bits) || !(1..=in_bits).contains(&out_bits) {
            return Err(Error::InvalidHash(format!(
                "need 1 <= n <= m <= {MAX_HASH_BITS}, got m = {in_bits}, n = {out_bits}"
            )));
        }
        if rows.len() != out_bits as usize {
            return Err(Error::InvalidHash(format!(
                "{} rows for n = {out_bits}",
                rows.len()
            )));
        }
        if let Some(r) = rows.iter().find(|&&r| u64::from(r) >= 1u64 << in_bits) {
            return Err(Error::InvalidHash(format!(
                "row {r:#x} has bits beyond m = {in_bits}"
            )));
        }
        let rank = gf2_rank(&rows);
        if rank != out_bits {
            return Err(Error::InvalidHash(format!(
                "rank {rank} < n = {out_bits}; map is not surjective"
            )));
        }
        Ok(Self {
            in_bits,
            out_bits,
            rows,
            seed,
        })
    }

    pub fn in_bits(&self) -> u32 {
        self.in_bits
    }

    pub fn out_bits(&self) -> u32 {
        self.out_bits
    }

    pub fn rows(&self) -> &[u32] {
        &self.rows
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Matrix entry for output bit `i` and input position `j`.
    pub fn entry(&self, i: u32, j: u32) -> bool {
        (self.rows[i as usize] >> (self.in_bits - 1 - j)) & 1 == 1
    }

    /// Whether entries are constant along diagonals.
    pub fn is_toeplitz(&self) -> bool {
        (1..self.out_bits).all(|i| {
            (1..self.in_bits).all(|j| self.entry(i, j) == self.entry(i - 1, j - 1))
        })
    }

    pub fn apply(&self, x: u32) -> u32 {
        self.rows
            .iter()
            .fold(0u32, |acc, &row| (acc << 1) | ((row & x).count_ones() & 1))
    }
}

/// Toeplitz matrix from `m + n − 1` seeded bits, redrawn until it has full rank.
pub fn random_toeplitz_hash(m: u32, n: u32, seed: u64) -> Result<LinearHash> {
    if !(1..=MAX_HASH_BITS).contains(&m) || !(1..=m).contains(&n) {
        return Err(Error::InvalidHash(format!(
            "need 1 <= n <= m <= {MAX_HASH_BITS}, got m = {m}, n = {n}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..MAX_TOEPLITZ_ATTEMPTS {
        let diag: Vec<bool> = (0..m + n - 1).map(|_| rng.next_u32() & 1 == 1).collect();
        let rows: Vec<u32> = (0..n)
            .map(|i| {
                (0..m).fold(0u32, |acc, j| {
                    let bit = diag[(i + m - 1 - j) as usize];
                    acc | (u32::from(bit) << (m - 1 - j))
                })
            })
            .collect();
        if gf2_rank(&rows) == n {
            return LinearHash::from_rows(m, n, rows, seed);
        }
    }
    Err(Error::RankDeficient {
        attempts: MAX_TOEPLITZ_ATTEMPTS,
    })
}

/// Distribution of `K = h(X)`: exact fiber sums.
pub fn pushforward(p_x: &KeyDistribution, hash: &LinearHash) -> Result<KeyDistribution> {
    if p_x.n_bits() != hash.in_bits {
        return Err(Error::DimensionMismatch {
            left: p_x.n_bits() as usize,
            right: hash.in_bits as usize,
        });
    }
    let mut acc = Accumulator::new(hash.out_bits)?;
    for (x, p) in p_x.iter_nonzero() {
        acc.add(hash.apply(x), p);
    }
    Ok(acc.finish())
}

/// Guessing probability on the data and on the hashed key.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PaInvarianceReport {
    /// `q1` on the data `X`.
    pub q1: f64,
    pub q1_argmax: u32,
    /// `p1` on the key `K = h(X)`.
    pub p1: f64,
    pub p1_argmax: u32,
    /// `p1 >= q1`
    pub never_decreases: bool,
    /// `|p1 − q1| <= 1e-12`
    pub equal: bool,
    /// Equal, and the most likely data value hashes to the most likely key.
    pub spike_to_spike: bool,
}

/// Checks that hashing cannot lower the guessing probability.
pub fn pa_invariance_check(p_x: &KeyDistribution, hash: &LinearHash) -> Result<PaInvarianceReport> {
    let data = guessing_probability(p_x);
    let key = guessing_probability(&pushforward(p_x, hash)?);
    let equal = math::abs(key.p1 - data.p1) <= STRUCTURAL_TOL;
    Ok(PaInvarianceReport {
        q1: data.p1,
        q1_argmax: data.argmax,
        p1: key.p1,
        p1_argmax: key.argmax,
        never_decreases: key.p1 >= data.p1,
        equal,
        spike_to_spike: equal && hash.apply(data.argmax) == key.argmax,
    })
}

/// Key length `l = −log2 p1` and rate `r = l / n`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ExtractableBits {
    pub l: f64,
    pub r: f64,
}

pub fn extractable_bits(p: &KeyDistribution) -> ExtractableBits {
    let l = math::neg_log2(guessing_probability(p).p1);
    ExtractableBits {
        l,
        r: l / f64::from(p.n_bits()),
    }
}
