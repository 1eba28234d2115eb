//! The "equal to uniform except with probability ε" reading of a distance
//! bound, set against the worst distribution the bound actually allows.

use alloc::vec::Vec;

use super::coupling::independent_mismatch;
use crate::dist::{subset_security_gap, variational_distance, KeyDistribution, SubsetSpec};
use crate::error::Result;
use crate::extremal::max_guess_given_vd;
use crate::math::pow2_neg;

/// Envelope value for one subset of key positions.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SubsetGapEntry {
    pub positions: Vec<u32>,
    pub p1_subset: f64,
    pub epsilon: f64,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct InterpretationGapReport {
    pub n_bits: u32,
    pub epsilon: f64,
    /// `2^-n`, the guessing probability of a perfect key.
    pub uniform_p1: f64,
    /// `ε + (1 − ε) 2^-n`: the best Eve could do if the key were uniform
    /// except with probability ε.
    pub perceived_p1_bound: f64,
    /// Guessing probability of the worst distribution with `δ(P, U) = ε`.
    pub actual_p1: f64,
    /// `actual_p1 / 2^-n`
    pub advantage_ratio: f64,
    /// Whether the witness beats the failure-probability reading.
    pub reading_violated: bool,
    /// `Pr[X ≠ Y]` under the maximal coupling of witness and uniform key.
    pub maximal_coupling_mismatch: f64,
    /// `Pr[X ≠ Y]` when witness and uniform key are simply compared (product coupling).
    pub independent_coupling_mismatch: f64,
    pub singleton_gaps: Vec<SubsetGapEntry>,
    pub pair_gaps: Vec<SubsetGapEntry>,
    pub max_subset_gap: f64,
}

fn gap_entry(p: &KeyDistribution, positions: Vec<u32>) -> Result<SubsetGapEntry> {
    let gap = subset_security_gap(p, &SubsetSpec::new(positions.clone()))?;
    Ok(SubsetGapEntry {
        positions,
        p1_subset: gap.p1_subset,
        epsilon: gap.epsilon,
    })
}

/// Builds the δ-extremal witness for `epsilon` and contrasts the perceived
/// and actual guessing probabilities, with subset gaps for all singletons
/// and pairs of positions.
pub fn interpretation_gap_report(epsilon: f64, n_bits: u32) -> Result<InterpretationGapReport> {
    let extremal = max_guess_given_vd(n_bits, epsilon)?;
    let witness = &extremal.witness;
    let uniform = KeyDistribution::uniform(n_bits)?;
    let uniform_p1 = pow2_neg(n_bits);
    let perceived_p1_bound = epsilon + (1.0 - epsilon) * uniform_p1;

    let singleton_gaps = (0..n_bits)
        .map(|i| gap_entry(witness, alloc::vec![i]))
        .collect::<Result<Vec<_>>>()?;
    let pair_gaps = (0..n_bits)
        .flat_map(|i| ((i + 1)..n_bits).map(move |j| alloc::vec![i, j]))
        .map(|pos| gap_entry(witness, pos))
        .collect::<Result<Vec<_>>>()?;
    let max_subset_gap = singleton_gaps
        .iter()
        .chain(&pair_gaps)
        .map(|g| g.epsilon)
        .fold(0.0, f64::max);

    Ok(InterpretationGapReport {
        n_bits,
        epsilon,
        uniform_p1,
        perceived_p1_bound,
        actual_p1: extremal.p1_star,
        advantage_ratio: extremal.p1_star / uniform_p1,
        reading_violated: extremal.p1_star > perceived_p1_bound + 1e-15,
        maximal_coupling_mismatch: variational_distance(witness, &uniform)?,
        independent_coupling_mismatch: independent_mismatch(witness, &uniform)?,
        singleton_gaps,
        pair_gaps,
        max_subset_gap,
    })
}
