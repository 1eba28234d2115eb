//! Joint distributions with prescribed marginals.

use alloc::vec::Vec;

use crate::dist::{variational_distance, KeyDistribution};
use crate::error::{Error, Result};
use crate::math::neumaier_sum;

/// Largest key length for which the full `2^n × 2^n` joint table is built.
pub const MAX_COUPLING_BITS: u32 = 10;

/// Joint distribution of `(X, Y)` over pairs of n-bit strings, row-major in `x`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct JointDistribution {
    pub n_bits: u32,
    pub joint: Vec<f64>,
}

impl JointDistribution {
    fn size(&self) -> usize {
        1usize << self.n_bits
    }

    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.joint[x * self.size() + y]
    }

    /// Row sums: the distribution of `X`.
    pub fn first_marginal(&self) -> Vec<f64> {
        let n = self.size();
        (0..n)
            .map(|x| neumaier_sum((0..n).map(|y| self.get(x, y))))
            .collect()
    }

    /// Column sums: the distribution of `Y`.
    pub fn second_marginal(&self) -> Vec<f64> {
        let n = self.size();
        (0..n)
            .map(|y| neumaier_sum((0..n).map(|x| self.get(x, y))))
            .collect()
    }

    /// `Pr[X ≠ Y]`
    pub fn mismatch_probability(&self) -> f64 {
        let n = self.size();
        neumaier_sum(
            (0..n).flat_map(|x| (0..n).filter(move |&y| y != x).map(move |y| (x, y)))
                .map(|(x, y)| self.get(x, y)),
        )
    }
}

fn dense_pair(p: &KeyDistribution, q: &KeyDistribution) -> Result<(Vec<f64>, Vec<f64>)> {
    if p.n_bits() != q.n_bits() {
        return Err(Error::DimensionMismatch {
            left: p.n_bits() as usize,
            right: q.n_bits() as usize,
        });
    }
    if p.n_bits() > MAX_COUPLING_BITS {
        return Err(Error::BitLength {
            n_bits: p.n_bits(),
            max: MAX_COUPLING_BITS,
        });
    }
    Ok((p.to_dense()?, q.to_dense()?))
}

/// Coupling that keeps `min(p_i, q_i)` on the diagonal and pairs the excess
/// of `P` with the excess of `Q` proportionally, so `Pr[X ≠ Y] = δ(P, Q)`.
pub fn maximal_coupling(p: &KeyDistribution, q: &KeyDistribution) -> Result<JointDistribution> {
    let (pv, qv) = dense_pair(p, q)?;
    let n = pv.len();
    let delta = variational_distance(p, q)?;
    let mut joint = alloc::vec![0.0; n * n];
    for i in 0..n {
        joint[i * n + i] = pv[i].min(qv[i]);
    }
    if delta > 0.0 {
        let excess_p: Vec<f64> = pv.iter().zip(&qv).map(|(a, b)| (a - b).max(0.0)).collect();
        let excess_q: Vec<f64> = pv.iter().zip(&qv).map(|(a, b)| (b - a).max(0.0)).collect();
        for (x, &ex) in excess_p.iter().enumerate().filter(|(_, e)| **e > 0.0) {
            for (y, &ey) in excess_q.iter().enumerate().filter(|(_, e)| **e > 0.0) {
                joint[x * n + y] = ex * ey / delta;
            }
        }
    }
    Ok(JointDistribution {
        n_bits: p.n_bits(),
        joint,
    })
}

/// Product coupling `p_x q_y`.
pub fn independent_coupling(p: &KeyDistribution, q: &KeyDistribution) -> Result<JointDistribution> {
    let (pv, qv) = dense_pair(p, q)?;
    let joint = pv
        .iter()
        .flat_map(|&a| qv.iter().map(move |&b| a * b))
        .collect();
    Ok(JointDistribution {
        n_bits: p.n_bits(),
        joint,
    })
}

/// `1 − Σ_i p_i q_i`, the mismatch of the product coupling, without the table.
pub fn independent_mismatch(p: &KeyDistribution, q: &KeyDistribution) -> Result<f64> {
    if p.n_bits() != q.n_bits() {
        return Err(Error::DimensionMismatch {
            left: p.n_bits() as usize,
            right: q.n_bits() as usize,
        });
    }
    let collision = neumaier_sum(p.iter_nonzero().map(|(i, x)| x * q.prob(i)));
    Ok(1.0 - collision)
}
