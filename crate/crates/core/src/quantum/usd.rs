//! Unambiguous discrimination of two real qubit states with overlap `s`.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use super::matrix::Matrix;
use super::state::{DensityOperator, Povm};
use crate::error::{Error, Result};
use crate::math;

/// Outcome index: the state was `|ψ₀⟩`.
pub const IDENTIFY_0: usize = 0;
/// Outcome index: the state was `|ψ₁⟩`.
pub const IDENTIFY_1: usize = 1;
/// Outcome index: no conclusion.
pub const INCONCLUSIVE: usize = 2;

fn check_overlap(overlap: f64) -> Result<()> {
    if !(0.0..1.0).contains(&overlap) {
        return Err(Error::OutOfRange {
            name: "overlap",
            value: overlap,
            range: "[0, 1)",
        });
    }
    Ok(())
}

/// `|ψ₀⟩ = (cos θ, sin θ)` and `|ψ₁⟩ = (cos θ, −sin θ)` with `cos 2θ = s`,
/// mirror images about the z axis.
pub fn signal_states(overlap: f64) -> Result<[Vec<Complex64>; 2]> {
    if !(0.0..=1.0).contains(&overlap) {
        return Err(Error::OutOfRange {
            name: "overlap",
            value: overlap,
            range: "[0, 1]",
        });
    }
    let c = math::sqrt((1.0 + overlap) / 2.0);
    let s = math::sqrt((1.0 - overlap) / 2.0);
    let re = |x: f64| Complex64::new(x, 0.0);
    Ok([vec![re(c), re(s)], vec![re(c), re(-s)]])
}

/// Density operators of the two signal states.
pub fn signal_density_operators(overlap: f64) -> Result<[DensityOperator; 2]> {
    let [a, b] = signal_states(overlap)?;
    Ok([DensityOperator::pure(&a)?, DensityOperator::pure(&b)?])
}

/// Optimal unambiguous discrimination measurement and its success probability.
#[derive(Debug, Clone, PartialEq)]
pub struct UsdMeasurement {
    pub povm: Povm,
    pub success_prob: f64,
}

/// Three-outcome POVM (identify-0, identify-1, inconclusive) that never
/// misidentifies and succeeds with probability `1 − s` on either state.
///
/// The identify-k element is `|ψ_{1−k}^⊥⟩⟨ψ_{1−k}^⊥| / (1 + s)`; the
/// inconclusive element is what remains of the identity.
pub fn usd_povm(overlap: f64) -> Result<UsdMeasurement> {
    check_overlap(overlap)?;
    let c = math::sqrt((1.0 + overlap) / 2.0);
    let s = math::sqrt((1.0 - overlap) / 2.0);
    let re = |x: f64| Complex64::new(x, 0.0);
    // orthogonal complements of ψ₁ and ψ₀
    let perp1 = [re(s), re(c)];
    let perp0 = [re(s), re(-c)];
    let scale = 1.0 / (1.0 + overlap);
    let e0 = Matrix::outer(&perp1).scale(scale);
    let e1 = Matrix::outer(&perp0).scale(scale);
    let rest = &(&Matrix::identity(2) - &e0) - &e1;
    Ok(UsdMeasurement {
        povm: Povm::new(vec![e0, e1, rest])?,
        success_prob: 1.0 - overlap,
    })
}
