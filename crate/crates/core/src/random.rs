//! Seeded generators for random distributions, states and measurements.

use alloc::vec::Vec;

use num_complex::Complex64;
use rand::Rng;

use crate::dist::KeyDistribution;
use crate::error::Result;
use crate::math;
use crate::quantum::{CqEnsemble, DensityOperator, Matrix, Povm};

/// Standard normal sample (Box–Muller).
pub fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    let u1: f64 = 1.0 - rng.random::<f64>();
    let u2: f64 = rng.random::<f64>();
    math::sqrt(-2.0 * math::ln(u1)) * libm::cos(core::f64::consts::TAU * u2)
}

fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    Complex64::new(gaussian(rng), gaussian(rng))
}

/// Flat-Dirichlet probability vector of the given length.
pub fn random_simplex_point<R: Rng + ?Sized>(len: usize, rng: &mut R) -> Vec<f64> {
    let raw: Vec<f64> = (0..len)
        .map(|_| -math::ln(1.0 - rng.random::<f64>()))
        .collect();
    let total = math::neumaier_sum(raw.iter().copied());
    raw.into_iter().map(|x| x / total).collect()
}

/// Random dense distribution on `n_bits`.
pub fn random_distribution<R: Rng + ?Sized>(n_bits: u32, rng: &mut R) -> Result<KeyDistribution> {
    KeyDistribution::from_dense(n_bits, random_simplex_point(1usize << n_bits, rng))
}

/// Normalized complex Gaussian vector.
pub fn random_pure_state<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Vec<Complex64> {
    let psi: Vec<Complex64> = (0..dim).map(|_| complex_gaussian(rng)).collect();
    let norm = math::sqrt(psi.iter().map(|z| z.norm_sqr()).sum());
    psi.into_iter().map(|z| z / norm).collect()
}

/// Mixture of `rank` random pure states with flat-Dirichlet weights.
pub fn random_density<R: Rng + ?Sized>(
    dim: usize,
    rank: usize,
    rng: &mut R,
) -> Result<DensityOperator> {
    let weights = random_simplex_point(rank.max(1), rng);
    let states = weights
        .iter()
        .map(|_| DensityOperator::pure(&random_pure_state(dim, rng)))
        .collect::<Result<Vec<_>>>()?;
    DensityOperator::mixture(&weights, &states)
}

/// Random POVM: positive matrices `A_i = G_i G_i†` normalized as
/// `S^{-1/2} A_i S^{-1/2}` with `S = Σ A_i`.
pub fn random_povm<R: Rng + ?Sized>(dim: usize, outcomes: usize, rng: &mut R) -> Result<Povm> {
    let positives: Vec<Matrix> = (0..outcomes.max(1))
        .map(|_| {
            let g = Matrix::from_fn(dim, |_, _| complex_gaussian(rng));
            &g * &g.adjoint()
        })
        .collect();
    let total = positives
        .iter()
        .fold(Matrix::zeros(dim), |acc, a| &acc + a);
    let inv_sqrt = total.eigh().map_values(|x| 1.0 / math::sqrt(x));
    let mut elements: Vec<Matrix> = positives
        .iter()
        .map(|a| (&(&inv_sqrt * a) * &inv_sqrt).hermitian_part())
        .collect();
    // push the residual completeness error into the last element
    let sum = elements.iter().fold(Matrix::zeros(dim), |acc, e| &acc + e);
    let fix = &Matrix::identity(dim) - &sum;
    if let Some(last) = elements.last_mut() {
        *last = &*last + &fix;
    }
    Povm::new(elements)
}

/// Ensemble of `keys` random probe states with flat-Dirichlet weights, or
/// equal weights when `uniform_weights` is set.
pub fn random_cq_ensemble<R: Rng + ?Sized>(
    keys: usize,
    dim: usize,
    uniform_weights: bool,
    rng: &mut R,
) -> Result<CqEnsemble> {
    let states = (0..keys)
        .map(|_| {
            let rank = rng.random_range(1..=dim);
            random_density(dim, rank, rng)
        })
        .collect::<Result<Vec<_>>>()?;
    if uniform_weights {
        CqEnsemble::uniform(states)
    } else {
        CqEnsemble::new(random_simplex_point(keys, rng), states)
    }
}
