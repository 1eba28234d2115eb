use alloc::format;
use alloc::vec::Vec;

use num_complex::Complex64;

use super::matrix::Matrix;
use crate::error::{Error, Result};
use crate::math::{self, neumaier_sum};

/// Largest supported Hilbert-space dimension.
pub const MAX_DIM: usize = 64;
/// Tolerance on Hermiticity, positivity, trace and POVM completeness.
pub const QUANTUM_TOL: f64 = 1e-10;

/// Hermitian, positive semidefinite, unit-trace matrix.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(
    feature = "serde",
    derive(serde::Serialize, serde::Deserialize),
    serde(
        try_from = "crate::serde_impls::DensityOperatorRepr",
        into = "crate::serde_impls::DensityOperatorRepr"
    )
)]
pub struct DensityOperator {
    matrix: Matrix,
}

fn check_dim(dim: usize) -> Result<()> {
    if dim == 0 || dim > MAX_DIM {
        return Err(Error::InvalidDensityOperator(format!(
            "dimension {dim} outside 1..={MAX_DIM}"
        )));
    }
    Ok(())
}

impl DensityOperator {
    /// Validates `matrix` and stores its Hermitian part.
    pub fn new(matrix: Matrix) -> Result<Self> {
        check_dim(matrix.dim())?;
        let defect = matrix.hermiticity_defect();
        if defect > QUANTUM_TOL {
            return Err(Error::InvalidDensityOperator(format!(
                "not Hermitian (defect {defect:e})"
            )));
        }
        let tr = matrix.trace();
        if math::abs(tr.re - 1.0) > QUANTUM_TOL || math::abs(tr.im) > QUANTUM_TOL {
            return Err(Error::InvalidDensityOperator(format!(
                "trace {} + {}i",
                tr.re, tr.im
            )));
        }
        let matrix = matrix.hermitian_part();
        let min = matrix.eigenvalues()[0];
        if min < -QUANTUM_TOL {
            return Err(Error::InvalidDensityOperator(format!(
                "negative eigenvalue {min:e}"
            )));
        }
        Ok(Self { matrix })
    }

    /// `|psi><psi|` for a nonzero vector, normalized first.
    pub fn pure(psi: &[Complex64]) -> Result<Self> {
        check_dim(psi.len())?;
        let norm = math::sqrt(psi.iter().map(|z| z.norm_sqr()).sum());
        if norm == 0.0 {
            return Err(Error::InvalidDensityOperator("zero state vector".into()));
        }
        let unit: Vec<Complex64> = psi.iter().map(|z| z / norm).collect();
        Ok(Self {
            matrix: Matrix::outer(&unit),
        })
    }

    /// `I / dim`
    pub fn maximally_mixed(dim: usize) -> Result<Self> {
        check_dim(dim)?;
        Ok(Self {
            matrix: Matrix::identity(dim).scale(1.0 / dim as f64),
        })
    }

    /// Diagonal state from a probability vector.
    pub fn diagonal(probs: &[f64]) -> Result<Self> {
        Self::new(Matrix::diagonal(probs))
    }

    /// `Σ w_i ρ_i`
    pub fn mixture(weights: &[f64], states: &[DensityOperator]) -> Result<Self> {
        if weights.len() != states.len() {
            return Err(Error::DimensionMismatch {
                left: weights.len(),
                right: states.len(),
            });
        }
        let first = states.first().ok_or(Error::EmptyEnsemble)?;
        let dim = first.dim();
        let mut acc = Matrix::zeros(dim);
        for (w, s) in weights.iter().zip(states) {
            if s.dim() != dim {
                return Err(Error::DimensionMismatch {
                    left: dim,
                    right: s.dim(),
                });
            }
            acc = &acc + &s.matrix.scale(*w);
        }
        Self::new(acc)
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }
}

/// Positive operator-valued measure on a fixed dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct Povm {
    elements: Vec<Matrix>,
}

impl Povm {
    pub fn new(elements: Vec<Matrix>) -> Result<Self> {
        let dim = elements
            .first()
            .map(Matrix::dim)
            .ok_or_else(|| Error::InvalidPovm("no outcomes".into()))?;
        check_dim(dim).map_err(|_| Error::InvalidPovm(format!("dimension {dim}")))?;
        let mut total = Matrix::zeros(dim);
        for (k, e) in elements.iter().enumerate() {
            if e.dim() != dim {
                return Err(Error::InvalidPovm(format!(
                    "element {k} has dimension {}, expected {dim}",
                    e.dim()
                )));
            }
            if e.hermiticity_defect() > QUANTUM_TOL {
                return Err(Error::InvalidPovm(format!("element {k} is not Hermitian")));
            }
            let min = e.eigenvalues()[0];
            if min < -QUANTUM_TOL {
                return Err(Error::InvalidPovm(format!(
                    "element {k} has negative eigenvalue {min:e}"
                )));
            }
            total = &total + e;
        }
        let defect = total.max_abs_diff(&Matrix::identity(dim));
        if defect > QUANTUM_TOL {
            return Err(Error::InvalidPovm(format!(
                "elements sum to identity only within {defect:e}"
            )));
        }
        Ok(Self { elements })
    }

    /// Projective measurement in the computational basis.
    pub fn computational(dim: usize) -> Result<Self> {
        Self::new(
            (0..dim)
                .map(|k| {
                    let mut e = Matrix::zeros(dim);
                    e[(k, k)] = Complex64::new(1.0, 0.0);
                    e
                })
                .collect(),
        )
    }

    pub fn dim(&self) -> usize {
        self.elements[0].dim()
    }

    pub fn elements(&self) -> &[Matrix] {
        &self.elements
    }

    pub fn num_outcomes(&self) -> usize {
        self.elements.len()
    }
}

/// Probabilities of the outcomes of a measurement.
#[derive(Debug, Clone, PartialEq)]
pub struct OutcomeDistribution(Vec<f64>);

impl OutcomeDistribution {
    pub fn probs(&self) -> &[f64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }

    pub fn variational_distance(&self, other: &OutcomeDistribution) -> Result<f64> {
        crate::dist::half_l1(&self.0, &other.0)
    }
}

/// Outcome `i` occurs with probability `Tr(E_i ρ)`.
pub fn measure(rho: &DensityOperator, povm: &Povm) -> Result<OutcomeDistribution> {
    if rho.dim() != povm.dim() {
        return Err(Error::DimensionMismatch {
            left: rho.dim(),
            right: povm.dim(),
        });
    }
    let mut probs = Vec::with_capacity(povm.num_outcomes());
    for (k, e) in povm.elements.iter().enumerate() {
        let t = e.trace_product(&rho.matrix);
        if t.re < -QUANTUM_TOL || math::abs(t.im) > QUANTUM_TOL {
            return Err(Error::UnphysicalOutcome {
                outcome: k,
                value: t.re,
            });
        }
        probs.push(t.re.max(0.0));
    }
    let total = neumaier_sum(probs.iter().copied());
    if total <= 0.0 {
        return Err(Error::UnphysicalOutcome {
            outcome: 0,
            value: total,
        });
    }
    for p in &mut probs {
        *p /= total;
    }
    Ok(OutcomeDistribution(probs))
}

/// `½ ‖ρ₁ − ρ₂‖₁`
pub fn trace_distance(rho1: &DensityOperator, rho2: &DensityOperator) -> Result<f64> {
    if rho1.dim() != rho2.dim() {
        return Err(Error::DimensionMismatch {
            left: rho1.dim(),
            right: rho2.dim(),
        });
    }
    Ok((0.5 * (&rho1.matrix - &rho2.matrix).trace_norm()).clamp(0.0, 1.0))
}

/// Classical-quantum ensemble `ρ_KE = Σ_k w_k |k><k| ⊗ ρ_E^k`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(
    feature = "serde",
    derive(serde::Serialize, serde::Deserialize),
    serde(
        try_from = "crate::serde_impls::CqEnsembleRepr",
        into = "crate::serde_impls::CqEnsembleRepr"
    )
)]
pub struct CqEnsemble {
    weights: Vec<f64>,
    states: Vec<DensityOperator>,
}

impl CqEnsemble {
    pub fn new(weights: Vec<f64>, states: Vec<DensityOperator>) -> Result<Self> {
        if states.is_empty() {
            return Err(Error::EmptyEnsemble);
        }
        if weights.len() != states.len() {
            return Err(Error::DimensionMismatch {
                left: weights.len(),
                right: states.len(),
            });
        }
        if let Some((k, &w)) = weights
            .iter()
            .enumerate()
            .find(|(_, w)| !(w.is_finite() && **w >= 0.0))
        {
            return Err(Error::NegativeProbability {
                index: k as u64,
                value: w,
            });
        }
        let sum = neumaier_sum(weights.iter().copied());
        if math::abs(sum - 1.0) > crate::dist::STRUCTURAL_TOL {
            return Err(Error::NotNormalized { sum });
        }
        let dim = states[0].dim();
        if let Some(s) = states.iter().find(|s| s.dim() != dim) {
            return Err(Error::DimensionMismatch {
                left: dim,
                right: s.dim(),
            });
        }
        Ok(Self { weights, states })
    }

    /// Equal weights `1/N`.
    pub fn uniform(states: Vec<DensityOperator>) -> Result<Self> {
        let n = states.len();
        if n == 0 {
            return Err(Error::EmptyEnsemble);
        }
        Self::new(alloc::vec![1.0 / n as f64; n], states)
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn states(&self) -> &[DensityOperator] {
        &self.states
    }

    pub fn num_keys(&self) -> usize {
        self.states.len()
    }

    pub fn probe_dim(&self) -> usize {
        self.states[0].dim()
    }

    /// Eve's averaged probe state `ρ_E = Σ_k w_k ρ_E^k`.
    pub fn average_state(&self) -> Matrix {
        self.states
            .iter()
            .zip(&self.weights)
            .fold(Matrix::zeros(self.probe_dim()), |acc, (s, &w)| {
                &acc + &s.matrix.scale(w)
            })
    }
}

/// `d = ½ ‖ρ_KE − ρ_U ⊗ ρ_E‖₁`, evaluated block by block since both
/// operators are block diagonal in the key basis:
/// `d = ½ Σ_k ‖w_k ρ_E^k − ρ_E / N‖₁`.
pub fn cq_distance(ensemble: &CqEnsemble) -> Result<f64> {
    if ensemble.states.is_empty() {
        return Err(Error::EmptyEnsemble);
    }
    let n = ensemble.num_keys() as f64;
    let avg = ensemble.average_state().scale(1.0 / n);
    let blocks = ensemble
        .states
        .iter()
        .zip(&ensemble.weights)
        .map(|(s, &w)| (&s.matrix.scale(w) - &avg).trace_norm());
    Ok((0.5 * neumaier_sum(blocks)).clamp(0.0, 1.0))
}
