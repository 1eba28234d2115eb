//! JSON shapes of the core types.

use alloc::vec::Vec;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dist::KeyDistribution;
use crate::error::Error;
use crate::pa::LinearHash;
use crate::quantum::{CqEnsemble, DensityOperator, Matrix};

/// `{ "n_bits": n, "probs": [[index, prob], ...] }`, nonzero entries only.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub(crate) struct KeyDistributionRepr {
    n_bits: u32,
    probs: Vec<(u32, f64)>,
}

impl From<KeyDistribution> for KeyDistributionRepr {
    fn from(p: KeyDistribution) -> Self {
        Self {
            n_bits: p.n_bits(),
            probs: p.iter_nonzero().collect(),
        }
    }
}

impl TryFrom<KeyDistributionRepr> for KeyDistribution {
    type Error = Error;

    fn try_from(r: KeyDistributionRepr) -> Result<Self, Error> {
        KeyDistribution::from_sparse(r.n_bits, r.probs)
    }
}

/// `{ "dim": d, "re": [[...]], "im": [[...]] }`
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub(crate) struct DensityOperatorRepr {
    dim: usize,
    re: Vec<Vec<f64>>,
    im: Vec<Vec<f64>>,
}

impl From<DensityOperator> for DensityOperatorRepr {
    fn from(rho: DensityOperator) -> Self {
        let m = rho.matrix();
        let dim = m.dim();
        let part = |f: fn(&Complex64) -> f64| {
            (0..dim)
                .map(|i| (0..dim).map(|j| f(&m[(i, j)])).collect())
                .collect()
        };
        Self {
            dim,
            re: part(|z| z.re),
            im: part(|z| z.im),
        }
    }
}

impl TryFrom<DensityOperatorRepr> for DensityOperator {
    type Error = Error;

    fn try_from(r: DensityOperatorRepr) -> Result<Self, Error> {
        let dim = r.dim;
        let square = |rows: &Vec<Vec<f64>>| rows.len() == dim && rows.iter().all(|row| row.len() == dim);
        if !square(&r.re) || !square(&r.im) {
            return Err(Error::InvalidDensityOperator(alloc::format!(
                "re and im must both be {dim}x{dim}"
            )));
        }
        let data = (0..dim)
            .flat_map(|i| (0..dim).map(move |j| (i, j)))
            .map(|(i, j)| Complex64::new(r.re[i][j], r.im[i][j]))
            .collect();
        let m = Matrix::from_row_major(dim, data)
            .ok_or_else(|| Error::InvalidDensityOperator("bad shape".into()))?;
        DensityOperator::new(m)
    }
}

/// `{ "weights": [...], "states": [DensityOperator, ...] }`
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub(crate) struct CqEnsembleRepr {
    weights: Vec<f64>,
    states: Vec<DensityOperator>,
}

impl From<CqEnsemble> for CqEnsembleRepr {
    fn from(e: CqEnsemble) -> Self {
        Self {
            weights: e.weights().to_vec(),
            states: e.states().to_vec(),
        }
    }
}

impl TryFrom<CqEnsembleRepr> for CqEnsemble {
    type Error = Error;

    fn try_from(r: CqEnsembleRepr) -> Result<Self, Error> {
        CqEnsemble::new(r.weights, r.states)
    }
}

/// `{ "m": m, "n": n, "seed": seed, "rows": [bitmask, ...] }`
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub(crate) struct LinearHashRepr {
    m: u32,
    n: u32,
    seed: u64,
    rows: Vec<u32>,
}

impl From<LinearHash> for LinearHashRepr {
    fn from(h: LinearHash) -> Self {
        Self {
            m: h.in_bits(),
            n: h.out_bits(),
            seed: h.seed(),
            rows: h.rows().to_vec(),
        }
    }
}

impl TryFrom<LinearHashRepr> for LinearHash {
    type Error = Error;

    fn try_from(r: LinearHashRepr) -> Result<Self, Error> {
        LinearHash::from_rows(r.m, r.n, r.rows, r.seed)
    }
}
