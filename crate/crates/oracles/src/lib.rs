//! Slow, independent reference computations for the qkd-audit test suites.
//!
//! Nothing here depends on `qkd-audit-core`. Inputs are plain slices,
//! matrices are row-major `Complex64` slices, and linear algebra goes through
//! nalgebra.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use rand::Rng;

/// Shannon entropy in bits.
pub fn entropy(p: &[f64]) -> f64 {
    p.iter()
        .filter(|&&x| x > 0.0)
        .map(|&x| -x * x.log2())
        .sum()
}

pub fn max_prob(p: &[f64]) -> f64 {
    p.iter().copied().fold(0.0, f64::max)
}

/// `½ Σ |p_i − q_i|`
pub fn half_l1(p: &[f64], q: &[f64]) -> f64 {
    0.5 * p.iter().zip(q).map(|(a, b)| (a - b).abs()).sum::<f64>()
}

/// Bit `position` of `index` as a string of `n_bits` bits, position 0 leftmost.
pub fn bit(index: usize, n_bits: u32, position: u32) -> u8 {
    ((index >> (n_bits - 1 - position)) & 1) as u8
}

/// Marginal over `positions` by summing every outcome into its projected string.
pub fn brute_marginal(p: &[f64], n_bits: u32, positions: &[u32]) -> Vec<f64> {
    let mut out = vec![0.0; 1 << positions.len()];
    for (x, &px) in p.iter().enumerate() {
        let mut y = 0usize;
        for &pos in positions {
            y = (y << 1) | bit(x, n_bits, pos) as usize;
        }
        out[y] += px;
    }
    out
}

fn entropy_of_spike_with_tail(p: f64, tail: &[f64]) -> f64 {
    let mut h = if p > 0.0 { -p * p.log2() } else { 0.0 };
    for &t in tail {
        let x = (1.0 - p) * t;
        if x > 0.0 {
            h -= x * x.log2();
        }
    }
    h
}

/// Largest top probability found by randomized search over the simplex
/// subject to `n − H(P) ≤ info_bits`.
///
/// Each restart draws a random tail shape, flattens it a random number of
/// times by `t ← t^½` (renormalized), then bisects on the top mass `p` with
/// the tail fixed. The result is a feasible value, so it can only fall short
/// of the true supremum.
pub fn max_guess_given_information<R: Rng + ?Sized>(
    n_bits: u32,
    info_bits: f64,
    restarts: usize,
    rng: &mut R,
) -> f64 {
    let size = 1usize << n_bits;
    let floor = 1.0 / size as f64;
    // Rounding slack on the entropy constraint.
    let target = n_bits as f64 - info_bits - 1e-13;
    if size == 1 {
        return 1.0;
    }
    let mut best = floor;
    let mut tail = vec![0.0; size - 1];
    for _ in 0..restarts {
        for t in tail.iter_mut() {
            *t = -rng.random::<f64>().max(1e-300).ln();
        }
        let flatten = rng.random_range(0..=40);
        for _ in 0..flatten {
            for t in tail.iter_mut() {
                *t = t.sqrt();
            }
        }
        let total: f64 = tail.iter().sum();
        tail.iter_mut().for_each(|t| *t /= total);

        // H(p) is decreasing for p above the tail's largest entry.
        let t_max = max_prob(&tail);
        let mut lo = t_max / (1.0 + t_max);
        if entropy_of_spike_with_tail(lo, &tail) < target {
            continue;
        }
        let mut hi = 1.0;
        if entropy_of_spike_with_tail(hi, &tail) >= target {
            return 1.0;
        }
        for _ in 0..100 {
            let mid = 0.5 * (lo + hi);
            if entropy_of_spike_with_tail(mid, &tail) >= target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        best = best.max(lo);
    }
    best
}

/// Largest top probability found by hill climbing inside the ball
/// `δ(P, U) ≤ epsilon`.
///
/// Each restart starts from a random point of the ball and repeatedly moves
/// the most mass allowed from a random outcome onto outcome 0.
pub fn max_guess_given_vd<R: Rng + ?Sized>(
    n_bits: u32,
    epsilon: f64,
    restarts: usize,
    steps: usize,
    rng: &mut R,
) -> f64 {
    let size = 1usize << n_bits;
    let uniform = vec![1.0 / size as f64; size];
    let mut best = 0.0_f64;
    for _ in 0..restarts {
        let mut raw: Vec<f64> = (0..size)
            .map(|_| -rng.random::<f64>().max(1e-300).ln())
            .collect();
        let total: f64 = raw.iter().sum();
        raw.iter_mut().for_each(|x| *x /= total);
        let d = half_l1(&raw, &uniform);
        let lambda = if d > 0.0 {
            (epsilon / d).min(1.0) * rng.random::<f64>()
        } else {
            0.0
        };
        let mut p: Vec<f64> = raw
            .iter()
            .zip(&uniform)
            .map(|(r, u)| u + lambda * (r - u))
            .collect();

        for _ in 0..steps {
            let j = rng.random_range(1..size.max(2));
            if j >= size {
                break;
            }
            let feasible = |t: f64, p: &[f64]| {
                let mut q = p.to_vec();
                q[0] += t;
                q[j] -= t;
                half_l1(&q, &uniform) <= epsilon + 1e-15
            };
            let (mut lo, mut hi) = (0.0, p[j]);
            if feasible(hi, &p) {
                lo = hi;
            } else {
                for _ in 0..80 {
                    let mid = 0.5 * (lo + hi);
                    if feasible(mid, &p) {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
            }
            p[0] += lo;
            p[j] -= lo;
        }
        best = best.max(max_prob(&p));
    }
    best
}

pub fn to_nalgebra(dim: usize, row_major: &[Complex64]) -> DMatrix<Complex64> {
    DMatrix::from_row_slice(dim, dim, row_major)
}

fn hermitian_eigenvalues(m: DMatrix<Complex64>) -> Vec<f64> {
    let h = (&m + m.adjoint()) * Complex64::new(0.5, 0.0);
    SymmetricEigen::new(h).eigenvalues.iter().copied().collect()
}

/// `½ ‖A − B‖₁` from nalgebra's Hermitian eigensolver.
pub fn trace_distance(dim: usize, a: &[Complex64], b: &[Complex64]) -> f64 {
    let diff = to_nalgebra(dim, a) - to_nalgebra(dim, b);
    0.5 * hermitian_eigenvalues(diff).iter().map(|x| x.abs()).sum::<f64>()
}

/// Outcome distance of the two-outcome Helstrom measurement: project onto the
/// positive eigenspace of `A − B`.
pub fn helstrom_distance(dim: usize, a: &[Complex64], b: &[Complex64]) -> f64 {
    let diff = to_nalgebra(dim, a) - to_nalgebra(dim, b);
    let h = (&diff + diff.adjoint()) * Complex64::new(0.5, 0.0);
    let eig = SymmetricEigen::new(h.clone());
    let mut proj = DMatrix::<Complex64>::zeros(dim, dim);
    for k in 0..dim {
        if eig.eigenvalues[k] > 0.0 {
            let v = eig.eigenvectors.column(k);
            proj += &v * v.adjoint();
        }
    }
    (proj * h).trace().re
}

/// Lower bound on the trace distance from random rank-`k` projectors, built
/// by QR of random complex matrices.
pub fn random_projector_distance<R: Rng + ?Sized>(
    dim: usize,
    a: &[Complex64],
    b: &[Complex64],
    samples: usize,
    rng: &mut R,
) -> f64 {
    let diff = to_nalgebra(dim, a) - to_nalgebra(dim, b);
    let mut best = 0.0_f64;
    for _ in 0..samples {
        let g = DMatrix::<Complex64>::from_fn(dim, dim, |_, _| {
            Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
        });
        let q = g.qr().q();
        let rank = rng.random_range(0..=dim);
        let cols = q.columns(0, rank);
        let proj = &cols * cols.adjoint();
        best = best.max((proj * &diff).trace().re.abs());
    }
    best
}

/// `Tr(E ρ)` for every POVM element.
pub fn outcome_probs(dim: usize, rho: &[Complex64], povm: &[Vec<Complex64>]) -> Vec<f64> {
    let r = to_nalgebra(dim, rho);
    povm.iter()
        .map(|e| (to_nalgebra(dim, e) * &r).trace().re)
        .collect()
}

/// Trace distance between `Σ_k w_k |k⟩⟨k| ⊗ ρ_k` and `(I/N) ⊗ Σ_k w_k ρ_k`,
/// built as full `N·d` matrices.
pub fn cq_distance_tensor(weights: &[f64], states: &[Vec<Complex64>], dim: usize) -> f64 {
    let n = weights.len();
    let big = n * dim;
    let mut avg = DMatrix::<Complex64>::zeros(dim, dim);
    for (w, s) in weights.iter().zip(states) {
        avg += to_nalgebra(dim, s) * Complex64::new(*w, 0.0);
    }
    let mut joint = DMatrix::<Complex64>::zeros(big, big);
    let mut product = DMatrix::<Complex64>::zeros(big, big);
    for k in 0..n {
        let basis = DMatrix::<Complex64>::from_fn(n, n, |i, j| {
            if i == k && j == k {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        let rho_k = to_nalgebra(dim, &states[k]) * Complex64::new(weights[k], 0.0);
        joint += basis.kronecker(&rho_k);
        product += basis.kronecker(&avg) * Complex64::new(1.0 / n as f64, 0.0);
    }
    0.5 * hermitian_eigenvalues(joint - product)
        .iter()
        .map(|x| x.abs())
        .sum::<f64>()
}

/// Binary matrix as explicit rows of 0/1 entries.
pub type BitMatrix = Vec<Vec<u8>>;

/// Rank over GF(2) by Gaussian elimination on explicit entries.
pub fn bit_rank(m: &BitMatrix) -> usize {
    let mut a = m.clone();
    let cols = a.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(pivot) = (rank..a.len()).find(|&r| a[r][c] == 1) else {
            continue;
        };
        a.swap(rank, pivot);
        for r in 0..a.len() {
            if r != rank && a[r][c] == 1 {
                let pivot_row = a[rank].clone();
                for (x, y) in a[r].iter_mut().zip(pivot_row) {
                    *x ^= y;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Every `rows × cols` binary matrix of full row rank.
pub fn full_rank_matrices(rows: usize, cols: usize) -> Vec<BitMatrix> {
    let cells = rows * cols;
    (0u64..1 << cells)
        .map(|code| {
            (0..rows)
                .map(|r| {
                    (0..cols)
                        .map(|c| ((code >> (r * cols + c)) & 1) as u8)
                        .collect()
                })
                .collect::<BitMatrix>()
        })
        .filter(|m| bit_rank(m) == rows)
        .collect()
}

/// Image of input string `x` (`m` bits) under `h`, computed entry by entry.
pub fn apply_bits(h: &BitMatrix, m: u32, x: usize) -> usize {
    let mut y = 0usize;
    for row in h {
        let mut acc = 0u8;
        for (j, &e) in row.iter().enumerate() {
            acc ^= e & bit(x, m, j as u32);
        }
        y = (y << 1) | acc as usize;
    }
    y
}

/// Distribution of `h(X)` by summing each fiber.
pub fn pushforward(p_x: &[f64], m: u32, h: &BitMatrix) -> Vec<f64> {
    let mut out = vec![0.0; 1 << h.len()];
    for (x, &px) in p_x.iter().enumerate() {
        out[apply_bits(h, m, x)] += px;
    }
    out
}

/// Pack explicit rows into bitmasks, column 0 as the most significant bit.
pub fn row_masks(h: &BitMatrix) -> Vec<u32> {
    h.iter()
        .map(|row| row.iter().fold(0u32, |acc, &e| (acc << 1) | e as u32))
        .collect()
}

/// BB84 intercept-resend error rate by enumerating Alice's bit and basis,
/// Eve's basis and guess, and Bob's basis. Returns `(sifted, errors)` weights
/// out of the 32 equally likely cases, Bob's random outcome counted as two
/// half-weight branches.
pub fn bb84_intercept_resend_enumeration() -> (f64, f64) {
    let mut sifted = 0.0;
    let mut errors = 0.0;
    for a in 0..2u8 {
        for alpha in 0..2u8 {
            for gamma in 0..2u8 {
                for beta in 0..2u8 {
                    if beta != alpha {
                        continue;
                    }
                    // Eve's result: correct in a matching basis, else uniform.
                    let eve: Vec<(u8, f64)> = if gamma == alpha {
                        vec![(a, 1.0)]
                    } else {
                        vec![(0, 0.5), (1, 0.5)]
                    };
                    for (e, pe) in eve {
                        let bob: Vec<(u8, f64)> = if beta == gamma {
                            vec![(e, 1.0)]
                        } else {
                            vec![(0, 0.5), (1, 0.5)]
                        };
                        for (b, pb) in bob {
                            let w = pe * pb;
                            sifted += w;
                            if b != a {
                                errors += w;
                            }
                        }
                    }
                }
            }
        }
    }
    (sifted, errors)
}
