//! Float helpers for `no_std` builds.

#[inline]
pub(crate) fn log2(x: f64) -> f64 {
    libm::log2(x)
}

#[inline]
pub(crate) fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}

#[inline]
pub(crate) fn abs(x: f64) -> f64 {
    libm::fabs(x)
}

#[inline]
pub(crate) fn ln(x: f64) -> f64 {
    libm::log(x)
}

#[inline]
pub(crate) fn exp2(x: f64) -> f64 {
    libm::exp2(x)
}

/// `x log2 x` with the convention `0 log 0 = 0`.
#[inline]
pub(crate) fn xlog2x(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        x * log2(x)
    }
}

/// Binary entropy in bits.
pub fn binary_entropy(p: f64) -> f64 {
    0.0 - (xlog2x(p) + xlog2x(1.0 - p))
}

/// Compensated (Neumaier) summation.
pub fn neumaier_sum<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    let mut sum = 0.0_f64;
    let mut comp = 0.0_f64;
    for v in values {
        let t = sum + v;
        if abs(sum) >= abs(v) {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

/// `2^-n` for integer `n`, exact.
#[inline]
pub(crate) fn pow2_neg(n: u32) -> f64 {
    exp2(-(n as f64))
}

/// `-log2 p`, with `+0.0` at `p = 1`.
#[inline]
pub(crate) fn neg_log2(p: f64) -> f64 {
    0.0 - log2(p)
}
