//! Exact constants for the moment system of a binary orthogonal array.
//!
//! Distance distributions satisfy `Σ_i w_i (1 − 2i/n)^k = b_k · M` for
//! `k = 0..=τ`. Multiplying through by `n^k` clears every denominator:
//! `Σ_i w_i (n − 2i)^k = M · T_k` with `T_k = 2^{-n} Σ_d C(n,d)(n − 2d)^k`.
//! `T_k` is the k-th moment of a sum of `n` independent ±1 variables, so it
//! is a nonnegative integer for even `k` and zero for odd `k`.

use num_rational::Ratio;

use crate::error::{Error, Result};

/// Largest length supported by the moment tables and enumeration kernels.
pub const MAX_LENGTH: usize = 16;

/// Exact binomial coefficient `C(n, k)` for `k <= n <= 64`.
pub fn binomial(n: u32, k: u32) -> Result<u128> {
    if n > 64 || k > n {
        return Err(Error::OutOfRange(format!("binomial({n}, {k})")));
    }
    let k = k.min(n - k) as u128;
    let n = n as u128;
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) is divisible by (i + 1) at every step
        acc = acc * (n - i) / (i + 1);
    }
    Ok(acc)
}

/// `T_k = 2^{-n} Σ_d C(n,d)(n − 2d)^k`, the denominator-cleared `b_k · n^k`.
pub fn moment_constant(n: usize, k: usize) -> Result<i128> {
    if n == 0 || n > MAX_LENGTH || k > n {
        return Err(Error::OutOfRange(format!("moment_constant({n}, {k})")));
    }
    Ok(raw_moment_sum(n, k)? >> n)
}

/// `Σ_d C(n,d)(n − 2d)^k` without the `2^{-n}` normalisation.
pub(crate) fn raw_moment_sum(n: usize, k: usize) -> Result<i128> {
    let mut sum: i128 = 0;
    for d in 0..=n {
        let c = binomial(n as u32, d as u32)? as i128;
        sum += c * ipow(n as i64 - 2 * d as i64, k);
    }
    Ok(sum)
}

/// Integer power with `0^0 = 1`.
pub fn ipow(base: i64, exp: usize) -> i128 {
    let mut acc: i128 = 1;
    for _ in 0..exp {
        acc *= base as i128;
    }
    acc
}

/// The cleared moment constants `T_0..=T_n` for one length.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MomentTable {
    n: usize,
    t: Vec<i128>,
}

impl MomentTable {
    pub fn new(n: usize) -> Result<Self> {
        let t = (0..=n)
            .map(|k| moment_constant(n, k))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { n, t })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `T_k`.
    pub fn get(&self, k: usize) -> i128 {
        self.t[k]
    }

    pub fn as_slice(&self) -> &[i128] {
        &self.t
    }

    /// `b_k = T_k / n^k` as an exact rational.
    pub fn b(&self, k: usize) -> Ratio<i128> {
        Ratio::new(self.t[k], ipow(self.n as i64, k))
    }
}

/// Evaluates the binary Krawtchouk polynomial `Q_k^{(n)}` at `t = 1 − 2d/n`
/// using the three-term recurrence
/// `(n − k) Q_{k+1}(t) = n t Q_k(t) − k Q_{k−1}(t)`.
///
/// Only used to cross-check the moment constants.
pub fn krawtchouk_eval(n: usize, k: usize, d: usize) -> Result<Ratio<i128>> {
    if n == 0 || n > MAX_LENGTH || k > n || d > n {
        return Err(Error::OutOfRange(format!("krawtchouk_eval({n}, {k}, {d})")));
    }
    let t = Ratio::new(n as i128 - 2 * d as i128, n as i128);
    Ok(krawtchouk_at(n, k, t))
}

/// Same recurrence at an arbitrary rational point.
pub fn krawtchouk_at(n: usize, k: usize, t: Ratio<i128>) -> Ratio<i128> {
    let nn = Ratio::from_integer(n as i128);
    let mut prev = Ratio::from_integer(1);
    if k == 0 {
        return prev;
    }
    let mut cur = t;
    for j in 1..k {
        let jj = Ratio::from_integer(j as i128);
        let next = (nn * t * cur - jj * prev) / Ratio::from_integer((n - j) as i128);
        prev = cur;
        cur = next;
    }
    cur
}
