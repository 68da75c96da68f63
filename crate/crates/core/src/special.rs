//! Generalized Laguerre polynomials and log-factorials.
//!
//! The displacement-operator matrix elements in the number basis need
//! `L_n^alpha(|z|^2)` for small `n` and tiny arguments, and factorial ratios
//! `(n!/m!)^{1/2}`. Both are evaluated here without ever forming large
//! factorials directly.

use crate::error::{Error, Result};

/// Arguments of a generalized Laguerre evaluation `L_n^alpha(x)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LaguerreQuery {
    pub n: u32,
    pub alpha: i32,
    pub x: f64,
}

impl LaguerreQuery {
    pub fn new(n: u32, alpha: i32, x: f64) -> Self {
        Self { n, alpha, x }
    }
}

/// Evaluates `L_n^alpha(x)` by the upward three-term recurrence in `n`:
///
/// `(k+1) L_{k+1} = (2k + 1 + alpha - x) L_k - (k + alpha) L_{k-1}`
///
/// starting from `L_0 = 1` and `L_1 = 1 + alpha - x`. For `-n <= alpha < 0`
/// the recurrence cancels badly, so the reflection
/// `L_n^{-k}(x) = (-x)^k (n-k)!/n! L_{n-k}^{k}(x)` is used instead.
/// The argument must be finite and nonnegative.
pub fn laguerre(q: LaguerreQuery) -> Result<f64> {
    let LaguerreQuery { n, alpha, x } = q;
    if !x.is_finite() || x < 0.0 {
        return Err(Error::InvalidArgument(format!(
            "Laguerre argument must be finite and >= 0, got {x}"
        )));
    }
    if alpha < 0 && alpha.unsigned_abs() <= n {
        let k = alpha.unsigned_abs();
        let prefactor = (-x).powi(k as i32) * (log_factorial(n - k) - log_factorial(n)).exp();
        return Ok(prefactor * laguerre_unchecked(n - k, k as f64, x));
    }
    Ok(laguerre_unchecked(n, alpha as f64, x))
}

pub(crate) fn laguerre_unchecked(n: u32, alpha: f64, x: f64) -> f64 {
    let mut prev = 1.0;
    if n == 0 {
        return prev;
    }
    let mut cur = 1.0 + alpha - x;
    for k in 1..n {
        let k = k as f64;
        let next = ((2.0 * k + 1.0 + alpha - x) * cur - (k + alpha) * prev) / (k + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// `ln(n!)`. Exact table up to `20!`, accumulated logarithms above.
pub fn log_factorial(n: u32) -> f64 {
    const EXACT_LIMIT: u32 = 20;
    let small = n.min(EXACT_LIMIT);
    let exact: u64 = (1..=small as u64).product();
    let mut acc = (exact as f64).ln();
    for k in (EXACT_LIMIT + 1)..=n {
        acc += (k as f64).ln();
    }
    acc
}

/// `sqrt(n! / m!)` formed in log space.
pub fn sqrt_factorial_ratio(n: u32, m: u32) -> f64 {
    (0.5 * (log_factorial(n) - log_factorial(m))).exp()
}
