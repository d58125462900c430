//! Exact applicability tests for the closed-form bounds on `dor(a,b)`.
//!
//! Each real-valued hypothesis is cleared of denominators (and of `√2`, by squaring
//! two nonnegative sides) so that it is decided by big-integer comparison.

use num_bigint::BigInt;
use num_traits::Pow;

/// Largest `c` tried for the block-coloring bounds. A bound of `c - 1` beyond 63 is
/// never competitive with the other sources on any range this crate tabulates.
pub const MAX_BLOCK_COLORS: u32 = 64;

fn big(v: u64) -> BigInt {
    BigInt::from(v)
}

/// `dor(a, a + i) <= c - 1` when `a >= 2`, `c >= 5`, `a <= p^c / (c - 1)` and
/// `0 <= i <= p^c (p^{c-1} - 2)`, with `p = 2 - 2/c`.
pub fn theorem2_upper(a: u32, b: u32, c: u32) -> Option<u32> {
    if a < 2 || c < 5 || b < a {
        return None;
    }
    let i = big(u64::from(b - a));
    let cc = big(c.into());
    let q = big(2 * u64::from(c) - 2);
    // a (c - 1) c^c <= (2c - 2)^c
    let lhs = big(a.into()) * big(u64::from(c) - 1) * Pow::pow(&cc, c);
    if lhs > Pow::pow(&q, c) {
        return None;
    }
    // i c^{2c-1} <= (2c - 2)^c ((2c - 2)^{c-1} - 2 c^{c-1})
    let lhs = i * Pow::pow(&cc, 2 * c - 1);
    let rhs = Pow::pow(&q, c) * (Pow::pow(&q, c - 1) - 2 * Pow::pow(&cc, c - 1));
    (lhs <= rhs).then_some(c - 1)
}

/// `dor(1, b) <= c - 1` when `b >= 2`, `c >= 5` and `b < (2 + p^c) / p`.
pub fn theorem3_upper(b: u32, c: u32) -> Option<u32> {
    if b < 2 || c < 5 {
        return None;
    }
    let cc = big(c.into());
    let q = big(2 * u64::from(c) - 2);
    // b (2c - 2) c^{c-1} < 2 c^c + (2c - 2)^c
    let lhs = big(b.into()) * &q * Pow::pow(&cc, c - 1);
    let rhs = 2 * Pow::pow(&cc, c) + Pow::pow(&q, c);
    (lhs < rhs).then_some(c - 1)
}

/// `dor(a,b) <= ⌈2 log₂ ⌈b/a⌉⌉` when `b >= (2√2 - 1)a - 2√2 + 2`.
///
/// The hypothesis is tested as `(a + b - 2)² >= 8 (a - 1)²`. At `(1,1)` the formula
/// would give 0, which contradicts regularity, so the bound requires `b > a`.
pub fn lemma2_upper(a: u32, b: u32) -> Option<u32> {
    if a == 0 || b <= a {
        return None;
    }
    let s = u128::from(a) + u128::from(b) - 2;
    let t = u128::from(a) - 1;
    if s * s < 8 * t * t {
        return None;
    }
    let ratio = u128::from(b.div_ceil(a));
    let square = ratio * ratio;
    // Least k with 2^k >= ratio².
    Some(128 - (square - 1).leading_zeros())
}

/// `dor(a,b) = 1` exactly when `b = 2a`.
pub fn rule1_exact(a: u32, b: u32) -> Option<u32> {
    (u64::from(b) == 2 * u64::from(a)).then_some(1)
}

/// Least `c` in `5..=MAX_BLOCK_COLORS` at which `theorem2_upper` applies.
pub fn best_theorem2(a: u32, b: u32) -> Option<(u32, u32)> {
    (5..=MAX_BLOCK_COLORS).find_map(|c| theorem2_upper(a, b, c).map(|u| (c, u)))
}

/// Least `c` in `5..=MAX_BLOCK_COLORS` at which `theorem3_upper` applies.
pub fn best_theorem3(b: u32) -> Option<(u32, u32)> {
    (5..=MAX_BLOCK_COLORS).find_map(|c| theorem3_upper(b, c).map(|u| (c, u)))
}
