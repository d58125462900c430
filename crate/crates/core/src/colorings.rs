//! Explicit colorings of the positive integers.
//!
//! `γ_c` colors the block `[p^k, p^{k+1})` with `k mod c`, where `p = (2c - 2)/c`.
//! Block membership is always decided by big-integer cross-multiplication:
//! `p^k <= m` iff `m · c^k >= (2c - 2)^k`.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::One;

use crate::coloring::{verify_coloring, Coloring, Verdict};
use crate::error::{Error, Result};
use crate::triple::{FamilyParams, MAX_N};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GammaParams {
    c: u32,
}

impl GammaParams {
    pub fn new(c: u32) -> Result<Self> {
        if c < 3 {
            return Err(Error::InvalidGamma(c));
        }
        Ok(GammaParams { c })
    }

    pub fn c(&self) -> u32 {
        self.c
    }

    /// `p` as the unreduced pair `(2c - 2, c)`.
    pub fn ratio(&self) -> (u64, u64) {
        (2 * u64::from(self.c) - 2, u64::from(self.c))
    }

    pub fn blocks(&self) -> BlockStarts {
        BlockStarts::new(*self)
    }
}

/// The unique `k` with `p^k <= m < p^{k+1}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BlockIndex(pub u32);

/// Yields, for `k = 0, 1, 2, ...`, the least integer `>= p^k`.
///
/// Consecutive values may coincide: for small `k` a block can contain no integer.
pub struct BlockStarts {
    num: BigUint,
    den: BigUint,
    num_pow: BigUint,
    den_pow: BigUint,
}

impl BlockStarts {
    fn new(gp: GammaParams) -> Self {
        let (num, den) = gp.ratio();
        BlockStarts {
            num: num.into(),
            den: den.into(),
            num_pow: BigUint::one(),
            den_pow: BigUint::one(),
        }
    }
}

impl Iterator for BlockStarts {
    type Item = BigUint;

    fn next(&mut self) -> Option<BigUint> {
        let start = Integer::div_ceil(&self.num_pow, &self.den_pow);
        self.num_pow *= &self.num;
        self.den_pow *= &self.den;
        Some(start)
    }
}

pub fn gamma_block(gp: GammaParams, m: u64) -> BlockIndex {
    assert!(m >= 1, "gamma_block is defined on positive integers");
    gamma_block_u128(gp, m).unwrap_or_else(|| gamma_block_big(gp, m))
}

/// Same loop in `u128`; `None` if any product overflows.
fn gamma_block_u128(gp: GammaParams, m: u64) -> Option<BlockIndex> {
    let (num, den) = gp.ratio();
    let (num, den, m) = (u128::from(num), u128::from(den), u128::from(m));
    let mut num_pow = num;
    let mut den_pow = den;
    let mut k = 0u32;
    while m.checked_mul(den_pow)? >= num_pow {
        k += 1;
        num_pow = num_pow.checked_mul(num)?;
        den_pow = den_pow.checked_mul(den)?;
    }
    Some(BlockIndex(k))
}

fn gamma_block_big(gp: GammaParams, m: u64) -> BlockIndex {
    let (num, den) = gp.ratio();
    let m = BigUint::from(m);
    let mut num_pow = BigUint::from(num);
    let mut den_pow = BigUint::from(den);
    let mut k = 0u32;
    // Advance while p^{k+1} <= m.
    while &m * &den_pow >= num_pow {
        k += 1;
        num_pow *= num;
        den_pow *= den;
    }
    BlockIndex(k)
}

pub fn gamma_color(gp: GammaParams, m: u64) -> u32 {
    gamma_block(gp, m).0 % gp.c
}

/// `γ_c` restricted to `[1, n]`, built in one pass over the block boundaries.
pub fn gamma_prefix(gp: GammaParams, n: u64) -> Result<Coloring> {
    check_domain(n)?;
    let mut colors = Vec::with_capacity(n as usize);
    let mut starts = gp
        .blocks()
        .map(|s| u64::try_from(&s).unwrap_or(u64::MAX))
        .enumerate()
        .skip(1)
        .peekable();
    let mut k = 0u32;
    for m in 1..=n {
        while let Some(&(j, start)) = starts.peek() {
            if start > m {
                break;
            }
            k = j as u32;
            starts.next();
        }
        colors.push(k % gp.c);
    }
    Coloring::new(gp.c, colors)
}

/// `⌊log₂ m⌋ mod 2`.
pub fn doubling_color(m: u64) -> u32 {
    assert!(m >= 1, "doubling_color is defined on positive integers");
    (63 - m.leading_zeros()) % 2
}

pub fn doubling_prefix(n: u64) -> Result<Coloring> {
    check_domain(n)?;
    Coloring::new(2, (1..=n).map(doubling_color).collect())
}

/// Checks the prefix of `γ_c` on `[1, n]` for a monochromatic triple of `params`.
pub fn verify_gamma_against(gp: GammaParams, params: FamilyParams, n: u64) -> Result<Verdict> {
    Ok(verify_coloring(params, &gamma_prefix(gp, n)?))
}

fn check_domain(n: u64) -> Result<()> {
    if n == 0 {
        Err(Error::EmptyColoring)
    } else if n > MAX_N {
        Err(Error::DomainTooLarge(n))
    } else {
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(c: u32) -> GammaParams {
        GammaParams::new(c).unwrap()
    }

    #[test]
    fn rejects_small_c() {
        assert_eq!(GammaParams::new(2), Err(Error::InvalidGamma(2)));
        assert!(GammaParams::new(3).is_ok());
    }

    #[test]
    fn block_examples() {
        assert_eq!(gamma_block(g(5), 1), BlockIndex(0));
        assert_eq!(gamma_block(g(5), 7), BlockIndex(4));
        assert_eq!(gamma_block(g(5), 17), BlockIndex(6));
        assert_eq!(gamma_block(g(3), 2), BlockIndex(2));
    }

    #[test]
    fn color_examples() {
        assert_eq!(gamma_color(g(5), 1), 0);
        assert_eq!(gamma_color(g(5), 11), 0);
        assert_eq!(gamma_color(g(5), 10), 4);
    }

    #[test]
    fn prefix_examples() {
        assert_eq!(gamma_prefix(g(5), 6).unwrap().colors(), &[0, 1, 2, 2, 3, 3]);
        assert_eq!(
            gamma_prefix(g(5), 10).unwrap().colors(),
            &[0, 1, 2, 2, 3, 3, 4, 4, 4, 4]
        );
        assert_eq!(gamma_prefix(g(3), 2).unwrap().colors(), &[0, 2]);
    }

    #[test]
    fn prefix_agrees_with_point_queries() {
        for c in 3..=10 {
            let prefix = gamma_prefix(g(c), 5000).unwrap();
            for m in 1..=5000u64 {
                assert_eq!(prefix.color(m), gamma_color(g(c), m), "c={c} m={m}");
            }
        }
    }

    #[test]
    fn doubling_examples() {
        assert_eq!(doubling_color(1), 0);
        assert_eq!(doubling_color(2), 1);
        assert_eq!(doubling_color(3), 1);
        for m in 4..=7 {
            assert_eq!(doubling_color(m), 0);
        }
        assert_eq!(doubling_color(8), 1);
    }

    #[test]
    fn doubling_avoids_one_two_triples() {
        let fam = FamilyParams::new(1, 2).unwrap();
        assert!(verify_coloring(fam, &doubling_prefix(100).unwrap()).is_valid());
    }
}
