//! The `(a,b)`-triple family: `(x, ax + d, bx + 2d)` with `x, d >= 1`.

use serde::{Deserialize, Serialize};
use std::fmt;

use crate::error::{Error, Result};

/// Largest domain `[1, n]` any operation accepts.
pub const MAX_N: u64 = 1 << 31;

/// Identifies a triple family by its pair `(a, b)`, `1 <= a <= b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct FamilyParams {
    a: u32,
    b: u32,
}

impl FamilyParams {
    pub fn new(a: u32, b: u32) -> Result<Self> {
        if a == 0 || a > b {
            return Err(Error::InvalidFamily {
                a: a.into(),
                b: b.into(),
            });
        }
        Ok(FamilyParams { a, b })
    }

    pub fn a(&self) -> u32 {
        self.a
    }

    pub fn b(&self) -> u32 {
        self.b
    }

    /// `b - 2a`, the coefficient relating `z` to `2y` (`z = 2y + (b - 2a)x`).
    pub fn skew(&self) -> i64 {
        i64::from(self.b) - 2 * i64::from(self.a)
    }

    /// The family `(a + i, b + 2i)` whose triples embed into this one.
    pub fn shifted(&self, i: u32) -> Option<FamilyParams> {
        let a = self.a.checked_add(i)?;
        let b = self.b.checked_add(i.checked_mul(2)?)?;
        Some(FamilyParams { a, b })
    }

    /// Smallest `z` over all triples of the family, namely `b + 2`.
    pub fn min_span(&self) -> u64 {
        u64::from(self.b) + 2
    }
}

impl fmt::Display for FamilyParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.a, self.b)
    }
}

/// A concrete triple together with its generator `d`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Triple {
    pub x: u64,
    pub y: u64,
    pub z: u64,
    pub d: u64,
}

impl Triple {
    /// True when the stored values are exactly `(x, ax + d, bx + 2d)` with `x, d >= 1`.
    pub fn is_member_of(&self, params: FamilyParams) -> bool {
        if self.x == 0 || self.d == 0 {
            return false;
        }
        match make_triple(params, self.x, self.d) {
            Ok(t) => t == *self,
            Err(_) => false,
        }
    }

    pub fn elements(&self) -> [u64; 3] {
        [self.x, self.y, self.z]
    }
}

impl fmt::Display for Triple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.x, self.y, self.z)
    }
}

pub fn make_triple(params: FamilyParams, x: u64, d: u64) -> Result<Triple> {
    if x == 0 || d == 0 {
        return Err(Error::NonPositiveGenerator { x, d });
    }
    let y = u64::from(params.a)
        .checked_mul(x)
        .and_then(|v| v.checked_add(d))
        .ok_or(Error::Overflow)?;
    let z = u64::from(params.b)
        .checked_mul(x)
        .and_then(|v| v.checked_add(d.checked_mul(2)?))
        .ok_or(Error::Overflow)?;
    Ok(Triple { x, y, z, d })
}

/// All generator pairs `(x, d)` whose triple ends at `m`, ordered by increasing `x`.
pub fn triples_ending_at(params: FamilyParams, m: u64) -> Vec<(u64, u64)> {
    let b = u64::from(params.b);
    let mut out = Vec::new();
    let mut x = 1u64;
    while b * x + 2 <= m {
        let rest = m - b * x;
        if rest.is_multiple_of(2) {
            out.push((x, rest / 2));
        }
        x += 1;
    }
    out
}

/// Iterates every triple with `z <= n`, ordered by `x` and then by `d`.
pub fn enumerate_triples(params: FamilyParams, n: u64) -> impl Iterator<Item = Triple> {
    let a = u64::from(params.a);
    let b = u64::from(params.b);
    let x_max = if n >= b + 2 { (n - 2) / b } else { 0 };
    (1..=x_max).flat_map(move |x| {
        let d_max = (n - b * x) / 2;
        (1..=d_max).map(move |d| Triple {
            x,
            y: a * x + d,
            z: b * x + 2 * d,
            d,
        })
    })
}

/// Closed form for the number of triples with `z <= n`.
pub fn count_triples(params: FamilyParams, n: u64) -> u64 {
    let b = u64::from(params.b);
    let mut total = 0;
    let mut x = 1;
    while b * x + 2 <= n {
        total += (n - b * x) / 2;
        x += 1;
    }
    total
}

/// Reinterprets a triple of family `(a + i, b + 2i)` as a triple of `base = (a, b)`.
///
/// The three elements are unchanged; the generator becomes `i·x + d`.
pub fn embed_triple(base: FamilyParams, i: u32, t: Triple) -> Result<Triple> {
    let shifted = base.shifted(i).ok_or(Error::Overflow)?;
    if !t.is_member_of(shifted) {
        return Err(Error::NotATriple {
            a: shifted.a,
            b: shifted.b,
            x: t.x,
            y: t.y,
            z: t.z,
        });
    }
    let d = u64::from(i)
        .checked_mul(t.x)
        .and_then(|v| v.checked_add(t.d))
        .ok_or(Error::Overflow)?;
    Ok(Triple { d, ..t })
}
