//! Finite colorings of `[1, n]` and the monochromatic-triple check.

use serde::{Deserialize, Serialize};
use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::triple::{FamilyParams, Triple, MAX_N};

/// A total map from `[1, n]` to colors `0..r`. Position `m` is stored at index `m - 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Coloring {
    r: u32,
    colors: Vec<u32>,
}

impl Coloring {
    pub fn new(r: u32, colors: Vec<u32>) -> Result<Self> {
        if r == 0 {
            return Err(Error::InvalidColorCount { r, max: u32::MAX });
        }
        if colors.is_empty() {
            return Err(Error::EmptyColoring);
        }
        if colors.len() as u64 > MAX_N {
            return Err(Error::DomainTooLarge(colors.len() as u64));
        }
        if let Some((i, &c)) = colors.iter().enumerate().find(|(_, &c)| c >= r) {
            return Err(Error::ColorOutOfRange {
                position: i + 1,
                color: c,
                r,
            });
        }
        Ok(Coloring { r, colors })
    }

    /// The single-color coloring of `[1, n]`.
    pub fn constant(n: usize) -> Result<Self> {
        Coloring::new(1, vec![0; n])
    }

    pub fn n(&self) -> usize {
        self.colors.len()
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    /// Color of the integer `m`, for `1 <= m <= n`.
    pub fn color(&self, m: u64) -> u32 {
        self.colors[(m - 1) as usize]
    }

    pub fn colors(&self) -> &[u32] {
        &self.colors
    }

    pub fn into_colors(self) -> Vec<u32> {
        self.colors
    }

    pub fn is_monochromatic(&self, t: &Triple) -> bool {
        let c = self.color(t.x);
        self.color(t.y) == c && self.color(t.z) == c
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    Valid,
    /// The least monochromatic triple in `(z, x)` order.
    Violation(Triple),
}

impl Verdict {
    pub fn is_valid(&self) -> bool {
        matches!(self, Verdict::Valid)
    }
}

/// Checks that no triple with `z <= n` is monochromatic.
///
/// Works over maximal runs of equal color rather than over all triples, so block
/// colorings of `[1, 10^6]` are checked in roughly `n · runs · log n` steps.
pub fn verify_coloring(params: FamilyParams, coloring: &Coloring) -> Verdict {
    let index = RunIndex::new(coloring.colors());
    let n = coloring.n() as i64;
    let a = i64::from(params.a());
    let b = i64::from(params.b());
    let skew = params.skew();

    let mut best: Option<(i64, i64)> = None;
    let mut x = 1i64;
    while b * x + 2 <= n {
        let class = index.class_of[(x - 1) as usize] as usize;
        let e = skew * x;
        let y_lo = a * x + 1;
        let y_hi = (n - e).div_euclid(2);
        if let Some(z) = index.first_hit(class, y_lo, y_hi, e) {
            if best.is_none_or(|(bz, _)| z < bz) {
                best = Some((z, x));
            }
        }
        x += 1;
    }

    match best {
        None => Verdict::Valid,
        Some((z, x)) => {
            let y = (z - skew * x) / 2;
            Verdict::Violation(Triple {
                x: x as u64,
                y: y as u64,
                z: z as u64,
                d: (y - a * x) as u64,
            })
        }
    }
}

struct RunIndex {
    class_of: Vec<u32>,
    /// Per color class: maximal runs `(lo, hi)` in increasing order.
    runs: Vec<Vec<(i64, i64)>>,
    /// Per color class and parity: sorted positions.
    by_parity: Vec<[Vec<i64>; 2]>,
}

impl RunIndex {
    fn new(colors: &[u32]) -> Self {
        let mut dense: HashMap<u32, u32> = HashMap::new();
        let mut class_of = Vec::with_capacity(colors.len());
        let mut runs: Vec<Vec<(i64, i64)>> = Vec::new();
        let mut by_parity: Vec<[Vec<i64>; 2]> = Vec::new();
        let mut prev: Option<u32> = None;
        for (i, &c) in colors.iter().enumerate() {
            let m = i as i64 + 1;
            let next = dense.len() as u32;
            let id = *dense.entry(c).or_insert(next);
            if id as usize == runs.len() {
                runs.push(Vec::new());
                by_parity.push([Vec::new(), Vec::new()]);
            }
            class_of.push(id);
            let cls = &mut runs[id as usize];
            if prev == Some(id) {
                cls.last_mut().unwrap().1 = m;
            } else {
                cls.push((m, m));
            }
            by_parity[id as usize][(m & 1) as usize].push(m);
            prev = Some(id);
        }
        RunIndex {
            class_of,
            runs,
            by_parity,
        }
    }

    /// Least `z = 2y + e` with `y` in `[y_lo, y_hi]` and both `y`, `z` in `class`.
    fn first_hit(&self, class: usize, y_lo: i64, y_hi: i64, e: i64) -> Option<i64> {
        if y_hi < y_lo {
            return None;
        }
        let runs = &self.runs[class];
        let start = runs.partition_point(|&(_, hi)| hi < y_lo);
        let targets = &self.by_parity[class][e.rem_euclid(2) as usize];
        for &(lo, hi) in &runs[start..] {
            if lo > y_hi {
                break;
            }
            let z_lo = 2 * lo.max(y_lo) + e;
            let z_hi = 2 * hi.min(y_hi) + e;
            let k = targets.partition_point(|&p| p < z_lo);
            if let Some(&z) = targets.get(k) {
                if z <= z_hi {
                    return Some(z);
                }
            }
        }
        None
    }
}
