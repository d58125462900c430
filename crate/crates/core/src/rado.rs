//! Single-equation partition regularity test.
//!
//! `Σ cᵢ xᵢ = 0` has a monochromatic solution under every finite coloring iff some
//! nonempty subset of its nonzero coefficients sums to zero. Every `(a,b)`-triple
//! solves `(2a - b)x - 2y + z = 0`, so a family can only be regular when that
//! equation passes. The converse does not hold for triples (they also need
//! `d >= 1`), and nothing here relies on it.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::triple::FamilyParams;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinearEquation {
    coefficients: Vec<i64>,
}

impl LinearEquation {
    pub fn new(coefficients: Vec<i64>) -> Result<Self> {
        if coefficients.iter().all(|&c| c == 0) {
            return Err(Error::ZeroEquation);
        }
        Ok(LinearEquation { coefficients })
    }

    pub fn coefficients(&self) -> &[i64] {
        &self.coefficients
    }
}

/// `[2a - b, -2, 1]`, the equation satisfied by `(x, y, z)` for every triple.
pub fn triple_equation(params: FamilyParams) -> LinearEquation {
    LinearEquation {
        coefficients: vec![2 * i64::from(params.a()) - i64::from(params.b()), -2, 1],
    }
}

/// True iff some nonempty subset of the nonzero coefficients sums to zero.
pub fn rado_condition(eq: &LinearEquation) -> bool {
    // Sums reachable by nonempty subsets of the coefficients seen so far.
    let mut reachable: HashSet<i128> = HashSet::new();
    for c in eq.coefficients.iter().copied().filter(|&c| c != 0) {
        let c = i128::from(c);
        let extended: Vec<i128> = reachable.iter().map(|s| s + c).collect();
        reachable.insert(c);
        reachable.extend(extended);
        if reachable.contains(&0) {
            return true;
        }
    }
    false
}

pub fn regularity_necessary(params: FamilyParams) -> bool {
    rado_condition(&triple_equation(params))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn eq(c: &[i64]) -> LinearEquation {
        LinearEquation::new(c.to_vec()).unwrap()
    }

    fn fam(a: u32, b: u32) -> FamilyParams {
        FamilyParams::new(a, b).unwrap()
    }

    #[test]
    fn triple_equation_examples() {
        assert_eq!(triple_equation(fam(1, 1)).coefficients(), &[1, -2, 1]);
        assert_eq!(triple_equation(fam(2, 2)).coefficients(), &[2, -2, 1]);
        assert_eq!(triple_equation(fam(1, 2)).coefficients(), &[0, -2, 1]);
    }

    #[test]
    fn condition_examples() {
        assert!(rado_condition(&eq(&[1, -2, 1])));
        assert!(!rado_condition(&eq(&[0, -2, 1])));
        assert!(!rado_condition(&eq(&[-2, -2, 1])));
        assert!(rado_condition(&eq(&[3, 5, -8, 1])));
        assert!(rado_condition(&eq(&[4, -4])));
        assert!(!rado_condition(&eq(&[7])));
    }

    #[test]
    fn zero_equation_rejected() {
        assert_eq!(LinearEquation::new(vec![0, 0]), Err(Error::ZeroEquation));
        assert_eq!(LinearEquation::new(vec![]), Err(Error::ZeroEquation));
    }

    #[test]
    fn necessary_examples() {
        assert!(regularity_necessary(fam(1, 1)));
        assert!(regularity_necessary(fam(2, 2)));
        assert!(!regularity_necessary(fam(1, 4)));
        assert!(!regularity_necessary(fam(1, 2)));
    }
}
