//! Isotopism classes of BH(q, l, d) for fixed q and l.
//!
//! Representatives are the admissible d with 0 < d < l. Two of them are
//! isotopic iff they are equal, or q ≡ 1 (mod 4), l is even and d' = l - d.

use alloc::string::String;
use alloc::vec::Vec;
use alloc::{format, vec};

use crate::arith;
use crate::error::{Error, Result};

/// {0 < d < l : gcd(l, d) = 1, l + d odd}
pub fn valid_ds(l: u64) -> Vec<u64> {
    (1..l).filter(|&d| arith::gcd(l, d) == 1 && (l + d) % 2 == 1).collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassCensus {
    pub q: u64,
    pub l: u64,
    pub valid_d: Vec<u64>,
    /// Each class as its sorted members; sorted by the smaller member.
    pub classes: Vec<Vec<u64>>,
    pub count: u64,
    /// φ(l)/2 or φ(l), by the (q mod 4, l parity) case split.
    pub formula_value: u64,
}

impl ClassCensus {
    /// Smallest member of every class.
    pub fn representatives(&self) -> Vec<u64> {
        self.classes.iter().map(|c| c[0]).collect()
    }

    /// Classes that merge d with l - d.
    pub fn merged(&self) -> impl Iterator<Item = &Vec<u64>> {
        self.classes.iter().filter(|c| c.len() == 2)
    }
}

/// Whether q ≡ 1 (mod 4) and l is even, the only case where d and l - d merge.
pub fn merges(q: u64, l: u64) -> bool {
    q % 4 == 1 && l.is_multiple_of(2)
}

pub fn formula(q: u64, l: u64) -> u64 {
    let phi = arith::euler_phi(l);
    if l.is_multiple_of(2) && q % 4 == 3 {
        phi
    } else {
        phi / 2
    }
}

pub fn census(q: u64, l: u64) -> Result<ClassCensus> {
    if l < 3 {
        return Err(Error::UnsupportedL(l));
    }
    if q.is_multiple_of(2) || arith::prime_power(q).is_none() {
        return Err(Error::InvalidParams(format!("q = {q} is not an odd prime power")));
    }
    let valid_d = valid_ds(l);
    let mut classes: Vec<Vec<u64>> = Vec::new();
    for &d in &valid_d {
        let partner = l - d;
        if merges(q, l) && partner != d && valid_d.contains(&partner) {
            if partner > d {
                classes.push(vec![d, partner]);
            }
        } else {
            classes.push(vec![d]);
        }
    }
    Ok(ClassCensus {
        q,
        l,
        count: classes.len() as u64,
        formula_value: formula(q, l),
        valid_d,
        classes,
    })
}

/// The l = 2 case: the family collapses to the Dickson semifields.
pub fn dickson_report(q: u64) -> String {
    format!(
        "BH({q}, 2, 1) has center of order {q} and middle nucleus of order {}; \
         for l = 2 every such commutative semifield is either a Dickson semifield or a field \
         (bound q >= 4n^2 - 8n + 2 = 2 with n = 2), so BH({q}, 2, 1) is isotopic to a Dickson \
         semifield. No census is computed for l = 2.",
        q * q
    )
}

/// Order 2lh(q^l - 1)(q^2 - 1) of the full autotopism group, quoted rather
/// than enumerated.
pub fn full_autotopism_order(q: u64, h: u64, l: u64) -> Option<u128> {
    let ql = (q as u128).checked_pow(l as u32)?;
    Some(2 * l as u128 * h as u128 * (ql - 1) * (q as u128 * q as u128 - 1))
}

/// Order 4lh(q^l - 1) of the strong autotopism group.
pub fn strong_autotopism_order(q: u64, h: u64, l: u64) -> Option<u128> {
    let ql = (q as u128).checked_pow(l as u32)?;
    Some(4 * l as u128 * h as u128 * (ql - 1))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn admissible_sets() {
        assert_eq!(valid_ds(3), vec![2]);
        assert_eq!(valid_ds(4), vec![1, 3]);
        assert_eq!(valid_ds(5), vec![2, 4]);
    }

    #[test]
    fn class_counts() {
        let c = census(3, 4).unwrap();
        assert_eq!(c.classes, vec![vec![1], vec![3]]);
        assert_eq!(c.count, 2);
        let c = census(5, 4).unwrap();
        assert_eq!(c.classes, vec![vec![1, 3]]);
        assert_eq!(c.representatives(), vec![1]);
        let c = census(3, 5).unwrap();
        assert_eq!(c.classes, vec![vec![2], vec![4]]);
        assert_eq!(c.formula_value, 2);
        assert_eq!(census(3, 2), Err(Error::UnsupportedL(2)));
        assert!(census(6, 4).is_err());
    }

    #[test]
    fn orders() {
        assert_eq!(strong_autotopism_order(3, 1, 3), Some(312));
        assert_eq!(strong_autotopism_order(3, 1, 4), Some(1280));
        assert_eq!(full_autotopism_order(3, 1, 3), Some(2 * 3 * 26 * 8));
        assert!(dickson_report(5).contains("Dickson"));
    }
}
