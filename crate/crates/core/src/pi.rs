//! Sets of primes (π) and their spec strings.
//!
//! A π may be given explicitly (`"2,3"`) or as the complement of a single
//! prime relative to the primes dividing the group order (`"p'5"`). The
//! complement form is resolved against a concrete group order at call time.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PiError {
    #[error("cannot parse π spec {0:?}")]
    Unparseable(String),
    #[error("{0} is not prime")]
    NotPrime(u64),
}

/// An unresolved π specification.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum PiSpec {
    Explicit(BTreeSet<u64>),
    ComplementOf(u64),
}

impl PiSpec {
    /// Grammar: `"2,3"` lists primes, `"p'5"` is the complement of 5, the
    /// empty string is the empty set.
    pub fn parse(s: &str) -> Result<PiSpec, PiError> {
        let s = s.trim();
        if let Some(rest) = s.strip_prefix("p'") {
            let p: u64 = rest
                .trim()
                .parse()
                .map_err(|_| PiError::Unparseable(s.to_string()))?;
            if !arith::is_prime(p) {
                return Err(PiError::NotPrime(p));
            }
            return Ok(PiSpec::ComplementOf(p));
        }
        let mut primes = BTreeSet::new();
        if !s.is_empty() {
            for part in s.split(',') {
                let p: u64 = part
                    .trim()
                    .parse()
                    .map_err(|_| PiError::Unparseable(s.to_string()))?;
                if !arith::is_prime(p) {
                    return Err(PiError::NotPrime(p));
                }
                primes.insert(p);
            }
        }
        Ok(PiSpec::Explicit(primes))
    }

    /// The π this spec denotes for a group of the given order.
    pub fn resolve(&self, group_order: u64) -> PrimeSet {
        match self {
            PiSpec::Explicit(primes) => PrimeSet {
                primes: primes.clone(),
            },
            PiSpec::ComplementOf(p) => PrimeSet {
                primes: arith::prime_divisors(group_order)
                    .into_iter()
                    .filter(|q| q != p)
                    .collect(),
            },
        }
    }

    pub fn label(&self) -> String {
        match self {
            PiSpec::Explicit(primes) => primes
                .iter()
                .map(u64::to_string)
                .collect::<Vec<_>>()
                .join(","),
            PiSpec::ComplementOf(p) => format!("p'{}", p),
        }
    }
}

impl fmt::Display for PiSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label())
    }
}

/// A resolved, concrete set of primes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeSet {
    primes: BTreeSet<u64>,
}

impl PrimeSet {
    pub fn new<I: IntoIterator<Item = u64>>(primes: I) -> PrimeSet {
        PrimeSet {
            primes: primes.into_iter().collect(),
        }
    }

    pub fn empty() -> PrimeSet {
        PrimeSet {
            primes: BTreeSet::new(),
        }
    }

    pub fn contains(&self, p: u64) -> bool {
        self.primes.contains(&p)
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.primes.iter().copied()
    }

    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }

    /// Whether all prime factors of `n` lie in the set (1 is a π-number for
    /// every π).
    pub fn is_pi_number(&self, n: u64) -> bool {
        arith::prime_divisors(n).iter().all(|p| self.contains(*p))
    }

    /// π′ relative to the primes dividing `group_order`.
    pub fn complement_within(&self, group_order: u64) -> PrimeSet {
        PrimeSet {
            primes: arith::prime_divisors(group_order)
                .into_iter()
                .filter(|p| !self.contains(*p))
                .collect(),
        }
    }

    pub fn label(&self) -> String {
        self.primes
            .iter()
            .map(u64::to_string)
            .collect::<Vec<_>>()
            .join(",")
    }
}

impl fmt::Display for PrimeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.label())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_explicit_sets() {
        assert_eq!(
            PiSpec::parse("2,3").unwrap(),
            PiSpec::Explicit([2, 3].into())
        );
        assert_eq!(
            PiSpec::parse("").unwrap(),
            PiSpec::Explicit(BTreeSet::new())
        );
        assert_eq!(PiSpec::parse(" 5 ").unwrap(), PiSpec::Explicit([5].into()));
    }

    #[test]
    fn parses_complements() {
        assert_eq!(PiSpec::parse("p'5").unwrap(), PiSpec::ComplementOf(5));
        assert_eq!(PiSpec::parse("p'5").unwrap().label(), "p'5");
    }

    #[test]
    fn rejects_garbage() {
        assert!(PiSpec::parse("2,x").is_err());
        assert_eq!(PiSpec::parse("4").unwrap_err(), PiError::NotPrime(4));
        assert_eq!(PiSpec::parse("p'6").unwrap_err(), PiError::NotPrime(6));
    }

    #[test]
    fn complement_resolution_uses_group_order() {
        let pi = PiSpec::parse("p'3").unwrap().resolve(12);
        assert!(pi.contains(2));
        assert!(!pi.contains(3));
        // complement of a prime not dividing the order is every divisor prime
        let pi7 = PiSpec::parse("p'7").unwrap().resolve(12);
        assert!(pi7.contains(2) && pi7.contains(3));
    }

    #[test]
    fn pi_numbers() {
        let pi = PrimeSet::new([2, 3]);
        assert!(pi.is_pi_number(1));
        assert!(pi.is_pi_number(12));
        assert!(!pi.is_pi_number(10));
        assert!(PrimeSet::empty().is_pi_number(1));
        assert!(!PrimeSet::empty().is_pi_number(2));
    }

    #[test]
    fn complements_partition_divisor_primes() {
        let pi = PrimeSet::new([2]);
        let pip = pi.complement_within(60);
        assert_eq!(pip, PrimeSet::new([3, 5]));
    }
}
