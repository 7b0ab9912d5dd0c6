//! Exact arithmetic in cyclotomic fields.
//!
//! A [`Cyclotomic`] holds rational coefficients over the power basis
//! `{1, ζ_n, …, ζ_n^{φ(n)−1}}` of `Q(ζ_n)`, reduced modulo the n-th
//! cyclotomic polynomial, with the conductor `n` minimal for the value.
//! That representation is unique, so `==` decides equality in the field and
//! nothing is ever rounded.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith;
use crate::linalg;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CycloError {
    #[error("root of unity order must be positive")]
    ZeroOrder,
    #[error("value is not a root of unity")]
    NotRootOfUnity,
    #[error("coefficient does not fit the serialized integer range")]
    SerializeOverflow,
    #[error("invalid serialized cyclotomic: {0}")]
    BadRepr(String),
}

/// An element of a cyclotomic field in canonical form.
///
/// Construct values with [`Cyclotomic::root_of_unity`],
/// [`Cyclotomic::from_integer`] or [`Cyclotomic::from_rational`] and combine
/// them with `add`/`sub`/`mul`/`neg`/`conj`. All operations return canonical
/// values, so two `Cyclotomic`s are equal as field elements iff they are
/// structurally equal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cyclotomic {
    conductor: u64,
    coeffs: Vec<BigRational>,
}

/// Serialized form: conductor plus `[numerator, denominator]` pairs over the
/// canonical power basis.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct CycloRepr {
    pub n: u64,
    pub coeffs: Vec<[i64; 2]>,
}

fn cyclotomic_polynomial(n: u64) -> Vec<BigInt> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Vec<BigInt>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(p) = cache.lock().unwrap().get(&n) {
        return p.clone();
    }
    // Φ_n = (x^n − 1) / Π_{d|n, d<n} Φ_d, built bottom-up over the divisors.
    let mut local: HashMap<u64, Vec<BigInt>> = HashMap::new();
    for d in arith::divisors(n) {
        if cache.lock().unwrap().contains_key(&d) {
            continue;
        }
        let mut poly = vec![BigInt::zero(); (d + 1) as usize];
        poly[0] = -BigInt::one();
        poly[d as usize] = BigInt::one();
        for e in arith::divisors(d) {
            if e == d {
                continue;
            }
            let phi_e = cache
                .lock()
                .unwrap()
                .get(&e)
                .cloned()
                .unwrap_or_else(|| local[&e].clone());
            poly = poly_div_exact(&poly, &phi_e);
        }
        local.insert(d, poly);
    }
    let mut guard = cache.lock().unwrap();
    for (d, p) in local {
        guard.entry(d).or_insert(p);
    }
    guard[&n].clone()
}

/// Exact division of integer polynomials; `den` must be monic and divide `num`.
fn poly_div_exact(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let dn = num.len() - 1;
    let dd = den.len() - 1;
    assert!(den[dd].is_one(), "divisor must be monic");
    let mut rem = num.to_vec();
    let mut quot = vec![BigInt::zero(); dn - dd + 1];
    for i in (dd..=dn).rev() {
        let c = rem[i].clone();
        if c.is_zero() {
            continue;
        }
        quot[i - dd] = c.clone();
        for (j, dc) in den.iter().enumerate() {
            rem[i - dd + j] -= &c * dc;
        }
    }
    debug_assert!(rem.iter().all(|c| c.is_zero()));
    quot
}

/// Remainder of `coeffs` (any length) modulo Φ_n, padded to length φ(n).
fn reduce_mod_cyclotomic(mut coeffs: Vec<BigRational>, n: u64) -> Vec<BigRational> {
    let phi = arith::euler_phi(n) as usize;
    if coeffs.len() > phi {
        let modulus = cyclotomic_polynomial(n);
        let deg = modulus.len() - 1;
        for i in (deg..coeffs.len()).rev() {
            if coeffs[i].is_zero() {
                continue;
            }
            let c = coeffs[i].clone();
            for (j, mc) in modulus.iter().enumerate() {
                if !mc.is_zero() {
                    let v = &coeffs[i - deg + j] - &c * BigRational::from(mc.clone());
                    coeffs[i - deg + j] = v;
                }
            }
        }
    }
    coeffs.resize(phi, BigRational::zero());
    coeffs
}

/// Try to rewrite a reduced vector over Q(ζ_n) in the subfield Q(ζ_d), d | n.
fn express_in_subfield(n: u64, coeffs: &[BigRational], d: u64) -> Option<Vec<BigRational>> {
    let phi_d = arith::euler_phi(d) as usize;
    let step = n / d;
    let cols: Vec<Vec<BigRational>> = (0..phi_d)
        .map(|j| {
            let mut mono = vec![BigRational::zero(); (step * j as u64 + 1) as usize];
            let last = mono.len() - 1;
            mono[last] = BigRational::one();
            reduce_mod_cyclotomic(mono, n)
        })
        .collect();
    linalg::solve_columns(&cols, coeffs)
}

/// Canonicalize a coefficient vector over the n-th roots into minimal form.
fn canonicalize(mut n: u64, dense: Vec<BigRational>) -> Cyclotomic {
    let mut coeffs = reduce_mod_cyclotomic(dense, n);
    'outer: while n > 1 {
        if coeffs[1..].iter().all(Zero::is_zero) {
            // rational value
            return Cyclotomic {
                conductor: 1,
                coeffs: vec![coeffs.swap_remove(0)],
            };
        }
        for p in arith::prime_divisors(n) {
            let d = n / p;
            if let Some(sub) = express_in_subfield(n, &coeffs, d) {
                n = d;
                coeffs = sub;
                continue 'outer;
            }
        }
        break;
    }
    Cyclotomic { conductor: n, coeffs }
}

impl Cyclotomic {
    pub fn zero() -> Self {
        Cyclotomic {
            conductor: 1,
            coeffs: vec![BigRational::zero()],
        }
    }

    pub fn one() -> Self {
        Cyclotomic {
            conductor: 1,
            coeffs: vec![BigRational::one()],
        }
    }

    pub fn from_integer(v: i64) -> Self {
        Cyclotomic {
            conductor: 1,
            coeffs: vec![BigRational::from_integer(BigInt::from(v))],
        }
    }

    pub fn from_rational(q: BigRational) -> Self {
        Cyclotomic {
            conductor: 1,
            coeffs: vec![q],
        }
    }

    /// The exact root of unity `ζ_order^exponent`.
    pub fn root_of_unity(order: u64, exponent: i64) -> Result<Self, CycloError> {
        if order == 0 {
            return Err(CycloError::ZeroOrder);
        }
        let k = exponent.rem_euclid(order as i64) as u64;
        let mut dense = vec![BigRational::zero(); (k + 1) as usize];
        let last = dense.len() - 1;
        dense[last] = BigRational::one();
        Ok(canonicalize(order, dense))
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.conductor == 1 && self.coeffs[0].is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.conductor == 1 && self.coeffs[0].is_one()
    }

    pub fn is_rational(&self) -> bool {
        self.conductor == 1
    }

    pub fn to_rational(&self) -> Option<BigRational> {
        if self.conductor == 1 {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    /// The value as a rational integer, when it is one.
    pub fn to_integer(&self) -> Option<BigInt> {
        self.to_rational()
            .filter(|q| q.is_integer())
            .map(|q| q.to_integer())
    }

    /// Coefficients lifted to the (possibly larger) conductor `n`, reduced mod Φ_n.
    fn lift_reduced(&self, n: u64) -> Vec<BigRational> {
        debug_assert_eq!(n % self.conductor, 0);
        if n == self.conductor {
            return self.coeffs.clone();
        }
        let step = (n / self.conductor) as usize;
        let mut dense = vec![BigRational::zero(); (self.coeffs.len() - 1) * step + 1];
        for (j, c) in self.coeffs.iter().enumerate() {
            dense[j * step] = c.clone();
        }
        reduce_mod_cyclotomic(dense, n)
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.conductor == 1 && other.conductor == 1 {
            return Cyclotomic::from_rational(&self.coeffs[0] + &other.coeffs[0]);
        }
        let n = arith::lcm(self.conductor, other.conductor);
        let a = self.lift_reduced(n);
        let b = other.lift_reduced(n);
        let sum: Vec<BigRational> = a.iter().zip(&b).map(|(x, y)| x + y).collect();
        canonicalize(n, sum)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        // negation preserves the minimal conductor
        Cyclotomic {
            conductor: self.conductor,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.conductor == 1 {
            return other.mul_rational(&self.coeffs[0]);
        }
        if other.conductor == 1 {
            return self.mul_rational(&other.coeffs[0]);
        }
        let n = arith::lcm(self.conductor, other.conductor);
        let a = self.lift_reduced(n);
        let b = other.lift_reduced(n);
        let mut prod = vec![BigRational::zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if !y.is_zero() {
                    let v = &prod[i + j] + x * y;
                    prod[i + j] = v;
                }
            }
        }
        canonicalize(n, prod)
    }

    pub fn mul_rational(&self, q: &BigRational) -> Self {
        if q.is_zero() {
            return Cyclotomic::zero();
        }
        // scaling by a nonzero rational preserves the minimal conductor
        Cyclotomic {
            conductor: self.conductor,
            coeffs: self.coeffs.iter().map(|c| c * q).collect(),
        }
    }

    /// Complex conjugation (inverts every root-of-unity exponent).
    pub fn conj(&self) -> Self {
        if self.conductor <= 2 {
            return self.clone();
        }
        let n = self.conductor;
        let mut dense = vec![BigRational::zero(); n as usize];
        for (j, c) in self.coeffs.iter().enumerate() {
            let e = if j == 0 { 0 } else { n as usize - j };
            dense[e] = &dense[e] + c;
        }
        // conjugation maps every subfield to itself, so the conductor is stable
        let coeffs = reduce_mod_cyclotomic(dense, n);
        Cyclotomic { conductor: n, coeffs }
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Cyclotomic::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Whether the value is a root of unity (order divides lcm(2, conductor)).
    pub fn is_root_of_unity(&self) -> bool {
        if self.is_zero() {
            return false;
        }
        self.pow(arith::lcm(2, self.conductor)).is_one()
    }

    /// Arbitrary but deterministic total order; used only for stable sorting.
    pub fn cmp_structural(&self, other: &Self) -> Ordering {
        self.conductor
            .cmp(&other.conductor)
            .then_with(|| self.coeffs.len().cmp(&other.coeffs.len()))
            .then_with(|| {
                for (a, b) in self.coeffs.iter().zip(&other.coeffs) {
                    let o = a.cmp(b);
                    if o != Ordering::Equal {
                        return o;
                    }
                }
                Ordering::Equal
            })
    }

    pub fn to_repr(&self) -> Result<CycloRepr, CycloError> {
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| {
                let num = i64::try_from(c.numer()).map_err(|_| CycloError::SerializeOverflow)?;
                let den = i64::try_from(c.denom()).map_err(|_| CycloError::SerializeOverflow)?;
                Ok([num, den])
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(CycloRepr {
            n: self.conductor,
            coeffs,
        })
    }

    pub fn from_repr(repr: &CycloRepr) -> Result<Self, CycloError> {
        if repr.n == 0 {
            return Err(CycloError::BadRepr("conductor must be positive".into()));
        }
        if repr.coeffs.len() as u64 > repr.n {
            return Err(CycloError::BadRepr(format!(
                "{} coefficients for conductor {}",
                repr.coeffs.len(),
                repr.n
            )));
        }
        let dense = repr
            .coeffs
            .iter()
            .map(|[num, den]| {
                if *den == 0 {
                    return Err(CycloError::BadRepr("zero denominator".into()));
                }
                Ok(BigRational::new(BigInt::from(*num), BigInt::from(*den)))
            })
            .collect::<Result<Vec<_>, _>>()?;
        if dense.is_empty() {
            return Ok(Cyclotomic::zero());
        }
        Ok(canonicalize(repr.n, dense))
    }

    #[cfg(test)]
    pub(crate) fn recanonicalized(&self) -> Self {
        canonicalize(self.conductor, self.coeffs.clone())
    }
}

impl std::fmt::Display for Cyclotomic {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.conductor == 1 {
            return write!(f, "{}", self.coeffs[0]);
        }
        let mut first = true;
        for (j, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else {
                write!(f, " {} ", sign)?;
            }
            let a = c.abs();
            if j == 0 {
                write!(f, "{}", a)?;
            } else {
                if !a.is_one() {
                    write!(f, "{}*", a)?;
                }
                write!(f, "z{}", self.conductor)?;
                if j > 1 {
                    write!(f, "^{}", j)?;
                }
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Whether a list of roots of unity sums to the integer `n`.
///
/// For roots of unity `η_1 + … + η_n = n` holds iff every `η_i = 1`, so this
/// decides the "character value attains the degree" test. With
/// `verify_roots` set, a non-root-of-unity input is rejected.
pub fn sum_is_degree(
    values: &[Cyclotomic],
    n: u64,
    verify_roots: bool,
) -> Result<bool, CycloError> {
    if verify_roots && !values.iter().all(Cyclotomic::is_root_of_unity) {
        return Err(CycloError::NotRootOfUnity);
    }
    let sum = values
        .iter()
        .fold(Cyclotomic::zero(), |acc, v| acc.add(v));
    Ok(sum == Cyclotomic::from_integer(n as i64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn zeta(n: u64, k: i64) -> Cyclotomic {
        Cyclotomic::root_of_unity(n, k).unwrap()
    }

    #[test]
    fn trivial_root_is_one() {
        assert_eq!(zeta(1, 0), Cyclotomic::one());
        assert!(zeta(1, 0).is_one());
    }

    #[test]
    fn fourth_roots_cancel() {
        // i + (−i) = 0
        assert!(zeta(4, 1).add(&zeta(4, 3)).is_zero());
    }

    #[test]
    fn primitive_cube_roots_sum_to_minus_one() {
        // 1 + ζ3 + ζ3² = 0, so ζ3 + ζ3² = −1
        let s = zeta(3, 1).add(&zeta(3, 2));
        assert_eq!(s, Cyclotomic::from_integer(-1));
    }

    #[test]
    fn add_zero_is_identity() {
        let a = zeta(5, 2);
        assert_eq!(a.add(&Cyclotomic::zero()), a);
    }

    #[test]
    fn cube_of_cube_root_is_one() {
        let z = zeta(3, 1);
        assert!(z.mul(&z).mul(&z).is_one());
    }

    #[test]
    fn conjugate_inverts_exponent() {
        assert_eq!(zeta(5, 1).conj(), zeta(5, 4));
        assert_eq!(zeta(7, 3).conj(), zeta(7, 4));
    }

    #[test]
    fn conductor_is_minimized() {
        // ζ4² = −1 is rational
        let m1 = zeta(4, 1).mul(&zeta(4, 1));
        assert_eq!(m1, Cyclotomic::from_integer(-1));
        assert_eq!(m1.conductor(), 1);
        // Q(ζ6) = Q(ζ3): ζ6 = 1 + ζ3
        let z6 = zeta(6, 1);
        assert_eq!(z6.conductor(), 3);
        assert_eq!(z6, Cyclotomic::one().add(&zeta(3, 1)));
    }

    #[test]
    fn zero_order_rejected() {
        assert_eq!(
            Cyclotomic::root_of_unity(0, 1).unwrap_err(),
            CycloError::ZeroOrder
        );
    }

    #[test]
    fn degree_sum_criterion() {
        let ones = vec![Cyclotomic::one(), Cyclotomic::one(), Cyclotomic::one()];
        assert!(sum_is_degree(&ones, 3, true).unwrap());

        // ζ3 + ζ3² + 1 = 0 ≠ 3
        let mix = vec![zeta(3, 1), zeta(3, 2), Cyclotomic::one()];
        assert!(!sum_is_degree(&mix, 3, true).unwrap());

        assert!(sum_is_degree(&[], 0, true).unwrap());

        let bad = vec![Cyclotomic::from_integer(2)];
        assert_eq!(
            sum_is_degree(&bad, 2, true).unwrap_err(),
            CycloError::NotRootOfUnity
        );
        assert!(!sum_is_degree(&bad, 1, false).unwrap());
    }

    #[test]
    fn repr_round_trip() {
        let v = zeta(12, 5).add(&Cyclotomic::from_integer(2));
        let r = v.to_repr().unwrap();
        assert_eq!(Cyclotomic::from_repr(&r).unwrap(), v);
    }

    #[test]
    fn repr_rejects_bad_input() {
        let bad = CycloRepr {
            n: 0,
            coeffs: vec![[1, 1]],
        };
        assert!(Cyclotomic::from_repr(&bad).is_err());
        let bad_den = CycloRepr {
            n: 3,
            coeffs: vec![[1, 0]],
        };
        assert!(Cyclotomic::from_repr(&bad_den).is_err());
    }

    #[test]
    fn golden_ratio_sums() {
        // ζ5 + ζ5⁴ and ζ5² + ζ5³ are the two roots of x² + x − 1
        let b5 = zeta(5, 1).add(&zeta(5, 4));
        let b5c = zeta(5, 2).add(&zeta(5, 3));
        assert_eq!(b5.add(&b5c), Cyclotomic::from_integer(-1));
        assert_eq!(b5.mul(&b5c), Cyclotomic::from_integer(-1));
        assert_eq!(b5.conj(), b5);
        assert_eq!(b5.conductor(), 5);
    }

    proptest! {
        #[test]
        fn nth_power_of_nth_root_is_one(n in 1u64..=24, k in -48i64..48) {
            let z = zeta(n, k);
            prop_assert!(z.pow(n).is_one());
        }

        #[test]
        fn canonicalization_is_idempotent(n in 1u64..=16, k in 0i64..16, m in 1u64..=16, l in 0i64..16) {
            let v = zeta(n, k).add(&zeta(m, l));
            prop_assert_eq!(v.recanonicalized(), v);
        }

        #[test]
        fn root_products_add_exponents(n in 1u64..=20, a in 0i64..20, b in 0i64..20) {
            prop_assert_eq!(zeta(n, a).mul(&zeta(n, b)), zeta(n, a + b));
        }

        #[test]
        fn addition_commutes(n in 1u64..=12, k in 0i64..12, m in 1u64..=12, l in 0i64..12) {
            let x = zeta(n, k);
            let y = zeta(m, l);
            prop_assert_eq!(x.add(&y), y.add(&x));
        }
    }
}
