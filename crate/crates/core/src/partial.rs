//! π-partial characters: restrictions of ordinary characters to the
//! π-elements, their irreducible constituents, decomposition matrices,
//! lifts, and Brauer characters of p-solvable groups.
//!
//! A restriction is irreducible when it is not a nonnegative-integer
//! combination of other partial characters. Processing candidates in
//! ascending degree order makes that decidable: a reducible candidate always
//! decomposes into already-accepted irreducibles of strictly smaller degree,
//! because every irreducible π-partial character of a π-separable group is
//! itself a restriction, and any proper decomposition strictly lowers
//! degree. A greedy subtraction is not sufficient; the search here is an
//! exhaustive depth-first enumeration with exact value matching.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{Signed, Zero};
use thiserror::Error;

use crate::chartab::{BrauerTable, Character, CharacterTable};
use crate::cyclo::Cyclotomic;
use crate::linalg;
use crate::normal;
use crate::perm::{ConjugacyClasses, Group};
use crate::pi::PrimeSet;

#[derive(Debug, Error)]
pub enum PartialError {
    #[error("group is not π-separable for π = {0}")]
    NotPiSeparable(String),
    #[error("group is not {0}-solvable; ingest an externally computed Brauer table instead")]
    NotPSolvable(u64),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("found {found} irreducible partial characters for {expected} π-classes")]
    CountMismatch { expected: usize, found: usize },
    #[error("irreducible partial characters are rationally dependent")]
    RankDeficient,
    #[error("decomposition of a restriction is not a nonnegative integer combination: {0}")]
    BadDecomposition(String),
    #[error("no ordinary character restricts to the given partial character")]
    NoLift,
}

/// A class function on the π-classes of a group, in group class order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialCharacter {
    pi: PrimeSet,
    /// indices into the group's conjugacy classes, ascending
    class_indices: Vec<usize>,
    values: Vec<Cyclotomic>,
    degree: u64,
}

impl PartialCharacter {
    pub fn pi(&self) -> &PrimeSet {
        &self.pi
    }

    pub fn class_indices(&self) -> &[usize] {
        &self.class_indices
    }

    pub fn values(&self) -> &[Cyclotomic] {
        &self.values
    }

    pub fn degree(&self) -> u64 {
        self.degree
    }

    /// Value at a group class index (must be a π-class).
    pub fn value_at_class(&self, class: usize) -> Option<&Cyclotomic> {
        self.class_indices
            .iter()
            .position(|&c| c == class)
            .map(|i| &self.values[i])
    }
}

/// Restriction of an ordinary character to the π-classes.
pub fn restrict(chi: &Character, cls: &ConjugacyClasses, pi: &PrimeSet) -> PartialCharacter {
    let class_indices: Vec<usize> = normal::pi_elements(cls, pi).into_iter().collect();
    let values: Vec<Cyclotomic> = class_indices
        .iter()
        .map(|&c| chi.value(c).clone())
        .collect();
    PartialCharacter {
        pi: pi.clone(),
        class_indices,
        values,
        degree: chi.degree(),
    }
}

/// Exhaustive search for nonnegative integer coefficients expressing
/// `target` in `basis` (values compared exactly per class).
fn decomposes_into(target: &PartialCharacter, basis: &[&PartialCharacter]) -> bool {
    fn rec(
        target: &PartialCharacter,
        basis: &[&PartialCharacter],
        idx: usize,
        remaining_degree: u64,
        acc: &mut Vec<u64>,
    ) -> bool {
        if idx == basis.len() {
            if remaining_degree != 0 {
                return false;
            }
            // exact per-class value check of Σ cᵢ·φᵢ = target
            return target.values.iter().enumerate().all(|(k, v)| {
                let mut sum = Cyclotomic::zero();
                for (i, &c) in acc.iter().enumerate() {
                    if c > 0 {
                        sum = sum.add(
                            &basis[i].values[k]
                                .mul_rational(&BigRational::from_integer(BigInt::from(c))),
                        );
                    }
                }
                sum == *v
            });
        }
        let max = remaining_degree / basis[idx].degree;
        for c in (0..=max).rev() {
            acc.push(c);
            if rec(
                target,
                basis,
                idx + 1,
                remaining_degree - c * basis[idx].degree,
                acc,
            ) {
                return true;
            }
            acc.pop();
        }
        false
    }
    rec(target, basis, 0, target.degree, &mut Vec::new())
}

/// The set of irreducible π-partial characters, in ascending degree order.
///
/// Requires the group to be π-separable. The result is post-checked: its
/// size must equal the number of π-classes and its value matrix must have
/// full rational rank.
pub fn irreducible_partial_characters(
    g: &Group,
    cls: &ConjugacyClasses,
    table: &CharacterTable,
    pi: &PrimeSet,
) -> Result<Vec<PartialCharacter>, PartialError> {
    if !normal::is_pi_separable(g, cls, pi).separable {
        return Err(PartialError::NotPiSeparable(pi.to_string()));
    }
    let mut candidates: Vec<PartialCharacter> = Vec::new();
    for chi in table.irreducibles() {
        let r = restrict(chi, cls, pi);
        if !candidates.contains(&r) {
            candidates.push(r);
        }
    }
    candidates.sort_by(|a, b| {
        a.degree.cmp(&b.degree).then_with(|| {
            for (x, y) in a.values.iter().zip(&b.values) {
                let o = x.cmp_structural(y);
                if o != std::cmp::Ordering::Equal {
                    return o;
                }
            }
            std::cmp::Ordering::Equal
        })
    });

    let mut accepted: Vec<PartialCharacter> = Vec::new();
    for cand in candidates {
        let smaller: Vec<&PartialCharacter> = accepted
            .iter()
            .filter(|p| p.degree < cand.degree)
            .collect();
        if !decomposes_into(&cand, &smaller) {
            accepted.push(cand);
        }
    }

    let expected = normal::pi_elements(cls, pi).len();
    if accepted.len() != expected {
        return Err(PartialError::CountMismatch {
            expected,
            found: accepted.len(),
        });
    }
    if value_matrix_rank(&accepted) != accepted.len() {
        return Err(PartialError::RankDeficient);
    }
    Ok(accepted)
}

/// Rational rank of the value matrix, flattening each cyclotomic into its
/// coefficient vector over a common conductor.
fn value_matrix_rank(partials: &[PartialCharacter]) -> usize {
    if partials.is_empty() {
        return 0;
    }
    let rows: Vec<Vec<BigRational>> = partials.iter().map(flatten_values).collect();
    let width = rows.iter().map(Vec::len).max().unwrap();
    let rows: Vec<Vec<BigRational>> = rows
        .into_iter()
        .map(|mut r| {
            r.resize(width, BigRational::zero());
            r
        })
        .collect();
    linalg::rank(&rows)
}

fn flatten_values(p: &PartialCharacter) -> Vec<BigRational> {
    let n = p
        .values
        .iter()
        .fold(1u64, |acc, v| crate::arith::lcm(acc, v.conductor()));
    let phi = crate::arith::euler_phi(n) as usize;
    let mut out = Vec::with_capacity(p.values.len() * phi);
    for v in &p.values {
        // lift to the common conductor by multiplying with 1 at conductor n
        let lifted = v.mul(&Cyclotomic::root_of_unity(n, 0).expect("n >= 1"));
        let mut coeffs = lifted.coeffs().to_vec();
        coeffs.resize(phi, BigRational::zero());
        out.extend(coeffs);
    }
    out
}

/// Nonnegative-integer matrix expressing every restriction in the basis of
/// irreducible partial characters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecompositionMatrix {
    /// rows indexed like `table.irreducibles()`, columns like `ipi`
    pub rows: Vec<Vec<u64>>,
}

impl DecompositionMatrix {
    pub fn entry(&self, row: usize, col: usize) -> u64 {
        self.rows[row][col]
    }

    pub fn column_sums(&self) -> Vec<u64> {
        let cols = self.rows.first().map(Vec::len).unwrap_or(0);
        (0..cols)
            .map(|c| self.rows.iter().map(|r| r[c]).sum())
            .collect()
    }
}

/// Solve every `χ° = Σ entry·φ` exactly and assert integrality and
/// nonnegativity; also checks every column owns a unit row from a lift.
pub fn decomposition_matrix(
    table: &CharacterTable,
    cls: &ConjugacyClasses,
    pi: &PrimeSet,
    ipi: &[PartialCharacter],
) -> Result<DecompositionMatrix, PartialError> {
    let flat_basis: Vec<Vec<BigRational>> = ipi.iter().map(flatten_values).collect();
    let width = flat_basis.iter().map(Vec::len).max().unwrap_or(0);
    let cols: Vec<Vec<BigRational>> = flat_basis
        .into_iter()
        .map(|mut c| {
            c.resize(width, BigRational::zero());
            c
        })
        .collect();

    let mut rows = Vec::with_capacity(table.irreducibles().len());
    for chi in table.irreducibles() {
        let restriction = restrict(chi, cls, pi);
        let mut b = flatten_values(&restriction);
        b.resize(width, BigRational::zero());
        let x = linalg::solve_columns(&cols, &b).ok_or_else(|| {
            PartialError::BadDecomposition(format!(
                "degree-{} restriction is outside the span",
                chi.degree()
            ))
        })?;
        let mut row = Vec::with_capacity(x.len());
        for q in x {
            if !q.is_integer() || q.is_negative() {
                return Err(PartialError::BadDecomposition(format!(
                    "coefficient {} is not a nonnegative integer",
                    q
                )));
            }
            row.push(u64::try_from(q.to_integer()).expect("nonnegative"));
        }
        rows.push(row);
    }

    // every φ must be hit by a unit row coming from one of its lifts
    for (col, phi) in ipi.iter().enumerate() {
        let unit = rows.iter().enumerate().any(|(i, row)| {
            row[col] == 1
                && row.iter().enumerate().all(|(c, &v)| c == col || v == 0)
                && restrict(&table.irreducibles()[i], cls, pi) == *phi
        });
        if !unit {
            return Err(PartialError::BadDecomposition(format!(
                "column {} has no unit row from a lift",
                col
            )));
        }
    }
    Ok(DecompositionMatrix { rows })
}

/// All ordinary irreducibles restricting to `φ`, as indices into the table.
///
/// For an irreducible partial character the result is nonempty.
pub fn lifts(
    table: &CharacterTable,
    cls: &ConjugacyClasses,
    phi: &PartialCharacter,
) -> Result<Vec<usize>, PartialError> {
    let found: Vec<usize> = (0..table.irreducibles().len())
        .filter(|&i| restrict(&table.irreducibles()[i], cls, phi.pi()) == *phi)
        .collect();
    if found.is_empty() {
        return Err(PartialError::NoLift);
    }
    Ok(found)
}

/// Irreducible Brauer characters of a p-solvable group: the irreducible
/// {p}′-partial characters.
pub fn brauer_characters(
    g: &Group,
    cls: &ConjugacyClasses,
    table: &CharacterTable,
    p: u64,
) -> Result<Vec<PartialCharacter>, PartialError> {
    if !crate::arith::is_prime(p) {
        return Err(PartialError::NotPrime(p));
    }
    let pi = PrimeSet::new([p]).complement_within(g.order() as u64);
    if !normal::is_pi_separable(g, cls, &pi).separable {
        return Err(PartialError::NotPSolvable(p));
    }
    irreducible_partial_characters(g, cls, table, &pi)
}

/// Partial characters backed by an ingested Brauer table.
pub fn partials_from_brauer_table(g: &Group, bt: &BrauerTable) -> Vec<PartialCharacter> {
    let pi = PrimeSet::new([bt.p]).complement_within(g.order() as u64);
    bt.chars
        .iter()
        .map(|chi| PartialCharacter {
            pi: pi.clone(),
            class_indices: bt.class_indices.clone(),
            values: chi.values().to_vec(),
            degree: chi.degree(),
        })
        .collect()
}
