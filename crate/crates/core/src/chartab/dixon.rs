//! Modular computation of irreducible characters from class-algebra
//! structure constants, lifted to exact cyclotomic values.
//!
//! The class-sum multiplication matrices commute and act semisimply on
//! GF(q)^r when q ≡ 1 (mod exp G), so their joint eigenvectors are exactly
//! the scaled character columns. Each one-dimensional joint eigenspace yields
//! one irreducible character; eigenvalue multiplicities of the underlying
//! representation are then recovered per class by an inverse discrete
//! Fourier sum in GF(q), which converts the modular data into exact root-of-
//! unity multiplicities.

use crate::arith;
use crate::cyclo::Cyclotomic;
use crate::perm::{ConjugacyClasses, Group};

use super::modp::{self, Fp, Matrix, PrimeField};
use super::{CharTabError, Character};

const MODULUS_SEARCH_BOUND: u64 = 1 << 31;
const MAX_MODULUS_RETRIES: usize = 3;

/// Smallest prime q ≡ 1 (mod m) with q > 2√(order), then successors.
fn modulus_candidates(m: u64, order: u64) -> impl Iterator<Item = u64> {
    (1..)
        .map(move |t| t * m + 1)
        .take_while(|&q| q < MODULUS_SEARCH_BOUND)
        .filter(move |&q| q as u128 * q as u128 > 4 * order as u128 && arith::is_prime(q))
}

pub(super) fn irreducible_characters(
    g: &Group,
    cls: &ConjugacyClasses,
) -> Result<Vec<Character>, CharTabError> {
    let m = cls.exponent();
    let mut last_err = CharTabError::NoModulus {
        bound: MODULUS_SEARCH_BOUND,
    };
    for q in modulus_candidates(m, g.order() as u64).take(MAX_MODULUS_RETRIES) {
        match attempt(g, cls, m, q) {
            Ok(chars) => return Ok(chars),
            Err(e @ CharTabError::SplitFailed { .. }) => last_err = e,
            Err(e) => return Err(e),
        }
    }
    Err(last_err)
}

fn attempt(
    g: &Group,
    cls: &ConjugacyClasses,
    m: u64,
    q: u64,
) -> Result<Vec<Character>, CharTabError> {
    let f = PrimeField::new(q);
    let r = cls.count();
    let order = g.order() as u64;
    let sizes: Vec<u64> = cls.sizes().iter().map(|&s| s as u64).collect();
    let inverse_class: Vec<usize> = (0..r).map(|c| cls.inverse_class(c)).collect();

    let z = f
        .element_of_order(m)
        .ok_or(CharTabError::SplitFailed { modulus: q })?;

    // joint eigenvectors of the class matrices
    let mut subspaces: Vec<Vec<Vec<Fp>>> = vec![(0..r)
        .map(|i| {
            let mut e = vec![0u64; r];
            e[i] = 1;
            e
        })
        .collect()];
    for i in 1..r {
        if subspaces.iter().all(|s| s.len() == 1) {
            break;
        }
        let mat = class_matrix(g, cls, i, &f);
        let mut next = Vec::new();
        for basis in subspaces {
            if basis.len() == 1 {
                next.push(basis);
                continue;
            }
            for piece in split_subspace(&f, &mat, &basis, q)? {
                next.push(piece);
            }
        }
        subspaces = next;
    }
    if subspaces.len() != r || subspaces.iter().any(|s| s.len() != 1) {
        return Err(CharTabError::SplitFailed { modulus: q });
    }

    let mut chars = Vec::with_capacity(r);
    for basis in subspaces {
        let v_raw = &basis[0];
        if v_raw[0] == 0 {
            return Err(CharTabError::SplitFailed { modulus: q });
        }
        // normalize at the identity class: v_j = |C_j|·χ(g_j)/χ(1)
        let inv0 = f.inv(v_raw[0]);
        let v: Vec<Fp> = v_raw.iter().map(|&x| f.mul(x, inv0)).collect();

        // χ(1)² = |G| / Σ_j v_j v_{j̄} / |C_j|
        let s = (0..r).fold(0u64, |acc, j| {
            f.add(
                acc,
                f.mul(f.mul(v[j], v[inverse_class[j]]), f.inv(sizes[j] % q)),
            )
        });
        if s == 0 {
            return Err(CharTabError::SplitFailed { modulus: q });
        }
        let d_sq = f.mul(order % q, f.inv(s));
        let max_degree = (order as f64).sqrt() as u64 + 1;
        let degree = (1..=max_degree)
            .find(|&d| f.mul(d % q, d % q) == d_sq)
            .ok_or(CharTabError::LiftFailed {
                detail: "no integer degree matches the eigenvector norm".into(),
            })?;

        // modular character values per class
        let t: Vec<Fp> = (0..r)
            .map(|j| f.mul(f.mul(degree % q, v[j]), f.inv(sizes[j] % q)))
            .collect();

        let values = lift_values(cls, &f, z, m, degree, &t)?;
        chars.push(Character {
            degree,
            values,
        });
    }
    Ok(chars)
}

/// (M_i)_{j,k} = #{(x, y) ∈ C_i × C_j : x·y = z_k} for fixed class reps z_k.
fn class_matrix(g: &Group, cls: &ConjugacyClasses, i: usize, f: &PrimeField) -> Matrix {
    let r = cls.count();
    let reps: Vec<usize> = (0..r).map(|c| cls.class(c).rep).collect();
    let mut mat = vec![vec![0u64; r]; r];
    for &x in &cls.class(i).members {
        let xinv = g.inv(x);
        for (k, &zk) in reps.iter().enumerate() {
            let y = g.mul(xinv, zk);
            let j = cls.class_of(y);
            mat[j][k] = f.add(mat[j][k], 1);
        }
    }
    mat
}

/// Split a joint-invariant subspace along the eigenspaces of `mat`.
fn split_subspace(
    f: &PrimeField,
    mat: &Matrix,
    basis: &[Vec<Fp>],
    q: u64,
) -> Result<Vec<Vec<Vec<Fp>>>, CharTabError> {
    let images: Vec<Vec<Fp>> = basis.iter().map(|b| modp::mat_vec(f, mat, b)).collect();
    let x = modp::coords_in_basis(f, basis, &images)
        .ok_or(CharTabError::SplitFailed { modulus: q })?;
    let dim = basis.len();
    let poly = modp::charpoly(f, &x);
    let roots = modp::poly_roots(f, &poly);
    let mut pieces = Vec::new();
    let mut total = 0;
    for lambda in roots {
        let shifted: Matrix = (0..dim)
            .map(|i| {
                (0..dim)
                    .map(|j| {
                        if i == j {
                            f.sub(x[i][j], lambda)
                        } else {
                            x[i][j]
                        }
                    })
                    .collect()
            })
            .collect();
        let kernel = modp::kernel_basis(f, &shifted);
        if kernel.is_empty() {
            continue;
        }
        total += kernel.len();
        let sub_basis: Vec<Vec<Fp>> = kernel
            .iter()
            .map(|c| {
                let mut v = vec![0u64; basis[0].len()];
                for (j, &cj) in c.iter().enumerate() {
                    for (idx, &bv) in basis[j].iter().enumerate() {
                        v[idx] = f.add(v[idx], f.mul(cj, bv));
                    }
                }
                v
            })
            .collect();
        pieces.push(sub_basis);
    }
    if total != dim {
        // the class algebra splits over GF(q), so a defect here means the
        // modulus was unusable
        return Err(CharTabError::SplitFailed { modulus: q });
    }
    Ok(pieces)
}

/// Exact character values from modular ones: per class, recover the
/// multiplicity μ_s of each k-th root exponent by an inverse discrete
/// Fourier sum, check the multiplicities are nonnegative integers summing to
/// the degree, and assemble Σ μ_s ζ_k^s.
fn lift_values(
    cls: &ConjugacyClasses,
    f: &PrimeField,
    z: Fp,
    m: u64,
    degree: u64,
    t: &[Fp],
) -> Result<Vec<Cyclotomic>, CharTabError> {
    let r = cls.count();
    let mut values = Vec::with_capacity(r);
    for j in 0..r {
        let k = cls.class(j).element_order;
        let step = m / k;
        let k_inv = f.inv(k % f.q);
        let mut value = Cyclotomic::zero();
        let mut mu_sum = 0u64;
        for s in 0..k {
            let mut acc = 0u64;
            for l in 0..k {
                let t_l = t[cls.power_class(j, l)];
                let twiddle = f.inv(f.pow(z, s * l * step % m));
                acc = f.add(acc, f.mul(t_l, twiddle));
            }
            let mu = f.mul(acc, k_inv);
            if mu > degree {
                return Err(CharTabError::LiftFailed {
                    detail: format!("multiplicity {} exceeds degree {}", mu, degree),
                });
            }
            mu_sum += mu;
            if mu > 0 {
                let root = Cyclotomic::root_of_unity(k, s as i64).expect("k >= 1");
                value = value.add(&root.mul_rational(&num::BigRational::from_integer(
                    num::BigInt::from(mu),
                )));
            }
        }
        if mu_sum != degree {
            return Err(CharTabError::LiftFailed {
                detail: format!(
                    "multiplicities sum to {} but the degree is {}",
                    mu_sum, degree
                ),
            });
        }
        values.push(value);
    }
    Ok(values)
}
