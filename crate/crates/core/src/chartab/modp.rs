//! Linear algebra over a prime field GF(q), for the modular stage of the
//! character table computation.

pub(crate) type Fp = u64;

/// Arithmetic in GF(q) for a fixed odd prime q < 2^32.
#[derive(Debug, Clone, Copy)]
pub(crate) struct PrimeField {
    pub q: u64,
}

impl PrimeField {
    pub fn new(q: u64) -> Self {
        PrimeField { q }
    }

    pub fn add(&self, a: Fp, b: Fp) -> Fp {
        (a + b) % self.q
    }

    pub fn sub(&self, a: Fp, b: Fp) -> Fp {
        (a + self.q - b) % self.q
    }

    pub fn neg(&self, a: Fp) -> Fp {
        (self.q - a) % self.q
    }

    pub fn mul(&self, a: Fp, b: Fp) -> Fp {
        ((a as u128 * b as u128) % self.q as u128) as u64
    }

    pub fn pow(&self, mut base: Fp, mut e: u64) -> Fp {
        let mut acc = 1u64;
        base %= self.q;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: Fp) -> Fp {
        debug_assert!(a % self.q != 0);
        self.pow(a, self.q - 2)
    }

    /// Deterministic element of multiplicative order exactly `m` (m | q−1).
    pub fn element_of_order(&self, m: u64) -> Option<Fp> {
        if m == 1 {
            return Some(1);
        }
        let cofactor = (self.q - 1) / m;
        let m_primes = crate::arith::prime_divisors(m);
        for a in 2..self.q {
            let z = self.pow(a, cofactor);
            if z == 1 {
                continue;
            }
            if m_primes.iter().all(|&t| self.pow(z, m / t) != 1) {
                return Some(z);
            }
        }
        None
    }
}

pub(crate) type Matrix = Vec<Vec<Fp>>;

/// Characteristic polynomial coefficients (ascending, monic) via Hessenberg
/// reduction, valid over any prime field regardless of the matrix size.
pub(crate) fn charpoly(f: &PrimeField, m: &Matrix) -> Vec<Fp> {
    let n = m.len();
    if n == 0 {
        return vec![1];
    }
    // similarity-reduce to upper Hessenberg form
    let mut h = m.clone();
    for j in 0..n.saturating_sub(2) {
        let Some(pivot_row) = (j + 1..n).find(|&r| h[r][j] != 0) else {
            continue;
        };
        if pivot_row != j + 1 {
            h.swap(j + 1, pivot_row);
            for row in h.iter_mut() {
                row.swap(j + 1, pivot_row);
            }
        }
        let inv = f.inv(h[j + 1][j]);
        for r in j + 2..n {
            if h[r][j] == 0 {
                continue;
            }
            let factor = f.mul(h[r][j], inv);
            for c in 0..n {
                let v = f.sub(h[r][c], f.mul(factor, h[j + 1][c]));
                h[r][c] = v;
            }
            for r2 in 0..n {
                let v = f.add(h[r2][j + 1], f.mul(factor, h[r2][r]));
                h[r2][j + 1] = v;
            }
        }
    }
    // leading-principal-minor recurrence for det(λI − H)
    let mut polys: Vec<Vec<Fp>> = vec![vec![1]];
    for k in 1..=n {
        // (λ − H[k−1][k−1]) · p_{k−1}
        let prev = &polys[k - 1];
        let mut p = vec![0u64; prev.len() + 1];
        for (i, &c) in prev.iter().enumerate() {
            p[i + 1] = f.add(p[i + 1], c);
            p[i] = f.sub(p[i], f.mul(h[k - 1][k - 1], c));
        }
        // − Σ_i H[i][k−1] · (Π subdiagonals) · p_i
        let mut subdiag = 1u64;
        for i in (0..k - 1).rev() {
            subdiag = f.mul(subdiag, h[i + 1][i]);
            if subdiag == 0 {
                break;
            }
            let coeff = f.mul(h[i][k - 1], subdiag);
            if coeff == 0 {
                continue;
            }
            for (d, &c) in polys[i].iter().enumerate() {
                p[d] = f.sub(p[d], f.mul(coeff, c));
            }
        }
        polys.push(p);
    }
    polys.pop().unwrap()
}

/// All roots of a polynomial in GF(q), ascending, found by scanning the field.
pub(crate) fn poly_roots(f: &PrimeField, poly: &[Fp]) -> Vec<Fp> {
    (0..f.q)
        .filter(|&x| {
            let mut acc = 0u64;
            for &c in poly.iter().rev() {
                acc = f.add(f.mul(acc, x), c);
            }
            acc == 0
        })
        .collect()
}

/// Basis of the kernel of `m`, via reduced row echelon form; deterministic.
pub(crate) fn kernel_basis(f: &PrimeField, m: &Matrix) -> Vec<Vec<Fp>> {
    let rows = m.len();
    if rows == 0 {
        return Vec::new();
    }
    let cols = m[0].len();
    let mut a = m.clone();
    let mut pivot_col_of_row = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(pr) = (r..rows).find(|&i| a[i][c] != 0) else {
            continue;
        };
        a.swap(r, pr);
        let inv = f.inv(a[r][c]);
        for cc in c..cols {
            a[r][cc] = f.mul(a[r][cc], inv);
        }
        for i in 0..rows {
            if i != r && a[i][c] != 0 {
                let factor = a[i][c];
                for cc in c..cols {
                    let v = f.sub(a[i][cc], f.mul(factor, a[r][cc]));
                    a[i][cc] = v;
                }
            }
        }
        pivot_col_of_row.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    let pivot_cols: Vec<usize> = pivot_col_of_row.clone();
    let mut basis = Vec::new();
    for free in (0..cols).filter(|c| !pivot_cols.contains(c)) {
        let mut v = vec![0u64; cols];
        v[free] = 1;
        for (row, &pc) in pivot_cols.iter().enumerate() {
            v[pc] = f.neg(a[row][free]);
        }
        basis.push(v);
    }
    basis
}

/// Solve `B · X = W` column-wise, where `basis` spans a space containing
/// every column of `w`. Returns the coordinate matrix X (len(basis) × len(w)).
pub(crate) fn coords_in_basis(
    f: &PrimeField,
    basis: &[Vec<Fp>],
    w: &[Vec<Fp>],
) -> Option<Vec<Vec<Fp>>> {
    let n = basis.first().map_or(0, Vec::len);
    let k = basis.len();
    let t = w.len();
    // augmented [B | W], rows = n
    let mut a: Matrix = (0..n)
        .map(|r| {
            let mut row: Vec<Fp> = basis.iter().map(|b| b[r]).collect();
            row.extend(w.iter().map(|c| c[r]));
            row
        })
        .collect();
    let mut pivot_rows = Vec::new();
    let mut r = 0;
    for c in 0..k {
        let Some(pr) = (r..n).find(|&i| a[i][c] != 0) else {
            return None; // basis columns must be independent
        };
        a.swap(r, pr);
        let inv = f.inv(a[r][c]);
        for cc in c..k + t {
            a[r][cc] = f.mul(a[r][cc], inv);
        }
        for i in 0..n {
            if i != r && a[i][c] != 0 {
                let factor = a[i][c];
                for cc in c..k + t {
                    let v = f.sub(a[i][cc], f.mul(factor, a[r][cc]));
                    a[i][cc] = v;
                }
            }
        }
        pivot_rows.push(r);
        r += 1;
    }
    // consistency: rows below the pivots must be zero on the W side
    for i in r..n {
        if (k..k + t).any(|c| a[i][c] != 0) {
            return None;
        }
    }
    let mut x = vec![vec![0u64; t]; k];
    for (col, &pr) in pivot_rows.iter().enumerate() {
        for j in 0..t {
            x[col][j] = a[pr][k + j];
        }
    }
    Some(x)
}

/// `m · v` for column vector v.
pub(crate) fn mat_vec(f: &PrimeField, m: &Matrix, v: &[Fp]) -> Vec<Fp> {
    m.iter()
        .map(|row| {
            row.iter()
                .zip(v)
                .fold(0u64, |acc, (&a, &b)| f.add(acc, f.mul(a, b)))
        })
        .collect()
}
