//! Exact Gaussian elimination over the rationals.

use num::rational::BigRational;
use num::Zero;

/// Solve `A x = b` where `cols` are the columns of `A`.
///
/// Returns `None` when the system is inconsistent. When the solution is not
/// unique the free variables are set to zero; the callers in this crate only
/// solve systems whose columns are linearly independent.
pub(crate) fn solve_columns(
    cols: &[Vec<BigRational>],
    b: &[BigRational],
) -> Option<Vec<BigRational>> {
    let k = cols.len();
    let m = b.len();
    // augmented rows: [A | b]
    let mut rows: Vec<Vec<BigRational>> = (0..m)
        .map(|r| {
            let mut row: Vec<BigRational> = cols.iter().map(|c| c[r].clone()).collect();
            row.push(b[r].clone());
            row
        })
        .collect();

    let mut pivot_of_col: Vec<Option<usize>> = vec![None; k];
    let mut pivot_row = 0;
    for col in 0..k {
        let Some(r) = (pivot_row..m).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(pivot_row, r);
        let inv = rows[pivot_row][col].recip();
        for c in col..=k {
            let v = &rows[pivot_row][c] * &inv;
            rows[pivot_row][c] = v;
        }
        for r2 in 0..m {
            if r2 != pivot_row && !rows[r2][col].is_zero() {
                let f = rows[r2][col].clone();
                for c in col..=k {
                    let v = &rows[r2][c] - &f * &rows[pivot_row][c];
                    rows[r2][c] = v;
                }
            }
        }
        pivot_of_col[col] = Some(pivot_row);
        pivot_row += 1;
        if pivot_row == m {
            break;
        }
    }

    // inconsistent: a zero row of A with nonzero rhs
    for r in pivot_row..m {
        if !rows[r][k].is_zero() {
            return None;
        }
    }

    let mut x = vec![BigRational::zero(); k];
    for (col, pr) in pivot_of_col.iter().enumerate() {
        if let Some(r) = pr {
            x[col] = rows[*r][k].clone();
        }
    }
    Some(x)
}

/// Rank of a matrix given by rows.
pub(crate) fn rank(rows_in: &[Vec<BigRational>]) -> usize {
    let mut rows: Vec<Vec<BigRational>> = rows_in.to_vec();
    let m = rows.len();
    if m == 0 {
        return 0;
    }
    let n = rows[0].len();
    let mut rank = 0;
    for col in 0..n {
        let Some(r) = (rank..m).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, r);
        let inv = rows[rank][col].recip();
        for c in col..n {
            let v = &rows[rank][c] * &inv;
            rows[rank][c] = v;
        }
        for r2 in 0..m {
            if r2 != rank && !rows[r2][col].is_zero() {
                let f = rows[r2][col].clone();
                for c in col..n {
                    let v = &rows[r2][c] - &f * &rows[rank][c];
                    rows[r2][c] = v;
                }
            }
        }
        rank += 1;
        if rank == m {
            break;
        }
    }
    rank
}
