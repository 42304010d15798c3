//! Exact linear algebra over the rationals: row reduction, rank and the
//! solution of overdetermined systems with a unique solution.

use num_rational::BigRational;
use num_traits::{One, Zero};

/// Dense matrix stored as a vector of rows.
pub type Matrix = Vec<Vec<BigRational>>;

/// Reduces `m` to reduced row echelon form in place and returns the pivot columns.
pub fn row_reduce(m: &mut Matrix) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut pivot_row = 0;
    for col in 0..cols {
        if pivot_row == rows {
            break;
        }
        let Some(found) = (pivot_row..rows).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(pivot_row, found);
        let inv = m[pivot_row][col].recip();
        for x in m[pivot_row][col..].iter_mut() {
            *x *= &inv;
        }
        let pivot = m[pivot_row][col..].to_vec();
        for (i, row) in m.iter_mut().enumerate() {
            if i == pivot_row || row[col].is_zero() {
                continue;
            }
            let factor = row[col].clone();
            for (x, p) in row[col..].iter_mut().zip(&pivot) {
                if !p.is_zero() {
                    *x -= &factor * p;
                }
            }
        }
        pivots.push(col);
        pivot_row += 1;
    }
    pivots
}

pub fn rank(mut m: Matrix) -> usize {
    row_reduce(&mut m).len()
}

#[derive(Debug, Clone, PartialEq)]
pub enum SolveError {
    /// Row `row` of the reduced augmented system reads `0 = c` with `c != 0`.
    Inconsistent { row: usize },
    /// The coefficient matrix does not have full column rank.
    Underdetermined { rank: usize },
}

/// Solves `a x = b` exactly. `a` must have full column rank; extra
/// equations must be consistent.
pub fn solve(a: &Matrix, b: &[BigRational]) -> Result<Vec<BigRational>, SolveError> {
    assert_eq!(a.len(), b.len(), "row count mismatch");
    let cols = a.first().map_or(0, Vec::len);
    let mut aug: Matrix = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let pivots = row_reduce(&mut aug);
    if let Some(pos) = pivots.iter().position(|&c| c == cols) {
        return Err(SolveError::Inconsistent { row: pos });
    }
    if pivots.len() < cols {
        return Err(SolveError::Underdetermined { rank: pivots.len() });
    }
    Ok(aug.iter().take(cols).map(|row| row[cols].clone()).collect())
}

pub fn identity(n: usize) -> Matrix {
    (0..n).map(|i| (0..n).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }).collect()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    fn mat(rows: &[&[i64]]) -> Matrix {
        rows.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect()
    }

    #[test]
    fn rank_of_small_matrices() {
        assert_eq!(rank(mat(&[&[1, 2, 1], &[2, 4, 0], &[3, 6, 0]])), 2);
        assert_eq!(rank(identity(4)), 4);
        assert_eq!(rank(mat(&[&[0, 0], &[0, 0]])), 0);
        assert_eq!(rank(Vec::new()), 0);
    }

    #[test]
    fn solves_overdetermined_consistent_system() {
        let a = mat(&[&[1, 0], &[0, 1], &[1, 1]]);
        let x = solve(&a, &[q(3), q(4), q(7)]).unwrap();
        assert_eq!(x, vec![q(3), q(4)]);
    }

    #[test]
    fn detects_inconsistency_and_rank_deficiency() {
        let a = mat(&[&[1, 0], &[0, 1], &[1, 1]]);
        assert!(matches!(solve(&a, &[q(3), q(4), q(8)]), Err(SolveError::Inconsistent { .. })));
        let b = mat(&[&[1, 2], &[2, 4]]);
        assert_eq!(solve(&b, &[q(1), q(2)]), Err(SolveError::Underdetermined { rank: 1 }));
    }
}
