//! Exact linear algebra over the integers and rationals.
//!
//! Everything here is fraction-free (Bareiss) elimination on `BigInt`
//! matrices. Rational right-hand sides are cleared to a common denominator
//! before elimination, so the only divisions performed during the forward
//! pass are the exact Bareiss divisions.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

pub type Matrix = Vec<Vec<BigInt>>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("matrix is not square ({rows} rows, row {row} has {len} entries)")]
    NotSquare { rows: usize, row: usize, len: usize },
    #[error("right-hand side has {got} entries, expected {expected}")]
    RhsLength { expected: usize, got: usize },
    #[error("matrix is singular")]
    Singular,
}

fn check_square(m: &[Vec<BigInt>]) -> Result<usize, LinalgError> {
    let n = m.len();
    for (row, r) in m.iter().enumerate() {
        if r.len() != n {
            return Err(LinalgError::NotSquare { rows: n, row, len: r.len() });
        }
    }
    Ok(n)
}

/// Runs the Bareiss forward pass in place on `a` (n rows, at least n
/// columns). Row swaps are applied when `pivoting` is set. Returns the
/// number of swaps, or `None` if a zero pivot was met that could not be
/// swapped away.
fn bareiss_forward(a: &mut [Vec<BigInt>], n: usize, pivoting: bool) -> Option<usize> {
    let cols = a.first().map_or(0, Vec::len);
    let mut prev = BigInt::one();
    let mut swaps = 0;
    for k in 0..n {
        if a[k][k].is_zero() {
            if !pivoting {
                return None;
            }
            let r = (k + 1..n).find(|&r| !a[r][k].is_zero())?;
            a.swap(k, r);
            swaps += 1;
        }
        for i in k + 1..n {
            for j in k + 1..cols {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
            a[i][k] = BigInt::zero();
        }
        prev = a[k][k].clone();
    }
    Some(swaps)
}

/// Exact determinant by fraction-free elimination.
pub fn determinant(m: &[Vec<BigInt>]) -> Result<BigInt, LinalgError> {
    let n = check_square(m)?;
    if n == 0 {
        return Ok(BigInt::one());
    }
    let mut a = m.to_vec();
    match bareiss_forward(&mut a, n, true) {
        None => Ok(BigInt::zero()),
        Some(swaps) => {
            let d = a[n - 1][n - 1].clone();
            Ok(if swaps % 2 == 1 { -d } else { d })
        }
    }
}

/// Leading principal minors `det(M_1), …, det(M_n)`.
///
/// The Bareiss pivots without row exchanges are exactly these minors; once
/// one of them vanishes the remaining ones are computed directly.
pub fn leading_principal_minors(m: &[Vec<BigInt>]) -> Result<Vec<BigInt>, LinalgError> {
    let n = check_square(m)?;
    let mut a = m.to_vec();
    let mut minors = Vec::with_capacity(n);
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            break;
        }
        minors.push(a[k][k].clone());
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
            a[i][k] = BigInt::zero();
        }
        prev = a[k][k].clone();
    }
    for k in minors.len()..n {
        let sub: Matrix = m[..=k].iter().map(|r| r[..=k].to_vec()).collect();
        minors.push(determinant(&sub)?);
    }
    Ok(minors)
}

/// Sylvester's criterion for negative definiteness: `(-1)^k det(M_k) > 0`
/// for every leading principal minor. The empty matrix counts as negative
/// definite.
pub fn is_negative_definite(m: &[Vec<BigInt>]) -> bool {
    let Ok(n) = check_square(m) else {
        return false;
    };
    let mut a = m.to_vec();
    let mut prev = BigInt::one();
    for k in 0..n {
        let p = &a[k][k];
        // (-1)^(k+1) * p > 0
        let ok = if k % 2 == 0 { p.is_negative() } else { p.is_positive() };
        if !ok {
            return false;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
            a[i][k] = BigInt::zero();
        }
        prev = a[k][k].clone();
    }
    true
}

/// Solves `M x = rhs` exactly.
pub fn solve(m: &[Vec<BigInt>], rhs: &[BigRational]) -> Result<Vec<BigRational>, LinalgError> {
    let n = check_square(m)?;
    if rhs.len() != n {
        return Err(LinalgError::RhsLength { expected: n, got: rhs.len() });
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    let scale = rhs.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    let mut a: Matrix = m
        .iter()
        .zip(rhs)
        .map(|(row, q)| {
            let mut r = row.clone();
            r.push(q.numer() * (&scale / q.denom()));
            r
        })
        .collect();
    bareiss_forward(&mut a, n, true).ok_or(LinalgError::Singular)?;
    if a[n - 1][n - 1].is_zero() {
        return Err(LinalgError::Singular);
    }
    let mut x = vec![BigRational::zero(); n];
    for i in (0..n).rev() {
        let mut acc = BigRational::from_integer(a[i][n].clone());
        for j in i + 1..n {
            acc -= BigRational::from_integer(a[i][j].clone()) * &x[j];
        }
        x[i] = acc / BigRational::from_integer(a[i][i].clone());
    }
    let scale = BigRational::from_integer(scale);
    Ok(x.into_iter().map(|v| v / &scale).collect())
}

/// Convenience for tests and small callers.
pub fn int_matrix(rows: &[&[i64]]) -> Matrix {
    rows.iter().map(|r| r.iter().map(|&v| BigInt::from(v)).collect()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn determinant_small() {
        assert_eq!(determinant(&int_matrix(&[&[2, 1], &[1, 3]])).unwrap(), BigInt::from(5));
        assert_eq!(determinant(&int_matrix(&[&[0, 1], &[1, 0]])).unwrap(), BigInt::from(-1));
        assert_eq!(
            determinant(&int_matrix(&[&[1, 2, 3], &[4, 5, 6], &[7, 8, 9]])).unwrap(),
            BigInt::zero()
        );
        assert_eq!(determinant(&[]).unwrap(), BigInt::one());
    }

    #[test]
    fn minors_with_zero_pivot() {
        let m = int_matrix(&[&[0, 1, 0], &[1, 0, 0], &[0, 0, 2]]);
        let minors = leading_principal_minors(&m).unwrap();
        assert_eq!(minors, vec![BigInt::zero(), BigInt::from(-1), BigInt::from(-2)]);
    }

    #[test]
    fn negative_definite_cases() {
        assert!(is_negative_definite(&int_matrix(&[&[-1]])));
        assert!(!is_negative_definite(&int_matrix(&[&[0]])));
        // A_2
        assert!(is_negative_definite(&int_matrix(&[&[-2, 1], &[1, -2]])));
        // semi-definite chain -2 -1 -2
        assert!(!is_negative_definite(&int_matrix(&[&[-2, 1, 0], &[1, -1, 1], &[0, 1, -2]])));
    }

    #[test]
    fn solve_rational_rhs() {
        let m = int_matrix(&[&[-2, 1], &[1, -2]]);
        let x = solve(&m, &[q(1, 2), q(0, 1)]).unwrap();
        assert_eq!(x, vec![q(-1, 3), q(-1, 6)]);
    }

    #[test]
    fn solve_needs_pivot() {
        let m = int_matrix(&[&[0, 1], &[1, 0]]);
        let x = solve(&m, &[q(3, 1), q(5, 1)]).unwrap();
        assert_eq!(x, vec![q(5, 1), q(3, 1)]);
    }

    #[test]
    fn solve_singular() {
        let m = int_matrix(&[&[1, 2], &[2, 4]]);
        assert_eq!(solve(&m, &[q(1, 1), q(1, 1)]), Err(LinalgError::Singular));
    }
}
