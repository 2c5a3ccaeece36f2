//! Small exact linear algebra over ℤ and ℚ.
//!
//! Matrices here are tiny (at most a handful of rows), so everything is
//! plain cofactor/Bareiss elimination with no attempt at pivot heuristics.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Determinant of a square integer matrix by fraction-free Bareiss elimination.
pub fn determinant(rows: &[Vec<i64>]) -> BigInt {
    let n = rows.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

/// Solves `Σ_l x_l · basis[l] = target` over ℤ. Returns `None` when the
/// basis is singular or the solution is not integral.
pub fn solve_integer(basis: &[Vec<i64>], target: &[i64]) -> Option<Vec<i64>> {
    let n = basis.len();
    // columns are basis vectors
    let matrix: Vec<Vec<BigRational>> = (0..target.len())
        .map(|row| (0..n).map(|col| rat(basis[col][row])).collect())
        .collect();
    let rhs: Vec<BigRational> = target.iter().map(|&t| rat(t)).collect();
    match solve_rational(&matrix, &rhs) {
        Solution::Unique(x) => x
            .into_iter()
            .map(|v| {
                if v.is_integer() {
                    i64::try_from(v.to_integer()).ok()
                } else {
                    None
                }
            })
            .collect(),
        _ => None,
    }
}

/// Outcome of an exact linear solve.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Solution {
    Unique(Vec<BigRational>),
    Inconsistent,
    Underdetermined,
}

/// Gauss-Jordan elimination of `matrix · x = rhs` over ℚ. The matrix may be
/// non-square.
pub fn solve_rational(matrix: &[Vec<BigRational>], rhs: &[BigRational]) -> Solution {
    let rows = matrix.len();
    let cols = matrix.first().map_or(0, Vec::len);
    let mut a: Vec<Vec<BigRational>> = matrix
        .iter()
        .zip(rhs)
        .map(|(r, b)| {
            let mut row = r.clone();
            row.push(b.clone());
            row
        })
        .collect();
    let mut pivot_cols = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = a[r][c].recip();
        for v in a[r].iter_mut() {
            *v = &*v * &inv;
        }
        for i in 0..rows {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for k in c..=cols {
                    let sub = &f * &a[r][k];
                    a[i][k] = &a[i][k] - sub;
                }
            }
        }
        pivot_cols.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    if a[r..].iter().any(|row| !row[cols].is_zero()) {
        return Solution::Inconsistent;
    }
    if pivot_cols.len() < cols {
        return Solution::Underdetermined;
    }
    Solution::Unique((0..cols).map(|i| a[i][cols].clone()).collect())
}

/// Primitive integer generator of the kernel of an `n × (n+1)` integer matrix
/// of rank `n`, computed by signed maximal minors. `None` if the rank is
/// deficient.
pub fn kernel_generator(rows: &[Vec<i64>]) -> Option<Vec<i64>> {
    let n = rows.len();
    let cols = n + 1;
    let mut x: Vec<BigInt> = (0..cols)
        .map(|k| {
            let minor: Vec<Vec<i64>> = rows
                .iter()
                .map(|r| {
                    r.iter()
                        .enumerate()
                        .filter(|&(c, _)| c != k)
                        .map(|(_, &v)| v)
                        .collect()
                })
                .collect();
            let d = determinant(&minor);
            if k % 2 == 0 {
                d
            } else {
                -d
            }
        })
        .collect();
    let g = x.iter().fold(BigInt::zero(), |acc, v| acc.gcd(v));
    if g.is_zero() {
        return None;
    }
    for v in x.iter_mut() {
        *v = &*v / &g;
    }
    x.into_iter().map(|v| i64::try_from(v).ok()).collect()
}

pub(crate) fn rat(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

pub(crate) fn abs_is_one(v: &BigInt) -> bool {
    v.abs().is_one()
}
