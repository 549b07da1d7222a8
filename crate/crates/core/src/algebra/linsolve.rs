//! Gaussian elimination over the field of rational functions.

use super::ratfun::RationalFunction;
use crate::error::{Error, Result};

fn size(f: &RationalFunction) -> usize {
    f.num().len() + f.den_factors().iter().map(|(p, _)| p.len()).sum::<usize>()
}

/// Solves `matrix * x = rhs`. Among the nonzero candidates in a column the
/// pivot with the smallest representation is used.
pub fn solve_linear(matrix: &[Vec<RationalFunction>], rhs: &[RationalFunction]) -> Result<Vec<RationalFunction>> {
    let n = matrix.len();
    if rhs.len() != n || matrix.iter().any(|row| row.len() != n) {
        return Err(Error::Shape(format!(
            "expected a square {n}x{n} system with {n} right-hand sides"
        )));
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    let ring = matrix[0][0].ring().clone();
    let mut a: Vec<Vec<RationalFunction>> = matrix.to_vec();
    let mut b: Vec<RationalFunction> = rhs.to_vec();
    for col in 0..n {
        let pivot = (col..n)
            .filter(|&r| !a[r][col].is_zero())
            .min_by_key(|&r| size(&a[r][col]))
            .ok_or(Error::SingularSystem { column: col })?;
        a.swap(col, pivot);
        b.swap(col, pivot);
        let inv = a[col][col].inv()?;
        for j in col..n {
            a[col][j] = &a[col][j] * &inv;
        }
        b[col] = &b[col] * &inv;
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let factor = a[r][col].clone();
            for j in col..n {
                let t = &factor * &a[col][j];
                a[r][j] = &a[r][j] - &t;
            }
            let t = &factor * &b[col];
            b[r] = &b[r] - &t;
        }
    }
    debug_assert!(b.iter().all(|x| x.ring().same(&ring)));
    Ok(b)
}
