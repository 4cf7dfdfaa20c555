//! Exact null-space computations for conservation laws.

use crate::crn::StoichMatrix;
use crate::rational::Rational;
use num::{One, Zero};

/// Basis of `{ x : A x = 0 }` for a dense rational matrix with `cols` columns,
/// computed by reduced row echelon form.
pub fn null_space(a: &[Vec<Rational>], cols: usize) -> Vec<Vec<Rational>> {
    let mut rows: Vec<Vec<Rational>> = a.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..cols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = Rational::one() / &rows[r][col];
        for v in rows[r].iter_mut() {
            *v *= &inv;
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[col].is_zero() {
                continue;
            }
            let factor = row[col].clone();
            for (v, p) in row.iter_mut().zip(&pivot_row) {
                *v -= &factor * p;
            }
        }
        pivots.push(col);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    (0..cols)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut x = vec![Rational::zero(); cols];
            x[free] = Rational::one();
            for (i, &p) in pivots.iter().enumerate() {
                x[p] = -rows[i][free].clone();
            }
            x
        })
        .collect()
}

/// Basis of the conservation laws `{ w : wᵀ M = 0 }`.
pub fn left_null_space(m: &StoichMatrix) -> Vec<Vec<Rational>> {
    let transposed: Vec<Vec<Rational>> = (0..m.cols())
        .map(|j| {
            m.column(j)
                .into_iter()
                .map(|v| Rational::from_integer(v.into()))
                .collect()
        })
        .collect();
    null_space(&transposed, m.rows())
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter()
        .zip(b)
        .fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}
