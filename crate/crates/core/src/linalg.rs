//! Exact Gaussian elimination.

use num_traits::{One, Zero};

use crate::scalar::Rational;

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref(m: &mut [Vec<Rational>]) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = Rational::one() / &m[r][c];
        for x in m[r].iter_mut() {
            *x = &*x * &inv;
        }
        let prow = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (x, y) in row.iter_mut().zip(prow.iter()) {
                    if !y.is_zero() {
                        *x = &*x - &f * y;
                    }
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(m: &[Vec<Rational>]) -> usize {
    let mut copy = m.to_vec();
    rref(&mut copy).len()
}

/// Rank of the submatrix made of the given columns.
pub fn column_rank(m: &[Vec<Rational>], cols: &[usize]) -> usize {
    let mut sub: Vec<Vec<Rational>> = m.iter().map(|row| cols.iter().map(|&c| row[c].clone()).collect()).collect();
    rref(&mut sub).len()
}

/// Basis of the right null space, one vector per free column.
pub fn nullspace(m: &[Vec<Rational>], n_cols: usize) -> Vec<Vec<Rational>> {
    let mut copy = m.to_vec();
    let pivots = rref(&mut copy);
    let free: Vec<usize> = (0..n_cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Rational::zero(); n_cols];
            v[f] = Rational::one();
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = -copy[r][f].clone();
            }
            v
        })
        .collect()
}
