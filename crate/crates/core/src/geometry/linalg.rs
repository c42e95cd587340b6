//! Small dense exact linear algebra.

use num_traits::{One, Zero};

use crate::rational::Q;

/// Row echelon form in place; returns the pivot columns.
fn echelon(rows: &mut [Vec<Q>], columns: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..columns {
        if row >= rows.len() {
            break;
        }
        let Some(found) = (row..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(row, found);
        let pivot = rows[row][col].clone();
        for value in rows[row].iter_mut() {
            *value = &*value / &pivot;
        }
        for r in 0..rows.len() {
            if r != row && !rows[r][col].is_zero() {
                let factor = rows[r][col].clone();
                let pivot_row = rows[row].clone();
                for (value, p) in rows[r].iter_mut().zip(&pivot_row) {
                    *value -= &factor * p;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    pivots
}

pub fn rank(vectors: &[Vec<Q>]) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    let columns = vectors[0].len();
    let mut rows = vectors.to_vec();
    echelon(&mut rows, columns).len()
}

/// Affine dimension of a point set (`-1` for the empty set is reported as `None`).
pub fn affine_dim(points: &[Vec<Q>]) -> Option<usize> {
    let first = points.first()?;
    let diffs: Vec<Vec<Q>> = points[1..]
        .iter()
        .map(|p| p.iter().zip(first).map(|(a, b)| a - b).collect())
        .collect();
    Some(rank(&diffs))
}

/// Solves `matrix * x = rhs`; returns one solution when consistent.
pub fn solve(matrix: &[Vec<Q>], rhs: &[Q]) -> Option<Vec<Q>> {
    let columns = matrix.first().map_or(0, Vec::len);
    let mut rows: Vec<Vec<Q>> = matrix
        .iter()
        .zip(rhs)
        .map(|(row, b)| {
            let mut r = row.clone();
            r.push(b.clone());
            r
        })
        .collect();
    let pivots = echelon(&mut rows, columns + 1);
    if pivots.last() == Some(&columns) {
        return None;
    }
    let mut solution = vec![Q::zero(); columns];
    for (row, &col) in pivots.iter().enumerate() {
        solution[col] = rows[row][columns].clone();
    }
    Some(solution)
}

/// A basis of `{x | matrix * x = 0}`.
pub fn nullspace(matrix: &[Vec<Q>], columns: usize) -> Vec<Vec<Q>> {
    let mut rows = matrix.to_vec();
    let pivots = echelon(&mut rows, columns);
    let free: Vec<usize> = (0..columns).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Q::zero(); columns];
            v[f] = Q::one();
            for (row, &col) in pivots.iter().enumerate() {
                v[col] = -rows[row][f].clone();
            }
            v
        })
        .collect()
}
