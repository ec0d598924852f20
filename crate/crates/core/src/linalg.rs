//! Dense Gaussian elimination over a prime field.

use crate::modular::{inv_mod, mul_mod, sub_mod};

/// Solves `matrix * x = rhs` over `F_p`. `matrix` is row-major with every row
/// of equal length. Returns `None` when the system is inconsistent; free
/// variables of an underdetermined system are set to zero.
pub fn solve_mod_p(matrix: &[Vec<u64>], rhs: &[u64], p: u64) -> Option<Vec<u64>> {
    assert_eq!(matrix.len(), rhs.len(), "row count mismatch");
    let cols = matrix.first().map_or(0, Vec::len);
    let mut aug: Vec<Vec<u64>> = matrix
        .iter()
        .zip(rhs)
        .map(|(row, &b)| {
            assert_eq!(row.len(), cols, "ragged matrix");
            let mut r: Vec<u64> = row.iter().map(|&x| x % p).collect();
            r.push(b % p);
            r
        })
        .collect();

    let mut pivots = Vec::with_capacity(cols);
    let mut rank = 0;
    for col in 0..cols {
        let Some(pivot) = (rank..aug.len()).find(|&i| aug[i][col] != 0) else {
            continue;
        };
        aug.swap(rank, pivot);
        let inv = inv_mod(aug[rank][col], p).expect("nonzero element of a prime field");
        for x in aug[rank][col..].iter_mut() {
            *x = mul_mod(*x, inv, p);
        }
        let pivot_row = aug[rank].clone();
        for (i, row) in aug.iter_mut().enumerate() {
            if i == rank || row[col] == 0 {
                continue;
            }
            let factor = row[col];
            for (x, &y) in row[col..].iter_mut().zip(&pivot_row[col..]) {
                *x = sub_mod(*x, mul_mod(factor, y, p), p);
            }
        }
        pivots.push(col);
        rank += 1;
        if rank == aug.len() {
            break;
        }
    }

    if aug[rank..].iter().any(|row| row[cols] != 0) {
        return None;
    }
    let mut x = vec![0u64; cols];
    for (i, &col) in pivots.iter().enumerate() {
        x[col] = aug[i][cols];
    }
    Some(x)
}
