//! Rank of coefficient matrices, used for linear-independence and kernel
//! checks on families of polynomial maps.

use std::collections::BTreeMap;

use crate::poly::{MultiIndex, PolyMap};
use crate::scalar::Scalar;

/// Rank by Gaussian elimination. Exact for rational scalars; float pivots
/// below `1e-10 · max|entry|` count as zero.
pub fn rank<S: Scalar>(mut rows: Vec<Vec<S>>) -> usize {
    let Some(cols) = rows.first().map(Vec::len) else {
        return 0;
    };
    let scale = rows.iter().flatten().fold(
        S::zero(),
        |acc, x| if x.abs() > acc { x.abs() } else { acc },
    );
    let tiny = |x: &S| {
        if S::EXACT {
            x.is_zero()
        } else {
            x.abs().to_f64() <= 1e-10 * scale.to_f64()
        }
    };
    let mut r = 0;
    for c in 0..cols {
        if r == rows.len() {
            break;
        }
        // exact fields take any nonzero pivot; floats take the largest
        let pivot = if S::EXACT {
            (r..rows.len()).find(|&i| !rows[i][c].is_zero())
        } else {
            (r..rows.len())
                .filter(|&i| !tiny(&rows[i][c]))
                .max_by(|&a, &b| {
                    rows[a][c]
                        .abs()
                        .partial_cmp(&rows[b][c].abs())
                        .unwrap_or(std::cmp::Ordering::Equal)
                })
        };
        let Some(p) = pivot else { continue };
        rows.swap(r, p);
        let inv = S::one() / rows[r][c].clone();
        let pivot_row = rows[r].clone();
        for row in rows.iter_mut().skip(r + 1) {
            if row[c].is_zero() {
                continue;
            }
            let factor = row[c].clone() * inv.clone();
            for (x, y) in row.iter_mut().zip(&pivot_row).skip(c) {
                *x = x.clone() - factor.clone() * y.clone();
            }
        }
        r += 1;
    }
    r
}

/// Flattens polynomial maps into coefficient rows over the union of their
/// monomials (each monomial contributes one column per algebra component).
pub fn coefficient_rows<S: Scalar>(maps: &[PolyMap<S>]) -> Vec<Vec<S>> {
    let mut columns: BTreeMap<MultiIndex, usize> = BTreeMap::new();
    for f in maps {
        for (m, _) in f.terms() {
            let next = columns.len();
            columns.entry(m.clone()).or_insert(next);
        }
    }
    let dim = maps.first().map_or(0, |f| f.algebra().dim());
    maps.iter()
        .map(|f| {
            let mut row = vec![S::zero(); columns.len() * dim];
            for (m, c) in f.terms() {
                let base = columns[m] * dim;
                for (s, v) in c.coeffs().iter().enumerate() {
                    row[base + s] = v.clone();
                }
            }
            row
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;
    use crate::Rational;

    #[test]
    fn rank_of_small_matrices() {
        let m = vec![
            vec![rat(1, 1), rat(2, 1), rat(3, 1)],
            vec![rat(2, 1), rat(4, 1), rat(6, 1)],
            vec![rat(0, 1), rat(1, 1), rat(1, 1)],
        ];
        assert_eq!(rank(m), 2);
        assert_eq!(rank::<Rational>(vec![]), 0);
        let f = vec![vec![1.0, 0.0], vec![0.0, 1e-14]];
        assert_eq!(rank(f), 1);
    }
}
