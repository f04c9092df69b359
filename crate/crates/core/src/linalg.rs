//! Exact linear algebra over the rationals on plain `Vec<Vec<Rational>>`
//! data: row reduction, rank, nullspace, inverse. These back the subspace
//! computations (series, derivation spaces) and the Jordan iteration.

use num_traits::{One, Zero};

use crate::rational::Rational;

pub type QMat = Vec<Vec<Rational>>;

/// In-place reduced row echelon form; returns the pivot columns.
pub fn rref(m: &mut QMat) -> Vec<usize> {
    let rows = m.len();
    if rows == 0 {
        return Vec::new();
    }
    let cols = m[0].len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = Rational::one() / &m[r][c];
        for j in c..cols {
            m[r][j] = &m[r][j] * &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in c..cols {
                    m[i][j] = &m[i][j] - &(&f * &m[r][j]);
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    pivots
}

pub fn rank(m: &QMat) -> usize {
    let mut work = m.clone();
    rref(&mut work).len()
}

/// Basis of `{ x : m x = 0 }`.
pub fn nullspace(m: &QMat) -> Vec<Vec<Rational>> {
    if m.is_empty() {
        return Vec::new();
    }
    let cols = m[0].len();
    let mut work = m.clone();
    let pivots = rref(&mut work);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    let mut basis = Vec::new();
    for &f in &free {
        let mut v = vec![Rational::zero(); cols];
        v[f] = Rational::one();
        for (row, &p) in pivots.iter().enumerate() {
            v[p] = -work[row][f].clone();
        }
        basis.push(v);
    }
    basis
}

pub fn identity(n: usize) -> QMat {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        Rational::one()
                    } else {
                        Rational::zero()
                    }
                })
                .collect()
        })
        .collect()
}

pub fn invert(m: &QMat) -> Option<QMat> {
    let n = m.len();
    if n == 0 || m.iter().any(|r| r.len() != n) {
        return None;
    }
    let mut work: QMat = m
        .iter()
        .zip(identity(n))
        .map(|(row, id_row)| row.iter().cloned().chain(id_row).collect())
        .collect();
    let pivots = rref(&mut work);
    if pivots != (0..n).collect::<Vec<_>>() {
        return None;
    }
    Some(work.into_iter().map(|row| row[n..].to_vec()).collect())
}

/// Dimension of the span of the given vectors.
pub fn span_dim(vectors: &[Vec<Rational>]) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    rank(&vectors.to_vec())
}

/// Reduces `vectors` to a basis of their span (rows of the rref).
pub fn span_basis(vectors: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    if vectors.is_empty() {
        return Vec::new();
    }
    let mut work = vectors.to_vec();
    let pivots = rref(&mut work);
    work.truncate(pivots.len());
    work
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat_int;

    fn m(rows: &[&[i64]]) -> QMat {
        rows.iter()
            .map(|r| r.iter().map(|&x| rat_int(x)).collect())
            .collect()
    }

    #[test]
    fn rank_and_nullspace() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        assert_eq!(rank(&a), 2);
        let ns = nullspace(&a);
        assert_eq!(ns.len(), 1);
        // verify a * v = 0
        for row in &a {
            let dot: Rational = row.iter().zip(&ns[0]).map(|(a, b)| a * b).sum();
            assert!(dot.is_zero());
        }
    }

    #[test]
    fn inverse_round_trip() {
        let a = m(&[&[2, 1], &[1, 1]]);
        let inv = invert(&a).unwrap();
        // a * inv = I
        for i in 0..2 {
            for j in 0..2 {
                let dot: Rational = (0..2).map(|k| &a[i][k] * &inv[k][j]).sum();
                assert_eq!(dot, if i == j { rat_int(1) } else { rat_int(0) });
            }
        }
        assert!(invert(&m(&[&[1, 2], &[2, 4]])).is_none());
    }
}
