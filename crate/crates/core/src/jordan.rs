//! Additive Jordan decomposition of constant rational matrices:
//! M = S + N with S semisimple (squarefree minimal polynomial over Q,
//! i.e. diagonalizable over C), N nilpotent, and S N = N S.
//!
//! S is computed by a Newton iteration on the squarefree part of the
//! characteristic polynomial, entirely inside Q[M], so the decomposition
//! is exact and unique.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::linalg;
use crate::matrix::PolyMatrix;

use crate::rational::Rational;
use crate::unipoly::QPoly;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JordanPair {
    pub semisimple: PolyMatrix,
    pub nilpotent: PolyMatrix,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ElementType {
    Nilpotent,
    Semisimple,
    Mixed,
}

impl std::fmt::Display for ElementType {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            ElementType::Nilpotent => "nilpotent",
            ElementType::Semisimple => "semisimple",
            ElementType::Mixed => "mixed",
        };
        f.write_str(s)
    }
}

/// Characteristic polynomial of a constant matrix as a rational univariate.
pub fn rational_char_poly(m: &PolyMatrix) -> Result<QPoly> {
    m.constant_entries()?; // reject symbolic input early
    let cp = m.char_poly()?;
    Ok(QPoly::new(
        cp.coeffs
            .iter()
            .map(|c| {
                c.as_constant()
                    .expect("constant matrix has constant charpoly")
            })
            .collect(),
    ))
}

/// Monic minimal polynomial of a constant matrix, by the first linear
/// dependence among I, M, M^2, ...
pub fn minimal_polynomial(m: &PolyMatrix) -> Result<QPoly> {
    let q = m.constant_entries()?;
    let n = q.len();
    let mut powers: Vec<Vec<Rational>> = Vec::new();
    let mut current = linalg::identity(n);
    loop {
        powers.push(current.iter().flatten().cloned().collect());
        // Solve sum a_k P_k = 0 with a_last = 1: look for dependence.
        if powers.len() >= 2 {
            // columns = previous powers, rhs = -latest
            let cols = powers.len() - 1;
            let rows = n * n;
            let mut sys: Vec<Vec<Rational>> = Vec::with_capacity(rows);
            for r in 0..rows {
                let mut row: Vec<Rational> = (0..cols).map(|c| powers[c][r].clone()).collect();
                row.push(powers[cols][r].clone());
                sys.push(row);
            }
            // nullspace with last coordinate nonzero gives the dependence
            for v in linalg::nullspace(&sys) {
                if !v[cols].is_zero() {
                    let scale = Rational::from_integer(1.into()) / v[cols].clone();
                    let coeffs: Vec<Rational> = v.iter().map(|c| c * &scale).collect();
                    return Ok(QPoly::new(coeffs));
                }
            }
        }
        if powers.len() > n + 1 {
            return Err(Error::Internal(
                "minimal polynomial search exceeded degree bound".into(),
            ));
        }
        current = mat_mul(&current, &q);
    }
}

fn mat_mul(a: &linalg::QMat, b: &linalg::QMat) -> linalg::QMat {
    let n = a.len();
    let mut out = vec![vec![Rational::zero(); n]; n];
    for i in 0..n {
        for k in 0..n {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..n {
                out[i][j] = &out[i][j] + &(&a[i][k] * &b[k][j]);
            }
        }
    }
    out
}

/// Evaluates a rational univariate polynomial at a square PolyMatrix.
fn eval_poly_at(m: &PolyMatrix, p: &QPoly) -> Result<PolyMatrix> {
    let ctx = m.context();
    let n = m.rows();
    let mut acc = PolyMatrix::zero(ctx, n, n);
    let mut power = PolyMatrix::identity(ctx, n);
    for (k, c) in p.coeffs().iter().enumerate() {
        if !c.is_zero() {
            acc = acc.add(&power.scale_rat(c))?;
        }
        if k + 1 < p.coeffs().len() {
            power = power.mul(m)?;
        }
    }
    Ok(acc)
}

/// The unique additive decomposition `m = semisimple + nilpotent`.
pub fn jordan_chevalley(m: &PolyMatrix) -> Result<JordanPair> {
    m.constant_entries()?;
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let p = rational_char_poly(m)?;
    let q = p.squarefree_part();
    let q_prime = q.derivative();

    let mut s = m.clone();
    let max_iter = 2 * m.rows() + 2;
    for _ in 0..max_iter {
        let qs = eval_poly_at(&s, &q)?;
        if qs.is_zero() {
            let n = m.sub(&s)?;
            return Ok(JordanPair {
                semisimple: s,
                nilpotent: n,
            });
        }
        let qps = eval_poly_at(&s, &q_prime)?;
        let correction = qs.mul(&qps.inverse()?)?;
        s = s.sub(&correction)?;
    }
    Err(Error::Internal(
        "Jordan iteration failed to converge".into(),
    ))
}

pub fn element_type(m: &PolyMatrix) -> Result<ElementType> {
    let pair = jordan_chevalley(m)?;
    Ok(if pair.semisimple.is_zero() {
        ElementType::Nilpotent
    } else if pair.nilpotent.is_zero() {
        ElementType::Semisimple
    } else {
        ElementType::Mixed
    })
}

/// The four defining invariants, used by tests and the randomized suite.
pub fn check_jordan_invariants(m: &PolyMatrix, pair: &JordanPair) -> Result<()> {
    let sum = pair.semisimple.add(&pair.nilpotent)?;
    if sum != *m {
        return Err(Error::Internal(
            "jordan parts do not sum to the input".into(),
        ));
    }
    if !pair.semisimple.commutator(&pair.nilpotent)?.is_zero() {
        return Err(Error::Internal("jordan parts do not commute".into()));
    }
    if !pair.nilpotent.is_nilpotent()? {
        return Err(Error::Internal("nilpotent part is not nilpotent".into()));
    }
    let minpoly = minimal_polynomial(&pair.semisimple)?;
    if !minpoly.is_squarefree() {
        return Err(Error::Internal(
            "semisimple part has a non-squarefree minimal polynomial".into(),
        ));
    }
    Ok(())
}
