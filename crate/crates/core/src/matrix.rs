//! Dense matrices with polynomial entries, and the exact linear-algebra
//! operations the completeness criteria rest on: products and powers,
//! fraction-free determinants, characteristic polynomials by the
//! Faddeev-LeVerrier recurrence, and polynomial-identity nilpotency tests.

use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::QMat;
use crate::poly::MultiPoly;
use crate::rational::Rational;
use crate::symbols::{context_mismatch, Context};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyMatrix {
    rows: usize,
    cols: usize,
    ctx: Context,
    entries: Vec<MultiPoly>,
}

/// Monic characteristic polynomial; `coeffs[k]` is the coefficient of the
/// k-th power of the indeterminate, `coeffs[n]` is 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CharPoly {
    pub coeffs: Vec<MultiPoly>,
}

impl PolyMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<MultiPoly>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                entries.len()
            )));
        }
        let ctx = entries
            .first()
            .map(|e| e.context().clone())
            .ok_or_else(|| Error::Dimension("matrix must be nonempty".into()))?;
        for e in &entries {
            if **e.context() != *ctx {
                return Err(context_mismatch(&ctx, e.context()));
            }
        }
        Ok(PolyMatrix {
            rows,
            cols,
            ctx,
            entries,
        })
    }

    pub fn zero(ctx: &Context, rows: usize, cols: usize) -> Self {
        PolyMatrix {
            rows,
            cols,
            ctx: ctx.clone(),
            entries: vec![MultiPoly::zero(ctx); rows * cols],
        }
    }

    pub fn identity(ctx: &Context, n: usize) -> Self {
        let mut m = Self::zero(ctx, n, n);
        for i in 0..n {
            *m.at_mut(i, i) = MultiPoly::one(ctx);
        }
        m
    }

    pub fn from_fn(
        ctx: &Context,
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> MultiPoly,
    ) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        PolyMatrix {
            rows,
            cols,
            ctx: ctx.clone(),
            entries,
        }
    }

    pub fn from_rational_rows(ctx: &Context, rows: &QMat) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map(|x| x.len()).unwrap_or(0);
        let mut entries = Vec::with_capacity(r * c);
        for row in rows {
            if row.len() != c {
                return Err(Error::Dimension("ragged rational matrix".into()));
            }
            for v in row {
                entries.push(MultiPoly::constant(ctx, v.clone()));
            }
        }
        PolyMatrix::new(r, c, entries)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn context(&self) -> &Context {
        &self.ctx
    }

    pub fn at(&self, i: usize, j: usize) -> &MultiPoly {
        &self.entries[i * self.cols + j]
    }

    pub fn at_mut(&mut self, i: usize, j: usize) -> &mut MultiPoly {
        &mut self.entries[i * self.cols + j]
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(MultiPoly::is_zero)
    }

    pub fn column(&self, j: usize) -> Vec<MultiPoly> {
        (0..self.rows).map(|i| self.at(i, j).clone()).collect()
    }

    fn require_square(&self) -> Result<()> {
        if self.is_square() {
            Ok(())
        } else {
            Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            })
        }
    }

    fn require_same_shape(&self, other: &Self) -> Result<()> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::Dimension(format!(
                "{}x{} vs {}x{}",
                self.rows, other.rows, self.cols, other.cols
            )));
        }
        if *self.ctx != *other.ctx {
            return Err(context_mismatch(&self.ctx, &other.ctx));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.require_same_shape(other)?;
        Ok(PolyMatrix {
            rows: self.rows,
            cols: self.cols,
            ctx: self.ctx.clone(),
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.require_same_shape(other)?;
        Ok(PolyMatrix {
            rows: self.rows,
            cols: self.cols,
            ctx: self.ctx.clone(),
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    pub fn neg(&self) -> Self {
        PolyMatrix {
            rows: self.rows,
            cols: self.cols,
            ctx: self.ctx.clone(),
            entries: self.entries.iter().map(|a| -a).collect(),
        }
    }

    pub fn scale(&self, c: &MultiPoly) -> Result<Self> {
        if *self.ctx != **c.context() {
            return Err(context_mismatch(&self.ctx, c.context()));
        }
        Ok(PolyMatrix {
            rows: self.rows,
            cols: self.cols,
            ctx: self.ctx.clone(),
            entries: self.entries.iter().map(|a| a * c).collect(),
        })
    }

    pub fn scale_rat(&self, c: &Rational) -> Self {
        PolyMatrix {
            rows: self.rows,
            cols: self.cols,
            ctx: self.ctx.clone(),
            entries: self.entries.iter().map(|a| a.scale(c)).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        if *self.ctx != *other.ctx {
            return Err(context_mismatch(&self.ctx, &other.ctx));
        }
        let mut out = PolyMatrix::zero(&self.ctx, self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = MultiPoly::zero(&self.ctx);
                for k in 0..self.cols {
                    let a = self.at(i, k);
                    let b = other.at(k, j);
                    if !a.is_zero() && !b.is_zero() {
                        acc = &acc + &(a * b);
                    }
                }
                *out.at_mut(i, j) = acc;
            }
        }
        Ok(out)
    }

    /// Exponent 0 gives the identity.
    pub fn pow(&self, exp: u32) -> Result<Self> {
        self.require_square()?;
        let mut acc = PolyMatrix::identity(&self.ctx, self.rows);
        for _ in 0..exp {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    pub fn commutator(&self, other: &Self) -> Result<Self> {
        self.mul(other)?.sub(&other.mul(self)?)
    }

    pub fn transpose(&self) -> Self {
        PolyMatrix::from_fn(&self.ctx, self.cols, self.rows, |i, j| {
            self.at(j, i).clone()
        })
    }

    pub fn trace(&self) -> Result<MultiPoly> {
        self.require_square()?;
        let mut acc = MultiPoly::zero(&self.ctx);
        for i in 0..self.rows {
            acc = &acc + self.at(i, i);
        }
        Ok(acc)
    }

    /// Matrix times column vector.
    pub fn apply(&self, v: &[MultiPoly]) -> Result<Vec<MultiPoly>> {
        if v.len() != self.cols {
            return Err(Error::Dimension(format!(
                "matrix has {} columns, vector has {} entries",
                self.cols,
                v.len()
            )));
        }
        let mut out = Vec::with_capacity(self.rows);
        for i in 0..self.rows {
            let mut acc = MultiPoly::zero(&self.ctx);
            for j in 0..self.cols {
                let e = self.at(i, j);
                if !e.is_zero() && !v[j].is_zero() {
                    acc = &acc + &(e * &v[j]);
                }
            }
            out.push(acc);
        }
        Ok(out)
    }

    pub fn lift_to(&self, target: &Context) -> Result<Self> {
        let entries = self
            .entries
            .iter()
            .map(|e| e.lift_to(target))
            .collect::<Result<Vec<_>>>()?;
        Ok(PolyMatrix {
            rows: self.rows,
            cols: self.cols,
            ctx: target.clone(),
            entries,
        })
    }

    /// All entries as rationals, or the offending entry.
    pub fn constant_entries(&self) -> Result<QMat> {
        let mut out = Vec::with_capacity(self.rows);
        for i in 0..self.rows {
            let mut row = Vec::with_capacity(self.cols);
            for j in 0..self.cols {
                match self.at(i, j).as_constant() {
                    Some(c) => row.push(c),
                    None => {
                        return Err(Error::SymbolicEntries {
                            row: i + 1,
                            col: j + 1,
                            entry: self.at(i, j).to_string(),
                        })
                    }
                }
            }
            out.push(row);
        }
        Ok(out)
    }

    /// Exact determinant: memoized cofactor expansion for small matrices,
    /// fraction-free Bareiss elimination above.
    pub fn determinant(&self) -> Result<MultiPoly> {
        self.require_square()?;
        let n = self.rows;
        if n <= 5 {
            Ok(self.det_cofactor())
        } else {
            self.det_bareiss()
        }
    }

    fn det_cofactor(&self) -> MultiPoly {
        let n = self.rows;
        let full: u32 = (1 << n) - 1;
        let mut memo: std::collections::HashMap<u32, MultiPoly> = std::collections::HashMap::new();
        memo.insert(0, MultiPoly::one(&self.ctx));
        self.det_cols(full, &mut memo)
    }

    // Determinant of the submatrix on the last `popcount(mask)` rows and the
    // column set `mask`, expanding along the first of those rows.
    fn det_cols(
        &self,
        mask: u32,
        memo: &mut std::collections::HashMap<u32, MultiPoly>,
    ) -> MultiPoly {
        if let Some(d) = memo.get(&mask) {
            return d.clone();
        }
        let k = mask.count_ones() as usize;
        let row = self.rows - k;
        let mut acc = MultiPoly::zero(&self.ctx);
        let mut sign_pos = true;
        for j in 0..self.cols {
            if mask & (1 << j) == 0 {
                continue;
            }
            let e = self.at(row, j);
            if !e.is_zero() {
                let minor = self.det_cols(mask & !(1 << j), memo);
                let term = e * &minor;
                acc = if sign_pos { &acc + &term } else { &acc - &term };
            }
            sign_pos = !sign_pos;
        }
        memo.insert(mask, acc.clone());
        acc
    }

    fn det_bareiss(&self) -> Result<MultiPoly> {
        let n = self.rows;
        let mut m: Vec<Vec<MultiPoly>> = (0..n)
            .map(|i| (0..n).map(|j| self.at(i, j).clone()).collect())
            .collect();
        let mut sign_pos = true;
        let mut prev = MultiPoly::one(&self.ctx);
        for k in 0..n - 1 {
            if m[k][k].is_zero() {
                let Some(p) = (k + 1..n).find(|&i| !m[i][k].is_zero()) else {
                    return Ok(MultiPoly::zero(&self.ctx));
                };
                m.swap(k, p);
                sign_pos = !sign_pos;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &(&m[k][k] * &m[i][j]) - &(&m[i][k] * &m[k][j]);
                    m[i][j] = num
                        .div_exact(&prev)
                        .ok_or_else(|| Error::Internal("Bareiss division not exact".into()))?;
                }
                m[i][k] = MultiPoly::zero(&self.ctx);
            }
            prev = m[k][k].clone();
        }
        let det = m[n - 1][n - 1].clone();
        Ok(if sign_pos { det } else { -&det })
    }

    /// det(lambda*I - M) by the Faddeev-LeVerrier recurrence; valid because
    /// the entries live in a Q-algebra, so division by integers is exact.
    pub fn char_poly(&self) -> Result<CharPoly> {
        self.require_square()?;
        let n = self.rows;
        let mut coeffs = vec![MultiPoly::zero(&self.ctx); n + 1];
        coeffs[n] = MultiPoly::one(&self.ctx);
        let mut aux = PolyMatrix::identity(&self.ctx, n);
        for k in 1..=n {
            let prod = self.mul(&aux)?;
            let c = prod
                .trace()?
                .scale(&(-Rational::new(1.into(), (k as i64).into())));
            coeffs[n - k] = c.clone();
            if k < n {
                aux = prod.add(&PolyMatrix::identity(&self.ctx, n).scale(&c)?)?;
            }
        }
        Ok(CharPoly { coeffs })
    }

    /// True iff the n-th power vanishes as a polynomial identity, i.e. the
    /// matrix is nilpotent for every real value of its symbols. Early exit
    /// when an intermediate power is already zero.
    pub fn is_nilpotent(&self) -> Result<bool> {
        self.require_square()?;
        let n = self.rows as u32;
        let mut acc = self.clone();
        for _ in 0..n {
            if acc.is_zero() {
                return Ok(true);
            }
            acc = acc.mul(self)?;
        }
        Ok(acc.is_zero())
    }

    /// Adjugate-based inverse; requires the determinant to be a nonzero
    /// rational constant, which keeps the inverse inside the polynomial ring.
    pub fn inverse(&self) -> Result<Self> {
        self.require_square()?;
        let det = self.determinant()?;
        let det_rat = det
            .as_constant()
            .ok_or_else(|| Error::NotInvertible(format!("determinant `{det}` is not constant")))?;
        if det_rat.is_zero() {
            return Err(Error::NotInvertible("determinant is zero".into()));
        }
        let n = self.rows;
        let inv_det = Rational::one() / det_rat;
        let mut out = PolyMatrix::zero(&self.ctx, n, n);
        for i in 0..n {
            for j in 0..n {
                // cofactor C_ji for the (i,j) entry of the inverse
                let minor = self.minor(j, i)?;
                let c = if (i + j) % 2 == 0 { minor } else { -&minor };
                *out.at_mut(i, j) = c.scale(&inv_det);
            }
        }
        Ok(out)
    }

    fn minor(&self, drop_row: usize, drop_col: usize) -> Result<MultiPoly> {
        let n = self.rows;
        if n == 1 {
            return Ok(MultiPoly::one(&self.ctx));
        }
        let mut entries = Vec::with_capacity((n - 1) * (n - 1));
        for i in 0..n {
            if i == drop_row {
                continue;
            }
            for j in 0..n {
                if j == drop_col {
                    continue;
                }
                entries.push(self.at(i, j).clone());
            }
        }
        PolyMatrix::new(n - 1, n - 1, entries)?.determinant()
    }
}

impl CharPoly {
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Substitutes a square matrix for the indeterminate.
    pub fn eval_matrix(&self, m: &PolyMatrix) -> Result<PolyMatrix> {
        let n = m.rows();
        let mut acc = PolyMatrix::zero(m.context(), n, n);
        let mut power = PolyMatrix::identity(m.context(), n);
        for (k, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                acc = acc.add(&power.scale(c)?)?;
            }
            if k + 1 < self.coeffs.len() {
                power = power.mul(m)?;
            }
        }
        Ok(acc)
    }

    /// True iff the polynomial is the pure power of the indeterminate,
    /// which is the characteristic polynomial of a nilpotent matrix.
    pub fn is_pure_power(&self) -> bool {
        self.coeffs[..self.coeffs.len() - 1]
            .iter()
            .all(MultiPoly::is_zero)
    }

    /// Display with the first unused name among `lambda`, `t`, `s`, `w`.
    pub fn variable_name(&self) -> &'static str {
        let ctx = self.coeffs[0].context();
        for cand in ["lambda", "t", "s", "w"] {
            if ctx.position(cand).is_none() {
                return cand;
            }
        }
        "indet"
    }
}

impl fmt::Display for CharPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let var = self.variable_name();
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let power = match k {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{k}"),
            };
            let piece = if k == 0 {
                c.to_string()
            } else if c.is_one() {
                power
            } else if c.num_terms() == 1 {
                format!("{c}*{power}")
            } else {
                format!("({c})*{power}")
            };
            if first {
                write!(f, "{piece}")?;
                first = false;
            } else if let Some(stripped) = piece.strip_prefix('-') {
                write!(f, " - {stripped}")?;
            } else {
                write!(f, " + {piece}")?;
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

impl fmt::Display for PolyMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.at(i, j).to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_poly;
    use crate::rational::{rat, rat_int};
    use crate::symbols::SymbolContext;

    fn mat(ctx: &Context, rows: &[&[&str]]) -> PolyMatrix {
        let entries: Vec<MultiPoly> = rows
            .iter()
            .flat_map(|r| r.iter().map(|s| parse_poly(s, ctx).unwrap()))
            .collect();
        PolyMatrix::new(rows.len(), rows[0].len(), entries).unwrap()
    }

    #[test]
    fn identity_law_and_power_zero() {
        let ctx = SymbolContext::new(&["x1"]).unwrap();
        let m = mat(&ctx, &[&["x1", "1"], &["2", "0"]]);
        let id = PolyMatrix::identity(&ctx, 2);
        assert_eq!(id.mul(&m).unwrap(), m);
        assert_eq!(m.pow(0).unwrap(), id);
    }

    #[test]
    fn half_ad_x_heisenberg_squares_to_zero() {
        let ctx = SymbolContext::new(&["x1", "x2"]).unwrap();
        let m = mat(
            &ctx,
            &[
                &["0", "0", "0"],
                &["0", "0", "0"],
                &["-1/2*x2", "1/2*x1", "0"],
            ],
        );
        assert!(m.pow(2).unwrap().is_zero());
        assert!(m.is_nilpotent().unwrap());
    }

    #[test]
    fn determinant_of_identity_and_singular() {
        let ctx = SymbolContext::empty();
        let id = PolyMatrix::identity(&ctx, 3);
        assert!(id.determinant().unwrap().is_one());
        let m = mat(&ctx, &[&["1", "2"], &["2", "4"]]);
        assert!(m.determinant().unwrap().is_zero());
    }

    #[test]
    fn determinant_symbolic_unit_shift() {
        // I + R_y for the rotation-by-translation right multiplication
        let ctx = SymbolContext::new(&["y1", "y2"]).unwrap();
        let m = mat(
            &ctx,
            &[
                &["1", "0", "-y2"],
                &["0", "1", "y1"],
                &["-1/2*y2", "1/2*y1", "1"],
            ],
        );
        let det = m.determinant().unwrap();
        let expected = parse_poly("1 - 1/2*y1^2 - 1/2*y2^2", &ctx).unwrap();
        assert_eq!(det, expected);
    }

    #[test]
    fn bareiss_matches_cofactor() {
        let ctx = SymbolContext::new(&["a", "b"]).unwrap();
        let m = mat(
            &ctx,
            &[
                &["a", "1", "0", "2", "1", "0"],
                &["1", "b", "1", "0", "0", "1"],
                &["0", "1", "a", "1", "0", "0"],
                &["2", "0", "1", "b", "1", "0"],
                &["1", "0", "0", "1", "a", "1"],
                &["0", "1", "0", "0", "1", "b"],
            ],
        );
        let bareiss = m.det_bareiss().unwrap();
        let cofactor = m.det_cofactor();
        assert_eq!(bareiss, cofactor);
    }

    #[test]
    fn charpoly_identity_2x2() {
        let ctx = SymbolContext::empty();
        let id = PolyMatrix::identity(&ctx, 2);
        let cp = id.char_poly().unwrap();
        assert_eq!(cp.to_string(), "lambda^2 - 2*lambda + 1");
        assert_eq!(cp.coeffs[0], MultiPoly::one(&ctx));
        assert_eq!(cp.coeffs[1], MultiPoly::constant(&ctx, rat_int(-2)));
    }

    #[test]
    fn charpoly_constant_term_is_signed_determinant() {
        let ctx = SymbolContext::empty();
        let m = mat(
            &ctx,
            &[&["1", "2", "3"], &["0", "1", "4"], &["5", "6", "0"]],
        );
        let cp = m.char_poly().unwrap();
        let det = m.determinant().unwrap();
        // (-1)^3 det
        assert_eq!(cp.coeffs[0], -&det);
    }

    #[test]
    fn nilpotency_examples() {
        let ctx = SymbolContext::new(&["z2", "z3"]).unwrap();
        let r = mat(
            &ctx,
            &[&["0", "0", "0"], &["z2", "0", "0"], &["z3", "0", "0"]],
        );
        assert!(r.is_nilpotent().unwrap());
        assert!(!PolyMatrix::identity(&ctx, 3).is_nilpotent().unwrap());
    }

    #[test]
    fn inverse_of_permutation() {
        let ctx = SymbolContext::empty();
        let t = mat(
            &ctx,
            &[&["0", "1", "0"], &["0", "0", "1"], &["1", "0", "0"]],
        );
        let inv = t.inverse().unwrap();
        assert_eq!(t.mul(&inv).unwrap(), PolyMatrix::identity(&ctx, 3));
    }

    #[test]
    fn inverse_with_parameter_entries_and_unit_determinant() {
        let ctx = SymbolContext::new(&["lambda"]).unwrap();
        let t = mat(&ctx, &[&["1", "lambda"], &["0", "1"]]);
        let inv = t.inverse().unwrap();
        assert_eq!(t.mul(&inv).unwrap(), PolyMatrix::identity(&ctx, 2));
        assert_eq!(*inv.at(0, 1), parse_poly("-lambda", &ctx).unwrap());
    }

    #[test]
    fn scale_by_half() {
        let ctx = SymbolContext::new(&["x1"]).unwrap();
        let m = mat(&ctx, &[&["x1"]]);
        assert_eq!(
            *m.scale_rat(&rat(1, 2)).at(0, 0),
            parse_poly("1/2*x1", &ctx).unwrap()
        );
    }
}
