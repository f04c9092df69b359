//! Lie algebras given by structure constants.
//!
//! Constants are stored only for basis pairs i < j; antisymmetry holds by
//! construction. Coefficients may involve declared parameters, in which case
//! Jacobi and derivation checks are polynomial identities in those
//! parameters. Series computations, by contrast, need instantiated
//! parameters because subspace dimensions can jump at special values.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg;
use crate::matrix::PolyMatrix;
use crate::poly::MultiPoly;
use crate::rational::Rational;
use crate::symbols::{coordinate_names, Context, SymbolContext};

/// Coordinate vector with polynomial entries, length = ambient dimension.
pub type GenericVector = Vec<MultiPoly>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LieAlgebra {
    name: String,
    dim: usize,
    ctx: Context,
    // (i, j) with i < j, 0-based; value has `dim` coefficient polynomials.
    brackets: BTreeMap<(usize, usize), Vec<MultiPoly>>,
}

impl LieAlgebra {
    /// Builds the algebra and verifies the Jacobi identity symbolically in
    /// the parameters; fails with the first offending basis triple.
    pub fn new(
        name: &str,
        dim: usize,
        ctx: &Context,
        brackets: BTreeMap<(usize, usize), Vec<MultiPoly>>,
    ) -> Result<Self> {
        let alg = Self::new_unchecked(name, dim, ctx, brackets)?;
        if let Some((i, j, k, defect)) = alg.jacobi_defect() {
            return Err(Error::JacobiFailure {
                i: i + 1,
                j: j + 1,
                k: k + 1,
                defect: format_vector(&defect),
            });
        }
        Ok(alg)
    }

    /// Shape validation only; used where a non-Lie bracket must be
    /// representable so `check_jacobi` can report it.
    pub fn new_unchecked(
        name: &str,
        dim: usize,
        ctx: &Context,
        brackets: BTreeMap<(usize, usize), Vec<MultiPoly>>,
    ) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Dimension(
                "Lie algebra dimension must be positive".into(),
            ));
        }
        for (&(i, j), value) in &brackets {
            if i >= j || j >= dim {
                return Err(Error::Dimension(format!(
                    "bracket index ({},{}) out of range for i<j<=dim={dim}",
                    i + 1,
                    j + 1
                )));
            }
            if value.len() != dim {
                return Err(Error::Dimension(format!(
                    "bracket value for ({},{}) has {} coefficients, expected {dim}",
                    i + 1,
                    j + 1,
                    value.len()
                )));
            }
            for coeff in value {
                if **coeff.context() != **ctx {
                    return Err(crate::symbols::context_mismatch(ctx, coeff.context()));
                }
            }
        }
        Ok(LieAlgebra {
            name: name.to_owned(),
            dim,
            ctx: ctx.clone(),
            brackets,
        })
    }

    pub fn abelian(name: &str, dim: usize) -> Self {
        LieAlgebra {
            name: name.to_owned(),
            dim,
            ctx: SymbolContext::empty(),
            brackets: BTreeMap::new(),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn context(&self) -> &Context {
        &self.ctx
    }

    pub fn has_params(&self) -> bool {
        !self.ctx.is_empty()
    }

    pub fn bracket_entries(&self) -> &BTreeMap<(usize, usize), Vec<MultiPoly>> {
        &self.brackets
    }

    pub fn is_abelian(&self) -> bool {
        self.brackets
            .values()
            .all(|v| v.iter().all(MultiPoly::is_zero))
    }

    /// `[e_i, e_j]` for any index pair, antisymmetrically extended.
    pub fn bracket_basis(&self, i: usize, j: usize) -> Vec<MultiPoly> {
        let zero = vec![MultiPoly::zero(&self.ctx); self.dim];
        if i == j {
            return zero;
        }
        let (key, flip) = if i < j {
            ((i, j), false)
        } else {
            ((j, i), true)
        };
        match self.brackets.get(&key) {
            None => zero,
            Some(v) => {
                if flip {
                    v.iter().map(|c| -c).collect()
                } else {
                    v.clone()
                }
            }
        }
    }

    /// Bilinear expansion of `[a, b]`; the vectors must share a context
    /// that declares all of the algebra's parameters.
    pub fn bracket(&self, a: &GenericVector, b: &GenericVector) -> Result<GenericVector> {
        if a.len() != self.dim || b.len() != self.dim {
            return Err(Error::Dimension(format!(
                "vectors of length {}/{} in a {}-dimensional algebra",
                a.len(),
                b.len(),
                self.dim
            )));
        }
        let ctx = common_context(a, b)?;
        let mut out = vec![MultiPoly::zero(&ctx); self.dim];
        for (&(i, j), value) in &self.brackets {
            // a_i b_j - a_j b_i multiplies [e_i, e_j]
            let factor = &(&a[i] * &b[j]) - &(&a[j] * &b[i]);
            if factor.is_zero() {
                continue;
            }
            for (k, coeff) in value.iter().enumerate() {
                if !coeff.is_zero() {
                    out[k] = &out[k] + &(&factor * &coeff.lift_to(&ctx)?);
                }
            }
        }
        Ok(out)
    }

    /// Matrix of `w -> [v, w]` acting on basis columns.
    pub fn ad_matrix(&self, v: &GenericVector) -> Result<PolyMatrix> {
        if v.len() != self.dim {
            return Err(Error::Dimension(format!(
                "vector of length {} in a {}-dimensional algebra",
                v.len(),
                self.dim
            )));
        }
        let ctx = common_context(v, v)?;
        let mut m = PolyMatrix::zero(&ctx, self.dim, self.dim);
        for j in 0..self.dim {
            let col = self.bracket(v, &basis_vector(&ctx, self.dim, j))?;
            for (k, entry) in col.into_iter().enumerate() {
                *m.at_mut(k, j) = entry;
            }
        }
        Ok(m)
    }

    pub fn check_jacobi(&self) -> bool {
        self.jacobi_defect().is_none()
    }

    /// First basis triple violating Jacobi, with the defect vector.
    pub fn jacobi_defect(&self) -> Option<(usize, usize, usize, Vec<MultiPoly>)> {
        for i in 0..self.dim {
            for j in i + 1..self.dim {
                for k in j + 1..self.dim {
                    let mut defect = vec![MultiPoly::zero(&self.ctx); self.dim];
                    for (a, b, c) in [(i, j, k), (j, k, i), (k, i, j)] {
                        let inner = self.bracket_basis(b, c);
                        let nested = self
                            .bracket(&basis_vector(&self.ctx, self.dim, a), &inner)
                            .expect("basis vectors share the algebra context");
                        for (idx, d) in defect.iter_mut().enumerate() {
                            *d = &*d + &nested[idx];
                        }
                    }
                    if defect.iter().any(|p| !p.is_zero()) {
                        return Some((i, j, k, defect));
                    }
                }
            }
        }
        None
    }

    /// `M [e_i, e_j] = [M e_i, e_j] + [e_i, M e_j]` for all basis pairs,
    /// as polynomial identities (the matrix may carry generic symbols).
    pub fn is_derivation(&self, m: &PolyMatrix) -> Result<bool> {
        Ok(self.derivation_defect(m)?.is_none())
    }

    pub fn derivation_defect(
        &self,
        m: &PolyMatrix,
    ) -> Result<Option<(usize, usize, Vec<MultiPoly>)>> {
        if m.rows() != self.dim || m.cols() != self.dim {
            return Err(Error::Dimension(format!(
                "{}x{} matrix against a {}-dimensional algebra",
                m.rows(),
                m.cols(),
                self.dim
            )));
        }
        let ctx = m.context().clone();
        if !ctx.contains_all(&self.ctx) {
            return Err(crate::symbols::context_mismatch(&ctx, &self.ctx));
        }
        for i in 0..self.dim {
            for j in i + 1..self.dim {
                let lhs = m.apply(&lift_vector(&self.bracket_basis(i, j), &ctx)?)?;
                let rhs1 = self.bracket(&m.column(i), &basis_vector(&ctx, self.dim, j))?;
                let rhs2 = self.bracket(&basis_vector(&ctx, self.dim, i), &m.column(j))?;
                let defect: Vec<MultiPoly> = lhs
                    .iter()
                    .zip(rhs1.iter().zip(&rhs2))
                    .map(|(l, (r1, r2))| &(l - r1) - r2)
                    .collect();
                if defect.iter().any(|p| !p.is_zero()) {
                    return Ok(Some((i, j, defect)));
                }
            }
        }
        Ok(None)
    }

    fn require_constant(&self) -> Result<()> {
        for value in self.brackets.values() {
            for coeff in value {
                if coeff.as_constant().is_none() {
                    return Err(Error::RequiresInstantiation(coeff.to_string()));
                }
            }
        }
        Ok(())
    }

    fn constant_bracket_tensor(&self) -> Result<BTreeMap<(usize, usize), Vec<Rational>>> {
        self.require_constant()?;
        Ok(self
            .brackets
            .iter()
            .map(|(&k, v)| (k, v.iter().map(|c| c.as_constant().unwrap()).collect()))
            .collect())
    }

    fn bracket_rational(
        tensor: &BTreeMap<(usize, usize), Vec<Rational>>,
        dim: usize,
        a: &[Rational],
        b: &[Rational],
    ) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); dim];
        for (&(i, j), value) in tensor {
            let factor = &(&a[i] * &b[j]) - &(&a[j] * &b[i]);
            if factor.is_zero() {
                continue;
            }
            for (k, c) in value.iter().enumerate() {
                out[k] = &out[k] + &(&factor * c);
            }
        }
        out
    }

    /// Dimensions of the lower central series until it stabilizes; needs
    /// all structure constants instantiated.
    pub fn lower_central_series(&self) -> Result<Vec<usize>> {
        let tensor = self.constant_bracket_tensor()?;
        let basis_full: Vec<Vec<Rational>> = (0..self.dim)
            .map(|i| rational_basis_vector(self.dim, i))
            .collect();
        let mut dims = vec![self.dim];
        let mut current = basis_full.clone();
        loop {
            let mut spanning = Vec::new();
            for e in &basis_full {
                for v in &current {
                    let w = Self::bracket_rational(&tensor, self.dim, e, v);
                    if w.iter().any(|c| !c.is_zero()) {
                        spanning.push(w);
                    }
                }
            }
            let next = linalg::span_basis(&spanning);
            let d = next.len();
            if d == *dims.last().unwrap() {
                break; // stabilized without reaching zero
            }
            dims.push(d);
            if d == 0 {
                break;
            }
            current = next;
        }
        Ok(dims)
    }

    /// Dimensions of the derived series until it stabilizes.
    pub fn derived_series(&self) -> Result<Vec<usize>> {
        let tensor = self.constant_bracket_tensor()?;
        let mut dims = vec![self.dim];
        let mut current: Vec<Vec<Rational>> = (0..self.dim)
            .map(|i| rational_basis_vector(self.dim, i))
            .collect();
        loop {
            let mut spanning = Vec::new();
            for (a, u) in current.iter().enumerate() {
                for v in current.iter().skip(a + 1) {
                    let w = Self::bracket_rational(&tensor, self.dim, u, v);
                    if w.iter().any(|c| !c.is_zero()) {
                        spanning.push(w);
                    }
                }
            }
            let next = linalg::span_basis(&spanning);
            let d = next.len();
            if d == *dims.last().unwrap() {
                break;
            }
            dims.push(d);
            if d == 0 {
                break;
            }
            current = next;
        }
        Ok(dims)
    }

    /// `Some(c)` when nilpotent of class `c`, `None` otherwise.
    pub fn nilpotency_class(&self) -> Result<Option<usize>> {
        let dims = self.lower_central_series()?;
        if *dims.last().unwrap() == 0 {
            Ok(Some(dims.len() - 1))
        } else {
            Ok(None)
        }
    }

    pub fn is_solvable(&self) -> Result<bool> {
        Ok(*self.derived_series()?.last().unwrap() == 0)
    }

    /// Substitutes rationals for all parameters.
    pub fn instantiate(&self, assignment: &BTreeMap<String, Rational>) -> Result<LieAlgebra> {
        if self.ctx.is_empty() {
            return Ok(self.clone());
        }
        for sym in self.ctx.symbols() {
            if !assignment.contains_key(sym.as_str()) {
                return Err(Error::UnboundSymbol(sym.as_str().to_owned()));
            }
        }
        let empty = SymbolContext::empty();
        let brackets = self
            .brackets
            .iter()
            .map(|(&k, v)| {
                let coeffs = v
                    .iter()
                    .map(|c| c.eval_partial(assignment, &empty))
                    .collect::<Result<Vec<_>>>()?;
                Ok((k, coeffs))
            })
            .collect::<Result<BTreeMap<_, _>>>()?;
        LieAlgebra::new_unchecked(&format!("{}@", self.name), self.dim, &empty, brackets)
    }

    /// Basis of the full derivation algebra; constants must be rational.
    pub fn derivation_basis(&self) -> Result<Vec<PolyMatrix>> {
        self.derivation_basis_filtered(false)
    }

    /// Basis of the strictly-lower-triangular derivations, all nilpotent.
    pub fn strictly_lower_derivation_basis(&self) -> Result<Vec<PolyMatrix>> {
        self.derivation_basis_filtered(true)
    }

    fn derivation_basis_filtered(&self, strictly_lower: bool) -> Result<Vec<PolyMatrix>> {
        let tensor = self.constant_bracket_tensor()?;
        let n = self.dim;
        // unknowns m_{kl}, flattened k*n + l
        let mut rows: Vec<Vec<Rational>> = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                for k in 0..n {
                    let mut row = vec![Rational::zero(); n * n];
                    // M [e_i,e_j]: sum_l c_{ij}^l m_{kl}
                    if let Some(c) = tensor.get(&(i, j)) {
                        for (l, cv) in c.iter().enumerate() {
                            row[k * n + l] = &row[k * n + l] + cv;
                        }
                    }
                    // -[M e_i, e_j]: -sum_a m_{ai} c_{aj}^k
                    for a in 0..n {
                        let c = structure_coeff_rational(&tensor, a, j, k);
                        if !c.is_zero() {
                            row[a * n + i] = &row[a * n + i] - &c;
                        }
                    }
                    // -[e_i, M e_j]: -sum_b m_{bj} c_{ib}^k
                    for b in 0..n {
                        let c = structure_coeff_rational(&tensor, i, b, k);
                        if !c.is_zero() {
                            row[b * n + j] = &row[b * n + j] - &c;
                        }
                    }
                    rows.push(row);
                }
            }
        }
        if strictly_lower {
            for k in 0..n {
                for l in k..n {
                    let mut row = vec![Rational::zero(); n * n];
                    row[k * n + l] = Rational::one();
                    rows.push(row);
                }
            }
        }
        let basis = linalg::nullspace(&rows);
        let empty = SymbolContext::empty();
        basis
            .into_iter()
            .map(|flat| {
                let entries = flat
                    .into_iter()
                    .map(|c| MultiPoly::constant(&empty, c))
                    .collect();
                PolyMatrix::new(n, n, entries)
            })
            .collect()
    }
}

fn structure_coeff_rational(
    tensor: &BTreeMap<(usize, usize), Vec<Rational>>,
    i: usize,
    j: usize,
    k: usize,
) -> Rational {
    if i == j {
        return Rational::zero();
    }
    let (key, flip) = if i < j {
        ((i, j), false)
    } else {
        ((j, i), true)
    };
    match tensor.get(&key) {
        None => Rational::zero(),
        Some(v) => {
            if flip {
                -v[k].clone()
            } else {
                v[k].clone()
            }
        }
    }
}

/// e_i as a polynomial vector in the given context.
pub fn basis_vector(ctx: &Context, dim: usize, i: usize) -> GenericVector {
    (0..dim)
        .map(|k| {
            if k == i {
                MultiPoly::one(ctx)
            } else {
                MultiPoly::zero(ctx)
            }
        })
        .collect()
}

fn rational_basis_vector(dim: usize, i: usize) -> Vec<Rational> {
    (0..dim)
        .map(|k| {
            if k == i {
                Rational::one()
            } else {
                Rational::zero()
            }
        })
        .collect()
}

/// Extends `base` with fresh coordinates `prefix1..prefixn` and returns the
/// extended context together with the generic coordinate vector.
pub fn generic_vector(
    base: &Context,
    prefix: &str,
    dim: usize,
) -> Result<(Context, GenericVector)> {
    let names = coordinate_names(prefix, dim, base);
    let ctx = SymbolContext::extend(base, &names)?;
    let vec = names
        .iter()
        .map(|n| MultiPoly::var(&ctx, n))
        .collect::<Result<Vec<_>>>()?;
    Ok((ctx, vec))
}

pub fn lift_vector(v: &[MultiPoly], target: &Context) -> Result<GenericVector> {
    v.iter().map(|p| p.lift_to(target)).collect()
}

pub fn format_vector(v: &[MultiPoly]) -> String {
    let parts: Vec<String> = v.iter().map(|p| p.to_string()).collect();
    format!("({})", parts.join(", "))
}

fn common_context(a: &[MultiPoly], b: &[MultiPoly]) -> Result<Context> {
    let ctx = a
        .first()
        .or_else(|| b.first())
        .map(|p| p.context().clone())
        .ok_or_else(|| Error::Dimension("empty vector".into()))?;
    for p in a.iter().chain(b) {
        if **p.context() != *ctx {
            return Err(crate::symbols::context_mismatch(&ctx, p.context()));
        }
    }
    Ok(ctx)
}

impl fmt::Display for LieAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (dim {})", self.name, self.dim)?;
        for (&(i, j), value) in &self.brackets {
            if value.iter().all(MultiPoly::is_zero) {
                continue;
            }
            write!(f, "; [e{},e{}] = {}", i + 1, j + 1, format_vector(value))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_poly;
    use crate::rational::{rat, rat_int};

    fn heisenberg3() -> LieAlgebra {
        let ctx = SymbolContext::empty();
        let mut brackets = BTreeMap::new();
        brackets.insert((0, 1), basis_vector(&ctx, 3, 2));
        LieAlgebra::new("h3", 3, &ctx, brackets).unwrap()
    }

    fn n4() -> LieAlgebra {
        let ctx = SymbolContext::empty();
        let mut brackets = BTreeMap::new();
        brackets.insert((0, 1), basis_vector(&ctx, 4, 2));
        brackets.insert((0, 2), basis_vector(&ctx, 4, 3));
        LieAlgebra::new("n4", 4, &ctx, brackets).unwrap()
    }

    fn r3_prime_0() -> LieAlgebra {
        // [e1,e2] = e3, [e1,e3] = -e2
        let ctx = SymbolContext::empty();
        let mut brackets = BTreeMap::new();
        brackets.insert((0, 1), basis_vector(&ctx, 3, 2));
        let mut m_e2 = basis_vector(&ctx, 3, 1);
        m_e2[1] = -&m_e2[1];
        brackets.insert((0, 2), m_e2);
        LieAlgebra::new("r3'_0", 3, &ctx, brackets).unwrap()
    }

    #[test]
    fn heisenberg_generic_bracket() {
        let h = heisenberg3();
        let (ctx1, x) = generic_vector(h.context(), "x", 3).unwrap();
        let (ctx, y_raw) = generic_vector(&ctx1, "y", 3).unwrap();
        let x = lift_vector(&x, &ctx).unwrap();
        let out = h.bracket(&x, &y_raw).unwrap();
        assert!(out[0].is_zero());
        assert!(out[1].is_zero());
        assert_eq!(out[2], parse_poly("x1*y2 - x2*y1", &ctx).unwrap());
    }

    #[test]
    fn bracket_of_vector_with_itself_vanishes() {
        let h = heisenberg3();
        let (ctx, x) = generic_vector(h.context(), "x", 3).unwrap();
        let out = h.bracket(&x, &x).unwrap();
        assert!(out.iter().all(MultiPoly::is_zero));
        let _ = ctx;
    }

    #[test]
    fn r3_prime_basis_bracket() {
        let g = r3_prime_0();
        let ctx = g.context().clone();
        let e1 = basis_vector(&ctx, 3, 0);
        let e3 = basis_vector(&ctx, 3, 2);
        let out = g.bracket(&e1, &e3).unwrap();
        assert_eq!(out[1], MultiPoly::constant(&ctx, rat_int(-1)));
        assert!(out[0].is_zero() && out[2].is_zero());
    }

    #[test]
    fn jacobi_rejects_bad_constants() {
        // [e1,e2]=e3, [e1,e3]=e1, [e2,e3]=e2 has cyclic sum 2*e3
        let ctx = SymbolContext::empty();
        let mut brackets = BTreeMap::new();
        brackets.insert((0, 1), basis_vector(&ctx, 3, 2));
        brackets.insert((0, 2), basis_vector(&ctx, 3, 0));
        brackets.insert((1, 2), basis_vector(&ctx, 3, 1));
        assert!(LieAlgebra::new("bad", 3, &ctx, brackets.clone()).is_err());
        let alg = LieAlgebra::new_unchecked("bad", 3, &ctx, brackets).unwrap();
        assert!(!alg.check_jacobi());
        let (i, j, k, defect) = alg.jacobi_defect().unwrap();
        assert_eq!((i, j, k), (0, 1, 2));
        assert_eq!(defect[2], MultiPoly::constant(&ctx, rat_int(2)));
    }

    #[test]
    fn parametric_jacobi_holds_symbolically() {
        // [e1,e2] = lambda e2, [e1,e3] = (1-lambda) e3, [e1,e4] = e4, [e2,e3] = e4
        let ctx = SymbolContext::new(&["lambda"]).unwrap();
        let lambda = MultiPoly::var(&ctx, "lambda").unwrap();
        let mut brackets = BTreeMap::new();
        let mut b12 = vec![MultiPoly::zero(&ctx); 4];
        b12[1] = lambda.clone();
        brackets.insert((0, 1), b12);
        let mut b13 = vec![MultiPoly::zero(&ctx); 4];
        b13[2] = &MultiPoly::one(&ctx) - &lambda;
        brackets.insert((0, 2), b13);
        brackets.insert((0, 3), basis_vector(&ctx, 4, 3));
        brackets.insert((1, 2), basis_vector(&ctx, 4, 3));
        assert!(LieAlgebra::new("d4_lambda", 4, &ctx, brackets).is_ok());
    }

    #[test]
    fn ad_matrix_heisenberg() {
        let h = heisenberg3();
        let (ctx, x) = generic_vector(h.context(), "x", 3).unwrap();
        let ad = h.ad_matrix(&x).unwrap();
        assert_eq!(*ad.at(2, 0), parse_poly("-x2", &ctx).unwrap());
        assert_eq!(*ad.at(2, 1), parse_poly("x1", &ctx).unwrap());
        for i in 0..2 {
            for j in 0..3 {
                assert!(ad.at(i, j).is_zero());
            }
        }
        assert!(ad.at(2, 2).is_zero());
    }

    #[test]
    fn ad_matrix_abelian_is_zero() {
        let a = LieAlgebra::abelian("R4", 4);
        let (_, x) = generic_vector(a.context(), "x", 4).unwrap();
        assert!(a.ad_matrix(&x).unwrap().is_zero());
    }

    #[test]
    fn ad_matrix_n4_rows() {
        let g = n4();
        let (ctx, y) = generic_vector(g.context(), "y", 4).unwrap();
        let ad = g.ad_matrix(&y).unwrap();
        assert_eq!(*ad.at(2, 0), parse_poly("-y2", &ctx).unwrap());
        assert_eq!(*ad.at(2, 1), parse_poly("y1", &ctx).unwrap());
        assert_eq!(*ad.at(3, 0), parse_poly("-y3", &ctx).unwrap());
        assert_eq!(*ad.at(3, 2), parse_poly("y1", &ctx).unwrap());
        assert!(ad.at(3, 1).is_zero());
    }

    #[test]
    fn series_examples() {
        assert_eq!(heisenberg3().lower_central_series().unwrap(), vec![3, 1, 0]);
        assert_eq!(heisenberg3().nilpotency_class().unwrap(), Some(2));
        assert_eq!(n4().lower_central_series().unwrap(), vec![4, 2, 1, 0]);
        assert_eq!(n4().nilpotency_class().unwrap(), Some(3));
        let ab = LieAlgebra::abelian("R4", 4);
        assert_eq!(ab.lower_central_series().unwrap(), vec![4, 0]);
        assert_eq!(ab.nilpotency_class().unwrap(), Some(1));
        assert_eq!(ab.derived_series().unwrap(), vec![4, 0]);
        // solvable but not nilpotent
        let g = r3_prime_0();
        assert_eq!(g.derived_series().unwrap(), vec![3, 2, 0]);
        assert!(g.is_solvable().unwrap());
        assert_eq!(g.nilpotency_class().unwrap(), None);
        assert_eq!(heisenberg3().derived_series().unwrap(), vec![3, 1, 0]);
    }

    #[test]
    fn series_require_instantiated_parameters() {
        let ctx = SymbolContext::new(&["lambda"]).unwrap();
        let lambda = MultiPoly::var(&ctx, "lambda").unwrap();
        let mut brackets = BTreeMap::new();
        brackets.insert(
            (0, 1),
            vec![MultiPoly::zero(&ctx), lambda.clone(), MultiPoly::zero(&ctx)],
        );
        let g = LieAlgebra::new("r", 3, &ctx, brackets).unwrap();
        assert!(matches!(
            g.lower_central_series(),
            Err(Error::RequiresInstantiation(_))
        ));
        let mut asn = BTreeMap::new();
        asn.insert("lambda".to_owned(), rat_int(0));
        let inst = g.instantiate(&asn).unwrap();
        assert_eq!(inst.lower_central_series().unwrap(), vec![3, 0]);
    }

    #[test]
    fn identity_is_not_a_derivation_of_h3() {
        let h = heisenberg3();
        let id = PolyMatrix::identity(h.context(), 3);
        assert!(!h.is_derivation(&id).unwrap());
        let (_, defect) = match h.derivation_defect(&id).unwrap() {
            Some((i, j, d)) => ((i, j), d),
            None => panic!("expected defect"),
        };
        // I[f1,f2] = f3 but [If1,f2] + [f1,If2] = 2 f3
        assert_eq!(defect[2], MultiPoly::constant(h.context(), rat_int(-1)));
    }

    #[test]
    fn generic_n4_derivation_shape() {
        let g = n4();
        let ctx = SymbolContext::new(&["a", "b", "c", "d", "e", "f", "g"]).unwrap();
        let entries = [
            ["a", "0", "0", "0"],
            ["b", "e", "0", "0"],
            ["c", "f", "a + e", "0"],
            ["d", "g", "f", "2*a + e"],
        ];
        let m = PolyMatrix::new(
            4,
            4,
            entries
                .iter()
                .flat_map(|r| r.iter().map(|s| parse_poly(s, &ctx).unwrap()))
                .collect(),
        )
        .unwrap();
        assert!(g.is_derivation(&m).unwrap());
        assert_eq!(g.derivation_basis().unwrap().len(), 7);
    }

    #[test]
    fn ad_is_always_a_derivation() {
        for alg in [heisenberg3(), n4(), r3_prime_0()] {
            let (_, x) = generic_vector(alg.context(), "x", alg.dim()).unwrap();
            let ad = alg.ad_matrix(&x).unwrap();
            assert!(alg.is_derivation(&ad).unwrap());
        }
    }

    #[test]
    fn strictly_lower_derivations_are_nilpotent() {
        for alg in [heisenberg3(), n4()] {
            for d in alg.strictly_lower_derivation_basis().unwrap() {
                assert!(d.is_nilpotent().unwrap());
                assert!(alg.is_derivation(&d).unwrap());
            }
        }
        assert_eq!(
            heisenberg3()
                .strictly_lower_derivation_basis()
                .unwrap()
                .len(),
            3
        );
        assert_eq!(n4().strictly_lower_derivation_basis().unwrap().len(), 5);
    }

    #[test]
    fn instantiation_evaluates_constants() {
        let ctx = SymbolContext::new(&["mu"]).unwrap();
        let mu = MultiPoly::var(&ctx, "mu").unwrap();
        let mut brackets = BTreeMap::new();
        brackets.insert(
            (0, 1),
            vec![
                MultiPoly::zero(&ctx),
                mu.scale(&rat(2, 1)),
                MultiPoly::zero(&ctx),
            ],
        );
        let g = LieAlgebra::new("g", 3, &ctx, brackets).unwrap();
        let mut asn = BTreeMap::new();
        asn.insert("mu".to_owned(), rat(1, 2));
        let inst = g.instantiate(&asn).unwrap();
        let v = inst.bracket_basis(0, 1);
        assert_eq!(v[1].as_constant().unwrap(), rat_int(1));
    }
}
