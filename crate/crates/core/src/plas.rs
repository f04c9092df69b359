//! Post-Lie algebra structures (PLAS) on a pair of Lie algebras sharing one
//! vector space, left-symmetric (LS) structures as the abelian special case,
//! induction from affine embeddings, axiom verification, the half-adjoint
//! shift to a left-symmetric structure, and the completeness criteria.
//!
//! The product is stored as a tensor P with e_i . e_j = sum_k P[i][j][k] e_k;
//! left and right multiplication matrices both derive from it. Every
//! universally quantified criterion ("nilpotent for every y") is decided as
//! a polynomial identity in generic coordinates, which is equivalent to the
//! real quantifier for polynomial matrix powers.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::aff::{aff_bracket, AffElement, Embedding};
use crate::error::{Error, Result};
use crate::lie::{
    basis_vector, format_vector, generic_vector, lift_vector, GenericVector, LieAlgebra,
};
use crate::matrix::PolyMatrix;
use crate::poly::{Monomial, MultiPoly};
use crate::rational::{format_rational, rat, Rational};
use crate::symbols::{Context, SymbolContext};
use crate::unipoly::QPoly;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProductTensor {
    dim: usize,
    ctx: Context,
    // entries[i * dim + j] = coefficient vector of e_i . e_j
    entries: Vec<Vec<MultiPoly>>,
}

impl ProductTensor {
    pub fn new(dim: usize, ctx: &Context, entries: Vec<Vec<MultiPoly>>) -> Result<Self> {
        if entries.len() != dim * dim {
            return Err(Error::Dimension(format!(
                "product tensor needs {} coefficient vectors, got {}",
                dim * dim,
                entries.len()
            )));
        }
        for v in &entries {
            if v.len() != dim {
                return Err(Error::Dimension(
                    "product coefficient vector of wrong length".into(),
                ));
            }
            for p in v {
                if **p.context() != **ctx {
                    return Err(crate::symbols::context_mismatch(ctx, p.context()));
                }
            }
        }
        Ok(ProductTensor {
            dim,
            ctx: ctx.clone(),
            entries,
        })
    }

    pub fn zero(dim: usize, ctx: &Context) -> Self {
        ProductTensor {
            dim,
            ctx: ctx.clone(),
            entries: vec![vec![MultiPoly::zero(ctx); dim]; dim * dim],
        }
    }

    /// Builds the tensor from the left-multiplication images of the basis:
    /// P[i][j][k] = (L_{e_i})_{k j}.
    pub fn from_left_images(images: &[PolyMatrix]) -> Result<Self> {
        let dim = images.len();
        let ctx = images
            .first()
            .map(|m| m.context().clone())
            .ok_or_else(|| Error::Dimension("no left images".into()))?;
        let mut entries = Vec::with_capacity(dim * dim);
        for l in images {
            if l.rows() != dim || l.cols() != dim {
                return Err(Error::Dimension("left image of wrong shape".into()));
            }
            for j in 0..dim {
                entries.push(l.column(j));
            }
        }
        ProductTensor::new(dim, &ctx, entries)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn context(&self) -> &Context {
        &self.ctx
    }

    /// Coefficient vector of e_i . e_j (0-based).
    pub fn coeff(&self, i: usize, j: usize) -> &[MultiPoly] {
        &self.entries[i * self.dim + j]
    }

    pub fn lift_to(&self, target: &Context) -> Result<Self> {
        let entries = self
            .entries
            .iter()
            .map(|v| lift_vector(v, target))
            .collect::<Result<Vec<_>>>()?;
        Ok(ProductTensor {
            dim: self.dim,
            ctx: target.clone(),
            entries,
        })
    }

    /// Left multiplication by basis vector e_i as a matrix.
    pub fn left_image(&self, i: usize) -> PolyMatrix {
        PolyMatrix::from_fn(&self.ctx, self.dim, self.dim, |k, j| {
            self.coeff(i, j)[k].clone()
        })
    }

    /// Matrix of y -> x . y for a polynomial vector x.
    pub fn left_mult(&self, x: &GenericVector) -> Result<PolyMatrix> {
        self.mult_matrix(x, true)
    }

    /// Matrix of x -> x . y for a polynomial vector y.
    pub fn right_mult(&self, y: &GenericVector) -> Result<PolyMatrix> {
        self.mult_matrix(y, false)
    }

    fn mult_matrix(&self, v: &GenericVector, left: bool) -> Result<PolyMatrix> {
        if v.len() != self.dim {
            return Err(Error::Dimension(format!(
                "vector of length {} against a {}-dimensional product",
                v.len(),
                self.dim
            )));
        }
        let ctx = v
            .first()
            .map(|p| p.context().clone())
            .ok_or_else(|| Error::Dimension("empty vector".into()))?;
        let mut out = PolyMatrix::zero(&ctx, self.dim, self.dim);
        for k in 0..self.dim {
            for col in 0..self.dim {
                let mut acc = MultiPoly::zero(&ctx);
                for (s, vs) in v.iter().enumerate() {
                    if vs.is_zero() {
                        continue;
                    }
                    let (i, j) = if left { (s, col) } else { (col, s) };
                    let c = &self.coeff(i, j)[k];
                    if !c.is_zero() {
                        acc = &acc + &(vs * &c.lift_to(&ctx)?);
                    }
                }
                *out.at_mut(k, col) = acc;
            }
        }
        Ok(out)
    }

    /// Bilinear product of two polynomial vectors.
    pub fn apply(&self, a: &GenericVector, b: &GenericVector) -> Result<GenericVector> {
        let l = self.left_mult(a)?;
        l.apply(b)
    }
}

#[derive(Debug, Clone)]
pub struct PlasStructure {
    pub g: LieAlgebra,
    pub h: LieAlgebra,
    pub product: ProductTensor,
}

#[derive(Debug, Clone)]
pub struct LsStructure {
    pub g: LieAlgebra,
    pub product: ProductTensor,
}

#[derive(Debug, Clone)]
pub struct AxiomResult {
    pub ok: bool,
    pub witness: Option<String>,
}

/// Per-axiom verification report; the three entries are the defining
/// conditions relating the product to the two brackets.
#[derive(Debug, Clone)]
pub struct PlasReport {
    pub condition1: AxiomResult,
    pub condition2: AxiomResult,
    pub condition3: AxiomResult,
}

impl PlasReport {
    pub fn all_ok(&self) -> bool {
        self.condition1.ok && self.condition2.ok && self.condition3.ok
    }
}

impl PlasStructure {
    pub fn new(g: LieAlgebra, h: LieAlgebra, product: ProductTensor) -> Result<Self> {
        if g.dim() != h.dim() || g.dim() != product.dim() {
            return Err(Error::Dimension(format!(
                "g dim {}, h dim {}, product dim {} must agree",
                g.dim(),
                h.dim(),
                product.dim()
            )));
        }
        let ctx = SymbolContext::union(
            &SymbolContext::union(g.context(), h.context()),
            product.context(),
        );
        let product = product.lift_to(&ctx)?;
        Ok(PlasStructure { g, h, product })
    }

    pub fn dim(&self) -> usize {
        self.product.dim()
    }

    pub fn context(&self) -> &Context {
        self.product.context()
    }

    pub fn left_mult(&self, x: &GenericVector) -> Result<PolyMatrix> {
        self.product.left_mult(x)
    }

    pub fn right_mult(&self, y: &GenericVector) -> Result<PolyMatrix> {
        self.product.right_mult(y)
    }

    /// Verifies the three defining conditions on basis pairs and triples
    /// (the conditions are multilinear, so basis verification is complete).
    pub fn verify(&self) -> Result<PlasReport> {
        let n = self.dim();
        let ctx = self.context().clone();

        // (1) e_i.e_j - e_j.e_i = [e_i,e_j]_g - [e_i,e_j]_h
        let mut condition1 = AxiomResult {
            ok: true,
            witness: None,
        };
        'outer1: for i in 0..n {
            for j in i + 1..n {
                let gb = lift_vector(&self.g.bracket_basis(i, j), &ctx)?;
                let hb = lift_vector(&self.h.bracket_basis(i, j), &ctx)?;
                let pij = self.product.coeff(i, j);
                let pji = self.product.coeff(j, i);
                let defect: Vec<MultiPoly> = (0..n)
                    .map(|k| &(&(&pij[k] - &pji[k]) - &gb[k]) + &hb[k])
                    .collect();
                if defect.iter().any(|p| !p.is_zero()) {
                    condition1 = AxiomResult {
                        ok: false,
                        witness: Some(format!(
                            "pair (e{},e{}): defect {}",
                            i + 1,
                            j + 1,
                            format_vector(&defect)
                        )),
                    };
                    break 'outer1;
                }
            }
        }

        // (2) [e_i,e_j]_g . e_k = e_i.(e_j.e_k) - e_j.(e_i.e_k)
        let mut condition2 = AxiomResult {
            ok: true,
            witness: None,
        };
        'outer2: for i in 0..n {
            for j in i + 1..n {
                let gb = lift_vector(&self.g.bracket_basis(i, j), &ctx)?;
                for k in 0..n {
                    let mut lhs = vec![MultiPoly::zero(&ctx); n];
                    for (l, c) in gb.iter().enumerate() {
                        if c.is_zero() {
                            continue;
                        }
                        for (m, p) in self.product.coeff(l, k).iter().enumerate() {
                            lhs[m] = &lhs[m] + &(c * p);
                        }
                    }
                    let mut rhs = vec![MultiPoly::zero(&ctx); n];
                    for m in 0..n {
                        let pjk = &self.product.coeff(j, k)[m];
                        if !pjk.is_zero() {
                            for (r, p) in self.product.coeff(i, m).iter().enumerate() {
                                rhs[r] = &rhs[r] + &(pjk * p);
                            }
                        }
                        let pik = &self.product.coeff(i, k)[m];
                        if !pik.is_zero() {
                            for (r, p) in self.product.coeff(j, m).iter().enumerate() {
                                rhs[r] = &rhs[r] - &(pik * p);
                            }
                        }
                    }
                    let defect: Vec<MultiPoly> = lhs.iter().zip(&rhs).map(|(a, b)| a - b).collect();
                    if defect.iter().any(|p| !p.is_zero()) {
                        condition2 = AxiomResult {
                            ok: false,
                            witness: Some(format!(
                                "triple (e{},e{},e{}): defect {}",
                                i + 1,
                                j + 1,
                                k + 1,
                                format_vector(&defect)
                            )),
                        };
                        break 'outer2;
                    }
                }
            }
        }

        // (3) every L_{e_i} is a derivation of h
        let mut condition3 = AxiomResult {
            ok: true,
            witness: None,
        };
        for i in 0..n {
            let l = self.product.left_image(i);
            if let Some((a, b, defect)) = self.h.derivation_defect(&l)? {
                condition3 = AxiomResult {
                    ok: false,
                    witness: Some(format!(
                        "L_e{} fails on pair (e{},e{}): defect {}",
                        i + 1,
                        a + 1,
                        b + 1,
                        format_vector(&defect)
                    )),
                };
                break;
            }
        }

        Ok(PlasReport {
            condition1,
            condition2,
            condition3,
        })
    }

    fn h_class(&self) -> Result<Option<usize>> {
        if self.h.has_params() {
            return Err(Error::RequiresInstantiation(format!(
                "nilpotency class of parametric algebra {}",
                self.h.name()
            )));
        }
        self.h.nilpotency_class()
    }

    /// Shifted right multiplication R_y - 1/2 ad_y over generic coordinates.
    fn shifted_right(&self, prefix: &str) -> Result<PolyMatrix> {
        let n = self.dim();
        let (ctx, y) = generic_vector(self.context(), prefix, n)?;
        let r = self.right_mult(&y)?;
        let ad = self.h.ad_matrix(&y)?;
        r.sub(&ad.scale_rat(&rat(1, 2)))?.lift_to(&ctx)
    }

    /// The completeness criterion valid when h is at most 2-step nilpotent:
    /// R_y - 1/2 ad_y nilpotent for every y, decided symbolically.
    pub fn complete_two_step(&self) -> Result<bool> {
        match self.h_class()? {
            Some(c) if c <= 2 => {}
            Some(c) => {
                return Err(Error::Precondition(format!(
                    "criterion requires h abelian or 2-step nilpotent; {} is {c}-step",
                    self.h.name()
                )))
            }
            None => {
                return Err(Error::Precondition(format!(
                    "criterion requires h nilpotent; {} is not",
                    self.h.name()
                )))
            }
        }
        self.shifted_right("y")?.is_nilpotent()
    }

    /// All four criteria at once. The shifted criterion is computed even
    /// when h is more than 2-step nilpotent, with a caveat flag, because
    /// evaluating it outside its domain is exactly what exposes its limits.
    pub fn completeness_report(&self) -> Result<CompletenessReport> {
        let n = self.dim();
        let (_, x) = generic_vector(self.context(), "x", n)?;
        let (_, y) = generic_vector(self.context(), "y", n)?;
        let left_nilpotent = self.left_mult(&x)?.is_nilpotent()?;
        let right_nilpotent = self.right_mult(&y)?.is_nilpotent()?;
        let shifted = self.shifted_right("y")?;
        let shifted_nilpotent = shifted.is_nilpotent()?;
        let unit_shift_det = PolyMatrix::identity(shifted.context(), n)
            .add(&shifted)?
            .determinant()?;
        let h_class = self.h_class()?;
        let shifted_caveat = !matches!(h_class, Some(c) if c <= 2);
        Ok(CompletenessReport {
            right_nilpotent,
            left_nilpotent,
            shifted_nilpotent,
            shifted_caveat,
            unit_shift_det,
            h_class,
        })
    }

    /// Rational values of c for which R_y - c ad_y is nilpotent for every y,
    /// decided by collecting the coefficients of each y-monomial in the
    /// entries of the n-th power as univariate polynomials in c.
    pub fn shift_nilpotency_locus(&self) -> Result<ShiftLocusReport> {
        if self.h_class()?.is_none() {
            return Err(Error::Precondition(format!(
                "shift locus requires h nilpotent; {} is not",
                self.h.name()
            )));
        }
        let n = self.dim();
        let base = self.context().clone();
        let c_name = ["c", "shift_c", "c_shift"]
            .iter()
            .find(|&&cand| base.position(cand).is_none())
            .copied()
            .unwrap_or("c0");
        let ctx_c = SymbolContext::extend(&base, &[c_name])?;
        let (ctx, y) = generic_vector(&ctx_c, "y", n)?;
        let c = MultiPoly::var(&ctx, c_name)?;
        let c_idx = ctx.position(c_name).expect("just added");

        let r = self.right_mult(&y)?;
        let ad = self.h.ad_matrix(&y)?;
        let shifted = r.sub(&ad.scale(&c)?)?;
        let power = shifted.pow(n as u32)?;

        // Group per entry by the monomial in everything except c; every
        // group must vanish identically for the matrix power to be zero.
        let mut groups: BTreeMap<(usize, usize, Monomial), Vec<(usize, Rational)>> =
            BTreeMap::new();
        for i in 0..n {
            for j in 0..n {
                for (mono, coeff) in power.at(i, j).terms() {
                    let mut key = mono.clone();
                    let c_deg = key.0[c_idx] as usize;
                    key.0[c_idx] = 0;
                    groups
                        .entry((i, j, key))
                        .or_default()
                        .push((c_deg, coeff.clone()));
                }
            }
        }
        if groups.is_empty() {
            return Ok(ShiftLocusReport::all(c_name));
        }
        let polys: Vec<QPoly> = groups
            .values()
            .map(|terms| {
                let deg = terms.iter().map(|(d, _)| *d).max().unwrap_or(0);
                let mut coeffs = vec![Rational::zero(); deg + 1];
                for (d, v) in terms {
                    coeffs[*d] = &coeffs[*d] + v;
                }
                QPoly::new(coeffs)
            })
            .filter(|p| !p.is_zero())
            .collect();
        if polys.is_empty() {
            return Ok(ShiftLocusReport::all(c_name));
        }
        let mut gcd = polys[0].clone();
        for p in &polys[1..] {
            gcd = gcd.gcd(p);
            if gcd.degree() == Some(0) {
                break;
            }
        }
        let mut roots = if gcd.degree() == Some(0) {
            Vec::new()
        } else {
            gcd.rational_roots()?
        };
        roots.retain(|r| polys.iter().all(|p| p.eval(r).is_zero()));
        Ok(ShiftLocusReport::set(c_name, roots))
    }

    /// The half-adjoint shift x .~ y = x.y + 1/2 [x,y]_h, which turns a
    /// PLAS with h at most 2-step nilpotent into a left-symmetric structure
    /// on the g-bracket.
    pub fn to_left_symmetric(&self) -> Result<LsStructure> {
        match self.h_class()? {
            Some(c) if c <= 2 => {}
            Some(c) => {
                return Err(Error::Precondition(format!(
                    "half-adjoint shift requires h abelian or 2-step nilpotent; {} is {c}-step",
                    self.h.name()
                )))
            }
            None => {
                return Err(Error::Precondition(format!(
                    "half-adjoint shift requires h nilpotent; {} is not",
                    self.h.name()
                )))
            }
        }
        let n = self.dim();
        let ctx = self.context().clone();
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let hb = lift_vector(&self.h.bracket_basis(i, j), &ctx)?;
                let v: Vec<MultiPoly> = self
                    .product
                    .coeff(i, j)
                    .iter()
                    .zip(&hb)
                    .map(|(p, h)| p + &h.scale(&rat(1, 2)))
                    .collect();
                entries.push(v);
            }
        }
        let product = ProductTensor::new(n, &ctx, entries)?;
        let ls = LsStructure {
            g: self.g.clone(),
            product,
        };
        let report = ls.verify()?;
        if !report.all_ok() {
            return Err(Error::Internal(format!(
                "half-adjoint shift produced an invalid left-symmetric structure: {:?}",
                report
            )));
        }
        Ok(ls)
    }
}

impl LsStructure {
    pub fn dim(&self) -> usize {
        self.product.dim()
    }

    pub fn left_mult(&self, x: &GenericVector) -> Result<PolyMatrix> {
        self.product.left_mult(x)
    }

    pub fn right_mult(&self, y: &GenericVector) -> Result<PolyMatrix> {
        self.product.right_mult(y)
    }

    /// Left-symmetric axioms: (1) x.y - y.x = [x,y]_g and (2) the usual
    /// associator condition; equivalent to a PLAS with abelian h.
    pub fn verify(&self) -> Result<PlasReport> {
        let abelian = LieAlgebra::abelian("abelian", self.dim());
        let plas = PlasStructure::new(self.g.clone(), abelian, self.product.clone())?;
        plas.verify()
    }

    /// Completeness of the left-symmetric structure: R_y nilpotent for
    /// every y (equivalently, id + R_y invertible for every real y).
    pub fn complete(&self) -> Result<bool> {
        let (_, y) = generic_vector(self.product.context(), "y", self.dim())?;
        self.right_mult(&y)?.is_nilpotent()
    }
}

#[derive(Debug, Clone)]
pub struct CompletenessReport {
    pub right_nilpotent: bool,
    pub left_nilpotent: bool,
    pub shifted_nilpotent: bool,
    /// Set when h is not abelian/2-step, i.e. the shifted criterion was
    /// evaluated outside its domain of validity.
    pub shifted_caveat: bool,
    pub unit_shift_det: MultiPoly,
    pub h_class: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ShiftLocus {
    /// Every rational c works (forced when ad vanishes and R is nilpotent).
    All,
    Set(Vec<Rational>),
}

#[derive(Debug, Clone)]
pub struct ShiftLocusReport {
    pub locus: ShiftLocus,
    pub convention: String,
    pub note: String,
}

impl ShiftLocusReport {
    fn all(c_name: &str) -> Self {
        ShiftLocusReport {
            locus: ShiftLocus::All,
            convention: format!("S_{c_name} = R_y - {c_name}*ad_y"),
            note: sign_note(c_name),
        }
    }

    fn set(c_name: &str, roots: Vec<Rational>) -> Self {
        ShiftLocusReport {
            locus: ShiftLocus::Set(roots),
            convention: format!("S_{c_name} = R_y - {c_name}*ad_y"),
            note: sign_note(c_name),
        }
    }

    pub fn describe(&self) -> String {
        match &self.locus {
            ShiftLocus::All => "all rational values".to_owned(),
            ShiftLocus::Set(v) => {
                if v.is_empty() {
                    "empty".to_owned()
                } else {
                    format!(
                        "{{{}}}",
                        v.iter().map(format_rational).collect::<Vec<_>>().join(", ")
                    )
                }
            }
        }
    }
}

fn sign_note(c_name: &str) -> String {
    format!(
        "values are for the parameterization R_y - {c_name}*ad_y; \
         under the opposite sign convention R_y + {c_name}*ad_y, negate each value"
    )
}

/// Builds the PLAS induced by a t-bijective embedding: the left
/// multiplication is L_x = D(t^{-1} x), the g-bracket is transported
/// through t, and the result is re-verified against all three axioms.
pub fn induce_plas(e: &Embedding) -> Result<PlasStructure> {
    let morphism = e.check_morphism()?;
    if let Some(defect) = morphism.defect {
        return Err(Error::Precondition(format!(
            "embedding is not a morphism; {}",
            defect.describe()
        )));
    }
    let tb = e.t_bijective(&[])?;
    if tb.constant_verdict == Some(false) {
        return Err(Error::Precondition(
            "t is not bijective (zero determinant)".into(),
        ));
    }
    let images = e.left_mult_images()?;
    let product = ProductTensor::from_left_images(&images)?;
    let g = e.induce_bracket()?;
    let plas = PlasStructure::new(g, e.target().clone(), product)?;
    let report = plas.verify()?;
    if !report.all_ok() {
        return Err(Error::Internal(format!(
            "induced product violates the axioms: {report:?}"
        )));
    }
    Ok(plas)
}

/// Composes an embedding into aff(h) with the half-adjoint shift
/// (x, D) -> (x, D + 1/2 ad_x), landing in aff of the abelian algebra on
/// the same space.
pub fn compose_with_half_shift(e: &Embedding) -> Result<Embedding> {
    let n = e.target().dim();
    let abelian = LieAlgebra::abelian(&format!("abelian({})", e.target().name()), n);
    let mut shifted_images = Vec::with_capacity(n);
    for i in 0..e.source().dim() {
        let col = e.t().column(i);
        let ad = e.target().ad_matrix(&col)?;
        shifted_images.push(e.d_images()[i].add(&ad.scale_rat(&rat(1, 2)))?);
    }
    Embedding::new(e.source().clone(), abelian, e.t().clone(), shifted_images)
}

#[derive(Debug, Clone)]
pub struct ShiftMorphismDefect {
    pub pair: String,
    pub translation: GenericVector,
    pub derivation: PolyMatrix,
}

#[derive(Debug, Clone)]
pub struct ShiftMorphismReport {
    pub ok: bool,
    pub defect: Option<ShiftMorphismDefect>,
}

/// Checks that (x, D) -> (x, D + 1/2 ad_x) is a Lie algebra morphism from
/// aff(h) to aff of the abelian algebra, on a spanning family of pairs:
/// translation/translation, translation/derivation, derivation/derivation,
/// with the derivations ranging over a basis of Der(h). The defect of the
/// first failing pair is returned ([psi a, psi b] - psi [a, b]).
pub fn check_shift_morphism(h: &LieAlgebra) -> Result<ShiftMorphismReport> {
    let n = h.dim();
    let ctx = h.context().clone();
    if !ctx.is_empty() {
        return Err(Error::RequiresInstantiation(format!(
            "shift morphism check over parametric algebra {}",
            h.name()
        )));
    }
    let abelian = LieAlgebra::abelian("abelian", n);
    let der_basis = h.derivation_basis()?;

    let psi = |elem: &AffElement| -> Result<AffElement> {
        let ad = h.ad_matrix(&elem.translation)?;
        AffElement::new(
            elem.translation.clone(),
            elem.derivation.add(&ad.scale_rat(&rat(1, 2)))?,
        )
    };

    let mut pairs: Vec<(String, AffElement, AffElement)> = Vec::new();
    for i in 0..n {
        let ei = AffElement::new(basis_vector(&ctx, n, i), PolyMatrix::zero(&ctx, n, n))?;
        for j in i + 1..n {
            let ej = AffElement::new(basis_vector(&ctx, n, j), PolyMatrix::zero(&ctx, n, n))?;
            pairs.push((format!("((e{},0),(e{},0))", i + 1, j + 1), ei.clone(), ej));
        }
        for (k, d) in der_basis.iter().enumerate() {
            let dk = AffElement::new(vec![MultiPoly::zero(&ctx); n], d.clone())?;
            pairs.push((format!("((e{},0),(0,D{}))", i + 1, k + 1), ei.clone(), dk));
        }
    }
    for k in 0..der_basis.len() {
        for l in k + 1..der_basis.len() {
            let dk = AffElement::new(vec![MultiPoly::zero(&ctx); n], der_basis[k].clone())?;
            let dl = AffElement::new(vec![MultiPoly::zero(&ctx); n], der_basis[l].clone())?;
            pairs.push((format!("((0,D{}),(0,D{}))", k + 1, l + 1), dk, dl));
        }
    }

    for (desc, a, b) in pairs {
        let lhs = psi(&aff_bracket(h, &a, &b)?)?;
        let rhs = aff_bracket(&abelian, &psi(&a)?, &psi(&b)?)?;
        let translation: GenericVector = rhs
            .translation
            .iter()
            .zip(&lhs.translation)
            .map(|(r, l)| r - l)
            .collect();
        let derivation = rhs.derivation.sub(&lhs.derivation)?;
        if translation.iter().any(|p| !p.is_zero()) || !derivation.is_zero() {
            return Ok(ShiftMorphismReport {
                ok: false,
                defect: Some(ShiftMorphismDefect {
                    pair: desc,
                    translation,
                    derivation,
                }),
            });
        }
    }
    Ok(ShiftMorphismReport {
        ok: true,
        defect: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_poly;
    use crate::rational::rat_int;

    fn mat(ctx: &Context, rows: &[&[&str]]) -> PolyMatrix {
        PolyMatrix::new(
            rows.len(),
            rows[0].len(),
            rows.iter()
                .flat_map(|r| r.iter().map(|s| parse_poly(s, ctx).unwrap()))
                .collect(),
        )
        .unwrap()
    }

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
        let ctx = SymbolContext::empty();
        let mut brackets = BTreeMap::new();
        brackets.insert((0, 1), basis_vector(&ctx, 3, 2));
        let mut v = vec![MultiPoly::zero(&ctx); 3];
        v[1] = MultiPoly::constant(&ctx, rat_int(-1));
        brackets.insert((0, 2), v);
        LieAlgebra::new("r3'_0", 3, &ctx, brackets).unwrap()
    }

    fn rotation_embedding() -> Embedding {
        let ctx = SymbolContext::empty();
        let t = mat(
            &ctx,
            &[&["0", "1", "0"], &["0", "0", "1"], &["1", "0", "0"]],
        );
        let d1 = mat(
            &ctx,
            &[&["0", "-1", "0"], &["1", "0", "0"], &["0", "0", "0"]],
        );
        let d2 = mat(
            &ctx,
            &[&["0", "0", "0"], &["0", "0", "0"], &["0", "-1/2", "0"]],
        );
        let d3 = mat(
            &ctx,
            &[&["0", "0", "0"], &["0", "0", "0"], &["1/2", "0", "0"]],
        );
        Embedding::new(r3_prime_0(), heisenberg3(), t, vec![d1, d2, d3]).unwrap()
    }

    fn rotation_plas() -> PlasStructure {
        induce_plas(&rotation_embedding()).unwrap()
    }

    #[test]
    fn induced_left_multiplication_matches_display() {
        let p = rotation_plas();
        let (ctx, x) = generic_vector(p.context(), "x", 3).unwrap();
        let l = p.left_mult(&x).unwrap();
        let expected = mat(
            &ctx,
            &[
                &["0", "-x3", "0"],
                &["x3", "0", "0"],
                &["1/2*x2", "-1/2*x1", "0"],
            ],
        );
        assert_eq!(l, expected);
    }

    #[test]
    fn induced_right_multiplication_matches_display() {
        let p = rotation_plas();
        let (ctx, y) = generic_vector(p.context(), "y", 3).unwrap();
        let r = p.right_mult(&y).unwrap();
        let expected = mat(
            &ctx,
            &[
                &["0", "0", "-y2"],
                &["0", "0", "y1"],
                &["-1/2*y2", "1/2*y1", "0"],
            ],
        );
        assert_eq!(r, expected);
    }

    #[test]
    fn left_right_duality() {
        let p = rotation_plas();
        let base = p.context().clone();
        let (ctx1, x) = generic_vector(&base, "x", 3).unwrap();
        let (ctx, y) = generic_vector(&ctx1, "y", 3).unwrap();
        let x = lift_vector(&x, &ctx).unwrap();
        let lx = p.left_mult(&x).unwrap();
        let ry = p.right_mult(&y).unwrap();
        assert_eq!(lx.apply(&y).unwrap(), ry.apply(&x).unwrap());
    }

    #[test]
    fn trivial_embedding_gives_zero_product() {
        let ctx = SymbolContext::empty();
        let e = Embedding::new(
            LieAlgebra::abelian("a3", 3),
            LieAlgebra::abelian("b3", 3),
            PolyMatrix::identity(&ctx, 3),
            vec![PolyMatrix::zero(&ctx, 3, 3); 3],
        )
        .unwrap();
        let p = induce_plas(&e).unwrap();
        assert!(p.g.is_abelian());
        let (_, x) = generic_vector(p.context(), "x", 3).unwrap();
        assert!(p.left_mult(&x).unwrap().is_zero());
        let report = p.verify().unwrap();
        assert!(report.all_ok());
        assert!(p.complete_two_step().unwrap());
    }

    #[test]
    fn axioms_hold_for_rotation_structure() {
        let report = rotation_plas().verify().unwrap();
        assert!(report.condition1.ok);
        assert!(report.condition2.ok);
        assert!(report.condition3.ok);
    }

    #[test]
    fn sign_flip_breaks_condition_one_on_first_affected_pair() {
        let p = rotation_plas();
        // flip the (2,1) entry of L_x, i.e. P[e3][e1] -> -P[e3][e1]
        let n = p.dim();
        let ctx = p.context().clone();
        let mut entries = Vec::new();
        for i in 0..n {
            for j in 0..n {
                let mut v = p.product.coeff(i, j).to_vec();
                if i == 2 && j == 0 {
                    v = v.iter().map(|q| -q).collect();
                }
                entries.push(v);
            }
        }
        let bad = PlasStructure::new(
            p.g.clone(),
            p.h.clone(),
            ProductTensor::new(n, &ctx, entries).unwrap(),
        )
        .unwrap();
        let report = bad.verify().unwrap();
        assert!(!report.condition1.ok);
        assert!(report.condition1.witness.unwrap().contains("(e1,e3)"));
    }

    #[test]
    fn shift_to_left_symmetric_rotation_structure() {
        let p = rotation_plas();
        let ls = p.to_left_symmetric().unwrap();
        let (ctx, y) = generic_vector(p.context(), "y", 3).unwrap();
        let r = ls.right_mult(&y).unwrap();
        let expected = mat(
            &ctx,
            &[&["0", "0", "-y2"], &["0", "0", "y1"], &["0", "0", "0"]],
        );
        assert_eq!(r, expected);
        assert!(ls.complete().unwrap());
    }

    #[test]
    fn shift_is_identity_for_abelian_h() {
        let ctx = SymbolContext::empty();
        let e = Embedding::new(
            LieAlgebra::abelian("a2", 2),
            LieAlgebra::abelian("b2", 2),
            PolyMatrix::identity(&ctx, 2),
            vec![
                mat(&ctx, &[&["0", "0"], &["1", "0"]]),
                PolyMatrix::zero(&ctx, 2, 2),
            ],
        )
        .unwrap();
        let p = induce_plas(&e).unwrap();
        let ls = p.to_left_symmetric().unwrap();
        assert_eq!(ls.product, p.product);
    }

    #[test]
    fn shift_rejects_three_step_h() {
        let p = PlasStructure::new(
            LieAlgebra::abelian("g4", 4),
            n4(),
            ProductTensor::zero(4, &SymbolContext::empty()),
        )
        .unwrap();
        assert!(matches!(p.to_left_symmetric(), Err(Error::Precondition(_))));
        assert!(matches!(p.complete_two_step(), Err(Error::Precondition(_))));
    }

    #[test]
    fn rotation_structure_is_complete_two_step() {
        assert!(rotation_plas().complete_two_step().unwrap());
    }

    #[test]
    fn completeness_report_rotation() {
        let rep = rotation_plas().completeness_report().unwrap();
        assert!(!rep.right_nilpotent);
        assert!(!rep.left_nilpotent);
        assert!(rep.shifted_nilpotent);
        assert!(!rep.shifted_caveat);
        assert!(rep.unit_shift_det.is_one());
        assert_eq!(rep.h_class, Some(2));
    }

    #[test]
    fn shift_locus_of_rotation_structure_is_one_half() {
        let rep = rotation_plas().shift_nilpotency_locus().unwrap();
        assert_eq!(rep.locus, ShiftLocus::Set(vec![rat(1, 2)]));
        assert!(rep.convention.contains("R_y - c*ad_y"));
        assert!(rep.note.contains("opposite sign convention"));
    }

    #[test]
    fn shift_locus_abelian_cases() {
        // abelian h with nilpotent R: every c works
        let ctx = SymbolContext::empty();
        let e = Embedding::new(
            LieAlgebra::abelian("a2", 2),
            LieAlgebra::abelian("b2", 2),
            PolyMatrix::identity(&ctx, 2),
            vec![
                mat(&ctx, &[&["0", "0"], &["1", "0"]]),
                PolyMatrix::zero(&ctx, 2, 2),
            ],
        )
        .unwrap();
        let p = induce_plas(&e).unwrap();
        assert_eq!(p.shift_nilpotency_locus().unwrap().locus, ShiftLocus::All);

        // abelian h with non-nilpotent R: empty locus
        let idempotent = ProductTensor::new(
            2,
            &ctx,
            vec![
                basis_vector(&ctx, 2, 0),
                vec![MultiPoly::zero(&ctx); 2],
                vec![MultiPoly::zero(&ctx); 2],
                vec![MultiPoly::zero(&ctx); 2],
            ],
        )
        .unwrap();
        let p2 = PlasStructure::new(
            LieAlgebra::abelian("g2", 2),
            LieAlgebra::abelian("h2", 2),
            idempotent,
        )
        .unwrap();
        assert!(p2.verify().unwrap().all_ok());
        assert_eq!(
            p2.shift_nilpotency_locus().unwrap().locus,
            ShiftLocus::Set(Vec::new())
        );
    }

    #[test]
    fn shift_morphism_holds_for_heisenberg_and_abelian() {
        assert!(check_shift_morphism(&heisenberg3()).unwrap().ok);
        assert!(
            check_shift_morphism(&LieAlgebra::abelian("R3", 3))
                .unwrap()
                .ok
        );
    }

    #[test]
    fn shift_morphism_fails_on_three_step_with_exact_defect() {
        let g = n4();
        let report = check_shift_morphism(&g).unwrap();
        assert!(!report.ok);
        let defect = report.defect.unwrap();
        assert_eq!(defect.pair, "((e1,0),(e2,0))");
        assert!(defect.translation.iter().all(MultiPoly::is_zero));
        // -1/4 ad_{f3}: in n4, ad_{f3} has a single entry -1 at (4,1)
        let ctx = g.context().clone();
        let expected = mat(
            &ctx,
            &[
                &["0", "0", "0", "0"],
                &["0", "0", "0", "0"],
                &["0", "0", "0", "0"],
                &["1/4", "0", "0", "0"],
            ],
        );
        assert_eq!(defect.derivation, expected);
    }

    #[test]
    fn half_shift_composition_matches_tensor_shift() {
        let e = rotation_embedding();
        let p = induce_plas(&e).unwrap();
        let via_tensor = p.to_left_symmetric().unwrap();
        let shifted_embedding = compose_with_half_shift(&e).unwrap();
        let via_embedding = induce_plas(&shifted_embedding).unwrap();
        assert_eq!(via_tensor.product, via_embedding.product);
        assert_eq!(
            via_tensor.g.bracket_entries(),
            via_embedding.g.bracket_entries()
        );
    }
}
