//! The affine hull aff(h) = h ⋊ Der(h) and linear embeddings into it.
//!
//! An embedding is stored by its linear part `t` and the derivation images
//! `D(e_i)` of the source basis (linearity in the source is structural, so
//! the morphism check reduces to finitely many basis pairs).

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::lie::{format_vector, lift_vector, GenericVector, LieAlgebra};
use crate::linalg;
use crate::matrix::PolyMatrix;
use crate::poly::MultiPoly;
use crate::rational::Rational;
use crate::symbols::{Context, SymbolContext};

/// An element (x, D) of h ⋊ Der(h).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffElement {
    pub translation: GenericVector,
    pub derivation: PolyMatrix,
}

impl AffElement {
    pub fn new(translation: GenericVector, derivation: PolyMatrix) -> Result<Self> {
        let n = translation.len();
        if derivation.rows() != n || derivation.cols() != n {
            return Err(Error::Dimension(format!(
                "derivation part is {}x{}, translation part has length {n}",
                derivation.rows(),
                derivation.cols()
            )));
        }
        for p in &translation {
            if **p.context() != **derivation.context() {
                return Err(crate::symbols::context_mismatch(
                    p.context(),
                    derivation.context(),
                ));
            }
        }
        Ok(AffElement {
            translation,
            derivation,
        })
    }

    pub fn zero(ctx: &Context, dim: usize) -> Self {
        AffElement {
            translation: vec![MultiPoly::zero(ctx); dim],
            derivation: PolyMatrix::zero(ctx, dim, dim),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.translation.iter().all(MultiPoly::is_zero) && self.derivation.is_zero()
    }
}

/// `[(x,D),(x',D')] = ([x,x']_h + D x' - D' x, D D' - D' D)`.
///
/// Both inputs must have derivation parts that really are derivations of
/// `h`; violating that is reported as an error rather than silently
/// producing a non-element.
pub fn aff_bracket(h: &LieAlgebra, a: &AffElement, b: &AffElement) -> Result<AffElement> {
    for (which, elem) in [("left", a), ("right", b)] {
        if let Some((i, j, _)) = h.derivation_defect(&elem.derivation)? {
            return Err(Error::NotDerivation {
                algebra: format!("{} ({} operand)", h.name(), which),
                i: i + 1,
                j: j + 1,
            });
        }
    }
    let translation_bracket = h.bracket(&a.translation, &b.translation)?;
    let d_of_b = a.derivation.apply(&b.translation)?;
    let d_of_a = b.derivation.apply(&a.translation)?;
    let translation: GenericVector = translation_bracket
        .iter()
        .zip(d_of_b.iter().zip(&d_of_a))
        .map(|(br, (x, y))| &(br + x) - y)
        .collect();
    let derivation = a.derivation.commutator(&b.derivation)?;
    AffElement::new(translation, derivation)
}

/// The (n+1)x(n+1) block matrix [[D, x], [0, 0]] representing (x, D).
pub fn aff_to_matrix(a: &AffElement) -> PolyMatrix {
    let n = a.translation.len();
    let ctx = a.derivation.context().clone();
    PolyMatrix::from_fn(&ctx, n + 1, n + 1, |i, j| {
        if i < n && j < n {
            a.derivation.at(i, j).clone()
        } else if i < n && j == n {
            a.translation[i].clone()
        } else {
            MultiPoly::zero(&ctx)
        }
    })
}

#[derive(Debug, Clone)]
pub struct MorphismDefect {
    /// 1-based source basis pair.
    pub pair: (usize, usize),
    pub translation: GenericVector,
    pub derivation: PolyMatrix,
}

#[derive(Debug, Clone)]
pub struct MorphismReport {
    pub ok: bool,
    pub defect: Option<MorphismDefect>,
}

#[derive(Debug, Clone)]
pub struct TBijectivity {
    pub det: MultiPoly,
    /// Verdict when the determinant is parameter-free.
    pub constant_verdict: Option<bool>,
    /// Per-sample nonvanishing results when parameters occur.
    pub samples: Vec<(String, bool)>,
}

impl TBijectivity {
    pub fn bijective(&self) -> bool {
        match self.constant_verdict {
            Some(v) => v,
            None => !self.samples.is_empty() && self.samples.iter().all(|(_, ok)| *ok),
        }
    }
}

/// A linear map `x -> (t(x), D(x))` from `source` into aff(`target`).
#[derive(Debug, Clone)]
pub struct Embedding {
    source: LieAlgebra,
    target: LieAlgebra,
    t: PolyMatrix,
    d_images: Vec<PolyMatrix>,
    ctx: Context,
}

impl Embedding {
    pub fn new(
        source: LieAlgebra,
        target: LieAlgebra,
        t: PolyMatrix,
        d_images: Vec<PolyMatrix>,
    ) -> Result<Self> {
        let n = source.dim();
        if target.dim() != n {
            return Err(Error::Dimension(format!(
                "source dim {} differs from target dim {}",
                n,
                target.dim()
            )));
        }
        if t.rows() != n || t.cols() != n {
            return Err(Error::Dimension(format!(
                "t must be {n}x{n}, got {}x{}",
                t.rows(),
                t.cols()
            )));
        }
        if d_images.len() != n {
            return Err(Error::Dimension(format!(
                "expected {n} derivation images, got {}",
                d_images.len()
            )));
        }
        let ctx = SymbolContext::union(
            &SymbolContext::union(source.context(), target.context()),
            t.context(),
        );
        let ctx = d_images
            .iter()
            .fold(ctx, |acc, d| SymbolContext::union(&acc, d.context()));
        let t = t.lift_to(&ctx)?;
        let d_images = d_images
            .iter()
            .map(|d| d.lift_to(&ctx))
            .collect::<Result<Vec<_>>>()?;
        for (idx, d) in d_images.iter().enumerate() {
            if let Some((i, j, _)) = target.derivation_defect(d)? {
                return Err(Error::NotDerivation {
                    algebra: format!("{} (image of e{})", target.name(), idx + 1),
                    i: i + 1,
                    j: j + 1,
                });
            }
        }
        Ok(Embedding {
            source,
            target,
            t,
            d_images,
            ctx,
        })
    }

    pub fn source(&self) -> &LieAlgebra {
        &self.source
    }

    pub fn target(&self) -> &LieAlgebra {
        &self.target
    }

    pub fn t(&self) -> &PolyMatrix {
        &self.t
    }

    pub fn d_images(&self) -> &[PolyMatrix] {
        &self.d_images
    }

    pub fn context(&self) -> &Context {
        &self.ctx
    }

    pub fn image_of_basis(&self, i: usize) -> AffElement {
        AffElement {
            translation: self.t.column(i),
            derivation: self.d_images[i].clone(),
        }
    }

    /// Checks `phi([e_i,e_j]) = [phi(e_i), phi(e_j)]` on all basis pairs,
    /// symbolically in the parameters; reports the first defect.
    pub fn check_morphism(&self) -> Result<MorphismReport> {
        let n = self.source.dim();
        for i in 0..n {
            for j in i + 1..n {
                let coeffs = lift_vector(&self.source.bracket_basis(i, j), &self.ctx)?;
                // phi of the bracket, expanded by linearity
                let mut lhs_translation = vec![MultiPoly::zero(&self.ctx); n];
                let mut lhs_derivation = PolyMatrix::zero(&self.ctx, n, n);
                for (k, c) in coeffs.iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    let col = self.t.column(k);
                    for (r, entry) in col.iter().enumerate() {
                        lhs_translation[r] = &lhs_translation[r] + &(c * entry);
                    }
                    lhs_derivation = lhs_derivation.add(&self.d_images[k].scale(c)?)?;
                }

                let ti = self.t.column(i);
                let tj = self.t.column(j);
                let mut rhs_translation = self.target.bracket(&ti, &tj)?;
                let di_tj = self.d_images[i].apply(&tj)?;
                let dj_ti = self.d_images[j].apply(&ti)?;
                for (r, v) in rhs_translation.iter_mut().enumerate() {
                    *v = &(&*v + &di_tj[r]) - &dj_ti[r];
                }
                let rhs_derivation = self.d_images[i].commutator(&self.d_images[j])?;

                let defect_translation: GenericVector = lhs_translation
                    .iter()
                    .zip(&rhs_translation)
                    .map(|(a, b)| a - b)
                    .collect();
                let defect_derivation = lhs_derivation.sub(&rhs_derivation)?;
                if defect_translation.iter().any(|p| !p.is_zero()) || !defect_derivation.is_zero() {
                    return Ok(MorphismReport {
                        ok: false,
                        defect: Some(MorphismDefect {
                            pair: (i + 1, j + 1),
                            translation: defect_translation,
                            derivation: defect_derivation,
                        }),
                    });
                }
            }
        }
        Ok(MorphismReport {
            ok: true,
            defect: None,
        })
    }

    /// Determinant of `t`, with a verdict when it is parameter-free and
    /// per-sample nonvanishing otherwise.
    pub fn t_bijective(&self, samples: &[BTreeMap<String, Rational>]) -> Result<TBijectivity> {
        let det = self.t.determinant()?;
        match det.as_constant() {
            Some(c) => Ok(TBijectivity {
                constant_verdict: Some(!c.is_zero()),
                det,
                samples: Vec::new(),
            }),
            None => {
                let mut results = Vec::new();
                for assignment in samples {
                    let value = det.eval(assignment)?;
                    let desc = assignment
                        .iter()
                        .map(|(k, v)| format!("{k}={}", crate::rational::format_rational(v)))
                        .collect::<Vec<_>>()
                        .join(", ");
                    results.push((desc, !value.is_zero()));
                }
                Ok(TBijectivity {
                    constant_verdict: None,
                    det,
                    samples: results,
                })
            }
        }
    }

    /// Left multiplication images `L_{f_i} = D(t^{-1} f_i)`.
    pub fn left_mult_images(&self) -> Result<Vec<PolyMatrix>> {
        let n = self.source.dim();
        let t_inv = self
            .t
            .inverse()
            .map_err(|e| Error::Precondition(format!("t is not invertible: {e}")))?;
        let mut images = Vec::with_capacity(n);
        for i in 0..n {
            let mut acc = PolyMatrix::zero(&self.ctx, n, n);
            for k in 0..n {
                let c = t_inv.at(k, i);
                if !c.is_zero() {
                    acc = acc.add(&self.d_images[k].scale(c)?)?;
                }
            }
            images.push(acc);
        }
        Ok(images)
    }

    /// The Lie bracket transported onto the target coordinate space through
    /// `t`: `[x,y] = [x,y]_h + L_x y - L_y x`. The result is verified to
    /// satisfy Jacobi rather than trusted.
    pub fn induce_bracket(&self) -> Result<LieAlgebra> {
        let n = self.source.dim();
        let l_images = self.left_mult_images()?;
        let mut brackets = BTreeMap::new();
        for i in 0..n {
            for j in i + 1..n {
                let h_part = lift_vector(&self.target.bracket_basis(i, j), &self.ctx)?;
                let li_fj = l_images[i].column(j);
                let lj_fi = l_images[j].column(i);
                let value: Vec<MultiPoly> = h_part
                    .iter()
                    .zip(li_fj.iter().zip(&lj_fi))
                    .map(|(h, (a, b))| &(h + a) - b)
                    .collect();
                if value.iter().any(|p| !p.is_zero()) {
                    brackets.insert((i, j), value);
                }
            }
        }
        LieAlgebra::new(
            &format!("induced({}, {})", self.source.name(), self.target.name()),
            n,
            &self.ctx,
            brackets,
        )
    }

    /// Rank of the combined linear map `x -> (t(x), D(x))` at instantiated
    /// parameter values; full rank = injectivity of the embedding.
    pub fn combined_rank(&self, assignment: &BTreeMap<String, Rational>) -> Result<usize> {
        let n = self.source.dim();
        let empty = SymbolContext::empty();
        let mut rows: Vec<Vec<Rational>> = Vec::new();
        for r in 0..n {
            let mut row = Vec::with_capacity(n);
            for c in 0..n {
                row.push(
                    self.t
                        .at(r, c)
                        .eval_partial(assignment, &empty)?
                        .as_constant()
                        .ok_or_else(|| Error::RequiresInstantiation(self.t.at(r, c).to_string()))?,
                );
            }
            rows.push(row);
        }
        for a in 0..n {
            for b in 0..n {
                let mut row = Vec::with_capacity(n);
                for c in 0..n {
                    row.push(
                        self.d_images[c]
                            .at(a, b)
                            .eval_partial(assignment, &empty)?
                            .as_constant()
                            .ok_or_else(|| {
                                Error::RequiresInstantiation(self.d_images[c].at(a, b).to_string())
                            })?,
                    );
                }
                rows.push(row);
            }
        }
        Ok(linalg::rank(&rows))
    }
}

impl MorphismDefect {
    pub fn describe(&self) -> String {
        format!(
            "pair (e{},e{}): translation defect {}, derivation defect nonzero: {}",
            self.pair.0,
            self.pair.1,
            format_vector(&self.translation),
            !self.derivation.is_zero()
        )
    }
}
