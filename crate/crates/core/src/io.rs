//! JSON file formats: algebras, embeddings, product structures, matrices.
//!
//! Polynomial entries are strings in the parser grammar; matrices are
//! row-major nested arrays of such strings; basis indices are 1-based.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::catalog;
use crate::error::{Error, Result};
use crate::lie::LieAlgebra;
use crate::matrix::PolyMatrix;
use crate::parse::parse_poly;
use crate::plas::{PlasStructure, ProductTensor};
use crate::poly::MultiPoly;
use crate::symbols::{Context, SymbolContext};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CoeffEntry {
    pub k: usize,
    pub coeff: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BracketEntry {
    pub i: usize,
    pub j: usize,
    pub value: Vec<CoeffEntry>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AlgebraFile {
    pub name: String,
    pub dim: usize,
    #[serde(default)]
    pub params: Vec<String>,
    #[serde(default)]
    pub brackets: Vec<BracketEntry>,
}

/// Inline algebra object or the name of a bundled one.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AlgebraRef {
    Name(String),
    Inline(AlgebraFile),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EmbeddingFile {
    pub g: AlgebraRef,
    pub h: AlgebraRef,
    pub t: Vec<Vec<String>>,
    #[serde(rename = "D")]
    pub d: Vec<Vec<Vec<String>>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PlasFile {
    pub h: AlgebraRef,
    /// Either an algebra reference or the literal string "induced", in
    /// which case the g-bracket is recovered from the product and h.
    pub g: AlgebraRef,
    pub product: Vec<BracketEntry>,
}

pub fn algebra_from_file(file: &AlgebraFile, check_jacobi: bool) -> Result<LieAlgebra> {
    let ctx = SymbolContext::new(&file.params)?;
    let mut brackets = BTreeMap::new();
    for entry in &file.brackets {
        if entry.i < 1 || entry.j < 1 {
            return Err(Error::InvalidInput("bracket indices are 1-based".into()));
        }
        if entry.i >= entry.j || entry.j > file.dim {
            return Err(Error::InvalidInput(format!(
                "bracket indices ({},{}) must satisfy 1 <= i < j <= dim",
                entry.i, entry.j
            )));
        }
        let mut value = vec![MultiPoly::zero(&ctx); file.dim];
        for c in &entry.value {
            if c.k < 1 || c.k > file.dim {
                return Err(Error::InvalidInput(format!(
                    "component index {} out of range",
                    c.k
                )));
            }
            value[c.k - 1] = &value[c.k - 1] + &parse_poly(&c.coeff, &ctx)?;
        }
        if brackets.insert((entry.i - 1, entry.j - 1), value).is_some() {
            return Err(Error::InvalidInput(format!(
                "duplicate bracket entry ({},{})",
                entry.i, entry.j
            )));
        }
    }
    if check_jacobi {
        LieAlgebra::new(&file.name, file.dim, &ctx, brackets)
    } else {
        LieAlgebra::new_unchecked(&file.name, file.dim, &ctx, brackets)
    }
}

pub fn algebra_to_file(alg: &LieAlgebra) -> AlgebraFile {
    let brackets = alg
        .bracket_entries()
        .iter()
        .filter(|(_, v)| v.iter().any(|p| !p.is_zero()))
        .map(|(&(i, j), v)| BracketEntry {
            i: i + 1,
            j: j + 1,
            value: v
                .iter()
                .enumerate()
                .filter(|(_, p)| !p.is_zero())
                .map(|(k, p)| CoeffEntry {
                    k: k + 1,
                    coeff: p.to_string(),
                })
                .collect(),
        })
        .collect();
    AlgebraFile {
        name: alg.name().to_owned(),
        dim: alg.dim(),
        params: alg.context().names(),
        brackets,
    }
}

pub fn resolve_algebra(r: &AlgebraRef, check_jacobi: bool) -> Result<LieAlgebra> {
    match r {
        AlgebraRef::Name(name) => catalog::algebra_by_name(name),
        AlgebraRef::Inline(file) => algebra_from_file(file, check_jacobi),
    }
}

pub fn matrix_from_rows(rows: &[Vec<String>], ctx: &Context) -> Result<PolyMatrix> {
    let r = rows.len();
    let c = rows.first().map(|x| x.len()).unwrap_or(0);
    let mut entries = Vec::with_capacity(r * c);
    for row in rows {
        if row.len() != c {
            return Err(Error::InvalidInput("ragged matrix rows".into()));
        }
        for s in row {
            entries.push(parse_poly(s, ctx)?);
        }
    }
    PolyMatrix::new(r, c, entries)
}

pub fn matrix_to_rows(m: &PolyMatrix) -> Vec<Vec<String>> {
    (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| m.at(i, j).to_string()).collect())
        .collect()
}

pub fn embedding_from_file(file: &EmbeddingFile) -> Result<crate::aff::Embedding> {
    let g = resolve_algebra(&file.g, true)?;
    let h = resolve_algebra(&file.h, true)?;
    let ctx = SymbolContext::union(g.context(), h.context());
    let t = matrix_from_rows(&file.t, &ctx)?;
    let d = file
        .d
        .iter()
        .map(|m| matrix_from_rows(m, &ctx))
        .collect::<Result<Vec<_>>>()?;
    crate::aff::Embedding::new(g, h, t, d)
}

pub fn embedding_to_file(e: &crate::aff::Embedding) -> EmbeddingFile {
    EmbeddingFile {
        g: AlgebraRef::Inline(algebra_to_file(e.source())),
        h: AlgebraRef::Inline(algebra_to_file(e.target())),
        t: matrix_to_rows(e.t()),
        d: e.d_images().iter().map(matrix_to_rows).collect(),
    }
}

fn product_from_entries(
    entries: &[BracketEntry],
    dim: usize,
    ctx: &Context,
) -> Result<ProductTensor> {
    let mut table = vec![vec![MultiPoly::zero(ctx); dim]; dim * dim];
    for e in entries {
        if e.i < 1 || e.i > dim || e.j < 1 || e.j > dim {
            return Err(Error::InvalidInput(format!(
                "product indices ({},{}) out of range",
                e.i, e.j
            )));
        }
        for c in &e.value {
            if c.k < 1 || c.k > dim {
                return Err(Error::InvalidInput(format!(
                    "component index {} out of range",
                    c.k
                )));
            }
            let slot = &mut table[(e.i - 1) * dim + (e.j - 1)][c.k - 1];
            *slot = &*slot + &parse_poly(&c.coeff, ctx)?;
        }
    }
    ProductTensor::new(dim, ctx, table)
}

pub fn plas_from_file(file: &PlasFile) -> Result<PlasStructure> {
    let h = resolve_algebra(&file.h, true)?;
    let dim = h.dim();
    let induced = matches!(&file.g, AlgebraRef::Name(n) if n == "induced");
    let g_ctx = if induced {
        h.context().clone()
    } else {
        resolve_algebra(&file.g, true)?.context().clone()
    };
    let ctx = SymbolContext::union(&g_ctx, h.context());
    let product = product_from_entries(&file.product, dim, &ctx)?;
    let g = if induced {
        // recover the g-bracket from condition (1):
        // [e_i,e_j]_g = e_i.e_j - e_j.e_i + [e_i,e_j]_h
        let mut brackets = BTreeMap::new();
        for i in 0..dim {
            for j in i + 1..dim {
                let hb = crate::lie::lift_vector(&h.bracket_basis(i, j), &ctx)?;
                let value: Vec<MultiPoly> = (0..dim)
                    .map(|k| &(&product.coeff(i, j)[k] - &product.coeff(j, i)[k]) + &hb[k])
                    .collect();
                if value.iter().any(|p| !p.is_zero()) {
                    brackets.insert((i, j), value);
                }
            }
        }
        LieAlgebra::new("induced", dim, &ctx, brackets)?
    } else {
        resolve_algebra(&file.g, true)?
    };
    PlasStructure::new(g, h, product)
}

pub fn plas_to_file(p: &PlasStructure) -> PlasFile {
    let dim = p.dim();
    let mut entries = Vec::new();
    for i in 0..dim {
        for j in 0..dim {
            let v = p.product.coeff(i, j);
            if v.iter().all(|c| c.is_zero()) {
                continue;
            }
            entries.push(BracketEntry {
                i: i + 1,
                j: j + 1,
                value: v
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(k, c)| CoeffEntry {
                        k: k + 1,
                        coeff: c.to_string(),
                    })
                    .collect(),
            });
        }
    }
    PlasFile {
        h: AlgebraRef::Inline(algebra_to_file(&p.h)),
        g: AlgebraRef::Inline(algebra_to_file(&p.g)),
        product: entries,
    }
}

pub fn read_json<T: serde::de::DeserializeOwned>(path: &std::path::Path) -> Result<T> {
    let text = std::fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn algebra_file_round_trip() {
        let json = r#"{
            "name": "h3", "dim": 3, "params": [],
            "brackets": [{"i": 1, "j": 2, "value": [{"k": 3, "coeff": "1"}]}]
        }"#;
        let file: AlgebraFile = serde_json::from_str(json).unwrap();
        let alg = algebra_from_file(&file, true).unwrap();
        assert_eq!(alg.dim(), 3);
        let back = algebra_to_file(&alg);
        let reparsed = algebra_from_file(&back, true).unwrap();
        assert_eq!(alg, reparsed);
    }

    #[test]
    fn jacobi_violation_rejected_when_checked() {
        let json = r#"{
            "name": "bad", "dim": 3,
            "brackets": [
                {"i": 1, "j": 2, "value": [{"k": 3, "coeff": "1"}]},
                {"i": 1, "j": 3, "value": [{"k": 1, "coeff": "1"}]},
                {"i": 2, "j": 3, "value": [{"k": 2, "coeff": "1"}]}
            ]
        }"#;
        let file: AlgebraFile = serde_json::from_str(json).unwrap();
        assert!(algebra_from_file(&file, true).is_err());
        let unchecked = algebra_from_file(&file, false).unwrap();
        assert!(!unchecked.check_jacobi());
    }

    #[test]
    fn bad_indices_rejected() {
        let json = r#"{"name": "x", "dim": 2, "brackets": [{"i": 2, "j": 1, "value": []}]}"#;
        let file: AlgebraFile = serde_json::from_str(json).unwrap();
        assert!(algebra_from_file(&file, true).is_err());
    }
}
