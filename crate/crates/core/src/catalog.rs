//! Bundled catalog: every algebra and embedding of the worked tables and
//! examples, with the expected multiplication matrices and check outcomes,
//! plus the batch verifier that recomputes everything from the embeddings.
//!
//! A discrepancy between computed results and the recorded expectations is
//! reported, never silently fixed.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::aff::Embedding;
use crate::error::{Error, Result};
use crate::io::{algebra_from_file, matrix_from_rows, AlgebraFile};
use crate::lie::LieAlgebra;
use crate::matrix::PolyMatrix;
use crate::plas::{induce_plas, PlasStructure};
use crate::poly::MultiPoly;
use crate::rational::{format_rational, parse_rational, Rational};
use crate::symbols::{Context, SymbolContext};

const CATALOG_JSON: &str = include_str!("../data/catalog.json");

#[derive(Debug, Clone, Serialize, Deserialize)]
struct ParamFile {
    name: String,
    default: String,
    #[serde(default)]
    min: Option<String>,
    #[serde(default = "default_true")]
    min_inclusive: bool,
    #[serde(default)]
    max: Option<String>,
    #[serde(default = "default_true")]
    max_inclusive: bool,
    #[serde(default)]
    excluded: Vec<String>,
}

fn default_true() -> bool {
    true
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct RowFile {
    id: String,
    g: String,
    h: String,
    t: Vec<Vec<String>>,
    #[serde(rename = "D")]
    d: Vec<Vec<Vec<String>>>,
    #[serde(rename = "expected_L")]
    expected_l: Vec<Vec<String>>,
    #[serde(rename = "expected_R")]
    expected_r: Vec<Vec<String>>,
    #[serde(rename = "expected_R_nilpotent")]
    expected_r_nilpotent: bool,
    expected_complete: bool,
    #[serde(default)]
    params: Vec<ParamFile>,
    #[serde(default)]
    domain_note: String,
    provenance: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct CatalogFile {
    algebras: Vec<AlgebraFile>,
    rows: Vec<RowFile>,
}

/// Allowed range for one family parameter, with a representative default.
#[derive(Debug, Clone)]
pub struct ParamSpec {
    pub name: String,
    pub default: Rational,
    pub min: Option<(Rational, bool)>,
    pub max: Option<(Rational, bool)>,
    pub excluded: Vec<Rational>,
}

impl ParamSpec {
    pub fn in_domain(&self, v: &Rational) -> bool {
        if let Some((lo, inclusive)) = &self.min {
            if v < lo || (v == lo && !inclusive) {
                return false;
            }
        }
        if let Some((hi, inclusive)) = &self.max {
            if v > hi || (v == hi && !inclusive) {
                return false;
            }
        }
        !self.excluded.contains(v)
    }
}

#[derive(Debug, Clone)]
pub struct CatalogRow {
    pub id: String,
    pub g_name: String,
    pub h_name: String,
    pub embedding: Embedding,
    /// Left multiplication in generic y-coordinates, as recorded.
    pub expected_l: PolyMatrix,
    /// Right multiplication in generic z-coordinates, as recorded.
    pub expected_r: PolyMatrix,
    pub expected_r_nilpotent: bool,
    pub expected_complete: bool,
    pub params: Vec<ParamSpec>,
    pub domain_note: String,
    pub provenance: String,
    /// Context holding params + y + z coordinates for this row.
    pub row_ctx: Context,
}

pub struct Catalog {
    pub algebras: Vec<LieAlgebra>,
    pub rows: Vec<CatalogRow>,
}

impl Catalog {
    pub fn algebra(&self, name: &str) -> Result<&LieAlgebra> {
        self.algebras
            .iter()
            .find(|a| a.name() == name)
            .ok_or_else(|| Error::UnknownCatalogEntry(name.to_owned()))
    }

    pub fn row(&self, id: &str) -> Result<&CatalogRow> {
        self.rows
            .iter()
            .find(|r| r.id == id)
            .ok_or_else(|| Error::UnknownCatalogEntry(id.to_owned()))
    }

    pub fn table_rows(&self, prefix: &str) -> Vec<&CatalogRow> {
        self.rows
            .iter()
            .filter(|r| r.id.starts_with(prefix))
            .collect()
    }
}

fn build_catalog() -> Result<Catalog> {
    let file: CatalogFile = serde_json::from_str(CATALOG_JSON)?;
    let mut algebras = Vec::with_capacity(file.algebras.len());
    for af in &file.algebras {
        algebras.push(algebra_from_file(af, true)?);
    }
    let find = |name: &str| -> Result<LieAlgebra> {
        algebras
            .iter()
            .find(|a| a.name() == name)
            .cloned()
            .ok_or_else(|| Error::UnknownCatalogEntry(name.to_owned()))
    };
    let mut rows = Vec::with_capacity(file.rows.len());
    for rf in &file.rows {
        let g = find(&rf.g)?;
        let h = find(&rf.h)?;
        let n = g.dim();
        let embed_ctx = SymbolContext::union(g.context(), h.context());
        let t = matrix_from_rows(&rf.t, &embed_ctx)?;
        let d =
            rf.d.iter()
                .map(|m| matrix_from_rows(m, &embed_ctx))
                .collect::<Result<Vec<_>>>()?;
        let embedding = Embedding::new(g, h, t, d)?;

        let mut names = embed_ctx.names();
        names.extend((1..=n).map(|i| format!("y{i}")));
        names.extend((1..=n).map(|i| format!("z{i}")));
        let row_ctx = SymbolContext::new(&names)?;
        let expected_l = matrix_from_rows(&rf.expected_l, &row_ctx)?;
        let expected_r = matrix_from_rows(&rf.expected_r, &row_ctx)?;

        let params = rf
            .params
            .iter()
            .map(|p| {
                Ok(ParamSpec {
                    name: p.name.clone(),
                    default: parse_rational(&p.default)?,
                    min: match &p.min {
                        Some(s) => Some((parse_rational(s)?, p.min_inclusive)),
                        None => None,
                    },
                    max: match &p.max {
                        Some(s) => Some((parse_rational(s)?, p.max_inclusive)),
                        None => None,
                    },
                    excluded: p
                        .excluded
                        .iter()
                        .map(|s| parse_rational(s))
                        .collect::<Result<Vec<_>>>()?,
                })
            })
            .collect::<Result<Vec<_>>>()?;

        rows.push(CatalogRow {
            id: rf.id.clone(),
            g_name: rf.g.clone(),
            h_name: rf.h.clone(),
            embedding,
            expected_l,
            expected_r,
            expected_r_nilpotent: rf.expected_r_nilpotent,
            expected_complete: rf.expected_complete,
            params,
            domain_note: rf.domain_note.clone(),
            provenance: rf.provenance.clone(),
            row_ctx,
        });
    }
    Ok(Catalog { algebras, rows })
}

static CATALOG: OnceLock<Catalog> = OnceLock::new();

/// The bundled catalog; building it validates Jacobi for every algebra and
/// the derivation property of every embedding, so a malformed bundle fails
/// here rather than mid-verification.
pub fn load_catalog() -> Result<&'static Catalog> {
    // OnceLock has no fallible init; build eagerly and cache on success.
    if let Some(c) = CATALOG.get() {
        return Ok(c);
    }
    let built = build_catalog()?;
    Ok(CATALOG.get_or_init(|| built))
}

pub fn algebra_by_name(name: &str) -> Result<LieAlgebra> {
    Ok(load_catalog()?.algebra(name)?.clone())
}

/// Result of re-deriving one catalog row from its embedding. `mismatches`
/// is empty exactly when every recomputed value equals the recorded one.
#[derive(Debug, Clone)]
pub struct RowReport {
    pub id: String,
    pub morphism_ok: bool,
    pub t_bijective_ok: bool,
    pub plas_axioms_ok: (bool, bool, bool),
    pub l_matches: bool,
    pub r_matches: bool,
    pub r_nilpotent_actual: bool,
    pub r_nilpotent_expected: bool,
    pub complete_actual: bool,
    pub complete_expected: bool,
    pub shifted_caveat: bool,
    pub h_class: Option<usize>,
    pub params_used: BTreeMap<String, Rational>,
    pub out_of_domain: Vec<String>,
    pub mismatches: Vec<String>,
}

impl RowReport {
    pub fn clean(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// One entry of the nilpotent-pair probe: for structures where both the
/// induced g (at the sampled parameters) and h are nilpotent, records
/// whether plain right-nilpotency agrees with the shifted criterion.
/// Nothing is asserted about the answer; the data is only gathered.
#[derive(Debug, Clone)]
pub struct ProbeEntry {
    pub id: String,
    pub right_nilpotent: bool,
    pub complete: bool,
    pub agree: bool,
}

#[derive(Debug, Clone)]
pub struct CatalogSummary {
    pub reports: Vec<RowReport>,
    pub mismatch_rows: usize,
    pub out_of_domain_rows: usize,
    pub nilpotent_pair_probe: Vec<ProbeEntry>,
}

fn effective_params(
    row: &CatalogRow,
    overrides: &BTreeMap<String, Rational>,
) -> (BTreeMap<String, Rational>, Vec<String>) {
    let mut used = BTreeMap::new();
    let mut out_of_domain = Vec::new();
    for spec in &row.params {
        let v = overrides
            .get(&spec.name)
            .cloned()
            .unwrap_or_else(|| spec.default.clone());
        if !spec.in_domain(&v) {
            out_of_domain.push(format!(
                "{} = {} is outside the recorded domain ({})",
                spec.name,
                format_rational(&v),
                if row.domain_note.is_empty() {
                    "see row data"
                } else {
                    &row.domain_note
                }
            ));
        }
        used.insert(spec.name.clone(), v);
    }
    (used, out_of_domain)
}

/// Recomputes everything for one row: morphism, t-bijectivity, the induced
/// product and its axioms, the L/R matrices against the recorded ones
/// (symbolically, parameters left symbolic), right-nilpotency, and the
/// shifted completeness criterion (with a caveat flag when h is more than
/// 2-step). All failures land in the report, never in an error.
pub fn verify_row(row: &CatalogRow, overrides: &BTreeMap<String, Rational>) -> Result<RowReport> {
    let (params_used, out_of_domain) = effective_params(row, overrides);
    let mut mismatches = Vec::new();

    let morphism = row.embedding.check_morphism()?;
    if !morphism.ok {
        let desc = morphism
            .defect
            .as_ref()
            .map(|d| d.describe())
            .unwrap_or_default();
        mismatches.push(format!("embedding is not a morphism: {desc}"));
    }
    let tb = row
        .embedding
        .t_bijective(std::slice::from_ref(&params_used))?;
    let t_bijective_ok = tb.bijective();
    if !t_bijective_ok {
        mismatches.push(format!("t is not bijective (det = {})", tb.det));
    }

    if !morphism.ok || !t_bijective_ok {
        return Ok(RowReport {
            id: row.id.clone(),
            morphism_ok: morphism.ok,
            t_bijective_ok,
            plas_axioms_ok: (false, false, false),
            l_matches: false,
            r_matches: false,
            r_nilpotent_actual: false,
            r_nilpotent_expected: row.expected_r_nilpotent,
            complete_actual: false,
            complete_expected: row.expected_complete,
            shifted_caveat: false,
            h_class: None,
            params_used,
            out_of_domain,
            mismatches,
        });
    }

    let plas = induce_plas(&row.embedding)?;
    let axioms = plas.verify()?;
    let plas_axioms_ok = (
        axioms.condition1.ok,
        axioms.condition2.ok,
        axioms.condition3.ok,
    );
    for (ok, label, witness) in [
        (
            axioms.condition1.ok,
            "product/bracket compatibility",
            &axioms.condition1.witness,
        ),
        (
            axioms.condition2.ok,
            "left-multiplication morphism law",
            &axioms.condition2.witness,
        ),
        (
            axioms.condition3.ok,
            "left multiplications are derivations",
            &axioms.condition3.witness,
        ),
    ] {
        if !ok {
            mismatches.push(format!(
                "axiom failed ({label}): {}",
                witness.clone().unwrap_or_default()
            ));
        }
    }

    let n = plas.dim();
    let y: Vec<MultiPoly> = (1..=n)
        .map(|i| MultiPoly::var(&row.row_ctx, &format!("y{i}")))
        .collect::<Result<Vec<_>>>()?;
    let z: Vec<MultiPoly> = (1..=n)
        .map(|i| MultiPoly::var(&row.row_ctx, &format!("z{i}")))
        .collect::<Result<Vec<_>>>()?;
    let l = plas.left_mult(&y)?;
    let r = plas.right_mult(&z)?;
    let l_matches = l == row.expected_l;
    if !l_matches {
        mismatches.push(format!(
            "L differs from the recorded matrix:\n{l}vs\n{}",
            row.expected_l
        ));
    }
    let r_matches = r == row.expected_r;
    if !r_matches {
        mismatches.push(format!(
            "R differs from the recorded matrix:\n{r}vs\n{}",
            row.expected_r
        ));
    }

    let r_nilpotent_actual = r.is_nilpotent()?;
    if r_nilpotent_actual != row.expected_r_nilpotent {
        mismatches.push(format!(
            "right multiplication nilpotency is {r_nilpotent_actual}, recorded {}",
            row.expected_r_nilpotent
        ));
    }

    let completeness = plas.completeness_report()?;
    let complete_actual = completeness.shifted_nilpotent;
    if complete_actual != row.expected_complete {
        mismatches.push(format!(
            "shifted completeness is {complete_actual}, recorded {}",
            row.expected_complete
        ));
    }

    Ok(RowReport {
        id: row.id.clone(),
        morphism_ok: morphism.ok,
        t_bijective_ok,
        plas_axioms_ok,
        l_matches,
        r_matches,
        r_nilpotent_actual,
        r_nilpotent_expected: row.expected_r_nilpotent,
        complete_actual,
        complete_expected: row.expected_complete,
        shifted_caveat: completeness.shifted_caveat,
        h_class: completeness.h_class,
        params_used,
        out_of_domain,
        mismatches,
    })
}

/// The induced structure of a row (mostly for tests and the CLI).
pub fn row_structure(row: &CatalogRow) -> Result<PlasStructure> {
    induce_plas(&row.embedding)
}

pub fn verify_all(overrides: &BTreeMap<String, Rational>) -> Result<CatalogSummary> {
    let catalog = load_catalog()?;
    let mut reports = Vec::with_capacity(catalog.rows.len());
    let mut probe = Vec::new();
    for row in &catalog.rows {
        let report = verify_row(row, overrides)?;
        // nilpotent-pair probe data, gathered only where both algebras are
        // nilpotent at the sampled parameters
        if report.morphism_ok && report.t_bijective_ok {
            let plas = induce_plas(&row.embedding)?;
            let g_inst = plas.g.instantiate(&report.params_used)?;
            let g_nilpotent = g_inst.nilpotency_class()?.is_some();
            let h_nilpotent = report.h_class.is_some();
            if g_nilpotent && h_nilpotent {
                probe.push(ProbeEntry {
                    id: row.id.clone(),
                    right_nilpotent: report.r_nilpotent_actual,
                    complete: report.complete_actual,
                    agree: report.r_nilpotent_actual == report.complete_actual,
                });
            }
        }
        reports.push(report);
    }
    let mismatch_rows = reports.iter().filter(|r| !r.clean()).count();
    let out_of_domain_rows = reports
        .iter()
        .filter(|r| !r.out_of_domain.is_empty())
        .count();
    Ok(CatalogSummary {
        reports,
        mismatch_rows,
        out_of_domain_rows,
        nilpotent_pair_probe: probe,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_loads_with_expected_counts() {
        let c = load_catalog().unwrap();
        assert_eq!(c.table_rows("T1.").len(), 4);
        assert_eq!(c.table_rows("T2.").len(), 19);
        assert_eq!(c.table_rows("Ex").len(), 3);
        assert!(c.algebras.len() >= 30);
    }

    #[test]
    fn every_bundled_algebra_satisfies_jacobi() {
        // load_catalog uses the checking constructor, so success implies
        // Jacobi; assert explicitly anyway.
        let c = load_catalog().unwrap();
        for a in &c.algebras {
            assert!(a.check_jacobi(), "{} fails Jacobi", a.name());
        }
    }

    #[test]
    fn unknown_entries_are_errors() {
        let c = load_catalog().unwrap();
        assert!(c.algebra("nope").is_err());
        assert!(c.row("T9.nope").is_err());
    }

    #[test]
    fn single_row_verifies_clean() {
        let c = load_catalog().unwrap();
        let row = c.row("T1.r3").unwrap();
        let report = verify_row(row, &BTreeMap::new()).unwrap();
        assert!(report.clean(), "mismatches: {:?}", report.mismatches);
        assert!(report.r_nilpotent_actual);
        assert!(report.complete_actual);
    }

    #[test]
    fn corrupted_row_is_reported_not_fixed() {
        // fault injection: flip one recorded expectation and the verifier
        // must flag exactly that discrepancy
        let c = load_catalog().unwrap();
        let mut row = c.row("T1.r3").unwrap().clone();
        row.expected_r_nilpotent = false;
        let report = verify_row(&row, &BTreeMap::new()).unwrap();
        assert!(!report.clean());
        assert_eq!(report.mismatches.len(), 1);
        assert!(report.mismatches[0].contains("nilpotency"));

        let mut row = c.row("T1.r3").unwrap().clone();
        let ctx = row.row_ctx.clone();
        *row.expected_l.at_mut(0, 0) = crate::parse::parse_poly("y1", &ctx).unwrap();
        let report = verify_row(&row, &BTreeMap::new()).unwrap();
        assert!(report.mismatches.iter().any(|m| m.contains("L differs")));
    }

    #[test]
    fn out_of_domain_override_is_flagged() {
        let c = load_catalog().unwrap();
        let row = c.row("T2.r4_-1_lambda").unwrap();
        let mut overrides = BTreeMap::new();
        overrides.insert("lambda".to_owned(), crate::rational::rat_int(0));
        let report = verify_row(row, &overrides).unwrap();
        assert_eq!(report.out_of_domain.len(), 1);
        assert!(report.out_of_domain[0].contains("lambda = 0"));
    }
}
