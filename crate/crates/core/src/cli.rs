//! Command-line front end. Every command reads JSON files in the formats
//! of `io`, runs the requested checks, and emits a report as text or JSON
//! (identical verdicts either way).
//!
//! Exit codes: 0 = all checks passed / output produced; 1 = a mathematical
//! check failed (report still emitted); 2 = input or usage error.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::catalog;
use crate::error::{Error, Result};
use crate::io;
use crate::jordan;
use crate::lie::generic_vector;
use crate::matrix::PolyMatrix;
use crate::plas::{PlasStructure, ShiftLocus};
use crate::rational::{format_rational, parse_rational, Rational};

#[derive(Debug, Parser)]
#[command(
    name = "postlie",
    version,
    about = "Exact symbolic checks for post-Lie algebra structures",
    disable_help_subcommand = true
)]
struct Cli {
    /// Output format for reports.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write the primary output to FILE instead of stdout.
    #[arg(short = 'o', long = "output", global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Criterion {
    /// Right multiplications nilpotent.
    Right,
    /// Left multiplications nilpotent.
    Left,
    /// Shifted right multiplications R_y - 1/2 ad_y nilpotent.
    RightShifted,
    /// det(id + R_y - 1/2 ad_y) identically 1.
    UnitShiftDet,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MapKind {
    Left,
    Right,
    Shifted,
    Ad,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check the Jacobi identity of an algebra file; with instantiated
    /// parameters, also report its series.
    CheckAlgebra {
        file: PathBuf,
        /// Instantiate a parameter, e.g. --param lambda=-1/2 (repeatable).
        #[arg(long = "param")]
        params: Vec<String>,
    },
    /// Check that an embedding file is a morphism with bijective t.
    VerifyEmbedding {
        file: PathBuf,
        #[arg(long = "param")]
        params: Vec<String>,
    },
    /// Induce the product structure of an embedding and write it out.
    Induce { file: PathBuf },
    /// Verify the three product axioms of a structure file.
    VerifyPlas { file: PathBuf },
    /// Evaluate one completeness criterion on a structure file.
    Complete {
        file: PathBuf,
        #[arg(long, value_enum)]
        criterion: Criterion,
    },
    /// Characteristic polynomial of a multiplication map of a structure.
    Charpoly {
        file: PathBuf,
        #[arg(long, value_enum)]
        map: MapKind,
    },
    /// Jordan decomposition of a constant rational matrix file.
    Jordan { file: PathBuf },
    /// Verify bundled catalog rows against their recorded expectations.
    Catalog {
        /// Verify a single row by id instead of the whole catalog.
        #[arg(long)]
        row: Option<String>,
        #[arg(long = "param")]
        params: Vec<String>,
    },
}

struct Report {
    json: Value,
    text: Vec<String>,
    ok: bool,
    /// Serialized output file (the induced structure); written to `-o FILE`
    /// when given, otherwise printed as the primary stdout output.
    artifact: Option<String>,
}

impl Report {
    fn new(json: Value, text: Vec<String>, ok: bool) -> Self {
        Report {
            json,
            text,
            ok,
            artifact: None,
        }
    }
}

pub fn run_from_env() -> u8 {
    let args: Vec<std::ffi::OsString> = std::env::args_os().collect();
    run(args)
}

pub fn run<I, T>(args: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            // clap prints help/version on stdout with success status
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let format = cli.format;
    let output = cli.output.clone();
    match dispatch(cli) {
        Ok(report) => {
            let rendered = match format {
                Format::Text => report.text.join("\n") + "\n",
                Format::Json => {
                    serde_json::to_string_pretty(&report.json).expect("report serializes") + "\n"
                }
            };
            match (&report.artifact, &output) {
                (Some(artifact), Some(path)) => {
                    if let Err(e) = std::fs::write(path, artifact) {
                        eprintln!("error: cannot write {}: {e}", path.display());
                        return 2;
                    }
                    print!("{rendered}");
                }
                (Some(artifact), None) => print!("{artifact}"),
                (None, Some(path)) => {
                    if let Err(e) = std::fs::write(path, rendered) {
                        eprintln!("error: cannot write {}: {e}", path.display());
                        return 2;
                    }
                }
                (None, None) => print!("{rendered}"),
            }
            if report.ok {
                0
            } else {
                1
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code_for(&e)
        }
    }
}

fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::Parse { .. }
        | Error::InvalidInput(_)
        | Error::Io(_)
        | Error::Json(_)
        | Error::UnknownCatalogEntry(_)
        | Error::UndeclaredSymbol(_)
        | Error::UnboundSymbol(_)
        | Error::DuplicateSymbol(_)
        | Error::InvalidSymbolName(_)
        | Error::Dimension(_)
        | Error::NotSquare { .. }
        | Error::SymbolicEntries { .. }
        | Error::ContextMismatch { .. }
        | Error::RequiresInstantiation(_) => 2,
        _ => 1,
    }
}

fn parse_params(raw: &[String]) -> Result<BTreeMap<String, Rational>> {
    let mut out = BTreeMap::new();
    for item in raw {
        let (name, value) = item.split_once('=').ok_or_else(|| {
            Error::InvalidInput(format!("--param expects name=value, got `{item}`"))
        })?;
        out.insert(name.trim().to_owned(), parse_rational(value)?);
    }
    Ok(out)
}

fn params_json(params: &BTreeMap<String, Rational>) -> Value {
    Value::Object(
        params
            .iter()
            .map(|(k, v)| (k.clone(), Value::String(format_rational(v))))
            .collect(),
    )
}

fn dispatch(cli: Cli) -> Result<Report> {
    match cli.command {
        Command::CheckAlgebra { file, params } => check_algebra(&file, &parse_params(&params)?),
        Command::VerifyEmbedding { file, params } => {
            verify_embedding(&file, &parse_params(&params)?)
        }
        Command::Induce { file } => induce(&file),
        Command::VerifyPlas { file } => verify_plas(&file),
        Command::Complete { file, criterion } => complete(&file, criterion),
        Command::Charpoly { file, map } => charpoly(&file, map),
        Command::Jordan { file } => jordan_cmd(&file),
        Command::Catalog { row, params } => catalog_cmd(row.as_deref(), &parse_params(&params)?),
    }
}

fn check_algebra(path: &Path, params: &BTreeMap<String, Rational>) -> Result<Report> {
    let file: io::AlgebraFile = io::read_json(path)?;
    let alg = io::algebra_from_file(&file, false)?;
    let jacobi_ok = alg.check_jacobi();
    let witness = alg.jacobi_defect().map(|(i, j, k, defect)| {
        format!(
            "triple (e{},e{},e{}): defect {}",
            i + 1,
            j + 1,
            k + 1,
            crate::lie::format_vector(&defect)
        )
    });

    let mut text = vec![
        format!("algebra: {} (dim {})", alg.name(), alg.dim()),
        format!("jacobi: {}", verdict(jacobi_ok)),
    ];
    if let Some(w) = &witness {
        text.push(format!("  witness: {w}"));
    }

    let mut series_json = Value::Null;
    if jacobi_ok {
        let instantiated = if alg.has_params() {
            match alg.instantiate(params) {
                Ok(a) => Some(a),
                Err(Error::UnboundSymbol(sym)) => {
                    text.push(format!(
                        "series: skipped (parameter `{sym}` not instantiated; pass --param {sym}=value)"
                    ));
                    None
                }
                Err(e) => return Err(e),
            }
        } else {
            Some(alg.clone())
        };
        if let Some(inst) = instantiated {
            let lcs = inst.lower_central_series()?;
            let ds = inst.derived_series()?;
            let class = inst.nilpotency_class()?;
            let solvable = inst.is_solvable()?;
            if !params.is_empty() {
                let shown: Vec<String> = params
                    .iter()
                    .map(|(k, v)| format!("{k}={}", format_rational(v)))
                    .collect();
                text.push(format!("parameters: {}", shown.join(", ")));
            }
            text.push(format!("lower central series dims: {lcs:?}"));
            text.push(format!("derived series dims: {ds:?}"));
            text.push(format!(
                "nilpotent: {}",
                class
                    .map(|c| format!("yes (class {c})"))
                    .unwrap_or("no".into())
            ));
            text.push(format!("solvable: {solvable}"));
            series_json = json!({
                "lower_central_series": lcs,
                "derived_series": ds,
                "nilpotency_class": class,
                "solvable": solvable,
            });
        }
    }

    Ok(Report::new(
        json!({
            "command": "check-algebra",
            "name": alg.name(),
            "dim": alg.dim(),
            "jacobi_ok": jacobi_ok,
            "witness": witness,
            "series": series_json,
            "params_used": params_json(params),
        }),
        text,
        jacobi_ok,
    ))
}

fn verify_embedding(path: &Path, params: &BTreeMap<String, Rational>) -> Result<Report> {
    let file: io::EmbeddingFile = io::read_json(path)?;
    let embedding = io::embedding_from_file(&file)?;
    let morphism = embedding.check_morphism()?;
    let samples = if params.is_empty() {
        Vec::new()
    } else {
        vec![params.clone()]
    };
    let tb = embedding.t_bijective(&samples)?;
    let bijective = tb.bijective();
    let defect = morphism.defect.as_ref().map(|d| d.describe());

    let mut text = vec![
        format!(
            "embedding: {} -> aff({})",
            embedding.source().name(),
            embedding.target().name()
        ),
        format!("morphism: {}", verdict(morphism.ok)),
    ];
    if let Some(d) = &defect {
        text.push(format!("  defect: {d}"));
    }
    text.push(format!("det(t) = {}", tb.det));
    match tb.constant_verdict {
        Some(v) => text.push(format!("t bijective: {}", verdict(v))),
        None => {
            if tb.samples.is_empty() {
                text.push(
                    "t bijective: indeterminate (parameter-dependent determinant; pass --param)"
                        .into(),
                );
            }
            for (desc, ok) in &tb.samples {
                text.push(format!("t bijective at {desc}: {}", verdict(*ok)));
            }
        }
    }
    let ok = morphism.ok && bijective;
    Ok(Report::new(
        json!({
            "command": "verify-embedding",
            "g": embedding.source().name(),
            "h": embedding.target().name(),
            "morphism_ok": morphism.ok,
            "morphism_defect": defect,
            "t_det": tb.det.to_string(),
            "t_bijective": bijective,
            "params_used": params_json(params),
        }),
        text,
        ok,
    ))
}

fn induce(path: &Path) -> Result<Report> {
    let file: io::EmbeddingFile = io::read_json(path)?;
    let embedding = io::embedding_from_file(&file)?;
    let plas = crate::plas::induce_plas(&embedding)?;
    let out_file = io::plas_to_file(&plas);
    let out_json = serde_json::to_value(&out_file)?;
    let axioms = plas.verify()?;

    let (_, x) = generic_vector(plas.context(), "x", plas.dim())?;
    let l = plas.left_mult(&x)?;
    let text = vec![
        format!("induced product on ({}, {})", plas.g.name(), plas.h.name()),
        format!("axioms: {}", verdict(axioms.all_ok())),
        "L_x =".to_string(),
        format!("{l}"),
    ];
    let mut report = Report::new(
        json!({
            "command": "induce",
            "axioms_ok": axioms.all_ok(),
            "structure": out_json,
        }),
        text,
        axioms.all_ok(),
    );
    report.artifact = Some(serde_json::to_string_pretty(&out_file)? + "\n");
    Ok(report)
}

fn verify_plas(path: &Path) -> Result<Report> {
    let file: io::PlasFile = io::read_json(path)?;
    let plas = io::plas_from_file(&file)?;
    let report = plas.verify()?;
    let g_jacobi = plas.g.check_jacobi();
    let h_jacobi = plas.h.check_jacobi();
    let ok = report.all_ok() && g_jacobi && h_jacobi;

    let mut text = vec![
        format!("structure on ({}, {})", plas.g.name(), plas.h.name()),
        format!("g bracket Jacobi: {}", verdict(g_jacobi)),
        format!("h bracket Jacobi: {}", verdict(h_jacobi)),
        format!(
            "condition 1 (product vs brackets): {}",
            verdict(report.condition1.ok)
        ),
        format!(
            "condition 2 (left morphism law): {}",
            verdict(report.condition2.ok)
        ),
        format!(
            "condition 3 (left derivations): {}",
            verdict(report.condition3.ok)
        ),
    ];
    for cond in [&report.condition1, &report.condition2, &report.condition3] {
        if let Some(w) = &cond.witness {
            text.push(format!("  witness: {w}"));
        }
    }
    Ok(Report::new(
        json!({
            "command": "verify-plas",
            "g": plas.g.name(),
            "h": plas.h.name(),
            "g_jacobi_ok": g_jacobi,
            "h_jacobi_ok": h_jacobi,
            "axioms": {
                "condition1": { "ok": report.condition1.ok, "witness": report.condition1.witness },
                "condition2": { "ok": report.condition2.ok, "witness": report.condition2.witness },
                "condition3": { "ok": report.condition3.ok, "witness": report.condition3.witness },
            },
        }),
        text,
        ok,
    ))
}

fn complete(path: &Path, criterion: Criterion) -> Result<Report> {
    let file: io::PlasFile = io::read_json(path)?;
    let plas = io::plas_from_file(&file)?;
    let completeness = plas.completeness_report()?;

    let (name, value, mut text, mut extra): (&str, bool, Vec<String>, Value) = match criterion {
        Criterion::Right => (
            "right",
            completeness.right_nilpotent,
            vec![format!("R nilpotent: {}", completeness.right_nilpotent)],
            Value::Null,
        ),
        Criterion::Left => (
            "left",
            completeness.left_nilpotent,
            vec![format!("L nilpotent: {}", completeness.left_nilpotent)],
            Value::Null,
        ),
        Criterion::RightShifted => {
            let mut lines = vec![format!(
                "R - 1/2 ad nilpotent: {}",
                completeness.shifted_nilpotent
            )];
            if completeness.shifted_caveat {
                lines.push(
                    "caveat: h is not abelian or 2-step nilpotent, so this criterion is \
                     evaluated outside its domain of validity"
                        .into(),
                );
            }
            let mut extra = json!({ "caveat": completeness.shifted_caveat });
            if completeness.h_class.is_some() {
                let locus = plas.shift_nilpotency_locus()?;
                lines.push(format!(
                    "nilpotency locus of R - c*ad: {}",
                    locus.describe()
                ));
                lines.push(format!("  convention: {}", locus.convention));
                lines.push(format!("  note: {}", locus.note));
                extra["shift_locus"] = json!({
                    "values": match &locus.locus {
                        ShiftLocus::All => Value::String("all".into()),
                        ShiftLocus::Set(v) => Value::Array(
                            v.iter().map(|r| Value::String(format_rational(r))).collect()
                        ),
                    },
                    "convention": locus.convention,
                    "note": locus.note,
                });
            }
            (
                "right-shifted",
                completeness.shifted_nilpotent,
                lines,
                extra,
            )
        }
        Criterion::UnitShiftDet => {
            let det_is_one = completeness.unit_shift_det.is_one();
            (
                "unit-shift-det",
                det_is_one,
                vec![format!(
                    "det(id + R - 1/2 ad) = {} ({})",
                    completeness.unit_shift_det,
                    if det_is_one {
                        "identically 1"
                    } else {
                        "not identically 1"
                    }
                )],
                json!({ "det": completeness.unit_shift_det.to_string() }),
            )
        }
    };
    text.insert(
        0,
        format!("structure on ({}, {})", plas.g.name(), plas.h.name()),
    );
    if extra == Value::Null {
        extra = json!({});
    }
    Ok(Report::new(
        json!({
            "command": "complete",
            "criterion": name,
            "value": value,
            "h_class": completeness.h_class,
            "detail": extra,
        }),
        text,
        value,
    ))
}

fn multiplication_matrix(plas: &PlasStructure, map: MapKind) -> Result<PolyMatrix> {
    let n = plas.dim();
    match map {
        MapKind::Left => {
            let (_, x) = generic_vector(plas.context(), "x", n)?;
            plas.left_mult(&x)
        }
        MapKind::Right => {
            let (_, y) = generic_vector(plas.context(), "y", n)?;
            plas.right_mult(&y)
        }
        MapKind::Shifted => {
            let (_, y) = generic_vector(plas.context(), "y", n)?;
            let r = plas.right_mult(&y)?;
            let ad = plas.h.ad_matrix(&y)?;
            r.sub(&ad.scale_rat(&crate::rational::rat(1, 2)))
        }
        MapKind::Ad => {
            let (_, y) = generic_vector(plas.context(), "y", n)?;
            plas.h.ad_matrix(&y)
        }
    }
}

fn charpoly(path: &Path, map: MapKind) -> Result<Report> {
    let file: io::PlasFile = io::read_json(path)?;
    let plas = io::plas_from_file(&file)?;
    let m = multiplication_matrix(&plas, map)?;
    let cp = m.char_poly()?;
    let map_name = match map {
        MapKind::Left => "left",
        MapKind::Right => "right",
        MapKind::Shifted => "shifted",
        MapKind::Ad => "ad",
    };
    let coeffs: Vec<String> = cp.coeffs.iter().map(|c| c.to_string()).collect();
    Ok(Report::new(
        json!({
            "command": "charpoly",
            "map": map_name,
            "variable": cp.variable_name(),
            "coefficients_ascending": coeffs,
            "display": cp.to_string(),
        }),
        vec![format!("char poly of the {map_name} map: {cp}")],
        true,
    ))
}

fn jordan_cmd(path: &Path) -> Result<Report> {
    let rows: Vec<Vec<String>> = io::read_json(path)?;
    // parsing against the empty context rejects symbolic entries, which the
    // decomposition does not support
    let ctx = crate::symbols::SymbolContext::empty();
    let m = io::matrix_from_rows(&rows, &ctx)?;
    let pair = jordan::jordan_chevalley(&m)?;
    let kind = jordan::element_type(&m)?;
    let text = vec![
        format!("element type: {kind}"),
        "semisimple part:".to_string(),
        format!("{}", pair.semisimple),
        "nilpotent part:".to_string(),
        format!("{}", pair.nilpotent),
    ];
    Ok(Report::new(
        json!({
            "command": "jordan",
            "element_type": kind.to_string(),
            "semisimple": io::matrix_to_rows(&pair.semisimple),
            "nilpotent": io::matrix_to_rows(&pair.nilpotent),
        }),
        text,
        true,
    ))
}

fn row_report_json(r: &catalog::RowReport) -> Value {
    json!({
        "id": r.id,
        "morphism_ok": r.morphism_ok,
        "t_bijective_ok": r.t_bijective_ok,
        "plas_axioms_ok": [r.plas_axioms_ok.0, r.plas_axioms_ok.1, r.plas_axioms_ok.2],
        "L_matches": r.l_matches,
        "R_matches": r.r_matches,
        "R_nilpotent_actual": r.r_nilpotent_actual,
        "R_nilpotent_expected": r.r_nilpotent_expected,
        "complete_actual": r.complete_actual,
        "complete_expected": r.complete_expected,
        "shifted_caveat": r.shifted_caveat,
        "h_class": r.h_class,
        "params_used": params_json(&r.params_used),
        "out_of_domain": r.out_of_domain,
        "mismatches": r.mismatches,
    })
}

fn row_report_text(r: &catalog::RowReport, text: &mut Vec<String>) {
    let status = if r.clean() { "ok" } else { "MISMATCH" };
    let caveat = if r.shifted_caveat {
        ", caveat: criterion outside 2-step domain"
    } else {
        ""
    };
    text.push(format!(
        "{:<24} {status}  R nilpotent {} (expected {}), complete {} (expected {}){caveat}",
        r.id, r.r_nilpotent_actual, r.r_nilpotent_expected, r.complete_actual, r.complete_expected
    ));
    if !r.params_used.is_empty() {
        let shown: Vec<String> = r
            .params_used
            .iter()
            .map(|(k, v)| format!("{k}={}", format_rational(v)))
            .collect();
        text.push(format!("{:<24} params: {}", "", shown.join(", ")));
    }
    for w in &r.out_of_domain {
        text.push(format!("{:<24} warning: {w}", ""));
    }
    for m in &r.mismatches {
        text.push(format!("{:<24} mismatch: {m}", ""));
    }
}

fn catalog_cmd(row_id: Option<&str>, overrides: &BTreeMap<String, Rational>) -> Result<Report> {
    match row_id {
        Some(id) => {
            let cat = catalog::load_catalog()?;
            let row = cat.row(id)?;
            let report = catalog::verify_row(row, overrides)?;
            let mut text = Vec::new();
            row_report_text(&report, &mut text);
            text.push(format!("provenance: {}", row.provenance));
            let ok = report.clean();
            Ok(Report::new(
                json!({
                    "command": "catalog",
                    "rows": [row_report_json(&report)],
                    "mismatch_rows": if ok { 0 } else { 1 },
                    "provenance": row.provenance,
                }),
                text,
                ok,
            ))
        }
        None => {
            let summary = catalog::verify_all(overrides)?;
            let mut text = Vec::new();
            for r in &summary.reports {
                row_report_text(r, &mut text);
            }
            text.push(format!(
                "{} rows checked, {} mismatches, {} out-of-domain warnings",
                summary.reports.len(),
                summary.mismatch_rows,
                summary.out_of_domain_rows
            ));
            if summary.nilpotent_pair_probe.is_empty() {
                text.push(
                    "nilpotent-pair probe: no rows with both algebras nilpotent at the sampled \
                     parameters"
                        .into(),
                );
            } else {
                text.push(
                    "nilpotent-pair probe (right-nilpotency vs shifted completeness):".into(),
                );
                for p in &summary.nilpotent_pair_probe {
                    text.push(format!(
                        "  {}: R nilpotent {}, complete {}, agree {}",
                        p.id, p.right_nilpotent, p.complete, p.agree
                    ));
                }
            }
            let ok = summary.mismatch_rows == 0;
            Ok(Report::new(
                json!({
                    "command": "catalog",
                    "rows": summary.reports.iter().map(row_report_json).collect::<Vec<_>>(),
                    "mismatch_rows": summary.mismatch_rows,
                    "out_of_domain_rows": summary.out_of_domain_rows,
                    "nilpotent_pair_probe": summary.nilpotent_pair_probe.iter().map(|p| json!({
                        "id": p.id,
                        "right_nilpotent": p.right_nilpotent,
                        "complete": p.complete,
                        "agree": p.agree,
                    })).collect::<Vec<_>>(),
                }),
                text,
                ok,
            ))
        }
    }
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "pass"
    } else {
        "FAIL"
    }
}
