//! Dispatch of parsed command lines to the library.

use std::collections::BTreeSet;
use std::io::Read;

use clap::ValueEnum;
use serde_json::{json, Value};
use spherica::admissible::{self, AdmissibleMap};
use spherica::ars;
use spherica::enumerate::{self, ClassificationRecord, EnumerateOptions};
use spherica::ews::{self, EwsGenerators, EwsInvariants};
use spherica::fans;
use spherica::luna;
use spherica::rootsys::{format_root, DynkinDiagram};
use spherica::Report;

use crate::document::{self, Document, InputError};
use crate::{Cli, Command, Conversion, EnumerationArgs, Example, Format, InputArgs, Kind};

/// What a run prints and its exit status.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome {
            code: 0,
            stdout,
            stderr: String::new(),
        }
    }
}

enum Failure {
    /// Exit 2.
    Input(InputError),
    /// Exit 1, with an optional report on standard output.
    Invalid { stdout: String, message: String },
}

impl From<InputError> for Failure {
    fn from(e: InputError) -> Self {
        Failure::Input(e)
    }
}

fn invalid(message: impl Into<String>) -> Failure {
    Failure::Invalid {
        stdout: String::new(),
        message: message.into(),
    }
}

fn malformed(message: impl Into<String>) -> Failure {
    Failure::Input(InputError::Malformed(message.into()))
}

/// Library errors raised while converting a validated object.
fn conversion(e: spherica::Error) -> Failure {
    invalid(format!("conversion failed: {e}"))
}

pub fn run(cli: Cli) -> Outcome {
    let result = match cli.command {
        Command::Check {
            kind,
            input,
            ty,
            matrix,
            dsc,
            format,
        } => check(kind, &input, ty, matrix, dsc, format),
        Command::Convert {
            conversion,
            input,
            dsc,
            format,
        } => convert(conversion, &input, dsc, format),
        Command::Enumerate {
            enumeration,
            input,
            cuspidal,
            format,
        } => enumerate_cmd(&enumeration, &input, cuspidal, format),
        Command::EmitTable { enumeration, input } => {
            enumerate_cmd(&enumeration, &input, true, Format::Table)
        }
        Command::Ews {
            input,
            example,
            format,
        } => ews_cmd(&input, example, format),
    };
    match result {
        Ok(stdout) => Outcome::ok(stdout),
        Err(Failure::Input(e)) => Outcome {
            code: 2,
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        },
        Err(Failure::Invalid { stdout, message }) => Outcome {
            code: 1,
            stdout,
            stderr: format!("{message}\n"),
        },
    }
}

fn read_input(input: &InputArgs) -> Result<Option<Document>, Failure> {
    let Some(src) = &input.input else {
        return Ok(None);
    };
    let text = if src == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| malformed(format!("cannot read standard input: {e}")))?;
        s
    } else if src.trim_start().starts_with('{') {
        src.clone()
    } else {
        std::fs::read_to_string(src).map_err(|e| malformed(format!("cannot read {src}: {e}")))?
    };
    Ok(Some(document::parse_document(&text)?))
}

fn require_input(input: &InputArgs) -> Result<Document, Failure> {
    read_input(input)?.ok_or_else(|| malformed("--input is required"))
}

fn zero_based(dsc: &[usize], colors: usize) -> Result<BTreeSet<usize>, Failure> {
    dsc.iter()
        .map(|&x| {
            if x == 0 || x > colors {
                Err(malformed(format!(
                    "--dsc: color {x} is out of range 1..={colors}"
                )))
            } else {
                Ok(x - 1)
            }
        })
        .collect()
}

/// Renders a JSON value as `key: value` lines for the text format.
fn text_of(v: &Value) -> String {
    match v {
        Value::Object(m) => m
            .iter()
            .map(|(k, x)| {
                format!(
                    "{k}: {}\n",
                    serde_json::to_string(x).expect("values serialize")
                )
            })
            .collect(),
        other => format!("{other}\n"),
    }
}

fn render(v: &Value, format: Format) -> Result<String, Failure> {
    match format {
        Format::Json => Ok(document::emit(v)),
        Format::Text => Ok(text_of(v)),
        Format::Table => Err(malformed(
            "--format table is only available for enumeration",
        )),
    }
}

// ---------------------------------------------------------------- check

fn report_value(subject: &str, r: &Report) -> Value {
    let checks: Vec<Value> = r
        .checks
        .iter()
        .map(|c| json!({ "name": c.name, "passed": c.passed(), "violations": c.violations }))
        .collect();
    json!({ "kind": "report", "subject": subject, "valid": r.is_valid(), "checks": checks })
}

fn check(
    kind: Option<Kind>,
    input: &InputArgs,
    ty: Option<String>,
    matrix: Option<String>,
    dsc: Option<Vec<usize>>,
    format: Format,
) -> Result<String, Failure> {
    let doc = match (&matrix, &input.input) {
        (Some(_), Some(_)) => return Err(malformed("give either --matrix or --input")),
        (Some(m), None) => {
            let ty = ty.ok_or_else(|| malformed("--matrix needs --type"))?;
            let rows: Value =
                serde_json::from_str(m).map_err(|e| InputError::Json(e.to_string()))?;
            let v = match kind {
                Some(Kind::Admissible) => {
                    json!({ "kind": "admissible", "type": ty, "matrix": rows })
                }
                Some(Kind::System) => cuspidal_system_value(&ty, rows)?,
                _ => {
                    return Err(malformed(
                        "--matrix is accepted for `check admissible` and `check system`",
                    ))
                }
            };
            document::from_value(&v)?
        }
        (None, _) => {
            if ty.is_some() {
                return Err(malformed("--type is only used with --matrix"));
            }
            require_input(input)?
        }
    };
    if let Some(k) = kind {
        if k.name() != doc.kind() {
            return Err(malformed(format!(
                "expected a {} document, found {}",
                k.name(),
                doc.kind()
            )));
        }
    }
    let report = check_document(&doc, dsc.as_deref())?;
    let out = match format {
        Format::Json => document::emit(&report_value(doc.kind(), &report)),
        Format::Text => report.to_string(),
        Format::Table => {
            return Err(malformed(
                "--format table is only available for enumeration",
            ))
        }
    };
    if report.is_valid() {
        Ok(out)
    } else {
        Err(Failure::Invalid {
            stdout: out,
            message: format!("{} failed: {}", doc.kind(), report.failed().join(", ")),
        })
    }
}

/// A cuspidal system document from its color rows.
fn cuspidal_system_value(ty: &str, rows: Value) -> Result<Value, Failure> {
    let d = DynkinDiagram::parse(ty).map_err(InputError::from)?;
    let n = d.rank();
    let sigma: Vec<Vec<i64>> = (0..n)
        .map(|i| {
            let mut v = vec![0; n];
            v[i] = 1;
            v
        })
        .collect();
    Ok(json!({ "kind": "system", "type": ty, "sigma": sigma, "colors": rows }))
}

fn check_document(doc: &Document, dsc: Option<&[usize]>) -> Result<Report, Failure> {
    let mut report = match doc {
        Document::Diagram(rs) => {
            let mut r = Report::new();
            r.declare(&format!("diagram {}", rs.diagram()));
            r
        }
        Document::System(s, _) => luna::validate_system(s),
        Document::Hsd(h, _) => luna::validate_hsd(h),
        Document::Admissible(m) => admissible::validate_admissible(m),
        Document::Ars(e) => ars::validate_extended(e),
        Document::Ews(g) => {
            let mut r = Report::new();
            r.declare("EWS-free");
            match ews::invariants_from_ews(g) {
                Err(e) => r.fail("EWS-free", e.to_string()),
                Ok(inv) => match inv.to_hsd() {
                    Ok(h) => r.merge(luna::validate_hsd(&h)),
                    Err(e) => r.fail("EWS-datum", e.to_string()),
                },
            }
            r
        }
    };
    let subset = match (dsc, doc) {
        (Some(d), Document::System(s, _)) => Some((s.clone(), zero_based(d, s.colors().len())?)),
        (None, Document::System(s, Some(d))) => Some((s.clone(), d.clone())),
        (Some(_), _) => return Err(malformed("--dsc is only checked for systems")),
        _ => None,
    };
    if let Some((s, d)) = subset {
        report.declare("DSC");
        if report.is_valid() {
            match luna::is_distinguished(&s, &d) {
                Ok(Some(_)) => {}
                Ok(None) => report.fail("DSC", "the subset is not distinguished"),
                Err(e) => report.fail("DSC", e.to_string()),
            }
        }
    }
    Ok(report)
}

// ---------------------------------------------------------------- convert

/// Fails with the report when the document does not validate.
fn ensure_valid(doc: &Document) -> Result<(), Failure> {
    let r = check_document(doc, None)?;
    if r.is_valid() {
        Ok(())
    } else {
        Err(Failure::Invalid {
            stdout: r.to_string(),
            message: format!("input {} failed: {}", doc.kind(), r.failed().join(", ")),
        })
    }
}

fn conversion_name(c: Conversion) -> String {
    c.to_possible_value()
        .expect("no skipped variants")
        .get_name()
        .to_string()
}

fn wrong_kind(c: Conversion, expected: &str, doc: &Document) -> Failure {
    malformed(format!(
        "{} needs a document of kind {expected}, found {}",
        conversion_name(c),
        doc.kind()
    ))
}

fn dsc_for(
    given: &Option<Vec<usize>>,
    carried: &Option<BTreeSet<usize>>,
    colors: usize,
) -> Result<BTreeSet<usize>, Failure> {
    match (given, carried) {
        (Some(d), _) => zero_based(d, colors),
        (None, Some(d)) => Ok(d.clone()),
        (None, None) => Err(malformed(
            "a distinguished subset is required: pass --dsc or add dsc to the document",
        )),
    }
}

fn convert(
    c: Conversion,
    input: &InputArgs,
    dsc: Option<Vec<usize>>,
    format: Format,
) -> Result<String, Failure> {
    if dsc.is_some() && !matches!(c, Conversion::SystemToAdmissible | Conversion::HsdToArs) {
        return Err(malformed(format!(
            "--dsc is not used by {}",
            conversion_name(c)
        )));
    }
    let doc = require_input(input)?;
    ensure_valid(&doc)?;
    let out = match (c, &doc) {
        (Conversion::SystemToAdmissible, Document::System(s, carried)) => {
            let d = dsc_for(&dsc, carried, s.colors().len())?;
            document::admissible_value(
                &admissible::admissible_from_system(s, &d).map_err(conversion)?,
            )
        }
        (Conversion::AdmissibleToSystem, Document::Admissible(m)) => {
            let (s, d) = admissible::spherical_system_of_admissible(m).map_err(conversion)?;
            document::system_value(&s, Some(&d))
        }
        (Conversion::AdmissibleToArs, Document::Admissible(m)) => {
            let (_, e) = ars::ars_from_admissible(m).map_err(conversion)?;
            document::ars_value(&e)
        }
        (Conversion::ArsToAdmissible, Document::Ars(e)) => {
            document::admissible_value(&ars::admissible_from_ars(e).map_err(conversion)?)
        }
        (Conversion::ArsToHsd, Document::Ars(e)) => {
            let h = ars::hsd_from_ars(e).map_err(conversion)?;
            // Colors of the classes follow the colors of the simple roots.
            let first = e.ars.pi0().len();
            let classes = ars::expand_ars(&e.ars).map_err(conversion)?.classes.len();
            let d: BTreeSet<usize> = (first..first + classes).collect();
            document::hsd_value(&h, Some(&d))
        }
        (Conversion::HsdToArs, Document::Hsd(h, carried)) => {
            let d = dsc_for(&dsc, carried, h.colors().len())?;
            document::ars_value(&ars::ars_from_hsd(h, &d).map_err(conversion)?)
        }
        (Conversion::SystemToHsd, Document::System(s, carried)) => {
            let h = s.to_hsd().ok_or_else(|| {
                invalid("conversion failed: Sigma does not span a lattice with the colors")
            })?;
            document::hsd_value(&h, carried.as_ref())
        }
        (Conversion::HsdToSystem, Document::Hsd(h, carried)) => document::system_value(
            &h.to_spherical_system().map_err(conversion)?,
            carried.as_ref(),
        ),
        (Conversion::ArsToEws, Document::Ars(e)) => {
            document::ews_value(&ews::ews_generators_from_ars(e).map_err(conversion)?)
        }
        (Conversion::HsdToEws, Document::Hsd(h, _)) => {
            document::ews_value(&ews::ews_generators_from_hsd(h).map_err(conversion)?)
        }
        (Conversion::EwsToHsd, Document::Ews(g)) => {
            let inv = ews::invariants_from_ews(g).map_err(conversion)?;
            document::hsd_value(&inv.to_hsd().map_err(conversion)?, None)
        }
        (Conversion::AdmissibleToFan, Document::Admissible(m)) => fan_value(m)?,
        (c, doc) => {
            let expected = match c {
                Conversion::SystemToAdmissible | Conversion::SystemToHsd => "system",
                Conversion::AdmissibleToSystem
                | Conversion::AdmissibleToArs
                | Conversion::AdmissibleToFan => "admissible",
                Conversion::ArsToAdmissible | Conversion::ArsToHsd | Conversion::ArsToEws => "ars",
                Conversion::HsdToArs | Conversion::HsdToSystem | Conversion::HsdToEws => "hsd",
                Conversion::EwsToHsd => "ews",
            };
            return Err(wrong_kind(c, expected, doc));
        }
    };
    render(&out, format)
}

fn fan_value(m: &AdmissibleMap) -> Result<Value, Failure> {
    let f = admissible::build_fan_eta(m).map_err(conversion)?;
    let fan = &f.system.fan;
    let report = fans::validate_fan(fan);
    let rays = fan.rays();
    let cones: Vec<Vec<usize>> = fan
        .maximal_cones()
        .iter()
        .map(|c| {
            let mut idx: Vec<usize> = c
                .rays()
                .iter()
                .map(|r| {
                    rays.iter()
                        .position(|x| x == r)
                        .expect("cone rays are fan rays")
                        + 1
                })
                .collect();
            idx.sort();
            idx
        })
        .collect();
    let groups: Vec<Vec<usize>> = f
        .groups
        .iter()
        .map(|g| g.iter().map(|x| x + 1).collect())
        .collect();
    Ok(json!({
        "kind": "fan",
        "type": m.root_system().diagram().to_string(),
        "lattice": f.system.lattice,
        "rays": rays,
        "cones": cones,
        "groups": groups,
        "group_rays": f.group_rays,
        "complete": report.complete,
        "regular": report.regular,
        "expected_cones": f.expected_family_size(),
    }))
}

// ---------------------------------------------------------------- enumerate

fn enumerate_cmd(
    args: &EnumerationArgs,
    input: &InputArgs,
    cuspidal: bool,
    format: Format,
) -> Result<String, Failure> {
    let diagram = match (&args.ty, read_input(input)?) {
        (Some(_), Some(_)) => return Err(malformed("give either --type or --input")),
        (Some(t), None) => DynkinDiagram::parse(t).map_err(InputError::from)?,
        (None, Some(Document::Diagram(rs))) => rs.diagram().clone(),
        (None, Some(doc)) => {
            return Err(malformed(format!(
                "expected a diagram document, found {}",
                doc.kind()
            )))
        }
        (None, None) => return Err(malformed("--type is required")),
    };
    let opts = EnumerateOptions {
        cuspidal_only: cuspidal,
        rank_bound: args.rank_bound,
        parallel: args.parallel,
    };
    let records = enumerate::enumerate_systems(&diagram, opts).map_err(|e| match e {
        spherica::Error::RankBound { rank, bound } => malformed(format!(
            "rank {rank} exceeds the enumeration bound {bound}; raise it with --rank-bound or {}",
            enumerate::RANK_BOUND_VAR
        )),
        other => invalid(format!("enumeration failed: {other}")),
    })?;
    Ok(match format {
        Format::Table => enumerate::emit_table(&records),
        Format::Json => document::emit(&records_value(&diagram, cuspidal, &records)),
        Format::Text => records_text(&records),
    })
}

fn records_value(d: &DynkinDiagram, cuspidal: bool, records: &[ClassificationRecord]) -> Value {
    let recs: Vec<Value> = records
        .iter()
        .enumerate()
        .map(|(k, r)| {
            let witnesses: Vec<Value> = r
                .witnesses
                .iter()
                .map(|w| {
                    json!({
                        "dsc": w.dsc.iter().map(|x| x + 1).collect::<Vec<_>>(),
                        "matrix": w.map.matrix(),
                        "classes": w.classes,
                    })
                })
                .collect();
            json!({ "no": k + 1, "system": document::system_value(&r.system, None), "witnesses": witnesses })
        })
        .collect();
    json!({ "kind": "records", "type": d.to_string(), "cuspidal": cuspidal, "records": recs })
}

fn records_text(records: &[ClassificationRecord]) -> String {
    let mut out = String::new();
    for (k, r) in records.iter().enumerate() {
        out.push_str(&format!(
            "system {}: colors {:?}\n",
            k + 1,
            r.system.colors()
        ));
        for w in &r.witnesses {
            let d: Vec<String> = w.dsc.iter().map(|x| (x + 1).to_string()).collect();
            out.push_str(&format!(
                "  dsc {}: map {}, active roots {}\n",
                d.join(","),
                w.map,
                enumerate::format_classes(&w.classes)
            ));
        }
    }
    out
}

// ---------------------------------------------------------------- ews

fn ews_cmd(input: &InputArgs, example: Option<Example>, format: Format) -> Result<String, Failure> {
    let gens: EwsGenerators = match (example, read_input(input)?) {
        (Some(_), Some(_)) => return Err(malformed("give either --example or --input")),
        (Some(Example::Sl2Cubed), None) => ews::sl2_cubed_example().map_err(conversion)?,
        (None, Some(doc)) => {
            ensure_valid_source(&doc)?;
            match doc {
                Document::Ews(g) => g,
                Document::Ars(e) => ews::ews_generators_from_ars(&e).map_err(conversion)?,
                Document::Hsd(h, _) => ews::ews_generators_from_hsd(&h).map_err(conversion)?,
                other => {
                    return Err(malformed(format!(
                        "ews expects an ars, hsd or ews document, found {}",
                        other.kind()
                    )))
                }
            }
        }
        (None, None) => return Err(malformed("--input or --example is required")),
    };
    let inv = ews::invariants_from_ews(&gens)
        .map_err(|e| invalid(format!("generators rejected: {e}")))?;
    render(&ews_report_value(&gens, &inv), format)
}

/// Only derived generators need a valid source; raw generators are checked
/// by the invariant computation itself.
fn ensure_valid_source(doc: &Document) -> Result<(), Failure> {
    match doc {
        Document::Ews(_) => Ok(()),
        other => ensure_valid(other),
    }
}

fn ews_report_value(g: &EwsGenerators, inv: &EwsInvariants) -> Value {
    let colors: Vec<Value> = inv
        .colors
        .iter()
        .map(|c| {
            json!({
                "kappa": c.kappa,
                "lambda": c.lambda,
                "chi": spherica::lattice::small_vec(&c.chi).expect("character coordinates fit in i64"),
            })
        })
        .collect();
    let sigma: Vec<String> = inv
        .sigma_detected
        .iter()
        .map(|s| match s.as_root() {
            Some(r) => format_root(&r),
            None => s.to_string(),
        })
        .collect();
    let hsd = inv
        .to_hsd()
        .ok()
        .map(|h| document::hsd_value(&h, None))
        .unwrap_or(Value::Null);
    json!({
        "kind": "ews-report",
        "generators": document::ews_value(g),
        "lattice": inv.lattice,
        "pp": inv.pp.iter().map(|x| x + 1).collect::<Vec<_>>(),
        "sigma_in_simple": sigma,
        "colors": colors,
        "hsd": hsd,
    })
}
