//! JSON documents: schema validation on load, conversion to library objects,
//! and canonical emission with sorted keys and rationals as `"p/q"`.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::{Arc, OnceLock};

use serde::Deserialize;
use serde_json::{json, Value};
use spherica::admissible::AdmissibleMap;
use spherica::ars::{self, ArsSet, ExtendedArsSet};
use spherica::ews::EwsGenerators;
use spherica::lattice::{big_vec, small_vec, FgAbelianGroup, Sublattice};
use spherica::luna::{self, Hsd, SphericalRoot, SphericalSystem};
use spherica::rootsys::{DynkinDiagram, RootSystem};

/// The input schema shipped in `docs/schema.json`.
pub const SCHEMA: &str = include_str!("../../../docs/schema.json");

/// Malformed input. Every variant maps to exit status 2.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InputError {
    Json(String),
    Schema(Vec<String>),
    UnknownType(String),
    Malformed(String),
}

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InputError::Json(e) => write!(f, "malformed JSON: {e}"),
            InputError::Schema(errs) => write!(f, "schema violation: {}", errs.join("; ")),
            InputError::UnknownType(t) => write!(f, "unknown Dynkin type `{t}`"),
            InputError::Malformed(e) => write!(f, "malformed input: {e}"),
        }
    }
}

impl std::error::Error for InputError {}

impl From<spherica::Error> for InputError {
    fn from(e: spherica::Error) -> Self {
        match e {
            spherica::Error::DiagramSyntax(t) => InputError::UnknownType(t),
            spherica::Error::InvalidDiagram { letter, rank, .. } => {
                InputError::UnknownType(format!("{letter}{rank}"))
            }
            other => InputError::Malformed(other.to_string()),
        }
    }
}

/// A parsed input document.
#[derive(Debug, Clone)]
pub enum Document {
    Diagram(Arc<RootSystem>),
    /// A spherical system with an optional distinguished subset (0-based).
    System(SphericalSystem, Option<BTreeSet<usize>>),
    Hsd(Hsd, Option<BTreeSet<usize>>),
    Admissible(AdmissibleMap),
    Ars(ExtendedArsSet),
    Ews(EwsGenerators),
}

impl Document {
    pub fn kind(&self) -> &'static str {
        match self {
            Document::Diagram(_) => "diagram",
            Document::System(..) => "system",
            Document::Hsd(..) => "hsd",
            Document::Admissible(_) => "admissible",
            Document::Ars(_) => "ars",
            Document::Ews(_) => "ews",
        }
    }

    pub fn root_system(&self) -> Arc<RootSystem> {
        match self {
            Document::Diagram(rs) => rs.clone(),
            Document::System(s, _) => s.root_system_arc(),
            Document::Hsd(h, _) => h.root_system_arc(),
            Document::Admissible(m) => m.root_system_arc(),
            Document::Ars(e) => e.ars.root_system_arc(),
            Document::Ews(g) => g.root_system_arc(),
        }
    }
}

fn validator() -> &'static jsonschema::Validator {
    static V: OnceLock<jsonschema::Validator> = OnceLock::new();
    V.get_or_init(|| {
        let schema: Value = serde_json::from_str(SCHEMA).expect("shipped schema is valid JSON");
        jsonschema::validator_for(&schema).expect("shipped schema compiles")
    })
}

/// Checks a value against the input schema.
pub fn validate_schema(v: &Value) -> Result<(), InputError> {
    let errs: Vec<String> = validator()
        .iter_errors(v)
        .map(|e| {
            let path = e.instance_path().to_string();
            let path = if path.is_empty() {
                "/".to_string()
            } else {
                path
            };
            format!("{path}: {e}")
        })
        .collect();
    if errs.is_empty() {
        Ok(())
    } else {
        Err(InputError::Schema(errs))
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum Rational {
    Int(i64),
    Str(String),
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RawRoot {
    Plain(Vec<i64>),
    WithPi { root: Vec<i64>, pi: usize },
}

#[derive(Deserialize)]
struct RawGenerator {
    lambda: Vec<i64>,
    chi: Vec<i64>,
}

#[derive(Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
enum Raw {
    Diagram {
        #[serde(rename = "type")]
        ty: String,
    },
    System {
        #[serde(rename = "type")]
        ty: String,
        #[serde(default)]
        pp: Vec<usize>,
        sigma: Vec<Vec<Rational>>,
        colors: Vec<Vec<i64>>,
        dsc: Option<Vec<usize>>,
    },
    Hsd {
        #[serde(rename = "type")]
        ty: String,
        #[serde(default)]
        central_rank: usize,
        lattice: Vec<Vec<i64>>,
        #[serde(default)]
        pp: Vec<usize>,
        sigma: Vec<Vec<Rational>>,
        colors: Vec<Vec<i64>>,
        dsc: Option<Vec<usize>>,
    },
    Admissible {
        #[serde(rename = "type")]
        ty: String,
        matrix: Vec<Vec<i64>>,
    },
    Ars {
        #[serde(rename = "type")]
        ty: String,
        #[serde(default)]
        central_rank: usize,
        classes: Vec<Vec<RawRoot>>,
        ker_tau: Option<Vec<Vec<i64>>>,
    },
    Ews {
        #[serde(rename = "type")]
        ty: String,
        #[serde(default)]
        central_rank: usize,
        group_rank: usize,
        #[serde(default)]
        relations: Vec<Vec<i64>>,
        generators: Vec<RawGenerator>,
        #[serde(default)]
        central: Vec<Vec<i64>>,
    },
}

/// Parses and schema-validates a document.
pub fn parse_document(text: &str) -> Result<Document, InputError> {
    let v: Value = serde_json::from_str(text).map_err(|e| InputError::Json(e.to_string()))?;
    from_value(&v)
}

pub fn from_value(v: &Value) -> Result<Document, InputError> {
    validate_schema(v)?;
    let raw: Raw =
        serde_json::from_value(v.clone()).map_err(|e| InputError::Malformed(e.to_string()))?;
    match raw {
        Raw::Diagram { ty } => Ok(Document::Diagram(root_system(&ty)?)),
        Raw::System {
            ty,
            pp,
            sigma,
            colors,
            dsc,
        } => {
            let rs = root_system(&ty)?;
            let pp = nodes(&pp, rs.rank(), "pp")?;
            let sigma = spherical_roots(&sigma)?;
            let dsc = dsc.map(|d| nodes(&d, colors.len(), "dsc")).transpose()?;
            Ok(Document::System(
                SphericalSystem::new(rs, pp, sigma, colors)?,
                dsc,
            ))
        }
        Raw::Hsd {
            ty,
            central_rank,
            lattice,
            pp,
            sigma,
            colors,
            dsc,
        } => {
            let rs = root_system(&ty)?;
            let pp = nodes(&pp, rs.rank(), "pp")?;
            let sigma = spherical_roots(&sigma)?;
            let dsc = dsc.map(|d| nodes(&d, colors.len(), "dsc")).transpose()?;
            Ok(Document::Hsd(
                Hsd::new(rs, central_rank, lattice, pp, sigma, colors)?,
                dsc,
            ))
        }
        Raw::Admissible { ty, matrix } => Ok(Document::Admissible(AdmissibleMap::new(
            root_system(&ty)?,
            matrix,
        )?)),
        Raw::Ars {
            ty,
            central_rank,
            classes,
            ker_tau,
        } => {
            let rs = root_system(&ty)?;
            let n = rs.rank();
            let given: Vec<Vec<(Vec<i64>, Option<usize>)>> = classes
                .into_iter()
                .map(|c| {
                    c.into_iter()
                        .map(|r| match r {
                            RawRoot::Plain(v) => (v, None),
                            RawRoot::WithPi { root, pi } => (root, Some(pi)),
                        })
                        .collect()
                })
                .collect();
            let all_given = given.iter().flatten().all(|(_, p)| p.is_some());
            let none_given = given.iter().flatten().all(|(_, p)| p.is_none());
            if !all_given && !none_given {
                return Err(InputError::Malformed(
                    "give pi for every active root or for none".into(),
                ));
            }
            let psi: Vec<Vec<i64>> = given.iter().flatten().map(|(r, _)| r.clone()).collect();
            if let Some(r) = psi.iter().find(|r| r.len() != n) {
                return Err(InputError::Malformed(format!(
                    "root {r:?} has {} coordinates, expected {n}",
                    r.len()
                )));
            }
            let computed = if none_given {
                ars::associated_roots(&rs, &psi)?
            } else {
                let p: Vec<usize> = given.iter().flatten().map(|(_, p)| p.unwrap()).collect();
                if let Some(&bad) = p.iter().find(|&&x| x == 0 || x > n) {
                    return Err(InputError::Malformed(format!(
                        "pi node {bad} out of range 1..={n}"
                    )));
                }
                p.into_iter().map(|x| x - 1).collect()
            };
            let mut k = 0;
            let classes: Vec<Vec<(Vec<i64>, usize)>> = given
                .iter()
                .map(|c| {
                    c.iter()
                        .map(|(r, _)| {
                            k += 1;
                            (r.clone(), computed[k - 1])
                        })
                        .collect()
                })
                .collect();
            let set = ArsSet::from_classes(rs.clone(), &classes)?;
            let e = match ker_tau {
                None => ExtendedArsSet::normalized(set, central_rank)?,
                Some(rows) => ExtendedArsSet::new(
                    set,
                    central_rank,
                    Sublattice::from_i64(n + central_rank, &rows)?,
                )?,
            };
            Ok(Document::Ars(e))
        }
        Raw::Ews {
            ty,
            central_rank,
            group_rank,
            relations,
            generators,
            central,
        } => {
            let rs = root_system(&ty)?;
            let rel = relations.iter().map(|r| big_vec(r)).collect();
            let group = FgAbelianGroup::quotient_group(group_rank, rel)?;
            let gens = generators
                .into_iter()
                .map(|g| (g.lambda, big_vec(&g.chi)))
                .collect();
            let central = central.iter().map(|c| big_vec(c)).collect();
            Ok(Document::Ews(EwsGenerators::new(
                rs,
                central_rank,
                group,
                gens,
                central,
            )?))
        }
    }
}

fn root_system(ty: &str) -> Result<Arc<RootSystem>, InputError> {
    let d = DynkinDiagram::parse(ty)?;
    Ok(luna::shared_root_system(&d))
}

/// 1-based node or color numbers to a 0-based set.
fn nodes(v: &[usize], bound: usize, field: &str) -> Result<BTreeSet<usize>, InputError> {
    let mut out = BTreeSet::new();
    for &x in v {
        if x == 0 || x > bound {
            return Err(InputError::Malformed(format!(
                "{field}: {x} is out of range 1..={bound}"
            )));
        }
        out.insert(x - 1);
    }
    Ok(out)
}

fn spherical_roots(v: &[Vec<Rational>]) -> Result<Vec<SphericalRoot>, InputError> {
    v.iter()
        .map(|r| {
            let doubled = r
                .iter()
                .map(doubled_coefficient)
                .collect::<Result<Vec<_>, _>>()?;
            Ok(SphericalRoot::from_doubled(doubled))
        })
        .collect()
}

/// `2x` for a coefficient `x` that must lie in `½Z`.
fn doubled_coefficient(x: &Rational) -> Result<i64, InputError> {
    match x {
        Rational::Int(v) => Ok(2 * v),
        Rational::Str(s) => {
            let bad = || InputError::Malformed(format!("`{s}` is not a rational p/q"));
            let (p, q) = s.split_once('/').ok_or_else(bad)?;
            let p: i64 = p.parse().map_err(|_| bad())?;
            let q: i64 = q.parse().map_err(|_| bad())?;
            if q == 0 || (2 * p) % q != 0 {
                return Err(InputError::Malformed(format!(
                    "spherical root coefficient {s} is not in Z/2"
                )));
            }
            Ok(2 * p / q)
        }
    }
}

/// A rational `d/2` as an integer or `"p/q"` in lowest terms.
fn half(d: i64) -> Value {
    if d % 2 == 0 {
        json!(d / 2)
    } else {
        json!(format!("{d}/2"))
    }
}

fn sigma_value(sigma: &[SphericalRoot]) -> Value {
    Value::Array(
        sigma
            .iter()
            .map(|s| Value::Array(s.doubled().iter().map(|&d| half(d)).collect()))
            .collect(),
    )
}

fn one_based(s: &BTreeSet<usize>) -> Vec<usize> {
    s.iter().map(|x| x + 1).collect()
}

/// Emits a system, with its distinguished subset when given.
pub fn system_value(s: &SphericalSystem, dsc: Option<&BTreeSet<usize>>) -> Value {
    let mut v = json!({
        "kind": "system",
        "type": s.root_system().diagram().to_string(),
        "pp": one_based(s.pp()),
        "sigma": sigma_value(s.sigma()),
        "colors": s.colors(),
    });
    if let Some(d) = dsc {
        v["dsc"] = json!(one_based(d));
    }
    v
}

pub fn hsd_value(h: &Hsd, dsc: Option<&BTreeSet<usize>>) -> Value {
    let mut v = json!({
        "kind": "hsd",
        "type": h.root_system().diagram().to_string(),
        "central_rank": h.central_rank(),
        "lattice": h.lattice(),
        "pp": one_based(h.pp()),
        "sigma": sigma_value(h.sigma()),
        "colors": h.colors(),
    });
    if let Some(d) = dsc {
        v["dsc"] = json!(one_based(d));
    }
    v
}

pub fn admissible_value(m: &AdmissibleMap) -> Value {
    json!({
        "kind": "admissible",
        "type": m.root_system().diagram().to_string(),
        "matrix": m.matrix(),
    })
}

pub fn ars_value(e: &ExtendedArsSet) -> Value {
    let classes: Vec<Value> = e
        .ars
        .canonical()
        .into_iter()
        .map(|c| {
            Value::Array(
                c.into_iter()
                    .map(|(root, pi)| json!({ "root": root, "pi": pi + 1 }))
                    .collect(),
            )
        })
        .collect();
    json!({
        "kind": "ars",
        "type": e.root_system().diagram().to_string(),
        "central_rank": e.central_rank,
        "classes": classes,
        "ker_tau": e.ker_tau.basis_i64(),
    })
}

pub fn ews_value(g: &EwsGenerators) -> Value {
    let gens: Vec<Value> = g
        .generators
        .iter()
        .map(|(l, x)| json!({ "lambda": l, "chi": small_vec(x).expect("character coordinates fit in i64") }))
        .collect();
    let central: Vec<Vec<i64>> = g
        .central
        .iter()
        .map(|c| small_vec(c).expect("character coordinates fit in i64"))
        .collect();
    json!({
        "kind": "ews",
        "type": g.root_system().diagram().to_string(),
        "central_rank": g.central_rank,
        "group_rank": g.group.generators(),
        "relations": g.group.relations().basis_i64(),
        "generators": gens,
        "central": central,
    })
}

pub fn to_value(d: &Document) -> Value {
    match d {
        Document::Diagram(rs) => json!({ "kind": "diagram", "type": rs.diagram().to_string() }),
        Document::System(s, dsc) => system_value(s, dsc.as_ref()),
        Document::Hsd(h, dsc) => hsd_value(h, dsc.as_ref()),
        Document::Admissible(m) => admissible_value(m),
        Document::Ars(e) => ars_value(e),
        Document::Ews(g) => ews_value(g),
    }
}

/// Canonical text: keys sorted, objects and nested arrays indented, arrays of
/// scalars on one line, trailing newline.
pub fn emit(v: &Value) -> String {
    let mut s = String::new();
    write_value(&mut s, v, 0);
    s.push('\n');
    s
}

fn is_flat(v: &Value) -> bool {
    match v {
        Value::Array(a) => a.iter().all(|x| !x.is_array() && !x.is_object()),
        Value::Object(_) => false,
        _ => true,
    }
}

fn write_value(out: &mut String, v: &Value, depth: usize) {
    let pad = |n: usize| "  ".repeat(n);
    match v {
        Value::Object(m) if !m.is_empty() => {
            out.push_str("{\n");
            for (i, (k, x)) in m.iter().enumerate() {
                out.push_str(&pad(depth + 1));
                out.push_str(&serde_json::to_string(k).expect("keys serialize"));
                out.push_str(": ");
                write_value(out, x, depth + 1);
                out.push_str(if i + 1 < m.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(depth));
            out.push('}');
        }
        Value::Array(a) if !a.is_empty() && !is_flat(v) => {
            out.push_str("[\n");
            for (i, x) in a.iter().enumerate() {
                out.push_str(&pad(depth + 1));
                write_value(out, x, depth + 1);
                out.push_str(if i + 1 < a.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(depth));
            out.push(']');
        }
        Value::Array(a) => {
            let items: Vec<String> = a
                .iter()
                .map(|x| serde_json::to_string(x).expect("values serialize"))
                .collect();
            out.push('[');
            out.push_str(&items.join(", "));
            out.push(']');
        }
        other => out.push_str(&serde_json::to_string(other).expect("values serialize")),
    }
}
