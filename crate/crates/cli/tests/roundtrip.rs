use std::collections::BTreeSet;

use spherica::ars;
use spherica::enumerate::enumerate_systems;
use spherica::enumerate::EnumerateOptions;
use spherica::ews;
use spherica::luna;
use spherica::rootsys::DynkinDiagram;
use spherica_cli::document::{self, Document};

/// Structural equality of two documents; generator lists compare by their
/// canonical text since they carry a presented group.
fn same(a: &Document, b: &Document) -> bool {
    match (a, b) {
        (Document::Diagram(x), Document::Diagram(y)) => x.diagram() == y.diagram(),
        (Document::System(x, dx), Document::System(y, dy)) => x == y && dx == dy,
        (Document::Hsd(x, dx), Document::Hsd(y, dy)) => x == y && dx == dy,
        (Document::Admissible(x), Document::Admissible(y)) => x == y,
        (Document::Ars(x), Document::Ars(y)) => x == y,
        (Document::Ews(_), Document::Ews(_)) => {
            document::emit(&document::to_value(a)) == document::emit(&document::to_value(b))
        }
        _ => false,
    }
}

fn assert_roundtrip(doc: &Document) {
    let text = document::emit(&document::to_value(doc));
    let back = document::parse_document(&text).unwrap_or_else(|e| panic!("{e}\n{text}"));
    assert!(same(doc, &back), "parse(emit(x)) != x for\n{text}");
    assert_eq!(document::emit(&document::to_value(&back)), text);
}

fn all_documents() -> Vec<Document> {
    let mut docs = Vec::new();
    for ty in ["A1", "A1xA1", "A2", "B2", "G2", "A3", "B3", "C3"] {
        let d = DynkinDiagram::parse(ty).unwrap();
        docs.push(Document::Diagram(luna::shared_root_system(&d)));
        let opts = EnumerateOptions {
            cuspidal_only: !matches!(ty, "A2" | "B2"),
            rank_bound: 4,
            parallel: true,
        };
        for rec in enumerate_systems(&d, opts).unwrap() {
            for w in &rec.witnesses {
                docs.push(Document::System(rec.system.clone(), Some(w.dsc.clone())));
                docs.push(Document::Admissible(w.map.clone()));
                let (_, e) = ars::ars_from_admissible(&w.map).unwrap();
                let h = ars::hsd_from_ars(&e).unwrap();
                let d = (!h.colors().is_empty()).then(|| BTreeSet::from([0]));
                docs.push(Document::Hsd(h.clone(), d));
                docs.push(Document::Ews(ews::ews_generators_from_ars(&e).unwrap()));
                docs.push(Document::Ews(ews::ews_generators_from_hsd(&h).unwrap()));
                docs.push(Document::Ars(e));
            }
        }
    }
    docs.push(Document::Ews(ews::sl2_cubed_example().unwrap()));
    docs
}

#[test]
fn every_domain_object_roundtrips() {
    let docs = all_documents();
    assert!(docs.len() > 200);
    for d in &docs {
        assert_roundtrip(d);
    }
}

#[test]
fn emitted_keys_are_sorted() {
    for d in all_documents().iter().take(40) {
        let text = document::emit(&document::to_value(d));
        let keys: Vec<&str> = text
            .lines()
            .filter(|l| l.starts_with("  \"") && !l.starts_with("   "))
            .map(|l| l.trim().split('"').nth(1).unwrap())
            .collect();
        let mut sorted = keys.clone();
        sorted.sort();
        assert_eq!(keys, sorted, "{text}");
    }
}

#[test]
fn half_integral_coefficients_use_rational_strings() {
    let text = r#"{"kind":"system","type":"B2","sigma":[["1/2","2/4"]],"colors":[]}"#;
    let doc = document::parse_document(text).unwrap();
    let out = document::emit(&document::to_value(&doc));
    assert!(out.contains(r#"["1/2", "1/2"]"#), "{out}");
    assert!(document::parse_document(
        r#"{"kind":"system","type":"B2","sigma":[["1/3",0]],"colors":[]}"#
    )
    .is_err());
}

#[test]
fn shipped_schema_rejects_unknown_fields_and_kinds() {
    for bad in [
        r#"{"kind":"admissible","type":"A2","matrix":[[1]],"extra":1}"#,
        r#"{"kind":"fan","type":"A2"}"#,
        r#"{"type":"A2"}"#,
        r#"{"kind":"system","type":"A2","sigma":[[1.5,0]],"colors":[]}"#,
        r#"{"kind":"ars","type":"A2","classes":[[]]}"#,
    ] {
        let e = document::parse_document(bad).unwrap_err();
        assert!(matches!(e, document::InputError::Schema(_)), "{bad}: {e}");
    }
}
