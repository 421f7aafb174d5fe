use std::collections::BTreeMap;
use std::sync::Arc;

use dgker::category::{mor_category, path_object, DgCategory, DgFunctor};
use dgker::corpus;
use dgker::io::{parse, report_schema, serialize, Check, Document, NoReferences, Payload, Report};
use dgker::linalg::Field;
use dgker::module::{module_hom_complex, DgModule, NatTransform};
use dgker::{Error, Verdict};

const F2: Field = Field::F2;
const Q: Field = Field::Rational;

fn round_trip(doc: &Document, resolver: &BTreeMap<String, Document>) {
    let text = serialize(doc);
    let back = parse(&text, resolver).unwrap_or_else(|e| panic!("{e}\n{text}"));
    assert_eq!(&back, doc);
    assert_eq!(serialize(&back), text);
}

/// Every kind of payload built from the bundled corpus.
fn corpus_documents(field: Field) -> Vec<(String, Document)> {
    let mut out = Vec::new();
    for (name, c) in corpus::categories(field) {
        let c = Arc::new(c);
        out.push((
            name.to_string(),
            Document::new(Payload::Category(c.clone())),
        ));
        out.push((
            format!("{name}^op"),
            Document::new(Payload::Category(Arc::new(c.opposite()))),
        ));
        for (_, m) in corpus::module_battery(&c) {
            let m = Arc::new(m);
            out.push((
                format!("module over {name}"),
                Document::new(Payload::Module(m.clone())),
            ));
            out.push((
                format!("id over {name}"),
                Document::new(Payload::Transformation(NatTransform::identity(&m))),
            ));
        }
    }
    let a2 = Arc::new(corpus::a2(field));
    out.push((
        "A2⊗A2".into(),
        Document::new(Payload::Category(Arc::new(
            DgCategory::tensor(&a2, &a2).unwrap(),
        ))),
    ));
    out.push((
        "Mor(A2)".into(),
        Document::new(Payload::Category(Arc::new(mor_category(&a2).unwrap().0))),
    ));
    let p = path_object(&a2).unwrap();
    out.push((
        "P(A2)".into(),
        Document::new(Payload::Category(p.category.clone())),
    ));
    out.push((
        "iota".into(),
        Document::new(Payload::Functor(p.iota.clone())),
    ));
    out.push((
        "(s,t)".into(),
        Document::new(Payload::Functor(p.source_target.clone())),
    ));
    out.push((
        "collapse".into(),
        Document::new(Payload::Functor(corpus::collapse_a2(field))),
    ));
    for (name, k) in corpus::kernels(field) {
        out.push((name, Document::new(Payload::Kernel(k))));
    }
    // a non-identity transformation with nonzero components in several degrees
    let c = Arc::new(corpus::contractible_arrow(field));
    let (hx, hy) = (
        Arc::new(DgModule::yoneda(&c, 0).unwrap()),
        Arc::new(DgModule::yoneda(&c, 1).unwrap()),
    );
    let h = module_hom_complex(&hx, &hy).unwrap();
    for i in 0..h.dim() {
        out.push((
            format!("hom element {i}"),
            Document::new(Payload::Transformation(h.transform(i))),
        ));
    }
    out
}

#[test]
fn corpus_round_trips_bit_exactly() {
    for field in [F2, Field::Prime(3), Q] {
        for (name, doc) in corpus_documents(field) {
            let text = serialize(&doc);
            let back = parse(&text, &NoReferences).unwrap_or_else(|e| panic!("{name}: {e}"));
            assert_eq!(back, doc, "{name} over {field}");
            assert_eq!(serialize(&back), text, "{name} over {field}");
        }
    }
}

#[test]
fn references_serialize_by_name() {
    let a2 = Arc::new(corpus::a2(Q));
    let cat = Document::new(Payload::Category(a2.clone()));
    let mut store = BTreeMap::new();
    store.insert("A2.dg".to_string(), cat.clone());
    let m = Arc::new(DgModule::yoneda(&a2, 1).unwrap());
    let doc =
        Document::new(Payload::Module(m.clone())).with_reference("A", "A2.dg", cat.payload.clone());
    let text = serialize(&doc);
    assert!(text.contains("\"ref\": \"A\""));
    round_trip(&doc, &store);
    // a module document referencing the module, inside a transformation
    store.insert("hy.dg".to_string(), doc.clone());
    let t = Document::new(Payload::Transformation(NatTransform::identity(&m))).with_reference(
        "M",
        "hy.dg",
        Payload::Module(m),
    );
    round_trip(&t, &store);
}

#[test]
fn dangling_reference_is_named() {
    let text = r#"{"version": 1, "field": "Q", "kind": "module",
        "payload": {"base": {"ref": "Missing"}, "values": {}, "actions": []}}"#;
    assert_eq!(
        parse(text, &NoReferences),
        Err(Error::DanglingReference("Missing".into()))
    );
    let text = r#"{"version": 1, "field": "Q", "kind": "module", "references": {"B": "nowhere.dg"},
        "payload": {"base": {"ref": "B"}, "values": {}, "actions": []}}"#;
    assert_eq!(
        parse(text, &NoReferences),
        Err(Error::DanglingReference("B".into()))
    );
}

#[test]
fn unknown_version_and_field_mismatch() {
    let text = serialize(&Document::new(Payload::Category(Arc::new(corpus::a2(Q)))));
    let v2 = text.replace("\"version\": 1", "\"version\": 2");
    assert_eq!(parse(&v2, &NoReferences), Err(Error::UnknownVersion(2)));

    let mut store = BTreeMap::new();
    store.insert(
        "A2.dg".to_string(),
        Document::new(Payload::Category(Arc::new(corpus::a2(F2)))),
    );
    let text = r#"{"version": 1, "field": "Q", "kind": "module", "references": {"A": "A2.dg"},
        "payload": {"base": {"ref": "A"}, "values": {}, "actions": []}}"#;
    assert_eq!(
        parse(text, &store),
        Err(Error::FieldMismatch {
            expected: Q,
            found: F2
        })
    );
}

#[test]
fn syntax_errors_carry_positions() {
    let text = "{\n  \"version\": 1,\n  \"field\": \"Q\",,\n}";
    match parse(text, &NoReferences) {
        Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
        other => panic!("{other:?}"),
    }
    let text = serialize(&Document::new(Payload::Category(Arc::new(corpus::a2(Q)))));
    let bad = text.replace("\"inner\": \"a\"", "\"inner\": \"nope\"");
    match parse(&bad, &NoReferences) {
        Err(Error::Parse {
            line,
            column,
            message,
        }) => {
            assert!(message.contains("nope"));
            let at = bad.lines().nth(line - 1).unwrap();
            assert!(at[column - 1..].starts_with("\"nope\""), "{at}");
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn broken_differential_parses_but_fails_validation() {
    let text = r#"{"version": 1, "field": "Q", "kind": "module",
        "payload": {
          "base": {"objects": ["*"], "homs": [{"source": "*", "target": "*", "basis": [["id", 0]]}],
                   "composition": [{"source": "*", "middle": "*", "target": "*", "outer": "id", "inner": "id", "value": {"id": "1"}}],
                   "units": {"*": {"id": "1"}}},
          "values": {"*": {"degrees": [0, 1, 2], "d": [[1, 0, "1"], [2, 1, "1"]]}},
          "actions": [{"source": "*", "target": "*", "morphism": "id", "matrix": [[0, 0, "1"], [1, 1, "1"], [2, 2, "1"]]}]
        }}"#;
    let doc = parse(text, &NoReferences).unwrap();
    assert!(!doc.module().unwrap().is_valid());
}

#[test]
fn rational_scalars_survive() {
    let text = r#"{"version": 1, "field": "Q", "kind": "category",
        "payload": {"objects": ["*"], "homs": [{"source": "*", "target": "*", "basis": [["id", 0]]}],
                    "composition": [{"source": "*", "middle": "*", "target": "*", "outer": "id", "inner": "id", "value": {"id": "-3/6"}}],
                    "units": {"*": {"id": "-2"}}}}"#;
    let doc = parse(text, &NoReferences).unwrap();
    let out = serialize(&doc);
    assert!(out.contains("\"-1/2\"") && out.contains("\"-2\""));
    // u = -2·id is a unit for the product id∘id = -1/2·id
    assert!(doc.category().unwrap().is_valid());
}

#[test]
fn mutation_battery_names_each_identity() {
    let mutants = corpus::mutants();
    assert!(mutants.len() >= 10);
    for m in mutants {
        assert!(!m.report.passed(), "{} passed validation", m.name);
        assert!(
            m.report.violates(m.expected),
            "{}: expected {} in {}",
            m.name,
            m.expected,
            m.report
        );
    }
}

#[test]
fn reports_are_deterministic_and_consistent() {
    let checks = vec![
        Check::from_bool("a", true, serde_json::Value::Null),
        Check::new("b", Verdict::Unknown, serde_json::json!({"examined": 3})),
    ];
    let r = Report::new("demo", checks.clone(), serde_json::Value::Null);
    assert_eq!(r.verdict, Verdict::Unknown);
    assert_eq!(r.exit_code, 2);
    assert_eq!(
        r.to_json(),
        Report::new("demo", checks.clone(), serde_json::Value::Null).to_json()
    );
    let mut failing = checks;
    failing.push(Check::from_bool("c", false, serde_json::Value::Null));
    assert_eq!(
        Report::new("demo", failing, serde_json::Value::Null).exit_code,
        1
    );
    let schema: serde_json::Value = serde_json::from_str(report_schema()).unwrap();
    let validator = jsonschema::validator_for(&schema).unwrap();
    assert!(validator.is_valid(&serde_json::from_str(&r.to_json()).unwrap()));
    assert!(!validator.is_valid(&serde_json::json!({"command": "x"})));
}

#[test]
fn functor_documents_keep_the_object_map() {
    let f = corpus::collapse_a2(F2);
    let doc = Document::new(Payload::Functor(f.clone()));
    let back = parse(&serialize(&doc), &NoReferences).unwrap();
    let g: &DgFunctor = back.functor().unwrap();
    assert_eq!(g.object_map, vec![0, 0]);
    assert!(g.is_valid());
}
