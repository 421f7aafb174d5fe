use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::sync::Arc;

use dgker::category::DgFunctor;
use dgker::corpus;
use dgker::io::{report_schema, serialize, Document, Payload};
use dgker::linalg::{Field, Matrix};
use dgker::module::DgModule;
use serde_json::Value;
use tempfile::TempDir;

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn dgker(args: &[&str]) -> Run {
    dgker_env(args, None)
}

fn dgker_env(args: &[&str], field: Option<&str>) -> Run {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_dgker"));
    cmd.args(args).env_remove("DGKER_FIELD");
    if let Some(f) = field {
        cmd.env("DGKER_FIELD", f);
    }
    let out = cmd.output().expect("binary runs");
    Run {
        code: out.status.code().expect("exit code"),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

fn corpus_dir(field: &str) -> TempDir {
    let dir = tempfile::tempdir().unwrap();
    let run = dgker(&[
        "export-corpus",
        dir.path().to_str().unwrap(),
        "--field",
        field,
    ]);
    assert_eq!(run.code, 0, "{}", run.stderr);
    dir
}

fn p(dir: &TempDir, file: &str) -> String {
    dir.path().join(file).display().to_string()
}

fn write(dir: &Path, name: &str, payload: Payload) -> String {
    let path: PathBuf = dir.join(name);
    fs::write(&path, serialize(&Document::new(payload))).unwrap();
    path.display().to_string()
}

#[test]
fn validate_exits_zero_on_bundled_files() {
    let dir = corpus_dir("F2");
    for entry in fs::read_dir(dir.path()).unwrap() {
        let path = entry.unwrap().path();
        let run = dgker(&["validate", path.to_str().unwrap()]);
        assert_eq!(
            run.code,
            0,
            "{}: {}{}",
            path.display(),
            run.stdout,
            run.stderr
        );
    }
}

#[test]
fn compose_then_validate_pipeline() {
    let dir = corpus_dir("F3");
    let out = p(&dir, "E12.dg");
    let run = dgker(&[
        "compose-kernels",
        &p(&dir, "kernel.incl_x_A2.dg"),
        &p(&dir, "kernel.unit_A2.dg"),
        "--out",
        &out,
    ]);
    assert_eq!(run.code, 0, "{}{}", run.stdout, run.stderr);
    assert!(run.stdout.contains("written"));
    let run = dgker(&["validate", &out]);
    assert_eq!(run.code, 0, "{}", run.stdout);
}

#[test]
fn failing_and_undecided_verdicts_have_their_own_codes() {
    let dir = corpus_dir("F2");
    let run = dgker(&["heq-modules", &p(&dir, "A2.h_x.dg"), &p(&dir, "A2.h_y.dg")]);
    assert_eq!(run.code, 1, "{}", run.stdout);
    assert!(run.stdout.contains("FAIL"));

    let run = dgker(&["check-qe", &p(&dir, "collapse_A2.dg")]);
    assert_eq!(run.code, 1);

    // over Q the split module cannot be ruled out by a bounded search
    let tmp = tempfile::tempdir().unwrap();
    let q = Field::Rational;
    let a = Arc::new(corpus::a2(q));
    let hy = DgModule::yoneda(&a, 1).unwrap();
    let split = hy.with_action(0, 1, 0, Matrix::zeros(q, 1, 1)).unwrap();
    let f1 = write(tmp.path(), "hy.dg", Payload::Module(Arc::new(hy)));
    let f2 = write(tmp.path(), "split.dg", Payload::Module(Arc::new(split)));
    let run = dgker(&["heq-modules", &f1, &f2, "--seed", "7", "--budget", "16"]);
    assert_eq!(run.code, 2, "{}", run.stdout);
    assert!(run.stdout.contains("unknown"));
}

#[test]
fn usage_and_input_errors_exit_three() {
    let dir = corpus_dir("F2");
    assert_eq!(dgker(&["validate", &p(&dir, "missing.dg")]).code, 3);
    assert_eq!(dgker(&["no-such-command"]).code, 3);
    assert_eq!(
        dgker(&["validate", &p(&dir, "A2.dg"), "--field", "Q"]).code,
        3
    );
    assert_eq!(
        dgker(&["validate", &p(&dir, "A2.dg"), "--field", "F4"]).code,
        3
    );
    assert_eq!(dgker(&["harness", "--suite", "nothing"]).code, 3);
    assert_eq!(dgker(&["yoneda", &p(&dir, "A2.dg"), "w"]).code, 3);
    assert_eq!(dgker(&["--help"]).code, 0);

    let dangling = p(&dir, "dangling.dg");
    fs::write(
        &dangling,
        r#"{"version": 1, "field": "F2", "kind": "module", "references": {"B": "nowhere.dg"},
            "payload": {"base": {"ref": "B"}, "values": {}, "actions": []}}"#,
    )
    .unwrap();
    let run = dgker(&["validate", &dangling]);
    assert_eq!(run.code, 3);
    assert!(run.stderr.contains('B'), "{}", run.stderr);

    let broken = p(&dir, "broken.dg");
    fs::write(&broken, "{\"version\": 1,\n \"field\": }").unwrap();
    let run = dgker(&["validate", &broken]);
    assert_eq!(run.code, 3);
    assert!(run.stderr.contains("line 2"), "{}", run.stderr);
}

#[test]
fn references_resolve_relative_to_the_document() {
    let dir = corpus_dir("F2");
    let module = p(&dir, "by-ref.dg");
    fs::write(
        &module,
        r#"{"version": 1, "field": "F2", "kind": "module", "references": {"A": "A2.dg"},
            "payload": {"base": {"ref": "A"}, "values": {"x": {"degrees": [0]}, "y": {"degrees": []}},
                        "actions": [{"source": "x", "target": "x", "morphism": "id_x", "matrix": [[0, 0, "1"]]}]}}"#,
    )
    .unwrap();
    let run = dgker(&["validate", &module]);
    assert_eq!(run.code, 0, "{}{}", run.stdout, run.stderr);
}

#[test]
fn environment_sets_the_default_field() {
    let dir = corpus_dir("F2");
    let a2 = p(&dir, "A2.dg");
    assert_eq!(dgker_env(&["validate", &a2], Some("F2")).code, 0);
    assert_eq!(dgker_env(&["validate", &a2], Some("Q")).code, 3);
    assert_eq!(
        dgker_env(&["validate", &a2, "--field", "Fp:2"], Some("Q")).code,
        0
    );
}

#[test]
fn json_reports_match_the_schema_and_repeat_exactly() {
    let dir = corpus_dir("F2");
    let schema: Value = serde_json::from_str(report_schema()).unwrap();
    let validator = jsonschema::validator_for(&schema).unwrap();
    let commands: Vec<Vec<String>> = vec![
        vec!["validate".into(), p(&dir, "A3.dg")],
        vec!["mor".into(), p(&dir, "A2.dg")],
        vec!["essim".into(), p(&dir, "A2.S_y.dg")],
        vec!["rqr-check".into(), p(&dir, "kernel.collapse_A2_K.dg")],
        vec!["uncurry".into(), p(&dir, "kernel.unit_dual__1.dg")],
        vec![
            "check-adjunction".into(),
            p(&dir, "kernel.unit_A2.dg"),
            p(&dir, "A2.h_x.dg"),
            p(&dir, "A2.S_y.dg"),
        ],
    ];
    for args in commands {
        let mut args: Vec<&str> = args.iter().map(String::as_str).collect();
        args.push("--json");
        let first = dgker(&args);
        let second = dgker(&args);
        assert_eq!(first.stdout, second.stdout, "{args:?}");
        let v: Value = serde_json::from_str(&first.stdout).unwrap();
        assert!(validator.is_valid(&v), "{args:?}");
        assert_eq!(v["exit_code"].as_i64(), Some(first.code as i64));
    }
}

#[test]
fn bar_resolution_certificates_round_trip_through_files() {
    let dir = corpus_dir("F2");
    let cert = p(&dir, "cert.json");
    let resolved = p(&dir, "resolved.dg");
    let run = dgker(&[
        "bar-resolve",
        &p(&dir, "A3.h_z.dg"),
        "--out",
        &resolved,
        "--certificate-out",
        &cert,
    ]);
    assert_eq!(run.code, 0, "{}", run.stdout);
    assert_eq!(
        dgker(&["semifree-check", &resolved, "--certificate", &cert]).code,
        0
    );

    let mut v: Value = serde_json::from_str(&fs::read_to_string(&cert).unwrap()).unwrap();
    let degree = v["generators"][0]["degree"].as_i64().unwrap();
    v["generators"][0]["degree"] = (degree + 1).into();
    fs::write(&cert, v.to_string()).unwrap();
    assert_eq!(
        dgker(&["semifree-check", &resolved, "--certificate", &cert]).code,
        1
    );

    fs::write(&cert, "{\"generators\": 3}").unwrap();
    assert_eq!(
        dgker(&["semifree-check", &resolved, "--certificate", &cert]).code,
        3
    );
}

#[test]
fn standard_homotopy_from_the_command_line() {
    let field = Field::F2;
    let tmp = tempfile::tempdir().unwrap();
    let k = Arc::new(corpus::unit(field));
    let pick = |b: &Arc<dgker::category::DgCategory>, x: usize| {
        DgFunctor::new(
            k.clone(),
            b.clone(),
            vec![x],
            vec![Matrix::identity(field, 1)],
        )
        .unwrap()
    };
    let i = Arc::new(corpus::iso_arrow(field));
    let fx = write(tmp.path(), "fx.dg", Payload::Functor(pick(&i, 0)));
    let fy = write(tmp.path(), "fy.dg", Payload::Functor(pick(&i, 1)));
    let run = dgker(&[
        "standard-homotopy",
        &fx,
        &fy,
        "--alpha",
        r#"{"*": {"u": "1"}}"#,
    ]);
    assert_eq!(run.code, 0, "{}{}", run.stdout, run.stderr);

    let a = Arc::new(corpus::a2(field));
    let gx = write(tmp.path(), "gx.dg", Payload::Functor(pick(&a, 0)));
    let gy = write(tmp.path(), "gy.dg", Payload::Functor(pick(&a, 1)));
    let run = dgker(&[
        "standard-homotopy",
        &gx,
        &gy,
        "--alpha",
        r#"{"*": {"a": "1"}}"#,
    ]);
    assert_eq!(run.code, 1, "{}", run.stdout);
    assert_eq!(
        dgker(&[
            "standard-homotopy",
            &gx,
            &gy,
            "--alpha",
            r#"{"*": {"b": "1"}}"#
        ])
        .code,
        3
    );
}

#[test]
fn module_tensor_and_induced_modules() {
    let field = Field::Prime(5);
    let tmp = tempfile::tempdir().unwrap();
    let a = Arc::new(corpus::a2(field));
    let op = Arc::new(a.opposite());
    let m = write(
        tmp.path(),
        "m.dg",
        Payload::Module(Arc::new(DgModule::yoneda(&a, 1).unwrap())),
    );
    let n = write(
        tmp.path(),
        "n.dg",
        Payload::Module(Arc::new(DgModule::yoneda(&op, 0).unwrap())),
    );
    let run = dgker(&["tensor-mod", &m, &n, "--json"]);
    assert_eq!(run.code, 0, "{}{}", run.stdout, run.stderr);
    // h^y ⊗ h_x evaluates to hom(x, y), one-dimensional in degree 0
    let v: Value = serde_json::from_str(&run.stdout).unwrap();
    assert_eq!(v["data"]["dims"], serde_json::json!({"0": 1}));

    let collapse = write(
        tmp.path(),
        "collapse.dg",
        Payload::Functor(corpus::collapse_a2(field)),
    );
    assert_eq!(dgker(&["ind", &collapse, &m]).code, 0);
    assert_eq!(dgker(&["external-tensor", &m, &m]).code, 0);
    assert_eq!(dgker(&["check-fibration", &collapse]).code, 1);
}

#[test]
fn harness_runs_from_the_command_line() {
    let run = dgker(&["harness", "--suite", "acceptance", "--field", "F2"]);
    assert_eq!(run.code, 0, "{}", run.stdout);
    assert_eq!(
        run.stdout.lines().filter(|l| l.contains("[pass]")).count(),
        15
    );
}
