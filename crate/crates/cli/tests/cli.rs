use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_spherica"));
    c.env_remove("SPHERICA_RANK_BOUND");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8 output")
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).expect("utf-8 output")
}

fn example(name: &str) -> String {
    let mut p = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    p.extend(["..", "..", "docs", "examples", name]);
    p.to_string_lossy().into_owned()
}

fn examples() -> Vec<PathBuf> {
    let mut dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    dir.extend(["..", "..", "docs", "examples"]);
    let mut v: Vec<PathBuf> = std::fs::read_dir(dir)
        .expect("docs/examples exists")
        .map(|e| e.expect("entry").path())
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    v.sort();
    v
}

#[test]
fn check_admissible_inline_matrix_passes() {
    let o = run(&[
        "check",
        "admissible",
        "--type",
        "A2",
        "--matrix",
        "[[1,0],[0,1]]",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    for axiom in ["AM1", "AM2", "AM3", "AM4", "AM5"] {
        assert!(out.contains(&format!("{axiom}: pass")), "{out}");
    }
}

#[test]
fn system_to_admissible_with_distinguished_subset() {
    let o = run(&[
        "convert",
        "system-to-admissible",
        "--dsc",
        "1,4",
        "--input",
        &example("table4sys1.json"),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["kind"], "admissible");
    assert_eq!(v["matrix"], serde_json::json!([[1, 0], [-1, 1]]));
}

#[test]
fn a3_table_lists_eight_cuspidal_systems() {
    let o = run(&[
        "enumerate",
        "--type",
        "A3",
        "--cuspidal",
        "--format",
        "table",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.starts_with("| No. | D^a | DSC | Admissible map | Active roots |"));
    let numbered: Vec<&str> = out
        .lines()
        .skip(2)
        .filter_map(|l| l.split('|').nth(1))
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .collect();
    assert_eq!(numbered, ["1", "2", "3", "4", "5", "6", "7", "8"]);
    assert_eq!(stdout(&run(&["emit-table", "--type", "A3"])), out);
}

#[test]
fn cuspidal_record_counts() {
    for (ty, n) in [
        ("A1", 1),
        ("A1xA1", 2),
        ("A2", 2),
        ("B2", 3),
        ("G2", 3),
        ("A3", 8),
    ] {
        let o = run(&["enumerate", "--type", ty, "--cuspidal"]);
        assert_eq!(o.status.code(), Some(0));
        let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
        assert_eq!(v["records"].as_array().unwrap().len(), n, "{ty}");
    }
}

#[test]
fn every_table_example_is_a_listed_system() {
    for (table, ty, count) in [
        (3, "A1xA1", 2),
        (4, "A2", 2),
        (5, "B2", 3),
        (6, "G2", 3),
        (7, "A3", 8),
    ] {
        let v: Value =
            serde_json::from_str(&stdout(&run(&["enumerate", "--type", ty, "--cuspidal"])))
                .unwrap();
        let mut listed: Vec<Vec<Value>> = v["records"]
            .as_array()
            .unwrap()
            .iter()
            .map(|r| r["system"]["colors"].as_array().unwrap().clone())
            .collect();
        for rows in listed.iter_mut() {
            rows.sort_by_key(|r| r.to_string());
        }
        for k in 1..=count {
            let doc: Value = serde_json::from_str(
                &std::fs::read_to_string(example(&format!("table{table}sys{k}.json"))).unwrap(),
            )
            .unwrap();
            let mut rows = doc["colors"].as_array().unwrap().clone();
            rows.sort_by_key(|r| r.to_string());
            assert!(
                listed.contains(&rows),
                "table{table}sys{k} not enumerated for {ty}"
            );
        }
    }
}

#[test]
fn invalid_admissible_map_exits_one_with_report() {
    let o = run(&[
        "check",
        "admissible",
        "--type",
        "A2",
        "--matrix",
        "[[1,-1],[-1,1]]",
    ]);
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    assert!(out.contains("FAIL"), "{out}");
    assert!(out.contains("AM1: pass") || out.contains("AM1: FAIL"));
}

#[test]
fn json_report_lists_every_axiom() {
    let o = run(&[
        "check",
        "--input",
        &example("table7sys3.json"),
        "--format",
        "json",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["valid"], true);
    assert!(v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .all(|c| c["passed"] == true));
}

#[test]
fn malformed_inputs_exit_two_with_distinct_messages() {
    let cases: [(&[&str], &str); 5] = [
        (&["check", "--input", "{not json"], "malformed JSON"),
        (
            &["check", "--input", r#"{"kind":"admissible","type":"A2"}"#],
            "schema violation",
        ),
        (
            &["check", "--input", r#"{"kind":"diagram","type":"H3"}"#],
            "unknown Dynkin type",
        ),
        (
            &["enumerate", "--type", "A5"],
            "exceeds the enumeration bound",
        ),
        (
            &["check", "admissible", "--type", "A2", "--matrix", "[[1,0]]"],
            "malformed input",
        ),
    ];
    let mut seen = Vec::new();
    for (args, message) in cases {
        let o = run(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        let err = stderr(&o);
        assert!(err.contains(message), "{args:?}: {err}");
        seen.push(err);
    }
    seen.dedup();
    assert_eq!(seen.len(), 5);
}

#[test]
fn rank_bound_follows_flag_and_environment() {
    let o = bin()
        .args(["enumerate", "--type", "A3", "--cuspidal"])
        .env("SPHERICA_RANK_BOUND", "2")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("rank 3 exceeds the enumeration bound 2"));
    let o = run(&[
        "enumerate",
        "--type",
        "A2",
        "--cuspidal",
        "--rank-bound",
        "1",
    ]);
    assert_eq!(o.status.code(), Some(2));
    let o = bin()
        .args([
            "enumerate",
            "--type",
            "A3",
            "--cuspidal",
            "--rank-bound",
            "3",
        ])
        .env("SPHERICA_RANK_BOUND", "2")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn output_is_byte_deterministic() {
    for args in [
        &["enumerate", "--type", "B2"][..],
        &[
            "enumerate",
            "--type",
            "A3",
            "--cuspidal",
            "--format",
            "table",
        ][..],
        &["ews", "--example", "sl2-cubed"][..],
    ] {
        let a = run(args).stdout;
        let b = run(args).stdout;
        assert_eq!(a, b, "{args:?}");
    }
    let serial = run(&["enumerate", "--type", "A3"]).stdout;
    let parallel = run(&["enumerate", "--type", "A3", "--parallel"]).stdout;
    assert_eq!(serial, parallel);
}

#[test]
fn every_shipped_example_validates() {
    for p in examples() {
        let o = run(&["check", "--input", &p.to_string_lossy()]);
        assert_eq!(
            o.status.code(),
            Some(0),
            "{}: {}{}",
            p.display(),
            stdout(&o),
            stderr(&o)
        );
    }
}

#[test]
fn conversion_chain_through_every_kind() {
    let dir = std::env::temp_dir().join(format!("spherica-chain-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let step = |conv: &str, input: &str, out: &str, extra: &[&str]| {
        let mut args = vec!["convert", conv, "--input", input];
        args.extend_from_slice(extra);
        let o = run(&args);
        assert_eq!(o.status.code(), Some(0), "{conv}: {}", stderr(&o));
        let path = dir.join(out);
        std::fs::write(&path, &o.stdout).unwrap();
        path.to_string_lossy().into_owned()
    };
    let adm = step(
        "system-to-admissible",
        &example("table7sys4.json"),
        "adm.json",
        &["--dsc", "1,4"],
    );
    let sys = step("admissible-to-system", &adm, "sys.json", &[]);
    assert_eq!(
        std::fs::read_to_string(step("system-to-admissible", &sys, "adm2.json", &[])).unwrap(),
        std::fs::read_to_string(&adm).unwrap()
    );
    let ars = step("admissible-to-ars", &adm, "ars.json", &[]);
    assert_eq!(
        std::fs::read_to_string(step("ars-to-admissible", &ars, "adm3.json", &[])).unwrap(),
        std::fs::read_to_string(&adm).unwrap()
    );
    let hsd = step("ars-to-hsd", &ars, "hsd.json", &[]);
    assert_eq!(
        std::fs::read_to_string(step("hsd-to-ars", &hsd, "ars2.json", &[])).unwrap(),
        std::fs::read_to_string(&ars).unwrap()
    );
    let ews = step("ars-to-ews", &ars, "ews.json", &[]);
    let back = step("ews-to-hsd", &ews, "hsd2.json", &[]);
    let canon = |p: &str| {
        let o = run(&["convert", "hsd-to-system", "--input", p]);
        let mut v: Value = serde_json::from_str(&stdout(&o)).unwrap();
        let rows = v["colors"].as_array_mut().unwrap();
        rows.sort_by_key(|r| r.to_string());
        v["colors"].clone()
    };
    assert_eq!(canon(&back), canon(&hsd));
    let fan = step("admissible-to-fan", &adm, "fan.json", &[]);
    let f: Value = serde_json::from_str(&std::fs::read_to_string(fan).unwrap()).unwrap();
    assert_eq!(f["complete"], true);
    assert_eq!(f["regular"], true);
    assert_eq!(
        f["cones"].as_array().unwrap().len() as u64,
        f["expected_cones"].as_u64().unwrap()
    );
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn wrong_kind_and_missing_subset_are_input_errors() {
    let o = run(&[
        "convert",
        "ars-to-hsd",
        "--input",
        &example("table4sys1.json"),
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(
        stderr(&o).contains("ars-to-hsd needs a document of kind ars, found system"),
        "{}",
        stderr(&o)
    );
    let o = run(&[
        "convert",
        "system-to-admissible",
        "--input",
        &example("table4sys1.json"),
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("distinguished subset is required"));
}

#[test]
fn non_witness_subset_fails_validation() {
    let o = run(&[
        "convert",
        "system-to-admissible",
        "--dsc",
        "1,2,3",
        "--input",
        &example("table4sys1.json"),
    ]);
    assert_eq!(o.status.code(), Some(1), "{}", stderr(&o));
}
