use std::process::{Command, Output};

fn nielsen(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nielsen")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn orbits_single_orbit() {
    let o = nielsen(&["orbits", "ASL(3,2)", "2B,3A,3A,3A"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).starts_with("1 orbit, length 120"), "{}", stdout(&o));
}

#[test]
fn matching_engine_reports_nodes() {
    let o = nielsen(&["orbits", "AGL(2,3)", "2A,2A,2A,2A,3A", "--engine", "matching", "--seed", "3"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.contains("1 orbit, length 216"), "{out}");
    assert!(out.contains("verdict DETERMINISTIC"), "{out}");
    assert!(out.contains("seed 3"), "{out}");
}

#[test]
fn triples_fall_back_to_classic() {
    let o = nielsen(&["orbits", "5^2:6", "2A,3B,6B", "--engine", "matching"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stderr(&o).contains("classic"));
    assert!(stdout(&o).starts_with("4 orbits, lengths 1, 1, 1, 1"), "{}", stdout(&o));
}

#[test]
fn verify_agrees() {
    let o = nielsen(&["verify", "AGL(2,3)", "2A,2A,2A,2A,3A"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).contains("ENGINES AGREE"));
}

#[test]
fn classify_degree_nine() {
    let o = nielsen(&["classify", "9"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).contains("26 components across 4 groups"), "{}", stdout(&o));
}

#[test]
fn tables_are_tab_separated() {
    let o = nielsen(&["tables", "49"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.lines().next().unwrap().starts_with('#'));
    assert!(out.lines().skip(1).all(|l| l.split('\t').count() == 5), "{out}");
}

#[test]
fn unknown_group_suggests_names() {
    let o = nielsen(&["orbits", "AGL(2,4)", "2A,2A,2A,2A"]);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert!(err.contains("unknown group"), "{err}");
    assert!(err.contains("did you mean"), "{err}");
}

#[test]
fn bad_class_label_is_a_usage_error() {
    let o = nielsen(&["orbits", "ASL(3,2)", "2B,9Z,3A,3A"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("9Z"));
}

#[test]
fn bad_level_is_a_usage_error() {
    let o = nielsen(&["orbits", "AGL(2,3)", "2A,2A,2A,2A,3A", "--engine", "matching", "--k", "5"]);
    assert_eq!(o.status.code(), Some(2), "{}", stderr(&o));
}

#[test]
fn certificates_are_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let mut bytes = Vec::new();
    for name in ["a.json", "b.json"] {
        let path = dir.path().join(name);
        let o = nielsen(&[
            "orbits",
            "AGL(2,3)",
            "2A,2A,2A,2A,3A",
            "--engine",
            "matching",
            "--seed",
            "42",
            "--certificate",
            path.to_str().unwrap(),
        ]);
        assert!(o.status.success(), "{}", stderr(&o));
        bytes.push(std::fs::read(&path).unwrap());
    }
    assert_eq!(bytes[0], bytes[1]);
    let json: serde_json::Value = serde_json::from_slice(&bytes[0]).unwrap();
    assert!(json["engine_version"].as_str().unwrap().starts_with("nielsen-"));
    assert_eq!(json["lengths"], serde_json::json!([216]));
}

#[test]
fn cache_round_trip_and_tamper_detection() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().to_str().unwrap();
    let run = || nielsen(&["orbits", "AGL(2,3)", "2A,2A,2A,2A,3A", "--engine", "matching", "--cache", cache]);
    let first = run();
    assert!(first.status.success(), "{}", stderr(&first));
    assert!(stderr(&first).contains("0 hits"), "{}", stderr(&first));
    let second = nielsen(&[
        "orbits", "AGL(2,3)", "2A,2A,2A,2A,3A", "--engine", "matching", "--cache", cache, "--verify-cache",
    ]);
    assert!(second.status.success(), "{}", stderr(&second));
    assert!(stderr(&second).contains("0 stored, 0 mismatches"), "{}", stderr(&second));

    let list = nielsen(&["cache", "list", cache]);
    assert!(list.status.success());
    assert!(stdout(&list).contains("AGL(2,3)"), "{}", stdout(&list));
    let ok = nielsen(&["cache", "verify", cache]);
    assert!(ok.status.success(), "{}", stdout(&ok));
    assert!(stdout(&ok).contains("0 mismatches"));

    // corrupt one record's payload
    let file = std::fs::read_dir(dir.path())
        .unwrap()
        .map(|e| e.unwrap().path())
        .find(|p| p.extension().is_some_and(|e| e == "json"))
        .unwrap();
    let mut rec: serde_json::Value = serde_json::from_slice(&std::fs::read(&file).unwrap()).unwrap();
    rec["payload"]["orbits"] = serde_json::json!([]);
    std::fs::write(&file, serde_json::to_vec_pretty(&rec).unwrap()).unwrap();
    let bad = nielsen(&["cache", "verify", cache]);
    assert_eq!(bad.status.code(), Some(1));
    assert!(stdout(&bad).contains("MISMATCH"), "{}", stdout(&bad));
}
