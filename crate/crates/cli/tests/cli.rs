use std::fs;
use std::path::Path;
use std::process::{Command, Output};

const QUX: &str = "GGCACAGAAGAUAUGGCUUCGUGCC";
const FIVE_S: &str = "UGCCUGGCGGCCGUAGCGCGGUGGUCCCACCUGACCCCAUGCCGAACUCAGAAGUGAAACGCCGUAGCGCCGAUGGUAGUGUGGGGUCUCCCCAUGCGAGAGUAGGGAACUGCCAGGCAU";

fn stemp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_stemp"))
        .args(args)
        .env_remove("STEMP_PROFILE_DIR")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

fn qux_ct() -> String {
    let core = Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/tests/fixtures/2qux.ct");
    fs::read_to_string(core).unwrap()
}

#[test]
fn predict_qux() {
    let dir = tempfile::tempdir().unwrap();
    let fa = write(dir.path(), "q.fa", &format!(">2QUX\n{QUX}\n"));
    let graph = dir.path().join("g.txt");
    let o = stemp(&[
        "predict",
        &fa,
        "--profile",
        "protein",
        "--dump-graph",
        graph.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let out = stdout(&o);
    assert!(out.contains("cliques=7"), "{out}");
    assert!(out.contains("(((((.((((......)))))))))"), "{out}");
    assert!(out.contains("energy=9"), "{out}");
    let dump = fs::read_to_string(graph).unwrap();
    assert!(dump.lines().any(|l| l.starts_with("v1 1 25 5 24")), "{dump}");
}

#[test]
fn no_stems_is_not_an_error() {
    let dir = tempfile::tempdir().unwrap();
    let fa = write(dir.path(), "a.fa", ">poly\nAAAAAAAAAAAAAAAAAAAA\n");
    let o = stemp(&["predict", &fa, "--profile", "protein", "--json", "--no-timing"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v[0]["vertex_count"], 0);
}

#[test]
fn budget_exit_code() {
    let dir = tempfile::tempdir().unwrap();
    let fa = write(dir.path(), "s.fa", &format!(">5s\n{FIVE_S}\n"));
    let o = stemp(&["predict", &fa, "--profile", "rrna5s-bacterial", "--max-cliques", "1"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn bad_input_exit_code() {
    let dir = tempfile::tempdir().unwrap();
    let fa = write(dir.path(), "bad.fa", ">x\nACGUZ\n");
    let o = stemp(&["predict", &fa, "--profile", "protein"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("stemp:"));
    let o = stemp(&["predict", &fa, "--profile", "no-such-profile"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn evaluate_against_itself() {
    let dir = tempfile::tempdir().unwrap();
    let ct = write(dir.path(), "q.ct", &qux_ct());
    let o = stemp(&["evaluate", "--reference", &ct, "--predicted", &ct, "--json"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let m = &v["summary"]["top"];
    for key in ["sens", "ppv", "mcc_sq", "f1"] {
        assert_eq!(m[key], "1", "{key}: {m}");
    }
}

#[test]
fn evaluate_predicts_from_reference_sequence() {
    let dir = tempfile::tempdir().unwrap();
    let ct = write(dir.path(), "q.ct", &qux_ct());
    let o = stemp(&["evaluate", "--reference", &ct, "--profile", "protein", "--json"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["summary"]["top"]["mcc_sq"], "1");
}

#[test]
fn length_mismatch_exit_code() {
    let dir = tempfile::tempdir().unwrap();
    let ct = write(dir.path(), "q.ct", &qux_ct());
    let fa = write(dir.path(), "short.fa", ">x\nGGCACAGAAG\n");
    let o = stemp(&[
        "evaluate",
        "--reference",
        &ct,
        "--sequence",
        &fa,
        "--profile",
        "protein",
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn empty_batch_directory() {
    let dir = tempfile::tempdir().unwrap();
    let o = stemp(&["batch", dir.path().to_str().unwrap(), "--profile", "trna", "--json"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["rows"].as_array().unwrap().len(), 0);
}

#[test]
fn batch_scores_ct_inputs() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "2QUX.ct", &qux_ct());
    let o = stemp(&[
        "batch",
        dir.path().to_str().unwrap(),
        "--profile",
        "protein",
        "--min-length",
        "10",
        "--json",
        "--no-timing",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["scored"], 1);
    assert_eq!(v["rows"][0]["best"]["mcc_sq"], "1");
}

#[test]
fn output_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let fa = write(dir.path(), "s.fa", &format!(">5s\n{FIVE_S}\n>2QUX\n{QUX}\n"));
    let run = |extra: &str| {
        stemp(&[
            "predict",
            &fa,
            "--profile",
            "rrna5s-bacterial",
            "--json",
            "--no-timing",
            extra,
        ])
        .stdout
    };
    let a = run("--top-k=50");
    assert!(!a.is_empty());
    assert_eq!(a, run("--top-k=50"));
    let seq = stemp(&[
        "predict",
        &fa,
        "--profile",
        "rrna5s-bacterial",
        "--json",
        "--no-timing",
        "--top-k=50",
        "--sequential",
    ])
    .stdout;
    assert_eq!(a, seq);
}

#[test]
fn profile_directory_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let fa = write(dir.path(), "q.fa", &format!(">2QUX\n{QUX}\n"));
    let profile = r#"{"name": "mine", "family": "protein", "min_stem_len": 4}"#;
    write(dir.path(), "mine.json", profile);
    let o = Command::new(env!("CARGO_BIN_EXE_stemp"))
        .args(["predict", &fa, "--profile", "mine", "--json", "--no-timing"])
        .env("STEMP_PROFILE_DIR", dir.path())
        .output()
        .unwrap();
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v[0]["profile"], "mine");
    assert_eq!(v[0]["vertex_count"], 3);
}

#[test]
fn lists_profiles() {
    let o = stemp(&["profiles"]);
    assert!(o.status.success());
    let out = stdout(&o);
    for name in ["protein", "trna", "rrna5s-archaeal", "rrna5s-bacterial"] {
        assert!(out.contains(name), "{out}");
    }
}
