use std::path::PathBuf;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_invhecke"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn golden(name: &str) -> String {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name);
    std::fs::read_to_string(p).unwrap()
}

fn stdout_of(args: &[&str]) -> String {
    let out = run(args);
    assert_eq!(out.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn mu_tables_match_golden() {
    assert_eq!(stdout_of(&["table", "mu", "--type", "A1"]), golden("table_mu_A1.json"));
    assert_eq!(stdout_of(&["table", "mu", "--type", "A2"]), golden("table_mu_A2.json"));
    assert_eq!(
        stdout_of(&["table", "mu", "--type", "A2", "--format", "tsv"]),
        golden("table_mu_A2.tsv")
    );
}

#[test]
fn biregular_a1_matches_golden() {
    let out = stdout_of(&["biregular", "--type", "A1", "--format", "tsv"]);
    assert_eq!(out, golden("biregular_A1.tsv"));
    assert!(out.contains("e\t1\t1\tu^-2"));
    assert!(out.contains("1\t1\t1\t1 - u^-2"));
}

#[test]
fn g2_jcm_matches_golden() {
    let out = stdout_of(&["cells", "--type", "G2", "--emit", "jcm", "--format", "tsv"]);
    assert_eq!(out, golden("cells_G2_jcm.tsv"));
    let j: serde_json::Value =
        serde_json::from_str(&stdout_of(&["cells", "--type", "G2", "--emit", "jcm"])).unwrap();
    assert_eq!(j["jcm"]["dim"], 8);
    assert_eq!(j["g2_basis"]["rank"], 8);
}

#[test]
fn verify_a2_matches_golden() {
    let out = stdout_of(&["verify", "--type", "A2"]);
    assert_eq!(out, golden("verify_A2.json"));
    let j: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(j["twisted_involutions"].as_array().unwrap().len(), 4);
}

#[test]
fn reruns_are_byte_identical() {
    for args in [
        &["verify", "--type", "B2", "--format", "tsv"][..],
        &["cells", "--type", "A2", "--emit", "kl"],
        &["group-ktheory", "--group", "S3"],
        &["biregular", "--type", "A2"],
    ] {
        let a = run(args);
        let b = run(&[&["--threads", "2"], args].concat());
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["verify", "--type", "D4", "--star", "0,1,2,3"]).status.code(), Some(0));
    assert_eq!(run(&["verify", "--type", "D4", "--star", "0,1,3,2"]).status.code(), Some(0));
    assert_eq!(
        run(&["verify", "--type", "A1~", "--length-bound", "12", "--format", "tsv"]).status.code(),
        Some(0)
    );
    assert_eq!(run(&["verify", "--type", "A1~"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "--type", "X7"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "--type", "E6"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "--type", "A2", "--star", "0,0"]).status.code(), Some(2));
    assert_eq!(
        run(&["table", "pi", "--type", "A2", "-o", "/nonexistent-dir/out.json"]).status.code(),
        Some(3)
    );
}

#[test]
fn output_file_matches_stdout() {
    let dir = std::env::temp_dir().join(format!("invhecke-golden-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("pi.json");
    let out = run(&["table", "pi", "--type", "B2", "-o", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(std::fs::read_to_string(&path).unwrap(), stdout_of(&["table", "pi", "--type", "B2"]));
    std::fs::remove_dir_all(dir).unwrap();
}
