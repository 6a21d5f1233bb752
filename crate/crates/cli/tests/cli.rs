use std::path::PathBuf;
use std::process::{Command, Output};

fn scenario(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../scenarios")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn surfmmp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_surfmmp")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn temp_file(name: &str, contents: &str) -> String {
    let dir = std::env::temp_dir().join(format!("surfmmp-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, contents).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn discrepancies_of_the_triple_fork() {
    let o = surfmmp(&["discrepancies", &scenario("example_4_1.json")]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    for v in ["-1", "-1/2", "-2/3", "-5/6"] {
        assert!(out.split_whitespace().any(|w| w == v), "{v} missing from\n{out}");
    }
}

#[test]
fn classify_quadruple_fork_json() {
    let o = surfmmp(&["--json", "classify", &scenario("example_4_2_star.json"), "--epsilon", "1/7"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["classification"], "not-log-canonical");
    assert_eq!(v["mr_total_discrepancy"], "-20/19");
    assert_eq!(v["exceptional_discrepancies"]["E0"], "-20/19");
}

#[test]
fn classify_quartic_cone() {
    let cone = temp_file("cone.json", r#"{"base":"P2","blowups":[{"point":"general","name":"E0"},
        {"point":{"on":"E0"},"name":"E1"},{"point":{"on":"E0"},"name":"E2"},{"point":{"on":"E0"},"name":"E3"}],
        "contract":[["E0"]]}"#);
    let out = stdout(&surfmmp(&["classify", &cone, "--epsilon", "1/2"]));
    assert!(out.contains("a(E0) = -1/2"), "{out}");
    assert!(out.contains("total discrepancy: -1/2 (eps-log-canonical)"), "{out}");
}

#[test]
fn pullback_table() {
    let o = surfmmp(&["pullback", &scenario("example_4_1.json"), "--divisor", "D"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("c(E0) = 1/2") && out.contains("c(E3) = 1/12"), "{out}");
}

#[test]
fn run_reports_audit() {
    let o = surfmmp(&["--json", "run", &scenario("example_4_2.json")]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["steps"][0]["curve"], "D");
    assert_eq!(v["steps"][0]["extremal_value"], "-23/49");
    assert_eq!(v["steps"][0]["surface_class"]["classification"], "not-log-canonical");
    assert_eq!(v["audit"]["passed"], true);

    let o = surfmmp(&["run", &scenario("example_4_2.json"), "--strategy", "named:P5"]);
    assert!(stdout(&o).contains("step 0: contract P5"));
}

#[test]
fn build_table() {
    let o = surfmmp(&["build", &scenario("example_4_2.json")]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("rho(Y) = 11, rho(X) = 7"), "{out}");
    assert!(out.lines().any(|l| l.starts_with("E0") && l.contains("-5") && l.contains("contracted")));
}

#[test]
fn verification_and_search() {
    let o = surfmmp(&["verify-thm31", "--trials", "50", "--seed", "7", "--epsilon", "1/4"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("violations: 0"));

    let o = surfmmp(&["--json", "search-q44", "--trials", "20", "--seed", "42", "--start", "a1"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["trials"], 20);
    assert!(v["non_log_canonical"].is_array());
}

#[test]
fn dot_is_byte_identical() {
    let a = surfmmp(&["dot", &scenario("example_4_1.json"), "--set", "all"]);
    let b = surfmmp(&["dot", &scenario("example_4_1.json"), "--set", "all"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let c = stdout(&surfmmp(&["dot", &scenario("example_4_1.json")]));
    assert_eq!(c.matches(" -- ").count(), 3);
}

#[test]
fn exit_codes() {
    let bad_base = temp_file("p3.json", r#"{"base":"P3"}"#);
    let broken = temp_file("broken.json", "{\"base\": \"P2\",\n oops}");
    let unknown = temp_file("unknown.json", r#"{"base":"P2","boundary":{"X":"1/2"}}"#);
    let x42 = scenario("example_4_2.json");
    let cases: Vec<Vec<&str>> = vec![
        vec!["build", &bad_base],
        vec!["build", &broken],
        vec!["build", &unknown],
        vec!["build", "/nonexistent/scenario.json"],
        vec!["classify", &bad_base],
        vec!["classify", &unknown, "--epsilon", "1/2"],
        vec!["discrepancies", &broken],
        vec!["run", &broken],
        vec!["dot", &broken],
        vec!["classify", &x42, "--epsilon", "3/2"],
        vec!["classify", &x42, "--epsilon", "x"],
        vec!["run", &x42, "--strategy", "random"],
        vec!["pullback", &x42, "--divisor", "E0"],
        vec!["pullback", &x42, "--divisor", "Z"],
        vec!["verify-thm31", "--trials", "0", "--seed", "1", "--epsilon", "0"],
        vec!["verify-thm31", "--trials", "3", "--seed", "1", "--epsilon", "-1"],
        vec!["verify-thm31", "--trials", "3", "--seed", "1", "--epsilon", "0", "--max-blowups", "0"],
        vec!["search-q44", "--trials", "0", "--seed", "1"],
        vec!["search-q44", "--trials", "3", "--seed", "1", "--start", "cusp"],
        vec!["no-such-command"],
    ];
    for args in cases {
        let o = surfmmp(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    }
    let o = surfmmp(&["build", &broken]);
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));
    let o = surfmmp(&["--json", "build", &unknown]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["exit_code"], 2);
    assert!(v["error"].as_str().unwrap().contains("boundary.X"));
}
