use std::fs;
use std::process::{Command, Output};

fn cuspbound(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cuspbound")).args(args).output().expect("binary runs")
}

fn cuspbound_env(args: &[&str], key: &str, value: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cuspbound")).args(args).env(key, value).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn expand_psi_starts_at_the_pole() {
    let o = cuspbound(&["expand", "--form", "psi", "--terms", "50"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows.len(), 52);
    assert_eq!(rows[0], "-1,1");
    assert_eq!(rows[1], "0,-24");
}

#[test]
fn expand_delta8_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("d8.csv");
    let o = cuspbound(&["expand", "--form", "delta8", "--terms", "10", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().next(), Some("1,1"));
    assert_eq!(text.lines().count(), 10);
}

#[test]
fn unknown_form_is_a_usage_error() {
    let o = cuspbound(&["expand", "--form", "nonsense", "--terms", "5"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("unknown form"));
}

#[test]
fn missing_arguments_are_usage_errors() {
    assert_eq!(cuspbound(&["expand", "--form", "psi"]).status.code(), Some(2));
    assert_eq!(cuspbound(&["rigor"]).status.code(), Some(2));
    assert_eq!(cuspbound(&["reproduce-paper", "--sections", "2"]).status.code(), Some(2));
    assert_eq!(cuspbound(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(cuspbound(&["--help"]).status.code(), Some(0));
}

#[test]
fn basis_writes_one_file_per_form() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("basis");
    let o = cuspbound(&["basis", "--weight", "20", "--terms", "30", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    for m in 1..=4 {
        let text = fs::read_to_string(out.join(format!("F_20_{m}.csv"))).unwrap();
        assert_eq!(text.lines().next().unwrap(), format!("{m},1"));
        assert_eq!(text.lines().last().unwrap().split(',').next().unwrap(), "30");
    }
    assert!(!out.join("F_20_5.csv").exists());
}

#[test]
fn certify_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let one = dir.path().join("one.csv");
    fs::write(&one, "1\n").unwrap();
    let json = dir.path().join("r.json");
    let o = cuspbound(&["certify", "--weight", "8", "--coeffs", one.to_str().unwrap(), "--nmax", "60", "--json", json.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let doc = cuspbound::report::ReportDocument::from_json(&fs::read_to_string(&json).unwrap()).unwrap();
    assert!(doc.passed());

    let two = dir.path().join("two.csv");
    fs::write(&two, "1,3\n2,-1/2\n").unwrap();
    assert_eq!(cuspbound(&["certify", "--weight", "8", "--coeffs", two.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(cuspbound(&["certify", "--weight", "12", "--coeffs", two.to_str().unwrap(), "--nmax", "40"]).status.code(), Some(0));
    assert_eq!(cuspbound(&["certify", "--weight", "7", "--coeffs", one.to_str().unwrap()]).status.code(), Some(2));

    let bad = dir.path().join("bad.csv");
    fs::write(&bad, "1/0\n").unwrap();
    assert_eq!(cuspbound(&["certify", "--weight", "8", "--coeffs", bad.to_str().unwrap()]).status.code(), Some(2));
    let missing = dir.path().join("missing.csv");
    assert_eq!(cuspbound(&["certify", "--weight", "8", "--coeffs", missing.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn failed_check_exits_one() {
    // A zero tolerance cannot be met by floating-point evaluation of both sides.
    let o = cuspbound(&["rigor", "--transform-check", "--points", "2", "--tol", "0"]);
    assert_eq!(o.status.code(), Some(1), "{}", stdout(&o));
}

#[test]
fn json_is_deterministic_and_thread_independent() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str, threads: &str| {
        let path = dir.path().join(name);
        let o = cuspbound_env(&["reproduce-paper", "--sections", "4,6", "--json", path.to_str().unwrap()], "THREADS", threads);
        assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
        fs::read(path).unwrap()
    };
    let a = run("a.json", "1");
    let b = run("b.json", "1");
    let c = run("c.json", "4");
    assert_eq!(a, b);
    assert_eq!(a, c);
    let doc = cuspbound::report::ReportDocument::from_json(std::str::from_utf8(&a).unwrap()).unwrap();
    assert_eq!(doc.command, "reproduce-paper --sections 4,6");
    assert_eq!(doc.schema, 1);
}

#[test]
fn bad_thread_count_is_rejected() {
    assert_eq!(cuspbound_env(&["lfunc", "--suite"], "THREADS", "0").status.code(), Some(2));
}

#[test]
fn bounds_and_lfunc_pass() {
    assert_eq!(cuspbound(&["bounds", "--inner-product", "24", "5"]).status.code(), Some(0));
    assert_eq!(cuspbound(&["bounds", "--inner-product", "24", "7"]).status.code(), Some(2));
    assert_eq!(cuspbound(&["lfunc", "--residue", "48"]).status.code(), Some(0));
    assert_eq!(cuspbound(&["lfunc", "--residue", "1"]).status.code(), Some(2));
}

#[test]
fn partitions_trend_and_thm3() {
    let o = cuspbound(&["partitions", "--verify-thm3", "300", "--thm2-trend", "1000"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}
