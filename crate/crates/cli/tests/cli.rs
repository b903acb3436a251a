use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_jbtriple"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

struct Scratch(PathBuf);

impl Scratch {
    fn new(tag: &str) -> Self {
        let dir = std::env::temp_dir().join(format!("jbtriple-cli-{tag}-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        Scratch(dir)
    }

    fn file(&self, name: &str, text: &str) -> String {
        let p = self.0.join(name);
        std::fs::write(&p, text).unwrap();
        p.to_string_lossy().into_owned()
    }

    fn path(&self, name: &str) -> String {
        self.0.join(name).to_string_lossy().into_owned()
    }
}

impl Drop for Scratch {
    fn drop(&mut self) {
        let _ = std::fs::remove_dir_all(&self.0);
    }
}

const E: &str = r#"{"system":{"kind":"matrix","rows":2,"cols":2},"entries":[[[1,0],[0,0]],[[0,0],[1,0]]]}"#;
const U: &str = r#"{"system":{"kind":"matrix","rows":2,"cols":2},"entries":[[[0,0],[-1,0]],[[-1,0],[0,0]]]}"#;
const V: &str = r#"{"system":{"kind":"matrix","rows":2,"cols":2},"entries":[[[0,1],[0,0]],[[0,0],[0,-1]]]}"#;
const W: &str = r#"{"system":{"kind":"matrix","rows":2,"cols":2},"entries":[[[0,0],[-1,0]],[[0,0],[0,0]]]}"#;

#[test]
fn classify_reports_peirce_dimensions() {
    let s = Scratch::new("classify");
    let o = run(&["classify", &s.file("w.json", W)]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.contains("Minimal"), "{out}");
    assert!(out.contains("E2=1 E1=2 E0=1"), "{out}");

    let spin = r#"{"system":{"kind":"spin","dim":3},"entries":[[0.5,0],[0,0.5],[0,0]]}"#;
    let o = run(&["classify", &s.file("s.json", spin)]);
    assert!(stdout(&o).contains("Minimal"));
}

#[test]
fn relate_prints_verdicts() {
    let s = Scratch::new("relate");
    let (v, u, e) = (s.file("v.json", V), s.file("u.json", U), s.file("e.json", E));
    let o = run(&["relate", "LE_H", &v, &u]);
    assert!(o.status.success());
    assert!(stdout(&o).lines().any(|l| l.starts_with("LE_H") && l.contains("true")));
    let o = run(&["relate", "LE_H", &v, &e]);
    assert!(stdout(&o).lines().any(|l| l.starts_with("LE_H") && l.contains("false")));
    let o = run(&["relate", "all", &v, &e]);
    assert_eq!(stdout(&o).lines().count(), 12);
}

#[test]
fn chain_certificates_round_trip_through_files() {
    let s = Scratch::new("chain");
    let (v, e) = (s.file("v.json", V), s.file("e.json", E));
    let cert = s.path("cert.json");
    let o = run(&["chain", "SIM_HT", &v, &e, "--emit-cert", &cert]);
    assert!(o.status.success(), "{}", stdout(&o));
    let json: String = std::fs::read_to_string(&cert).unwrap();
    assert!(json.contains("\"linkRelations\""));
    let o = run(&["verify-cert", &cert]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("accepted  true"));

    // Break the first link.
    let tampered = json.replacen("\"SIM_H\"", "\"LE\"", 1);
    let bad = s.file("bad.json", &tampered);
    assert_eq!(run(&["verify-cert", &bad]).status.code(), Some(1));
}

#[test]
fn obstructed_chain_exits_with_mismatch() {
    let s = Scratch::new("obstructed");
    // det(e*u) = i for u = diag(1, i).
    let u = r#"{"system":{"kind":"matrix","rows":2,"cols":2},"entries":[[[1,0],[0,0]],[[0,0],[0,1]]]}"#;
    let o = run(&["chain", "SIM_HT", &s.file("u.json", u), &s.file("e.json", E)]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn input_errors_exit_with_two() {
    let s = Scratch::new("input");
    let e = s.file("e.json", E);
    let asym = r#"{"system":{"kind":"symmetric","dim":2},"entries":[[[0,0],[1,0]],[[-1,0],[0,0]]]}"#;
    assert_eq!(run(&["classify", &s.file("a.json", asym)]).status.code(), Some(2));
    assert_eq!(run(&["classify", &s.file("g.json", "{ not json")]).status.code(), Some(2));
    assert_eq!(run(&["classify", &s.path("missing.json")]).status.code(), Some(2));
    let half = r#"{"system":{"kind":"matrix","rows":1,"cols":1},"entries":[[[0.5,0]]]}"#;
    assert_eq!(run(&["classify", &s.file("h.json", half)]).status.code(), Some(2));
    assert_eq!(run(&["relate", "LE_Q", &e, &e]).status.code(), Some(2));
    let spin = r#"{"system":{"kind":"spin","dim":3},"entries":[[1,0],[0,0],[0,0]]}"#;
    assert_eq!(run(&["relate", "LE", &s.file("s.json", spin), &e]).status.code(), Some(2));
    assert_eq!(run(&["fuzz", "--families", "matrix:2..20"]).status.code(), Some(2));
    assert_eq!(run(&["fuzz", "--seeds", "9..3"]).status.code(), Some(2));
    assert_eq!(run(&["--tol", "-1", "paper-verify"]).status.code(), Some(2));
}

#[test]
fn paper_verify_passes() {
    let o = run(&["paper-verify"]);
    assert!(o.status.success());
    assert!(stdout(&o).trim_end().ends_with("PASS"));
}

#[test]
fn fuzz_is_deterministic_and_writes_json() {
    let s = Scratch::new("fuzz");
    let json = s.path("report.json");
    let args = ["fuzz", "--families", "M2,M3s", "spin:3..4", "--seeds", "5..25", "--json", &json];
    let a = run(&args);
    assert!(a.status.success(), "{}", stdout(&a));
    let first = std::fs::read(&json).unwrap();
    let b = run(&args);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(first, std::fs::read(&json).unwrap());
    let text = String::from_utf8(first).unwrap();
    assert!(text.contains("\"lattice_violations\""));
    assert!(stdout(&a).contains("(M3)s"));
}

#[test]
fn empty_seed_range_gives_empty_report() {
    let o = run(&["fuzz", "--families", "M2", "--seeds", "4..4"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("M2"));
}

