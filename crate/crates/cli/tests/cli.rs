use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use rcsynth::format::{parse_circuit, parse_permutation, SpecFile};
use rcsynth::perm::parity;
use rcsynth::Parity;
use tempfile::TempDir;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_rcsynth"));
    c.env_remove("RCSYNTH_CAP");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn bounds_text_and_csv() {
    let o = run(&["bounds", "--n", "4", "--q", "0"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("shannon_lower 4.0\n"));

    let o = run(&["bounds", "--n", "3"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains(
        "ancilla_free_upper unavailable: domain error: the ancilla-free upper bound requires n >= 4"
    ));

    let o = run(&["bounds", "--n", "4,5,8", "--q", "0,2", "--csv"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).lines().count(), 1 + 6);

    assert_eq!(code(&run(&["bounds", "--n", "1"])), 2);
    assert_eq!(code(&run(&["bounds", "--n", "4", "--phi", "cubic"])), 2);
}

#[test]
fn synth_identity_is_empty() {
    let dir = TempDir::new().unwrap();
    let identity: String = (0..16).map(|x| format!("{x} ")).collect();
    let p = write(&dir, "id.txt", &format!("perm 4\n{identity}\n"));
    let out = dir.path().join("c.txt");
    let o = run(&["synth", "basic", s(&p), "-o", s(&out)]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let c = parse_circuit(&fs::read_to_string(&out).unwrap(), false).unwrap();
    assert!(c.is_empty());
    assert!(stdout(&o).contains("total 0"));
}

#[test]
fn synth_verify_and_mutation() {
    let dir = TempDir::new().unwrap();
    let spec = dir.path().join("p.txt");
    assert_eq!(
        code(&run(&[
            "rand",
            "even-perm",
            "--n",
            "6",
            "--seed",
            "11",
            "-o",
            s(&spec)
        ])),
        0
    );
    let out = dir.path().join("c.txt");
    assert_eq!(code(&run(&["synth", "basic", s(&spec), "-o", s(&out)])), 0);
    let o = run(&["verify", s(&out), s(&spec)]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).starts_with("ok"));

    let mut text: Vec<String> = fs::read_to_string(&out)
        .unwrap()
        .lines()
        .map(String::from)
        .collect();
    text.remove(3);
    let broken = write(&dir, "broken.txt", &(text.join("\n") + "\n"));
    let o = run(&["verify", s(&broken), s(&spec)]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("mismatch at input"));

    let small = dir.path().join("small.txt");
    run(&["rand", "perm", "--n", "5", "-o", s(&small)]);
    assert_eq!(code(&run(&["verify", s(&out), s(&small)])), 2);
}

#[test]
fn synth_to_stdout_and_lupanov_overrides() {
    let dir = TempDir::new().unwrap();
    let spec = dir.path().join("m.txt");
    run(&["rand", "map", "--n", "6", "--seed", "3", "-o", s(&spec)]);
    let o = run(&["synth", "lupanov", s(&spec), "--k", "2"]);
    assert_eq!(code(&o), 0);
    let c = parse_circuit(&stdout(&o), false).unwrap();
    assert_eq!(c.inputs(), 6);
    assert!(String::from_utf8_lossy(&o.stderr).contains("stage S5"));

    assert_eq!(
        code(&run(&[
            "synth",
            "lupanov",
            s(&spec),
            "--k",
            "2",
            "--s",
            "3"
        ])),
        3
    );
    assert_eq!(code(&run(&["synth", "lupanov", s(&spec), "--s", "4"])), 0);
    assert_eq!(code(&run(&["synth", "lupanov", s(&spec), "--k", "3"])), 3);
    // a mapping is not a permutation
    assert_eq!(code(&run(&["synth", "basic", s(&spec)])), 2);
}

#[test]
fn odd_permutation_parity_gate() {
    let dir = TempDir::new().unwrap();
    let p = write(
        &dir,
        "odd.txt",
        "perm 4\n1 0 2 3 4 5 6 7 8 9 10 11 12 13 14 15\n",
    );
    let o = run(&["synth", "basic", s(&p)]);
    assert_eq!(code(&o), 3);
    assert!(String::from_utf8_lossy(&o.stderr).contains("parity"));
    let out = dir.path().join("c.txt");
    assert_eq!(code(&run(&["synth", "lupanov", s(&p), "-o", s(&out)])), 0);
    assert_eq!(code(&run(&["verify", s(&out), s(&p)])), 0);
}

#[test]
fn simulate_literals() {
    let dir = TempDir::new().unwrap();
    let empty = write(&dir, "e.txt", "lines 3\ninputs 3\noutputs 0 1 2\n");
    let o = run(&["simulate", s(&empty), "0b101"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).starts_with("output 0b101\n"));
    assert!(stdout(&run(&["simulate", s(&empty), "6"])).starts_with("output 0b110\n"));

    let flip = write(
        &dir,
        "n.txt",
        "lines 4\ninputs 3\noutputs 0 1 3\nn 1\nn 3\n",
    );
    let o = run(&["simulate", s(&flip), "0b001"]);
    assert!(stdout(&o).starts_with("output 0b111\n"));
    assert!(stdout(&o).contains("state 0b1011"));

    assert_eq!(code(&run(&["simulate", s(&empty), "0b1000"])), 2);
    assert_eq!(code(&run(&["simulate", s(&empty), "five"])), 2);
}

#[test]
fn rand_is_deterministic() {
    let a = stdout(&run(&["rand", "even-perm", "--n", "5", "--seed", "42"]));
    let b = stdout(&run(&["rand", "even-perm", "--n", "5", "--seed", "42"]));
    assert_eq!(a, b);
    assert!(a.starts_with("# rcsynth rand even-perm n=5 seed=42\n"));
    for seed in 0..10 {
        let text = stdout(&run(&[
            "rand",
            "even-perm",
            "--n",
            "4",
            "--seed",
            &seed.to_string(),
        ]));
        assert_eq!(parity(&parse_permutation(&text).unwrap()), Parity::Even);
    }
    let m = stdout(&run(&["rand", "map", "--n", "4", "--seed", "1"]));
    assert!(matches!(SpecFile::parse(&m).unwrap(), SpecFile::Mapping(_)));
}

#[test]
fn stats_reports_counts_and_bounds() {
    let dir = TempDir::new().unwrap();
    let empty = write(&dir, "e.txt", "lines 4\ninputs 4\noutputs 0 1 2 3\n");
    let o = stdout(&run(&["stats", s(&empty)]));
    assert!(o.contains("total 0\n") && o.contains("not 0\n"));
    assert!(o.contains("shannon_lower 4.0\n"));

    let c = write(
        &dir,
        "c.txt",
        "lines 5\ninputs 4\noutputs 0 1 2 3\nn 4\nc 4 0\nt 0 1 2\nx 0 1 2 3\n",
    );
    assert_eq!(code(&run(&["stats", s(&c)])), 2);
    let o = stdout(&run(&["stats", s(&c), "--allow-generalized"]));
    for line in [
        "not 1\n",
        "cnot 1\n",
        "toffoli 1\n",
        "generalized 1\n",
        "total 4\n",
        "ancillas 1\n",
    ] {
        assert!(o.contains(line), "{line}");
    }
}

#[test]
fn exhaustive_cap_override() {
    let dir = TempDir::new().unwrap();
    let spec = dir.path().join("p.txt");
    run(&["rand", "even-perm", "--n", "5", "-o", s(&spec)]);
    let out = dir.path().join("c.txt");
    assert_eq!(code(&run(&["synth", "basic", s(&spec), "-o", s(&out)])), 0);
    assert_eq!(code(&run(&["--cap", "4", "verify", s(&out), s(&spec)])), 3);
    let o = bin()
        .env("RCSYNTH_CAP", "4")
        .args(["verify", s(&out), s(&spec)])
        .output()
        .unwrap();
    assert_eq!(code(&o), 3);
    let o = bin()
        .env("RCSYNTH_CAP", "5")
        .args(["verify", s(&out), s(&spec)])
        .output()
        .unwrap();
    assert_eq!(code(&o), 0);
}

#[test]
fn malformed_files() {
    let dir = TempDir::new().unwrap();
    let bad = write(
        &dir,
        "bad.txt",
        "lines 3\ninputs 3\noutputs 0 1 2\nt 0 0 1\n",
    );
    let o = run(&["stats", s(&bad)]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 4"));
    assert_eq!(code(&run(&["stats", "/nonexistent/file"])), 2);
    assert_eq!(code(&run(&["frobnicate"])), 2);
}
