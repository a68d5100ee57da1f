use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Output, Stdio};

const BIN: &str = env!("CARGO_BIN_EXE_cnlasp");

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

fn cnlasp(args: &[&str]) -> Output {
    Command::new(BIN)
        .args(args)
        .env_remove("CNLASP_CONFIG")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

const COLORING: &str = "A node is identified by an id.
An edge is identified by a firstnode, and by a secondnode.
A color is identified by an id.
Whenever there is a node with id X then we can have a col with node X, and with color equal to blue, or a col with node X, and with color equal to red, or a col with node X, and with color equal to green.
It is prohibited that C1 is equal to C2, whenever there is a col with node X, and with color C1, whenever there is a col with node Y, and with color C2, whenever there is an edge with firstnode X, and with secondnode Y.
";

#[test]
fn echo_plugin_matches_fixture_byte_for_byte() {
    let input = std::fs::read(fixture("echo_requests.jsonl")).unwrap();
    let mut child = Command::new(BIN)
        .arg("plugin-echo")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(&input).unwrap();
    let out = child.wait_with_output().unwrap();
    assert!(out.status.success());
    assert_eq!(
        out.stdout,
        std::fs::read(fixture("echo_responses.jsonl")).unwrap()
    );
}

#[test]
fn translate_through_echo_plugin_returns_input() {
    let dir = tempfile::tempdir().unwrap();
    let nl = ["Each node has an id.", "Something \"quoted\" here."];
    let input = write(dir.path(), "nl.txt", &(nl.join("\n") + "\n"));
    let plugin = format!("{BIN} plugin-echo");
    let o = cnlasp(&[
        "translate",
        &input,
        "--plugin",
        &plugin,
        "--format",
        "jsonl",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let lines: Vec<serde_json::Value> = stdout(&o)
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(lines.len(), nl.len());
    for (line, sentence) in lines.iter().zip(nl) {
        assert_eq!(line["candidate"]["cnl"], sentence);
        assert_eq!(line["nl"], sentence);
    }
}

#[test]
fn compile_prints_program_and_fails_with_code_two() {
    let dir = tempfile::tempdir().unwrap();
    let good = write(dir.path(), "g.cnl", COLORING);
    let o = cnlasp(&["compile", &good]);
    assert!(o.status.success());
    assert_eq!(
        stdout(&o),
        "col(X,blue) | col(X,red) | col(X,green) :- node(X).\n:- C1 = C2, col(X,C1), col(Y,C2), edge(X,Y).\n"
    );
    let bad = write(dir.path(), "b.cnl", "A node is identified by.\n");
    let o = cnlasp(&["compile", &bad]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("sentence 0"));
}

#[test]
fn run_bundled_problem_is_equivalent_and_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let save = dir.path().join("run.json");
    let o = cnlasp(&["run", "--problem", "gcv2", "--save", save.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stdout(&o));
    assert!(stdout(&o).contains("equivalence: equivalent"));
    let first = std::fs::read(&save).unwrap();
    let o = cnlasp(&["run", "--problem", "gcv2", "--save", save.to_str().unwrap()]);
    assert!(o.status.success());
    assert_eq!(std::fs::read(&save).unwrap(), first);
}

#[test]
fn solve_and_equiv() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "p.lp", "a :- not b.\nb :- not a.\n");
    let o = cnlasp(&["solve", &p, "--format", "jsonl"]);
    let sets: Vec<serde_json::Value> = stdout(&o)
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(sets.len(), 2);
    assert_eq!(sets[0]["atoms"], serde_json::json!(["a"]));

    let left = write(dir.path(), "l.lp", "q(X) :- p(X).\n");
    let same = write(
        dir.path(),
        "s.lp",
        "q(Y) :- p(Y), not r(Y).\nr(Z) :- p(Z), q(Z), not q(Z).\n",
    );
    let other = write(dir.path(), "o.lp", "q(X) :- p(X), not s(X).\n");
    let o = cnlasp(&[
        "equiv",
        &left,
        &same,
        "--signature",
        "p/1",
        "--universe",
        "1,2",
    ]);
    assert!(o.status.success(), "{}", stdout(&o));
    let o = cnlasp(&[
        "equiv",
        &left,
        &other,
        "--signature",
        "p/1,s/1",
        "--universe",
        "1",
        "--format",
        "jsonl",
    ]);
    assert_eq!(o.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(v["equivalent"], false);
}

#[test]
fn dataset_generation_rephrase_and_audit() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let targets = write(d, "t.toml", "definition-when = 3\nweak-constraint = 2\n");
    let data = d.join("d.jsonl");
    let o = cnlasp(&[
        "gen-dataset",
        "--targets",
        &targets,
        "--seed",
        "3",
        "-o",
        data.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(std::fs::read_to_string(&data).unwrap().lines().count(), 5);

    let expanded = d.join("e.jsonl");
    let manifest = d.join("m.json");
    let o = cnlasp(&[
        "rephrase",
        data.to_str().unwrap(),
        "-o",
        expanded.to_str().unwrap(),
        "-k",
        "2",
        "--provider",
        "identity",
        "--manifest",
        manifest.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    assert_eq!(
        std::fs::read_to_string(&expanded).unwrap().lines().count(),
        15
    );
    let o = cnlasp(&["audit", manifest.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("audit: ok"));

    let mut m: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&manifest).unwrap()).unwrap();
    m["grand"]["total"] = serde_json::json!(16);
    std::fs::write(&manifest, m.to_string()).unwrap();
    let o = cnlasp(&["audit", manifest.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("violation"));
}

#[test]
fn check_syntax_and_eval() {
    let dir = tempfile::tempdir().unwrap();
    let cnl = write(
        dir.path(),
        "c.cnl",
        "A node is identified by an id.\nA node is red.\n",
    );
    let o = cnlasp(&["check-syntax", &cnl]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("SA: 50.00% (1/2)"));

    let hyp = write(dir.path(), "h.txt", "the cat sat on the mat\n");
    let o = cnlasp(&["eval", "--hyp", &hyp, "--ref", &hyp, "--format", "jsonl"]);
    let report: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(report["bleu"], serde_json::json!([1.0, 1.0, 1.0, 1.0]));
    assert_eq!(report["meteor_stage"], "exact");
}

#[test]
fn config_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "c.toml", "[solver]\natom_bound = 1\n");
    let p = write(dir.path(), "p.lp", "a :- not b.\nb :- not a.\n");
    let o = Command::new(BIN)
        .args(["solve", &p])
        .env("CNLASP_CONFIG", &cfg)
        .output()
        .unwrap();
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("enumeration bound of 1"));
    let bad = write(dir.path(), "bad.toml", "[solver]\natom_bound = 0\n");
    let o = cnlasp(&["--config", &bad, "solve", &p]);
    assert!(String::from_utf8_lossy(&o.stderr).contains("atom_bound"));
}

#[test]
fn python_adapter_is_a_drop_in_plugin() {
    if Command::new("python3").arg("--version").output().is_err() {
        eprintln!("python3 not found; skipping");
        return;
    }
    let adapter = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../python/echo_adapter.py");
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "nl.txt", "A node is identified by an id.\n");
    let plugin = format!("python3 {}", adapter.display());
    let o = cnlasp(&[
        "translate",
        &input,
        "--plugin",
        &plugin,
        "--format",
        "jsonl",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let line: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(line["candidate"]["cnl"], "A node is identified by an id.");
}
