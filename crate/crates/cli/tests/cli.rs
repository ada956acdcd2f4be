use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn ciforge(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ciforge")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn fixture_file(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(format!("{name}.json"))
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn mvf_prints_a_number() {
    let o = ciforge(&["mvf", "--fixture", "fig3", "--vertex", "x1"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "3");
    let input = fixture_file("fig3");
    let o = ciforge(&["mvf", "--input", path(&input), "--vertex", "x5"]);
    assert_eq!(stdout(&o).trim(), "2");
}

#[test]
fn mmsc_prints_the_concept_and_depth_report() {
    let o = ciforge(&["mmsc", "--fixture", "fig3", "--elements", "x1,x2", "--depth", "1"]);
    assert!(o.status.success());
    let out = stdout(&o);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("City and (some government.Party) and (some partof.Region)"));
    assert!(lines.next().unwrap().starts_with("branch=bounded"));
}

#[test]
fn mine_then_check_and_entail() {
    let dir = tempfile::tempdir().unwrap();
    let tbox = dir.path().join("fig4i.tbox");
    let o = ciforge(&["mine", "--fixture", "fig4i", "--mode", "intents", "--output", path(&tbox), "--stats"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("mode: intents"));
    let text = std::fs::read_to_string(&tbox).unwrap();
    assert!(text.starts_with("# mode: intents"));

    let o = ciforge(&["check", "--fixture", "fig4i", "--tbox", path(&tbox), "--depth", "2", "--size-cap", "6"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("sound: true") && stdout(&o).contains("complete: true"));

    let o = ciforge(&["entails", "--tbox", path(&tbox), "--ci", "A SubClassOf some r.some r.some r.Top"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "true");
    let o = ciforge(&["entails", "--tbox", path(&tbox), "--ci", "some r.Top SubClassOf A"]);
    assert_eq!(stdout(&o).trim(), "false");
}

#[test]
fn failed_checks_exit_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let tbox = dir.path().join("wrong.tbox");
    std::fs::write(&tbox, "# not valid in fig4i\nsome r.Top SubClassOf A\n").unwrap();
    let o = ciforge(&["check", "--fixture", "fig4i", "--tbox", path(&tbox), "--depth", "1", "--size-cap", "3"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("sound: false"));

    let empty = dir.path().join("empty.tbox");
    std::fs::write(&empty, "").unwrap();
    let o = ciforge(&["check", "--fixture", "fig4i", "--tbox", path(&empty), "--depth", "1", "--size-cap", "3"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("complete: false"));
}

#[test]
fn domain_errors_exit_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("x.tbox");
    let o = ciforge(&["mine", "--fixture", "fig3", "--mode", "naive", "--output", path(&out)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("cap"));
    assert_eq!(ciforge(&["mvf", "--fixture", "fig9", "--vertex", "x1"]).status.code(), Some(1));
    assert_eq!(ciforge(&["mvf", "--fixture", "fig3", "--vertex", "nope"]).status.code(), Some(1));
    let o = ciforge(&["entails", "--tbox", path(&out), "--ci", "A SubClassOf B"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(ciforge(&["mvf", "--vertex", "x1"]).status.code(), Some(2));
    assert_eq!(ciforge(&["mvf", "--fixture", "fig3", "--input", "a.json", "--vertex", "x1"]).status.code(), Some(2));
    assert_eq!(ciforge(&["mine", "--fixture", "fig3", "--mode", "greedy", "--output", "x"]).status.code(), Some(2));
    assert_eq!(ciforge(&["frobnicate"]).status.code(), Some(2));
}
