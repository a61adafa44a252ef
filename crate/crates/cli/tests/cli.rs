use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

fn chtest(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_chtest"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn distill_to(dir: &Path, mode: &str, tmp: &TempDir) -> PathBuf {
    let path = tmp.path().join(format!("{mode}.json"));
    let out = chtest(&[
        "distill",
        dir.to_str().unwrap(),
        "--mode",
        mode,
        "-o",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    path
}

fn write_snapshot(tmp: &TempDir, name: &str, files: &[(&str, &str)]) -> PathBuf {
    let dir = tmp.path().join(name);
    fs::create_dir_all(&dir).unwrap();
    for (file, src) in files {
        fs::write(dir.join(file), src).unwrap();
    }
    dir
}

#[test]
fn distill_writes_a_model_document() {
    let tmp = TempDir::new().unwrap();
    let path = distill_to(&fixture("fig2"), "poly", &tmp);
    let doc = fs::read_to_string(path).unwrap();
    assert!(doc.contains("\"method:Bar.foo/0\""));
    assert!(doc.contains("\"mode\": \"Polymorphic\""));
}

#[test]
fn distill_of_two_snapshots_appends_changes() {
    let out = chtest(&[
        "distill",
        fixture("fig4_pre").to_str().unwrap(),
        fixture("fig4_post").to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let doc = stdout(&out);
    assert!(doc.contains("\"kind\": \"Remove\"") || doc.contains("\"kind\": \"Modify\""));
    assert!(doc.contains("method:Type1.getValue/0"));
}

#[test]
fn distill_of_an_empty_directory_succeeds() {
    let tmp = TempDir::new().unwrap();
    let dir = write_snapshot(&tmp, "empty", &[]);
    let out = chtest(&["distill", dir.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("\"changes\": []"));
}

#[test]
fn malformed_input_exits_with_code_2() {
    let tmp = TempDir::new().unwrap();
    let dir = write_snapshot(&tmp, "bad", &[("x.moo", "class {")]);
    let out = chtest(&["distill", dir.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("x.moo:1:7"));

    let missing = tmp.path().join("nowhere.json");
    let out = chtest(&["select", "--model", missing.to_str().unwrap(), "--class", "Foo"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn select_by_class_depends_on_mode() {
    let tmp = TempDir::new().unwrap();
    let fig2 = fixture("fig2");
    let stat = distill_to(&fig2, "static", &tmp);
    let poly = distill_to(&fig2, "poly", &tmp);
    for (model, class, expected) in [
        (&stat, "Bar", ""),
        (&poly, "Bar", "FooBarTest\n"),
        (&stat, "Foo", "FooBarTest\n"),
        (&poly, "Foo", "FooBarTest\n"),
    ] {
        let out = chtest(&["select", "--model", model.to_str().unwrap(), "--class", class]);
        assert!(out.status.success());
        assert_eq!(stdout(&out), expected, "{class} in {}", model.display());
    }
}

#[test]
fn select_by_change_prints_test_methods() {
    let tmp = TempDir::new().unwrap();
    let poly = distill_to(&fixture("fig2"), "poly", &tmp);
    let out = chtest(&["select", "--model", poly.to_str().unwrap(), "--change", "4", "--change", "3"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "FooBarTest.fooTest\n");
    let out = chtest(&[
        "select",
        "--model",
        poly.to_str().unwrap(),
        "--change",
        "3",
        "--per-change",
    ]);
    assert_eq!(stdout(&out), "3: FooBarTest.fooTest\n");
}

#[test]
fn unknown_class_or_change_exits_with_code_2() {
    let tmp = TempDir::new().unwrap();
    let poly = distill_to(&fixture("fig2"), "poly", &tmp);
    let out = chtest(&["select", "--model", poly.to_str().unwrap(), "--class", "Nope"]);
    assert_eq!(out.status.code(), Some(2));
    let out = chtest(&["select", "--model", poly.to_str().unwrap(), "--change", "999"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn evaluate_reports_the_polymorphic_improvement() {
    let out = chtest(&["evaluate", fixture("fig2").to_str().unwrap()]);
    assert!(out.status.success());
    let csv = stdout(&out);
    assert!(csv.starts_with("class,mutants,killed_full,killed_staticreduced,killed_polyreduced,classification\n"));
    assert!(csv.contains("Bar,1,1,0,1,improved\n"));
    assert!(String::from_utf8_lossy(&out.stderr).contains("reduction ratio poly: 1.0000"));
}

#[test]
fn evaluate_is_deterministic() {
    let tmp = TempDir::new().unwrap();
    let dir = fixture("dispatch_heavy");
    let a = tmp.path().join("a.csv");
    let b = tmp.path().join("b.csv");
    for path in [&a, &b] {
        let out = chtest(&["evaluate", dir.to_str().unwrap(), "-o", path.to_str().unwrap()]);
        assert!(out.status.success());
        assert!(stdout(&out).contains("killed by poly-reduced suites"));
    }
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
}

#[test]
fn failing_baseline_exits_with_code_3() {
    let tmp = TempDir::new().unwrap();
    let dir = write_snapshot(
        &tmp,
        "broken",
        &[(
            "a.moo",
            "class A { int v() { return 1; } }\nclass ATest { void testV() { A a = new A(); assert a.v() == 2; } }\n",
        )],
    );
    let out = chtest(&["evaluate", dir.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("ATest.testV"));
    let out = chtest(&["test", dir.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stdout(&out).starts_with("fail ATest.testV"));
}

#[test]
fn mutants_lists_production_mutants_only() {
    let out = chtest(&["mutants", fixture("fig2").to_str().unwrap()]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert_eq!(text.lines().count(), 2);
    assert!(!text.contains("FooBarTest"));
}
