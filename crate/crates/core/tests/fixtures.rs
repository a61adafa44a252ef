use std::collections::BTreeSet;
use std::path::PathBuf;

use chtest_core::distiller::{distill_delta, distill_initial, polymorphic_relink};
use chtest_core::frontend::{load_snapshot_dir, parse_source, Program};
use chtest_core::model::{ChangeKind, ChangeModel, Resolution, ResolutionMode, SubjectId};
use chtest_core::mutator::{evaluate, Classification, EvaluationConfig};
use chtest_core::runtime::{discover_tests, run_suite, RunConfig, TestStatus};
use chtest_core::selector::{select_for_class, tests_for_method, TestConfig};

fn fixture(name: &str) -> Program {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name);
    load_snapshot_dir(&dir).unwrap().program
}

fn id(s: &str) -> SubjectId {
    SubjectId::from(s)
}

fn model(p: &Program, mode: ResolutionMode) -> ChangeModel {
    distill_initial(p, Resolution::new(mode)).unwrap()
}

#[test]
fn every_fixture_suite_passes() {
    for name in ["fig2", "fig4_pre", "fig4_post", "dispatch_heavy"] {
        let p = fixture(name);
        let tests = discover_tests(&p, &TestConfig::default());
        assert!(!tests.is_empty(), "{name}");
        for o in run_suite(&p, &tests, &RunConfig::default()) {
            assert_eq!(o.status, TestStatus::Pass, "{name}: {} {:?}", o.test, o.message);
        }
    }
}

#[test]
fn fig2_invocation_edges() {
    let p = fixture("fig2");
    let inv = id("inv:FooBarTest.fooTest/0->Foo.foo/0#0");
    let callees = |mode| {
        let m = model(&p, mode);
        let add = m.latest_add(&inv).unwrap().clone();
        m.callee_edges(&add)
    };
    assert_eq!(callees(ResolutionMode::Static), BTreeSet::from([id("method:Foo.foo/0")]));
    assert_eq!(
        callees(ResolutionMode::Polymorphic),
        BTreeSet::from([id("method:Foo.foo/0"), id("method:Bar.foo/0")])
    );
}

#[test]
fn relinking_static_history_matches_poly_distillation() {
    let p = fixture("fig2");
    let relinked = polymorphic_relink(&model(&p, ResolutionMode::Static));
    assert_eq!(relinked, model(&p, ResolutionMode::Polymorphic));
}

#[test]
fn fig4_delta_removes_dependents_first() {
    let (pre, post) = (fixture("fig4_pre"), fixture("fig4_post"));
    let mut m = model(&pre, ResolutionMode::Polymorphic);
    let delta = distill_delta(&mut m, &pre, &post).unwrap();
    let changes: Vec<(ChangeKind, String)> = delta
        .iter()
        .map(|c| {
            let c = m.change(*c).unwrap();
            (c.kind, c.subject_id.to_string())
        })
        .collect();
    let pos = |kind, s: &str| changes.iter().position(|c| c.0 == kind && c.1 == s).unwrap();
    assert!(
        pos(ChangeKind::Remove, "inv:Base.getValue/0->Base.getType1Value/0#0")
            < pos(ChangeKind::Remove, "method:Base.getType1Value/0")
    );
    assert!(pos(ChangeKind::Modify, "method:Base.getValue/0") < pos(ChangeKind::Add, "method:Type1.getValue/0"));
    assert!(changes.contains(&(ChangeKind::Add, "method:Type2.getValue/0".into())));
    let test = BTreeSet::from([id("method:BaseTest.testGetValue/0")]);
    assert_eq!(tests_for_method(&m, &id("method:Type2.getValue/0"), &TestConfig::default()), test);
}

#[test]
fn deleting_a_class_removes_methods_before_the_class() {
    let old = fixture("fig2");
    let src = "class Foo { int foo() { return 1; } }\n\
               class FooBarTest { Foo f; void SetUp() { f = new Foo(); } void fooTest() { assert f.foo() == 1; } }";
    let new = parse_source(src).unwrap().program;
    let mut m = model(&old, ResolutionMode::Static);
    let delta = distill_delta(&mut m, &old, &new).unwrap();
    let kinds: Vec<(ChangeKind, String)> = delta
        .iter()
        .map(|c| {
            let c = m.change(*c).unwrap();
            (c.kind, c.subject_id.to_string())
        })
        .collect();
    assert!(kinds.starts_with(&[
        (ChangeKind::Remove, "method:Bar.foo/0".to_string()),
        (ChangeKind::Remove, "class:Bar".to_string()),
    ]));
    assert!(!m.is_alive(&id("class:Bar")));
}

#[test]
fn history_and_fresh_distillation_agree() {
    let (pre, post) = (fixture("fig4_pre"), fixture("fig4_post"));
    let cfg = TestConfig::default();
    for mode in [ResolutionMode::Static, ResolutionMode::Polymorphic] {
        let mut history = model(&pre, mode);
        distill_delta(&mut history, &pre, &post).unwrap();
        let fresh = model(&post, mode);
        for s in fresh.alive_subjects() {
            assert_eq!(
                tests_for_method(&history, &s.id, &cfg),
                tests_for_method(&fresh, &s.id, &cfg),
                "{mode} {}",
                s.id
            );
        }
    }
}

#[test]
fn class_selection_lifts_to_test_classes() {
    let p = fixture("dispatch_heavy");
    let cfg = TestConfig::default();
    let poly = model(&p, ResolutionMode::Polymorphic);
    let stat = model(&p, ResolutionMode::Static);
    let square = id("class:Square");
    assert_eq!(select_for_class(&poly, &square, &cfg).unwrap(), BTreeSet::from([id("class:ShapeTest")]));
    assert!(select_for_class(&stat, &square, &cfg).unwrap().is_empty());
    assert!(select_for_class(&stat, &id("class:Nope"), &cfg).is_err());
}

#[test]
fn fig2_evaluation_improves_bar() {
    let report = evaluate(&fixture("fig2"), &EvaluationConfig::default()).unwrap();
    let bar = report.rows.iter().find(|r| r.class == "Bar").unwrap();
    assert!(bar.killed_a.len() < bar.killed_b.len());
    assert_eq!(bar.classification, Classification::Improved);
    assert!(report.to_csv().starts_with("class,mutants,killed_full,killed_staticreduced,killed_polyreduced,classification\n"));
}

#[test]
fn evaluation_without_tests_leaves_everything_uncovered() {
    let p = parse_source("class A { int f(int x) { return x + 1; } }").unwrap().program;
    let report = evaluate(&p, &EvaluationConfig::default()).unwrap();
    assert!(report.rows.is_empty());
    assert_eq!(report.uncovered_mutants, report.total_mutants);
    assert_eq!(report.total_mutants, 2);
}

#[test]
fn evaluation_rejects_failing_baseline() {
    let p = parse_source("class A { int f() { return 1; } }\nclass ATest { void testF() { A a = new A(); assert a.f() == 2; } }")
        .unwrap()
        .program;
    assert!(matches!(
        evaluate(&p, &EvaluationConfig::default()),
        Err(chtest_core::mutator::MutationError::BaselineFailure(_))
    ));
}
