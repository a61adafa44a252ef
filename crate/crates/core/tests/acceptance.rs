//! Acceptance checks. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::collections::BTreeSet;
use std::path::PathBuf;
use std::time::{Duration, Instant};

use rayon::prelude::*;

use chtest_core::corpus::{generate_corpus, CorpusConfig, GeneratedProgram};
use chtest_core::distiller::{distill_delta, distill_initial};
use chtest_core::frontend::{load_snapshot_dir, Program};
use chtest_core::model::{ChangeKind, ChangeModel, Resolution, ResolutionMode, SubjectId, SubjectKind};
use chtest_core::mutator::{evaluate, mutation_coverage, EvaluationConfig, KillMatrix};
use chtest_core::runtime::run_suite;
use chtest_core::safety::audit;
use chtest_core::selector::{select_relevant_tests, tests_for_method, TestConfig};

const CORPUS_SIZE: usize = 200;
const CORPUS_SEED: u64 = 1;

type Check = Result<String, String>;

fn fixture(name: &str) -> Program {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name);
    load_snapshot_dir(&dir)
        .unwrap_or_else(|e| panic!("fixture {name}: {e}"))
        .program
}

fn ids(names: &[&str]) -> BTreeSet<SubjectId> {
    names.iter().map(|n| SubjectId::from(*n)).collect()
}

/// Records a real Modify of `method` and selects tests for it.
fn select_modify(model: &ChangeModel, method: &str) -> BTreeSet<SubjectId> {
    let mut model = model.clone();
    let subject = model.subject(&SubjectId::from(method)).expect("method exists").clone();
    let id = model.record(ChangeKind::Modify, subject).expect("modify recorded");
    let change = model.change(id).unwrap().clone();
    select_relevant_tests(&model, &[change], &TestConfig::default()).all_tests()
}

fn expect(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(limit: Duration, start: Instant) -> Result<(), String> {
    let took = start.elapsed();
    expect(took < limit, || format!("took {took:?}, limit {limit:?}"))
}

fn modes() -> [ResolutionMode; 2] {
    [ResolutionMode::Static, ResolutionMode::Polymorphic]
}

fn fig2_selection() -> Check {
    let start = Instant::now();
    let p = fixture("fig2");
    let foo_test = ids(&["method:FooBarTest.fooTest/0"]);
    for mode in modes() {
        let m = distill_initial(&p, Resolution::new(mode)).map_err(|e| e.to_string())?;
        let bar = select_modify(&m, "method:Bar.foo/0");
        let want = if mode == ResolutionMode::Static { BTreeSet::new() } else { foo_test.clone() };
        expect(bar == want, || format!("{mode}: Modify(Bar.foo) selected {bar:?}"))?;
        let base = select_modify(&m, "method:Foo.foo/0");
        expect(base == foo_test, || format!("{mode}: Modify(Foo.foo) selected {base:?}"))?;
    }
    within(Duration::from_secs(1), start)?;
    Ok(format!("static {{}} / poly {{fooTest}} for Bar.foo in {:?}", start.elapsed()))
}

fn fig4_refactoring() -> Check {
    let start = Instant::now();
    let (pre, post) = (fixture("fig4_pre"), fixture("fig4_post"));
    let test = ids(&["method:BaseTest.testGetValue/0"]);
    for mode in modes() {
        let res = Resolution::new(mode);
        let before = distill_initial(&pre, res).map_err(|e| e.to_string())?;
        let got = select_modify(&before, "method:Base.getValue/0");
        expect(got == test, || format!("{mode}: pre Modify(Base.getValue) selected {got:?}"))?;

        let mut history = before.clone();
        distill_delta(&mut history, &pre, &post).map_err(|e| e.to_string())?;
        let fresh = distill_initial(&post, res).map_err(|e| e.to_string())?;
        let want = if mode == ResolutionMode::Polymorphic { test.clone() } else { BTreeSet::new() };
        for (label, model) in [("history", &history), ("fresh", &fresh)] {
            let got = select_modify(model, "method:Type1.getValue/0");
            expect(got == want, || format!("{mode} {label}: post Modify(Type1.getValue) selected {got:?}"))?;
        }
    }
    within(Duration::from_secs(1), start)?;
    Ok(format!("pre both / post poly-only, in {:?}", start.elapsed()))
}

fn corpus() -> &'static [GeneratedProgram] {
    static CORPUS: std::sync::OnceLock<Vec<GeneratedProgram>> = std::sync::OnceLock::new();
    CORPUS.get_or_init(|| generate_corpus(CORPUS_SEED, CORPUS_SIZE, &CorpusConfig::default()))
}

fn mode_monotonicity() -> Check {
    let start = Instant::now();
    let cfg = TestConfig::default();
    let limits = CorpusConfig::default();
    let results: Vec<Result<usize, String>> = corpus()
        .par_iter()
        .map(|g| {
            let p = &g.program;
            let methods: usize = p.classes.iter().map(|c| c.methods.len()).sum();
            let depth = p.classes.iter().map(|c| p.ancestry(&c.name).len()).max().unwrap_or(0);
            if p.classes.len() > limits.max_classes || methods > limits.max_methods || depth > limits.max_depth {
                return Err(format!("seed {} exceeds corpus limits", g.seed));
            }
            let s = distill_initial(p, Resolution::new(ResolutionMode::Static)).map_err(|e| e.to_string())?;
            let q = distill_initial(p, Resolution::new(ResolutionMode::Polymorphic)).map_err(|e| e.to_string())?;
            let mut checked = 0;
            for m in s.alive_subjects().filter(|m| m.kind == SubjectKind::Method) {
                let (a, b) = (tests_for_method(&s, &m.id, &cfg), tests_for_method(&q, &m.id, &cfg));
                if !a.is_subset(&b) {
                    return Err(format!("seed {}: {} static {a:?} not within poly {b:?}", g.seed, m.id));
                }
                checked += 1;
            }
            Ok(checked)
        })
        .collect();
    let mut changes = 0;
    for r in results {
        changes += r?;
    }
    within(Duration::from_secs(120), start)?;
    Ok(format!("{} programs, {changes} method changes, 0 violations, {:?}", corpus().len(), start.elapsed()))
}

fn relative_safety() -> Check {
    let cfg = TestConfig::default();
    let run = CorpusConfig::default().run;
    let results: Vec<Result<(usize, usize), String>> = corpus()
        .par_iter()
        .map(|g| {
            let outcomes = run_suite(&g.program, &g.tests, &run);
            let poly = Resolution::new(ResolutionMode::Polymorphic);
            let on = distill_initial(&g.program, poly.with_constructors(true)).map_err(|e| e.to_string())?;
            let report = audit(&on, &outcomes, &cfg);
            if !report.is_safe() {
                return Err(format!("seed {}: {}", g.seed, report.diagnostics().join("; ")));
            }
            let off = distill_initial(&g.program, poly).map_err(|e| e.to_string())?;
            let report = audit(&off, &outcomes, &cfg);
            if let Some(m) = report.unexplained().next() {
                return Err(format!("seed {}, constructors off: {m}", g.seed));
            }
            Ok((report.methods_checked, report.misses.len()))
        })
        .collect();
    let (mut methods, mut attributed) = (0, 0);
    for r in results {
        let (m, a) = r?;
        methods += m;
        attributed += a;
    }
    Ok(format!(
        "{methods} methods audited; 0 misses with constructors on, {attributed} constructor-path misses attributed with them off"
    ))
}

fn mutation_laws() -> Check {
    let results: Vec<Result<(usize, usize), String>> = corpus()
        .par_iter()
        .map(|g| {
            let report = evaluate(&g.program, &EvaluationConfig {
                run: CorpusConfig::default().run,
                ..EvaluationConfig::default()
            })
            .map_err(|e| format!("seed {}: {e}", g.seed))?;
            for row in &report.rows {
                let ok = row.killed_a.is_subset(&row.killed_b)
                    && row.killed_b.is_subset(&row.killed_full)
                    && row.coverage(&row.killed_a) <= row.coverage(&row.killed_full)
                    && row.coverage(&row.killed_b) <= row.coverage(&row.killed_full);
                if !ok {
                    return Err(format!("seed {}: class {} violates kill monotonicity", g.seed, row.class));
                }
            }
            Ok((report.rows.len(), report.total_mutants))
        })
        .collect();
    let (mut rows, mut mutants) = (0, 0);
    for r in results {
        let (a, b) = r?;
        rows += a;
        mutants += b;
    }
    Ok(format!("{rows} class rows over {mutants} mutants, 0 violations"))
}

fn trade_off_direction() -> Check {
    let report = evaluate(&fixture("dispatch_heavy"), &EvaluationConfig::default()).map_err(|e| e.to_string())?;
    expect(report.killed_b > report.killed_a, || {
        format!("poly killed {} vs static {}", report.killed_b, report.killed_a)
    })?;
    expect(report.reduction_ratio_b > report.reduction_ratio_a, || {
        format!("poly ratio {} vs static {}", report.reduction_ratio_b, report.reduction_ratio_a)
    })?;
    Ok(format!(
        "killed static {} < poly {}; reduction ratio static {:.3} < poly {:.3}",
        report.killed_a, report.killed_b, report.reduction_ratio_a, report.reduction_ratio_b
    ))
}

fn coverage_formula() -> Check {
    let matrix = KillMatrix::synthetic(&[("Alpha", 3000, 1500), ("Beta", 1908, 827)]);
    let suite = matrix.tests.iter().cloned().collect();
    let cov = mutation_coverage(&matrix, &suite).map_err(|e| e.to_string())?;
    let shown = format!("{:.3}", cov.ratio());
    expect(cov.killed == 2327 && cov.introduced == 4908 && shown == "0.474", || {
        format!("{}/{} = {shown}", cov.killed, cov.introduced)
    })?;
    Ok(format!("{}/{} = {shown}", cov.killed, cov.introduced))
}

fn round_trip_and_determinism() -> Check {
    let mut models = 0;
    let names = ["fig2", "fig4_pre", "fig4_post", "dispatch_heavy"];
    for name in names {
        let p = fixture(name);
        for mode in modes() {
            for ctors in [false, true] {
                let m = distill_initial(&p, Resolution::new(mode).with_constructors(ctors)).map_err(|e| e.to_string())?;
                let text = m.to_json();
                let back = ChangeModel::from_json(&text).map_err(|e| e.to_string())?;
                expect(back == m && back.to_json() == text, || format!("{name} {mode}: round trip differs"))?;
                models += 1;
            }
        }
        let a = evaluate(&p, &EvaluationConfig::default()).map_err(|e| e.to_string())?;
        let b = evaluate(&p, &EvaluationConfig::default()).map_err(|e| e.to_string())?;
        expect(a.to_csv() == b.to_csv() && a.summary() == b.summary(), || {
            format!("{name}: evaluate is not deterministic")
        })?;
    }
    let mut history = distill_initial(&fixture("fig4_pre"), Resolution::new(ResolutionMode::Polymorphic)).unwrap();
    distill_delta(&mut history, &fixture("fig4_pre"), &fixture("fig4_post")).map_err(|e| e.to_string())?;
    let back = ChangeModel::from_json(&history.to_json()).map_err(|e| e.to_string())?;
    expect(back == history, || "fig4 history: round trip differs".to_string())?;
    Ok(format!("{} models round-tripped; evaluate byte-identical on {} fixtures", models + 1, names.len()))
}

type Criterion = (&'static str, fn() -> Check);

fn main() {
    let criteria: [Criterion; 8] = [
        ("fig2 fixture selection, static vs poly", fig2_selection),
        ("fig4 refactoring fixture, pre and post", fig4_refactoring),
        ("mode monotonicity on generated corpus", mode_monotonicity),
        ("relative safety against dynamic traces", relative_safety),
        ("mutation-metric laws", mutation_laws),
        ("trade-off direction on dispatch-heavy fixture", trade_off_direction),
        ("mutation coverage formula", coverage_formula),
        ("round trip and determinism", round_trip_and_determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("PASS criterion {}: {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {}: {name}: {why}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
