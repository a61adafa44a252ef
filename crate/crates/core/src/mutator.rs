//! Mutant generation, kill matrices and suite comparison.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::{self, Write};

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::frontend::ast::*;
use crate::frontend::printer::print_expr;
use crate::distiller::{distill_initial, DistillError};
use crate::model::{ChangeModel, Resolution, ResolutionMode, SubjectId};
use crate::runtime::{discover_tests, run_suite, run_test, RunConfig, TestOutcome, TestStatus};
use crate::selector::{reduction_ratio, select_for_class, SelectError, TestConfig};

#[derive(Debug, Error)]
pub enum MutationError {
    #[error("baseline failure: {} test(s) do not pass on the unmutated program: {}", .0.len(), list(.0))]
    BaselineFailure(Vec<SubjectId>),
    #[error("test `{0}` is not part of the kill matrix")]
    UnknownTest(SubjectId),
    #[error(transparent)]
    Select(#[from] SelectError),
    #[error(transparent)]
    Distill(#[from] DistillError),
}

fn list(ids: &[SubjectId]) -> String {
    ids.iter().map(|i| i.as_str()).collect::<Vec<_>>().join(", ")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Operator {
    ArithmeticReplace,
    ConditionalNegate,
    BoundaryShift,
    ReturnValueMutate,
    BooleanLiteralFlip,
}

impl fmt::Display for Operator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Action {
    SetOp(BinOp),
    IncrementReturn,
    NegateReturn,
    FlipLiteral,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mutant {
    pub id: usize,
    pub class: String,
    pub method: SubjectId,
    pub operator: Operator,
    pub node: NodeId,
    pub span: Span,
    /// Human-readable `before -> after`.
    pub description: String,
    action: Action,
    position: (usize, usize),
}

fn negated(op: BinOp) -> Option<BinOp> {
    Some(match op {
        BinOp::Eq => BinOp::Ne,
        BinOp::Ne => BinOp::Eq,
        BinOp::Lt => BinOp::Ge,
        BinOp::Ge => BinOp::Lt,
        BinOp::Le => BinOp::Gt,
        BinOp::Gt => BinOp::Le,
        _ => return None,
    })
}

fn boundary(op: BinOp) -> Option<BinOp> {
    Some(match op {
        BinOp::Lt => BinOp::Le,
        BinOp::Le => BinOp::Lt,
        BinOp::Gt => BinOp::Ge,
        BinOp::Ge => BinOp::Gt,
        _ => return None,
    })
}

fn arithmetic(op: BinOp) -> Option<BinOp> {
    Some(match op {
        BinOp::Add => BinOp::Sub,
        BinOp::Sub => BinOp::Add,
        BinOp::Mul => BinOp::Div,
        BinOp::Div => BinOp::Mul,
        _ => return None,
    })
}

struct Site {
    operator: Operator,
    node: NodeId,
    span: Span,
    action: Action,
    description: String,
}

struct Collector<'a> {
    ret: &'a Type,
    sites: Vec<Site>,
}

impl Collector<'_> {
    fn block(&mut self, b: &Block) {
        for s in &b.stmts {
            self.stmt(s);
        }
    }

    fn stmt(&mut self, s: &Stmt) {
        match &s.kind {
            StmtKind::Local { init: Some(e), .. } => self.expr(e),
            StmtKind::Local { init: None, .. } => {}
            StmtKind::Assign { value, .. } => self.expr(value),
            StmtKind::If {
                cond,
                then_block,
                else_block,
            } => {
                self.expr(cond);
                self.block(then_block);
                if let Some(b) = else_block {
                    self.block(b);
                }
            }
            StmtKind::While { cond, body } => {
                self.expr(cond);
                self.block(body);
            }
            StmtKind::Return(Some(e)) => {
                self.expr(e);
                let before = print_expr(e);
                let (action, after) = match self.ret {
                    Type::Int => (Action::IncrementReturn, format!("{before} + 1")),
                    Type::Bool => (Action::NegateReturn, format!("!({before})")),
                    _ => return,
                };
                self.sites.push(Site {
                    operator: Operator::ReturnValueMutate,
                    node: s.meta.id,
                    span: s.meta.span,
                    action,
                    description: format!("return {before} -> return {after}"),
                });
            }
            StmtKind::Return(None) => {}
            StmtKind::Assert(e) | StmtKind::Expr(e) => self.expr(e),
        }
    }

    fn expr(&mut self, e: &Expr) {
        match &e.kind {
            ExprKind::Bool(b) => self.sites.push(Site {
                operator: Operator::BooleanLiteralFlip,
                node: e.meta.id,
                span: e.meta.span,
                action: Action::FlipLiteral,
                description: format!("{b} -> {}", !b),
            }),
            ExprKind::Binary(op, l, r) => {
                self.expr(l);
                self.expr(r);
                let candidates = [
                    (Operator::ArithmeticReplace, arithmetic(*op)),
                    (Operator::ConditionalNegate, negated(*op)),
                    (Operator::BoundaryShift, boundary(*op)),
                ];
                for (operator, replacement) in candidates {
                    if let Some(new_op) = replacement {
                        let after = Expr::new(e.meta, ExprKind::Binary(new_op, l.clone(), r.clone()));
                        self.sites.push(Site {
                            operator,
                            node: e.meta.id,
                            span: e.meta.span,
                            action: Action::SetOp(new_op),
                            description: format!("{} -> {}", print_expr(e), print_expr(&after)),
                        });
                    }
                }
            }
            ExprKind::Unary(_, inner) => self.expr(inner),
            ExprKind::New { args, .. } => args.iter().for_each(|a| self.expr(a)),
            ExprKind::Call(call) => {
                if let Receiver::Expr(r) = &call.receiver {
                    self.expr(r);
                }
                call.args.iter().for_each(|a| self.expr(a));
            }
            ExprKind::Int(_) | ExprKind::Null | ExprKind::This | ExprKind::Var(_) | ExprKind::Field(_) => {}
        }
    }
}

/// Every applicable operator at every applicable node of the classes accepted
/// by `scope`, in source order.
pub fn generate_mutants(program: &Program, scope: &dyn Fn(&ClassDecl) -> bool) -> Vec<Mutant> {
    let mut out = Vec::new();
    for (ci, class) in program.classes.iter().enumerate() {
        if !scope(class) {
            continue;
        }
        for (mi, method) in class.methods.iter().enumerate() {
            let Some(body) = &method.body else { continue };
            let mut c = Collector {
                ret: &method.ret,
                sites: Vec::new(),
            };
            c.block(body);
            for site in c.sites {
                out.push(Mutant {
                    id: out.len(),
                    class: class.name.clone(),
                    method: SubjectId::method(&class.name, &method.name, method.arity()),
                    operator: site.operator,
                    node: site.node,
                    span: site.span,
                    description: site.description,
                    action: site.action,
                    position: (ci, mi),
                });
            }
        }
    }
    out
}

/// Mutants of every class that is not a test class.
pub fn generate_production_mutants(program: &Program, tests: &TestConfig) -> Vec<Mutant> {
    generate_mutants(program, &|c| !tests.is_test_class(&c.name))
}

fn apply_block(b: &mut Block, m: &Mutant) -> bool {
    b.stmts.iter_mut().any(|s| apply_stmt(s, m))
}

fn apply_stmt(s: &mut Stmt, m: &Mutant) -> bool {
    if s.meta.id == m.node {
        if let StmtKind::Return(Some(e)) = &mut s.kind {
            let span = e.meta.span;
            let inner = std::mem::replace(e, Expr::synthetic(span, ExprKind::Null));
            *e = match m.action {
                Action::IncrementReturn => Expr::synthetic(
                    span,
                    ExprKind::Binary(BinOp::Add, Box::new(inner), Box::new(Expr::synthetic(span, ExprKind::Int(1)))),
                ),
                _ => Expr::synthetic(span, ExprKind::Unary(UnOp::Not, Box::new(inner))),
            };
            return true;
        }
    }
    match &mut s.kind {
        StmtKind::Local { init: Some(e), .. } => apply_expr(e, m),
        StmtKind::Local { init: None, .. } | StmtKind::Return(None) => false,
        StmtKind::Assign { value, .. } => apply_expr(value, m),
        StmtKind::If {
            cond,
            then_block,
            else_block,
        } => apply_expr(cond, m) || apply_block(then_block, m) || else_block.as_mut().is_some_and(|b| apply_block(b, m)),
        StmtKind::While { cond, body } => apply_expr(cond, m) || apply_block(body, m),
        StmtKind::Return(Some(e)) | StmtKind::Assert(e) | StmtKind::Expr(e) => apply_expr(e, m),
    }
}

fn apply_expr(e: &mut Expr, m: &Mutant) -> bool {
    if e.meta.id == m.node {
        match (&mut e.kind, m.action) {
            (ExprKind::Binary(op, _, _), Action::SetOp(new_op)) => {
                *op = new_op;
                return true;
            }
            (ExprKind::Bool(b), Action::FlipLiteral) => {
                *b = !*b;
                return true;
            }
            _ => {}
        }
    }
    match &mut e.kind {
        ExprKind::Binary(_, l, r) => apply_expr(l, m) || apply_expr(r, m),
        ExprKind::Unary(_, inner) => apply_expr(inner, m),
        ExprKind::New { args, .. } => args.iter_mut().any(|a| apply_expr(a, m)),
        ExprKind::Call(call) => {
            let in_receiver = match &mut call.receiver {
                Receiver::Expr(r) => apply_expr(r, m),
                _ => false,
            };
            in_receiver || call.args.iter_mut().any(|a| apply_expr(a, m))
        }
        _ => false,
    }
}

/// A copy of `program` with the single node of `mutant` rewritten.
///
/// Panics if the mutant was generated from a different program.
pub fn apply(program: &Program, mutant: &Mutant) -> Program {
    let mut out = program.clone();
    let (ci, mi) = mutant.position;
    let body = out.classes[ci].methods[mi]
        .body
        .as_mut()
        .expect("mutants are only generated for concrete methods");
    assert!(apply_block(body, mutant), "mutant {} does not match its program", mutant.id);
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MutantInfo {
    pub id: usize,
    pub class: String,
}

/// Outcome of running every mutant against every test of a suite.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KillMatrix {
    pub tests: Vec<SubjectId>,
    pub mutants: Vec<MutantInfo>,
    pub baseline: BTreeMap<SubjectId, TestStatus>,
    /// Classes with at least one body executed by each test.
    pub covered: BTreeMap<SubjectId, BTreeSet<String>>,
    /// For each mutant (by position), the tests that kill it.
    pub killers: Vec<BTreeSet<SubjectId>>,
}

impl KillMatrix {
    /// Runs `tests` on the original program and on every mutant. A test is
    /// only re-run on mutants of methods its baseline run executed.
    pub fn build(program: &Program, tests: &[SubjectId], mutants: &[Mutant], cfg: &RunConfig) -> KillMatrix {
        let baseline: Vec<TestOutcome> = run_suite(program, tests, cfg);
        let executed: Vec<BTreeSet<SubjectId>> = baseline.iter().map(TestOutcome::executed_methods).collect();
        let killers = mutants
            .par_iter()
            .map(|m| {
                let mutated = apply(program, m);
                baseline
                    .iter()
                    .zip(&executed)
                    .filter(|(o, ran)| o.status == TestStatus::Pass && ran.contains(&m.method))
                    .filter(|(o, _)| run_test(&mutated, &o.test, cfg).status != TestStatus::Pass)
                    .map(|(o, _)| o.test.clone())
                    .collect()
            })
            .collect();
        KillMatrix {
            tests: tests.to_vec(),
            mutants: mutants
                .iter()
                .map(|m| MutantInfo {
                    id: m.id,
                    class: m.class.clone(),
                })
                .collect(),
            covered: baseline.iter().map(|o| (o.test.clone(), o.covered_classes())).collect(),
            baseline: baseline.into_iter().map(|o| (o.test, o.status)).collect(),
            killers,
        }
    }

    /// A matrix with one passing test covering every class, where class
    /// `name` has `mutants` mutants of which the first `killed` are killed.
    pub fn synthetic(classes: &[(&str, usize, usize)]) -> KillMatrix {
        let test = SubjectId::from("method:SyntheticTest.test/0");
        let mut mutants = Vec::new();
        let mut killers = Vec::new();
        for (class, count, killed) in classes {
            for i in 0..*count {
                mutants.push(MutantInfo {
                    id: mutants.len(),
                    class: class.to_string(),
                });
                killers.push(if i < *killed { BTreeSet::from([test.clone()]) } else { BTreeSet::new() });
            }
        }
        KillMatrix {
            tests: vec![test.clone()],
            baseline: BTreeMap::from([(test.clone(), TestStatus::Pass)]),
            covered: BTreeMap::from([(test, classes.iter().map(|c| c.0.to_string()).collect())]),
            mutants,
            killers,
        }
    }

    fn check_suite(&self, suite: &BTreeSet<SubjectId>) -> Result<(), MutationError> {
        if let Some(t) = suite.iter().find(|t| !self.baseline.contains_key(*t)) {
            return Err(MutationError::UnknownTest(t.clone()));
        }
        let failing: Vec<SubjectId> = suite
            .iter()
            .filter(|t| self.baseline[*t] != TestStatus::Pass)
            .cloned()
            .collect();
        if failing.is_empty() {
            Ok(())
        } else {
            Err(MutationError::BaselineFailure(failing))
        }
    }

    /// Positions of mutants killed by at least one test of `suite`.
    pub fn killed_by(&self, suite: &BTreeSet<SubjectId>) -> BTreeSet<usize> {
        self.killers
            .iter()
            .enumerate()
            .filter(|(_, k)| !k.is_disjoint(suite))
            .map(|(i, _)| i)
            .collect()
    }

    pub fn covered_by(&self, suite: &BTreeSet<SubjectId>) -> BTreeSet<String> {
        suite.iter().filter_map(|t| self.covered.get(t)).flatten().cloned().collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MutationCoverage {
    /// Mutants in classes the suite covers.
    pub introduced: usize,
    pub killed: usize,
    /// Mutants in classes the suite never executes.
    pub uncovered: usize,
}

impl MutationCoverage {
    /// `killed / introduced`; zero when nothing was introduced.
    pub fn ratio(&self) -> f64 {
        if self.introduced == 0 {
            0.0
        } else {
            self.killed as f64 / self.introduced as f64
        }
    }
}

pub fn mutation_coverage(matrix: &KillMatrix, suite: &BTreeSet<SubjectId>) -> Result<MutationCoverage, MutationError> {
    matrix.check_suite(suite)?;
    let covered = matrix.covered_by(suite);
    let killed = matrix.killed_by(suite);
    let mut cov = MutationCoverage {
        introduced: 0,
        killed: 0,
        uncovered: 0,
    };
    for (i, m) in matrix.mutants.iter().enumerate() {
        if covered.contains(&m.class) {
            cov.introduced += 1;
            cov.killed += usize::from(killed.contains(&i));
        } else {
            cov.uncovered += 1;
        }
    }
    Ok(cov)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Classification {
    Improved,
    Same,
    Worsened,
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Classification::Improved => "improved",
            Classification::Same => "same",
            Classification::Worsened => "worsened",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassRow {
    pub class: String,
    pub mutants: usize,
    pub killed_full: BTreeSet<usize>,
    pub killed_a: BTreeSet<usize>,
    pub killed_b: BTreeSet<usize>,
    pub suite_a: BTreeSet<SubjectId>,
    pub suite_b: BTreeSet<SubjectId>,
    pub classification: Classification,
}

impl ClassRow {
    pub fn coverage(&self, killed: &BTreeSet<usize>) -> f64 {
        if self.mutants == 0 {
            0.0
        } else {
            killed.len() as f64 / self.mutants as f64
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonReport {
    pub label_a: String,
    pub label_b: String,
    pub full_suite: BTreeSet<SubjectId>,
    pub rows: Vec<ClassRow>,
    pub total_mutants: usize,
    pub uncovered_mutants: usize,
    pub killed_full: usize,
    pub killed_a: usize,
    pub killed_b: usize,
    /// Mean over rows of |reduced suite| / |full suite|.
    pub reduction_ratio_a: f64,
    pub reduction_ratio_b: f64,
}

impl ComparisonReport {
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record([
            "class".to_string(),
            "mutants".to_string(),
            "killed_full".to_string(),
            format!("killed_{}reduced", self.label_a),
            format!("killed_{}reduced", self.label_b),
            "classification".to_string(),
        ])
        .expect("in-memory write");
        for r in &self.rows {
            w.write_record([
                r.class.clone(),
                r.mutants.to_string(),
                r.killed_full.len().to_string(),
                r.killed_a.len().to_string(),
                r.killed_b.len().to_string(),
                r.classification.to_string(),
            ])
            .expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv output is utf-8")
    }

    pub fn summary(&self) -> String {
        let (a, b) = (&self.label_a, &self.label_b);
        let count = |c: Classification| self.rows.iter().filter(|r| r.classification == c).count();
        let mut s = String::new();
        writeln!(s, "classes evaluated: {}", self.rows.len()).unwrap();
        writeln!(s, "mutants: {} ({} uncovered by the full suite)", self.total_mutants, self.uncovered_mutants).unwrap();
        writeln!(s, "killed by full suite: {}", self.killed_full).unwrap();
        writeln!(s, "killed by {a}-reduced suites: {}", self.killed_a).unwrap();
        writeln!(s, "killed by {b}-reduced suites: {}", self.killed_b).unwrap();
        writeln!(s, "killed-mutant difference ({b} - {a}): {}", self.killed_b as i64 - self.killed_a as i64).unwrap();
        writeln!(
            s,
            "{b} vs {a}: {} improved, {} same, {} worsened",
            count(Classification::Improved),
            count(Classification::Same),
            count(Classification::Worsened)
        )
        .unwrap();
        writeln!(s, "reduction ratio {a}: {:.4}", self.reduction_ratio_a).unwrap();
        writeln!(s, "reduction ratio {b}: {:.4}", self.reduction_ratio_b).unwrap();
        s
    }
}

/// Test methods belonging to a set of test classes.
pub fn expand_classes(tests: &[SubjectId], classes: &BTreeSet<SubjectId>) -> BTreeSet<SubjectId> {
    let names: BTreeSet<&str> = classes.iter().filter_map(|c| c.class_name()).collect();
    tests
        .iter()
        .filter(|t| t.declaring_class().is_some_and(|c| names.contains(c)))
        .cloned()
        .collect()
}

/// Compares per-class reduced suites (sets of test classes) against the
/// full suite, class by class.
pub fn compare_suites(
    matrix: &KillMatrix,
    full: &BTreeSet<SubjectId>,
    labels: (&str, &str),
    reduced_a: &BTreeMap<String, BTreeSet<SubjectId>>,
    reduced_b: &BTreeMap<String, BTreeSet<SubjectId>>,
) -> Result<ComparisonReport, MutationError> {
    let full_methods = expand_classes(&matrix.tests, full);
    let full_cov = mutation_coverage(matrix, &full_methods)?;
    let covered = matrix.covered_by(&full_methods);
    let killed_full = matrix.killed_by(&full_methods);
    let mut by_class: BTreeMap<&str, BTreeSet<usize>> = BTreeMap::new();
    for (i, m) in matrix.mutants.iter().enumerate() {
        by_class.entry(m.class.as_str()).or_default().insert(i);
    }
    let empty = BTreeSet::new();
    let mut rows = Vec::new();
    let (mut ratio_a, mut ratio_b) = (0.0, 0.0);
    let no_mutants = BTreeSet::new();
    let production = |c: &&String| by_class.contains_key(c.as_str()) || reduced_a.contains_key(*c) || reduced_b.contains_key(*c);
    for class in covered.iter().filter(production) {
        let ids = by_class.get(class.as_str()).unwrap_or(&no_mutants);
        let suite_a = reduced_a.get(class).unwrap_or(&empty);
        let suite_b = reduced_b.get(class).unwrap_or(&empty);
        let killed = |suite: &BTreeSet<SubjectId>| -> BTreeSet<usize> {
            let kills = matrix.killed_by(&expand_classes(&matrix.tests, suite));
            ids.intersection(&kills).copied().collect()
        };
        let (ka, kb) = (killed(suite_a), killed(suite_b));
        if !full.is_empty() {
            ratio_a += reduction_ratio(full, suite_a)?;
            ratio_b += reduction_ratio(full, suite_b)?;
        }
        rows.push(ClassRow {
            class: class.clone(),
            mutants: ids.len(),
            killed_full: ids.intersection(&killed_full).copied().collect(),
            classification: match kb.len().cmp(&ka.len()) {
                std::cmp::Ordering::Greater => Classification::Improved,
                std::cmp::Ordering::Equal => Classification::Same,
                std::cmp::Ordering::Less => Classification::Worsened,
            },
            killed_a: ka,
            killed_b: kb,
            suite_a: suite_a.clone(),
            suite_b: suite_b.clone(),
        });
    }
    let n = rows.len().max(1) as f64;
    Ok(ComparisonReport {
        label_a: labels.0.to_string(),
        label_b: labels.1.to_string(),
        full_suite: full.clone(),
        total_mutants: matrix.mutants.len(),
        uncovered_mutants: full_cov.uncovered,
        killed_full: rows.iter().map(|r| r.killed_full.len()).sum(),
        killed_a: rows.iter().map(|r| r.killed_a.len()).sum(),
        killed_b: rows.iter().map(|r| r.killed_b.len()).sum(),
        reduction_ratio_a: ratio_a / n,
        reduction_ratio_b: ratio_b / n,
        rows,
    })
}

/// Per-class reduced suites for every alive class that is not a test class.
pub fn reduced_suites(model: &ChangeModel, cfg: &TestConfig) -> BTreeMap<String, BTreeSet<SubjectId>> {
    model
        .alive_subjects()
        .filter(|s| s.kind == crate::model::SubjectKind::Class && !cfg.is_test_class(&s.identifier))
        .filter_map(|s| select_for_class(model, &s.id, cfg).ok().map(|t| (s.identifier.clone(), t)))
        .collect()
}

#[derive(Debug, Clone)]
pub struct EvaluationConfig {
    pub mode_a: ResolutionMode,
    pub mode_b: ResolutionMode,
    pub include_constructors: bool,
    pub run: RunConfig,
}

impl Default for EvaluationConfig {
    fn default() -> Self {
        EvaluationConfig {
            mode_a: ResolutionMode::Static,
            mode_b: ResolutionMode::Polymorphic,
            include_constructors: false,
            run: RunConfig::default(),
        }
    }
}

/// Full pipeline on one snapshot: distill under both modes, build per-class
/// reduced suites, mutate the production classes, run everything and compare.
pub fn evaluate(program: &Program, cfg: &EvaluationConfig) -> Result<ComparisonReport, MutationError> {
    let tests_cfg = &cfg.run.tests;
    let model = |mode| distill_initial(program, Resolution::new(mode).with_constructors(cfg.include_constructors));
    let (model_a, model_b) = (model(cfg.mode_a)?, model(cfg.mode_b)?);
    let tests = discover_tests(program, tests_cfg);
    let full: BTreeSet<SubjectId> = tests
        .iter()
        .filter_map(|t| t.declaring_class().map(SubjectId::class))
        .collect();
    let baseline = run_suite(program, &tests, &cfg.run);
    let failing: Vec<SubjectId> = baseline
        .iter()
        .filter(|o| o.status != TestStatus::Pass)
        .map(|o| o.test.clone())
        .collect();
    if !failing.is_empty() {
        return Err(MutationError::BaselineFailure(failing));
    }
    let mutants = generate_production_mutants(program, tests_cfg);
    let matrix = KillMatrix::build(program, &tests, &mutants, &cfg.run);
    let (label_a, label_b) = (cfg.mode_a.to_string(), cfg.mode_b.to_string());
    compare_suites(
        &matrix,
        &full,
        (&label_a, &label_b),
        &reduced_suites(&model_a, tests_cfg),
        &reduced_suites(&model_b, tests_cfg),
    )
}
