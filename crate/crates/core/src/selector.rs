//! Change-based test selection.
//!
//! For each selected change, find the method it happened in, then walk the
//! invocational dependees of that method's addition upward: every invoking
//! method is either a test (collected) or analysed in turn. Each selected
//! change gets its own visited set, so answers never depend on query order.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use regex::Regex;
use thiserror::Error;

use crate::model::{Change, ChangeId, ChangeModel, Subject, SubjectId, SubjectKind};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SelectError {
    #[error("unknown or removed class `{0}`")]
    UnknownClass(SubjectId),
    #[error("full test suite is empty")]
    EmptyFullSuite,
    #[error("reduced suite contains `{0}`, which is not in the full suite")]
    NotASubset(SubjectId),
    #[error("invalid pattern: {0}")]
    BadPattern(String),
}

/// Decides which classes and methods are tests.
#[derive(Debug, Clone)]
pub struct TestConfig {
    pub class_pattern: Regex,
    pub method_pattern: Regex,
    /// Zero-argument methods run by the harness before every test of their class.
    pub setup_names: Vec<String>,
}

pub const DEFAULT_TEST_CLASS_PATTERN: &str = "Test$";
pub const DEFAULT_TEST_METHOD_PATTERN: &str = "^[tT]est|Test$";

impl Default for TestConfig {
    fn default() -> Self {
        TestConfig {
            class_pattern: Regex::new(DEFAULT_TEST_CLASS_PATTERN).expect("valid regex"),
            method_pattern: Regex::new(DEFAULT_TEST_METHOD_PATTERN).expect("valid regex"),
            setup_names: vec!["setUp".into(), "SetUp".into()],
        }
    }
}

impl TestConfig {
    pub fn with_patterns(class_pattern: Option<&str>, method_pattern: Option<&str>) -> Result<Self, SelectError> {
        let mut cfg = TestConfig::default();
        if let Some(p) = class_pattern {
            cfg.class_pattern = Regex::new(p).map_err(|e| SelectError::BadPattern(e.to_string()))?;
        }
        if let Some(p) = method_pattern {
            cfg.method_pattern = Regex::new(p).map_err(|e| SelectError::BadPattern(e.to_string()))?;
        }
        Ok(cfg)
    }

    pub fn is_test_class(&self, class: &str) -> bool {
        self.class_pattern.is_match(class)
    }

    pub fn is_setup(&self, class: &str, method: &str, arity: usize) -> bool {
        arity == 0 && self.is_test_class(class) && self.setup_names.iter().any(|s| s == method)
    }

    pub fn is_test_method(&self, class: &str, method: &str, arity: usize) -> bool {
        arity == 0
            && self.is_test_class(class)
            && !self.is_setup(class, method, arity)
            && self.method_pattern.is_match(method)
    }

    fn owner_class(subject: &Subject) -> Option<&str> {
        subject.owner_id.as_ref().and_then(|o| o.class_name())
    }

    pub fn is_test_subject(&self, subject: &Subject) -> bool {
        subject.kind == SubjectKind::Method
            && !subject.is_constructor
            && !subject.is_abstract
            && Self::owner_class(subject)
                .is_some_and(|c| self.is_test_method(c, &subject.identifier, subject.arity))
    }

    /// Methods the harness runs around every test of their class: set-up
    /// methods and constructors of test classes.
    pub fn is_fixture_subject(&self, subject: &Subject) -> bool {
        subject.kind == SubjectKind::Method
            && Self::owner_class(subject).is_some_and(|c| {
                (subject.is_constructor && subject.arity == 0 && self.is_test_class(c))
                    || self.is_setup(c, &subject.identifier, subject.arity)
            })
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SelectionDiagnostics {
    /// Alive invocations with no candidate callee.
    pub unresolved_invocations: Vec<SubjectId>,
    /// Methods reached again while their own analysis was still in progress.
    pub cycles: Vec<SubjectId>,
    /// Changes without an enclosing method, answered by aggregating over the
    /// methods of their class.
    pub class_level: Vec<ChangeId>,
    /// Changes for which nothing could be located.
    pub unlocated: Vec<ChangeId>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SelectionResult {
    pub per_change: BTreeMap<ChangeId, BTreeSet<SubjectId>>,
    pub diagnostics: SelectionDiagnostics,
}

impl SelectionResult {
    pub fn all_tests(&self) -> BTreeSet<SubjectId> {
        self.per_change.values().flatten().cloned().collect()
    }
}

#[derive(Default)]
struct Walk {
    tests: BTreeSet<SubjectId>,
    cycles: BTreeSet<SubjectId>,
    class_level: bool,
    unlocated: bool,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Visit {
    InProgress,
    Done,
}

struct Walker<'a> {
    model: &'a ChangeModel,
    cfg: &'a TestConfig,
    state: BTreeMap<ChangeId, Visit>,
    out: Walk,
}

impl<'a> Walker<'a> {
    fn subject(&self, c: &Change) -> &'a Subject {
        &self.model.subjects()[&c.subject_id]
    }

    fn tests_of_class(&mut self, class: &SubjectId) {
        let tests: Vec<SubjectId> = self
            .model
            .contained(class)
            .filter(|s| self.cfg.is_test_subject(s))
            .map(|s| s.id.clone())
            .collect();
        self.out.tests.extend(tests);
    }

    fn start(&mut self, method_add: &'a Change) {
        let subject = self.subject(method_add);
        if self.cfg.is_test_subject(subject) {
            self.out.tests.insert(subject.id.clone());
        }
        if !self.state.contains_key(&method_add.change_id) {
            self.visit(method_add);
        }
    }

    fn visit(&mut self, method_add: &'a Change) {
        self.state.insert(method_add.change_id, Visit::InProgress);
        let subject = self.subject(method_add);
        if self.cfg.is_fixture_subject(subject) {
            if let Some(owner) = &subject.owner_id {
                if subject.is_constructor {
                    self.tests_of_class(owner);
                } else {
                    for class in subclasses_of(self.model, owner) {
                        self.tests_of_class(&class);
                    }
                }
            }
        }
        let invocations = self
            .model
            .invocational_dependees(method_add.change_id)
            .unwrap_or_default();
        for inv in invocations {
            let Some(invoker) = self.model.enclosing_method_addition(inv) else {
                continue;
            };
            let invoker_subject = self.subject(invoker);
            if self.cfg.is_test_subject(invoker_subject) {
                self.out.tests.insert(invoker_subject.id.clone());
                continue;
            }
            match self.state.get(&invoker.change_id) {
                None => self.visit(invoker),
                Some(Visit::InProgress) => {
                    self.out.cycles.insert(invoker_subject.id.clone());
                }
                Some(Visit::Done) => {}
            }
        }
        self.state.insert(method_add.change_id, Visit::Done);
    }
}

/// `class` and every alive class inheriting from it.
fn subclasses_of(model: &ChangeModel, class: &SubjectId) -> Vec<SubjectId> {
    model
        .alive_subjects()
        .filter(|s| s.kind == SubjectKind::Class)
        .filter(|s| {
            let mut seen = BTreeSet::new();
            let mut cursor = Some(&s.id);
            while let Some(id) = cursor {
                if id == class {
                    return true;
                }
                if !seen.insert(id) {
                    break;
                }
                cursor = model.subject(id).and_then(|c| c.superclass_id.as_ref());
            }
            false
        })
        .map(|s| s.id.clone())
        .collect()
}

fn tests_for_change(model: &ChangeModel, change: &Change, cfg: &TestConfig) -> Walk {
    let mut walker = Walker {
        model,
        cfg,
        state: BTreeMap::new(),
        out: Walk::default(),
    };
    if let Some(method_add) = model.enclosing_method_addition(change) {
        walker.start(method_add);
        return walker.out;
    }
    match model.subject(&change.subject_id) {
        Some(s) if s.kind == SubjectKind::Class => {
            walker.out.class_level = true;
            let adds: Vec<&Change> = model
                .contained(&s.id)
                .filter_map(|m| model.latest_add(&m.id))
                .collect();
            for add in adds {
                walker.start(add);
            }
        }
        _ => walker.out.unlocated = true,
    }
    walker.out
}

/// Maps each selected change to the tests relevant to it.
pub fn select_relevant_tests(model: &ChangeModel, selected: &[Change], cfg: &TestConfig) -> SelectionResult {
    let walks: Vec<(ChangeId, Walk)> = selected
        .par_iter()
        .map(|c| (c.change_id, tests_for_change(model, c, cfg)))
        .collect();
    let mut result = SelectionResult::default();
    let mut cycles = BTreeSet::new();
    for (id, walk) in walks {
        if walk.class_level {
            result.diagnostics.class_level.push(id);
        }
        if walk.unlocated {
            result.diagnostics.unlocated.push(id);
        }
        cycles.extend(walk.cycles);
        result.per_change.entry(id).or_default().extend(walk.tests);
    }
    result.diagnostics.class_level.sort();
    result.diagnostics.class_level.dedup();
    result.diagnostics.unlocated.sort();
    result.diagnostics.unlocated.dedup();
    result.diagnostics.cycles = cycles.into_iter().collect();
    if !selected.is_empty() {
        result.diagnostics.unresolved_invocations = model.unresolved_invocations();
    }
    result
}

/// Tests relevant to a hypothetical modification of `method`.
pub fn tests_for_method(model: &ChangeModel, method: &SubjectId, cfg: &TestConfig) -> BTreeSet<SubjectId> {
    match model.synthetic_modify(method) {
        Ok(change) => tests_for_change(model, &change, cfg).tests,
        Err(_) => BTreeSet::new(),
    }
}

/// The reduced suite for a class: test classes owning a test relevant to a
/// modification of any of its methods.
pub fn select_for_class(
    model: &ChangeModel,
    class: &SubjectId,
    cfg: &TestConfig,
) -> Result<BTreeSet<SubjectId>, SelectError> {
    let is_class = model
        .subject(class)
        .is_some_and(|s| s.kind == SubjectKind::Class);
    if !is_class || !model.is_alive(class) {
        return Err(SelectError::UnknownClass(class.clone()));
    }
    let changes: Vec<Change> = model
        .contained(class)
        .filter_map(|m| model.synthetic_modify(&m.id).ok())
        .collect();
    let selection = select_relevant_tests(model, &changes, cfg);
    Ok(selection
        .all_tests()
        .iter()
        .filter_map(|t| model.subject(t).and_then(|s| s.owner_id.clone()))
        .collect())
}

/// Alive test classes in the model.
pub fn test_classes(model: &ChangeModel, cfg: &TestConfig) -> BTreeSet<SubjectId> {
    model
        .alive_subjects()
        .filter(|s| s.kind == SubjectKind::Class && cfg.is_test_class(&s.identifier))
        .map(|s| s.id.clone())
        .collect()
}

/// Alive test methods in the model.
pub fn test_methods(model: &ChangeModel, cfg: &TestConfig) -> BTreeSet<SubjectId> {
    model
        .alive_subjects()
        .filter(|s| cfg.is_test_subject(s))
        .map(|s| s.id.clone())
        .collect()
}

/// Fraction of the full suite retained by a reduced suite.
pub fn reduction_ratio(full: &BTreeSet<SubjectId>, reduced: &BTreeSet<SubjectId>) -> Result<f64, SelectError> {
    if full.is_empty() {
        return Err(SelectError::EmptyFullSuite);
    }
    if let Some(extra) = reduced.difference(full).next() {
        return Err(SelectError::NotASubset(extra.clone()));
    }
    Ok(reduced.len() as f64 / full.len() as f64)
}
