//! Checks a model's selections against the tests that actually execute each
//! method.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;

use crate::model::{ChangeModel, SubjectId, SubjectKind};
use crate::runtime::{dynamic_relevant_tests, CallKind, TestOutcome};
use crate::selector::{tests_for_method, TestConfig};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Miss {
    pub method: SubjectId,
    pub test: SubjectId,
    /// Every execution of `method` in the test happened beneath a
    /// constructor call.
    pub constructor_only: bool,
}

impl fmt::Display for Miss {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.constructor_only {
            write!(
                f,
                "`{}` runs `{}` only beneath constructor calls; it is selected once constructor invocations are modelled",
                self.test, self.method
            )
        } else {
            write!(f, "`{}` runs `{}` but is not selected for it", self.test, self.method)
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct SafetyReport {
    pub methods_checked: usize,
    pub misses: Vec<Miss>,
}

impl SafetyReport {
    pub fn is_safe(&self) -> bool {
        self.misses.is_empty()
    }

    /// One line per miss.
    pub fn diagnostics(&self) -> Vec<String> {
        self.misses.iter().map(|m| m.to_string()).collect()
    }

    pub fn unexplained(&self) -> impl Iterator<Item = &Miss> {
        self.misses.iter().filter(|m| !m.constructor_only)
    }
}

/// Whether every trace entry running `method` has a constructor call on its
/// caller chain (itself included).
pub fn constructor_only(outcome: &TestOutcome, method: &SubjectId) -> bool {
    let under_constructor = |mut i: usize| loop {
        let entry = &outcome.trace[i];
        if entry.kind == CallKind::Constructor {
            return true;
        }
        match entry.caller {
            Some(parent) => i = parent,
            None => return false,
        }
    };
    let mut hits = outcome
        .trace
        .iter()
        .enumerate()
        .filter(|(_, e)| &e.resolved == method)
        .map(|(i, _)| i)
        .peekable();
    hits.peek().is_some() && hits.all(under_constructor)
}

/// For every concrete alive method, compares the tests that executed it with
/// the tests the model selects for a modification of it.
pub fn audit(model: &ChangeModel, outcomes: &[TestOutcome], cfg: &TestConfig) -> SafetyReport {
    let dynamic = dynamic_relevant_tests(outcomes);
    let by_test: BTreeMap<&SubjectId, &TestOutcome> = outcomes.iter().map(|o| (&o.test, o)).collect();
    let mut report = SafetyReport::default();
    let empty = BTreeSet::new();
    for method in model
        .alive_subjects()
        .filter(|s| s.kind == SubjectKind::Method && !s.is_abstract)
    {
        report.methods_checked += 1;
        let ran = dynamic.get(&method.id).unwrap_or(&empty);
        if ran.is_empty() {
            continue;
        }
        let selected = tests_for_method(model, &method.id, cfg);
        for test in ran.difference(&selected) {
            report.misses.push(Miss {
                method: method.id.clone(),
                test: test.clone(),
                constructor_only: by_test.get(test).is_some_and(|o| constructor_only(o, &method.id)),
            });
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distiller::distill_initial;
    use crate::frontend::parse_source;
    use crate::model::{Resolution, ResolutionMode};
    use crate::runtime::{discover_tests, run_suite, RunConfig};

    const SRC: &str = "class Log { int n; void hit() { n = n + 1; } }\n\
                       class Box { Log log; Box() { log = new Log(); log.hit(); } int size() { return 1; } }\n\
                       class BoxTest { void testSize() { Box b = new Box(); assert b.size() == 1; } }";

    fn audit_with(ctors: bool) -> SafetyReport {
        let p = parse_source(SRC).unwrap().program;
        let cfg = TestConfig::default();
        let outcomes = run_suite(&p, &discover_tests(&p, &cfg), &RunConfig::default());
        let res = Resolution::new(ResolutionMode::Polymorphic).with_constructors(ctors);
        audit(&distill_initial(&p, res).unwrap(), &outcomes, &cfg)
    }

    #[test]
    fn constructor_paths_are_attributed() {
        let report = audit_with(false);
        let missed: Vec<&str> = report.misses.iter().map(|m| m.method.as_str()).collect();
        assert_eq!(missed, vec!["method:Box.new/0", "method:Log.hit/0"]);
        assert!(report.misses.iter().all(|m| m.constructor_only));
        assert!(report.diagnostics()[0].contains("constructor"));
    }

    #[test]
    fn modelled_constructors_close_the_gap() {
        assert!(audit_with(true).is_safe());
    }
}
