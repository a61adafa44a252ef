//! Derives change objects from program snapshots.
//!
//! The first snapshot becomes a list of additions. Each later snapshot is
//! diffed against the alive state of the model by subject id and appended as
//! removals (dependents first), modifications and additions (containers
//! first). Invocations whose set of candidate callees differs in the new
//! snapshot are removed and re-added, so callee edges always describe the
//! current code.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write;

use thiserror::Error;

use crate::frontend::ast::{ClassDecl, MethodDecl, Program};
use crate::frontend::extract_entities;
use crate::model::{
    ChangeId, ChangeKind, ChangeModel, ModelError, Resolution, ResolutionMode, Subject, SubjectId, SubjectKind,
};

#[derive(Debug, Error)]
pub enum DistillError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("old snapshot does not match the model's alive state: {0}")]
    InconsistentBase(String),
}

/// Builds a model containing one Add per subject of `program`.
pub fn distill_initial(program: &Program, resolution: Resolution) -> Result<ChangeModel, DistillError> {
    let mut model = ChangeModel::new(resolution);
    for subject in extract_entities(program, resolution) {
        model.record(ChangeKind::Add, subject)?;
    }
    Ok(model)
}

fn by_id(subjects: Vec<Subject>) -> BTreeMap<SubjectId, Subject> {
    subjects.into_iter().map(|s| (s.id.clone(), s)).collect()
}

fn find_method<'a>(program: &'a Program, subject: &Subject) -> Option<&'a MethodDecl> {
    let class = program.class(subject.owner_id.as_ref()?.class_name()?)?;
    class
        .methods
        .iter()
        .find(|m| m.is_constructor == subject.is_constructor && m.name == subject.identifier && m.arity() == subject.arity)
}

fn find_class<'a>(program: &'a Program, subject: &Subject) -> Option<&'a ClassDecl> {
    program.class(&subject.identifier)
}

fn class_changed(old: &ClassDecl, new: &ClassDecl) -> bool {
    old.superclass != new.superclass || old.fields != new.fields
}

/// Appends the changes turning `old` into `new` and returns their ids.
pub fn distill_delta(model: &mut ChangeModel, old: &Program, new: &Program) -> Result<Vec<ChangeId>, DistillError> {
    let resolution = model.resolution();
    let old_subjects = by_id(extract_entities(old, resolution));
    let alive: BTreeMap<SubjectId, Subject> = model.alive_subjects().map(|s| (s.id.clone(), s.clone())).collect();
    if old_subjects != alive {
        let missing = old_subjects.keys().find(|k| !alive.contains_key(*k));
        let extra = alive.keys().find(|k| !old_subjects.contains_key(*k));
        let differing = old_subjects.iter().find(|(k, v)| alive.get(*k).is_some_and(|a| a != *v));
        let reason = match (missing, extra, differing) {
            (Some(id), _, _) => format!("`{id}` is in the old snapshot but not alive in the model"),
            (_, Some(id), _) => format!("`{id}` is alive in the model but absent from the old snapshot"),
            (_, _, Some((id, _))) => format!("`{id}` differs between the old snapshot and the model"),
            _ => "subject tables differ".to_string(),
        };
        return Err(DistillError::InconsistentBase(reason));
    }
    let new_list = extract_entities(new, resolution);
    let new_subjects = by_id(new_list.clone());

    // Callee sets each invocation will have once the new snapshot is in place.
    let target = distill_initial(new, resolution)?;
    let target_callees = |id: &SubjectId| -> BTreeSet<SubjectId> {
        target.latest_add(id).map(|c| target.callee_edges(c)).unwrap_or_default()
    };

    let removed: BTreeSet<&SubjectId> = old_subjects.keys().filter(|k| !new_subjects.contains_key(*k)).collect();
    let relinked: BTreeSet<&SubjectId> = old_subjects
        .values()
        .filter(|s| s.kind == SubjectKind::Invocation && new_subjects.contains_key(&s.id))
        .filter(|s| {
            let current = model.latest_add(&s.id).map(|c| model.callee_edges(c)).unwrap_or_default();
            current != target_callees(&s.id)
        })
        .map(|s| &s.id)
        .collect();

    let mut emitted = Vec::new();
    for kind in [SubjectKind::Invocation, SubjectKind::Method, SubjectKind::Class] {
        for id in removed.iter().chain(relinked.iter()) {
            let subject = &old_subjects[*id];
            if subject.kind == kind {
                emitted.push(model.record(ChangeKind::Remove, subject.clone())?);
            }
        }
    }

    for subject in new_list.iter().filter(|s| s.kind == SubjectKind::Class) {
        if let Some(prev) = old_subjects.get(&subject.id) {
            let (Some(a), Some(b)) = (find_class(old, prev), find_class(new, subject)) else {
                continue;
            };
            if class_changed(a, b) || prev != subject {
                emitted.push(model.record(ChangeKind::Modify, subject.clone())?);
            }
        }
    }
    for subject in new_list.iter().filter(|s| s.kind == SubjectKind::Method) {
        if let Some(prev) = old_subjects.get(&subject.id) {
            let (Some(a), Some(b)) = (find_method(old, prev), find_method(new, subject)) else {
                continue;
            };
            if a != b || prev != subject {
                emitted.push(model.record(ChangeKind::Modify, subject.clone())?);
            }
        }
    }

    for kind in [SubjectKind::Class, SubjectKind::Method, SubjectKind::Invocation] {
        for subject in new_list.iter().filter(|s| s.kind == kind) {
            if !old_subjects.contains_key(&subject.id) || relinked.contains(&subject.id) {
                emitted.push(model.record(ChangeKind::Add, subject.clone())?);
            }
        }
    }
    Ok(emitted)
}

/// Distills a sequence of snapshots into one model.
pub fn distill_history(snapshots: &[Program], resolution: Resolution) -> Result<ChangeModel, DistillError> {
    let Some((first, rest)) = snapshots.split_first() else {
        return Ok(ChangeModel::new(resolution));
    };
    let mut model = distill_initial(first, resolution)?;
    let mut prev = first;
    for next in rest {
        distill_delta(&mut model, prev, next)?;
        prev = next;
    }
    Ok(model)
}

/// The same change history with invocations linked under the other mode.
pub fn polymorphic_relink(model: &ChangeModel) -> ChangeModel {
    model.relinked(model.resolution().mode.other())
}

/// The same change history with invocations linked under `mode`.
pub fn relink_to(model: &ChangeModel, mode: ResolutionMode) -> ChangeModel {
    if model.resolution().mode == mode {
        model.clone()
    } else {
        model.relinked(mode)
    }
}

/// One line per change: `<id> <kind> <subject> <- [deps]`.
pub fn describe_changes(model: &ChangeModel, ids: &[ChangeId]) -> String {
    let mut out = String::new();
    for id in ids {
        if let Some(c) = model.change(*id) {
            let deps: Vec<String> = c.depends_on.iter().map(|d| d.to_string()).collect();
            writeln!(out, "{:>4} {:<6} {} <- [{}]", c.change_id, c.kind, c.subject_id, deps.join(", ")).unwrap();
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frontend::parse_source;

    const BASE: &str = "class Foo { int foo() { return 1; } }\n\
                        class Bar extends Foo { int foo() { return 2; } }\n\
                        class FooBarTest { Foo f; void SetUp() { f = new Bar(); } void fooTest() { assert f.foo() == 2; } }";

    fn program(src: &str) -> Program {
        parse_source(src).unwrap().program
    }

    #[test]
    fn identical_snapshots_yield_empty_delta() {
        let p = program(BASE);
        for mode in [ResolutionMode::Static, ResolutionMode::Polymorphic] {
            let mut m = distill_initial(&p, Resolution::new(mode)).unwrap();
            assert!(distill_delta(&mut m, &p, &p).unwrap().is_empty());
        }
    }

    #[test]
    fn empty_program_yields_empty_model() {
        let m = distill_initial(&Program { classes: vec![] }, Resolution::default()).unwrap();
        assert!(m.changes().is_empty());
    }

    #[test]
    fn wrong_base_is_rejected() {
        let p = program(BASE);
        let other = program("class Other {}");
        let mut m = distill_initial(&p, Resolution::default()).unwrap();
        assert!(matches!(
            distill_delta(&mut m, &other, &p),
            Err(DistillError::InconsistentBase(_))
        ));
    }

    #[test]
    fn body_edit_is_modify_plus_invocation_diff() {
        let old = program(BASE);
        let new = program(&BASE.replace("assert f.foo() == 2;", "assert f.foo() == 2; assert f.foo() > 0;"));
        let mut m = distill_initial(&old, Resolution::default()).unwrap();
        let delta = distill_delta(&mut m, &old, &new).unwrap();
        let kinds: Vec<(ChangeKind, String)> = delta
            .iter()
            .map(|id| {
                let c = m.change(*id).unwrap();
                (c.kind, c.subject_id.0.clone())
            })
            .collect();
        assert_eq!(
            kinds,
            vec![
                (ChangeKind::Modify, "method:FooBarTest.fooTest/0".to_string()),
                (ChangeKind::Add, "inv:FooBarTest.fooTest/0->Foo.foo/0#1".to_string()),
            ]
        );
    }
}
