use std::collections::BTreeSet;

use super::{ChangeModel, Resolution, ResolutionMode, Subject, SubjectId, SubjectKind};

/// Methods an invocation may call, among the subjects alive in `model`.
///
/// Static resolution looks the callee up from the declared receiver class
/// upward and yields at most one method. Polymorphic resolution yields every
/// alive method with the same identifier and arity, regardless of class.
/// Super calls and constructor calls bind to one target in both modes.
pub fn candidate_callees(
    model: &ChangeModel,
    invocation: &Subject,
    resolution: Resolution,
) -> BTreeSet<SubjectId> {
    if invocation.kind != SubjectKind::Invocation {
        return BTreeSet::new();
    }
    let receiver = invocation
        .static_receiver_class_id
        .as_ref()
        .and_then(|c| c.class_name());
    if invocation.is_constructor {
        if !resolution.include_constructors {
            return BTreeSet::new();
        }
        return receiver
            .map(|class| SubjectId::method(class, &invocation.identifier, invocation.arity))
            .filter(|id| model.is_alive(id))
            .into_iter()
            .collect();
    }
    if invocation.is_super_call || resolution.mode == ResolutionMode::Static {
        let concrete_only = invocation.is_super_call;
        return receiver
            .and_then(|class| lookup_upward(model, class, &invocation.identifier, invocation.arity, concrete_only))
            .into_iter()
            .collect();
    }
    model
        .indexes()
        .methods_by_signature
        .get(&(invocation.identifier.clone(), invocation.arity))
        .cloned()
        .unwrap_or_default()
}

fn lookup_upward(model: &ChangeModel, class: &str, name: &str, arity: usize, concrete_only: bool) -> Option<SubjectId> {
    let mut seen = BTreeSet::new();
    let mut cursor = Some(SubjectId::class(class));
    while let Some(class_id) = cursor {
        if !model.is_alive(&class_id) || !seen.insert(class_id.clone()) {
            return None;
        }
        let class_name = class_id.class_name().expect("class id");
        let candidate = SubjectId::method(class_name, name, arity);
        let usable = model
            .subject(&candidate)
            .is_some_and(|m| !(concrete_only && m.is_abstract));
        if model.is_alive(&candidate) && usable {
            return Some(candidate);
        }
        cursor = model.subject(&class_id).and_then(|s| s.superclass_id.clone());
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::ChangeKind;

    fn model(mode: ResolutionMode) -> ChangeModel {
        let mut m = ChangeModel::new(Resolution::new(mode));
        for (c, sup) in [("Foo", None), ("Bar", Some("Foo")), ("Baz", Some("Bar")), ("Other", None)] {
            m.record(ChangeKind::Add, Subject::class(c, sup)).unwrap();
        }
        for (c, name, arity) in [("Foo", "foo", 0), ("Bar", "foo", 0), ("Other", "foo", 0), ("Other", "foo", 1)] {
            m.record(ChangeKind::Add, Subject::method(c, name, arity)).unwrap();
        }
        m
    }

    fn inv(receiver: &str, name: &str, arity: usize) -> Subject {
        let owner = SubjectId::method("Other", "foo", 1);
        Subject::invocation(&owner, Some(receiver), name, arity, 0)
    }

    #[test]
    fn static_lookup_walks_up_from_declared_receiver() {
        let m = model(ResolutionMode::Static);
        let r = Resolution::new(ResolutionMode::Static);
        assert_eq!(
            candidate_callees(&m, &inv("Baz", "foo", 0), r),
            BTreeSet::from([SubjectId::method("Bar", "foo", 0)])
        );
        assert_eq!(
            candidate_callees(&m, &inv("Foo", "foo", 0), r),
            BTreeSet::from([SubjectId::method("Foo", "foo", 0)])
        );
        assert!(candidate_callees(&m, &inv("Foo", "nothing", 0), r).is_empty());
    }

    #[test]
    fn polymorphic_matches_identifier_and_arity_anywhere() {
        let m = model(ResolutionMode::Polymorphic);
        let r = Resolution::new(ResolutionMode::Polymorphic);
        let got = candidate_callees(&m, &inv("Foo", "foo", 0), r);
        assert_eq!(
            got,
            BTreeSet::from([
                SubjectId::method("Foo", "foo", 0),
                SubjectId::method("Bar", "foo", 0),
                SubjectId::method("Other", "foo", 0),
            ])
        );
        assert_eq!(candidate_callees(&m, &inv("Foo", "foo", 1), r).len(), 1);
    }

    #[test]
    fn constructors_only_when_enabled() {
        let mut m = model(ResolutionMode::Polymorphic);
        let mut ctor = Subject::method("Bar", "new", 0);
        ctor.is_constructor = true;
        m.record(ChangeKind::Add, ctor).unwrap();
        let owner = SubjectId::method("Other", "foo", 1);
        let call = Subject::call_site(&owner, Some("Bar"), "new", 0, 0, crate::model::CallShape::Constructor);
        let off = Resolution::new(ResolutionMode::Polymorphic);
        assert!(candidate_callees(&m, &call, off).is_empty());
        let on = off.with_constructors(true);
        assert_eq!(
            candidate_callees(&m, &call, on),
            BTreeSet::from([SubjectId::method("Bar", "new", 0)])
        );
    }
}
