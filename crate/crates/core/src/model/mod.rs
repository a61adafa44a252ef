//! First-class change objects and the dependency graph between them.
//!
//! A [`ChangeModel`] is an append-only list of [`Change`]s plus a table of the
//! [`Subject`]s they act on. A change depends on every earlier change whose
//! absence would break a structural invariant: a method needs its class, an
//! invocation needs its enclosing method and the method(s) it may call, and a
//! modification or removal needs the addition it refers to.

mod document;
mod resolve;
mod subject;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use document::DocumentError;
pub use resolve::candidate_callees;
pub use subject::{CallShape, Subject, SubjectId, SubjectKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ChangeId(pub u64);

impl fmt::Display for ChangeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl ChangeId {
    fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ChangeKind {
    Add,
    Modify,
    Remove,
}

impl fmt::Display for ChangeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct Change {
    pub change_id: ChangeId,
    pub kind: ChangeKind,
    pub subject_id: SubjectId,
    pub depends_on: BTreeSet<ChangeId>,
}

/// How an invocation is linked to the methods it may call.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ResolutionMode {
    /// One callee: lookup from the declared receiver class up the hierarchy.
    Static,
    /// Every alive method with the same identifier and arity.
    Polymorphic,
}

impl ResolutionMode {
    pub fn other(self) -> Self {
        match self {
            ResolutionMode::Static => ResolutionMode::Polymorphic,
            ResolutionMode::Polymorphic => ResolutionMode::Static,
        }
    }
}

impl fmt::Display for ResolutionMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ResolutionMode::Static => "static",
            ResolutionMode::Polymorphic => "poly",
        })
    }
}

impl std::str::FromStr for ResolutionMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "static" => Ok(ResolutionMode::Static),
            "poly" | "polymorphic" => Ok(ResolutionMode::Polymorphic),
            other => Err(format!("unknown resolution mode `{other}` (expected static|poly)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct Resolution {
    pub mode: ResolutionMode,
    /// Model `new C(..)` expressions as invocations of constructors.
    #[serde(default)]
    pub include_constructors: bool,
}

impl Resolution {
    pub fn new(mode: ResolutionMode) -> Self {
        Resolution {
            mode,
            include_constructors: false,
        }
    }

    pub fn with_constructors(mut self, on: bool) -> Self {
        self.include_constructors = on;
        self
    }
}

impl Default for Resolution {
    fn default() -> Self {
        Resolution::new(ResolutionMode::Static)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModelError {
    #[error("container `{owner}` of `{subject}` was never added or is not alive")]
    UnknownOwner { subject: SubjectId, owner: SubjectId },
    #[error("`{0}` is not alive")]
    DeadSubject(SubjectId),
    #[error("`{0}` is already alive")]
    DuplicateAdd(SubjectId),
    #[error("cannot remove `{subject}`: alive dependents {dependents:?}")]
    LiveDependents {
        subject: SubjectId,
        dependents: Vec<SubjectId>,
    },
    #[error("`{0}` changes kind or container across changes")]
    IdentityMismatch(SubjectId),
    #[error("adding `{0}` would create an inheritance cycle")]
    HierarchyCycle(SubjectId),
    #[error("change {0} does not add a method")]
    NotAMethodAddition(ChangeId),
    #[error("unknown change {0}")]
    UnknownChange(ChangeId),
}

/// Lookup structures derivable from the change list and subject table.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Indexes {
    /// Change → the change it structurally hangs off (container Add, or the
    /// Add that a Modify/Remove refers to).
    pub structural_parent: BTreeMap<ChangeId, ChangeId>,
    /// Method Add → invocation Adds holding a callee edge to it. Edges from an
    /// invocation to its own enclosing method are structural, not listed here.
    pub invocational_dependees: BTreeMap<ChangeId, BTreeSet<ChangeId>>,
    /// Latest Add of every subject ever added.
    pub latest_add: BTreeMap<SubjectId, ChangeId>,
    pub alive: BTreeSet<SubjectId>,
    /// Alive non-constructor methods by (identifier, arity).
    pub methods_by_signature: BTreeMap<(String, usize), BTreeSet<SubjectId>>,
    /// Alive subjects by owner.
    pub contained: BTreeMap<SubjectId, BTreeSet<SubjectId>>,
}

impl Indexes {
    fn mark_alive(&mut self, subject: &Subject) {
        self.alive.insert(subject.id.clone());
        if subject.kind == SubjectKind::Method && !subject.is_constructor {
            self.methods_by_signature
                .entry((subject.identifier.clone(), subject.arity))
                .or_default()
                .insert(subject.id.clone());
        }
        if let Some(owner) = &subject.owner_id {
            self.contained
                .entry(owner.clone())
                .or_default()
                .insert(subject.id.clone());
        }
    }

    fn mark_dead(&mut self, subject: &Subject) {
        self.alive.remove(&subject.id);
        let sig = (subject.identifier.clone(), subject.arity);
        if let Some(set) = self.methods_by_signature.get_mut(&sig) {
            set.remove(&subject.id);
            if set.is_empty() {
                self.methods_by_signature.remove(&sig);
            }
        }
        if let Some(owner) = &subject.owner_id {
            if let Some(set) = self.contained.get_mut(owner) {
                set.remove(&subject.id);
                if set.is_empty() {
                    self.contained.remove(owner);
                }
            }
        }
    }

    /// Recomputes every index from scratch by replaying `changes`.
    pub fn rebuild(
        changes: &[Change],
        subjects: &BTreeMap<SubjectId, Subject>,
    ) -> Result<Indexes, String> {
        let mut ix = Indexes::default();
        for (pos, change) in changes.iter().enumerate() {
            let at = || format!("changes[{pos}]");
            if change.change_id.index() != pos {
                return Err(format!("{}.changeId: expected {pos}, found {}", at(), change.change_id));
            }
            for dep in &change.depends_on {
                if dep.index() >= pos {
                    return Err(format!("{}.dependsOn: unknown or later changeId {dep}", at()));
                }
            }
            let subject = subjects
                .get(&change.subject_id)
                .ok_or_else(|| format!("{}.subjectId: unknown subject `{}`", at(), change.subject_id))?;
            let id = change.change_id;
            match change.kind {
                ChangeKind::Add => {
                    if ix.alive.contains(&subject.id) {
                        return Err(format!("{}: duplicate Add of alive `{}`", at(), subject.id));
                    }
                    if let Some(owner) = &subject.owner_id {
                        let parent = change
                            .depends_on
                            .iter()
                            .copied()
                            .find(|d| changes[d.index()].subject_id == *owner && changes[d.index()].kind == ChangeKind::Add)
                            .ok_or_else(|| format!("{}.dependsOn: missing Add of container `{owner}`", at()))?;
                        ix.structural_parent.insert(id, parent);
                        for dep in change.depends_on.iter().filter(|d| **d != parent) {
                            ix.invocational_dependees.entry(*dep).or_default().insert(id);
                        }
                    } else if !change.depends_on.is_empty() {
                        return Err(format!("{}.dependsOn: root subject with dependencies", at()));
                    }
                    ix.latest_add.insert(subject.id.clone(), id);
                    ix.mark_alive(subject);
                }
                ChangeKind::Modify | ChangeKind::Remove => {
                    if !ix.alive.contains(&subject.id) {
                        return Err(format!("{}: {} of dead subject `{}`", at(), change.kind, subject.id));
                    }
                    let add = ix.latest_add[&subject.id];
                    if change.depends_on != BTreeSet::from([add]) {
                        return Err(format!("{}.dependsOn: must be exactly {{{add}}}", at()));
                    }
                    ix.structural_parent.insert(id, add);
                    if change.kind == ChangeKind::Remove {
                        ix.mark_dead(subject);
                    }
                }
            }
        }
        Ok(ix)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChangeModel {
    resolution: Resolution,
    changes: Vec<Change>,
    subjects: BTreeMap<SubjectId, Subject>,
    index: Indexes,
}

impl ChangeModel {
    pub fn new(resolution: Resolution) -> Self {
        ChangeModel {
            resolution,
            changes: Vec::new(),
            subjects: BTreeMap::new(),
            index: Indexes::default(),
        }
    }

    /// Assembles a model from raw parts, validating referential integrity.
    pub fn from_parts(
        resolution: Resolution,
        changes: Vec<Change>,
        subjects: BTreeMap<SubjectId, Subject>,
    ) -> Result<Self, String> {
        for (key, s) in &subjects {
            if *key != s.id {
                return Err(format!("subjects: key `{key}` holds subject `{}`", s.id));
            }
        }
        let index = Indexes::rebuild(&changes, &subjects)?;
        Ok(ChangeModel {
            resolution,
            changes,
            subjects,
            index,
        })
    }

    pub fn resolution(&self) -> Resolution {
        self.resolution
    }

    pub fn changes(&self) -> &[Change] {
        &self.changes
    }

    pub fn change(&self, id: ChangeId) -> Option<&Change> {
        self.changes.get(id.index())
    }

    pub fn subjects(&self) -> &BTreeMap<SubjectId, Subject> {
        &self.subjects
    }

    pub fn subject(&self, id: &SubjectId) -> Option<&Subject> {
        self.subjects.get(id)
    }

    pub fn indexes(&self) -> &Indexes {
        &self.index
    }

    pub fn next_change_id(&self) -> ChangeId {
        ChangeId(self.changes.len() as u64)
    }

    pub fn is_alive(&self, id: &SubjectId) -> bool {
        self.index.alive.contains(id)
    }

    pub fn alive_subjects(&self) -> impl Iterator<Item = &Subject> {
        self.index.alive.iter().map(|id| &self.subjects[id])
    }

    pub fn latest_add(&self, id: &SubjectId) -> Option<&Change> {
        self.index.latest_add.get(id).map(|c| &self.changes[c.index()])
    }

    /// Alive subjects directly contained in `owner`.
    pub fn contained(&self, owner: &SubjectId) -> impl Iterator<Item = &Subject> {
        self.index
            .contained
            .get(owner)
            .into_iter()
            .flatten()
            .map(|id| &self.subjects[id])
    }

    /// Appends a change for `subject`, deriving its dependencies.
    pub fn record(&mut self, kind: ChangeKind, subject: Subject) -> Result<ChangeId, ModelError> {
        let id = self.next_change_id();
        match kind {
            ChangeKind::Add => {
                if self.is_alive(&subject.id) {
                    return Err(ModelError::DuplicateAdd(subject.id));
                }
                if let Some(prev) = self.subjects.get(&subject.id) {
                    if prev.kind != subject.kind || prev.owner_id != subject.owner_id {
                        return Err(ModelError::IdentityMismatch(subject.id));
                    }
                }
                let parent = match subject.kind {
                    SubjectKind::Class => {
                        self.check_hierarchy(&subject)?;
                        None
                    }
                    SubjectKind::Method => Some(self.alive_owner_add(&subject, SubjectKind::Class)?),
                    SubjectKind::Invocation => Some(self.alive_owner_add(&subject, SubjectKind::Method)?),
                };
                let callees: BTreeSet<ChangeId> = if subject.kind == SubjectKind::Invocation {
                    candidate_callees(self, &subject, self.resolution)
                        .iter()
                        .map(|m| self.index.latest_add[m])
                        .filter(|c| Some(*c) != parent)
                        .collect()
                } else {
                    BTreeSet::new()
                };
                let mut depends_on = callees.clone();
                depends_on.extend(parent);
                if let Some(p) = parent {
                    self.index.structural_parent.insert(id, p);
                }
                for callee in callees {
                    self.index.invocational_dependees.entry(callee).or_default().insert(id);
                }
                self.index.latest_add.insert(subject.id.clone(), id);
                self.index.mark_alive(&subject);
                self.changes.push(Change {
                    change_id: id,
                    kind,
                    subject_id: subject.id.clone(),
                    depends_on,
                });
                self.subjects.insert(subject.id.clone(), subject);
            }
            ChangeKind::Modify | ChangeKind::Remove => {
                if !self.is_alive(&subject.id) {
                    return Err(ModelError::DeadSubject(subject.id));
                }
                let prev = &self.subjects[&subject.id];
                if prev.kind != subject.kind || prev.owner_id != subject.owner_id {
                    return Err(ModelError::IdentityMismatch(subject.id));
                }
                if kind == ChangeKind::Remove {
                    let dependents = self.alive_dependents(&subject.id);
                    if !dependents.is_empty() {
                        return Err(ModelError::LiveDependents {
                            subject: subject.id,
                            dependents,
                        });
                    }
                } else if subject.kind == SubjectKind::Class {
                    self.check_hierarchy(&subject)?;
                }
                let add = self.index.latest_add[&subject.id];
                self.index.structural_parent.insert(id, add);
                if kind == ChangeKind::Remove {
                    self.index.mark_dead(&subject);
                }
                self.changes.push(Change {
                    change_id: id,
                    kind,
                    subject_id: subject.id.clone(),
                    depends_on: BTreeSet::from([add]),
                });
                self.subjects.insert(subject.id.clone(), subject);
            }
        }
        Ok(id)
    }

    fn alive_owner_add(&self, subject: &Subject, want: SubjectKind) -> Result<ChangeId, ModelError> {
        let unknown = || ModelError::UnknownOwner {
            subject: subject.id.clone(),
            owner: subject
                .owner_id
                .clone()
                .unwrap_or_else(|| SubjectId(String::new())),
        };
        let owner = subject.owner_id.as_ref().ok_or_else(unknown)?;
        if !self.is_alive(owner) || self.subjects[owner].kind != want {
            return Err(unknown());
        }
        Ok(self.index.latest_add[owner])
    }

    fn check_hierarchy(&self, class: &Subject) -> Result<(), ModelError> {
        let mut seen = BTreeSet::from([class.id.clone()]);
        let mut cursor = class.superclass_id.clone();
        while let Some(c) = cursor {
            if !seen.insert(c.clone()) {
                return Err(ModelError::HierarchyCycle(class.id.clone()));
            }
            cursor = self.subjects.get(&c).and_then(|s| s.superclass_id.clone());
        }
        Ok(())
    }

    /// Alive subjects whose current Add depends on the current Add of `id`.
    pub fn alive_dependents(&self, id: &SubjectId) -> Vec<SubjectId> {
        let mut out: BTreeSet<SubjectId> = self.contained(id).map(|s| s.id.clone()).collect();
        if let Some(add) = self.index.latest_add.get(id) {
            for inv in self.index.invocational_dependees.get(add).into_iter().flatten() {
                let sid = &self.changes[inv.index()].subject_id;
                if self.is_alive(sid) && self.index.latest_add[sid] == *inv {
                    out.insert(sid.clone());
                }
            }
        }
        out.into_iter().collect()
    }

    /// A Modify of `id` that is not part of the model, for what-if queries.
    pub fn synthetic_modify(&self, id: &SubjectId) -> Result<Change, ModelError> {
        if !self.is_alive(id) {
            return Err(ModelError::DeadSubject(id.clone()));
        }
        Ok(Change {
            change_id: self.next_change_id(),
            kind: ChangeKind::Modify,
            subject_id: id.clone(),
            depends_on: BTreeSet::from([self.index.latest_add[id]]),
        })
    }

    fn is_recorded(&self, c: &Change) -> bool {
        self.changes.get(c.change_id.index()) == Some(c)
    }

    fn structural_parent_of(&self, c: &Change) -> Option<ChangeId> {
        if self.is_recorded(c) {
            return self.index.structural_parent.get(&c.change_id).copied();
        }
        match c.kind {
            ChangeKind::Modify | ChangeKind::Remove => self.index.latest_add.get(&c.subject_id).copied(),
            ChangeKind::Add => self
                .subjects
                .get(&c.subject_id)
                .and_then(|s| s.owner_id.as_ref())
                .and_then(|o| self.index.latest_add.get(o))
                .copied(),
        }
    }

    /// Structural dependency chain above `c`, nearest first. Callee edges are
    /// not followed.
    pub fn hierarchical_dependencies(&self, c: &Change) -> Vec<&Change> {
        let mut chain = Vec::new();
        let mut cursor = self.structural_parent_of(c);
        while let Some(p) = cursor {
            chain.push(&self.changes[p.index()]);
            cursor = self.index.structural_parent.get(&p).copied();
        }
        chain
    }

    /// First change in `chain` that adds a method.
    pub fn find_method_addition<'a>(&self, chain: &[&'a Change]) -> Option<&'a Change> {
        chain.iter().copied().find(|c| {
            c.kind == ChangeKind::Add
                && self
                    .subjects
                    .get(&c.subject_id)
                    .is_some_and(|s| s.kind == SubjectKind::Method)
        })
    }

    /// The method Add enclosing `c` (or `c` itself when it adds a method).
    pub fn enclosing_method_addition<'a>(&'a self, c: &'a Change) -> Option<&'a Change> {
        let mut chain = vec![c];
        chain.extend(self.hierarchical_dependencies(c));
        self.find_method_addition(&chain)
    }

    /// Alive invocation Adds that hold a callee edge to `method_add`.
    pub fn invocational_dependees(&self, method_add: ChangeId) -> Result<Vec<&Change>, ModelError> {
        let change = self
            .change(method_add)
            .ok_or(ModelError::UnknownChange(method_add))?;
        let is_method = self
            .subjects
            .get(&change.subject_id)
            .is_some_and(|s| s.kind == SubjectKind::Method);
        if change.kind != ChangeKind::Add || !is_method {
            return Err(ModelError::NotAMethodAddition(method_add));
        }
        Ok(self
            .index
            .invocational_dependees
            .get(&method_add)
            .into_iter()
            .flatten()
            .map(|id| &self.changes[id.index()])
            .filter(|inv| {
                self.is_alive(&inv.subject_id) && self.index.latest_add[&inv.subject_id] == inv.change_id
            })
            .collect())
    }

    /// Callee edges of an invocation Add, as method subject ids.
    pub fn callee_edges(&self, invocation_add: &Change) -> BTreeSet<SubjectId> {
        let parent = self.index.structural_parent.get(&invocation_add.change_id);
        invocation_add
            .depends_on
            .iter()
            .filter(|d| Some(*d) != parent)
            .map(|d| self.changes[d.index()].subject_id.clone())
            .collect()
    }

    /// Alive invocations for which no callee can currently be found.
    pub fn unresolved_invocations(&self) -> Vec<SubjectId> {
        self.alive_subjects()
            .filter(|s| s.kind == SubjectKind::Invocation)
            .filter(|s| candidate_callees(self, s, self.resolution).is_empty())
            .map(|s| s.id.clone())
            .collect()
    }

    /// Same change list with every invocation Add re-linked under the other
    /// resolution mode, as of the point in history where it was recorded.
    pub fn relinked(&self, mode: ResolutionMode) -> ChangeModel {
        let resolution = Resolution {
            mode,
            ..self.resolution
        };
        let mut out = ChangeModel::new(resolution);
        for change in &self.changes {
            let subject = self.subjects[&change.subject_id].clone();
            let id = out.next_change_id();
            let depends_on = if change.kind == ChangeKind::Add && subject.kind == SubjectKind::Invocation {
                let parent = out.index.latest_add.get(subject.owner_id.as_ref().expect("owner")).copied();
                let callees: BTreeSet<ChangeId> = candidate_callees(&out, &subject, resolution)
                    .iter()
                    .map(|m| out.index.latest_add[m])
                    .filter(|c| Some(*c) != parent)
                    .collect();
                for callee in &callees {
                    out.index.invocational_dependees.entry(*callee).or_default().insert(id);
                }
                let mut deps = callees;
                deps.extend(parent);
                deps
            } else {
                change.depends_on.clone()
            };
            if let Some(p) = self.index.structural_parent.get(&change.change_id) {
                out.index.structural_parent.insert(id, *p);
            }
            match change.kind {
                ChangeKind::Add => {
                    out.index.latest_add.insert(subject.id.clone(), id);
                    out.index.mark_alive(&subject);
                }
                ChangeKind::Remove => out.index.mark_dead(&subject),
                ChangeKind::Modify => {}
            }
            out.changes.push(Change {
                change_id: id,
                kind: change.kind,
                subject_id: change.subject_id.clone(),
                depends_on,
            });
            out.subjects.insert(subject.id.clone(), subject);
        }
        out
    }
}
