use std::fmt;

use serde::{Deserialize, Serialize};

/// Stable textual identity of a source entity.
///
/// * `class:Foo`
/// * `method:Foo.foo/0` (constructors use the name `new`: `method:Foo.new/1`)
/// * `inv:Foo.bar/0->Baz.foo/1#0` for a call of `foo/1` on a receiver
///   declared as `Baz`, inside `Foo.bar/0`; `#k` numbers the occurrences of
///   the same call within the method. Super calls use `super:Baz.foo/1`,
///   constructor calls `new:Baz/1`, and an undeterminable receiver prints as `?`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SubjectId(pub String);

impl SubjectId {
    pub fn class(name: &str) -> Self {
        SubjectId(format!("class:{name}"))
    }

    pub fn method(class: &str, name: &str, arity: usize) -> Self {
        SubjectId(format!("method:{class}.{name}/{arity}"))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// Class name for `class:` ids.
    pub fn class_name(&self) -> Option<&str> {
        self.0.strip_prefix("class:")
    }

    /// Declaring class for `method:` ids.
    pub fn declaring_class(&self) -> Option<&str> {
        self.0.strip_prefix("method:")?.split_once('.').map(|(c, _)| c)
    }
}

impl fmt::Display for SubjectId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for SubjectId {
    fn from(s: &str) -> Self {
        SubjectId(s.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SubjectKind {
    Class,
    Method,
    Invocation,
}

fn is_false(b: &bool) -> bool {
    !*b
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct Subject {
    pub id: SubjectId,
    pub kind: SubjectKind,
    /// Simple name for classes and methods, callee name for invocations.
    pub identifier: String,
    #[serde(default)]
    pub arity: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub owner_id: Option<SubjectId>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub superclass_id: Option<SubjectId>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub static_receiver_class_id: Option<SubjectId>,
    #[serde(default, skip_serializing_if = "is_false")]
    pub is_abstract: bool,
    #[serde(default, skip_serializing_if = "is_false")]
    pub is_test: bool,
    /// Constructor declarations and `new` expressions.
    #[serde(default, skip_serializing_if = "is_false")]
    pub is_constructor: bool,
    /// `super.m(..)` invocations, which bind to one implementation.
    #[serde(default, skip_serializing_if = "is_false")]
    pub is_super_call: bool,
}

impl Subject {
    pub fn class(name: &str, superclass: Option<&str>) -> Self {
        Subject {
            id: SubjectId::class(name),
            kind: SubjectKind::Class,
            identifier: name.to_string(),
            arity: 0,
            owner_id: None,
            superclass_id: superclass.map(SubjectId::class),
            static_receiver_class_id: None,
            is_abstract: false,
            is_test: false,
            is_constructor: false,
            is_super_call: false,
        }
    }

    pub fn method(class: &str, name: &str, arity: usize) -> Self {
        Subject {
            id: SubjectId::method(class, name, arity),
            kind: SubjectKind::Method,
            identifier: name.to_string(),
            arity,
            owner_id: Some(SubjectId::class(class)),
            superclass_id: None,
            static_receiver_class_id: None,
            is_abstract: false,
            is_test: false,
            is_constructor: false,
            is_super_call: false,
        }
    }

    /// An ordinary virtual call of `callee/arity` inside `owner`.
    pub fn invocation(
        owner: &SubjectId,
        receiver: Option<&str>,
        callee: &str,
        arity: usize,
        ordinal: usize,
    ) -> Self {
        Self::call_site(owner, receiver, callee, arity, ordinal, CallShape::Virtual)
    }

    pub fn call_site(
        owner: &SubjectId,
        receiver: Option<&str>,
        callee: &str,
        arity: usize,
        ordinal: usize,
        shape: CallShape,
    ) -> Self {
        let owner_key = owner.as_str().strip_prefix("method:").unwrap_or(owner.as_str());
        let recv = receiver.unwrap_or("?");
        let target = match shape {
            CallShape::Virtual => format!("{recv}.{callee}/{arity}"),
            CallShape::Super => format!("super:{recv}.{callee}/{arity}"),
            CallShape::Constructor => format!("new:{recv}/{arity}"),
        };
        Subject {
            id: SubjectId(format!("inv:{owner_key}->{target}#{ordinal}")),
            kind: SubjectKind::Invocation,
            identifier: callee.to_string(),
            arity,
            owner_id: Some(owner.clone()),
            superclass_id: None,
            static_receiver_class_id: receiver.map(SubjectId::class),
            is_abstract: false,
            is_test: false,
            is_constructor: shape == CallShape::Constructor,
            is_super_call: shape == CallShape::Super,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CallShape {
    Virtual,
    Super,
    Constructor,
}
