//! JSON change-model document.
//!
//! Top-level keys: `changes` (ordered by changeId), `resolution`, `subjects`
//! (ordered by id). Keys are written sorted and the file ends in a newline,
//! so identical models serialize to identical bytes.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::{Change, ChangeModel, Resolution, Subject, SubjectId};

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Document {
    changes: Vec<Change>,
    resolution: Resolution,
    subjects: Vec<Subject>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DocumentError {
    pub line: Option<usize>,
    pub column: Option<usize>,
    /// Path to the offending field, e.g. `changes[3].dependsOn`.
    pub field: Option<String>,
    pub message: String,
}

impl fmt::Display for DocumentError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("malformed change-model document")?;
        if let (Some(line), Some(col)) = (self.line, self.column) {
            write!(f, " at line {line}, column {col}")?;
        }
        if let Some(field) = &self.field {
            write!(f, " in `{field}`")?;
        }
        write!(f, ": {}", self.message)
    }
}

impl std::error::Error for DocumentError {}

impl ChangeModel {
    pub fn to_json(&self) -> String {
        let doc = Document {
            changes: self.changes.clone(),
            resolution: self.resolution,
            subjects: self.subjects.values().cloned().collect(),
        };
        // Round-tripping through `Value` sorts object keys.
        let value = serde_json::to_value(&doc).expect("document is always serializable");
        let mut text = serde_json::to_string_pretty(&value).expect("value is always serializable");
        text.push('\n');
        text
    }

    pub fn from_json(text: &str) -> Result<ChangeModel, DocumentError> {
        let doc: Document = serde_json::from_str(text).map_err(|e| DocumentError {
            line: Some(e.line()),
            column: Some(e.column()),
            field: None,
            message: e.to_string(),
        })?;
        let mut subjects: BTreeMap<SubjectId, Subject> = BTreeMap::new();
        for (i, s) in doc.subjects.into_iter().enumerate() {
            if subjects.contains_key(&s.id) {
                return Err(DocumentError {
                    line: None,
                    column: None,
                    field: Some(format!("subjects[{i}].id")),
                    message: format!("duplicate subject `{}`", s.id),
                });
            }
            subjects.insert(s.id.clone(), s);
        }
        ChangeModel::from_parts(doc.resolution, doc.changes, subjects).map_err(|msg| {
            let (field, message) = match msg.split_once(": ") {
                Some((f, m)) if f.starts_with("changes[") || f.starts_with("subjects") => {
                    (Some(f.to_string()), m.to_string())
                }
                _ => (None, msg),
            };
            DocumentError {
                line: None,
                column: None,
                field,
                message,
            }
        })
    }
}
