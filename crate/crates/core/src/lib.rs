//! Change-based regression test selection for MiniOO programs.
//!
//! Source snapshots are parsed by [`frontend`], turned into first-class
//! change objects by [`distiller`], and queried by [`selector`] for the
//! tests relevant to a set of changes. [`runtime`] executes tests with real
//! dynamic dispatch and records call traces; [`mutator`] injects faults and
//! compares the mutation coverage of full and reduced suites.

pub mod corpus;
pub mod distiller;
pub mod frontend;
pub mod model;
pub mod mutator;
pub mod runtime;
pub mod safety;
pub mod selector;

pub use distiller::{distill_delta, distill_initial, DistillError};
pub use frontend::{load_snapshot_dir, parse_snapshot, FrontendError, Program};
pub use model::{Change, ChangeId, ChangeKind, ChangeModel, Resolution, ResolutionMode, Subject, SubjectId, SubjectKind};
pub use selector::{select_for_class, select_relevant_tests, SelectionResult, TestConfig};
