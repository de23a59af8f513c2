//! Finite games: extensive form with perfect recall, and strategic form.

mod extensive;
mod strategic;
mod tree;
mod validate;

pub use extensive::{Game, History, InfoSetId, InformationSet, Node, NodeId};
pub use strategic::{all_profiles, PayoffEntry, PureProfile, StrategicGame, StrategicSpec};
pub use tree::{GameTree, InfoSetSpec, NodeSpec, TreeBuilder};
pub use validate::{validate, Issue, IssueKind, ValidationReport};
