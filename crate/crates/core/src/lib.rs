//! Design-by-contract for architectural design rewriting.
//!
//! Systems are modelled as typed hypergraphs refined by productions that
//! replace a single hyperedge with a graph. Productions carry pre- and
//! post-conditions in a small logic over such graphs; this crate computes
//! the weakest pre-condition of a production from its post-condition,
//! checks contracts exhaustively over a bounded universe of graphs, and
//! plans recovery rewrites for graphs that drifted out of their
//! architectural style.
//!
//! Modules:
//! - [`graph`]: hypergraphs, productions, match finding and application;
//! - [`logic`]: formulae, negation normal form, satisfaction, simplifier;
//! - [`enumerate`]: bounded exhaustive graph enumeration and equivalence;
//! - [`wp`]: the weakest pre-condition transformers;
//! - [`contracts`]: asserted productions and bounded validity checks;
//! - [`recovery`]: style conformance and the recovery planner;
//! - [`dsl`]: the textual format, parser, printer and JSON export.

pub mod contracts;
pub mod dsl;
pub mod enumerate;
pub mod graph;
pub mod logic;
pub mod recovery;
pub mod wp;

pub use contracts::{AssertedProduction, Bounds, Status, Verdict};
pub use graph::{Edge, EdgeId, EdgeKind, EdgeType, Graph, Match, NodeId, Production};
pub use logic::{Assignment, Formula, VarName};
pub use recovery::{Plan, Style};
pub use wp::{ChooseMode, WpConfig, WpError};
