//! The textual ingestion format: alphabets, graphs, productions, formulae,
//! asserted productions and styles, with a canonical printer and a JSON
//! export mirroring the document model.
//!
//! ```text
//! type A/1 abstract;
//! type B/2;
//!
//! production p {
//!   lhs A;
//!   interface u1;
//!   rhs {
//!     node u;
//!     node u1;
//!     edge b: B(u1, u);
//!   }
//! }
//!
//! formula phi = forall B(x,y). forall C(z). y = z;
//! ```
//!
//! Declarations are resolved in file order, so types come before the graphs
//! and formulae that mention them. `parse` followed by `serialize` is the
//! identity on documents, and `serialize` followed by `parse` is idempotent
//! on text.

mod lexer;
mod parser;
mod printer;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::contracts::AssertedProduction;
use crate::graph::{EdgeType, Graph, Production};
use crate::logic::Formula;
use crate::recovery::Style;
use crate::wp::default_interface_vars;

pub use parser::parse;
pub use printer::{formula_text, graph_text, serialize};

/// A parse problem with its position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.col, self.message)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NamedGraph {
    pub name: String,
    pub graph: Graph,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NamedProduction {
    pub name: String,
    pub production: Production,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NamedFormula {
    pub name: String,
    pub formula: Formula,
}

/// An asserted production as declared: pre- and post-condition around a
/// production referenced by name.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AssertedDecl {
    pub name: String,
    pub pre: Formula,
    pub production: String,
    pub post: Formula,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StyleDecl {
    pub name: String,
    pub invariant: Formula,
    pub asserted: Vec<String>,
}

/// A parsed file: all declarations grouped by kind, in declaration order.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Document {
    pub types: Vec<EdgeType>,
    pub graphs: Vec<NamedGraph>,
    pub productions: Vec<NamedProduction>,
    pub formulas: Vec<NamedFormula>,
    pub asserted: Vec<AssertedDecl>,
    pub styles: Vec<StyleDecl>,
}

impl Document {
    pub fn graph(&self, name: &str) -> Option<&Graph> {
        self.graphs.iter().find(|g| g.name == name).map(|g| &g.graph)
    }

    pub fn production(&self, name: &str) -> Option<&Production> {
        self.productions.iter().find(|p| p.name == name).map(|p| &p.production)
    }

    pub fn formula(&self, name: &str) -> Option<&Formula> {
        self.formulas.iter().find(|f| f.name == name).map(|f| &f.formula)
    }

    /// Resolves an asserted declaration against its production, with the
    /// canonical interface variables and an empty free-variable map (the
    /// format only admits closed post-conditions).
    pub fn asserted(&self, name: &str) -> Option<AssertedProduction> {
        let decl = self.asserted.iter().find(|a| a.name == name)?;
        let production = self.production(&decl.production)?.clone();
        let arity = production.lhs.arity;
        Some(AssertedProduction {
            pre: decl.pre.clone(),
            production,
            post: decl.post.clone(),
            h: Default::default(),
            interface_vars: default_interface_vars(arity),
        })
    }

    pub fn style(&self, name: &str) -> Option<Style> {
        let decl = self.styles.iter().find(|s| s.name == name)?;
        let productions =
            decl.asserted.iter().map(|a| self.asserted(a)).collect::<Option<Vec<_>>>()?;
        Some(Style {
            alphabet: self.types.clone(),
            productions,
            invariant: decl.invariant.clone(),
        })
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("document model serializes")
    }

    pub fn from_json(text: &str) -> Result<Document, serde_json::Error> {
        serde_json::from_str(text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::EdgeKind;
    use crate::logic::VarName;

    const RUNNING_EXAMPLE: &str = "\
type A/1 abstract;
type B/2;
type C/1;

production p {
  lhs A;
  interface u1;
  rhs {
    node u;
    node u1;
    edge b: B(u1, u);
  }
}

formula phi = forall B(x,y). forall C(z). y = z;

graph host {
  node n1;
  edge a1: A(n1);
}
";

    #[test]
    fn running_example_parses() {
        let doc = parse(RUNNING_EXAMPLE).unwrap();
        assert_eq!(doc.types.len(), 3);
        assert_eq!(doc.types[0].kind, EdgeKind::Abstract);
        let p = doc.production("p").unwrap();
        assert_eq!(p.interface.len(), 1);
        let phi = doc.formula("phi").unwrap();
        assert!(matches!(phi, Formula::Forall(_, _, _)));
        assert_eq!(doc.graph("host").unwrap().edges().len(), 1);
    }

    #[test]
    fn arity_mismatch_is_diagnosed() {
        let text = "type B/2;\ngraph g { node n1; edge e: B(n1); }";
        let errs = parse(text).unwrap_err();
        assert!(errs.iter().any(|d| d.message.contains("arity 2")), "{errs:?}");
        assert_eq!(errs[0].line, 2);
    }

    #[test]
    fn rebinding_is_diagnosed() {
        let text = "type B/2;\nformula f = forall B(x,y). exists B(x,w). x = w;";
        let errs = parse(text).unwrap_err();
        assert!(errs.iter().any(|d| d.message.contains("already bound")));
    }

    #[test]
    fn unclosed_block_is_diagnosed() {
        let errs = parse("graph g { node n1;").unwrap_err();
        assert!(errs.iter().any(|d| d.message.contains("unclosed")));
    }

    #[test]
    fn unknown_references_are_diagnosed() {
        let text = "type A/1;\nasserted ap { pre = true; production nope; post = true; }";
        let errs = parse(text).unwrap_err();
        assert!(errs.iter().any(|d| d.message.contains("unknown production")));
    }

    #[test]
    fn formula_references_resolve() {
        let text = "\
type A/1 abstract;
type C/1;
production p { lhs A; interface q; rhs { node q; } }
formula inv = no C;
asserted ap { pre = inv; production p; post = true; }
style s { invariant = inv; asserted ap; }
";
        let doc = parse(text).unwrap();
        assert_eq!(doc.asserted("ap").unwrap().pre, doc.formulas[0].formula);
        let style = doc.style("s").unwrap();
        assert_eq!(style.productions.len(), 1);
        assert_eq!(style.invariant, Formula::NoEdge(EdgeType::new("C", 1)));
    }

    #[test]
    fn open_asserted_conditions_are_rejected() {
        let text = "\
type A/1 abstract;
production p { lhs A; interface q; rhs { node q; } }
asserted ap { pre = x = y; production p; post = true; }
";
        let errs = parse(text).unwrap_err();
        assert!(errs.iter().any(|d| d.message.contains("closed")));
    }

    #[test]
    fn empty_document_serializes_to_empty_text() {
        assert_eq!(serialize(&Document::default()), "");
    }

    #[test]
    fn round_trip_on_the_running_example() {
        let doc = parse(RUNNING_EXAMPLE).unwrap();
        let text = serialize(&doc);
        let doc2 = parse(&text).unwrap();
        assert_eq!(doc, doc2);
        assert_eq!(serialize(&doc2), text);
    }

    #[test]
    fn canonical_formula_rendering() {
        let b = EdgeType::new("B", 2);
        let c = EdgeType::new("C", 1);
        let xy = vec![VarName::new("x"), VarName::new("y")];
        let z = vec![VarName::new("z")];
        let wpre = Formula::and(vec![
            Formula::NoEdge(c.clone()),
            Formula::forall(
                b.clone(),
                xy.clone(),
                Formula::forall(c.clone(), z.clone(), Formula::NoEdge(c.clone())),
            ),
            Formula::forall(b, xy, Formula::forall(c, z, Formula::eq("y", "z"))),
        ]);
        assert_eq!(
            formula_text(&wpre),
            "no C & (forall B(x,y). forall C(z). no C) & (forall B(x,y). forall C(z). y = z)"
        );
    }

    #[test]
    fn json_export_round_trips() {
        let doc = parse(RUNNING_EXAMPLE).unwrap();
        let json = doc.to_json().to_string();
        assert_eq!(Document::from_json(&json).unwrap(), doc);
        let value = doc.to_json();
        for key in ["types", "graphs", "productions", "formulas", "asserted", "styles"] {
            assert!(value.get(key).is_some(), "missing key {key}");
        }
    }
}
