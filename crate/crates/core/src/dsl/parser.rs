//! Recursive-descent parser for the textual format. All failures are
//! collected as positioned diagnostics; the parser never panics and keeps
//! going after an error where it can resynchronize.

use std::collections::BTreeSet;

use super::lexer::{lex, Token, TokenKind};
use super::{AssertedDecl, Diagnostic, Document, NamedFormula, NamedGraph, NamedProduction, StyleDecl};
use crate::graph::{Edge, EdgeId, EdgeKind, EdgeType, Graph, NodeId, Production};
use crate::logic::{free_vars, Formula, VarName};

/// Nesting cap for formulae; keeps adversarial inputs from exhausting the
/// stack.
const MAX_FORMULA_DEPTH: usize = 128;

pub fn parse(text: &str) -> Result<Document, Vec<Diagnostic>> {
    let (tokens, mut diags) = lex(text);
    let mut parser = Parser { tokens: &tokens, pos: 0, diags: Vec::new(), doc: Document::default() };
    parser.document();
    diags.extend(parser.diags);
    if diags.is_empty() {
        Ok(parser.doc)
    } else {
        diags.sort_by_key(|d| (d.line, d.col));
        Err(diags)
    }
}

struct Parser<'a> {
    tokens: &'a [Token],
    pos: usize,
    diags: Vec<Diagnostic>,
    doc: Document,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&'a Token> {
        self.tokens.get(self.pos)
    }

    fn peek2(&self) -> Option<&'a Token> {
        self.tokens.get(self.pos + 1)
    }

    fn next(&mut self) -> Option<&'a Token> {
        let t = self.tokens.get(self.pos);
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn here(&self) -> (usize, usize) {
        match self.peek() {
            Some(t) => (t.line, t.col),
            None => self
                .tokens
                .last()
                .map(|t| (t.line, t.col))
                .unwrap_or((1, 1)),
        }
    }

    fn error_here(&mut self, message: impl Into<String>) {
        let (line, col) = self.here();
        self.diags.push(Diagnostic { line, col, message: message.into() });
    }

    fn error_at(&mut self, at: (usize, usize), message: impl Into<String>) {
        self.diags.push(Diagnostic { line: at.0, col: at.1, message: message.into() });
    }

    fn expect(&mut self, kind: &TokenKind) -> bool {
        match self.peek() {
            Some(t) if &t.kind == kind => {
                self.pos += 1;
                true
            }
            Some(t) => {
                let msg = format!("expected {}, found {}", kind.describe(), t.kind.describe());
                self.error_here(msg);
                false
            }
            None => {
                self.error_here(format!("expected {}, found end of input", kind.describe()));
                false
            }
        }
    }

    fn ident(&mut self, what: &str) -> Option<String> {
        match self.peek() {
            Some(Token { kind: TokenKind::Ident(s), .. }) => {
                self.pos += 1;
                Some(s.clone())
            }
            Some(t) => {
                let msg = format!("expected {what}, found {}", t.kind.describe());
                self.error_here(msg);
                None
            }
            None => {
                self.error_here(format!("expected {what}, found end of input"));
                None
            }
        }
    }

    fn keyword(&mut self, kw: &str) -> bool {
        match self.peek() {
            Some(Token { kind: TokenKind::Ident(s), .. }) if s == kw => {
                self.pos += 1;
                true
            }
            _ => {
                self.error_here(format!("expected `{kw}`"));
                false
            }
        }
    }

    fn at_keyword(&self, kw: &str) -> bool {
        matches!(self.peek(), Some(Token { kind: TokenKind::Ident(s), .. }) if s == kw)
    }

    /// Skips ahead to just past the next `;` or `}` so parsing can resume.
    fn synchronize(&mut self) {
        while let Some(t) = self.next() {
            if matches!(t.kind, TokenKind::Semi | TokenKind::RBrace) {
                return;
            }
        }
    }

    fn lookup_type(&self, name: &str) -> Option<EdgeType> {
        self.doc.types.iter().find(|t| t.name == name).cloned()
    }

    fn document(&mut self) {
        while let Some(t) = self.peek() {
            let before = self.pos;
            match &t.kind {
                TokenKind::Ident(kw) => match kw.as_str() {
                    "type" => self.type_decl(),
                    "graph" => self.graph_decl(),
                    "production" => self.production_decl(),
                    "formula" => self.formula_decl(),
                    "asserted" => self.asserted_decl(),
                    "style" => self.style_decl(),
                    other => {
                        self.error_here(format!(
                            "expected a declaration (type, graph, production, formula, asserted, style), found `{other}`"
                        ));
                        self.synchronize();
                    }
                },
                other => {
                    let msg = format!("expected a declaration, found {}", other.describe());
                    self.error_here(msg);
                    self.synchronize();
                }
            }
            if self.pos == before {
                // Defensive: guarantee progress on any input.
                self.pos += 1;
            }
        }
    }

    fn type_decl(&mut self) {
        let at = self.here();
        self.keyword("type");
        let Some(name) = self.ident("a type name") else { return self.synchronize() };
        if !self.expect(&TokenKind::Slash) {
            return self.synchronize();
        }
        let arity = match self.peek() {
            Some(Token { kind: TokenKind::Nat(n), .. }) => {
                self.pos += 1;
                *n
            }
            _ => {
                self.error_here("expected an arity");
                return self.synchronize();
            }
        };
        let kind = if self.at_keyword("abstract") {
            self.pos += 1;
            EdgeKind::Abstract
        } else if self.at_keyword("concrete") {
            self.pos += 1;
            EdgeKind::Concrete
        } else {
            EdgeKind::Concrete
        };
        self.expect(&TokenKind::Semi);
        if self.lookup_type(&name).is_some() {
            self.error_at(at, format!("type `{name}` is declared twice"));
            return;
        }
        self.doc.types.push(EdgeType { name, arity, kind });
    }

    /// Parses `node`/`edge` declarations up to the closing brace and builds
    /// a graph, reporting unknown nodes, unknown types and arity mismatches.
    fn graph_body(&mut self) -> Graph {
        let mut nodes: BTreeSet<NodeId> = BTreeSet::new();
        let mut edges: Vec<(Edge, (usize, usize))> = Vec::new();
        loop {
            match self.peek() {
                Some(Token { kind: TokenKind::RBrace, .. }) => {
                    self.pos += 1;
                    break;
                }
                Some(Token { kind: TokenKind::Ident(kw), .. }) if kw == "node" => {
                    let at = self.here();
                    self.pos += 1;
                    if let Some(name) = self.ident("a node name") {
                        if !nodes.insert(NodeId::new(name.clone())) {
                            self.error_at(at, format!("node `{name}` is declared twice"));
                        }
                        self.expect(&TokenKind::Semi);
                    } else {
                        self.synchronize();
                    }
                }
                Some(Token { kind: TokenKind::Ident(kw), .. }) if kw == "edge" => {
                    let at = self.here();
                    self.pos += 1;
                    if let Some((edge, pos)) = self.edge_decl(at) {
                        if edges.iter().any(|(e, _)| e.id == edge.id) {
                            self.error_at(pos, format!("edge `{}` is declared twice", edge.id));
                        } else {
                            edges.push((edge, pos));
                        }
                    }
                }
                Some(_) => {
                    self.error_here("expected `node`, `edge` or `}`");
                    self.synchronize();
                }
                None => {
                    self.error_here("unclosed block: expected `}`");
                    break;
                }
            }
        }
        for (e, at) in &edges {
            for n in &e.attachment {
                if !nodes.contains(n) {
                    self.error_at(*at, format!("edge `{}` attaches unknown node `{n}`", e.id));
                }
            }
        }
        Graph::from_parts(nodes, edges.into_iter().map(|(e, _)| e).collect())
    }

    fn edge_decl(&mut self, at: (usize, usize)) -> Option<(Edge, (usize, usize))> {
        let id = self.ident("an edge name")?;
        if !self.expect(&TokenKind::Colon) {
            self.synchronize();
            return None;
        }
        let ty_name = self.ident("a type name")?;
        if !self.expect(&TokenKind::LParen) {
            self.synchronize();
            return None;
        }
        let args = self.ident_list(TokenKind::RParen)?;
        self.expect(&TokenKind::Semi);
        let Some(ty) = self.lookup_type(&ty_name) else {
            self.error_at(at, format!("edge `{id}` has unknown type `{ty_name}`"));
            return None;
        };
        if args.len() != ty.arity {
            self.error_at(
                at,
                format!(
                    "edge `{id}`: type `{}` has arity {}, got {} attachment nodes",
                    ty.name,
                    ty.arity,
                    args.len()
                ),
            );
            return None;
        }
        let edge = Edge {
            id: EdgeId::new(id),
            ty,
            attachment: args.into_iter().map(NodeId::new).collect(),
        };
        Some((edge, at))
    }

    /// Comma-separated identifiers, possibly empty, up to `close`.
    fn ident_list(&mut self, close: TokenKind) -> Option<Vec<String>> {
        let mut out = Vec::new();
        if matches!(self.peek(), Some(t) if t.kind == close) {
            self.pos += 1;
            return Some(out);
        }
        loop {
            out.push(self.ident("an identifier")?);
            match self.peek() {
                Some(Token { kind: TokenKind::Comma, .. }) => {
                    self.pos += 1;
                }
                Some(t) if t.kind == close => {
                    self.pos += 1;
                    return Some(out);
                }
                _ => {
                    self.error_here(format!("expected `,` or {}", close.describe()));
                    return None;
                }
            }
        }
    }

    fn graph_decl(&mut self) {
        let at = self.here();
        self.keyword("graph");
        let Some(name) = self.ident("a graph name") else { return self.synchronize() };
        if !self.expect(&TokenKind::LBrace) {
            return self.synchronize();
        }
        let graph = self.graph_body();
        if self.doc.graphs.iter().any(|g| g.name == name) {
            self.error_at(at, format!("graph `{name}` is declared twice"));
            return;
        }
        self.doc.graphs.push(NamedGraph { name, graph });
    }

    fn production_decl(&mut self) {
        let at = self.here();
        self.keyword("production");
        let Some(name) = self.ident("a production name") else { return self.synchronize() };
        if !self.expect(&TokenKind::LBrace) {
            return self.synchronize();
        }
        if !self.keyword("lhs") {
            return self.synchronize();
        }
        let Some(lhs_name) = self.ident("a type name") else { return self.synchronize() };
        self.expect(&TokenKind::Semi);
        if !self.keyword("interface") {
            return self.synchronize();
        }
        let Some(interface) = self.semicolon_ident_list() else { return self.synchronize() };
        if !self.keyword("rhs") {
            return self.synchronize();
        }
        if !self.expect(&TokenKind::LBrace) {
            return self.synchronize();
        }
        let rhs = self.graph_body();
        self.expect(&TokenKind::RBrace);

        let Some(lhs) = self.lookup_type(&lhs_name) else {
            self.error_at(at, format!("production `{name}` has unknown lhs type `{lhs_name}`"));
            return;
        };
        let interface: Vec<NodeId> = interface.into_iter().map(NodeId::new).collect();
        match Production::new(lhs, rhs, interface) {
            Ok(p) => {
                if self.doc.productions.iter().any(|q| q.name == name) {
                    self.error_at(at, format!("production `{name}` is declared twice"));
                    return;
                }
                self.doc.productions.push(NamedProduction { name, production: p });
            }
            Err(e) => self.error_at(at, format!("production `{name}`: {e}")),
        }
    }

    /// `a, b, c;` or just `;`.
    fn semicolon_ident_list(&mut self) -> Option<Vec<String>> {
        let mut out = Vec::new();
        if matches!(self.peek(), Some(Token { kind: TokenKind::Semi, .. })) {
            self.pos += 1;
            return Some(out);
        }
        loop {
            out.push(self.ident("an identifier")?);
            match self.peek() {
                Some(Token { kind: TokenKind::Comma, .. }) => {
                    self.pos += 1;
                }
                Some(Token { kind: TokenKind::Semi, .. }) => {
                    self.pos += 1;
                    return Some(out);
                }
                _ => {
                    self.error_here("expected `,` or `;`");
                    return None;
                }
            }
        }
    }

    fn formula_decl(&mut self) {
        let at = self.here();
        self.keyword("formula");
        let Some(name) = self.ident("a formula name") else { return self.synchronize() };
        if !self.expect(&TokenKind::Eq) {
            return self.synchronize();
        }
        let Some(formula) = self.formula_or_ref() else { return self.synchronize() };
        self.expect(&TokenKind::Semi);
        if self.doc.formulas.iter().any(|f| f.name == name) {
            self.error_at(at, format!("formula `{name}` is declared twice"));
            return;
        }
        self.doc.formulas.push(NamedFormula { name, formula });
    }

    /// Either a bare reference to a previously declared formula (an
    /// identifier immediately followed by `;`) or an inline formula.
    fn formula_or_ref(&mut self) -> Option<Formula> {
        if let (Some(Token { kind: TokenKind::Ident(name), .. }), Some(next)) =
            (self.peek(), self.peek2())
        {
            let is_atom_kw = matches!(name.as_str(), "true" | "false" | "no" | "forall" | "exists");
            if next.kind == TokenKind::Semi && !is_atom_kw {
                let at = self.here();
                let name = name.clone();
                self.pos += 1;
                return match self.doc.formulas.iter().find(|f| f.name == name) {
                    Some(f) => Some(f.formula.clone()),
                    None => {
                        self.error_at(at, format!("unknown formula `{name}`"));
                        None
                    }
                };
            }
        }
        let mut scope = Vec::new();
        self.formula(&mut scope, 0)
    }

    fn formula(&mut self, scope: &mut Vec<String>, depth: usize) -> Option<Formula> {
        if depth > MAX_FORMULA_DEPTH {
            self.error_here("formula is nested too deeply");
            return None;
        }
        let mut disjuncts = vec![self.conjunction(scope, depth)?];
        while matches!(self.peek(), Some(Token { kind: TokenKind::Pipe, .. })) {
            self.pos += 1;
            disjuncts.push(self.conjunction(scope, depth)?);
        }
        Some(if disjuncts.len() == 1 { disjuncts.pop().unwrap() } else { Formula::Or(disjuncts) })
    }

    fn conjunction(&mut self, scope: &mut Vec<String>, depth: usize) -> Option<Formula> {
        let mut conjuncts = vec![self.primary(scope, depth)?];
        while matches!(self.peek(), Some(Token { kind: TokenKind::Amp, .. })) {
            self.pos += 1;
            conjuncts.push(self.primary(scope, depth)?);
        }
        Some(if conjuncts.len() == 1 { conjuncts.pop().unwrap() } else { Formula::And(conjuncts) })
    }

    fn primary(&mut self, scope: &mut Vec<String>, depth: usize) -> Option<Formula> {
        if depth > MAX_FORMULA_DEPTH {
            self.error_here("formula is nested too deeply");
            return None;
        }
        let at = self.here();
        match self.peek().map(|t| t.kind.clone()) {
            Some(TokenKind::LParen) => {
                self.pos += 1;
                let f = self.formula(scope, depth + 1)?;
                self.expect(&TokenKind::RParen).then_some(f)
            }
            Some(TokenKind::Ident(kw)) => match kw.as_str() {
                "true" => {
                    self.pos += 1;
                    Some(Formula::Top)
                }
                "false" => {
                    self.pos += 1;
                    Some(Formula::Bot)
                }
                "no" => {
                    self.pos += 1;
                    let t1 = self.ident("a type name")?;
                    let ty1 = match self.lookup_type(&t1) {
                        Some(t) => t,
                        None => {
                            self.error_at(at, format!("unknown type `{t1}`"));
                            return None;
                        }
                    };
                    if matches!(self.peek(), Some(Token { kind: TokenKind::Comma, .. })) {
                        self.pos += 1;
                        let t2 = self.ident("a type name")?;
                        let ty2 = match self.lookup_type(&t2) {
                            Some(t) => t,
                            None => {
                                self.error_at(at, format!("unknown type `{t2}`"));
                                return None;
                            }
                        };
                        Some(Formula::NoEdge2(ty1, ty2))
                    } else {
                        Some(Formula::NoEdge(ty1))
                    }
                }
                "forall" | "exists" => {
                    let universal = kw == "forall";
                    self.pos += 1;
                    let ty_name = self.ident("a type name")?;
                    let Some(ty) = self.lookup_type(&ty_name) else {
                        self.error_at(at, format!("unknown type `{ty_name}`"));
                        return None;
                    };
                    if !self.expect(&TokenKind::LParen) {
                        return None;
                    }
                    let vars = self.ident_list(TokenKind::RParen)?;
                    if vars.len() != ty.arity {
                        self.error_at(
                            at,
                            format!(
                                "quantifier over `{}` must bind {} variables, got {}",
                                ty.name,
                                ty.arity,
                                vars.len()
                            ),
                        );
                        return None;
                    }
                    let mut fresh = BTreeSet::new();
                    for v in &vars {
                        if scope.contains(v) || !fresh.insert(v.clone()) {
                            self.error_at(at, format!("variable `{v}` is already bound"));
                            return None;
                        }
                    }
                    if !self.expect(&TokenKind::Dot) {
                        return None;
                    }
                    let before = scope.len();
                    scope.extend(vars.iter().cloned());
                    let body = self.formula(scope, depth + 1);
                    scope.truncate(before);
                    let body = body?;
                    let vars = vars.into_iter().map(VarName::new).collect();
                    Some(if universal {
                        Formula::forall(ty, vars, body)
                    } else {
                        Formula::exists(ty, vars, body)
                    })
                }
                _ => {
                    // A variable: `x = y` or `x != y`.
                    self.pos += 1;
                    let negated = match self.peek() {
                        Some(Token { kind: TokenKind::Eq, .. }) => false,
                        Some(Token { kind: TokenKind::Neq, .. }) => true,
                        _ => {
                            self.error_here("expected `=` or `!=` after a variable");
                            return None;
                        }
                    };
                    self.pos += 1;
                    let rhs = self.ident("a variable")?;
                    Some(if negated { Formula::neq(kw, rhs) } else { Formula::eq(kw, rhs) })
                }
            },
            Some(other) => {
                self.error_here(format!("expected a formula, found {}", other.describe()));
                None
            }
            None => {
                self.error_here("expected a formula, found end of input");
                None
            }
        }
    }

    fn closed_formula_field(&mut self, field: &str) -> Option<Formula> {
        let at = self.here();
        if !self.keyword(field) {
            return None;
        }
        if !self.expect(&TokenKind::Eq) {
            return None;
        }
        let f = self.formula_or_ref()?;
        self.expect(&TokenKind::Semi);
        if let Some(v) = free_vars(&f).into_iter().next() {
            self.error_at(at, format!("`{field}` must be a closed formula: free variable `{v}`"));
            return None;
        }
        Some(f)
    }

    fn asserted_decl(&mut self) {
        let at = self.here();
        self.keyword("asserted");
        let Some(name) = self.ident("an asserted production name") else {
            return self.synchronize();
        };
        if !self.expect(&TokenKind::LBrace) {
            return self.synchronize();
        }
        let Some(pre) = self.closed_formula_field("pre") else { return self.synchronize() };
        if !self.keyword("production") {
            return self.synchronize();
        }
        let prod_at = self.here();
        let Some(prod) = self.ident("a production name") else { return self.synchronize() };
        self.expect(&TokenKind::Semi);
        let Some(post) = self.closed_formula_field("post") else { return self.synchronize() };
        self.expect(&TokenKind::RBrace);
        if self.doc.productions.iter().all(|p| p.name != prod) {
            self.error_at(prod_at, format!("unknown production `{prod}`"));
            return;
        }
        if self.doc.asserted.iter().any(|a| a.name == name) {
            self.error_at(at, format!("asserted production `{name}` is declared twice"));
            return;
        }
        self.doc.asserted.push(AssertedDecl { name, pre, production: prod, post });
    }

    fn style_decl(&mut self) {
        let at = self.here();
        self.keyword("style");
        let Some(name) = self.ident("a style name") else { return self.synchronize() };
        if !self.expect(&TokenKind::LBrace) {
            return self.synchronize();
        }
        let Some(invariant) = self.closed_formula_field("invariant") else {
            return self.synchronize();
        };
        let mut asserted = Vec::new();
        loop {
            match self.peek() {
                Some(Token { kind: TokenKind::RBrace, .. }) => {
                    self.pos += 1;
                    break;
                }
                Some(Token { kind: TokenKind::Ident(kw), .. }) if kw == "asserted" => {
                    let ref_at = self.here();
                    self.pos += 1;
                    let Some(ap) = self.ident("an asserted production name") else {
                        return self.synchronize();
                    };
                    self.expect(&TokenKind::Semi);
                    if self.doc.asserted.iter().all(|a| a.name != ap) {
                        self.error_at(ref_at, format!("unknown asserted production `{ap}`"));
                    } else {
                        asserted.push(ap);
                    }
                }
                _ => {
                    self.error_here("expected `asserted` or `}`");
                    return self.synchronize();
                }
            }
        }
        if self.doc.styles.iter().any(|s| s.name == name) {
            self.error_at(at, format!("style `{name}` is declared twice"));
            return;
        }
        self.doc.styles.push(StyleDecl { name, invariant, asserted });
    }
}
