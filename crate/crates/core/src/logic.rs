//! The formula language over typed hypergraphs.
//!
//! Formulae talk about node equality under edge-typed quantifiers plus
//! edge-absence literals. Quantifiers range over the attachment tuples of
//! same-typed edges: `forall B(x,y). phi` holds when `phi` holds with
//! `(x,y)` bound componentwise to the attachment of every B-edge, and the
//! existential is its dual (false on graphs without B-edges).

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{EdgeType, Graph, NodeId};

/// A logical variable.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VarName(pub String);

impl VarName {
    pub fn new(name: impl Into<String>) -> Self {
        VarName(name.into())
    }
}

impl fmt::Display for VarName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// A partial map from variables to nodes, used to evaluate open formulae.
pub type Assignment = BTreeMap<VarName, NodeId>;

/// Formulae. The variant order doubles as the canonical child ordering used
/// by [`simplify`], so edge-absence literals sort before equalities and
/// quantified subformulae.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Formula {
    Top,
    Bot,
    /// No edge of the given type is present.
    NoEdge(EdgeType),
    /// No edge of either given type is present.
    NoEdge2(EdgeType, EdgeType),
    Eq(VarName, VarName),
    Neq(VarName, VarName),
    Not(Box<Formula>),
    And(Vec<Formula>),
    Or(Vec<Formula>),
    Forall(EdgeType, Vec<VarName>, Box<Formula>),
    Exists(EdgeType, Vec<VarName>, Box<Formula>),
}

impl Formula {
    pub fn and(children: Vec<Formula>) -> Formula {
        Formula::And(children)
    }

    pub fn or(children: Vec<Formula>) -> Formula {
        Formula::Or(children)
    }

    pub fn forall(ty: EdgeType, vars: Vec<VarName>, body: Formula) -> Formula {
        Formula::Forall(ty, vars, Box::new(body))
    }

    pub fn exists(ty: EdgeType, vars: Vec<VarName>, body: Formula) -> Formula {
        Formula::Exists(ty, vars, Box::new(body))
    }

    pub fn not(body: Formula) -> Formula {
        Formula::Not(Box::new(body))
    }

    pub fn eq(a: impl Into<String>, b: impl Into<String>) -> Formula {
        Formula::Eq(VarName::new(a), VarName::new(b))
    }

    pub fn neq(a: impl Into<String>, b: impl Into<String>) -> Formula {
        Formula::Neq(VarName::new(a), VarName::new(b))
    }

    pub fn is_closed(&self) -> bool {
        free_vars(self).is_empty()
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LogicError {
    #[error("formula is not closed: free variable {0}")]
    NotClosed(VarName),
    #[error("variable {0} is not covered by the assignment")]
    UnboundVariable(VarName),
    #[error("quantifier over {ty} binds {got} variables, arity is {arity}")]
    QuantifierArity { ty: String, arity: usize, got: usize },
    #[error("variable {0} is bound more than once")]
    Rebinding(VarName),
    #[error("bound variable {0} also occurs free")]
    BoundMeetsFree(VarName),
}

/// Free variables: quantified variables are bound in the body only.
pub fn free_vars(phi: &Formula) -> BTreeSet<VarName> {
    match phi {
        Formula::Top | Formula::Bot | Formula::NoEdge(_) | Formula::NoEdge2(_, _) => {
            BTreeSet::new()
        }
        Formula::Eq(a, b) | Formula::Neq(a, b) => [a.clone(), b.clone()].into_iter().collect(),
        Formula::Not(f) => free_vars(f),
        Formula::And(fs) | Formula::Or(fs) => fs.iter().flat_map(free_vars).collect(),
        Formula::Forall(_, vars, body) | Formula::Exists(_, vars, body) => {
            let mut fv = free_vars(body);
            for v in vars {
                fv.remove(v);
            }
            fv
        }
    }
}

/// Checks arity of every quantifier, that no variable is rebound along a
/// path, and that bound variables stay apart from the free ones.
pub fn well_formed(phi: &Formula) -> Result<(), LogicError> {
    let free = free_vars(phi);
    fn walk(
        phi: &Formula,
        in_scope: &mut BTreeSet<VarName>,
        free: &BTreeSet<VarName>,
    ) -> Result<(), LogicError> {
        match phi {
            Formula::Forall(ty, vars, body) | Formula::Exists(ty, vars, body) => {
                if vars.len() != ty.arity {
                    return Err(LogicError::QuantifierArity {
                        ty: ty.name.clone(),
                        arity: ty.arity,
                        got: vars.len(),
                    });
                }
                let mut local = BTreeSet::new();
                for v in vars {
                    if in_scope.contains(v) || !local.insert(v.clone()) {
                        return Err(LogicError::Rebinding(v.clone()));
                    }
                    if free.contains(v) {
                        return Err(LogicError::BoundMeetsFree(v.clone()));
                    }
                }
                for v in vars {
                    in_scope.insert(v.clone());
                }
                walk(body, in_scope, free)?;
                for v in vars {
                    in_scope.remove(v);
                }
                Ok(())
            }
            Formula::Not(f) => walk(f, in_scope, free),
            Formula::And(fs) | Formula::Or(fs) => {
                for f in fs {
                    walk(f, in_scope, free)?;
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }
    walk(phi, &mut BTreeSet::new(), &free)
}

/// Hands out variable names unused in a formula, for the existentials
/// introduced when negating edge-absence literals.
struct FreshVars {
    used: BTreeSet<String>,
    next: usize,
}

impl FreshVars {
    fn scanning(phi: &Formula) -> Self {
        let mut used = BTreeSet::new();
        collect_vars(phi, &mut used);
        FreshVars { used, next: 1 }
    }

    fn take(&mut self, n: usize) -> Vec<VarName> {
        let mut out = Vec::with_capacity(n);
        while out.len() < n {
            let cand = format!("w{}", self.next);
            self.next += 1;
            if self.used.insert(cand.clone()) {
                out.push(VarName(cand));
            }
        }
        out
    }
}

fn collect_vars(phi: &Formula, out: &mut BTreeSet<String>) {
    match phi {
        Formula::Eq(a, b) | Formula::Neq(a, b) => {
            out.insert(a.0.clone());
            out.insert(b.0.clone());
        }
        Formula::Not(f) => collect_vars(f, out),
        Formula::And(fs) | Formula::Or(fs) => fs.iter().for_each(|f| collect_vars(f, out)),
        Formula::Forall(_, vars, body) | Formula::Exists(_, vars, body) => {
            for v in vars {
                out.insert(v.0.clone());
            }
            collect_vars(body, out);
        }
        _ => {}
    }
}

/// Negation normal form of a closed formula: no `Not` remains, negation is
/// realized as `Neq` on equalities.
pub fn nnf(phi: &Formula) -> Result<Formula, LogicError> {
    if let Some(v) = free_vars(phi).into_iter().next() {
        return Err(LogicError::NotClosed(v));
    }
    let mut fresh = FreshVars::scanning(phi);
    Ok(push(phi, false, &mut fresh))
}

/// NNF of the negation of an NNF formula.
pub fn nnf_not(phi: &Formula) -> Formula {
    let mut fresh = FreshVars::scanning(phi);
    push(phi, true, &mut fresh)
}

fn push(phi: &Formula, neg: bool, fresh: &mut FreshVars) -> Formula {
    match (phi, neg) {
        (Formula::Top, false) | (Formula::Bot, true) => Formula::Top,
        (Formula::Top, true) | (Formula::Bot, false) => Formula::Bot,
        (Formula::Eq(a, b), false) => Formula::Eq(a.clone(), b.clone()),
        (Formula::Eq(a, b), true) => Formula::Neq(a.clone(), b.clone()),
        (Formula::Neq(a, b), false) => Formula::Neq(a.clone(), b.clone()),
        (Formula::Neq(a, b), true) => Formula::Eq(a.clone(), b.clone()),
        (Formula::NoEdge(ty), false) => Formula::NoEdge(ty.clone()),
        (Formula::NoEdge(ty), true) => {
            let vars = fresh.take(ty.arity);
            Formula::exists(ty.clone(), vars, Formula::Top)
        }
        (Formula::NoEdge2(t1, t2), false) => Formula::NoEdge2(t1.clone(), t2.clone()),
        (Formula::NoEdge2(t1, t2), true) => {
            let v1 = fresh.take(t1.arity);
            let v2 = fresh.take(t2.arity);
            Formula::or(vec![
                Formula::exists(t1.clone(), v1, Formula::Top),
                Formula::exists(t2.clone(), v2, Formula::Top),
            ])
        }
        (Formula::Not(f), _) => push(f, !neg, fresh),
        (Formula::And(fs), false) => Formula::and(fs.iter().map(|f| push(f, false, fresh)).collect()),
        (Formula::And(fs), true) => Formula::or(fs.iter().map(|f| push(f, true, fresh)).collect()),
        (Formula::Or(fs), false) => Formula::or(fs.iter().map(|f| push(f, false, fresh)).collect()),
        (Formula::Or(fs), true) => Formula::and(fs.iter().map(|f| push(f, true, fresh)).collect()),
        (Formula::Forall(ty, vars, body), false) => {
            Formula::forall(ty.clone(), vars.clone(), push(body, false, fresh))
        }
        (Formula::Forall(ty, vars, body), true) => {
            Formula::exists(ty.clone(), vars.clone(), push(body, true, fresh))
        }
        (Formula::Exists(ty, vars, body), false) => {
            Formula::exists(ty.clone(), vars.clone(), push(body, false, fresh))
        }
        (Formula::Exists(ty, vars, body), true) => {
            Formula::forall(ty.clone(), vars.clone(), push(body, true, fresh))
        }
    }
}

/// Evaluates `phi` on `g` under `h`. Errors on free variables not covered
/// by the assignment.
pub fn satisfies(g: &Graph, h: &Assignment, phi: &Formula) -> Result<bool, LogicError> {
    let mut env = h.clone();
    eval(g, &mut env, phi)
}

fn eval(g: &Graph, env: &mut Assignment, phi: &Formula) -> Result<bool, LogicError> {
    match phi {
        Formula::Top => Ok(true),
        Formula::Bot => Ok(false),
        Formula::Eq(a, b) => Ok(lookup(env, a)? == lookup(env, b)?),
        Formula::Neq(a, b) => Ok(lookup(env, a)? != lookup(env, b)?),
        Formula::NoEdge(ty) => Ok(!g.has_edge_of_type(ty)),
        Formula::NoEdge2(t1, t2) => Ok(!g.has_edge_of_type(t1) && !g.has_edge_of_type(t2)),
        Formula::Not(f) => Ok(!eval(g, env, f)?),
        Formula::And(fs) => {
            for f in fs {
                if !eval(g, env, f)? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        Formula::Or(fs) => {
            for f in fs {
                if eval(g, env, f)? {
                    return Ok(true);
                }
            }
            Ok(false)
        }
        Formula::Forall(ty, vars, body) => {
            let edges: Vec<Vec<NodeId>> =
                g.edges_of_type(ty).map(|e| e.attachment.clone()).collect();
            for attachment in edges {
                let saved = bind(env, vars, &attachment);
                let ok = eval(g, env, body);
                unbind(env, vars, saved);
                if !ok? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        Formula::Exists(ty, vars, body) => {
            let edges: Vec<Vec<NodeId>> =
                g.edges_of_type(ty).map(|e| e.attachment.clone()).collect();
            for attachment in edges {
                let saved = bind(env, vars, &attachment);
                let ok = eval(g, env, body);
                unbind(env, vars, saved);
                if ok? {
                    return Ok(true);
                }
            }
            Ok(false)
        }
    }
}

fn lookup(env: &Assignment, v: &VarName) -> Result<NodeId, LogicError> {
    env.get(v).cloned().ok_or_else(|| LogicError::UnboundVariable(v.clone()))
}

fn bind(env: &mut Assignment, vars: &[VarName], nodes: &[NodeId]) -> Vec<Option<NodeId>> {
    vars.iter()
        .zip(nodes.iter())
        .map(|(v, n)| env.insert(v.clone(), n.clone()))
        .collect()
}

fn unbind(env: &mut Assignment, vars: &[VarName], saved: Vec<Option<NodeId>>) {
    for (v, old) in vars.iter().zip(saved) {
        match old {
            Some(n) => env.insert(v.clone(), n),
            None => env.remove(v),
        };
    }
}

/// Normalizes an NNF formula: flattens nested conjunctions and disjunctions,
/// drops neutral elements, collapses absorbing ones, deduplicates and sorts
/// children, unwraps singletons, and distributes universals over
/// conjunctions (and existentials over disjunctions) so that equivalent
/// quantifier arrangements print identically. The result is equivalent to
/// the input, and the function is syntactically idempotent.
pub fn simplify(phi: &Formula) -> Formula {
    match phi {
        Formula::And(fs) => rebuild_and(fs.iter().map(simplify).collect()),
        Formula::Or(fs) => rebuild_or(fs.iter().map(simplify).collect()),
        Formula::Forall(ty, vars, body) => {
            let body = simplify(body);
            if let Formula::And(children) = body {
                rebuild_and(
                    children
                        .into_iter()
                        .map(|c| Formula::forall(ty.clone(), vars.clone(), c))
                        .collect(),
                )
            } else {
                Formula::forall(ty.clone(), vars.clone(), body)
            }
        }
        Formula::Exists(ty, vars, body) => {
            let body = simplify(body);
            if let Formula::Or(children) = body {
                rebuild_or(
                    children
                        .into_iter()
                        .map(|c| Formula::exists(ty.clone(), vars.clone(), c))
                        .collect(),
                )
            } else {
                Formula::exists(ty.clone(), vars.clone(), body)
            }
        }
        Formula::Not(f) => Formula::not(simplify(f)),
        leaf => leaf.clone(),
    }
}

fn rebuild_and(children: Vec<Formula>) -> Formula {
    let mut set = BTreeSet::new();
    for c in children {
        match c {
            Formula::Top => {}
            Formula::Bot => return Formula::Bot,
            Formula::And(gs) => {
                for g in gs {
                    if g == Formula::Bot {
                        return Formula::Bot;
                    }
                    if g != Formula::Top {
                        set.insert(g);
                    }
                }
            }
            other => {
                set.insert(other);
            }
        }
    }
    match set.len() {
        0 => Formula::Top,
        1 => set.into_iter().next().unwrap(),
        _ => Formula::And(set.into_iter().collect()),
    }
}

fn rebuild_or(children: Vec<Formula>) -> Formula {
    let mut set = BTreeSet::new();
    for c in children {
        match c {
            Formula::Bot => {}
            Formula::Top => return Formula::Top,
            Formula::Or(gs) => {
                for g in gs {
                    if g == Formula::Top {
                        return Formula::Top;
                    }
                    if g != Formula::Bot {
                        set.insert(g);
                    }
                }
            }
            other => {
                set.insert(other);
            }
        }
    }
    match set.len() {
        0 => Formula::Bot,
        1 => set.into_iter().next().unwrap(),
        _ => Formula::Or(set.into_iter().collect()),
    }
}
