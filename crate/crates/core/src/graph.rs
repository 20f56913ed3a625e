//! Typed hypergraphs, refinement productions and hyperedge replacement.
//!
//! A graph is a finite set of nodes together with hyperedges; each edge is
//! attached to an ordered sequence of nodes whose length is fixed by the
//! arity of its type. A production replaces a single edge of a given type
//! with a copy of a right-hand-side graph, identifying the interface nodes
//! of the copy with the attachment nodes of the replaced edge and renaming
//! the remaining (internal) nodes apart.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Whether an edge type stands for a refinable component or a finished one.
/// Only the recovery planner cares about the distinction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EdgeKind {
    Abstract,
    Concrete,
}

/// An edge type from a ranked alphabet: a name plus the number of tentacles.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct EdgeType {
    pub name: String,
    pub arity: usize,
    pub kind: EdgeKind,
}

impl EdgeType {
    pub fn new(name: impl Into<String>, arity: usize) -> Self {
        EdgeType { name: name.into(), arity, kind: EdgeKind::Concrete }
    }

    pub fn abstract_(name: impl Into<String>, arity: usize) -> Self {
        EdgeType { name: name.into(), arity, kind: EdgeKind::Abstract }
    }
}

impl fmt::Display for EdgeType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.name, self.arity)
    }
}

/// A node identifier. Identifiers are totally ordered so that enumeration,
/// fresh-name generation and canonical printing are deterministic.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct NodeId(pub String);

impl NodeId {
    pub fn new(id: impl Into<String>) -> Self {
        NodeId(id.into())
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// An edge identifier, unique within a graph.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EdgeId(pub String);

impl EdgeId {
    pub fn new(id: impl Into<String>) -> Self {
        EdgeId(id.into())
    }
}

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// A hyperedge: a typed edge attached to `ty.arity` nodes (repeats allowed).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Edge {
    pub id: EdgeId,
    pub ty: EdgeType,
    pub attachment: Vec<NodeId>,
}

/// A finite typed hypergraph. Edges are kept sorted by identifier so that
/// iteration order, serialization and match order are deterministic.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Graph {
    pub nodes: BTreeSet<NodeId>,
    edges: Vec<Edge>,
}

impl Graph {
    pub fn new() -> Self {
        Graph::default()
    }

    /// Builds a graph from parts, sorting edges by id.
    pub fn from_parts(nodes: impl IntoIterator<Item = NodeId>, edges: Vec<Edge>) -> Self {
        let mut g = Graph { nodes: nodes.into_iter().collect(), edges };
        g.edges.sort_by(|a, b| a.id.cmp(&b.id));
        g
    }

    pub fn add_node(&mut self, node: NodeId) {
        self.nodes.insert(node);
    }

    pub fn add_edge(&mut self, edge: Edge) {
        let pos = self.edges.partition_point(|e| e.id < edge.id);
        self.edges.insert(pos, edge);
    }

    /// Edges in ascending id order.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, id: &EdgeId) -> Option<&Edge> {
        self.edges.iter().find(|e| &e.id == id)
    }

    /// Edges whose type name matches `ty`, in id order.
    pub fn edges_of_type<'a>(&'a self, ty: &'a EdgeType) -> impl Iterator<Item = &'a Edge> {
        self.edges.iter().filter(move |e| e.ty.name == ty.name)
    }

    pub fn has_edge_of_type(&self, ty: &EdgeType) -> bool {
        self.edges_of_type(ty).next().is_some()
    }
}

/// A refinement production: a single left-hand-side edge type, a replacement
/// graph, and the ordered interface identifying the replaced edge's
/// attachment nodes with nodes of the replacement.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Production {
    pub lhs: EdgeType,
    pub rhs: Graph,
    /// Position `j` holds the rhs node identified with the `j`-th attachment
    /// node of the replaced edge. Entries are pairwise distinct.
    pub interface: Vec<NodeId>,
}

impl Production {
    pub fn new(lhs: EdgeType, rhs: Graph, interface: Vec<NodeId>) -> Result<Self, GraphError> {
        let p = Production { lhs, rhs, interface };
        p.check()?;
        Ok(p)
    }

    fn check(&self) -> Result<(), GraphError> {
        if self.interface.len() != self.lhs.arity {
            return Err(GraphError::InterfaceArity {
                expected: self.lhs.arity,
                got: self.interface.len(),
            });
        }
        let distinct: BTreeSet<_> = self.interface.iter().collect();
        if distinct.len() != self.interface.len() {
            return Err(GraphError::InterfaceNotInjective);
        }
        for n in &self.interface {
            if !self.rhs.nodes.contains(n) {
                return Err(GraphError::InterfaceNodeMissing(n.clone()));
            }
        }
        Ok(())
    }

    /// Nodes of the replacement graph outside the interface; these are
    /// renamed apart at every application.
    pub fn internal_nodes(&self) -> BTreeSet<NodeId> {
        let iface: BTreeSet<_> = self.interface.iter().cloned().collect();
        self.rhs.nodes.difference(&iface).cloned().collect()
    }

    pub fn is_interface(&self, n: &NodeId) -> bool {
        self.interface.contains(n)
    }

    pub fn is_internal(&self, n: &NodeId) -> bool {
        self.rhs.nodes.contains(n) && !self.interface.contains(n)
    }
}

/// An occurrence of a production's left-hand side in a host graph: an edge
/// whose type equals the production's lhs type.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Match {
    pub edge_id: EdgeId,
}

/// A violation reported by [`validate_graph`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    DanglingAttachment { edge: EdgeId, node: NodeId },
    ArityMismatch { edge: EdgeId, expected: usize, got: usize },
    UnknownType { edge: EdgeId, ty: String },
    DuplicateEdgeId { edge: EdgeId },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::DanglingAttachment { edge, node } => {
                write!(f, "edge {edge}: attachment node {node} is not a node of the graph")
            }
            Violation::ArityMismatch { edge, expected, got } => {
                write!(f, "edge {edge}: arity mismatch, type expects {expected} nodes, got {got}")
            }
            Violation::UnknownType { edge, ty } => {
                write!(f, "edge {edge}: type {ty} is not in the alphabet")
            }
            Violation::DuplicateEdgeId { edge } => write!(f, "duplicate edge id {edge}"),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("match refers to edge {0}, which is not in the host graph")]
    NoSuchEdge(EdgeId),
    #[error("matched edge {edge} has type {got}, production replaces {expected}")]
    TypeMismatch { edge: EdgeId, expected: String, got: String },
    #[error("interface must list {expected} nodes, got {got}")]
    InterfaceArity { expected: usize, got: usize },
    #[error("interface nodes must be pairwise distinct")]
    InterfaceNotInjective,
    #[error("interface node {0} is not a node of the replacement graph")]
    InterfaceNodeMissing(NodeId),
}

/// Checks the graph invariants against an alphabet. Violations are
/// returned, not raised; an empty list means the graph is valid.
pub fn validate_graph(g: &Graph, alphabet: &[EdgeType]) -> Vec<Violation> {
    let mut out = Vec::new();
    let mut seen = BTreeSet::new();
    for e in g.edges() {
        if !seen.insert(e.id.clone()) {
            out.push(Violation::DuplicateEdgeId { edge: e.id.clone() });
        }
        match alphabet.iter().find(|t| t.name == e.ty.name) {
            None => out.push(Violation::UnknownType { edge: e.id.clone(), ty: e.ty.name.clone() }),
            Some(t) => {
                if e.attachment.len() != t.arity {
                    out.push(Violation::ArityMismatch {
                        edge: e.id.clone(),
                        expected: t.arity,
                        got: e.attachment.len(),
                    });
                }
            }
        }
        if e.attachment.len() != e.ty.arity {
            out.push(Violation::ArityMismatch {
                edge: e.id.clone(),
                expected: e.ty.arity,
                got: e.attachment.len(),
            });
        }
        for n in &e.attachment {
            if !g.nodes.contains(n) {
                out.push(Violation::DanglingAttachment { edge: e.id.clone(), node: n.clone() });
            }
        }
    }
    out.sort_by_key(|v| format!("{v}"));
    out.dedup();
    out
}

/// All occurrences of `p`'s left-hand side in `g`, in ascending edge-id order.
pub fn find_matches(g: &Graph, p: &Production) -> Vec<Match> {
    g.edges_of_type(&p.lhs).map(|e| Match { edge_id: e.id.clone() }).collect()
}

/// Applies `p` at `m`: removes the matched edge and glues in a copy of the
/// replacement graph. Interface nodes are identified with the matched edge's
/// attachment nodes; internal nodes and copied edge ids are renamed apart
/// with a counter-suffix scheme starting at `seed`, so results are
/// reproducible for a fixed seed.
pub fn apply_production(
    g: &Graph,
    m: &Match,
    p: &Production,
    seed: u64,
) -> Result<Graph, GraphError> {
    let matched = g.edge(&m.edge_id).ok_or_else(|| GraphError::NoSuchEdge(m.edge_id.clone()))?;
    if matched.ty.name != p.lhs.name {
        return Err(GraphError::TypeMismatch {
            edge: m.edge_id.clone(),
            expected: p.lhs.name.clone(),
            got: matched.ty.name.clone(),
        });
    }

    // Interface node at position j maps to the j-th attachment node.
    let mut node_map: BTreeMap<NodeId, NodeId> = BTreeMap::new();
    for (iface, host) in p.interface.iter().zip(matched.attachment.iter()) {
        node_map.insert(iface.clone(), host.clone());
    }

    let mut result = g.clone();
    result.edges.retain(|e| e.id != m.edge_id);

    let mut used_nodes: BTreeSet<NodeId> = result.nodes.clone();
    for internal in p.internal_nodes() {
        let fresh = fresh_name(&internal.0, seed, |cand| used_nodes.contains(&NodeId::new(cand)));
        let fresh = NodeId::new(fresh);
        used_nodes.insert(fresh.clone());
        node_map.insert(internal, fresh.clone());
        result.nodes.insert(fresh);
    }

    let mut used_edges: BTreeSet<EdgeId> =
        result.edges.iter().map(|e| e.id.clone()).collect();
    for e in p.rhs.edges() {
        let id = if used_edges.contains(&e.id) {
            EdgeId::new(fresh_name(&e.id.0, seed, |cand| {
                used_edges.contains(&EdgeId::new(cand))
            }))
        } else {
            e.id.clone()
        };
        used_edges.insert(id.clone());
        let attachment = e.attachment.iter().map(|n| node_map[n].clone()).collect();
        result.add_edge(Edge { id, ty: e.ty.clone(), attachment });
    }
    Ok(result)
}

fn fresh_name(base: &str, seed: u64, taken: impl Fn(&str) -> bool) -> String {
    let mut k = seed;
    loop {
        let cand = format!("{base}_{k}");
        if !taken(&cand) {
            return cand;
        }
        k += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ty_a() -> EdgeType {
        EdgeType::abstract_("A", 1)
    }
    fn ty_b() -> EdgeType {
        EdgeType::new("B", 2)
    }
    fn ty_c() -> EdgeType {
        EdgeType::new("C", 1)
    }

    /// The running production: replaces an A-edge by a B-edge from the
    /// interface node to a fresh internal node.
    pub(crate) fn refine_a_to_b() -> Production {
        let mut rhs = Graph::new();
        rhs.add_node(NodeId::new("u"));
        rhs.add_node(NodeId::new("u1"));
        rhs.add_edge(Edge {
            id: EdgeId::new("b"),
            ty: ty_b(),
            attachment: vec![NodeId::new("u1"), NodeId::new("u")],
        });
        Production::new(ty_a(), rhs, vec![NodeId::new("u1")]).unwrap()
    }

    fn single_a_host() -> Graph {
        let mut g = Graph::new();
        g.add_node(NodeId::new("n1"));
        g.add_edge(Edge { id: EdgeId::new("a1"), ty: ty_a(), attachment: vec![NodeId::new("n1")] });
        g
    }

    #[test]
    fn empty_graph_is_valid() {
        assert!(validate_graph(&Graph::new(), &[ty_a(), ty_b()]).is_empty());
    }

    #[test]
    fn arity_mismatch_is_reported() {
        let mut g = Graph::new();
        g.add_node(NodeId::new("n1"));
        g.add_edge(Edge { id: EdgeId::new("e1"), ty: ty_b(), attachment: vec![NodeId::new("n1")] });
        let violations = validate_graph(&g, &[ty_b()]);
        assert!(violations
            .iter()
            .any(|v| matches!(v, Violation::ArityMismatch { expected: 2, got: 1, .. })));
    }

    #[test]
    fn refinement_rhs_is_valid() {
        let p = refine_a_to_b();
        assert!(validate_graph(&p.rhs, &[ty_a(), ty_b()]).is_empty());
    }

    #[test]
    fn no_matches_without_lhs_edges() {
        let mut g = Graph::new();
        g.add_node(NodeId::new("n1"));
        g.add_edge(Edge { id: EdgeId::new("c1"), ty: ty_c(), attachment: vec![NodeId::new("n1")] });
        assert!(find_matches(&g, &refine_a_to_b()).is_empty());
    }

    #[test]
    fn matches_come_in_edge_id_order() {
        let mut g = single_a_host();
        g.add_node(NodeId::new("n2"));
        g.add_edge(Edge { id: EdgeId::new("a2"), ty: ty_a(), attachment: vec![NodeId::new("n2")] });
        let ms = find_matches(&g, &refine_a_to_b());
        assert_eq!(
            ms,
            vec![Match { edge_id: EdgeId::new("a1") }, Match { edge_id: EdgeId::new("a2") }]
        );
    }

    #[test]
    fn single_edge_gives_one_match() {
        assert_eq!(find_matches(&single_a_host(), &refine_a_to_b()).len(), 1);
    }

    #[test]
    fn apply_glues_interface_and_renames_internals() {
        let g = single_a_host();
        let p = refine_a_to_b();
        let m = &find_matches(&g, &p)[0];
        let result = apply_production(&g, m, &p, 0).unwrap();
        assert_eq!(
            result.nodes,
            [NodeId::new("n1"), NodeId::new("u_0")].into_iter().collect()
        );
        assert_eq!(result.edges().len(), 1);
        let b = &result.edges()[0];
        assert_eq!(b.ty, ty_b());
        assert_eq!(b.attachment, vec![NodeId::new("n1"), NodeId::new("u_0")]);
    }

    #[test]
    fn empty_rhs_body_just_deletes_the_edge() {
        let mut rhs = Graph::new();
        rhs.add_node(NodeId::new("q"));
        let p = Production::new(ty_a(), rhs, vec![NodeId::new("q")]).unwrap();
        let g = single_a_host();
        let m = &find_matches(&g, &p)[0];
        let result = apply_production(&g, m, &p, 0).unwrap();
        assert!(result.edges().is_empty());
        assert_eq!(result.nodes, g.nodes);
    }

    #[test]
    fn edge_count_follows_replacement_arithmetic() {
        // |edges(result)| = |edges(g)| - 1 + |edges(rhs)| on assorted hosts.
        let p = refine_a_to_b();
        for extra in 0..4 {
            let mut g = single_a_host();
            for i in 0..extra {
                let n = NodeId::new(format!("m{i}"));
                g.add_node(n.clone());
                g.add_edge(Edge {
                    id: EdgeId::new(format!("c{i}")),
                    ty: ty_c(),
                    attachment: vec![n],
                });
            }
            let m = &find_matches(&g, &p)[0];
            let result = apply_production(&g, m, &p, 0).unwrap();
            assert_eq!(result.edges().len(), g.edges().len() - 1 + p.rhs.edges().len());
        }
    }

    #[test]
    fn fresh_nodes_are_disjoint_from_host() {
        let mut g = single_a_host();
        // Force a collision with the naive fresh name.
        g.add_node(NodeId::new("u_0"));
        let p = refine_a_to_b();
        let m = &find_matches(&g, &p)[0];
        let result = apply_production(&g, m, &p, 0).unwrap();
        let fresh: BTreeSet<_> = result.nodes.difference(&g.nodes).collect();
        assert_eq!(fresh.len(), p.internal_nodes().len());
        assert!(result.nodes.is_superset(&g.nodes));
    }

    #[test]
    fn application_is_deterministic_per_seed() {
        let g = single_a_host();
        let p = refine_a_to_b();
        let m = &find_matches(&g, &p)[0];
        let r1 = apply_production(&g, m, &p, 7).unwrap();
        let r2 = apply_production(&g, m, &p, 7).unwrap();
        assert_eq!(r1, r2);
        let r3 = apply_production(&g, m, &p, 8).unwrap();
        assert_ne!(r1.nodes, r3.nodes);
    }

    #[test]
    fn match_count_changes_by_replacement_contents() {
        // Applying removes one lhs occurrence and adds those of the rhs.
        let p = refine_a_to_b();
        let mut g = single_a_host();
        g.add_node(NodeId::new("n2"));
        g.add_edge(Edge { id: EdgeId::new("a2"), ty: ty_a(), attachment: vec![NodeId::new("n2")] });
        let before = find_matches(&g, &p).len();
        let m = &find_matches(&g, &p)[0];
        let result = apply_production(&g, m, &p, 0).unwrap();
        let rhs_lhs_edges = p.rhs.edges_of_type(&p.lhs).count();
        assert_eq!(find_matches(&result, &p).len(), before - 1 + rhs_lhs_edges);
    }

    #[test]
    fn interface_must_be_injective() {
        let mut rhs = Graph::new();
        rhs.add_node(NodeId::new("q"));
        let err = Production::new(
            EdgeType::abstract_("A", 2),
            rhs,
            vec![NodeId::new("q"), NodeId::new("q")],
        );
        assert_eq!(err.unwrap_err(), GraphError::InterfaceNotInjective);
    }

    #[test]
    fn apply_rejects_wrong_edge() {
        let g = single_a_host();
        let p = refine_a_to_b();
        let err = apply_production(&g, &Match { edge_id: EdgeId::new("nope") }, &p, 0);
        assert_eq!(err.unwrap_err(), GraphError::NoSuchEdge(EdgeId::new("nope")));
    }
}
