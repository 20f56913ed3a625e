//! Bounded exhaustive enumeration of labeled graphs, the small-scope oracle
//! behind every validity and equivalence check in this crate.

use itertools::Itertools;

use crate::graph::{Edge, EdgeId, EdgeType, Graph, NodeId};
use crate::logic::{satisfies, Assignment, Formula, LogicError};

/// Yields every labeled graph with node set `{n1..nk}` for `k <= max_nodes`
/// and at most `max_edges` edges over the alphabet, each exactly once, in a
/// deterministic order. The empty graph comes first.
pub fn enumerate_graphs(
    alphabet: &[EdgeType],
    max_nodes: usize,
    max_edges: usize,
) -> impl Iterator<Item = Graph> {
    let alphabet = alphabet.to_vec();
    (0..=max_nodes).flat_map(move |k| {
        let nodes: Vec<NodeId> = (1..=k).map(|i| NodeId::new(format!("n{i}"))).collect();
        let universe = edge_universe(&alphabet, &nodes);
        let max = max_edges.min(universe.len());
        (0..=max)
            .flat_map(move |size| universe.clone().into_iter().combinations(size))
            .map(move |combo| {
                let edges = combo
                    .into_iter()
                    .enumerate()
                    .map(|(i, (ty, attachment))| Edge {
                        id: EdgeId::new(format!("e{}", i + 1)),
                        ty,
                        attachment,
                    })
                    .collect();
                Graph::from_parts(nodes.clone(), edges)
            })
    })
}

/// All possible (type, attachment) pairs over the given nodes, in a fixed
/// order: types as given, attachment tuples lexicographically.
fn edge_universe(alphabet: &[EdgeType], nodes: &[NodeId]) -> Vec<(EdgeType, Vec<NodeId>)> {
    let mut out = Vec::new();
    for ty in alphabet {
        for tuple in tuples(nodes, ty.arity) {
            out.push((ty.clone(), tuple));
        }
    }
    out
}

/// All `arity`-tuples over `domain` in lexicographic index order. The empty
/// tuple is the sole tuple of arity zero.
pub(crate) fn tuples(domain: &[NodeId], arity: usize) -> Vec<Vec<NodeId>> {
    if arity == 0 {
        return vec![Vec::new()];
    }
    (0..arity)
        .map(|_| domain.iter().cloned())
        .multi_cartesian_product()
        .collect()
}

/// Bounded equivalence: do the two closed formulae agree on every graph in
/// the enumeration universe?
pub fn equivalent(
    phi1: &Formula,
    phi2: &Formula,
    alphabet: &[EdgeType],
    max_nodes: usize,
    max_edges: usize,
) -> Result<bool, LogicError> {
    Ok(distinguishing_graph(phi1, phi2, alphabet, max_nodes, max_edges)?.is_none())
}

/// The first enumerated graph on which the two formulae disagree, if any.
pub fn distinguishing_graph(
    phi1: &Formula,
    phi2: &Formula,
    alphabet: &[EdgeType],
    max_nodes: usize,
    max_edges: usize,
) -> Result<Option<Graph>, LogicError> {
    let empty = Assignment::new();
    for g in enumerate_graphs(alphabet, max_nodes, max_edges) {
        if satisfies(&g, &empty, phi1)? != satisfies(&g, &empty, phi2)? {
            return Ok(Some(g));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::VarName;
    use std::collections::BTreeSet;

    fn ty_b() -> EdgeType {
        EdgeType::new("B", 2)
    }
    fn ty_c() -> EdgeType {
        EdgeType::new("C", 1)
    }

    #[test]
    fn single_unary_type_one_node_one_edge() {
        let graphs: Vec<_> = enumerate_graphs(&[ty_c()], 1, 1).collect();
        assert_eq!(graphs.len(), 3);
        assert_eq!(graphs[0], Graph::new());
    }

    #[test]
    fn zero_nodes_gives_only_the_empty_graph() {
        let graphs: Vec<_> = enumerate_graphs(&[ty_b(), ty_c()], 0, 5).collect();
        assert_eq!(graphs, vec![Graph::new()]);
    }

    #[test]
    fn binary_type_two_nodes_one_edge_count() {
        // 1 empty + 1 one-node + 1 self-loop + 1 two-node + 4 placements.
        let graphs: Vec<_> = enumerate_graphs(&[ty_b()], 2, 1).collect();
        assert_eq!(graphs.len(), 8);
    }

    #[test]
    fn enumeration_yields_no_duplicates() {
        let graphs: Vec<_> = enumerate_graphs(&[ty_b(), ty_c()], 2, 2).collect();
        let set: BTreeSet<String> = graphs.iter().map(|g| format!("{g:?}")).collect();
        assert_eq!(set.len(), graphs.len());
    }

    #[test]
    fn equivalence_of_truth_and_empty_conjunction() {
        assert!(equivalent(&Formula::Top, &Formula::and(vec![]), &[ty_c()], 2, 2).unwrap());
    }

    #[test]
    fn absence_literal_equals_vacuity_encoding() {
        // Both reject exactly the graphs containing a C-edge.
        let phi = Formula::NoEdge(ty_c());
        let psi = Formula::forall(ty_c(), vec![VarName::new("z")], Formula::neq("z", "z"));
        assert!(equivalent(&phi, &psi, &[ty_b(), ty_c()], 3, 3).unwrap());
    }

    #[test]
    fn witness_is_reported_for_inequivalent_formulae() {
        let w = distinguishing_graph(&Formula::NoEdge(ty_c()), &Formula::Top, &[ty_c()], 1, 1)
            .unwrap()
            .expect("one-C-edge graph distinguishes");
        assert_eq!(w.edges().len(), 1);
    }
}
