//! Style conformance and recovery planning.
//!
//! An architectural style is a set of asserted productions together with a
//! closed invariant. When a graph drifts out of the style, the planner
//! searches breadth-first for a sequence of production applications leading
//! back to a conformant graph. A production is applicable only where its
//! computed weakest pre-condition holds, so every step of a returned plan
//! is certified to preserve its own post-condition.

use serde::{Deserialize, Serialize};

use crate::contracts::AssertedProduction;
use crate::graph::{apply_production, find_matches, EdgeKind, EdgeType, Graph, Match};
use crate::logic::{satisfies, Assignment, Formula};
use crate::wp::{weakest_precondition_with, WpConfig, WpError};

/// An architectural style: an alphabet, refinement productions with their
/// contracts, and a closed invariant every conformant graph must satisfy.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Style {
    pub alphabet: Vec<EdgeType>,
    pub productions: Vec<AssertedProduction>,
    pub invariant: Formula,
}

/// A recovery plan: production indices with the matches they were applied
/// at, and the resulting graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Plan {
    pub steps: Vec<(usize, Match)>,
    pub final_graph: Graph,
}

/// Does the graph satisfy the style invariant?
pub fn check_style(g: &Graph, style: &Style) -> Result<bool, WpError> {
    Ok(satisfies(g, &Assignment::new(), &style.invariant)?)
}

/// All production applications licensed right now: pairs of a production
/// index and a match such that the production's weakest pre-condition holds
/// in `g`. Only abstract-kind edges are rewrite targets. Deterministic
/// order: production index, then edge id.
pub fn applicable_productions(
    g: &Graph,
    style: &Style,
    cfg: &WpConfig,
) -> Result<Vec<(usize, Match)>, WpError> {
    let empty = Assignment::new();
    let mut out = Vec::new();
    for (i, ap) in style.productions.iter().enumerate() {
        if ap.production.lhs.kind != EdgeKind::Abstract {
            continue;
        }
        let matches = find_matches(g, &ap.production);
        if matches.is_empty() {
            continue;
        }
        let wpre =
            weakest_precondition_with(&ap.production, &ap.post, &ap.h, &ap.interface_vars, cfg)?;
        if !satisfies(g, &empty, &wpre)? {
            continue;
        }
        for m in matches {
            out.push((i, m));
        }
    }
    Ok(out)
}

/// Breadth-first search for the shortest plan whose final graph satisfies
/// the invariant, ties broken by lexicographic step order. Fresh names in
/// applied productions are drawn deterministically from `seed`.
pub fn recover(
    g: &Graph,
    style: &Style,
    max_depth: usize,
    seed: u64,
    cfg: &WpConfig,
) -> Result<Option<Plan>, WpError> {
    if check_style(g, style)? {
        return Ok(Some(Plan { steps: Vec::new(), final_graph: g.clone() }));
    }
    let mut frontier = vec![(g.clone(), Vec::new())];
    let mut visited = vec![g.clone()];
    for _ in 0..max_depth {
        let mut next = Vec::new();
        for (current, steps) in frontier {
            for (i, m) in applicable_productions(&current, style, cfg)? {
                let after = apply_production(&current, &m, &style.productions[i].production, seed)
                    .expect("match comes from find_matches");
                let mut steps = steps.clone();
                steps.push((i, m));
                if check_style(&after, style)? {
                    return Ok(Some(Plan { steps, final_graph: after }));
                }
                if !visited.contains(&after) {
                    visited.push(after.clone());
                    next.push((after, steps));
                }
            }
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
    }
    Ok(None)
}
