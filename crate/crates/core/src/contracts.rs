//! Asserted productions and bounded validity checking.
//!
//! The reference semantics for every check here is the brute-force oracle
//! [`all_applications_satisfy`]: apply the production at every match and
//! evaluate the post-condition on the result. Soundness and weakness of the
//! computed weakest pre-conditions are then verified exhaustively over the
//! bounded enumeration universe.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::enumerate::enumerate_graphs;
use crate::graph::{apply_production, find_matches, EdgeType, Graph, Match, NodeId, Production};
use crate::logic::{satisfies, Assignment, Formula, VarName};
use crate::wp::{weakest_precondition_with, WpConfig, WpError};

/// A production with a pre- and a post-condition, plus the bookkeeping the
/// pre-condition computation needs: the injective map from the
/// post-condition's free variables into replacement nodes and one interface
/// variable per left-hand-side position.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AssertedProduction {
    pub pre: Formula,
    pub production: Production,
    pub post: Formula,
    pub h: BTreeMap<VarName, NodeId>,
    pub interface_vars: Vec<VarName>,
}

/// Enumeration bounds for the desk-scale checks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bounds {
    pub alphabet: Vec<EdgeType>,
    pub max_nodes: usize,
    pub max_edges: usize,
}

impl Bounds {
    pub fn new(alphabet: Vec<EdgeType>, max_nodes: usize, max_edges: usize) -> Self {
        Bounds { alphabet, max_nodes, max_edges }
    }

    pub fn graphs(&self) -> impl Iterator<Item = Graph> {
        enumerate_graphs(&self.alphabet, self.max_nodes, self.max_edges)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Holds,
    Fails,
    /// The hypothesis of the check is not met at this bound (e.g. the
    /// supplied pre-condition is not valid for the production).
    NotApplicable,
}

/// Witness for a failed check: the offending host graph and, when the
/// failure is about an application, the match and the resulting graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counterexample {
    pub graph: Graph,
    pub at: Option<Match>,
    pub after: Option<Graph>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub status: Status,
    pub counterexample: Option<Counterexample>,
    pub graphs_checked: usize,
}

impl Verdict {
    fn holds(graphs_checked: usize) -> Self {
        Verdict { status: Status::Holds, counterexample: None, graphs_checked }
    }

    fn fails(cx: Counterexample, graphs_checked: usize) -> Self {
        Verdict { status: Status::Fails, counterexample: Some(cx), graphs_checked }
    }

    pub fn holds_ok(&self) -> bool {
        self.status == Status::Holds
    }
}

/// The semantic oracle: does every application of `p` in `g` yield a graph
/// satisfying the closed post-condition? Vacuously true without matches.
pub fn all_applications_satisfy(
    p: &Production,
    post: &Formula,
    g: &Graph,
) -> Result<bool, WpError> {
    Ok(first_failing_application(p, post, g)?.is_none())
}

/// Single-application variant of the oracle, for debugging.
pub fn application_satisfies(
    p: &Production,
    post: &Formula,
    g: &Graph,
    m: &Match,
) -> Result<bool, WpError> {
    let after = apply_production(g, m, p, 0).expect("match comes from find_matches");
    Ok(satisfies(&after, &Assignment::new(), post)?)
}

fn first_failing_application(
    p: &Production,
    post: &Formula,
    g: &Graph,
) -> Result<Option<(Match, Graph)>, WpError> {
    for m in find_matches(g, p) {
        let after = apply_production(g, &m, p, 0).expect("match comes from find_matches");
        if !satisfies(&after, &Assignment::new(), post)? {
            return Ok(Some((m, after)));
        }
    }
    Ok(None)
}

/// Soundness at the bound: every enumerated graph satisfying the computed
/// weakest pre-condition must pass the semantic oracle.
pub fn check_soundness(ap: &AssertedProduction, bounds: &Bounds) -> Result<Verdict, WpError> {
    check_soundness_with(ap, bounds, &WpConfig::default())
}

pub fn check_soundness_with(
    ap: &AssertedProduction,
    bounds: &Bounds,
    cfg: &WpConfig,
) -> Result<Verdict, WpError> {
    let wpre =
        weakest_precondition_with(&ap.production, &ap.post, &ap.h, &ap.interface_vars, cfg)?;
    check_soundness_of(&wpre, &ap.production, &ap.post, bounds)
}

/// Soundness of an explicitly given pre-condition; lets tests corrupt the
/// computed one and watch the oracle find the witness.
pub fn check_soundness_of(
    pre: &Formula,
    p: &Production,
    post: &Formula,
    bounds: &Bounds,
) -> Result<Verdict, WpError> {
    let empty = Assignment::new();
    let mut checked = 0;
    for g in bounds.graphs() {
        checked += 1;
        if !satisfies(&g, &empty, pre)? {
            continue;
        }
        if let Some((m, after)) = first_failing_application(p, post, &g)? {
            return Ok(Verdict::fails(
                Counterexample { graph: g, at: Some(m), after: Some(after) },
                checked,
            ));
        }
    }
    Ok(Verdict::holds(checked))
}

/// Weakness at the bound: if the asserted pre-condition is valid for the
/// production (every graph satisfying it passes the oracle), then it must
/// imply the computed weakest pre-condition on every enumerated graph.
/// Reports [`Status::NotApplicable`] when the pre-condition is not valid.
pub fn check_weakest(ap: &AssertedProduction, bounds: &Bounds) -> Result<Verdict, WpError> {
    check_weakest_with(ap, bounds, &WpConfig::default())
}

pub fn check_weakest_with(
    ap: &AssertedProduction,
    bounds: &Bounds,
    cfg: &WpConfig,
) -> Result<Verdict, WpError> {
    let validity = check_validity(ap, bounds)?;
    if validity.status != Status::Holds {
        return Ok(Verdict {
            status: Status::NotApplicable,
            counterexample: validity.counterexample,
            graphs_checked: validity.graphs_checked,
        });
    }
    let wpre =
        weakest_precondition_with(&ap.production, &ap.post, &ap.h, &ap.interface_vars, cfg)?;
    let empty = Assignment::new();
    let mut checked = 0;
    for g in bounds.graphs() {
        checked += 1;
        if satisfies(&g, &empty, &ap.pre)? && !satisfies(&g, &empty, &wpre)? {
            return Ok(Verdict::fails(
                Counterexample { graph: g, at: None, after: None },
                checked,
            ));
        }
    }
    Ok(Verdict::holds(checked))
}

/// Bounded validity of the asserted production: every enumerated graph
/// satisfying the pre-condition passes the semantic oracle for the post.
pub fn check_validity(ap: &AssertedProduction, bounds: &Bounds) -> Result<Verdict, WpError> {
    let empty = Assignment::new();
    let mut checked = 0;
    for g in bounds.graphs() {
        checked += 1;
        if !satisfies(&g, &empty, &ap.pre)? {
            continue;
        }
        if let Some((m, after)) = first_failing_application(&ap.production, &ap.post, &g)? {
            return Ok(Verdict::fails(
                Counterexample { graph: g, at: Some(m), after: Some(after) },
                checked,
            ));
        }
    }
    Ok(Verdict::holds(checked))
}
