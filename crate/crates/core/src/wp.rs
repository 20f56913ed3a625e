//! Weakest pre-conditions of refinement productions.
//!
//! Given a production and a closed post-condition in negation normal form,
//! [`weakest_precondition`] computes the least restrictive condition a host
//! graph must satisfy so that every application of the production yields a
//! graph satisfying the post-condition.
//!
//! The computation is the conjunction of two predicate transformers. The
//! guarantee transformer checks that the rewrite itself can establish the
//! post-condition at all; the obligation transformer translates the
//! post-condition's remaining requirements onto the host graph. Both walk
//! the formula structurally, enumerating for every quantifier the shapes an
//! assignment can take: each bound variable goes either to a node of the
//! replacement graph or to a representative node standing for the rest of
//! the host. Equality atoms are then decided per shape by a small case
//! analysis on how the two variables are quantified and placed.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::enumerate::tuples;
use crate::graph::{EdgeType, NodeId, Production};
use crate::logic::{nnf, nnf_not, simplify, well_formed, Formula, LogicError, VarName};

/// How a variable is quantified.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Quantifier {
    Universal,
    Existential,
}

/// What the environment records per bound variable: its quantifier, the
/// type of the edge quantifying it, and the node it is assigned to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Binding {
    pub quant: Quantifier,
    pub ty: EdgeType,
    pub node: NodeId,
}

/// The three-component partial map driving the equality case analysis.
pub type Env = BTreeMap<VarName, Binding>;

/// Verdict of the equality case analysis for one assignment shape.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EqCase {
    /// The rewrite makes the equality hold whatever the host graph is.
    Always,
    /// The rewrite makes the equality fail whatever the host graph is.
    Never,
    /// The equality survives only if the host has no edge of this type.
    NoEdgeOf(EdgeType),
    /// The equality survives only if the host has no edge of either type.
    NoEdgePair(EdgeType, EdgeType),
    /// The shape does not constrain the equality; the caller supplies the
    /// residual condition.
    Otherwise,
}

/// Which assignment shapes a quantifier enumerates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ChooseMode {
    /// Every tuple over replacement nodes plus representatives; tuples
    /// touching internal nodes are kept only when the replacement has an
    /// edge of the quantifying type. The normative mode.
    #[default]
    Literal,
    /// Only attachment tuples of the replacement's own edges of the
    /// quantifying type, plus tuples avoiding internal nodes.
    Feasible,
}

/// Fault-injection switches for the mutation-sensitivity suite. Each drops
/// one ingredient of the computation; the test suite asserts that every
/// mutant is caught by the acceptance checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mutation {
    DropAlwaysCase,
    DropNeverMixedCase,
    DropNeverDistinctCase,
    DropAbsenceCase,
    DropAbsencePairCase,
    DropExistsGuarantee,
    DropChooseCondition,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct WpConfig {
    pub mode: ChooseMode,
    pub mutation: Option<Mutation>,
}

impl WpConfig {
    fn dropped(&self, m: Mutation) -> bool {
        self.mutation == Some(m)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WpError {
    #[error("`{0}` may not occur in a post-condition")]
    Fragment(&'static str),
    #[error("post-condition must be closed: free variable {0}")]
    NotClosed(VarName),
    #[error("free-variable map must be injective into the replacement nodes")]
    BadFreeVarMap,
    #[error("interface variables must biject onto the {0} left-hand-side positions")]
    BadInterfaceVars(usize),
    #[error(transparent)]
    Logic(#[from] LogicError),
}

fn is_outside(p: &Production, n: &NodeId) -> bool {
    !p.rhs.nodes.contains(n)
}

/// Decides an equality atom for one assignment shape. The case conditions
/// are tried in a fixed priority, each under both orientations of the two
/// variables; variables absent from the environment fall through to
/// [`EqCase::Otherwise`].
pub fn equality_case(p: &Production, x1: &VarName, x2: &VarName, env: &Env) -> EqCase {
    equality_case_cfg(p, x1, x2, env, &WpConfig::default())
}

fn equality_case_cfg(
    p: &Production,
    x1: &VarName,
    x2: &VarName,
    env: &Env,
    cfg: &WpConfig,
) -> EqCase {
    use Quantifier::*;
    let b1 = env.get(x1);
    let b2 = env.get(x2);
    let oriented = [(b1, b2), (b2, b1)];

    if !cfg.dropped(Mutation::DropAlwaysCase) {
        if let (Some(u), Some(w)) = (b1, b2) {
            if u.quant == Existential
                && w.quant == Existential
                && u.node == w.node
                && p.is_internal(&u.node)
            {
                return EqCase::Always;
            }
        }
    }
    if !cfg.dropped(Mutation::DropNeverMixedCase) {
        for (u, w) in oriented {
            if let (Some(u), Some(w)) = (u, w) {
                if u.quant == Universal
                    && p.is_internal(&u.node)
                    && w.quant == Existential
                    && (is_outside(p, &w.node) || p.is_interface(&w.node))
                {
                    return EqCase::Never;
                }
            }
        }
    }
    if !cfg.dropped(Mutation::DropNeverDistinctCase) {
        for (u, w) in oriented {
            if let (Some(u), Some(w)) = (u, w) {
                if u.quant == Universal
                    && p.is_internal(&u.node)
                    && p.is_internal(&w.node)
                    && u.node != w.node
                {
                    return EqCase::Never;
                }
            }
        }
    }
    if !cfg.dropped(Mutation::DropAbsenceCase) {
        for (u, w) in oriented {
            if let (Some(u), Some(w)) = (u, w) {
                if u.quant == Universal
                    && p.is_internal(&u.node)
                    && w.quant == Universal
                    && is_outside(p, &w.node)
                {
                    return EqCase::NoEdgeOf(w.ty.clone());
                }
            }
        }
    }
    if !cfg.dropped(Mutation::DropAbsencePairCase) {
        if let (Some(u), Some(w)) = (b1, b2) {
            if u.quant == Universal
                && w.quant == Universal
                && u.node == w.node
                && p.is_internal(&u.node)
            {
                return EqCase::NoEdgePair(u.ty.clone(), w.ty.clone());
            }
        }
    }
    EqCase::Otherwise
}

/// Representative nodes standing for the part of the host outside the
/// replacement: the first `n` names `v1, v2, ...` that clash neither with
/// replacement nodes nor with representatives already chosen on this branch.
pub fn representative_nodes(p: &Production, env: &Env, n: usize) -> Vec<NodeId> {
    let in_use: Vec<&NodeId> = env.values().map(|b| &b.node).collect();
    let mut out = Vec::with_capacity(n);
    let mut k = 1;
    while out.len() < n {
        let cand = NodeId::new(format!("v{k}"));
        k += 1;
        if p.rhs.nodes.contains(&cand) || in_use.contains(&&cand) || out.contains(&cand) {
            continue;
        }
        out.push(cand);
    }
    out
}

/// The assignment tuples a quantifier over `ty` ranges over: all tuples of
/// replacement nodes and representatives, except that tuples touching
/// internal nodes are excluded when the replacement has no edge of the
/// quantifying type.
pub fn quantifier_assignments(
    p: &Production,
    ty: &EdgeType,
    externals: &[NodeId],
    cfg: &WpConfig,
) -> Vec<Vec<NodeId>> {
    let arity = ty.arity;
    match cfg.mode {
        ChooseMode::Literal => {
            let mut domain: Vec<NodeId> = p.rhs.nodes.iter().cloned().collect();
            domain.extend(externals.iter().cloned());
            let mut out = tuples(&domain, arity);
            let restrict =
                !p.rhs.has_edge_of_type(ty) && !cfg.dropped(Mutation::DropChooseCondition);
            if restrict {
                out.retain(|t| t.iter().all(|n| !p.is_internal(n)));
            }
            out
        }
        ChooseMode::Feasible => {
            let mut domain: Vec<NodeId> =
                p.rhs.nodes.iter().filter(|n| !p.is_internal(n)).cloned().collect();
            domain.extend(externals.iter().cloned());
            let mut set: std::collections::BTreeSet<Vec<NodeId>> =
                tuples(&domain, arity).into_iter().collect();
            for e in p.rhs.edges_of_type(ty) {
                set.insert(e.attachment.clone());
            }
            set.into_iter().collect()
        }
    }
}

/// Maps a post-condition variable to the interface variable naming the same
/// left-hand-side position, when its assigned node lies on the interface;
/// other variables pass through unchanged.
pub fn interface_var(
    x: &VarName,
    h: &BTreeMap<VarName, NodeId>,
    p: &Production,
    iface_vars: &[VarName],
) -> VarName {
    if let Some(node) = h.get(x) {
        if let Some(pos) = p.interface.iter().position(|n| n == node) {
            return iface_vars[pos].clone();
        }
    }
    x.clone()
}

fn check_fragment(phi: &Formula) -> Result<(), WpError> {
    match phi {
        Formula::Top | Formula::Eq(_, _) | Formula::Neq(_, _) => Ok(()),
        Formula::Bot => Err(WpError::Fragment("false")),
        Formula::Not(_) => Err(WpError::Fragment("negation")),
        Formula::NoEdge(_) | Formula::NoEdge2(_, _) => Err(WpError::Fragment("no")),
        Formula::And(fs) | Formula::Or(fs) => {
            fs.iter().try_for_each(check_fragment)
        }
        Formula::Forall(_, _, body) | Formula::Exists(_, _, body) => check_fragment(body),
    }
}

fn extend(env: &Env, quant: Quantifier, ty: &EdgeType, vars: &[VarName], nodes: &[NodeId]) -> Env {
    let mut out = env.clone();
    for (v, n) in vars.iter().zip(nodes.iter()) {
        out.insert(v.clone(), Binding { quant, ty: ty.clone(), node: n.clone() });
    }
    out
}

/// The guarantee transformer: the condition under which applying the
/// production can establish `phi` for the assignment shape in `env`. `psi`
/// is the residual returned when the case analysis does not constrain an
/// equality. The result is normalized.
pub fn guarantee(
    p: &Production,
    psi: &Formula,
    env: &Env,
    phi: &Formula,
    cfg: &WpConfig,
) -> Result<Formula, WpError> {
    check_fragment(phi)?;
    Ok(simplify(&guarantee_rec(p, psi, env, phi, cfg)?))
}

fn guarantee_rec(
    p: &Production,
    psi: &Formula,
    env: &Env,
    phi: &Formula,
    cfg: &WpConfig,
) -> Result<Formula, WpError> {
    Ok(match phi {
        Formula::Top => Formula::Top,
        Formula::Eq(x1, x2) => match equality_case_cfg(p, x1, x2, env, cfg) {
            EqCase::Always => Formula::Top,
            EqCase::Never => Formula::Bot,
            EqCase::NoEdgeOf(d) => Formula::NoEdge(d),
            EqCase::NoEdgePair(d, d2) => Formula::NoEdge2(d, d2),
            EqCase::Otherwise => psi.clone(),
        },
        Formula::Neq(x1, x2) => {
            let inner = match equality_case_cfg(p, x1, x2, env, cfg) {
                EqCase::Always => Formula::Top,
                EqCase::Never => Formula::Bot,
                EqCase::NoEdgeOf(_) => Formula::Bot,
                EqCase::NoEdgePair(_, _) => Formula::Top,
                EqCase::Otherwise => nnf_not(psi),
            };
            nnf_not(&inner)
        }
        Formula::And(fs) => Formula::and(
            fs.iter().map(|f| guarantee_rec(p, psi, env, f, cfg)).collect::<Result<_, _>>()?,
        ),
        Formula::Or(fs) => Formula::or(
            fs.iter().map(|f| guarantee_rec(p, psi, env, f, cfg)).collect::<Result<_, _>>()?,
        ),
        Formula::Forall(ty, vars, body) => {
            let externals = representative_nodes(p, env, ty.arity);
            let mut conjuncts = Vec::new();
            for tuple in quantifier_assignments(p, ty, &externals, cfg) {
                let env2 = extend(env, Quantifier::Universal, ty, vars, &tuple);
                conjuncts.push(guarantee_rec(p, psi, &env2, body, cfg)?);
            }
            Formula::and(conjuncts)
        }
        Formula::Exists(ty, vars, body) => {
            let externals = representative_nodes(p, env, ty.arity);
            let mut disjuncts = Vec::new();
            for tuple in quantifier_assignments(p, ty, &externals, cfg) {
                let env2 = extend(env, Quantifier::Existential, ty, vars, &tuple);
                disjuncts.push(guarantee_rec(p, psi, &env2, body, cfg)?);
            }
            Formula::or(disjuncts)
        }
        Formula::Bot => return Err(WpError::Fragment("false")),
        Formula::Not(_) => return Err(WpError::Fragment("negation")),
        Formula::NoEdge(_) | Formula::NoEdge2(_, _) => return Err(WpError::Fragment("no")),
    })
}

/// The obligation transformer: what the host graph must satisfy before the
/// rewrite so that `phi` holds afterwards. Quantifiers are re-emitted so the
/// obligation ranges over the host's own edges. The result is normalized.
pub fn obligation(
    p: &Production,
    iface_vars: &[VarName],
    h: &BTreeMap<VarName, NodeId>,
    env: &Env,
    phi: &Formula,
    cfg: &WpConfig,
) -> Result<Formula, WpError> {
    check_fragment(phi)?;
    Ok(simplify(&obligation_rec(p, iface_vars, h, env, phi, cfg)?))
}

fn obligation_rec(
    p: &Production,
    iface_vars: &[VarName],
    h: &BTreeMap<VarName, NodeId>,
    env: &Env,
    phi: &Formula,
    cfg: &WpConfig,
) -> Result<Formula, WpError> {
    Ok(match phi {
        Formula::Top => Formula::Top,
        Formula::Eq(x1, x2) => {
            let y1 = interface_var(x1, h, p, iface_vars);
            let y2 = interface_var(x2, h, p, iface_vars);
            match equality_case_cfg(p, x1, x2, env, cfg) {
                EqCase::Always => Formula::Top,
                EqCase::Never => Formula::Bot,
                EqCase::NoEdgeOf(d) => Formula::NoEdge(d),
                EqCase::NoEdgePair(d, d2) => Formula::NoEdge2(d, d2),
                EqCase::Otherwise => Formula::Eq(y1, y2),
            }
        }
        Formula::Neq(x1, x2) => {
            let y1 = interface_var(x1, h, p, iface_vars);
            let y2 = interface_var(x2, h, p, iface_vars);
            let inner = match equality_case_cfg(p, x1, x2, env, cfg) {
                EqCase::Always => Formula::Top,
                EqCase::Never => Formula::Bot,
                EqCase::NoEdgeOf(_) => Formula::Eq(y1, y2),
                EqCase::NoEdgePair(_, _) => Formula::Top,
                EqCase::Otherwise => Formula::Eq(y1, y2),
            };
            nnf_not(&inner)
        }
        Formula::And(fs) => Formula::and(
            fs.iter()
                .map(|f| obligation_rec(p, iface_vars, h, env, f, cfg))
                .collect::<Result<_, _>>()?,
        ),
        Formula::Or(fs) => Formula::or(
            fs.iter()
                .map(|f| obligation_rec(p, iface_vars, h, env, f, cfg))
                .collect::<Result<_, _>>()?,
        ),
        Formula::Forall(ty, vars, body) => {
            let externals = representative_nodes(p, env, ty.arity);
            let mut conjuncts = Vec::new();
            for tuple in quantifier_assignments(p, ty, &externals, cfg) {
                let env2 = extend(env, Quantifier::Universal, ty, vars, &tuple);
                let inner = obligation_rec(p, iface_vars, h, &env2, body, cfg)?;
                conjuncts.push(Formula::forall(ty.clone(), vars.clone(), inner));
            }
            Formula::and(conjuncts)
        }
        Formula::Exists(ty, vars, body) => {
            let externals = representative_nodes(p, env, ty.arity);
            let mut disjuncts = Vec::new();
            for tuple in quantifier_assignments(p, ty, &externals, cfg) {
                let env2 = extend(env, Quantifier::Existential, ty, vars, &tuple);
                let inner = obligation_rec(p, iface_vars, h, &env2, body, cfg)?;
                let witnessed = Formula::exists(ty.clone(), vars.clone(), inner);
                if cfg.dropped(Mutation::DropExistsGuarantee) {
                    disjuncts.push(witnessed);
                } else {
                    let provided = guarantee_rec(p, &Formula::Bot, &env2, body, cfg)?;
                    disjuncts.push(Formula::or(vec![witnessed, provided]));
                }
            }
            Formula::or(disjuncts)
        }
        Formula::Bot => return Err(WpError::Fragment("false")),
        Formula::Not(_) => return Err(WpError::Fragment("negation")),
        Formula::NoEdge(_) | Formula::NoEdge2(_, _) => return Err(WpError::Fragment("no")),
    })
}

/// The weakest pre-condition of `p` with post-condition `phi` under the
/// free-variable map `h` and the interface variables `iface_vars` (one per
/// left-hand-side position, pairwise distinct). `phi` must be closed; it is
/// brought into negation normal form and must then lie in the transformable
/// fragment (no absence literals, no `false`).
pub fn weakest_precondition(
    p: &Production,
    phi: &Formula,
    h: &BTreeMap<VarName, NodeId>,
    iface_vars: &[VarName],
) -> Result<Formula, WpError> {
    weakest_precondition_with(p, phi, h, iface_vars, &WpConfig::default())
}

pub fn weakest_precondition_with(
    p: &Production,
    phi: &Formula,
    h: &BTreeMap<VarName, NodeId>,
    iface_vars: &[VarName],
    cfg: &WpConfig,
) -> Result<Formula, WpError> {
    if iface_vars.len() != p.lhs.arity
        || iface_vars.iter().collect::<std::collections::BTreeSet<_>>().len() != iface_vars.len()
    {
        return Err(WpError::BadInterfaceVars(p.lhs.arity));
    }
    let mut seen = std::collections::BTreeSet::new();
    for node in h.values() {
        if !p.rhs.nodes.contains(node) || !seen.insert(node.clone()) {
            return Err(WpError::BadFreeVarMap);
        }
    }
    let phin = nnf(phi).map_err(|e| match e {
        LogicError::NotClosed(v) => WpError::NotClosed(v),
        other => WpError::Logic(other),
    })?;
    well_formed(&phin)?;
    check_fragment(&phin)?;
    let env = Env::new();
    let guar = guarantee_rec(p, &Formula::Top, &env, &phin, cfg)?;
    let oblig = obligation_rec(p, iface_vars, h, &env, &phin, cfg)?;
    Ok(simplify(&Formula::and(vec![guar, oblig])))
}

/// Interface variables `z1..zm` for a production of arity `m`.
pub fn default_interface_vars(arity: usize) -> Vec<VarName> {
    (1..=arity).map(|i| VarName::new(format!("z{i}"))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{Edge, EdgeId, Graph};

    fn ty_a() -> EdgeType {
        EdgeType::abstract_("A", 1)
    }
    fn ty_b() -> EdgeType {
        EdgeType::new("B", 2)
    }
    fn ty_c() -> EdgeType {
        EdgeType::new("C", 1)
    }

    fn refine_a_to_b() -> Production {
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

    /// forall B(x,y). forall C(z). y = z
    fn running_post() -> Formula {
        Formula::forall(
            ty_b(),
            vec![VarName::new("x"), VarName::new("y")],
            Formula::forall(ty_c(), vec![VarName::new("z")], Formula::eq("y", "z")),
        )
    }

    fn bind(quant: Quantifier, ty: EdgeType, node: &str) -> Binding {
        Binding { quant, ty, node: NodeId::new(node) }
    }

    #[test]
    fn universal_internal_against_universal_outside_requires_absence() {
        let p = refine_a_to_b();
        let env: Env = [
            (VarName::new("x1"), bind(Quantifier::Universal, ty_b(), "u")),
            (VarName::new("x2"), bind(Quantifier::Universal, ty_c(), "v1")),
        ]
        .into_iter()
        .collect();
        assert_eq!(
            equality_case(&p, &VarName::new("x1"), &VarName::new("x2"), &env),
            EqCase::NoEdgeOf(ty_c())
        );
    }

    #[test]
    fn shared_existential_internal_node_is_always() {
        let p = refine_a_to_b();
        let env: Env = [
            (VarName::new("x1"), bind(Quantifier::Existential, ty_b(), "u")),
            (VarName::new("x2"), bind(Quantifier::Existential, ty_c(), "u")),
        ]
        .into_iter()
        .collect();
        assert_eq!(
            equality_case(&p, &VarName::new("x1"), &VarName::new("x2"), &env),
            EqCase::Always
        );
    }

    #[test]
    fn universal_internal_against_existential_outside_is_never() {
        let p = refine_a_to_b();
        let env: Env = [
            (VarName::new("x1"), bind(Quantifier::Universal, ty_b(), "u")),
            (VarName::new("x2"), bind(Quantifier::Existential, ty_b(), "v1")),
        ]
        .into_iter()
        .collect();
        assert_eq!(
            equality_case(&p, &VarName::new("x1"), &VarName::new("x2"), &env),
            EqCase::Never
        );
    }

    #[test]
    fn universal_internal_against_universal_interface_falls_through() {
        let p = refine_a_to_b();
        let env: Env = [
            (VarName::new("x1"), bind(Quantifier::Universal, ty_b(), "u")),
            (VarName::new("x2"), bind(Quantifier::Universal, ty_c(), "u1")),
        ]
        .into_iter()
        .collect();
        assert_eq!(
            equality_case(&p, &VarName::new("x1"), &VarName::new("x2"), &env),
            EqCase::Otherwise
        );
    }

    #[test]
    fn case_analysis_is_symmetric_up_to_tag_order() {
        let p = refine_a_to_b();
        let pairs = [
            (bind(Quantifier::Universal, ty_b(), "u"), bind(Quantifier::Universal, ty_c(), "v1")),
            (bind(Quantifier::Existential, ty_b(), "u"), bind(Quantifier::Existential, ty_c(), "u")),
            (bind(Quantifier::Universal, ty_b(), "u"), bind(Quantifier::Existential, ty_b(), "u1")),
            (bind(Quantifier::Universal, ty_b(), "u1"), bind(Quantifier::Universal, ty_c(), "v2")),
        ];
        for (b1, b2) in pairs {
            let x1 = VarName::new("x1");
            let x2 = VarName::new("x2");
            let env: Env = [(x1.clone(), b1), (x2.clone(), b2)].into_iter().collect();
            let fwd = equality_case(&p, &x1, &x2, &env);
            let bwd = equality_case(&p, &x2, &x1, &env);
            let same = match (&fwd, &bwd) {
                (EqCase::NoEdgePair(a, b), EqCase::NoEdgePair(c, d)) => {
                    (a == c && b == d) || (a == d && b == c)
                }
                (l, r) => l == r,
            };
            assert!(same, "{fwd:?} vs {bwd:?}");
        }
    }

    #[test]
    fn assignments_exclude_internal_nodes_without_matching_edges() {
        let p = refine_a_to_b();
        let externals = vec![NodeId::new("v1")];
        let got = quantifier_assignments(&p, &ty_c(), &externals, &WpConfig::default());
        assert_eq!(got, vec![vec![NodeId::new("u1")], vec![NodeId::new("v1")]]);
    }

    #[test]
    fn assignments_cover_all_tuples_when_edges_exist() {
        let p = refine_a_to_b();
        let externals = vec![NodeId::new("v1"), NodeId::new("v2")];
        let got = quantifier_assignments(&p, &ty_b(), &externals, &WpConfig::default());
        assert_eq!(got.len(), 16);
    }

    #[test]
    fn nullary_type_has_the_empty_assignment() {
        let mut rhs = Graph::new();
        rhs.add_node(NodeId::new("q"));
        let p = Production::new(ty_a(), rhs, vec![NodeId::new("q")]).unwrap();
        let got =
            quantifier_assignments(&p, &EdgeType::new("D", 0), &[], &WpConfig::default());
        assert_eq!(got, vec![Vec::<NodeId>::new()]);
    }

    #[test]
    fn interface_var_translation() {
        let p = refine_a_to_b();
        let zs = default_interface_vars(1);
        let mut h = BTreeMap::new();
        h.insert(VarName::new("x"), NodeId::new("u1"));
        h.insert(VarName::new("w"), NodeId::new("u"));
        // Bound variable: untouched.
        assert_eq!(interface_var(&VarName::new("y"), &h, &p, &zs), VarName::new("y"));
        // Free variable on the interface: renamed to its position variable.
        assert_eq!(interface_var(&VarName::new("x"), &h, &p, &zs), VarName::new("z1"));
        // Free variable on an internal node: untouched.
        assert_eq!(interface_var(&VarName::new("w"), &h, &p, &zs), VarName::new("w"));
    }

    #[test]
    fn guarantee_of_running_example_is_absence_of_c() {
        let p = refine_a_to_b();
        let out =
            guarantee(&p, &Formula::Top, &Env::new(), &running_post(), &WpConfig::default())
                .unwrap();
        assert_eq!(out, Formula::NoEdge(ty_c()));
    }

    #[test]
    fn guarantee_of_truth_is_truth() {
        let p = refine_a_to_b();
        for psi in [Formula::Top, Formula::Bot] {
            let out = guarantee(&p, &psi, &Env::new(), &Formula::Top, &WpConfig::default());
            assert_eq!(out.unwrap(), Formula::Top);
        }
    }

    #[test]
    fn obligation_of_running_example_matches_two_conjuncts() {
        let p = refine_a_to_b();
        let zs = default_interface_vars(1);
        let out = obligation(
            &p,
            &zs,
            &BTreeMap::new(),
            &Env::new(),
            &running_post(),
            &WpConfig::default(),
        )
        .unwrap();
        let xy = vec![VarName::new("x"), VarName::new("y")];
        let z = vec![VarName::new("z")];
        let expected = Formula::and(vec![
            Formula::forall(
                ty_b(),
                xy.clone(),
                Formula::forall(ty_c(), z.clone(), Formula::NoEdge(ty_c())),
            ),
            Formula::forall(ty_b(), xy, Formula::forall(ty_c(), z, Formula::eq("y", "z"))),
        ]);
        assert_eq!(out, expected);
    }

    #[test]
    fn weakest_precondition_of_running_example() {
        let p = refine_a_to_b();
        let out = weakest_precondition(
            &p,
            &running_post(),
            &BTreeMap::new(),
            &default_interface_vars(1),
        )
        .unwrap();
        let xy = vec![VarName::new("x"), VarName::new("y")];
        let z = vec![VarName::new("z")];
        let expected = Formula::and(vec![
            Formula::NoEdge(ty_c()),
            Formula::forall(
                ty_b(),
                xy.clone(),
                Formula::forall(ty_c(), z.clone(), Formula::NoEdge(ty_c())),
            ),
            Formula::forall(ty_b(), xy, Formula::forall(ty_c(), z, Formula::eq("y", "z"))),
        ]);
        assert_eq!(out, expected);
    }

    #[test]
    fn weakest_precondition_of_truth_is_truth() {
        let p = refine_a_to_b();
        let out = weakest_precondition(
            &p,
            &Formula::Top,
            &BTreeMap::new(),
            &default_interface_vars(1),
        );
        assert_eq!(out.unwrap(), Formula::Top);
    }

    #[test]
    fn weakest_precondition_is_closed_and_deterministic() {
        let p = refine_a_to_b();
        let phi = Formula::exists(
            ty_b(),
            vec![VarName::new("x"), VarName::new("y")],
            Formula::neq("x", "y"),
        );
        let zs = default_interface_vars(1);
        let a = weakest_precondition(&p, &phi, &BTreeMap::new(), &zs).unwrap();
        let b = weakest_precondition(&p, &phi, &BTreeMap::new(), &zs).unwrap();
        assert_eq!(a, b);
        assert!(a.is_closed());
    }

    #[test]
    fn open_post_conditions_are_rejected() {
        let p = refine_a_to_b();
        let err = weakest_precondition(
            &p,
            &Formula::eq("x", "y"),
            &BTreeMap::new(),
            &default_interface_vars(1),
        );
        assert_eq!(err.unwrap_err(), WpError::NotClosed(VarName::new("x")));
    }

    #[test]
    fn absence_literals_are_outside_the_fragment() {
        let p = refine_a_to_b();
        let err = weakest_precondition(
            &p,
            &Formula::NoEdge(ty_c()),
            &BTreeMap::new(),
            &default_interface_vars(1),
        );
        assert_eq!(err.unwrap_err(), WpError::Fragment("no"));
    }

    #[test]
    fn interface_vars_must_biject() {
        let p = refine_a_to_b();
        let err = weakest_precondition(&p, &Formula::Top, &BTreeMap::new(), &[]);
        assert_eq!(err.unwrap_err(), WpError::BadInterfaceVars(1));
    }
}
