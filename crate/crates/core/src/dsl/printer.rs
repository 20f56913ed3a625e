//! Canonical text rendering: one declaration per line, sections in document
//! order, formulae fully parenthesized except around quantifier chains.

use std::fmt::Write;

use super::Document;
use crate::graph::{EdgeKind, Graph, Production};
use crate::logic::Formula;

pub fn serialize(doc: &Document) -> String {
    let mut out = String::new();
    let mut sections: Vec<String> = Vec::new();

    if !doc.types.is_empty() {
        let mut s = String::new();
        for t in &doc.types {
            let kind = match t.kind {
                EdgeKind::Abstract => " abstract",
                EdgeKind::Concrete => "",
            };
            let _ = writeln!(s, "type {}/{}{kind};", t.name, t.arity);
        }
        sections.push(s);
    }
    for g in &doc.graphs {
        let mut s = String::new();
        let _ = writeln!(s, "graph {} {{", g.name);
        write_graph_body(&mut s, &g.graph, "  ");
        let _ = writeln!(s, "}}");
        sections.push(s);
    }
    for p in &doc.productions {
        sections.push(production_text(&p.name, &p.production));
    }
    for f in &doc.formulas {
        sections.push(format!("formula {} = {};\n", f.name, formula_text(&f.formula)));
    }
    for a in &doc.asserted {
        let mut s = String::new();
        let _ = writeln!(s, "asserted {} {{", a.name);
        let _ = writeln!(s, "  pre = {};", formula_text(&a.pre));
        let _ = writeln!(s, "  production {};", a.production);
        let _ = writeln!(s, "  post = {};", formula_text(&a.post));
        let _ = writeln!(s, "}}");
        sections.push(s);
    }
    for st in &doc.styles {
        let mut s = String::new();
        let _ = writeln!(s, "style {} {{", st.name);
        let _ = writeln!(s, "  invariant = {};", formula_text(&st.invariant));
        for ap in &st.asserted {
            let _ = writeln!(s, "  asserted {ap};");
        }
        let _ = writeln!(s, "}}");
        sections.push(s);
    }

    for (i, s) in sections.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        out.push_str(s);
    }
    out
}

fn production_text(name: &str, p: &Production) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "production {name} {{");
    let _ = writeln!(s, "  lhs {};", p.lhs.name);
    let iface: Vec<&str> = p.interface.iter().map(|n| n.0.as_str()).collect();
    if iface.is_empty() {
        let _ = writeln!(s, "  interface;");
    } else {
        let _ = writeln!(s, "  interface {};", iface.join(", "));
    }
    let _ = writeln!(s, "  rhs {{");
    write_graph_body(&mut s, &p.rhs, "    ");
    let _ = writeln!(s, "  }}");
    let _ = writeln!(s, "}}");
    s
}

pub fn graph_text(name: &str, g: &Graph) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "graph {name} {{");
    write_graph_body(&mut s, g, "  ");
    let _ = writeln!(s, "}}");
    s
}

fn write_graph_body(out: &mut String, g: &Graph, indent: &str) {
    for n in &g.nodes {
        let _ = writeln!(out, "{indent}node {n};");
    }
    for e in g.edges() {
        let args: Vec<&str> = e.attachment.iter().map(|n| n.0.as_str()).collect();
        let _ = writeln!(out, "{indent}edge {}: {}({});", e.id, e.ty.name, args.join(", "));
    }
}

/// Concrete syntax of a formula. Non-atomic children of `&` and `|` are
/// parenthesized; quantifier bodies are parenthesized unless they are atoms
/// or further quantifiers, so chains like `forall B(x,y). forall C(z). y = z`
/// stay flat.
pub fn formula_text(phi: &Formula) -> String {
    render(phi)
}

fn render(phi: &Formula) -> String {
    match phi {
        Formula::Top => "true".into(),
        Formula::Bot => "false".into(),
        Formula::NoEdge(t) => format!("no {}", t.name),
        Formula::NoEdge2(t1, t2) => format!("no {},{}", t1.name, t2.name),
        Formula::Eq(a, b) => format!("{a} = {b}"),
        Formula::Neq(a, b) => format!("{a} != {b}"),
        Formula::Not(f) => format!("!({})", render(f)),
        Formula::And(fs) => fs.iter().map(child).collect::<Vec<_>>().join(" & "),
        Formula::Or(fs) => fs.iter().map(child).collect::<Vec<_>>().join(" | "),
        Formula::Forall(ty, vars, body) => quantifier("forall", ty.name.as_str(), vars, body),
        Formula::Exists(ty, vars, body) => quantifier("exists", ty.name.as_str(), vars, body),
    }
}

fn quantifier(
    kw: &str,
    ty: &str,
    vars: &[crate::logic::VarName],
    body: &Formula,
) -> String {
    let vs: Vec<&str> = vars.iter().map(|v| v.0.as_str()).collect();
    let body_text = match body {
        Formula::And(_) | Formula::Or(_) => format!("({})", render(body)),
        _ => render(body),
    };
    format!("{kw} {ty}({}). {body_text}", vs.join(","))
}

fn child(f: &Formula) -> String {
    match f {
        Formula::Top
        | Formula::Bot
        | Formula::NoEdge(_)
        | Formula::NoEdge2(_, _)
        | Formula::Eq(_, _)
        | Formula::Neq(_, _) => render(f),
        _ => format!("({})", render(f)),
    }
}
