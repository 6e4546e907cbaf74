//! JSON and DOT serializations. Output depends only on the inputs, never on timing or hashing.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;

use crate::dynkin::{AffineDiagram, DiagramMatch, MarkedGraph};
use crate::mckay::McKayGraph;
use crate::profile::{ComponentKind, DivisorProfile};

#[derive(Serialize)]
struct ProfileComponent<'a> {
    id: &'a str,
    kind: ComponentKind,
    multiplicity: u32,
}

#[derive(Serialize)]
struct MatchJson<'a> {
    kind: &'a str,
    mapping: &'a BTreeMap<String, String>,
}

#[derive(Serialize)]
struct ProfileJson<'a> {
    components: Vec<ProfileComponent<'a>>,
    adjacency: Vec<(&'a str, &'a str, u32)>,
    diagram_match: Option<MatchJson<'a>>,
}

fn sorted_adjacency(p: &DivisorProfile) -> Vec<(&str, &str, u32)> {
    let mut adj: Vec<(&str, &str, u32)> = p
        .adjacency
        .iter()
        .map(|(a, b, n)| (a.as_str(), b.as_str(), *n))
        .collect();
    adj.sort();
    adj
}

pub fn profile_json(p: &DivisorProfile, m: Option<&DiagramMatch>) -> String {
    let doc = ProfileJson {
        components: p
            .components
            .iter()
            .map(|c| ProfileComponent {
                id: &c.id,
                kind: c.kind,
                multiplicity: c.multiplicity,
            })
            .collect(),
        adjacency: sorted_adjacency(p),
        diagram_match: m.map(|m| MatchJson {
            kind: &m.kind,
            mapping: &m.mapping,
        }),
    };
    serde_json::to_string_pretty(&doc).expect("profile serializes") + "\n"
}

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

fn edge_line(out: &mut String, a: &str, b: &str, n: u32) {
    let _ = if n == 1 {
        writeln!(out, "  {} -- {};", quote(a), quote(b))
    } else {
        writeln!(out, "  {} -- {} [label=\"{n}\"];", quote(a), quote(b))
    };
}

/// DOT for a divisor: one node per component labelled "id:multiplicity"; the open components,
/// which make up ⊕, are drawn as double circles.
pub fn profile_dot(p: &DivisorProfile, name: &str) -> String {
    let mut out = format!("graph {} {{\n  node [shape=circle];\n", quote(name));
    for c in &p.components {
        let shape = match c.kind {
            ComponentKind::Exceptional => "circle",
            ComponentKind::Open => "doublecircle",
        };
        let _ = writeln!(
            out,
            "  {} [label=\"{}:{}\", shape={shape}];",
            quote(&c.id),
            c.id,
            c.multiplicity
        );
    }
    for (a, b, n) in sorted_adjacency(p) {
        edge_line(&mut out, a, b, n);
    }
    out.push_str("}\n");
    out
}

fn graph_dot(g: &MarkedGraph, name: &str) -> String {
    let mut out = format!("graph {} {{\n  node [shape=circle];\n", quote(name));
    for (i, (n, m)) in g.names.iter().zip(&g.marks).enumerate() {
        let shape = if g.special == Some(i) { "doublecircle" } else { "circle" };
        let _ = writeln!(out, "  {} [label=\"{n}:{m}\", shape={shape}];", quote(n));
    }
    let mut edges = g.edges.clone();
    edges.sort();
    for (i, j, k) in edges {
        edge_line(&mut out, &g.names[i], &g.names[j], k);
    }
    out.push_str("}\n");
    out
}

#[derive(Serialize)]
struct GraphJson<'a> {
    kind: String,
    nodes: Vec<NodeJson<'a>>,
    edges: Vec<(&'a str, &'a str, u32)>,
}

#[derive(Serialize)]
struct NodeJson<'a> {
    id: &'a str,
    mark: u32,
    affine: bool,
}

fn graph_json(g: &MarkedGraph, kind: String) -> String {
    let mut edges: Vec<(&str, &str, u32)> = g
        .edges
        .iter()
        .map(|&(i, j, k)| (g.names[i].as_str(), g.names[j].as_str(), k))
        .collect();
    edges.sort();
    let doc = GraphJson {
        kind,
        nodes: g
            .names
            .iter()
            .zip(&g.marks)
            .enumerate()
            .map(|(i, (id, &mark))| NodeJson {
                id,
                mark,
                affine: g.special == Some(i),
            })
            .collect(),
        edges,
    };
    serde_json::to_string_pretty(&doc).expect("graph serializes") + "\n"
}

/// Affine diagram with marks as labels and the affine node ⊕ as a double circle.
pub fn diagram_dot(d: &AffineDiagram) -> String {
    graph_dot(&d.graph, &format!("affine {}", d.kind))
}

pub fn diagram_json(d: &AffineDiagram) -> String {
    graph_json(&d.graph, d.kind.to_string())
}

/// McKay graph labelled by the dimensions of the irreducible characters; the trivial character
/// is the double circle.
pub fn mckay_dot(g: &McKayGraph, kind: &str) -> String {
    graph_dot(&g.marked_graph(), &format!("McKay {kind}"))
}

pub fn mckay_json(g: &McKayGraph, kind: &str) -> String {
    graph_json(&g.marked_graph(), kind.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynkin::affine_diagram;
    use crate::groups::GroupKind;

    #[test]
    fn diagram_dot_shape() {
        let d = affine_diagram(GroupKind::E8).unwrap();
        let dot = diagram_dot(&d);
        assert!(dot.starts_with("graph \"affine E8\" {"));
        assert_eq!(dot.matches("doublecircle").count(), 1);
        assert_eq!(dot.matches(" -- ").count(), 8);
        assert_eq!(dot, diagram_dot(&d));
    }

    #[test]
    fn profile_schema() {
        let mut p = DivisorProfile::new();
        p.add("l1", ComponentKind::Exceptional, 2);
        p.add("rho", ComponentKind::Open, 1);
        p.connect("rho", "l1", 1);
        let v: serde_json::Value = serde_json::from_str(&profile_json(&p, None)).unwrap();
        assert_eq!(v["components"][0]["kind"], "exceptional");
        assert_eq!(v["components"][1]["kind"], "open");
        assert_eq!(v["adjacency"][0], serde_json::json!(["l1", "rho", 1]));
        assert!(v["diagram_match"].is_null());
        assert!(profile_dot(&p, "x").contains("\"rho\" [label=\"rho:1\", shape=doublecircle]"));
    }
}
