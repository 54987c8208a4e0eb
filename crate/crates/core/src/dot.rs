//! DOT output for quivers, AR quivers and Q̂.

use crate::ar::IndecTable;
use crate::hq::QHat;
use crate::quiver::Quiver;
use std::fmt::Write;

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// The quiver as a DOT digraph.
pub fn quiver_dot(q: &Quiver, name: &str) -> String {
    let mut s = format!("digraph {} {{\n  rankdir=LR;\n", quote(name));
    for v in 0..q.num_vertices() {
        let _ = writeln!(s, "  {};", quote(q.label(v)));
    }
    for &(a, b) in q.arrows() {
        let _ = writeln!(s, "  {} -> {};", quote(q.label(a)), quote(q.label(b)));
    }
    s.push_str("}\n");
    s
}

/// The AR quiver: irreducible maps as solid arrows, τ as dashed arrows.
pub fn ar_quiver_dot(t: &IndecTable) -> String {
    let mut s = String::from("digraph \"AR quiver\" {\n  rankdir=LR;\n");
    for x in t.indecs() {
        let dim: Vec<String> = x.dim.iter().map(|d| d.to_string()).collect();
        let _ = writeln!(s, "  {} [label={}];", quote(&x.label), quote(&format!("{}\\n({})", x.label, dim.join(","))));
    }
    for &(a, b) in t.ar_arrows() {
        let _ = writeln!(s, "  {} -> {};", quote(&t.indec(a).label), quote(&t.indec(b).label));
    }
    for x in t.indecs() {
        if let Some(y) = x.tau {
            let _ = writeln!(s, "  {} -> {} [style=dashed, constraint=false, label=\"τ\"];", quote(&x.label), quote(&t.indec(y).label));
        }
    }
    s.push_str("}\n");
    s
}

/// Q̂ with its relations listed as comments and graph label.
pub fn qhat_dot(qh: &QHat) -> String {
    let q = qh.quiver();
    let mut s = String::from("digraph \"Qhat\" {\n  rankdir=LR;\n");
    for rel in qh.relations() {
        let paths: Vec<String> = rel
            .paths
            .iter()
            .map(|p| p.iter().map(|&a| format!("{}->{}", q.label(q.arrow(a).0), q.label(q.arrow(a).1))).collect::<Vec<_>>().join(" "))
            .collect();
        let _ = writeln!(s, "  // relation {} -> {} ({}, {}): {}", q.label(rel.from), q.label(rel.to), rel.kind, rel.count, paths.join(" | "));
    }
    for v in 0..q.num_vertices() {
        let _ = writeln!(s, "  {};", quote(q.label(v)));
    }
    for &(a, b) in q.arrows() {
        let _ = writeln!(s, "  {} -> {};", quote(q.label(a)), quote(q.label(b)));
    }
    s.push_str("}\n");
    s
}
