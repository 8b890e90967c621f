use std::fmt::Write;

use crate::models::{EpistemicModel, UpdateModel};
use crate::transforms::relevant_atoms;

fn quote(s: &str) -> String {
    // names and formulas never contain backslashes; labels use `\n` on purpose
    format!("\"{}\"", s.replace('"', "\\\""))
}

/// Graphviz source for a model. Nodes carry their true relevant atoms,
/// points are drawn double-circled, and each agent edge is its own arrow.
pub fn model_dot(name: &str, m: &EpistemicModel, points: &[usize]) -> String {
    let relevant = relevant_atoms(&[m]);
    let mut out = format!("digraph {} {{\n  node [shape=circle];\n", quote(name));
    for s in 0..m.len() {
        let atoms: Vec<&str> = relevant.iter().map(|p| p.as_str()).filter(|p| m.holds(p, s)).collect();
        let mut label = m.state_name(s).to_string();
        if !atoms.is_empty() {
            label = format!("{label}\\n{}", atoms.join(","));
        }
        let shape = if points.contains(&s) { ", shape=doublecircle" } else { "" };
        let _ = writeln!(out, "  {} [label={}{shape}];", quote(m.state_name(s)), quote(&label));
    }
    edges(&mut out, m.frame(), |s| m.state_name(s));
    out.push_str("}\n");
    out
}

/// Graphviz source for an update model; nodes show precondition and
/// postcondition.
pub fn update_dot(u: &UpdateModel, points: &[usize]) -> String {
    let mut out = format!("digraph {} {{\n  node [shape=box];\n", quote(u.name()));
    for e in 0..u.len() {
        let mut label = format!("{}\\npre: {}", u.event_name(e), u.pre(e));
        for (p, v) in u.post(e) {
            let _ = write!(label, "\\n{p} := {v}");
        }
        let style = if points.contains(&e) { ", peripheries=2" } else { "" };
        let _ = writeln!(out, "  {} [label={}{style}];", quote(u.event_name(e)), quote(&label));
    }
    edges(&mut out, u.frame(), |e| u.event_name(e));
    out.push_str("}\n");
    out
}

fn edges<'a>(out: &mut String, frame: &crate::models::Frame, name: impl Fn(usize) -> &'a str) {
    for (ai, a) in frame.agents().iter().enumerate() {
        for (s, t) in frame.edges(ai) {
            let _ = writeln!(out, "  {} -> {} [label={}];", quote(name(s)), quote(name(t)), quote(a.as_str()));
        }
    }
}
