//! Structural checks on the name-based (raw) forms of models and updates.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::formula::Formula;
use crate::ids::{is_agent_name, is_atom_name, is_ident};

/// Name-based epistemic model, also the on-disk JSON shape.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelDoc {
    pub agents: Vec<String>,
    pub states: Vec<String>,
    #[serde(default)]
    pub relations: BTreeMap<String, Vec<[String; 2]>>,
    #[serde(default)]
    pub valuation: BTreeMap<String, Vec<String>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub points: Vec<String>,
}

/// Name-based update model with parsed formulas.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct RawUpdate {
    pub name: String,
    pub agents: Vec<String>,
    pub events: Vec<String>,
    pub relations: BTreeMap<String, Vec<[String; 2]>>,
    pub pre: BTreeMap<String, Formula>,
    pub post: BTreeMap<String, BTreeMap<String, Formula>>,
    pub points: Vec<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NameKind {
    Agent,
    State,
    Event,
    Atom,
    Update,
}

impl fmt::Display for NameKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            NameKind::Agent => "agent",
            NameKind::State => "state",
            NameKind::Event => "event",
            NameKind::Atom => "atom",
            NameKind::Update => "update",
        })
    }
}

/// One broken invariant. Violations are data, not errors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    EmptyDomain,
    InvalidName { kind: NameKind, name: String },
    DuplicateName { kind: NameKind, name: String },
    MissingRelation { agent: String },
    UndeclaredAgent { agent: String },
    DanglingEdge { agent: String, from: String, to: String },
    DanglingValuation { atom: String, state: String },
    MissingPrecondition { event: String },
    DanglingPrecondition { event: String },
    DanglingPostcondition { event: String },
    DanglingPoint { point: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::EmptyDomain => write!(f, "domain is empty"),
            Violation::InvalidName { kind, name } => write!(f, "invalid {kind} name {name:?}"),
            Violation::DuplicateName { kind, name } => write!(f, "duplicate {kind} {name:?}"),
            Violation::MissingRelation { agent } => {
                write!(f, "no relation entry for agent {agent:?}")
            }
            Violation::UndeclaredAgent { agent } => {
                write!(f, "relation given for undeclared agent {agent:?}")
            }
            Violation::DanglingEdge { agent, from, to } => {
                write!(f, "edge {from:?} -> {to:?} of agent {agent:?} leaves the domain")
            }
            Violation::DanglingValuation { atom, state } => {
                write!(f, "valuation of {atom:?} mentions unknown state {state:?}")
            }
            Violation::MissingPrecondition { event } => {
                write!(f, "event {event:?} has no precondition")
            }
            Violation::DanglingPrecondition { event } => {
                write!(f, "precondition given for unknown event {event:?}")
            }
            Violation::DanglingPostcondition { event } => {
                write!(f, "postcondition given for unknown event {event:?}")
            }
            Violation::DanglingPoint { point } => write!(f, "point {point:?} is not in the domain"),
        }
    }
}

fn check_frame(
    agents: &[String],
    nodes: &[String],
    node_kind: NameKind,
    relations: &BTreeMap<String, Vec<[String; 2]>>,
    out: &mut Vec<Violation>,
) -> BTreeSet<String> {
    if nodes.is_empty() {
        out.push(Violation::EmptyDomain);
    }
    let mut seen_agents = BTreeSet::new();
    for a in agents {
        if !is_agent_name(a) {
            out.push(Violation::InvalidName { kind: NameKind::Agent, name: a.clone() });
        }
        if !seen_agents.insert(a.clone()) {
            out.push(Violation::DuplicateName { kind: NameKind::Agent, name: a.clone() });
        }
    }
    let mut domain = BTreeSet::new();
    for n in nodes {
        if !is_ident(n) {
            out.push(Violation::InvalidName { kind: node_kind, name: n.clone() });
        }
        if !domain.insert(n.clone()) {
            out.push(Violation::DuplicateName { kind: node_kind, name: n.clone() });
        }
    }
    for a in &seen_agents {
        if !relations.contains_key(a) {
            out.push(Violation::MissingRelation { agent: a.clone() });
        }
    }
    for (agent, pairs) in relations {
        if !seen_agents.contains(agent) {
            out.push(Violation::UndeclaredAgent { agent: agent.clone() });
        }
        for [from, to] in pairs {
            if !domain.contains(from) || !domain.contains(to) {
                out.push(Violation::DanglingEdge {
                    agent: agent.clone(),
                    from: from.clone(),
                    to: to.clone(),
                });
            }
        }
    }
    domain
}

fn check_points(points: &[String], domain: &BTreeSet<String>, out: &mut Vec<Violation>) {
    for p in points {
        if !domain.contains(p) {
            out.push(Violation::DanglingPoint { point: p.clone() });
        }
    }
}

/// Every invariant of an epistemic model; empty iff the document is valid.
pub fn validate_epistemic(doc: &ModelDoc) -> Vec<Violation> {
    let mut out = Vec::new();
    let domain = check_frame(&doc.agents, &doc.states, NameKind::State, &doc.relations, &mut out);
    for (atom, states) in &doc.valuation {
        if !is_atom_name(atom) {
            out.push(Violation::InvalidName { kind: NameKind::Atom, name: atom.clone() });
        }
        for s in states {
            if !domain.contains(s) {
                out.push(Violation::DanglingValuation { atom: atom.clone(), state: s.clone() });
            }
        }
    }
    check_points(&doc.points, &domain, &mut out);
    out
}

/// Every invariant of an update model; empty iff it is valid.
pub fn validate_update(raw: &RawUpdate) -> Vec<Violation> {
    let mut out = Vec::new();
    if !is_ident(&raw.name) {
        out.push(Violation::InvalidName { kind: NameKind::Update, name: raw.name.clone() });
    }
    let domain = check_frame(&raw.agents, &raw.events, NameKind::Event, &raw.relations, &mut out);
    for e in &domain {
        if !raw.pre.contains_key(e) {
            out.push(Violation::MissingPrecondition { event: e.clone() });
        }
    }
    for e in raw.pre.keys() {
        if !domain.contains(e) {
            out.push(Violation::DanglingPrecondition { event: e.clone() });
        }
    }
    for (e, assignment) in &raw.post {
        if !domain.contains(e) {
            out.push(Violation::DanglingPostcondition { event: e.clone() });
        }
        for atom in assignment.keys() {
            if !is_atom_name(atom) {
                out.push(Violation::InvalidName { kind: NameKind::Atom, name: atom.clone() });
            }
        }
    }
    check_points(&raw.points, &domain, &mut out);
    out
}
