//! Finite epistemic models, update models and the named update constructors.

mod frame;
mod validate;

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use thiserror::Error;

use crate::formula::Formula;
use crate::ids::{Agent, Atom};

pub use frame::Frame;
pub use validate::{validate_epistemic, validate_update, ModelDoc, NameKind, RawUpdate, Violation};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("invalid model: {}", join_violations(.0))]
    Invalid(Vec<Violation>),
    #[error("unknown state {0:?}")]
    UnknownState(String),
    #[error("unknown event {0:?}")]
    UnknownEvent(String),
    #[error("an update needs at least one point")]
    NoPoints,
}

fn join_violations(v: &[Violation]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")
}

/// `M = (S, R, V)`. States are indexed `0..len()`; names are kept for I/O.
///
/// Atoms missing from the valuation are false everywhere.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EpistemicModel {
    frame: Frame,
    states: Vec<String>,
    valuation: BTreeMap<Atom, BTreeSet<usize>>,
}

impl EpistemicModel {
    pub fn builder<A: Into<Agent>>(agents: impl IntoIterator<Item = A>) -> ModelBuilder {
        ModelBuilder::new(agents)
    }

    /// Validates the document and builds the model. `doc.points` is ignored
    /// here; see [`EpistemicModel::from_doc_pointed`].
    pub fn from_doc(doc: &ModelDoc) -> Result<Self, ModelError> {
        let violations = validate_epistemic(doc);
        if !violations.is_empty() {
            return Err(ModelError::Invalid(violations));
        }
        let index: BTreeMap<&str, usize> =
            doc.states.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect();
        let mut frame = Frame::empty(doc.agents.iter().map(Agent::new), doc.states.len());
        for (agent, pairs) in &doc.relations {
            let ai = frame.agent_index(agent).expect("validated");
            for [from, to] in pairs {
                frame.add_edge(ai, index[from.as_str()], index[to.as_str()]);
            }
        }
        let valuation = doc
            .valuation
            .iter()
            .map(|(atom, states)| {
                (Atom::new(atom), states.iter().map(|s| index[s.as_str()]).collect())
            })
            .collect();
        Ok(EpistemicModel { frame, states: doc.states.clone(), valuation })
    }

    /// The model plus the indices of its declared points.
    pub fn from_doc_pointed(doc: &ModelDoc) -> Result<(Self, Vec<usize>), ModelError> {
        let model = Self::from_doc(doc)?;
        let points = doc
            .points
            .iter()
            .map(|p| model.state_index(p).ok_or_else(|| ModelError::UnknownState(p.clone())))
            .collect::<Result<_, _>>()?;
        Ok((model, points))
    }

    pub fn to_doc(&self, points: &[usize]) -> ModelDoc {
        let relations = self
            .agents()
            .iter()
            .enumerate()
            .map(|(ai, a)| {
                let pairs = self
                    .frame
                    .edges(ai)
                    .map(|(s, t)| [self.states[s].clone(), self.states[t].clone()])
                    .collect();
                (a.to_string(), pairs)
            })
            .collect();
        let valuation = self
            .valuation
            .iter()
            .map(|(p, set)| (p.to_string(), set.iter().map(|&s| self.states[s].clone()).collect()))
            .collect();
        ModelDoc {
            agents: self.agents().iter().map(ToString::to_string).collect(),
            states: self.states.clone(),
            relations,
            valuation,
            points: points.iter().map(|&s| self.states[s].clone()).collect(),
        }
    }

    /// Assembles an already-consistent model. Callers guarantee that the
    /// frame size matches `states` and valuation indices are in range.
    pub(crate) fn from_parts(
        frame: Frame,
        states: Vec<String>,
        valuation: BTreeMap<Atom, BTreeSet<usize>>,
    ) -> Self {
        debug_assert_eq!(frame.size(), states.len());
        EpistemicModel { frame, states, valuation }
    }

    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    pub fn agents(&self) -> &[Agent] {
        self.frame.agents()
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn state_name(&self, s: usize) -> &str {
        &self.states[s]
    }

    pub fn state_index(&self, name: &str) -> Option<usize> {
        self.states.iter().position(|s| s == name)
    }

    pub fn valuation(&self) -> &BTreeMap<Atom, BTreeSet<usize>> {
        &self.valuation
    }

    pub fn holds(&self, atom: &str, state: usize) -> bool {
        self.valuation.get(atom).is_some_and(|set| set.contains(&state))
    }

    pub fn mapped_atoms(&self) -> BTreeSet<Atom> {
        self.valuation.keys().cloned().collect()
    }

    /// Same frame, valuation mapping restricted to `atoms`.
    pub fn restrict_valuation(&self, atoms: &BTreeSet<Atom>) -> Self {
        let valuation = self
            .valuation
            .iter()
            .filter(|(p, _)| atoms.contains(*p))
            .map(|(p, set)| (p.clone(), set.clone()))
            .collect();
        EpistemicModel { frame: self.frame.clone(), states: self.states.clone(), valuation }
    }

    pub fn pointed(self, state: &str) -> Result<PointedModel, ModelError> {
        PointedModel::at(self, state)
    }
}

/// Incremental construction of an [`EpistemicModel`] by name.
#[derive(Clone, Debug)]
pub struct ModelBuilder {
    doc: ModelDoc,
}

impl ModelBuilder {
    pub fn new<A: Into<Agent>>(agents: impl IntoIterator<Item = A>) -> Self {
        let agents: Vec<String> = agents.into_iter().map(|a| a.into().to_string()).collect();
        let relations = agents.iter().map(|a| (a.clone(), Vec::new())).collect();
        ModelBuilder { doc: ModelDoc { agents, relations, ..ModelDoc::default() } }
    }

    pub fn state(mut self, name: &str) -> Self {
        self.doc.states.push(name.to_string());
        self
    }

    pub fn states<'a>(mut self, names: impl IntoIterator<Item = &'a str>) -> Self {
        self.doc.states.extend(names.into_iter().map(str::to_string));
        self
    }

    pub fn edge(mut self, agent: &str, from: &str, to: &str) -> Self {
        self.doc
            .relations
            .entry(agent.to_string())
            .or_default()
            .push([from.to_string(), to.to_string()]);
        self
    }

    /// All pairs over the states declared so far.
    pub fn universal(mut self, agent: &str) -> Self {
        let states = self.doc.states.clone();
        let pairs = self.doc.relations.entry(agent.to_string()).or_default();
        for s in &states {
            for t in &states {
                pairs.push([s.clone(), t.clone()]);
            }
        }
        self
    }

    /// Loops on the states declared so far.
    pub fn reflexive(mut self, agent: &str) -> Self {
        let states = self.doc.states.clone();
        let pairs = self.doc.relations.entry(agent.to_string()).or_default();
        for s in states {
            pairs.push([s.clone(), s]);
        }
        self
    }

    pub fn truth<'a>(mut self, atom: &str, states: impl IntoIterator<Item = &'a str>) -> Self {
        self.doc
            .valuation
            .entry(atom.to_string())
            .or_default()
            .extend(states.into_iter().map(str::to_string));
        self
    }

    pub fn doc(&self) -> &ModelDoc {
        &self.doc
    }

    pub fn build(self) -> Result<EpistemicModel, ModelError> {
        EpistemicModel::from_doc(&self.doc)
    }
}

/// An epistemic state `(M, s)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointedModel {
    pub model: EpistemicModel,
    pub point: usize,
}

impl PointedModel {
    pub fn new(model: EpistemicModel, point: usize) -> Self {
        assert!(point < model.len(), "point out of range");
        PointedModel { model, point }
    }

    pub fn at(model: EpistemicModel, state: &str) -> Result<Self, ModelError> {
        let point =
            model.state_index(state).ok_or_else(|| ModelError::UnknownState(state.to_string()))?;
        Ok(PointedModel { model, point })
    }

    pub fn point_name(&self) -> &str {
        self.model.state_name(self.point)
    }
}

/// `U = (E, R, pre, post)`. Events are indexed `0..len()`.
///
/// `post[e]` lists only the atoms in the domain of the postcondition; every
/// other atom keeps its value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UpdateModel {
    name: String,
    frame: Frame,
    events: Vec<String>,
    pre: Vec<Formula>,
    post: Vec<BTreeMap<Atom, Formula>>,
}

impl UpdateModel {
    pub fn builder<A: Into<Agent>>(
        name: &str,
        agents: impl IntoIterator<Item = A>,
    ) -> UpdateBuilder {
        UpdateBuilder::new(name, agents)
    }

    pub fn from_raw(raw: &RawUpdate) -> Result<(Self, Vec<usize>), ModelError> {
        let violations = validate_update(raw);
        if !violations.is_empty() {
            return Err(ModelError::Invalid(violations));
        }
        let index: BTreeMap<&str, usize> =
            raw.events.iter().enumerate().map(|(i, e)| (e.as_str(), i)).collect();
        let mut frame = Frame::empty(raw.agents.iter().map(Agent::new), raw.events.len());
        for (agent, pairs) in &raw.relations {
            let ai = frame.agent_index(agent).expect("validated");
            for [from, to] in pairs {
                frame.add_edge(ai, index[from.as_str()], index[to.as_str()]);
            }
        }
        let pre = raw.events.iter().map(|e| raw.pre[e].clone()).collect();
        let post = raw
            .events
            .iter()
            .map(|e| {
                raw.post
                    .get(e)
                    .map(|m| m.iter().map(|(p, f)| (Atom::new(p), f.clone())).collect())
                    .unwrap_or_default()
            })
            .collect();
        let points = raw.points.iter().map(|p| index[p.as_str()]).collect();
        let model = UpdateModel { name: raw.name.clone(), frame, events: raw.events.clone(), pre, post };
        Ok((model, points))
    }

    pub fn to_raw(&self, points: &[usize]) -> RawUpdate {
        let relations = self
            .agents()
            .iter()
            .enumerate()
            .map(|(ai, a)| {
                let pairs = self
                    .frame
                    .edges(ai)
                    .map(|(e, f)| [self.events[e].clone(), self.events[f].clone()])
                    .collect();
                (a.to_string(), pairs)
            })
            .collect();
        RawUpdate {
            name: self.name.clone(),
            agents: self.agents().iter().map(ToString::to_string).collect(),
            events: self.events.clone(),
            relations,
            pre: self.events.iter().cloned().zip(self.pre.iter().cloned()).collect(),
            post: self
                .events
                .iter()
                .zip(&self.post)
                .filter(|(_, m)| !m.is_empty())
                .map(|(e, m)| (e.clone(), m.iter().map(|(p, f)| (p.to_string(), f.clone())).collect()))
                .collect(),
            points: points.iter().map(|&e| self.events[e].clone()).collect(),
        }
    }

    pub(crate) fn from_parts(
        name: String,
        frame: Frame,
        events: Vec<String>,
        pre: Vec<Formula>,
        post: Vec<BTreeMap<Atom, Formula>>,
    ) -> Self {
        debug_assert_eq!(frame.size(), events.len());
        debug_assert_eq!(pre.len(), events.len());
        debug_assert_eq!(post.len(), events.len());
        UpdateModel { name, frame, events, pre, post }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    pub fn agents(&self) -> &[Agent] {
        self.frame.agents()
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    pub fn events(&self) -> &[String] {
        &self.events
    }

    pub fn event_name(&self, e: usize) -> &str {
        &self.events[e]
    }

    pub fn event_index(&self, name: &str) -> Option<usize> {
        self.events.iter().position(|e| e == name)
    }

    pub fn pre(&self, e: usize) -> &Formula {
        &self.pre[e]
    }

    pub fn post(&self, e: usize) -> &BTreeMap<Atom, Formula> {
        &self.post[e]
    }

    /// `post(e)(p)`, which is `p` itself outside the postcondition domain.
    pub fn post_value(&self, e: usize, atom: &Atom) -> Formula {
        self.post[e].get(atom).cloned().unwrap_or_else(|| Formula::Atom(atom.clone()))
    }

    /// Union of all postcondition domains.
    pub fn assigned_atoms(&self) -> BTreeSet<Atom> {
        self.post.iter().flat_map(|m| m.keys().cloned()).collect()
    }

    /// The update model with one distinguished event.
    pub fn at(self: &Arc<Self>, event: &str) -> Result<PointedUpdate, ModelError> {
        PointedUpdate::at(self.clone(), &[event])
    }

    /// The update model pointed at every event.
    pub fn at_all(self: &Arc<Self>) -> PointedUpdate {
        PointedUpdate { model: self.clone(), points: (0..self.len()).collect() }
    }
}

/// Incremental construction of an [`UpdateModel`] by name.
#[derive(Clone, Debug)]
pub struct UpdateBuilder {
    raw: RawUpdate,
}

impl UpdateBuilder {
    pub fn new<A: Into<Agent>>(name: &str, agents: impl IntoIterator<Item = A>) -> Self {
        let agents: Vec<String> = agents.into_iter().map(|a| a.into().to_string()).collect();
        let relations = agents.iter().map(|a| (a.clone(), Vec::new())).collect();
        UpdateBuilder { raw: RawUpdate { name: name.to_string(), agents, relations, ..RawUpdate::default() } }
    }

    pub fn event(mut self, name: &str, pre: Formula) -> Self {
        self.raw.events.push(name.to_string());
        self.raw.pre.insert(name.to_string(), pre);
        self
    }

    pub fn assign(mut self, event: &str, atom: &str, value: Formula) -> Self {
        self.raw.post.entry(event.to_string()).or_default().insert(atom.to_string(), value);
        self
    }

    pub fn edge(mut self, agent: &str, from: &str, to: &str) -> Self {
        self.raw
            .relations
            .entry(agent.to_string())
            .or_default()
            .push([from.to_string(), to.to_string()]);
        self
    }

    /// All pairs over the events declared so far.
    pub fn universal(mut self, agent: &str) -> Self {
        let events = self.raw.events.clone();
        let pairs = self.raw.relations.entry(agent.to_string()).or_default();
        for e in &events {
            for f in &events {
                pairs.push([e.clone(), f.clone()]);
            }
        }
        self
    }

    /// Loops on the events declared so far.
    pub fn reflexive(mut self, agent: &str) -> Self {
        let events = self.raw.events.clone();
        let pairs = self.raw.relations.entry(agent.to_string()).or_default();
        for e in events {
            pairs.push([e.clone(), e]);
        }
        self
    }

    pub fn build(self) -> Result<UpdateModel, ModelError> {
        UpdateModel::from_raw(&self.raw).map(|(u, _)| u)
    }
}

/// `(U, e)` for a single point, `(U, E')` for a multi-pointed update.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointedUpdate {
    pub model: Arc<UpdateModel>,
    pub points: BTreeSet<usize>,
}

impl PointedUpdate {
    pub fn new(model: Arc<UpdateModel>, points: BTreeSet<usize>) -> Result<Self, ModelError> {
        if points.is_empty() {
            return Err(ModelError::NoPoints);
        }
        if let Some(&bad) = points.iter().find(|&&e| e >= model.len()) {
            return Err(ModelError::UnknownEvent(bad.to_string()));
        }
        Ok(PointedUpdate { model, points })
    }

    pub fn at(model: Arc<UpdateModel>, events: &[&str]) -> Result<Self, ModelError> {
        let points = events
            .iter()
            .map(|e| model.event_index(e).ok_or_else(|| ModelError::UnknownEvent(e.to_string())))
            .collect::<Result<_, _>>()?;
        Self::new(model, points)
    }

    pub fn single(model: Arc<UpdateModel>, event: usize) -> Self {
        assert!(event < model.len(), "event out of range");
        PointedUpdate { model, points: BTreeSet::from([event]) }
    }

    /// The point, when there is exactly one.
    pub fn single_point(&self) -> Option<usize> {
        match self.points.len() {
            1 => self.points.first().copied(),
            _ => None,
        }
    }

    pub fn point_names(&self) -> Vec<&str> {
        self.points.iter().map(|&e| self.model.event_name(e)).collect()
    }
}

/// The event `skip`: precondition ⊤, identity postcondition, reflexive for
/// every agent.
pub fn mk_skip(agents: &[Agent]) -> UpdateModel {
    let mut frame = Frame::empty(agents.iter().cloned(), 1);
    for ai in 0..frame.agents().len() {
        frame.make_reflexive(ai);
    }
    UpdateModel::from_parts(
        "skip".into(),
        frame,
        vec!["skip".into()],
        vec![Formula::Top],
        vec![BTreeMap::new()],
    )
}

fn singleton(
    name: &str,
    event: &str,
    agents: &[Agent],
    pre: Formula,
    post: BTreeMap<Atom, Formula>,
) -> PointedUpdate {
    let mut frame = Frame::empty(agents.iter().cloned(), 1);
    for ai in 0..frame.agents().len() {
        frame.make_reflexive(ai);
    }
    let model = UpdateModel::from_parts(name.into(), frame, vec![event.into()], vec![pre], vec![post]);
    PointedUpdate::single(Arc::new(model), 0)
}

/// Public announcement of `f`: one event seen by everyone, identity
/// postcondition.
pub fn mk_public_announcement(agents: &[Agent], f: Formula) -> PointedUpdate {
    singleton("announce", "ann", agents, f, BTreeMap::new())
}

/// Public assignment `sigma`: one event seen by everyone, precondition ⊤.
pub fn mk_public_assignment(agents: &[Agent], sigma: BTreeMap<Atom, Formula>) -> PointedUpdate {
    singleton("assign", "asg", agents, Formula::Top, sigma)
}
