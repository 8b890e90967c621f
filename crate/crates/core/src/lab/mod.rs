//! Seeded generators, exhaustive oracles and the axiom-scheme harness.
//!
//! Everything here is a pure function of a seed: a [`Generator`] owns a
//! ChaCha stream, and per-trial generators use the trial index as stream id.

mod axioms;
mod brute;
mod twin;

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::formula::{Formula, Program};
use crate::ids::{Agent, Atom};
use crate::models::{EpistemicModel, Frame, PointedModel, PointedUpdate, UpdateModel};
use crate::semantics::eval;

pub use axioms::{check_axiom, AxiomFailure, AxiomId, AxiomReport};
pub use brute::{brute_max_bisim, BRUTE_LIMIT};
pub use twin::{twin_model, twin_pool, twin_search, TwinSearch};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LabError {
    #[error("brute force needs |S1|·|S2| ≤ {limit}, got {size}")]
    TooLarge { size: usize, limit: usize },
    #[error("unknown axiom id {0:?}")]
    UnknownAxiom(String),
    #[error("agent sets differ")]
    AgentMismatch,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FrameClass {
    #[default]
    Arbitrary,
    /// Every state has a successor for every agent.
    Serial,
    /// Every state sees itself for every agent.
    Reflexive,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenParams {
    pub seed: u64,
    pub max_states: usize,
    pub max_events: usize,
    pub max_atoms: usize,
    pub max_agents: usize,
    pub max_formula_depth: usize,
    pub frame_class: FrameClass,
}

impl Default for GenParams {
    fn default() -> Self {
        GenParams {
            seed: 0,
            max_states: 4,
            max_events: 3,
            max_atoms: 2,
            max_agents: 2,
            max_formula_depth: 3,
            frame_class: FrameClass::Arbitrary,
        }
    }
}

impl GenParams {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }
}

const AGENT_NAMES: [&str; 4] = ["a", "b", "c", "d"];
const ATOM_NAMES: [&str; 6] = ["p", "q", "r", "u", "v", "w"];
const EDGE_PROBABILITY: f64 = 0.5;
const EXECUTABLE_RETRIES: usize = 100;

/// Random models, updates and formulas over a fixed agent set and atom pool.
#[derive(Clone, Debug)]
pub struct Generator {
    params: GenParams,
    rng: ChaCha8Rng,
    agents: Vec<Agent>,
    atoms: Vec<Atom>,
    updates_made: usize,
}

impl Generator {
    pub fn new(params: GenParams) -> Self {
        Self::for_trial(params, 0)
    }

    /// Independent stream `trial` of the same seed.
    pub fn for_trial(params: GenParams, trial: u64) -> Self {
        assert!(
            params.max_states >= 1
                && params.max_events >= 1
                && params.max_atoms >= 1
                && params.max_agents >= 1,
            "generator bounds must be at least 1"
        );
        let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
        rng.set_stream(trial);
        let agents = AGENT_NAMES[..params.max_agents.min(AGENT_NAMES.len())]
            .iter()
            .map(|&a| Agent::from(a))
            .collect();
        let atoms = ATOM_NAMES[..params.max_atoms.min(ATOM_NAMES.len())]
            .iter()
            .map(|&p| Atom::from(p))
            .collect();
        Generator { params, rng, agents, atoms, updates_made: 0 }
    }

    pub fn params(&self) -> &GenParams {
        &self.params
    }

    pub fn agents(&self) -> &[Agent] {
        &self.agents
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    fn random_frame(&mut self, size: usize, class: FrameClass) -> Frame {
        let mut frame = Frame::empty(self.agents.iter().cloned(), size);
        for ai in 0..self.agents.len() {
            for s in 0..size {
                for t in 0..size {
                    if self.rng.gen_bool(EDGE_PROBABILITY) {
                        frame.add_edge(ai, s, t);
                    }
                }
                match class {
                    FrameClass::Arbitrary => {}
                    FrameClass::Serial => {
                        if frame.successors(ai, s).is_empty() {
                            let t = self.rng.gen_range(0..size);
                            frame.add_edge(ai, s, t);
                        }
                    }
                    FrameClass::Reflexive => frame.add_edge(ai, s, s),
                }
            }
        }
        frame
    }

    /// A model with `1..=max_states` states; every pool atom is mapped.
    pub fn gen_model(&mut self) -> PointedModel {
        self.gen_model_with(self.params.frame_class)
    }

    pub fn gen_model_with(&mut self, class: FrameClass) -> PointedModel {
        let size = self.rng.gen_range(1..=self.params.max_states);
        self.gen_model_sized(size, class)
    }

    pub fn gen_model_sized(&mut self, size: usize, class: FrameClass) -> PointedModel {
        let frame = self.random_frame(size, class);
        let names = (0..size).map(|s| format!("s{s}")).collect();
        let mut valuation = BTreeMap::new();
        for p in self.atoms.clone() {
            let set: BTreeSet<usize> = (0..size).filter(|_| self.rng.gen_bool(0.5)).collect();
            valuation.insert(p, set);
        }
        let point = self.rng.gen_range(0..size);
        PointedModel::new(EpistemicModel::from_parts(frame, names, valuation), point)
    }

    /// A single-pointed update; preconditions and postconditions are static
    /// formulas of depth at most 2.
    pub fn gen_update(&mut self) -> PointedUpdate {
        let size = self.rng.gen_range(1..=self.params.max_events);
        let frame = self.random_frame(size, FrameClass::Arbitrary);
        let depth = self.params.max_formula_depth.min(2);
        let mut pre = Vec::with_capacity(size);
        let mut post = Vec::with_capacity(size);
        for _ in 0..size {
            // mostly shallow preconditions so that events fire
            let d = if self.rng.gen_bool(0.5) { 0 } else { depth };
            pre.push(self.gen_formula_depth(d, &[]));
            let mut assignment = BTreeMap::new();
            for p in self.atoms.clone() {
                if self.rng.gen_bool(0.4) {
                    let d = self.rng.gen_range(0..=depth);
                    assignment.insert(p, self.gen_formula_depth(d, &[]));
                }
            }
            post.push(assignment);
        }
        let name = format!("U{}", self.updates_made);
        self.updates_made += 1;
        let events = (0..size).map(|e| format!("e{e}")).collect();
        let model = UpdateModel::from_parts(name, frame, events, pre, post);
        let point = self.rng.gen_range(0..size);
        PointedUpdate::single(Arc::new(model), point)
    }

    /// A formula of depth at most `max_formula_depth`.
    pub fn gen_formula(&mut self, updates: &[PointedUpdate]) -> Formula {
        let depth = self.params.max_formula_depth;
        self.gen_formula_depth(depth, updates)
    }

    /// Depth 0 gives an atom, `true` or `false`. Update modalities are drawn
    /// from `updates`, using any non-empty set of points.
    pub fn gen_formula_depth(&mut self, depth: usize, updates: &[PointedUpdate]) -> Formula {
        if depth == 0 || self.rng.gen_bool(0.2) {
            return match self.rng.gen_range(0..10) {
                0 => Formula::Top,
                1 => Formula::Bottom,
                _ => Formula::Atom(self.atoms.choose(&mut self.rng).expect("atom pool").clone()),
            };
        }
        let kinds = if updates.is_empty() { 8 } else { 10 };
        let sub = depth - 1;
        match self.rng.gen_range(0..kinds) {
            0 => Formula::not(self.gen_formula_depth(sub, updates)),
            1 => Formula::and(self.gen_formula_depth(sub, updates), self.gen_formula_depth(sub, updates)),
            2 => Formula::or(self.gen_formula_depth(sub, updates), self.gen_formula_depth(sub, updates)),
            3 => Formula::implies(self.gen_formula_depth(sub, updates), self.gen_formula_depth(sub, updates)),
            4 => Formula::iff(self.gen_formula_depth(sub, updates), self.gen_formula_depth(sub, updates)),
            5 | 6 => {
                let program = Program::Agent(self.gen_agent());
                let body = self.gen_formula_depth(sub, updates);
                if self.rng.gen_bool(0.5) {
                    Formula::boxed(program, body)
                } else {
                    Formula::diamond(program, body)
                }
            }
            7 => Formula::boxed(Program::Star(self.gen_group()), self.gen_formula_depth(sub, updates)),
            _ => {
                let u = updates.choose(&mut self.rng).expect("non-empty").clone();
                let points = self.gen_points(&u.model);
                let program = Program::Update(PointedUpdate { model: u.model, points });
                let body = self.gen_formula_depth(sub, updates);
                if self.rng.gen_bool(0.5) {
                    Formula::boxed(program, body)
                } else {
                    Formula::diamond(program, body)
                }
            }
        }
    }

    pub fn gen_agent(&mut self) -> Agent {
        self.agents.choose(&mut self.rng).expect("agents").clone()
    }

    /// A non-empty subset of the agents.
    pub fn gen_group(&mut self) -> BTreeSet<Agent> {
        loop {
            let group: BTreeSet<Agent> =
                self.agents.clone().into_iter().filter(|_| self.rng.gen_bool(0.6)).collect();
            if !group.is_empty() {
                return group;
            }
        }
    }

    fn gen_points(&mut self, u: &UpdateModel) -> BTreeSet<usize> {
        if self.rng.gen_bool(0.7) {
            return BTreeSet::from([self.rng.gen_range(0..u.len())]);
        }
        loop {
            let points: BTreeSet<usize> = (0..u.len()).filter(|_| self.rng.gen_bool(0.5)).collect();
            if !points.is_empty() {
                return points;
            }
        }
    }

    /// A pointed model and an update whose point is executable there.
    /// Tries `EXECUTABLE_RETRIES` updates per model before drawing a new model.
    pub fn gen_executable_pair(&mut self) -> (PointedModel, PointedUpdate) {
        loop {
            let pm = self.gen_model();
            for _ in 0..EXECUTABLE_RETRIES {
                let pu = self.gen_update();
                if is_executable(&pm, &pu) {
                    return (pm, pu);
                }
            }
        }
    }

    /// An update executable at `pm`, or `None` after the retry cap.
    pub fn gen_update_for(&mut self, pm: &PointedModel) -> Option<PointedUpdate> {
        (0..EXECUTABLE_RETRIES).map(|_| self.gen_update()).find(|pu| is_executable(pm, pu))
    }

    /// A model bisimilar to `pm` with one state duplicated. Edges into the
    /// duplicated state are kept, moved or doubled at random.
    pub fn bisimilar_variant(&mut self, pm: &PointedModel) -> PointedModel {
        let m = &pm.model;
        let n = m.len();
        let copy = self.rng.gen_range(0..n);
        let mut frame = Frame::empty(m.agents().iter().cloned(), n + 1);
        let image = |s: usize| if s == n { copy } else { s };
        for ai in 0..m.agents().len() {
            for s in 0..=n {
                for &t in m.frame().successors(ai, image(s)) {
                    if t != copy {
                        frame.add_edge(ai, s, t);
                        continue;
                    }
                    match self.rng.gen_range(0..3) {
                        0 => frame.add_edge(ai, s, t),
                        1 => frame.add_edge(ai, s, n),
                        _ => {
                            frame.add_edge(ai, s, t);
                            frame.add_edge(ai, s, n);
                        }
                    }
                }
            }
        }
        let mut extra = format!("{}_dup", m.state_name(copy));
        while m.state_index(&extra).is_some() {
            extra.push('_');
        }
        let mut names = m.states().to_vec();
        names.push(extra);
        let valuation = m
            .valuation()
            .iter()
            .map(|(p, set)| {
                let mut set = set.clone();
                if set.contains(&copy) {
                    set.insert(n);
                }
                (p.clone(), set)
            })
            .collect();
        let point = if pm.point == copy && self.rng.gen_bool(0.5) { n } else { pm.point };
        PointedModel::new(EpistemicModel::from_parts(frame, names, valuation), point)
    }
}

/// True when some point of `pu` has its precondition satisfied at `pm`.
pub fn is_executable(pm: &PointedModel, pu: &PointedUpdate) -> bool {
    pu.points.iter().any(|&e| eval(pm, pu.model.pre(e)).unwrap_or(false))
}

pub fn gen_model(params: &GenParams) -> PointedModel {
    Generator::new(params.clone()).gen_model()
}

pub fn gen_update(params: &GenParams) -> PointedUpdate {
    Generator::new(params.clone()).gen_update()
}

pub fn gen_formula(params: &GenParams, updates: &[PointedUpdate]) -> Formula {
    Generator::new(params.clone()).gen_formula(updates)
}
