use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use super::TransformError;
use crate::formula::Formula;
use crate::ids::Atom;
use crate::models::{EpistemicModel, Frame, PointedModel, PointedUpdate, UpdateModel};
use crate::semantics::{compose, execute_all, product, SemanticsError};

/// Auxiliary atoms introduced by the decomposition start with this.
pub const FRESH_PREFIX: &str = "__aux_";

/// Which reading of the single-assignment decomposition to build.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum OneVariant {
    /// Final updates fire on a marker set by the middle update. Correct for
    /// every input.
    #[default]
    Marker,
    /// Final updates fire on the stored precondition. Misfires when two
    /// events with different postconditions can both happen at one state.
    Literal,
}

/// Updates to run in order; each event of each step assigns at most one atom.
#[derive(Clone, Debug)]
pub struct UpdateSequence {
    pub steps: Vec<PointedUpdate>,
    pub fresh_atoms: BTreeSet<Atom>,
    pub variant: OneVariant,
    base: String,
}

impl UpdateSequence {
    /// Largest postcondition domain over all events of all steps.
    pub fn max_assignments_per_event(&self) -> usize {
        self.steps
            .iter()
            .flat_map(|s| (0..s.model.len()).map(move |e| s.model.post(e).len()))
            .max()
            .unwrap_or(0)
    }

    /// Runs every step as a full product, ignoring points.
    pub fn run_model(&self, m: &EpistemicModel) -> Result<EpistemicModel, TransformError> {
        self.check_vocabulary(m.mapped_atoms())?;
        let mut current = m.clone();
        for step in &self.steps {
            current = product(&current, &step.model)?.model;
        }
        Ok(current)
    }

    /// Runs the steps from a pointed model, following every executable point.
    pub fn run_pointed(&self, pm: &PointedModel) -> Result<Vec<PointedModel>, TransformError> {
        self.check_vocabulary(pm.model.mapped_atoms())?;
        let mut current = vec![pm.clone()];
        for step in &self.steps {
            let mut next = Vec::new();
            for state in &current {
                next.extend(execute_all(state, step)?);
            }
            current = next;
        }
        Ok(current)
    }

    /// The whole sequence as one update, folded left with composition.
    /// Intermediate models are named `<base>.one.c<k>`.
    pub fn composed(&self) -> Result<PointedUpdate, SemanticsError> {
        let mut steps = self.steps.iter();
        let first = steps.next().expect("a sequence has a middle step").clone();
        steps.enumerate().try_fold(first, |acc, (k, step)| {
            let joined = compose(&acc, step)?;
            let model = Arc::unwrap_or_clone(joined.model).with_name(format!("{}.one.c{}", self.base, k + 1));
            Ok(PointedUpdate { model: Arc::new(model), points: joined.points })
        })
    }

    fn check_vocabulary(&self, atoms: BTreeSet<Atom>) -> Result<(), TransformError> {
        match atoms.into_iter().find(|p| p.as_str().starts_with(FRESH_PREFIX)) {
            Some(p) => Err(TransformError::FreshAtomCollision(p.to_string())),
            None => Ok(()),
        }
    }
}

fn step(name: String, agents: &Frame, events: Vec<(String, Formula, BTreeMap<Atom, Formula>)>) -> UpdateModel {
    let mut frame = Frame::empty(agents.agents().iter().cloned(), events.len());
    for ai in 0..frame.agents().len() {
        frame.make_universal(ai);
    }
    let (mut names, mut pre, mut post) = (Vec::new(), Vec::new(), Vec::new());
    for (n, p, q) in events {
        names.push(n);
        pre.push(p);
        post.push(q);
    }
    UpdateModel::from_parts(name, frame, names, pre, post)
}

fn public_assignment(name: String, frame: &Frame, atom: Atom, value: Formula) -> PointedUpdate {
    let u = step(name, frame, vec![("asg".into(), Formula::Top, BTreeMap::from([(atom, value)]))]);
    PointedUpdate::single(Arc::new(u), 0)
}

/// `if guard then p := value` against `if ~guard then id`, indistinguishable
/// for everyone, pointed at both.
fn conditional(name: String, frame: &Frame, guard: Formula, atom: Atom, value: Formula) -> PointedUpdate {
    let u = step(
        name,
        frame,
        vec![
            ("set".into(), guard.clone(), BTreeMap::from([(atom, value)])),
            ("idle".into(), Formula::not(guard), BTreeMap::new()),
        ],
    );
    PointedUpdate { model: Arc::new(u), points: BTreeSet::from([0, 1]) }
}

/// Splits an update into steps that assign at most one atom per event.
///
/// First every postcondition value is stored in a fresh atom by public
/// assignment, then the update runs without its assignments, then one
/// two-event update per (event, atom) copies the stored value back. The
/// variant selects what the copy-back is conditioned on.
pub fn decompose_single(pu: &PointedUpdate, variant: OneVariant) -> Result<UpdateSequence, TransformError> {
    let u = &pu.model;
    let mut vocabulary = BTreeSet::new();
    for e in 0..u.len() {
        vocabulary.extend(u.pre(e).atoms());
        for (p, v) in u.post(e) {
            vocabulary.insert(p.clone());
            vocabulary.extend(v.atoms());
        }
    }
    if let Some(p) = vocabulary.iter().find(|p| p.as_str().starts_with(FRESH_PREFIX)) {
        return Err(TransformError::FreshAtomCollision(p.to_string()));
    }

    let base = u.name().to_string();
    let frame = u.frame();
    let stored = |e: usize, i: usize| Atom::new(format!("{FRESH_PREFIX}q_{e}_{i}"));
    let marker = |e: usize| Atom::new(format!("{FRESH_PREFIX}m_{e}"));
    let mut fresh = BTreeSet::new();
    let mut steps = Vec::new();

    for e in 0..u.len() {
        if variant == OneVariant::Literal {
            fresh.insert(stored(e, 0));
            steps.push(public_assignment(format!("{base}.store.{e}.0"), frame, stored(e, 0), u.pre(e).clone()));
        }
        for (i, value) in u.post(e).values().enumerate() {
            fresh.insert(stored(e, i + 1));
            let name = format!("{base}.store.{e}.{}", i + 1);
            steps.push(public_assignment(name, frame, stored(e, i + 1), value.clone()));
        }
    }
    if variant == OneVariant::Marker {
        for e in 0..u.len() {
            fresh.insert(marker(e));
            steps.push(public_assignment(format!("{base}.clear.{e}"), frame, marker(e), Formula::Bottom));
        }
    }

    let middle_post = (0..u.len())
        .map(|e| match variant {
            OneVariant::Marker => BTreeMap::from([(marker(e), Formula::Top)]),
            OneVariant::Literal => BTreeMap::new(),
        })
        .collect();
    let middle = UpdateModel::from_parts(
        format!("{base}.middle"),
        frame.clone(),
        u.events().to_vec(),
        (0..u.len()).map(|e| u.pre(e).clone()).collect(),
        middle_post,
    );
    steps.push(PointedUpdate { model: Arc::new(middle), points: pu.points.clone() });

    for e in 0..u.len() {
        let guard = match variant {
            OneVariant::Marker => Formula::Atom(marker(e)),
            OneVariant::Literal => Formula::Atom(stored(e, 0)),
        };
        for (i, p) in u.post(e).keys().enumerate() {
            let name = format!("{base}.set.{e}.{}", i + 1);
            steps.push(conditional(name, frame, guard.clone(), p.clone(), Formula::Atom(stored(e, i + 1))));
        }
    }
    Ok(UpdateSequence { steps, fresh_atoms: fresh, variant, base })
}
