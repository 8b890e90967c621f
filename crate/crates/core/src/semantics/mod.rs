//! Truth of formulas, execution of updates (the restricted product) and
//! composition of update models.
//!
//! Evaluation works on extensions: a formula is mapped to the set of states
//! where it holds. Products needed by `[U, e]` modalities are built once per
//! (model, update) pair inside a single call.

mod compose;
mod eval;

use std::collections::BTreeSet;

use thiserror::Error;

use crate::formula::Formula;
use crate::ids::Agent;
use crate::models::{EpistemicModel, PointedModel, PointedUpdate, UpdateModel};

pub use compose::{compose, compose_models};
pub(crate) use eval::unique_names;

use eval::Evaluator;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SemanticsError {
    #[error("agent {0:?} is not an agent of the model")]
    UnknownAgent(String),
    #[error("common-knowledge group is empty")]
    EmptyGroup,
    #[error("agent sets differ: {left:?} vs {right:?}")]
    AgentMismatch { left: Vec<String>, right: Vec<String> },
    #[error("no state satisfies any precondition; the product is empty")]
    EmptyProduct,
    #[error("precondition of event {event:?} fails at state {state:?}")]
    PreconditionFailure { event: String, state: String },
    #[error("expected a single-pointed update, got {0} points")]
    NotSinglePointed(usize),
}

pub(crate) fn check_agents(left: &[Agent], right: &[Agent]) -> Result<(), SemanticsError> {
    if left == right {
        Ok(())
    } else {
        Err(SemanticsError::AgentMismatch {
            left: left.iter().map(ToString::to_string).collect(),
            right: right.iter().map(ToString::to_string).collect(),
        })
    }
}

/// `(M, s) ⊨ f`
pub fn eval(pm: &PointedModel, f: &Formula) -> Result<bool, SemanticsError> {
    let ext = extension(&pm.model, f)?;
    Ok(ext[pm.point])
}

/// Truth value of `f` at every state of `m`, indexed by state.
pub fn extension(m: &EpistemicModel, f: &Formula) -> Result<Vec<bool>, SemanticsError> {
    let mut ev = Evaluator::new(m);
    let ext = ev.extension(0, f)?;
    Ok(ext.as_ref().clone())
}

/// `R(B)*`: the reflexive-transitive closure of the union of the group's
/// relations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupClosure {
    pub group: BTreeSet<Agent>,
    reach: Vec<BTreeSet<usize>>,
}

impl GroupClosure {
    pub fn contains(&self, s: usize, t: usize) -> bool {
        self.reach[s].contains(&t)
    }

    pub fn reachable(&self, s: usize) -> &BTreeSet<usize> {
        &self.reach[s]
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.reach.iter().enumerate().flat_map(|(s, ts)| ts.iter().map(move |&t| (s, t)))
    }
}

/// Reachability from every state along edges of any group member.
pub fn group_closure(
    m: &EpistemicModel,
    group: &BTreeSet<Agent>,
) -> Result<GroupClosure, SemanticsError> {
    let reach = eval::closure(m, group)?;
    Ok(GroupClosure { group: group.clone(), reach })
}

/// `M ⊗ U` together with the `(state, event)` pair behind every product state.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Product {
    pub model: EpistemicModel,
    pub pairs: Vec<(usize, usize)>,
}

impl Product {
    pub fn state_of(&self, state: usize, event: usize) -> Option<usize> {
        self.pairs.iter().position(|&p| p == (state, event))
    }
}

/// The full product model. Fails when no `(t, f)` satisfies `pre(f)`.
pub fn product(m: &EpistemicModel, u: &UpdateModel) -> Result<Product, SemanticsError> {
    let mut ev = Evaluator::new(m);
    match ev.product(0, u)? {
        Some(id) => Ok(ev.take_product(id)),
        None => Err(SemanticsError::EmptyProduct),
    }
}

/// Executes a single-pointed update: `(M ⊗ U, (s, e))`.
pub fn execute(pm: &PointedModel, pu: &PointedUpdate) -> Result<PointedModel, SemanticsError> {
    let e = pu.single_point().ok_or(SemanticsError::NotSinglePointed(pu.points.len()))?;
    execute_event(pm, &pu.model, e)
}

pub fn execute_event(
    pm: &PointedModel,
    u: &UpdateModel,
    e: usize,
) -> Result<PointedModel, SemanticsError> {
    check_agents(pm.model.agents(), u.agents())?;
    let failure = || SemanticsError::PreconditionFailure {
        event: u.event_name(e).to_string(),
        state: pm.point_name().to_string(),
    };
    let prod = product(&pm.model, u).map_err(|err| match err {
        SemanticsError::EmptyProduct => failure(),
        other => other,
    })?;
    let point = prod.state_of(pm.point, e).ok_or_else(failure)?;
    Ok(PointedModel::new(prod.model, point))
}

/// Executes whichever points of a multi-pointed update are executable at
/// the actual state, in point order.
pub fn execute_all(pm: &PointedModel, pu: &PointedUpdate) -> Result<Vec<PointedModel>, SemanticsError> {
    check_agents(pm.model.agents(), pu.model.agents())?;
    let prod = match product(&pm.model, &pu.model) {
        Ok(p) => p,
        Err(SemanticsError::EmptyProduct) => return Ok(Vec::new()),
        Err(e) => return Err(e),
    };
    Ok(pu
        .points
        .iter()
        .filter_map(|&e| prod.state_of(pm.point, e))
        .map(|s| PointedModel::new(prod.model.clone(), s))
        .collect())
}
