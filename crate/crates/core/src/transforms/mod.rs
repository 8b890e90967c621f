//! Semantic transformations: arbitrary change, ⊤/⊥ normalization and
//! single-assignment decomposition, plus the bookkeeping they rely on
//! (relevant atoms, serial cores, characteristic formulas).

mod change;
mod charf;
mod one;
mod tf;

use std::collections::BTreeSet;

use thiserror::Error;

use crate::ids::{Agent, Atom};
use crate::models::EpistemicModel;
use crate::semantics::SemanticsError;

pub use change::{realize, synth_arbitrary, synth_isomorphic};
pub use charf::{char_formula, CharFormulas};
pub use one::{decompose_single, OneVariant, UpdateSequence, FRESH_PREFIX};
pub use tf::{normalize_tf, TfEvent};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TransformError {
    #[error("state {state:?} has no serial submodel for agents {agents:?}")]
    NoSerialCore { state: String, agents: Vec<String> },
    #[error("source model is not a bisimulation contraction")]
    NotContracted,
    #[error("agent {agent:?} does not consider the actual state {state:?} possible")]
    PointNotReflexive { agent: String, state: String },
    #[error("witness does not satisfy the formula")]
    WitnessFails,
    #[error("atom {0:?} collides with the reserved auxiliary prefix")]
    FreshAtomCollision(String),
    #[error(transparent)]
    Semantics(#[from] SemanticsError),
}

/// Atoms whose valuation in the disjoint union of `models` is neither empty
/// nor everything.
pub fn relevant_atoms(models: &[&EpistemicModel]) -> BTreeSet<Atom> {
    let candidates: BTreeSet<Atom> = models.iter().flat_map(|m| m.mapped_atoms()).collect();
    candidates
        .into_iter()
        .filter(|p| {
            let values = || models.iter().flat_map(|m| (0..m.len()).map(move |s| m.holds(p.as_str(), s)));
            values().any(|v| v) && values().any(|v| !v)
        })
        .collect()
}

/// `S^ser`: the largest set of states in which every state has a successor
/// inside the set for each of `agents`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SerialCore {
    pub states: BTreeSet<usize>,
    pub agents: BTreeSet<Agent>,
}

/// Deletes states without a successor in the remaining set until nothing
/// changes. Fails when `point` gets deleted.
pub fn serial_core(
    m: &EpistemicModel,
    agents: &BTreeSet<Agent>,
    point: usize,
) -> Result<SerialCore, TransformError> {
    let indices = agents
        .iter()
        .map(|a| m.frame().agent_index(a.as_str()).ok_or_else(|| SemanticsError::UnknownAgent(a.to_string())))
        .collect::<Result<Vec<_>, _>>()?;
    let mut alive = vec![true; m.len()];
    loop {
        let doomed: Vec<usize> = (0..m.len())
            .filter(|&s| alive[s])
            .filter(|&s| indices.iter().any(|&ai| !m.frame().successors(ai, s).iter().any(|&t| alive[t])))
            .collect();
        if doomed.is_empty() {
            break;
        }
        for s in doomed {
            alive[s] = false;
        }
    }
    if !alive[point] {
        return Err(TransformError::NoSerialCore {
            state: m.state_name(point).to_string(),
            agents: agents.iter().map(ToString::to_string).collect(),
        });
    }
    Ok(SerialCore { states: (0..m.len()).filter(|&s| alive[s]).collect(), agents: agents.clone() })
}

/// Agents with at least one edge in `m`.
pub fn active_agents(m: &EpistemicModel) -> BTreeSet<Agent> {
    m.agents()
        .iter()
        .enumerate()
        .filter(|&(ai, _)| m.frame().edge_count(ai) > 0)
        .map(|(_, a)| a.clone())
        .collect()
}

#[cfg(test)]
mod tests;
