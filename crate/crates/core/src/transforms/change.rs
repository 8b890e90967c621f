use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use super::{active_agents, relevant_atoms, serial_core, CharFormulas, TransformError};
use crate::bisim::is_contracted;
use crate::formula::Formula;
use crate::ids::Atom;
use crate::models::{PointedModel, PointedUpdate, UpdateModel};
use crate::semantics::{check_agents, eval};

/// Events are the target's states with the target's access; every event
/// sets the relevant atoms to their value at that state.
fn target_shaped(name: &str, dst: &PointedModel, relevant: &BTreeSet<Atom>, pre: Formula) -> PointedUpdate {
    let m = &dst.model;
    let post = (0..m.len())
        .map(|t| {
            relevant
                .iter()
                .map(|p| {
                    let value = if m.holds(p.as_str(), t) { Formula::Top } else { Formula::Bottom };
                    (p.clone(), value)
                })
                .collect::<BTreeMap<_, _>>()
        })
        .collect();
    let model = UpdateModel::from_parts(
        name.to_string(),
        m.frame().clone(),
        m.states().to_vec(),
        vec![pre; m.len()],
        post,
    );
    PointedUpdate::single(Arc::new(model), dst.point)
}

/// The update for arbitrary change from `(M, s)` to `(M', s')`: executing
/// it at `s` yields a model bisimilar to `(M', s')` over the relevant atoms.
///
/// Requires a serial core of `M` around `s` for every agent that has any
/// access in `M'`.
pub fn synth_arbitrary(src: &PointedModel, dst: &PointedModel) -> Result<PointedUpdate, TransformError> {
    check_agents(src.model.agents(), dst.model.agents())?;
    let relevant = relevant_atoms(&[&src.model, &dst.model]);
    let core = serial_core(&src.model, &active_agents(&dst.model), src.point)?;
    let chars = CharFormulas::new(&src.model, &relevant);
    // bisimilar core states share a formula
    let classes: BTreeMap<usize, usize> =
        core.states.iter().map(|&u| (chars.contraction().projection[u], u)).collect();
    let pre = Formula::disj(classes.values().map(|&u| chars.formula(u)));
    Ok(target_shaped("change", dst, &relevant, pre))
}

/// The variant whose precondition is the characteristic formula of the
/// point: the product is isomorphic to the target.
///
/// `M` must be a bisimulation contraction and every agent must consider the
/// actual state possible.
pub fn synth_isomorphic(src: &PointedModel, dst: &PointedModel) -> Result<PointedUpdate, TransformError> {
    check_agents(src.model.agents(), dst.model.agents())?;
    if !is_contracted(&src.model, None) {
        return Err(TransformError::NotContracted);
    }
    let frame = src.model.frame();
    if let Some(agent) = (0..frame.agents().len()).find(|&ai| !frame.has_edge(ai, src.point, src.point)) {
        return Err(TransformError::PointNotReflexive {
            agent: frame.agents()[agent].to_string(),
            state: src.point_name().to_string(),
        });
    }
    let relevant = relevant_atoms(&[&src.model, &dst.model]);
    let pre = CharFormulas::new(&src.model, &relevant).formula(src.point);
    Ok(target_shaped("change_r", dst, &relevant, pre))
}

/// An update `u` with `(M, s) ⊨ <u>f`, built from a model of `f`.
pub fn realize(pm: &PointedModel, f: &Formula, witness: &PointedModel) -> Result<PointedUpdate, TransformError> {
    if !eval(witness, f)? {
        return Err(TransformError::WitnessFails);
    }
    synth_arbitrary(pm, witness)
}
