use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use crate::formula::Formula;
use crate::ids::Atom;
use crate::models::{Frame, PointedUpdate, UpdateModel};
use crate::semantics::unique_names;

/// An event `(e, f)` of the normalized model: `f` fixes a truth value for
/// every atom assigned by `e`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TfEvent {
    pub base: usize,
    pub assignment: BTreeMap<Atom, bool>,
}

impl TfEvent {
    /// `e.p1.q0` style names; an event without assignments keeps its name.
    fn name(&self, u: &UpdateModel) -> String {
        let mut name = u.event_name(self.base).to_string();
        for (p, &v) in &self.assignment {
            name.push_str(&format!(".{p}{}", u8::from(v)));
        }
        name
    }
}

/// All `(e, f)` in event order, `f` enumerated as a binary counter over the
/// sorted postcondition domain.
pub fn tf_events(u: &UpdateModel) -> Vec<TfEvent> {
    (0..u.len())
        .flat_map(|e| {
            let domain: Vec<Atom> = u.post(e).keys().cloned().collect();
            (0..1usize << domain.len()).map(move |mask| TfEvent {
                base: e,
                assignment: domain.iter().enumerate().map(|(i, p)| (p.clone(), mask >> i & 1 == 1)).collect(),
            })
        })
        .collect()
}

/// `U^TF`: every postcondition is `true` or `false`. The guess `f` moves
/// into the precondition, so exactly one copy of each event is executable
/// at any state.
pub fn normalize_tf(pu: &PointedUpdate) -> PointedUpdate {
    let u = &pu.model;
    let events = tf_events(u);
    let mut frame = Frame::empty(u.agents().iter().cloned(), events.len());
    for ai in 0..u.agents().len() {
        for (i, x) in events.iter().enumerate() {
            for (j, y) in events.iter().enumerate() {
                if u.frame().has_edge(ai, x.base, y.base) {
                    frame.add_edge(ai, i, j);
                }
            }
        }
    }
    let pre = events
        .iter()
        .map(|ev| {
            let guesses = ev.assignment.iter().map(|(p, &v)| {
                let value = u.post(ev.base)[p].clone();
                if v {
                    value
                } else {
                    Formula::not(value)
                }
            });
            Formula::conj(std::iter::once(u.pre(ev.base).clone()).chain(guesses))
        })
        .collect();
    let post = events
        .iter()
        .map(|ev| {
            ev.assignment
                .iter()
                .map(|(p, &v)| (p.clone(), if v { Formula::Top } else { Formula::Bottom }))
                .collect()
        })
        .collect();
    let names = unique_names(events.iter().map(|ev| ev.name(u)));
    let points: BTreeSet<usize> = (0..events.len()).filter(|&i| pu.points.contains(&events[i].base)).collect();
    let model = UpdateModel::from_parts(format!("{}.tf", u.name()), frame, names, pre, post);
    PointedUpdate { model: Arc::new(model), points }
}
