use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use super::eval::unique_names;
use super::{check_agents, SemanticsError};
use crate::formula::Formula;
use crate::models::{Frame, PointedUpdate, UpdateModel};

/// `U ; U'` over events `E × E'`, named `f*f'`, first component outermost.
///
/// Preconditions and postconditions of the second model are evaluated after
/// the first: they are wrapped in `[U, f]`, referring to `first` itself.
pub fn compose_models(
    first: &Arc<UpdateModel>,
    second: &Arc<UpdateModel>,
    name: impl Into<String>,
) -> Result<UpdateModel, SemanticsError> {
    check_agents(first.agents(), second.agents())?;
    let (n1, n2) = (first.len(), second.len());
    let idx = |f: usize, g: usize| f * n2 + g;

    let mut frame = Frame::empty(first.agents().iter().cloned(), n1 * n2);
    for ai in 0..first.agents().len() {
        for (f, g) in first.frame().edges(ai) {
            for (f2, g2) in second.frame().edges(ai) {
                frame.add_edge(ai, idx(f, f2), idx(g, g2));
            }
        }
    }

    let after = |f: usize, body: &Formula| {
        Formula::after(PointedUpdate::single(first.clone(), f), body.clone())
    };
    let mut pre = Vec::with_capacity(n1 * n2);
    let mut post = Vec::with_capacity(n1 * n2);
    let mut names = Vec::with_capacity(n1 * n2);
    for f in 0..n1 {
        for f2 in 0..n2 {
            names.push(format!("{}*{}", first.event_name(f), second.event_name(f2)));
            pre.push(Formula::and(first.pre(f).clone(), after(f, second.pre(f2))));
            let mut assignment: BTreeMap<_, _> = first.post(f).clone();
            for (p, value) in second.post(f2) {
                assignment.insert(p.clone(), after(f, value));
            }
            post.push(assignment);
        }
    }
    Ok(UpdateModel::from_parts(name.into(), frame, unique_names(names), pre, post))
}

/// `(U, e) ; (U', e')`. Multi-pointed arguments compose pointwise: the
/// result is pointed at every pair of points.
pub fn compose(first: &PointedUpdate, second: &PointedUpdate) -> Result<PointedUpdate, SemanticsError> {
    let name = format!("{}+{}", first.model.name(), second.model.name());
    let model = compose_models(&first.model, &second.model, name)?;
    let n2 = second.model.len();
    let points: BTreeSet<usize> = first
        .points
        .iter()
        .flat_map(|&e| second.points.iter().map(move |&e2| e * n2 + e2))
        .collect();
    Ok(PointedUpdate { model: Arc::new(model), points })
}
