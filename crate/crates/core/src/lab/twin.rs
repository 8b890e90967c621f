use std::collections::BTreeMap;

use serde::Serialize;

use crate::bisim::is_bisimilar;
use crate::formula::{parse_plain, Formula};
use crate::ids::Atom;
use crate::models::{mk_public_announcement, mk_public_assignment, EpistemicModel, PointedModel, PointedUpdate};
use crate::semantics::{eval, execute};

/// Outcome of the bounded search for a public route from `p` to its twin.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TwinSearch {
    /// Sequences tried, counting only those executable at every step.
    pub sequences_checked: usize,
    pub max_len: usize,
    pub pool: Vec<String>,
    /// A sequence reaching a model bisimilar to the twin, if any.
    pub found: Option<Vec<String>>,
}

/// The default announcement pool.
pub fn twin_pool() -> Vec<Formula> {
    ["true", "p", "~p", "[a]p", "~[a]p", "<a>p", "<a>~p", "[b]p", "[b]~p", "p -> [a]p"]
        .iter()
        .map(|s| parse_plain(s).expect("pool formulas parse"))
        .collect()
}

/// The `p` state and the `~p` state, indistinguishable for `a` and `b`.
pub fn twin_model() -> EpistemicModel {
    EpistemicModel::builder(["a", "b"])
        .states(["yes", "no"])
        .universal("a")
        .universal("b")
        .truth("p", ["yes"])
        .build()
        .expect("valid")
}

/// Searches every sequence of at most `max_len` public announcements (from
/// `pool`) and public assignments `p := true`, `p := false`, starting at the
/// `p` state, for one that ends bisimilar to the `~p` state.
pub fn twin_search(max_len: usize, pool: &[Formula]) -> TwinSearch {
    let m = twin_model();
    let agents = m.agents().to_vec();
    let start = PointedModel::new(m.clone(), 0);
    let target = PointedModel::new(m, 1);

    let mut moves: Vec<(String, PointedUpdate)> = pool
        .iter()
        .map(|f| (format!("!{f}"), mk_public_announcement(&agents, f.clone())))
        .collect();
    for value in [Formula::Top, Formula::Bottom] {
        let sigma = BTreeMap::from([(Atom::from("p"), value.clone())]);
        moves.push((format!("p := {value}"), mk_public_assignment(&agents, sigma)));
    }

    let mut result = TwinSearch {
        sequences_checked: 0,
        max_len,
        pool: pool.iter().map(ToString::to_string).collect(),
        found: None,
    };
    let mut frontier = vec![(start, Vec::<String>::new())];
    for _ in 0..=max_len {
        let mut next = Vec::new();
        for (pm, path) in frontier {
            result.sequences_checked += 1;
            if is_bisimilar(&pm, &target, None).expect("same agents") {
                result.found = Some(path);
                return result;
            }
            if path.len() == max_len {
                continue;
            }
            for (label, pu) in &moves {
                let e = pu.single_point().expect("single point");
                if !eval(&pm, pu.model.pre(e)).expect("static formula") {
                    continue;
                }
                let after = execute(&pm, pu).expect("precondition holds");
                let mut longer = path.clone();
                longer.push(label.clone());
                next.push((after, longer));
            }
        }
        frontier = next;
    }
    result
}
