//! The two-player coin scenario: an initial model and four updates.
//!
//! Anne (`a`) and Bill (`b`) are uncertain whether the coin shows heads
//! (`p`). State `s1` is heads and actual, `s0` is tails.

use std::sync::Arc;

use crate::formula::Formula;
use crate::models::{EpistemicModel, PointedModel, PointedUpdate, UpdateModel};

pub const AGENTS: [&str; 2] = ["a", "b"];

fn p() -> Formula {
    Formula::atom("p")
}

pub fn initial_model() -> EpistemicModel {
    EpistemicModel::builder(AGENTS)
        .states(["s1", "s0"])
        .universal("a")
        .universal("b")
        .truth("p", ["s1"])
        .build()
        .expect("coin model is valid")
}

pub fn initial() -> PointedModel {
    PointedModel::new(initial_model(), 0)
}

/// Anne looks; Bill sees her looking but not the coin.
pub fn public_look() -> Arc<UpdateModel> {
    let u = UpdateModel::builder("public_look", AGENTS)
        .event("pe", p())
        .event("np", Formula::not(p()))
        .reflexive("a")
        .universal("b")
        .build()
        .expect("valid");
    Arc::new(u)
}

/// Anne looks while Bill believes nothing happens.
pub fn private_look() -> Arc<UpdateModel> {
    let u = UpdateModel::builder("private_look", AGENTS)
        .event("pe", p())
        .event("skip", Formula::Top)
        .reflexive("a")
        .edge("b", "pe", "skip")
        .edge("b", "skip", "skip")
        .build()
        .expect("valid");
    Arc::new(u)
}

/// Anne looks and secretly turns the coin to tails; Bill considers that
/// possible. Actual event `pt`.
pub fn sleight() -> Arc<UpdateModel> {
    let u = UpdateModel::builder("sleight", AGENTS)
        .event("pe", p())
        .event("np", Formula::not(p()))
        .event("pt", Formula::Top)
        .assign("pt", "p", Formula::Bottom)
        .reflexive("a")
        .universal("b")
        .build()
        .expect("valid");
    Arc::new(u)
}

/// Bill flips the coin blind; Anne considers that nothing happened.
/// Actual event `n`.
pub fn flip() -> Arc<UpdateModel> {
    let u = UpdateModel::builder("flip", AGENTS)
        .event("n", Formula::Top)
        .event("skip", Formula::Top)
        .assign("n", "p", Formula::not(p()))
        .universal("a")
        .reflexive("b")
        .build()
        .expect("valid");
    Arc::new(u)
}

/// The actual event of each scenario update, in scenario order.
pub fn scenario() -> Vec<PointedUpdate> {
    [(public_look(), "pe"), (private_look(), "pe"), (sleight(), "pt"), (flip(), "n")]
        .into_iter()
        .map(|(u, e)| u.at(e).expect("event exists"))
        .collect()
}
