//! Characteristic formulas: a formula true exactly at the pointed models
//! bisimilar to a given one.

use std::collections::BTreeSet;

use ontic::bisim::is_bisimilar;
use ontic::ids::Atom;
use ontic::models::{EpistemicModel, PointedModel};
use ontic::semantics::eval;
use ontic::transforms::CharFormulas;

fn main() {
    let m = EpistemicModel::builder(["a"])
        .states(["s0", "s1", "s2"])
        .edge("a", "s0", "s1")
        .edge("a", "s1", "s2")
        .truth("p", ["s2"])
        .build()
        .unwrap();
    let q: BTreeSet<Atom> = [Atom::new("p")].into();
    let chars = CharFormulas::new(&m, &q);
    println!("refinement rounds: {}", chars.rounds());
    for s in 0..m.len() {
        println!("delta({}) = {}", m.state_name(s), chars.formula(s));
    }

    // t0 matches s0; t4 loops and does not
    let n = EpistemicModel::builder(["a"])
        .states(["t0", "t1", "t2", "t3", "t4"])
        .edge("a", "t0", "t1")
        .edge("a", "t1", "t2")
        .edge("a", "t1", "t3")
        .edge("a", "t4", "t1")
        .edge("a", "t4", "t4")
        .truth("p", ["t2", "t3"])
        .build()
        .unwrap();
    let delta = chars.formula(0);
    for t in 0..n.len() {
        let here = PointedModel::new(n.clone(), t);
        let truth = eval(&here, &delta).unwrap();
        let bisimilar = is_bisimilar(&PointedModel::new(m.clone(), 0), &here, Some(&q)).unwrap();
        println!("at {}: delta(s0) {truth}, bisimilar {bisimilar}", n.state_name(t));
    }
}
