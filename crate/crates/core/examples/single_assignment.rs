//! Splitting an update into steps that each assign at most one atom per
//! event, in both the marker and the precondition-guarded variants.

use std::collections::BTreeSet;

use ontic::bisim::is_isomorphic;
use ontic::formula::{parse_plain, Formula};
use ontic::ids::Atom;
use ontic::models::{EpistemicModel, UpdateModel};
use ontic::semantics::product;
use ontic::transforms::{decompose_single, OneVariant};

fn main() {
    // swap p and q publicly, or set both when r holds; the events overlap
    let u = UpdateModel::builder("swap", ["a"])
        .event("sw", Formula::Top)
        .event("set", parse_plain("r").unwrap())
        .assign("sw", "p", parse_plain("q").unwrap())
        .assign("sw", "q", parse_plain("p").unwrap())
        .assign("set", "p", Formula::Top)
        .assign("set", "q", Formula::Top)
        .universal("a")
        .build()
        .unwrap();
    let u = std::sync::Arc::new(u);
    let m = EpistemicModel::builder(["a"])
        .states(["x", "y"])
        .universal("a")
        .truth("p", ["x"])
        .truth("r", ["x", "y"])
        .build()
        .unwrap();
    let direct = product(&m, &u).unwrap().model;
    let original: BTreeSet<Atom> = ["p", "q", "r"].into_iter().map(Atom::new).collect();

    for variant in [OneVariant::Marker, OneVariant::Literal] {
        let seq = decompose_single(&u.at_all(), variant).unwrap();
        println!("{variant:?}: {} steps, fresh {:?}", seq.steps.len(), seq.fresh_atoms);
        for step in &seq.steps {
            println!("  {}", step.model.name());
        }
        let run = seq.run_model(&m).unwrap().restrict_valuation(&original);
        println!("  matches the direct product: {}", is_isomorphic(&run, &direct).is_some());
    }
}
