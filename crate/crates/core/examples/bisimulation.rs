//! Largest bisimulations, contraction, and isomorphism checks.

use ontic::bisim::{contract, is_bisimilar, is_isomorphic, max_bisim};
use ontic::models::{EpistemicModel, PointedModel};

fn main() {
    // a three-state a-cycle and a single a-loop agree on everything
    let cycle = EpistemicModel::builder(["a"])
        .states(["x", "y", "z"])
        .edge("a", "x", "y")
        .edge("a", "y", "z")
        .edge("a", "z", "x")
        .build()
        .unwrap();
    let dot = EpistemicModel::builder(["a"]).state("w").edge("a", "w", "w").build().unwrap();
    let rel = max_bisim(&cycle, &dot, None).unwrap().unwrap();
    println!("cycle ~ loop via {:?}", rel.named(&cycle, &dot));

    let c = contract(&cycle);
    println!("contracted cycle: {} state(s), projection {:?}", c.model.len(), c.projection_names(&cycle));
    println!("contraction isomorphic to the loop: {}", is_isomorphic(&c.model, &dot).is_some());

    // marking one state breaks the symmetry
    let marked = EpistemicModel::builder(["a"])
        .states(["x", "y", "z"])
        .edge("a", "x", "y")
        .edge("a", "y", "z")
        .edge("a", "z", "x")
        .truth("p", ["x"])
        .build()
        .unwrap();
    let x = PointedModel::at(marked.clone(), "x").unwrap();
    let y = PointedModel::at(marked.clone(), "y").unwrap();
    println!("x ~ y with p: {}", is_bisimilar(&x, &y, None).unwrap());
    println!("x ~ y ignoring p: {}", is_bisimilar(&x, &y, Some(&Default::default())).unwrap());
    println!("marked cycle contracts to {} states", contract(&marked).model.len());
}
