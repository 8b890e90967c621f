//! Synthesizing an update that turns one pointed model into another, and
//! realizing a formula through a witness model.

use ontic::bisim::{is_bisimilar, is_isomorphic_pointed};
use ontic::coin;
use ontic::formula::{parse_plain, Formula, Program};
use ontic::models::{EpistemicModel, PointedModel};
use ontic::semantics::{eval, execute};
use ontic::transforms::{realize, relevant_atoms, synth_arbitrary, synth_isomorphic};

fn main() {
    let src = coin::initial();
    // target: Anne knows p, Bill is still unsure, and q now holds everywhere
    let dst = EpistemicModel::builder(["a", "b"])
        .states(["h", "t"])
        .reflexive("a")
        .universal("b")
        .truth("p", ["h"])
        .truth("q", ["h", "t"])
        .build()
        .unwrap();
    let target = PointedModel::at(dst.clone(), "h").unwrap();

    let pu = synth_arbitrary(&src, &target).unwrap();
    let out = execute(&src, &pu).unwrap();
    let q = relevant_atoms(&[&src.model, &dst]);
    println!("update {} with {} events", pu.model.name(), pu.model.len());
    println!("result bisimilar to target over {q:?}: {}", is_bisimilar(&out, &target, Some(&q)).unwrap());

    // reflexive contracted source: the result is isomorphic, not just bisimilar
    let refl = EpistemicModel::builder(["a", "b"])
        .states(["s1", "s0"])
        .reflexive("a")
        .universal("b")
        .truth("p", ["s1"])
        .build()
        .unwrap();
    let start = PointedModel::at(refl, "s1").unwrap();
    let pu = synth_isomorphic(&start, &target).unwrap();
    let out = execute(&start, &pu).unwrap();
    println!("isomorphic variant exact: {}", is_isomorphic_pointed(&out, &target).is_some());

    let goal = parse_plain("[a]p & ~[b]p & [b]q").unwrap();
    let pu = realize(&src, &goal, &target).unwrap();
    let diamond = Formula::diamond(Program::Update(pu), goal.clone());
    println!("<realizing update>({goal}) at the coin: {}", eval(&src, &diamond).unwrap());
}
