//! Seeded generation of models, updates and formulas, checked against the
//! exhaustive bisimulation oracle.

use ontic::bisim::max_bisim;
use ontic::lab::{brute_max_bisim, FrameClass, GenParams, Generator, BRUTE_LIMIT};
use ontic::semantics::eval;

fn main() {
    let params = GenParams { frame_class: FrameClass::Serial, ..GenParams::default().with_seed(42) };
    let mut gen = Generator::new(params);
    let (pm, pu) = gen.gen_executable_pair();
    let f = gen.gen_formula(std::slice::from_ref(&pu));
    println!("model: {:?}", pm.model.to_doc(&[pm.point]));
    println!("update {} with {} events", pu.model.name(), pu.model.len());
    println!("{f} = {}", eval(&pm, &f).unwrap());

    let mut agree = 0;
    let mut pairs = 0;
    while pairs < 100 {
        let (a, b) = (gen.gen_model().model, gen.gen_model().model);
        if a.len() * b.len() > BRUTE_LIMIT {
            continue;
        }
        pairs += 1;
        let fast = max_bisim(&a, &b, None).unwrap();
        let slow = brute_max_bisim(&a, &b, None).unwrap();
        agree += usize::from(fast.map(|r| r.pairs().clone()) == slow.map(|r| r.pairs().clone()));
    }
    println!("refinement agrees with brute force on {agree}/{pairs} pairs");
}
