//! Randomized soundness check of the axiom schemes and their broken
//! variants.

use ontic::lab::{check_axiom, AxiomId, GenParams};

fn main() {
    let trials = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(100);
    let params = GenParams::default().with_seed(7);
    for id in AxiomId::all() {
        let r = check_axiom(id, trials, &params);
        let verdict = match (id.is_sound(), r.failure_count) {
            (true, 0) => "holds",
            (true, _) => "UNSOUND",
            (false, 0) => "mutant survived",
            (false, _) => "mutant caught",
        };
        println!("{:<30} {:>6} instances {:>5} failures  {verdict}", id.name(), r.instances_checked, r.failure_count);
        if let (false, Some(f)) = (id.is_sound(), r.failures.first()) {
            println!("    e.g. trial {} state {}: {}", f.trial, f.state, f.instance);
        }
    }
}
