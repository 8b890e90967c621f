//! Rewriting an update so that every assignment is to `true` or `false`.

use ontic::bisim::is_bisimilar;
use ontic::coin;
use ontic::semantics::execute_all;
use ontic::transforms::normalize_tf;

fn main() {
    let flip = coin::flip().at("n").unwrap();
    let tf = normalize_tf(&flip);
    println!("{} -> {}", flip.model.name(), tf.model.name());
    for e in 0..tf.model.len() {
        let post: Vec<String> = tf.model.post(e).iter().map(|(p, v)| format!("{p} := {v}")).collect();
        println!("  {:<8} pre {:<22} {}", tf.model.event_name(e), tf.model.pre(e).to_string(), post.join(", "));
    }
    println!("points: {:?}", tf.point_names());

    let start = coin::initial();
    let before = execute_all(&start, &flip).unwrap();
    let after = execute_all(&start, &tf).unwrap();
    println!("executable points: {} vs {}", before.len(), after.len());
    println!("bisimilar results: {}", is_bisimilar(&before[0], &after[0], None).unwrap());
}
