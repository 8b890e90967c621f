//! The coin scenario: four updates run from the initial model, with a few
//! knowledge formulas checked after each one.

use ontic::coin;
use ontic::formula::parse_plain;
use ontic::semantics::{eval, execute};

fn main() {
    let start = coin::initial();
    let checks = ["p", "[a]p", "[b]p", "[b][a]p | [b]~[a]p", "[*{a,b}]([a]p | [a]~p)"];
    println!("initial: {} states", start.model.len());
    for f in checks {
        println!("  {f:<28} {}", eval(&start, &parse_plain(f).unwrap()).unwrap());
    }
    for pu in coin::scenario() {
        let after = execute(&start, &pu).expect("actual event is executable");
        println!(
            "after {} @ {}: states [{}], actual {}",
            pu.model.name(),
            pu.point_names().join(","),
            after.model.states().join(", "),
            after.point_name()
        );
        for f in checks {
            println!("  {f:<28} {}", eval(&after, &parse_plain(f).unwrap()).unwrap());
        }
    }
}
