//! Composing two updates and checking that running them in sequence agrees
//! with running the composite once.

use ontic::bisim::is_isomorphic_pointed;
use ontic::coin;
use ontic::formula::{parse_plain, Formula};
use ontic::semantics::{compose, eval, execute};

fn main() {
    let start = coin::initial();
    let look = coin::public_look().at("pe").unwrap();
    let flip = coin::flip().at("n").unwrap();
    let both = compose(&look, &flip).unwrap();

    println!("{}: {} events", both.model.name(), both.model.len());
    for e in 0..both.model.len() {
        println!("  {:<10} pre {}", both.model.event_name(e), both.model.pre(e));
        for (p, v) in both.model.post(e) {
            println!("  {:<10} {p} := {v}", "");
        }
    }

    let stepwise = execute(&execute(&start, &look).unwrap(), &flip).unwrap();
    let at_once = execute(&start, &both).unwrap();
    println!("isomorphic products: {}", is_isomorphic_pointed(&stepwise, &at_once).is_some());

    let phi = parse_plain("[a]~p & ~[b]~p").unwrap();
    let nested = Formula::after(look.clone(), Formula::after(flip.clone(), phi.clone()));
    let joined = Formula::after(both, phi);
    println!("[look][flip]phi = {}", eval(&start, &nested).unwrap());
    println!("[look;flip]phi  = {}", eval(&start, &joined).unwrap());
}
