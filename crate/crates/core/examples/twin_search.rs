//! Public announcements and public assignments cannot move the heads state
//! to a copy of the tails state: a bounded exhaustive search.

use ontic::lab::{twin_pool, twin_search};

fn main() {
    let depth = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(3);
    let r = twin_search(depth, &twin_pool());
    println!("pool: {}", r.pool.join("  "));
    println!("sequences of length <= {}: {}", r.max_len, r.sequences_checked);
    match r.found {
        Some(path) => println!("reached the twin via {}", path.join("; ")),
        None => println!("no sequence reaches a model bisimilar to the twin"),
    }
}
