//! Driving the command layer from code: load the shipped coin workspace into
//! a scratch directory, run a few commands, and print the DOT of the result.

use ontic::cli::{cmd_check, cmd_exec, cmd_one, Workspace};

fn main() {
    let src = concat!(env!("CARGO_MANIFEST_DIR"), "/workspaces/coin");
    let dir = std::env::temp_dir().join("ontic-example-workspace");
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    for entry in std::fs::read_dir(src).unwrap() {
        let p = entry.unwrap().path();
        std::fs::copy(&p, dir.join(p.file_name().unwrap())).unwrap();
    }
    let mut ws = Workspace::load(&dir).unwrap();
    println!("models {:?}, updates {:?}", ws.model_names().collect::<Vec<_>>(), ws.update_names().collect::<Vec<_>>());

    let check = cmd_check(&ws, "coin", "~[a]p & ~[b]p", None).unwrap();
    println!("both uncertain: {}", check.holds);
    let out = cmd_exec(&mut ws, "coin", "private_look", &["pe".into()], None).unwrap();
    println!("{}", std::fs::read_to_string(&out.dot).unwrap());
    let after = cmd_check(&ws, &out.model, "[a]p & [b]~[a]p", None).unwrap();
    println!("Anne knows, Bill thinks she does not: {}", after.holds);
    let one = cmd_one(&mut ws, "sleight", &[], false, None).unwrap();
    println!("sleight splits into {} steps", one.steps.len());
}
