use std::fs;
use std::path::Path;

use super::*;
use crate::bisim::is_isomorphic_pointed;
use crate::coin;
use crate::models::{EpistemicModel, PointedModel};

const COIN: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/workspaces/coin");

fn scratch() -> (tempfile::TempDir, Workspace) {
    let dir = tempfile::tempdir().unwrap();
    for entry in fs::read_dir(COIN).unwrap() {
        let p = entry.unwrap().path();
        fs::copy(&p, dir.path().join(p.file_name().unwrap())).unwrap();
    }
    let ws = Workspace::load(dir.path()).unwrap();
    (dir, ws)
}

#[test]
fn coin_workspace_matches_the_library_scenario() {
    let ws = Workspace::load(COIN).unwrap();
    let (m, points) = ws.model("coin").unwrap();
    assert_eq!(*m, coin::initial_model());
    assert_eq!(points, &[0]);
    for (name, built, point) in [
        ("public_look", coin::public_look(), "pe"),
        ("private_look", coin::private_look(), "pe"),
        ("sleight", coin::sleight(), "pt"),
        ("flip", coin::flip(), "n"),
    ] {
        let (u, p) = ws.update(name).unwrap();
        assert_eq!(**u, *built, "{name}");
        assert_eq!(p, &[built.event_index(point).unwrap()]);
    }
}

#[test]
fn check_reports_truth_and_counterexamples() {
    let ws = Workspace::load(COIN).unwrap();
    let o = cmd_check(&ws, "coin", "~[a]p & ~[b]p", None).unwrap();
    assert!(o.holds);
    let o = cmd_check(&ws, "coin", "false", None).unwrap();
    assert!(!o.holds);
    assert_eq!(o.counterexamples, ["s1"]);
    let o = cmd_check(&ws, "coin", "[private_look @ pe]([a]p & ~[b][a]p)", None).unwrap();
    assert!(o.holds);
    assert!(matches!(cmd_check(&ws, "coin", "p &", None), Err(CliError::Formula { .. })));
}

#[test]
fn exec_private_look_writes_the_three_state_product() {
    let (dir, mut ws) = scratch();
    let o = cmd_exec(&mut ws, "coin", "private_look", &["pe".into()], None).unwrap();
    assert_eq!(o.states, ["s1*pe", "s1*skip", "s0*skip"]);
    let expected = fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/tests/data/private_look_product.json"))
        .unwrap();
    let Doc::Model(doc) = serde_json::from_str(&expected).unwrap() else { panic!() };
    let (want, wp) = EpistemicModel::from_doc_pointed(&doc).unwrap();
    let reloaded = Workspace::load(dir.path()).unwrap();
    let got = reloaded.pointed_model(&o.model, None).unwrap();
    assert!(is_isomorphic_pointed(&got, &PointedModel::new(want, wp[0])).is_some());
    let dot = fs::read_to_string(&o.dot).unwrap();
    assert!(dot.contains("\"s1*pe\" [label=\"s1*pe\\np\", shape=doublecircle];"));
    assert!(dot.contains("\"s1*pe\" -> \"s0*skip\" [label=\"b\"];"));
}

#[test]
fn compose_output_reloads() {
    let (dir, mut ws) = scratch();
    let o = cmd_compose(&mut ws, ("public_look", &["pe".into()]), ("flip", &["n".into()]), None).unwrap();
    assert_eq!(o.update, "public_look+flip");
    assert!(o.events.contains(&"pe*n".to_string()));
    let text = fs::read_to_string(&o.file).unwrap();
    assert!(text.contains("\"updates\""), "referenced update is embedded");
    let reloaded = Workspace::load(dir.path()).unwrap();
    let (u, _) = reloaded.update("public_look+flip").unwrap();
    let (orig, _) = ws.update("public_look+flip").unwrap();
    assert_eq!(u.to_raw(&[]), orig.to_raw(&[]));
}

#[test]
fn every_command_runs_on_the_coin() {
    let (dir, mut ws) = scratch();
    let b = cmd_bisim(&ws, ("coin", "s1"), ("coin", "s0"), Some(&[])).unwrap();
    assert!(b.bisimilar);
    assert!(!cmd_bisim(&ws, ("coin", "s1"), ("coin", "s0"), None).unwrap().bisimilar);
    let c = cmd_contract(&mut ws, "coin", Some(&[]), None).unwrap();
    assert_eq!((c.states_before, c.states_after), (2, 1));
    let s = cmd_synth(&mut ws, ("coin", "s1"), ("coin", "s0"), false, Some("to_tails")).unwrap();
    assert_eq!(s.update, "to_tails");
    let t = cmd_tf(&mut ws, "flip", &[], None).unwrap();
    assert_eq!(t.update, "flip.tf");
    let one = cmd_one(&mut ws, "sleight", &[], false, None).unwrap();
    assert_eq!(one.max_assignments_per_event, 1);
    assert!(one.steps.iter().all(|p| p.exists()));
    let lit = cmd_one(&mut ws, "sleight", &[], true, Some("lit")).unwrap();
    assert!(lit.fresh_atoms.iter().any(|a| a.ends_with("q_2_0")));
    assert!(cmd_dot(&ws, "flip").unwrap().starts_with("digraph \"flip\""));
    assert!(matches!(cmd_dot(&ws, "nope"), Err(CliError::UnknownName(_))));
    // everything written so far loads back
    let reloaded = Workspace::load(dir.path()).unwrap();
    assert!(reloaded.same_contents(&ws));
}

#[test]
fn save_load_round_trip() {
    let (dir, ws) = scratch();
    ws.save_all().unwrap();
    let again = Workspace::load(dir.path()).unwrap();
    assert!(again.same_contents(&ws));
    // and the bytes are stable
    let before: Vec<_> = files(dir.path());
    again.save_all().unwrap();
    assert_eq!(before, files(dir.path()));
}

fn files(dir: &Path) -> Vec<(String, String)> {
    let mut v: Vec<_> = fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.is_file())
        .map(|p| (p.display().to_string(), fs::read_to_string(&p).unwrap()))
        .collect();
    v.sort();
    v
}

#[test]
fn load_errors_name_the_file() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("bad.json"), "{\n  \"states\": [\"s\"],\n  \"agents\": [\"a\"],,\n}").unwrap();
    let err = Workspace::load(dir.path()).unwrap_err().to_string();
    assert!(err.contains("bad.json") && err.contains("line 3"), "{err}");

    fs::write(
        dir.path().join("bad.json"),
        r#"{"agents":["a"],"events":["e"],"relations":{"a":[]},"pre":{"e":"p &"}}"#,
    )
    .unwrap();
    let err = Workspace::load(dir.path()).unwrap_err().to_string();
    assert!(err.contains("pre of e") && err.contains("column"), "{err}");

    fs::write(dir.path().join("bad.json"), r#"{"agents":["a"]}"#).unwrap();
    assert!(matches!(Workspace::load(dir.path()), Err(CliError::UnknownDocument(_))));
}

#[test]
fn mixed_agent_sets_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    fs::copy(format!("{COIN}/coin.json"), dir.path().join("coin.json")).unwrap();
    fs::write(dir.path().join("solo.json"), r#"{"agents":["a"],"states":["x"],"relations":{"a":[]}}"#).unwrap();
    assert!(matches!(Workspace::load(dir.path()), Err(CliError::AgentMismatch { .. })));
}

#[test]
fn update_references_resolve_across_files() {
    let (dir, _) = scratch();
    fs::write(
        dir.path().join("after_look.json"),
        r#"{"agents":["a","b"],"events":["e"],"relations":{"a":[["e","e"]],"b":[["e","e"]]},
            "pre":{"e":"[public_look @ pe][a]p"},"points":["e"]}"#,
    )
    .unwrap();
    let ws = Workspace::load(dir.path()).unwrap();
    let (u, _) = ws.update("after_look").unwrap();
    assert_eq!(u.pre(0).referenced_updates()[0].name(), "public_look");
}

#[test]
fn exit_codes() {
    let ws = format!("--workspace={COIN}");
    assert_eq!(main_with(["ontic", &ws, "check", "coin", "~[a]p & ~[b]p"]), 0);
    assert_eq!(main_with(["ontic", &ws, "check", "coin", "false"]), 1);
    assert_eq!(main_with(["ontic", &ws, "check", "nope", "true"]), 2);
    assert_eq!(main_with(["ontic", &ws, "frobnicate"]), 2);
}
