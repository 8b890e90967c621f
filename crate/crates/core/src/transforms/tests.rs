use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use super::*;
use crate::bisim::{is_bisimilar, is_isomorphic, is_isomorphic_pointed};
use crate::coin;
use crate::formula::{parse_plain, Formula};
use crate::models::{mk_public_assignment, mk_skip, PointedModel, PointedUpdate, UpdateModel};
use crate::semantics::{eval, execute, product};

fn atoms(names: &[&str]) -> BTreeSet<Atom> {
    names.iter().map(|&p| Atom::from(p)).collect()
}

fn model(states: &[&str], edges: &[(&str, &str, &str)], truth: &[(&str, &[&str])]) -> EpistemicModel {
    let mut b = EpistemicModel::builder(["a", "b"]).states(states.iter().copied());
    for &(a, s, t) in edges {
        b = b.edge(a, s, t);
    }
    for &(p, ss) in truth {
        b = b.truth(p, ss.iter().copied());
    }
    b.build().unwrap()
}

/// Anne and Bill commonly know `p`.
fn common_p() -> PointedModel {
    let m = model(&["k"], &[("a", "k", "k"), ("b", "k", "k")], &[("p", &["k"])]);
    PointedModel::new(m, 0)
}

#[test]
fn relevant_atom_examples() {
    let m0 = coin::initial_model();
    assert_eq!(relevant_atoms(&[&m0]), atoms(&["p"]));
    let all_p = common_p().model;
    assert_eq!(relevant_atoms(&[&all_p]), atoms(&[]));
    let no_p = model(&["z"], &[], &[("p", &[])]);
    assert_eq!(relevant_atoms(&[&all_p, &no_p]), atoms(&["p"]));
}

#[test]
fn serial_core_examples() {
    let m0 = coin::initial_model();
    let both: BTreeSet<Agent> = ["a".into(), "b".into()].into();
    assert_eq!(serial_core(&m0, &both, 0).unwrap().states, BTreeSet::from([0, 1]));

    let lonely = model(&["x"], &[], &[]);
    let only_a: BTreeSet<Agent> = ["a".into()].into();
    assert!(matches!(serial_core(&lonely, &only_a, 0), Err(TransformError::NoSerialCore { .. })));

    let chain = model(&["s1", "s2", "s3"], &[("a", "s1", "s2"), ("a", "s2", "s2"), ("a", "s3", "s1")], &[]);
    assert_eq!(serial_core(&chain, &only_a, 0).unwrap().states, BTreeSet::from([0, 1, 2]));
    let dead_end = model(&["s1", "s2", "s3"], &[("a", "s1", "s2"), ("a", "s3", "s3")], &[]);
    assert!(serial_core(&dead_end, &only_a, 0).is_err());
    assert_eq!(serial_core(&dead_end, &only_a, 2).unwrap().states, BTreeSet::from([2]));
}

#[test]
fn char_formula_of_a_reflexive_singleton() {
    let single = common_p();
    let delta = char_formula(&single.model, 0, &atoms(&["p"]));
    let twin = model(
        &["y1", "y2"],
        &[("a", "y1", "y1"), ("a", "y1", "y2"), ("a", "y2", "y1"), ("a", "y2", "y2"), ("b", "y1", "y2"), ("b", "y2", "y1")],
        &[("p", &["y1", "y2"])],
    );
    assert!(eval(&PointedModel::new(twin, 0), &delta).unwrap());
    assert!(!eval(&coin::initial(), &delta).unwrap());
    assert!(eval(&single, &delta).unwrap());
}

#[test]
fn char_formula_separates_coin_states() {
    let m0 = coin::initial_model();
    let chars = CharFormulas::new(&m0, &atoms(&["p"]));
    assert!(eval(&PointedModel::new(m0.clone(), 0), &chars.formula(0)).unwrap());
    assert!(!eval(&PointedModel::new(m0.clone(), 1), &chars.formula(0)).unwrap());
    assert!(eval(&PointedModel::new(m0.clone(), 1), &chars.formula(1)).unwrap());
    assert_eq!(chars.rounds(), 0);
}

#[test]
fn char_formula_needs_modal_depth() {
    // x -a-> y -a-> z, all p-free: states differ only by path length
    let m = model(&["x", "y", "z"], &[("a", "x", "y"), ("a", "y", "z")], &[]);
    let chars = CharFormulas::new(&m, &atoms(&[]));
    assert_eq!(chars.rounds(), 2);
    for s in 0..3 {
        for t in 0..3 {
            let pm = PointedModel::new(m.clone(), t);
            assert_eq!(eval(&pm, &chars.formula(s)).unwrap(), s == t);
        }
    }
}

#[test]
fn synthesized_change_reaches_the_target() {
    let m0 = coin::initial();
    let u = synth_arbitrary(&m0, &common_p()).unwrap();
    assert_eq!(u.model.len(), 1);
    let after = execute(&m0, &u).unwrap();
    assert!(is_bisimilar(&after, &common_p(), None).unwrap());

    let same = execute(&m0, &synth_arbitrary(&m0, &m0).unwrap()).unwrap();
    assert!(is_bisimilar(&same, &m0, None).unwrap());
}

#[test]
fn empty_access_cannot_be_revised() {
    let crazy = PointedModel::new(model(&["x"], &[("b", "x", "x")], &[]), 0);
    let err = synth_arbitrary(&crazy, &coin::initial()).unwrap_err();
    assert!(matches!(err, TransformError::NoSerialCore { .. }));
}

#[test]
fn isomorphic_variant() {
    let m0 = coin::initial();
    let target = PointedModel::new(
        model(&["u", "v"], &[("a", "u", "v"), ("b", "v", "v"), ("b", "u", "u")], &[("p", &["v"]), ("q", &["u"])]),
        0,
    );
    let u = synth_isomorphic(&m0, &target).unwrap();
    let after = execute(&m0, &u).unwrap();
    assert!(is_isomorphic_pointed(&after, &target).is_some());

    let back = execute(&m0, &synth_isomorphic(&m0, &m0).unwrap()).unwrap();
    assert!(is_isomorphic(&back.model, &m0.model).is_some());

    let loose = PointedModel::new(
        model(&["s", "t"], &[("a", "s", "s"), ("a", "t", "t"), ("b", "s", "s"), ("b", "t", "t")], &[]),
        0,
    );
    assert_eq!(synth_isomorphic(&loose, &target).unwrap_err(), TransformError::NotContracted);
    let unreflexive = PointedModel::new(model(&["s"], &[("a", "s", "s")], &[]), 0);
    assert!(matches!(synth_isomorphic(&unreflexive, &target), Err(TransformError::PointNotReflexive { .. })));
}

#[test]
fn realize_common_knowledge() {
    let m0 = coin::initial();
    let f = parse_plain("[*{a,b}]p").unwrap();
    let u = realize(&m0, &f, &common_p()).unwrap();
    assert!(eval(&m0, &Formula::diamond(crate::formula::Program::Update(u), f.clone())).unwrap());

    let u = realize(&m0, &Formula::Top, &common_p()).unwrap();
    assert!(eval(&m0, &Formula::diamond(crate::formula::Program::Update(u), Formula::Top)).unwrap());
    assert_eq!(realize(&m0, &Formula::Bottom, &common_p()).unwrap_err(), TransformError::WitnessFails);
}

fn assignment(pairs: &[(&str, &str)]) -> PointedUpdate {
    let sigma: BTreeMap<Atom, Formula> =
        pairs.iter().map(|&(p, v)| (Atom::from(p), parse_plain(v).unwrap())).collect();
    mk_public_assignment(coin::initial_model().agents(), sigma)
}

#[test]
fn tf_of_public_assignments() {
    let one = normalize_tf(&assignment(&[("p", "~p")]));
    assert_eq!(one.model.events(), ["asg.p0", "asg.p1"]);
    assert_eq!(one.points.len(), 2);
    assert_eq!(one.model.pre(1), &Formula::and(Formula::Top, parse_plain("~p").unwrap()));
    assert_eq!(one.model.post(1)[&Atom::from("p")], Formula::Top);
    assert_eq!(one.model.post(0)[&Atom::from("p")], Formula::Bottom);

    let two = normalize_tf(&assignment(&[("p", "~p"), ("q", "p")]));
    assert_eq!(two.model.len(), 4);
    assert_eq!(two.model.frame().edge_count(0), 16);

    let skip = Arc::new(mk_skip(coin::initial_model().agents()));
    let same = normalize_tf(&PointedUpdate::single(skip.clone(), 0));
    assert_eq!(same.model.events(), ["skip"]);
    assert_eq!(same.model.pre(0), skip.pre(0));
}

#[test]
fn tf_preserves_the_product() {
    let m0 = coin::initial_model();
    for u in [coin::public_look(), coin::sleight(), coin::flip()] {
        let tf = normalize_tf(&u.at_all());
        let left = product(&m0, &u).unwrap().model;
        let right = product(&m0, &tf.model).unwrap().model;
        let r = crate::bisim::max_bisim(&left, &right, None).unwrap().unwrap();
        for s in 0..left.len() {
            assert!((0..right.len()).any(|t| r.contains(s, t)));
        }
    }
}

/// Two events, two atoms each; Bill cannot tell them apart.
fn two_by_two() -> PointedUpdate {
    let p = |s: &str| parse_plain(s).unwrap();
    let u = UpdateModel::builder("W", ["a", "b"])
        .event("e", p("p"))
        .event("f", p("~p"))
        .assign("e", "p", p("q"))
        .assign("e", "q", p("~q"))
        .assign("f", "p", p("true"))
        .assign("f", "q", p("p | q"))
        .reflexive("a")
        .universal("b")
        .build()
        .unwrap();
    Arc::new(u).at("e").unwrap()
}

#[test]
fn worked_decomposition_has_the_expected_shape() {
    let u = two_by_two();
    let seq = decompose_single(&u, OneVariant::Literal).unwrap();
    // 6 stores, middle, 4 conditional copies
    assert_eq!(seq.steps.len(), 11);
    assert_eq!(seq.fresh_atoms.len(), 6);
    assert_eq!(seq.max_assignments_per_event(), 1);
    assert_eq!(seq.steps[6].model.name(), "W.middle");
    assert_eq!(seq.steps[7].model.pre(0), &Formula::atom("__aux_q_0_0"));
    assert_eq!(seq.steps[7].model.post(0)[&Atom::from("p")], Formula::atom("__aux_q_0_1"));

    let marked = decompose_single(&u, OneVariant::Marker).unwrap();
    assert_eq!(marked.steps.len(), 4 + 2 + 1 + 4);
    assert_eq!(marked.max_assignments_per_event(), 1);
}

#[test]
fn decomposition_matches_the_product() {
    let m = model(
        &["s1", "s0", "t"],
        &[("a", "s1", "s0"), ("b", "s0", "t"), ("b", "t", "s1"), ("a", "t", "t")],
        &[("p", &["s1", "t"]), ("q", &["t"])],
    );
    let u = two_by_two();
    let expected = product(&m, &u.model).unwrap().model;
    for variant in [OneVariant::Marker, OneVariant::Literal] {
        let seq = decompose_single(&u, variant).unwrap();
        let got = seq.run_model(&m).unwrap().restrict_valuation(&expected.mapped_atoms());
        assert!(is_isomorphic(&got, &expected).is_some(), "{variant:?}");

        let composed = seq.composed().unwrap();
        let once = product(&m, &composed.model).unwrap().model.restrict_valuation(&expected.mapped_atoms());
        assert!(is_isomorphic(&once, &expected).is_some(), "{variant:?} composed");
    }
}

#[test]
fn literal_reading_misfires_on_overlapping_events() {
    // both events can happen everywhere, with different assignments
    let u = UpdateModel::builder("O", ["a", "b"])
        .event("e", Formula::Top)
        .event("f", Formula::Top)
        .assign("e", "p", Formula::Top)
        .assign("f", "p", Formula::Bottom)
        .universal("a")
        .universal("b")
        .build()
        .unwrap();
    let u = Arc::new(u).at("e").unwrap();
    let m = coin::initial_model();
    let expected = product(&m, &u.model).unwrap().model;
    let vocab = expected.mapped_atoms();
    let marked = decompose_single(&u, OneVariant::Marker).unwrap().run_model(&m).unwrap();
    assert!(is_isomorphic(&marked.restrict_valuation(&vocab), &expected).is_some());
    let literal = decompose_single(&u, OneVariant::Literal).unwrap().run_model(&m).unwrap();
    assert!(is_isomorphic(&literal.restrict_valuation(&vocab), &expected).is_none());
}

#[test]
fn fresh_atom_collision() {
    let u = assignment(&[("__aux_q_0_1", "p")]);
    assert!(matches!(decompose_single(&u, OneVariant::Marker), Err(TransformError::FreshAtomCollision(_))));
    let seq = decompose_single(&assignment(&[("p", "~p")]), OneVariant::Marker).unwrap();
    let m = model(&["x"], &[], &[("__aux_m_0", &["x"])]);
    assert!(matches!(seq.run_model(&m), Err(TransformError::FreshAtomCollision(_))));
}

#[test]
fn skip_decomposes_to_itself() {
    let skip = Arc::new(mk_skip(coin::initial_model().agents()));
    let seq = decompose_single(&PointedUpdate::single(skip, 0), OneVariant::Marker).unwrap();
    let m0 = coin::initial();
    let runs = seq.run_pointed(&m0).unwrap();
    assert_eq!(runs.len(), 1);
    let got = PointedModel::new(runs[0].model.restrict_valuation(&atoms(&["p"])), runs[0].point);
    assert!(is_isomorphic_pointed(&got, &m0).is_some());
}
