//! Acceptance suite: ten criteria, each with a case count and a time limit.
//! Prints one PASS/FAIL line per criterion and exits non-zero if any fails.

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ontic::bisim::{
    contract, is_bisimilar, is_isomorphic, is_isomorphic_pointed, max_bisim, verify_bisimulation, BisimRelation,
};
use ontic::cli::{Doc, Workspace};
use ontic::formula::{parse_plain, Formula, Program};
use ontic::ids::Atom;
use ontic::lab::{
    brute_max_bisim, check_axiom, twin_pool, twin_search, AxiomId, FrameClass, GenParams, Generator, BRUTE_LIMIT,
};
use ontic::models::{EpistemicModel, PointedModel, PointedUpdate, UpdateModel};
use ontic::semantics::{compose, eval, execute, execute_all, extension, product};
use ontic::transforms::{
    decompose_single, normalize_tf, relevant_atoms, synth_arbitrary, synth_isomorphic, CharFormulas, OneVariant,
    TransformError,
};

const SEED: u64 = 20240601;

type Outcome = Result<String, String>;

/// Label, description, time limit in seconds, check.
type Criterion = (&'static str, &'static str, u64, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn params() -> GenParams {
    GenParams::default().with_seed(SEED)
}

fn c1_coin() -> Outcome {
    let ws = Workspace::load(concat!(env!("CARGO_MANIFEST_DIR"), "/workspaces/coin")).map_err(|e| e.to_string())?;
    let start = ws.pointed_model("coin", None).map_err(|e| e.to_string())?;
    let run = |name: &str| -> Result<PointedModel, String> {
        let pu = ws.pointed_update(name, &[]).map_err(|e| e.to_string())?;
        execute(&start, &pu).map_err(|e| e.to_string())
    };

    let public = run("public_look")?;
    let m = &public.model;
    ensure(m.len() == 2, || format!("public look: {} states", m.len()))?;
    let (a, b) = (m.frame().agent_index("a").unwrap(), m.frame().agent_index("b").unwrap());
    let identity: Vec<_> = m.frame().edges(a).collect();
    ensure(identity == [(0, 0), (1, 1)], || format!("public look a-edges {identity:?}"))?;
    ensure(m.frame().edge_count(b) == 4, || "public look b not universal".into())?;

    let private = run("private_look")?;
    let text = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/tests/data/private_look_product.json"))
        .map_err(|e| e.to_string())?;
    let Doc::Model(doc) = serde_json::from_str(&text).map_err(|e| e.to_string())? else {
        return Err("expected file is not a model".into());
    };
    let (want, points) = EpistemicModel::from_doc_pointed(&doc).map_err(|e| e.to_string())?;
    let want = PointedModel::new(want, points[0]);
    ensure(private.model.len() == 3, || format!("private look: {} states", private.model.len()))?;
    ensure(is_isomorphic_pointed(&private, &want).is_some(), || "private look differs from expected file".into())?;

    let not_p = parse_plain("~p").unwrap();
    for name in ["sleight", "flip"] {
        let out = run(name)?;
        ensure(eval(&out, &not_p).unwrap(), || format!("{name}: p still holds"))?;
    }
    Ok("public 2 states, private 3 states isomorphic to the expected file, sleight and flip give ~p".into())
}

fn c2_composition() -> Outcome {
    let p = GenParams { max_states: 5, max_events: 3, max_formula_depth: 3, ..params() };
    let (mut formula_ok, mut product_ok) = (0, 0);
    for trial in 0..500 {
        let mut g = Generator::for_trial(p.clone(), trial);
        let (pm, u) = g.gen_executable_pair();
        let u2 = g.gen_update();
        let phi = g.gen_formula(&[u.clone(), u2.clone()]);
        let joined = compose(&u, &u2).map_err(|e| e.to_string())?;
        let nested = Formula::after(u.clone(), Formula::after(u2.clone(), phi.clone()));
        let once = Formula::after(joined.clone(), phi.clone());
        let (l, r) = (extension(&pm.model, &nested).unwrap(), extension(&pm.model, &once).unwrap());
        ensure(l == r, || format!("trial {trial}: formula level differs for {phi}"))?;
        formula_ok += 1;

        let first = product(&pm.model, &u.model).unwrap().model;
        match (product(&first, &u2.model), product(&pm.model, &joined.model)) {
            (Ok(x), Ok(y)) => ensure(is_isomorphic(&x.model, &y.model).is_some(), || {
                format!("trial {trial}: products not isomorphic")
            })?,
            (Err(_), Err(_)) => {}
            _ => return Err(format!("trial {trial}: exactly one product is empty")),
        }
        product_ok += 1;
    }
    Ok(format!("{formula_ok}/500 formula-level, {product_ok}/500 product-level"))
}

fn c3_tf() -> Outcome {
    let mut ok = 0;
    for trial in 0..300 {
        let mut g = Generator::for_trial(params(), trial);
        let (pm, u) = g.gen_executable_pair();
        let all = u.model.at_all();
        let tf = normalize_tf(&all);
        for e in 0..tf.model.len() {
            ensure(tf.model.post(e).values().all(|v| matches!(v, Formula::Top | Formula::Bottom)), || {
                format!("trial {trial}: non-constant assignment in {}", tf.model.event_name(e))
            })?;
        }
        let a = product(&pm.model, &u.model).unwrap().model;
        let b = product(&pm.model, &tf.model).unwrap().model;
        let q: BTreeSet<Atom> = a.mapped_atoms().into_iter().chain(b.mapped_atoms()).collect();
        let r = max_bisim(&a, &b, Some(&q)).unwrap().unwrap_or_else(|| BisimRelation::from_pairs([]));
        let total = (0..a.len()).all(|s| (0..b.len()).any(|t| r.contains(s, t)))
            && (0..b.len()).all(|t| (0..a.len()).any(|s| r.contains(s, t)));
        ensure(total, || format!("trial {trial}: products not bisimilar"))?;
        // and pointwise from the actual state
        let (x, y) = (execute_all(&pm, &u).unwrap(), execute_all(&pm, &normalize_tf(&u)).unwrap());
        ensure(x.len() == 1 && y.len() == 1 && is_bisimilar(&x[0], &y[0], Some(&q)).unwrap(), || {
            format!("trial {trial}: pointed results differ")
        })?;
        ok += 1;
    }
    Ok(format!("{ok}/300 bisimilar, all assignments constant"))
}

/// `pre'_i = pre_i ∧ ⋀_{j<i} ¬pre_j`, so no two events are jointly executable.
fn exclusive(u: &PointedUpdate) -> PointedUpdate {
    let mut raw = u.model.to_raw(&u.points.iter().copied().collect::<Vec<_>>());
    let pres: Vec<Formula> = raw.events.iter().map(|e| raw.pre[e].clone()).collect();
    for (i, e) in raw.events.clone().iter().enumerate() {
        let earlier = pres[..i].iter().map(|f| Formula::not(f.clone()));
        raw.pre.insert(e.clone(), Formula::conj(std::iter::once(pres[i].clone()).chain(earlier)));
    }
    let (m, points) = UpdateModel::from_raw(&raw).unwrap();
    PointedUpdate::new(std::sync::Arc::new(m), points.into_iter().collect()).unwrap()
}

fn one_case(pm: &PointedModel, u: &PointedUpdate, variant: OneVariant) -> Result<bool, String> {
    let seq = decompose_single(u, variant).map_err(|e| e.to_string())?;
    if seq.max_assignments_per_event() > 1 {
        return Err("a step assigns two atoms in one event".into());
    }
    let original: BTreeSet<Atom> = pm.model.mapped_atoms().into_iter().chain(u.model.assigned_atoms()).collect();
    let direct = match product(&pm.model, &u.model) {
        Ok(p) => p.model.restrict_valuation(&original),
        Err(e) => return Err(e.to_string()),
    };
    let run = seq.run_model(&pm.model).map_err(|e| e.to_string())?.restrict_valuation(&original);
    Ok(is_isomorphic(&run, &direct).is_some())
}

fn c4_one() -> Outcome {
    let mut marker = 0;
    for trial in 0..300 {
        let mut g = Generator::for_trial(params(), trial);
        let (pm, u) = g.gen_executable_pair();
        ensure(one_case(&pm, &u, OneVariant::Marker)?, || format!("trial {trial}: marker variant differs"))?;
        marker += 1;
    }
    let mut literal = 0;
    for trial in 0..100 {
        let mut g = Generator::for_trial(params().with_seed(SEED + 1), trial);
        let (pm, u) = g.gen_executable_pair();
        let u = exclusive(&u);
        ensure(one_case(&pm, &u, OneVariant::Literal)?, || format!("trial {trial}: literal variant differs"))?;
        ensure(one_case(&pm, &u, OneVariant::Marker)?, || format!("trial {trial}: marker differs on exclusive"))?;
        literal += 1;
    }
    Ok(format!("{marker}/300 marker, {literal}/100 exclusive-precondition cases in both variants"))
}

fn c5_change() -> Outcome {
    let (mut ok, mut rejected) = (0, 0);
    let mut trial = 0;
    while ok < 200 {
        let mut g = Generator::for_trial(params(), trial);
        trial += 1;
        let src = g.gen_model();
        let dst = g.gen_model();
        let pu = match synth_arbitrary(&src, &dst) {
            Ok(pu) => pu,
            Err(TransformError::NoSerialCore { .. }) => {
                rejected += 1;
                continue;
            }
            Err(e) => return Err(e.to_string()),
        };
        let q = relevant_atoms(&[&src.model, &dst.model]);
        let out = execute(&src, &pu).map_err(|e| format!("trial {}: {e}", trial - 1))?;
        ensure(is_bisimilar(&out, &dst, Some(&q)).unwrap(), || format!("trial {}: not bisimilar", trial - 1))?;
        ok += 1;
    }
    let mut exact = 0;
    for t in 0..50 {
        let mut g = Generator::for_trial(params().with_seed(SEED + 5), t);
        let raw = g.gen_model_with(FrameClass::Reflexive);
        let c = contract(&raw.model);
        let src = PointedModel::new(c.model, c.projection[raw.point]);
        let dst = g.gen_model();
        let pu = synth_isomorphic(&src, &dst).map_err(|e| format!("case {t}: {e}"))?;
        let out = product(&src.model, &pu.model).map_err(|e| e.to_string())?.model;
        let q = relevant_atoms(&[&src.model, &dst.model]);
        let (x, y) = (out.restrict_valuation(&q), dst.model.restrict_valuation(&q));
        ensure(is_isomorphic(&x, &y).is_some(), || format!("case {t}: product not isomorphic to target"))?;
        let pointed = execute(&src, &pu).unwrap();
        ensure(is_isomorphic_pointed(&pointed, &dst).is_some(), || format!("case {t}: pointed result differs"))?;
        exact += 1;
    }
    Ok(format!("{ok}/200 bisimilar ({rejected} sources without a serial core skipped), {exact}/50 isomorphic"))
}

fn c6_realize() -> Outcome {
    let mut ok = 0;
    let mut trial = 0;
    while ok < 100 {
        let mut g = Generator::for_trial(params().with_seed(SEED + 6), trial);
        trial += 1;
        let pm = g.gen_model();
        let witness = g.gen_model();
        let mut phi = g.gen_formula(&[]);
        if !eval(&witness, &phi).unwrap() {
            phi = Formula::not(phi);
        }
        let pu = match ontic::transforms::realize(&pm, &phi, &witness) {
            Ok(pu) => pu,
            Err(TransformError::NoSerialCore { .. }) => continue,
            Err(e) => return Err(e.to_string()),
        };
        let holds = eval(&pm, &Formula::diamond(Program::Update(pu), phi.clone())).unwrap();
        ensure(holds, || format!("trial {}: <U>{phi} fails", trial - 1))?;
        ok += 1;
    }
    Ok(format!("{ok}/100 realized ({} draws)", trial))
}

fn c7_axioms() -> Outcome {
    let mut lines = Vec::new();
    for id in AxiomId::SOUND {
        let r = check_axiom(id, 300, &params());
        ensure(r.failure_count == 0, || format!("{id}: {} failures, first {:?}", r.failure_count, r.failures.first()))?;
    }
    for id in AxiomId::MUTANTS {
        let r = check_axiom(id, 300, &params());
        ensure(r.failure_count > 0, || format!("{id} survived 300 trials"))?;
        let first = r.failures[0].trial;
        lines.push(format!("{} @{first}", id.name().trim_start_matches("mutant-")));
    }
    Ok(format!("8 schemes x 300 trials clean; mutants caught: {}", lines.join(", ")))
}

fn c8_bisim() -> Outcome {
    let p = GenParams { max_states: 4, ..params() };
    let mut g = Generator::new(p);
    let mut pairs = 0;
    while pairs < 200 {
        let (a, b) = (g.gen_model().model, g.gen_model().model);
        if a.len() * b.len() > BRUTE_LIMIT {
            continue;
        }
        let fast = max_bisim(&a, &b, None).unwrap().map(|r| r.pairs().clone());
        let slow = brute_max_bisim(&a, &b, None).unwrap().map(|r| r.pairs().clone());
        ensure(fast == slow, || format!("pair {pairs}: refinement and brute force differ"))?;
        pairs += 1;
    }
    for i in 0..200 {
        let m = g.gen_model().model;
        let c = contract(&m);
        let graph = BisimRelation::from_pairs(c.projection.iter().copied().enumerate());
        ensure(verify_bisimulation(&m, &c.model, &graph, None), || format!("model {i}: projection not a bisimulation"))?;
        ensure(is_isomorphic(&contract(&c.model).model, &c.model).is_some(), || format!("model {i}: not idempotent"))?;
    }
    Ok("200/200 pairs agree with brute force, 200/200 contractions bisimilar and idempotent".into())
}

fn c9_char() -> Outcome {
    let mut g = Generator::new(params().with_seed(SEED + 9));
    let mut corpus: Vec<EpistemicModel> = Vec::new();
    while corpus.len() < 200 {
        let pm = g.gen_model();
        let variant = g.bisimilar_variant(&pm);
        corpus.push(pm.model);
        corpus.push(variant.model);
    }
    let q: BTreeSet<Atom> = g.atoms().iter().cloned().collect();
    let chars: Vec<CharFormulas> = corpus.iter().map(|m| CharFormulas::new(m, &q)).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let (mut agree, mut positive) = (0, 0);
    for k in 0..1000 {
        let i = rng.gen_range(0..corpus.len());
        // half the time compare against the model's own bisimilar partner
        let j = if rng.gen_bool(0.5) { i ^ 1 } else { rng.gen_range(0..corpus.len()) };
        let s = rng.gen_range(0..corpus[i].len());
        let t = rng.gen_range(0..corpus[j].len());
        let target = PointedModel::new(corpus[j].clone(), t);
        let truth = eval(&target, &chars[i].formula(s)).unwrap();
        let bisimilar = is_bisimilar(&PointedModel::new(corpus[i].clone(), s), &target, Some(&q)).unwrap();
        ensure(truth == bisimilar, || format!("sample {k}: formula {truth}, bisimilar {bisimilar}"))?;
        agree += 1;
        positive += usize::from(bisimilar);
    }
    Ok(format!("{agree}/1000 agree ({positive} bisimilar pairs)"))
}

fn c10_twin() -> Outcome {
    let r = twin_search(3, &twin_pool());
    match r.found {
        None => Ok(format!("{} sequences of length <= 3, none reach the twin", r.sequences_checked)),
        Some(path) => Err(format!("reached the twin via {}", path.join("; "))),
    }
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("C1", "coin golden suite", 1, c1_coin),
        ("C2", "composition", 60, c2_composition),
        ("C3", "TF normalization", 60, c3_tf),
        ("C4", "single-assignment decomposition", 120, c4_one),
        ("C5", "arbitrary change", 120, c5_change),
        ("C6", "realization", 60, c6_realize),
        ("C7", "axiom soundness", 120, c7_axioms),
        ("C8", "bisimulation oracle", 60, c8_bisim),
        ("C9", "characteristic formulas", 120, c9_char),
        ("C10", "bounded negative check", 60, c10_twin),
    ];
    let mut failed = 0;
    for (id, name, limit, run) in criteria {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        let elapsed = start.elapsed();
        let in_time = elapsed <= Duration::from_secs(limit);
        let (verdict, detail) = match (&result, in_time) {
            (Ok(d), true) => ("PASS", d.clone()),
            (Ok(d), false) => ("FAIL", format!("over time limit; {d}")),
            (Err(e), _) => ("FAIL", e.clone()),
        };
        if verdict == "FAIL" {
            failed += 1;
        }
        println!("{verdict} {id:<3} {name} ({:.2}s, limit {limit}s): {detail}", elapsed.as_secs_f64());
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
