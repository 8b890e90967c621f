use std::fmt;
use std::str::FromStr;

use rand::seq::IteratorRandom;
use rand::Rng;
use serde::Serialize;

use super::{GenParams, Generator, LabError};
use crate::formula::{Formula, Program};
use crate::ids::{Agent, Atom};
use crate::models::{ModelDoc, PointedUpdate};
use crate::semantics::{compose, extension};

/// Axiom schemes of the proof system, plus deliberately broken variants
/// used to show that the harness can find counterexamples.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AxiomId {
    Distribution,
    UpdateAtoms,
    UpdateNegation,
    UpdateConjunction,
    UpdateKnowledge,
    UpdateComposition,
    Mix,
    Induction,
    /// `[U,e]p ↔ (pre(e) → p)`
    AtomicPermanence,
    /// `[U,e]¬φ ↔ ¬[U,e]φ`
    NegationWithoutPre,
    /// `[U,e][a]φ ↔ ⋀ [a][U,f]φ`
    KnowledgeWithoutPre,
    /// `[U,e][U',e']φ ↔ [(U',e');(U,e)]φ`
    CompositionSwapped,
    /// `[B*]φ ↔ [B]φ`
    StarIsBox,
}

impl AxiomId {
    pub const SOUND: [AxiomId; 8] = [
        AxiomId::Distribution,
        AxiomId::UpdateAtoms,
        AxiomId::UpdateNegation,
        AxiomId::UpdateConjunction,
        AxiomId::UpdateKnowledge,
        AxiomId::UpdateComposition,
        AxiomId::Mix,
        AxiomId::Induction,
    ];

    pub const MUTANTS: [AxiomId; 5] = [
        AxiomId::AtomicPermanence,
        AxiomId::NegationWithoutPre,
        AxiomId::KnowledgeWithoutPre,
        AxiomId::CompositionSwapped,
        AxiomId::StarIsBox,
    ];

    pub fn all() -> impl Iterator<Item = AxiomId> {
        Self::SOUND.into_iter().chain(Self::MUTANTS)
    }

    pub fn name(self) -> &'static str {
        match self {
            AxiomId::Distribution => "distribution",
            AxiomId::UpdateAtoms => "update-atoms",
            AxiomId::UpdateNegation => "update-negation",
            AxiomId::UpdateConjunction => "update-conjunction",
            AxiomId::UpdateKnowledge => "update-knowledge",
            AxiomId::UpdateComposition => "update-composition",
            AxiomId::Mix => "mix",
            AxiomId::Induction => "induction",
            AxiomId::AtomicPermanence => "mutant-atomic-permanence",
            AxiomId::NegationWithoutPre => "mutant-negation-without-pre",
            AxiomId::KnowledgeWithoutPre => "mutant-knowledge-without-pre",
            AxiomId::CompositionSwapped => "mutant-composition-swapped",
            AxiomId::StarIsBox => "mutant-star-is-box",
        }
    }

    pub fn is_sound(self) -> bool {
        Self::SOUND.contains(&self)
    }
}

impl fmt::Display for AxiomId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for AxiomId {
    type Err = LabError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        AxiomId::all().find(|id| id.name() == s).ok_or_else(|| LabError::UnknownAxiom(s.to_string()))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AxiomFailure {
    pub trial: u64,
    pub model: ModelDoc,
    pub state: String,
    pub instance: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AxiomReport {
    pub axiom: String,
    pub seed: u64,
    pub trials: u64,
    /// (trial, state) evaluations.
    pub instances_checked: usize,
    pub failure_count: usize,
    /// The first few failures, enough to reproduce.
    pub failures: Vec<AxiomFailure>,
}

const KEPT_FAILURES: usize = 10;

/// Everything one scheme instance may need.
struct Ingredients {
    u: PointedUpdate,
    u2: PointedUpdate,
    phi: Formula,
    psi: Formula,
    agent: Agent,
    group: Vec<Agent>,
    atom: Atom,
    program: Program,
}

fn ingredients(gen: &mut Generator) -> (crate::models::PointedModel, Ingredients) {
    let (pm, u) = gen.gen_executable_pair();
    let u2 = gen.gen_update();
    let pool = [u.clone(), u2.clone()];
    let phi = gen.gen_formula(&pool);
    let psi = gen.gen_formula(&pool);
    let agent = gen.gen_agent();
    let group: Vec<Agent> = gen.gen_group().into_iter().collect();
    let e = u.single_point().expect("generated updates are single-pointed");
    let assigned = u.model.post(e).keys().cloned().choose(gen.rng());
    let atom = match assigned {
        Some(p) if gen.rng().gen_bool(0.8) => p,
        _ => {
            let atoms = gen.atoms().to_vec();
            atoms.into_iter().choose(gen.rng()).expect("atom pool")
        }
    };
    let program = match gen.rng().gen_range(0..3) {
        0 => Program::Agent(agent.clone()),
        1 => Program::Star(group.iter().cloned().collect()),
        _ => Program::Update(u.clone()),
    };
    (pm, Ingredients { u, u2, phi, psi, agent, group, atom, program })
}

fn instance(id: AxiomId, x: &Ingredients) -> Formula {
    let e = x.u.single_point().expect("single point");
    let after = |f: Formula| Formula::after(x.u.clone(), f);
    let pre = x.u.model.pre(e).clone();
    let star = |f: Formula| Formula::boxed(Program::Star(x.group.iter().cloned().collect()), f);
    let everyone = |f: &Formula| Formula::everyone(x.group.iter(), f);
    let knows = |f: Formula| Formula::boxed(Program::Agent(x.agent.clone()), f);
    let successors = || {
        let ai = x.u.model.frame().agent_index(x.agent.as_str()).expect("agent of the update");
        let f = x.u.model.frame().successors(ai, e).to_vec();
        Formula::conj(f.into_iter().map(|f| {
            knows(Formula::after(PointedUpdate::single(x.u.model.clone(), f), x.phi.clone()))
        }))
    };
    let (phi, psi) = (x.phi.clone(), x.psi.clone());
    match id {
        AxiomId::Distribution => {
            let b = |f: Formula| Formula::boxed(x.program.clone(), f);
            Formula::implies(
                b(Formula::implies(phi.clone(), psi.clone())),
                Formula::implies(b(phi), b(psi)),
            )
        }
        AxiomId::UpdateAtoms => Formula::iff(
            after(Formula::Atom(x.atom.clone())),
            Formula::implies(pre, x.u.model.post_value(e, &x.atom)),
        ),
        AxiomId::UpdateNegation => {
            Formula::iff(after(Formula::not(phi.clone())), Formula::implies(pre, Formula::not(after(phi))))
        }
        AxiomId::UpdateConjunction => {
            Formula::iff(after(Formula::and(phi.clone(), psi.clone())), Formula::and(after(phi), after(psi)))
        }
        AxiomId::UpdateKnowledge => Formula::iff(after(knows(phi)), Formula::implies(pre, successors())),
        AxiomId::UpdateComposition => {
            let joined = compose(&x.u, &x.u2).expect("same agents");
            Formula::iff(after(Formula::after(x.u2.clone(), phi.clone())), Formula::after(joined, phi))
        }
        AxiomId::Mix => Formula::implies(
            star(phi.clone()),
            Formula::and(phi.clone(), everyone(&star(phi))),
        ),
        AxiomId::Induction => Formula::implies(
            star(Formula::implies(phi.clone(), everyone(&phi))),
            Formula::implies(phi.clone(), star(phi)),
        ),
        AxiomId::AtomicPermanence => {
            Formula::iff(after(Formula::Atom(x.atom.clone())), Formula::implies(pre, Formula::Atom(x.atom.clone())))
        }
        AxiomId::NegationWithoutPre => Formula::iff(after(Formula::not(phi.clone())), Formula::not(after(phi))),
        AxiomId::KnowledgeWithoutPre => Formula::iff(after(knows(phi)), successors()),
        AxiomId::CompositionSwapped => {
            let joined = compose(&x.u2, &x.u).expect("same agents");
            Formula::iff(after(Formula::after(x.u2.clone(), phi.clone())), Formula::after(joined, phi))
        }
        AxiomId::StarIsBox => Formula::iff(star(phi.clone()), everyone(&phi)),
    }
}

/// Instantiates the scheme once per trial with generated ingredients and
/// evaluates the instance at every state of the generated model. Trial `i`
/// uses stream `i` of `params.seed`.
pub fn check_axiom(id: AxiomId, trials: u64, params: &GenParams) -> AxiomReport {
    let mut report = AxiomReport {
        axiom: id.name().to_string(),
        seed: params.seed,
        trials,
        instances_checked: 0,
        failure_count: 0,
        failures: Vec::new(),
    };
    for trial in 0..trials {
        let mut gen = Generator::for_trial(params.clone(), trial);
        let (pm, x) = ingredients(&mut gen);
        let f = instance(id, &x);
        let values = extension(&pm.model, &f).expect("generated instances are well formed");
        report.instances_checked += values.len();
        for (s, ok) in values.into_iter().enumerate() {
            if ok {
                continue;
            }
            report.failure_count += 1;
            if report.failures.len() < KEPT_FAILURES {
                report.failures.push(AxiomFailure {
                    trial,
                    model: pm.model.to_doc(&[]),
                    state: pm.model.state_name(s).to_string(),
                    instance: f.to_string(),
                });
            }
        }
    }
    report
}
