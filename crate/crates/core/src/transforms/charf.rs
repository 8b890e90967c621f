use std::collections::{BTreeMap, BTreeSet};

use crate::bisim::{contract_over, ContractionResult};
use crate::formula::{Formula, Program};
use crate::ids::Atom;
use crate::models::EpistemicModel;

/// Characteristic formulas for every state of a model over a vocabulary.
///
/// `δ_s` holds at a finite pointed model exactly when it is bisimilar to
/// `(M, s)` over the vocabulary. The formulas share subterms, so they are
/// cheap to evaluate but can be long when printed.
#[derive(Clone, Debug)]
pub struct CharFormulas {
    contraction: ContractionResult,
    rounds: usize,
    /// `ranks[k][c]` is the rank-k description of class `c`.
    ranks: Vec<Vec<Formula>>,
    invariant: Option<Formula>,
}

impl CharFormulas {
    pub fn new(m: &EpistemicModel, atoms: &BTreeSet<Atom>) -> Self {
        let contraction = contract_over(m, Some(atoms));
        let c = &contraction.model;
        let n = c.len();
        let agents = c.agents().len();

        let literals: Vec<Formula> = (0..n)
            .map(|s| {
                Formula::conj(atoms.iter().map(|p| {
                    let atom = Formula::Atom(p.clone());
                    if c.holds(p.as_str(), s) {
                        atom
                    } else {
                        Formula::not(atom)
                    }
                }))
            })
            .collect();

        // rounds until rank descriptions separate all classes
        let mut partition = dense(literals.iter().map(ToString::to_string));
        let mut rounds = 0;
        while count(&partition) < n {
            let next = dense((0..n).map(|s| {
                let succ: Vec<BTreeSet<usize>> = (0..agents)
                    .map(|ai| c.frame().successors(ai, s).iter().map(|&t| partition[t]).collect())
                    .collect();
                (partition[s], succ)
            }));
            assert!(count(&next) > count(&partition), "contracted model must separate");
            partition = next;
            rounds += 1;
        }

        let mut ranks = vec![literals.clone()];
        for k in 0..=rounds {
            let prev = &ranks[k];
            let next = (0..n)
                .map(|s| {
                    let mut parts = vec![literals[s].clone()];
                    for (ai, agent) in c.agents().iter().enumerate() {
                        let succ = c.frame().successors(ai, s);
                        let program = Program::Agent(agent.clone());
                        for &t in succ {
                            parts.push(Formula::diamond(program.clone(), prev[t].clone()));
                        }
                        parts.push(Formula::boxed(program, Formula::disj(succ.iter().map(|&t| prev[t].clone()))));
                    }
                    Formula::conj(parts)
                })
                .collect();
            ranks.push(next);
        }

        let invariant = (agents > 0).then(|| {
            let steps = (0..n).map(|u| Formula::implies(ranks[rounds][u].clone(), ranks[rounds + 1][u].clone()));
            Formula::boxed(Program::Star(c.agents().iter().cloned().collect()), Formula::conj(steps))
        });
        CharFormulas { contraction, rounds, ranks, invariant }
    }

    /// `δ_(M, s)` for an original state `s`.
    pub fn formula(&self, s: usize) -> Formula {
        let rank = self.ranks[self.rounds][self.contraction.projection[s]].clone();
        match &self.invariant {
            Some(inv) => Formula::and(rank, inv.clone()),
            None => rank,
        }
    }

    /// Refinement rounds needed to separate the contracted states.
    pub fn rounds(&self) -> usize {
        self.rounds
    }

    pub fn contraction(&self) -> &ContractionResult {
        &self.contraction
    }
}

/// Characteristic formula of `(m, s)` over `atoms`.
pub fn char_formula(m: &EpistemicModel, s: usize, atoms: &BTreeSet<Atom>) -> Formula {
    CharFormulas::new(m, atoms).formula(s)
}

fn dense<K: Ord>(keys: impl Iterator<Item = K>) -> Vec<usize> {
    let mut ids = BTreeMap::new();
    keys.map(|k| {
        let next = ids.len();
        *ids.entry(k).or_insert(next)
    })
    .collect()
}

fn count(partition: &[usize]) -> usize {
    partition.iter().copied().max().map_or(0, |m| m + 1)
}
