//! Bisimulation: maximal bisimulations between models, contraction and
//! isomorphism.
//!
//! Everything is parameterized by a comparison vocabulary `Q`; `None` means
//! the atoms mapped by either model.

mod iso;

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::ids::Atom;
use crate::models::{EpistemicModel, PointedModel};

pub use iso::{is_isomorphic, is_isomorphic_pointed};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BisimError {
    #[error("agent sets differ: {left:?} vs {right:?}")]
    AgentMismatch { left: Vec<String>, right: Vec<String> },
}

fn check_agents(m1: &EpistemicModel, m2: &EpistemicModel) -> Result<(), BisimError> {
    if m1.agents() == m2.agents() {
        return Ok(());
    }
    Err(BisimError::AgentMismatch {
        left: m1.agents().iter().map(ToString::to_string).collect(),
        right: m2.agents().iter().map(ToString::to_string).collect(),
    })
}

/// Pairs `(s, t)` with `s` a state of the left model and `t` of the right.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct BisimRelation {
    pairs: BTreeSet<(usize, usize)>,
}

impl BisimRelation {
    pub fn from_pairs(pairs: impl IntoIterator<Item = (usize, usize)>) -> Self {
        BisimRelation { pairs: pairs.into_iter().collect() }
    }

    pub fn pairs(&self) -> &BTreeSet<(usize, usize)> {
        &self.pairs
    }

    pub fn contains(&self, s: usize, t: usize) -> bool {
        self.pairs.contains(&(s, t))
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn named(&self, m1: &EpistemicModel, m2: &EpistemicModel) -> Vec<(String, String)> {
        self.pairs
            .iter()
            .map(|&(s, t)| (m1.state_name(s).to_string(), m2.state_name(t).to_string()))
            .collect()
    }
}

fn vocabulary(models: &[&EpistemicModel], atoms: Option<&BTreeSet<Atom>>) -> BTreeSet<Atom> {
    match atoms {
        Some(q) => q.clone(),
        None => models.iter().flat_map(|m| m.mapped_atoms()).collect(),
    }
}

/// Coarsest stable partition of the disjoint union of `models`.
///
/// Returns one class id per state, models concatenated in order. Class ids
/// are dense and assigned in order of first occurrence.
pub(crate) fn refine(models: &[&EpistemicModel], atoms: &BTreeSet<Atom>) -> Vec<usize> {
    let offsets: Vec<usize> = models
        .iter()
        .scan(0, |acc, m| {
            let start = *acc;
            *acc += m.len();
            Some(start)
        })
        .collect();
    let nodes: Vec<(usize, usize)> = models
        .iter()
        .enumerate()
        .flat_map(|(i, m)| (0..m.len()).map(move |s| (i, s)))
        .collect();
    let agents = models.first().map_or(0, |m| m.agents().len());

    let literal = |&(i, s): &(usize, usize)| -> Vec<bool> {
        atoms.iter().map(|p| models[i].holds(p.as_str(), s)).collect()
    };
    let mut classes = densify(nodes.iter().map(literal));
    let mut count = distinct(&classes);
    loop {
        let signatures = nodes.iter().map(|&(i, s)| {
            let m = models[i];
            let succ: Vec<BTreeSet<usize>> = (0..agents)
                .map(|ai| m.frame().successors(ai, s).iter().map(|&t| classes[offsets[i] + t]).collect())
                .collect();
            (classes[offsets[i] + s], succ)
        });
        let next = densify(signatures);
        let next_count = distinct(&next);
        classes = next;
        if next_count == count {
            return classes;
        }
        count = next_count;
    }
}

fn densify<K: Ord>(keys: impl Iterator<Item = K>) -> Vec<usize> {
    let mut ids = BTreeMap::new();
    keys.map(|k| {
        let n = ids.len();
        *ids.entry(k).or_insert(n)
    })
    .collect()
}

fn distinct(classes: &[usize]) -> usize {
    classes.iter().copied().max().map_or(0, |m| m + 1)
}

/// The greatest bisimulation between `m1` and `m2` over the vocabulary, or
/// `None` when it is empty.
pub fn max_bisim(
    m1: &EpistemicModel,
    m2: &EpistemicModel,
    atoms: Option<&BTreeSet<Atom>>,
) -> Result<Option<BisimRelation>, BisimError> {
    check_agents(m1, m2)?;
    let q = vocabulary(&[m1, m2], atoms);
    let classes = refine(&[m1, m2], &q);
    let (left, right) = classes.split_at(m1.len());
    let pairs: BTreeSet<_> = (0..m1.len())
        .flat_map(|s| (0..m2.len()).filter(move |&t| left[s] == right[t]).map(move |t| (s, t)))
        .collect();
    Ok((!pairs.is_empty()).then_some(BisimRelation { pairs }))
}

/// `(M, s) ↔ (M', s')` over the vocabulary.
pub fn is_bisimilar(
    pm1: &PointedModel,
    pm2: &PointedModel,
    atoms: Option<&BTreeSet<Atom>>,
) -> Result<bool, BisimError> {
    Ok(max_bisim(&pm1.model, &pm2.model, atoms)?.is_some_and(|r| r.contains(pm1.point, pm2.point)))
}

/// Direct check of the atoms, forth and back clauses.
pub fn verify_bisimulation(
    m1: &EpistemicModel,
    m2: &EpistemicModel,
    relation: &BisimRelation,
    atoms: Option<&BTreeSet<Atom>>,
) -> bool {
    if m1.agents() != m2.agents() || relation.is_empty() {
        return false;
    }
    let q = vocabulary(&[m1, m2], atoms);
    relation.pairs.iter().all(|&(s, t)| {
        let same_atoms = q.iter().all(|p| m1.holds(p.as_str(), s) == m2.holds(p.as_str(), t));
        let linked = (0..m1.agents().len()).all(|ai| {
            let (xs, ys) = (m1.frame().successors(ai, s), m2.frame().successors(ai, t));
            let forth = xs.iter().all(|&x| ys.iter().any(|&y| relation.contains(x, y)));
            let back = ys.iter().all(|&y| xs.iter().any(|&x| relation.contains(x, y)));
            forth && back
        });
        same_atoms && linked
    })
}

/// Quotient of a model by its maximal autobisimulation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContractionResult {
    pub model: EpistemicModel,
    /// Class of every original state.
    pub projection: Vec<usize>,
}

impl ContractionResult {
    pub fn projection_names<'a>(&'a self, original: &'a EpistemicModel) -> Vec<(&'a str, &'a str)> {
        self.projection
            .iter()
            .enumerate()
            .map(|(s, &c)| (original.state_name(s), self.model.state_name(c)))
            .collect()
    }
}

/// Bisimulation contraction over all mapped atoms.
pub fn contract(m: &EpistemicModel) -> ContractionResult {
    contract_over(m, None)
}

/// Contraction over a vocabulary; the quotient keeps only those atoms.
/// Each class is named after its first member.
pub fn contract_over(m: &EpistemicModel, atoms: Option<&BTreeSet<Atom>>) -> ContractionResult {
    let q = vocabulary(&[m], atoms);
    let projection = refine(&[m], &q);
    let size = distinct(&projection);
    let mut representative = vec![usize::MAX; size];
    for (s, &c) in projection.iter().enumerate().rev() {
        representative[c] = s;
    }

    let mut frame = crate::models::Frame::empty(m.agents().iter().cloned(), size);
    for ai in 0..m.agents().len() {
        for (s, t) in m.frame().edges(ai) {
            frame.add_edge(ai, projection[s], projection[t]);
        }
    }
    let valuation = q
        .iter()
        .filter(|p| m.valuation().contains_key(*p))
        .map(|p| {
            let set = (0..size).filter(|&c| m.holds(p.as_str(), representative[c])).collect();
            (p.clone(), set)
        })
        .collect();
    let names = representative.iter().map(|&s| m.state_name(s).to_string()).collect();
    ContractionResult { model: EpistemicModel::from_parts(frame, names, valuation), projection }
}

/// True when no two distinct states are bisimilar over the vocabulary.
pub fn is_contracted(m: &EpistemicModel, atoms: Option<&BTreeSet<Atom>>) -> bool {
    let q = vocabulary(&[m], atoms);
    distinct(&refine(&[m], &q)) == m.len()
}
