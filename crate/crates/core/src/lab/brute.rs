use std::collections::BTreeSet;

use super::LabError;
use crate::bisim::BisimRelation;
use crate::ids::Atom;
use crate::models::EpistemicModel;

/// Largest `|S1|·|S2|` the exhaustive oracle accepts.
pub const BRUTE_LIMIT: usize = 16;

/// Union of every bisimulation between `m1` and `m2`, found by checking
/// each subset of the atom-agreeing pairs against forth and back.
pub fn brute_max_bisim(
    m1: &EpistemicModel,
    m2: &EpistemicModel,
    atoms: Option<&BTreeSet<Atom>>,
) -> Result<Option<BisimRelation>, LabError> {
    let size = m1.len() * m2.len();
    if size > BRUTE_LIMIT {
        return Err(LabError::TooLarge { size, limit: BRUTE_LIMIT });
    }
    if m1.agents() != m2.agents() {
        return Err(LabError::AgentMismatch);
    }
    let q: BTreeSet<Atom> = match atoms {
        Some(q) => q.clone(),
        None => m1.mapped_atoms().into_iter().chain(m2.mapped_atoms()).collect(),
    };
    let candidates: Vec<(usize, usize)> = (0..m1.len())
        .flat_map(|s| (0..m2.len()).map(move |t| (s, t)))
        .filter(|&(s, t)| q.iter().all(|p| m1.holds(p.as_str(), s) == m2.holds(p.as_str(), t)))
        .collect();
    let bit = |x: usize, y: usize| candidates.iter().position(|&c| c == (x, y)).map(|i| 1u32 << i);

    // for each candidate pair, every mask must meet the relation
    let requirements: Vec<Vec<u32>> = candidates
        .iter()
        .map(|&(s, t)| {
            let mut masks = Vec::new();
            for ai in 0..m1.agents().len() {
                let (xs, ys) = (m1.frame().successors(ai, s), m2.frame().successors(ai, t));
                for &x in xs {
                    masks.push(ys.iter().filter_map(|&y| bit(x, y)).fold(0, |a, b| a | b));
                }
                for &y in ys {
                    masks.push(xs.iter().filter_map(|&x| bit(x, y)).fold(0, |a, b| a | b));
                }
            }
            masks
        })
        .collect();

    let mut union = 0u32;
    for subset in 1u32..(1u32 << candidates.len()) {
        let ok = (0..candidates.len())
            .filter(|&i| subset >> i & 1 == 1)
            .all(|i| requirements[i].iter().all(|&mask| mask & subset != 0));
        if ok {
            union |= subset;
        }
    }
    let pairs = (0..candidates.len()).filter(|&i| union >> i & 1 == 1).map(|i| candidates[i]);
    let relation = BisimRelation::from_pairs(pairs);
    Ok((!relation.is_empty()).then_some(relation))
}
