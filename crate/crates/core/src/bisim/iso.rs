use std::collections::BTreeSet;

use super::refine;
use crate::ids::Atom;
use crate::models::{EpistemicModel, PointedModel};

/// A bijection `f` from the states of `m1` onto those of `m2` with
/// `(s, t) ∈ R1(a) ⟺ (f s, f t) ∈ R2(a)` and equal valuations on every
/// atom mapped by either model.
pub fn is_isomorphic(m1: &EpistemicModel, m2: &EpistemicModel) -> Option<Vec<usize>> {
    search(m1, m2, None)
}

/// Isomorphism that also sends the point to the point.
pub fn is_isomorphic_pointed(pm1: &PointedModel, pm2: &PointedModel) -> Option<Vec<usize>> {
    search(&pm1.model, &pm2.model, Some((pm1.point, pm2.point)))
}

type Signature = (usize, Vec<(usize, usize, bool)>);

fn search(m1: &EpistemicModel, m2: &EpistemicModel, fixed: Option<(usize, usize)>) -> Option<Vec<usize>> {
    if m1.len() != m2.len() || m1.agents() != m2.agents() {
        return None;
    }
    let atoms: BTreeSet<Atom> = m1.mapped_atoms().into_iter().chain(m2.mapped_atoms()).collect();
    // bisimulation classes are an isomorphism invariant; so are degrees
    let classes = refine(&[m1, m2], &atoms);
    let agents = m1.agents().len();
    let signature = |m: &EpistemicModel, offset: usize, s: usize| -> Signature {
        let degrees = (0..agents)
            .map(|ai| {
                let out = m.frame().successors(ai, s).len();
                let inc = (0..m.len()).filter(|&t| m.frame().has_edge(ai, t, s)).count();
                (out, inc, m.frame().has_edge(ai, s, s))
            })
            .collect();
        (classes[offset + s], degrees)
    };
    let n = m1.len();
    let left: Vec<Signature> = (0..n).map(|s| signature(m1, 0, s)).collect();
    let right: Vec<Signature> = (0..n).map(|s| signature(m2, n, s)).collect();
    {
        let (mut l, mut r) = (left.clone(), right.clone());
        l.sort();
        r.sort();
        if l != r {
            return None;
        }
    }
    let candidates: Vec<Vec<usize>> = (0..n)
        .map(|s| {
            (0..n)
                .filter(|&t| left[s] == right[t])
                .filter(|&t| fixed.is_none_or(|(p1, p2)| (s == p1) == (t == p2)))
                .collect()
        })
        .collect();

    // most constrained states first
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&s| (candidates[s].len(), s));

    let mut state = Search { m1, m2, agents, candidates, order, map: vec![None; n], used: vec![false; n] };
    state.extend(0).then(|| state.map.iter().map(|t| t.expect("complete")).collect())
}

struct Search<'a> {
    m1: &'a EpistemicModel,
    m2: &'a EpistemicModel,
    agents: usize,
    candidates: Vec<Vec<usize>>,
    order: Vec<usize>,
    map: Vec<Option<usize>>,
    used: Vec<bool>,
}

impl Search<'_> {
    fn extend(&mut self, depth: usize) -> bool {
        let Some(&s) = self.order.get(depth) else {
            return true;
        };
        for i in 0..self.candidates[s].len() {
            let t = self.candidates[s][i];
            if self.used[t] || !self.consistent(s, t) {
                continue;
            }
            self.map[s] = Some(t);
            self.used[t] = true;
            if self.extend(depth + 1) {
                return true;
            }
            self.map[s] = None;
            self.used[t] = false;
        }
        false
    }

    /// Edges between `s` and already-mapped states (and itself) agree.
    fn consistent(&self, s: usize, t: usize) -> bool {
        let (f1, f2) = (self.m1.frame(), self.m2.frame());
        (0..self.agents).all(|ai| {
            if f1.has_edge(ai, s, s) != f2.has_edge(ai, t, t) {
                return false;
            }
            self.map.iter().enumerate().all(|(x, image)| match image {
                Some(y) => {
                    f1.has_edge(ai, s, x) == f2.has_edge(ai, t, *y)
                        && f1.has_edge(ai, x, s) == f2.has_edge(ai, *y, t)
                }
                None => true,
            })
        })
    }
}
