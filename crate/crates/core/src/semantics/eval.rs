use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet, VecDeque};
use std::rc::Rc;

use super::{check_agents, Product, SemanticsError};
use crate::formula::{Formula, Program};
use crate::ids::{Agent, Atom};
use crate::models::{EpistemicModel, Frame, UpdateModel};

type Ext = Rc<Vec<bool>>;

struct ProductEntry {
    model: usize,
    /// `index[t * |E| + e]` is the product state for `(t, e)`.
    index: Vec<Option<usize>>,
    pairs: Vec<(usize, usize)>,
}

/// Single-call evaluation context.
///
/// Caches are keyed by addresses of formulas and update models, which is
/// sound only while every key stays borrowed; an evaluator therefore never
/// outlives the public call that created it.
pub(super) struct Evaluator {
    models: Vec<Rc<EpistemicModel>>,
    products: HashMap<(usize, *const UpdateModel), Option<usize>>,
    entries: Vec<ProductEntry>,
    cache: HashMap<(usize, *const Formula), Ext>,
}

impl Evaluator {
    pub(super) fn new(root: &EpistemicModel) -> Self {
        Evaluator {
            models: vec![Rc::new(root.clone())],
            products: HashMap::new(),
            entries: Vec::new(),
            cache: HashMap::new(),
        }
    }

    pub(super) fn take_product(&mut self, entry: usize) -> Product {
        let e = &self.entries[entry];
        Product { model: self.models[e.model].as_ref().clone(), pairs: e.pairs.clone() }
    }

    pub(super) fn extension(&mut self, mid: usize, f: &Formula) -> Result<Ext, SemanticsError> {
        let key = (mid, f as *const Formula);
        if let Some(hit) = self.cache.get(&key) {
            return Ok(hit.clone());
        }
        let n = self.models[mid].len();
        let ext: Vec<bool> = match f {
            Formula::Top => vec![true; n],
            Formula::Bottom => vec![false; n],
            Formula::Atom(p) => {
                let m = &self.models[mid];
                (0..n).map(|s| m.holds(p.as_str(), s)).collect()
            }
            Formula::Not(g) => self.extension(mid, g)?.iter().map(|v| !v).collect(),
            Formula::And(l, r) => self.binary(mid, l, r, |a, b| a && b)?,
            Formula::Or(l, r) => self.binary(mid, l, r, |a, b| a || b)?,
            Formula::Implies(l, r) => self.binary(mid, l, r, |a, b| !a || b)?,
            Formula::Iff(l, r) => self.binary(mid, l, r, |a, b| a == b)?,
            Formula::Box(p, g) => self.modal(mid, p, g, true)?,
            Formula::Diamond(p, g) => self.modal(mid, p, g, false)?,
        };
        let ext = Rc::new(ext);
        self.cache.insert(key, ext.clone());
        Ok(ext)
    }

    fn binary(
        &mut self,
        mid: usize,
        l: &Formula,
        r: &Formula,
        op: impl Fn(bool, bool) -> bool,
    ) -> Result<Vec<bool>, SemanticsError> {
        let a = self.extension(mid, l)?;
        let b = self.extension(mid, r)?;
        Ok(a.iter().zip(b.iter()).map(|(&x, &y)| op(x, y)).collect())
    }

    /// `universal` selects box over diamond.
    fn modal(
        &mut self,
        mid: usize,
        program: &Program,
        body: &Formula,
        universal: bool,
    ) -> Result<Vec<bool>, SemanticsError> {
        match program {
            Program::Agent(a) => {
                let m = self.models[mid].clone();
                let ai = m
                    .frame()
                    .agent_index(a.as_str())
                    .ok_or_else(|| SemanticsError::UnknownAgent(a.to_string()))?;
                let inner = self.extension(mid, body)?;
                Ok((0..m.len())
                    .map(|s| quantify(universal, m.frame().successors(ai, s).iter().map(|&t| inner[t])))
                    .collect())
            }
            Program::Star(group) => {
                let m = self.models[mid].clone();
                let reach = closure(&m, group)?;
                let inner = self.extension(mid, body)?;
                Ok(reach.iter().map(|ts| quantify(universal, ts.iter().map(|&t| inner[t]))).collect())
            }
            Program::Update(pu) => {
                let n = self.models[mid].len();
                let Some(entry) = self.product(mid, &pu.model)? else {
                    return Ok(vec![universal; n]);
                };
                let (pmid, width) = (self.entries[entry].model, pu.model.len());
                let inner = self.extension(pmid, body)?;
                let index = &self.entries[entry].index;
                Ok((0..n)
                    .map(|s| {
                        // a point whose precondition fails contributes nothing
                        let results = pu
                            .points
                            .iter()
                            .filter_map(|&e| index[s * width + e])
                            .map(|ps| inner[ps]);
                        quantify(universal, results)
                    })
                    .collect())
            }
        }
    }

    /// Builds (or recalls) `models[mid] ⊗ u`; `None` when empty.
    pub(super) fn product(
        &mut self,
        mid: usize,
        u: &UpdateModel,
    ) -> Result<Option<usize>, SemanticsError> {
        let key = (mid, u as *const UpdateModel);
        if let Some(&hit) = self.products.get(&key) {
            return Ok(hit);
        }
        let m = self.models[mid].clone();
        check_agents(m.agents(), u.agents())?;
        let (n, width) = (m.len(), u.len());

        let mut pre = Vec::with_capacity(width);
        for e in 0..width {
            pre.push(self.extension(mid, u.pre(e))?);
        }
        let mut index = vec![None; n * width];
        let mut pairs = Vec::new();
        for t in 0..n {
            for e in 0..width {
                if pre[e][t] {
                    index[t * width + e] = Some(pairs.len());
                    pairs.push((t, e));
                }
            }
        }
        if pairs.is_empty() {
            self.products.insert(key, None);
            return Ok(None);
        }

        let mut frame = Frame::empty(m.agents().iter().cloned(), pairs.len());
        for ai in 0..m.agents().len() {
            for (from, &(t, e)) in pairs.iter().enumerate() {
                for &t2 in m.frame().successors(ai, t) {
                    for &e2 in u.frame().successors(ai, e) {
                        if let Some(to) = index[t2 * width + e2] {
                            frame.add_edge(ai, from, to);
                        }
                    }
                }
            }
        }

        let atoms: BTreeSet<Atom> = m.mapped_atoms().into_iter().chain(u.assigned_atoms()).collect();
        let mut valuation = BTreeMap::new();
        for p in atoms {
            let mut set = BTreeSet::new();
            for (ps, &(t, e)) in pairs.iter().enumerate() {
                let value = match u.post(e).get(&p) {
                    Some(f) => self.extension(mid, f)?[t],
                    None => m.holds(p.as_str(), t),
                };
                if value {
                    set.insert(ps);
                }
            }
            valuation.insert(p, set);
        }

        let names = unique_names(
            pairs.iter().map(|&(t, e)| format!("{}*{}", m.state_name(t), u.event_name(e))),
        );
        let product = EpistemicModel::from_parts(frame, names, valuation);
        self.models.push(Rc::new(product));
        let entry = self.entries.len();
        self.entries.push(ProductEntry { model: self.models.len() - 1, index, pairs });
        self.products.insert(key, Some(entry));
        Ok(Some(entry))
    }
}

fn quantify(universal: bool, mut values: impl Iterator<Item = bool>) -> bool {
    if universal {
        values.all(|v| v)
    } else {
        values.any(|v| v)
    }
}

/// Makes names distinct by appending underscores to later duplicates.
pub(crate) fn unique_names(names: impl IntoIterator<Item = String>) -> Vec<String> {
    let mut seen = HashSet::new();
    names
        .into_iter()
        .map(|mut name| {
            while !seen.insert(name.clone()) {
                name.push('_');
            }
            name
        })
        .collect()
}

pub(super) fn closure(
    m: &EpistemicModel,
    group: &BTreeSet<Agent>,
) -> Result<Vec<BTreeSet<usize>>, SemanticsError> {
    if group.is_empty() {
        return Err(SemanticsError::EmptyGroup);
    }
    let agents = group
        .iter()
        .map(|a| m.frame().agent_index(a.as_str()).ok_or_else(|| SemanticsError::UnknownAgent(a.to_string())))
        .collect::<Result<Vec<_>, _>>()?;
    let reach = (0..m.len())
        .map(|s| {
            let mut seen = BTreeSet::from([s]);
            let mut queue = VecDeque::from([s]);
            while let Some(t) = queue.pop_front() {
                for &ai in &agents {
                    for &u in m.frame().successors(ai, t) {
                        if seen.insert(u) {
                            queue.push_back(u);
                        }
                    }
                }
            }
            seen
        })
        .collect();
    Ok(reach)
}
