//! The formula language: atoms, negation, conjunction and the three kinds of
//! box modality (agent, group closure, update), plus the usual abbreviations.

mod parse;

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;
use std::sync::Arc;

use crate::ids::{Agent, Atom};
use crate::models::{PointedUpdate, UpdateModel};

pub use parse::{parse, parse_plain, NoUpdates, ParseError, UpdateResolver};

#[derive(Clone, PartialEq, Eq)]
pub enum Formula {
    Top,
    Bottom,
    Atom(Atom),
    Not(Arc<Formula>),
    And(Arc<Formula>, Arc<Formula>),
    Or(Arc<Formula>, Arc<Formula>),
    Implies(Arc<Formula>, Arc<Formula>),
    Iff(Arc<Formula>, Arc<Formula>),
    Box(Program, Arc<Formula>),
    Diamond(Program, Arc<Formula>),
}

/// What a modality quantifies over.
#[derive(Clone, PartialEq, Eq)]
pub enum Program {
    /// `[a]`
    Agent(Agent),
    /// `[B*]`, reflexive-transitive closure of the union over a non-empty group.
    Star(BTreeSet<Agent>),
    /// `[U, e]`, or the union over several points of one update model.
    Update(PointedUpdate),
}

impl Program {
    pub fn agent(name: &str) -> Self {
        Program::Agent(Agent::new(name))
    }

    pub fn star<'a>(group: impl IntoIterator<Item = &'a str>) -> Self {
        Program::Star(group.into_iter().map(Agent::new).collect())
    }
}

impl fmt::Debug for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Debug for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Formula {
    pub fn atom(name: &str) -> Self {
        Formula::Atom(Atom::new(name))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Self {
        Formula::Not(Arc::new(f))
    }

    pub fn and(l: Formula, r: Formula) -> Self {
        Formula::And(Arc::new(l), Arc::new(r))
    }

    pub fn or(l: Formula, r: Formula) -> Self {
        Formula::Or(Arc::new(l), Arc::new(r))
    }

    pub fn implies(l: Formula, r: Formula) -> Self {
        Formula::Implies(Arc::new(l), Arc::new(r))
    }

    pub fn iff(l: Formula, r: Formula) -> Self {
        Formula::Iff(Arc::new(l), Arc::new(r))
    }

    pub fn boxed(program: Program, f: Formula) -> Self {
        Formula::Box(program, Arc::new(f))
    }

    pub fn diamond(program: Program, f: Formula) -> Self {
        Formula::Diamond(program, Arc::new(f))
    }

    /// `[a]f`
    pub fn knows(agent: &str, f: Formula) -> Self {
        Formula::boxed(Program::agent(agent), f)
    }

    /// `[U, E']f`
    pub fn after(update: PointedUpdate, f: Formula) -> Self {
        Formula::boxed(Program::Update(update), f)
    }

    /// Left-nested conjunction; `true` when empty.
    pub fn conj(items: impl IntoIterator<Item = Formula>) -> Self {
        items.into_iter().reduce(Formula::and).unwrap_or(Formula::Top)
    }

    /// Left-nested disjunction; `false` when empty.
    pub fn disj(items: impl IntoIterator<Item = Formula>) -> Self {
        items.into_iter().reduce(Formula::or).unwrap_or(Formula::Bottom)
    }

    /// `[B]f` for a group: the conjunction of `[a]f` over its members.
    pub fn everyone<'a>(group: impl IntoIterator<Item = &'a Agent>, f: &Formula) -> Self {
        Formula::conj(group.into_iter().map(|a| Formula::boxed(Program::Agent(a.clone()), f.clone())))
    }

    /// Height of the syntax tree; atoms and constants have depth 0.
    /// Formulas inside referenced update models are not counted.
    pub fn depth(&self) -> usize {
        fn go(f: &Formula, memo: &mut HashMap<*const Formula, usize>) -> usize {
            if let Some(&d) = memo.get(&(f as *const Formula)) {
                return d;
            }
            let d = match f {
                Formula::Top | Formula::Bottom | Formula::Atom(_) => 0,
                Formula::Not(g) | Formula::Box(_, g) | Formula::Diamond(_, g) => 1 + go(g, memo),
                Formula::And(l, r) | Formula::Or(l, r) | Formula::Implies(l, r) | Formula::Iff(l, r) => {
                    1 + go(l, memo).max(go(r, memo))
                }
            };
            memo.insert(f as *const Formula, d);
            d
        }
        go(self, &mut HashMap::new())
    }

    /// Every atom occurring in the formula, including the preconditions,
    /// postconditions and postcondition domains of referenced updates.
    pub fn atoms(&self) -> BTreeSet<Atom> {
        let mut walk = AtomWalk::default();
        walk.formula(self);
        walk.out
    }

    /// Update models referenced anywhere inside the formula, including
    /// through the preconditions and postconditions of other updates.
    /// Each model appears once, in first-visit order.
    pub fn referenced_updates(&self) -> Vec<Arc<UpdateModel>> {
        let mut out = Vec::new();
        let mut seen = HashSet::new();
        self.collect_updates(&mut out, &mut seen);
        out
    }

    pub(crate) fn collect_updates(
        &self,
        out: &mut Vec<Arc<UpdateModel>>,
        seen: &mut HashSet<*const UpdateModel>,
    ) {
        match self {
            Formula::Top | Formula::Bottom | Formula::Atom(_) => {}
            Formula::Not(f) => f.collect_updates(out, seen),
            Formula::And(l, r) | Formula::Or(l, r) | Formula::Implies(l, r) | Formula::Iff(l, r) => {
                l.collect_updates(out, seen);
                r.collect_updates(out, seen);
            }
            Formula::Box(program, f) | Formula::Diamond(program, f) => {
                if let Program::Update(pu) = program {
                    if seen.insert(Arc::as_ptr(&pu.model)) {
                        out.push(pu.model.clone());
                        for e in 0..pu.model.len() {
                            pu.model.pre(e).collect_updates(out, seen);
                            for v in pu.model.post(e).values() {
                                v.collect_updates(out, seen);
                            }
                        }
                    }
                }
                f.collect_updates(out, seen);
            }
        }
    }

    /// Rewrites the abbreviations `|`, `->`, `<->`, `<α>` and `false` into
    /// `~`, `&`, `[α]` and `true`. Update models referenced by the formula
    /// are left as they are.
    pub fn to_core(&self) -> Formula {
        match self {
            Formula::Top | Formula::Atom(_) => self.clone(),
            Formula::Bottom => Formula::not(Formula::Top),
            Formula::Not(f) => Formula::not(f.to_core()),
            Formula::And(l, r) => Formula::and(l.to_core(), r.to_core()),
            Formula::Or(l, r) => Formula::not(Formula::and(
                Formula::not(l.to_core()),
                Formula::not(r.to_core()),
            )),
            Formula::Implies(l, r) => {
                Formula::not(Formula::and(l.to_core(), Formula::not(r.to_core())))
            }
            Formula::Iff(l, r) => {
                let (l, r) = (l.to_core(), r.to_core());
                Formula::and(
                    Formula::not(Formula::and(l.clone(), Formula::not(r.clone()))),
                    Formula::not(Formula::and(r, Formula::not(l))),
                )
            }
            Formula::Box(p, f) => Formula::boxed(p.clone(), f.to_core()),
            Formula::Diamond(p, f) => {
                Formula::not(Formula::boxed(p.clone(), Formula::not(f.to_core())))
            }
        }
    }

    /// True when only `~`, `&`, `[α]`, atoms and `true` occur.
    pub fn is_core(&self) -> bool {
        match self {
            Formula::Top | Formula::Atom(_) => true,
            Formula::Not(f) | Formula::Box(_, f) => f.is_core(),
            Formula::And(l, r) => l.is_core() && r.is_core(),
            _ => false,
        }
    }
}

/// Shared subformulas and update models are visited once.
#[derive(Default)]
struct AtomWalk {
    out: BTreeSet<Atom>,
    nodes: HashSet<*const Formula>,
    updates: HashSet<*const UpdateModel>,
}

impl AtomWalk {
    fn formula(&mut self, f: &Formula) {
        if !self.nodes.insert(f as *const Formula) {
            return;
        }
        match f {
            Formula::Top | Formula::Bottom => {}
            Formula::Atom(p) => {
                self.out.insert(p.clone());
            }
            Formula::Not(g) => self.formula(g),
            Formula::And(l, r) | Formula::Or(l, r) | Formula::Implies(l, r) | Formula::Iff(l, r) => {
                self.formula(l);
                self.formula(r);
            }
            Formula::Box(program, g) | Formula::Diamond(program, g) => {
                if let Program::Update(pu) = program {
                    self.update(&pu.model);
                }
                self.formula(g);
            }
        }
    }

    fn update(&mut self, u: &Arc<UpdateModel>) {
        if !self.updates.insert(Arc::as_ptr(u)) {
            return;
        }
        for e in 0..u.len() {
            self.formula(u.pre(e));
            for (p, v) in u.post(e) {
                self.out.insert(p.clone());
                self.formula(v);
            }
        }
    }
}

impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Program::Agent(a) => write!(f, "{a}"),
            Program::Star(group) => {
                let names: Vec<&str> = group.iter().map(Agent::as_str).collect();
                write!(f, "*{{{}}}", names.join(","))
            }
            Program::Update(pu) => write!(f, "{} @ {}", pu.model.name(), pu.point_names().join(",")),
        }
    }
}

/// The canonical text form: binary connectives are always parenthesized,
/// prefix operators are written without spaces.
impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Top => f.write_str("true"),
            Formula::Bottom => f.write_str("false"),
            Formula::Atom(p) => write!(f, "{p}"),
            Formula::Not(g) => write!(f, "~{g}"),
            Formula::And(l, r) => write!(f, "({l} & {r})"),
            Formula::Or(l, r) => write!(f, "({l} | {r})"),
            Formula::Implies(l, r) => write!(f, "({l} -> {r})"),
            Formula::Iff(l, r) => write!(f, "({l} <-> {r})"),
            Formula::Box(p, g) => write!(f, "[{p}]{g}"),
            Formula::Diamond(p, g) => write!(f, "<{p}>{g}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn render_examples() {
        assert_eq!(Formula::and(Formula::atom("p"), Formula::atom("q")).to_string(), "(p & q)");
        assert_eq!(Formula::not(Formula::knows("a", Formula::atom("p"))).to_string(), "~[a]p");
        assert_eq!(Formula::boxed(Program::star(["a"]), Formula::Top).to_string(), "[*{a}]true");
    }

    #[test]
    fn atoms_of_plain_formulas() {
        let f = Formula::and(Formula::atom("p"), Formula::not(Formula::atom("q")));
        assert_eq!(f.atoms(), [Atom::new("p"), Atom::new("q")].into());
        assert!(Formula::Top.atoms().is_empty());
    }

    #[test]
    fn core_rewrite_is_core() {
        let f = Formula::iff(
            Formula::diamond(Program::agent("a"), Formula::Bottom),
            Formula::or(Formula::atom("p"), Formula::implies(Formula::atom("q"), Formula::Top)),
        );
        assert!(!f.is_core());
        assert!(f.to_core().is_core());
        assert_eq!(
            Formula::diamond(Program::agent("a"), Formula::atom("p")).to_core(),
            Formula::not(Formula::knows("a", Formula::not(Formula::atom("p"))))
        );
    }

    #[test]
    fn depth_counts_connectives() {
        assert_eq!(Formula::atom("p").depth(), 0);
        let f = Formula::knows("a", Formula::and(Formula::atom("p"), Formula::not(Formula::Top)));
        assert_eq!(f.depth(), 3);
    }

    #[test]
    fn conj_and_disj_of_nothing() {
        assert_eq!(Formula::conj([]), Formula::Top);
        assert_eq!(Formula::disj([]), Formula::Bottom);
    }
}
