use crate::ids::Agent;

/// Per-agent accessibility over a finite set of nodes `0..size`.
///
/// Shared by epistemic models (nodes are states) and update models (nodes
/// are events). Agents are kept sorted; successor lists are sorted and
/// deduplicated.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Frame {
    agents: Vec<Agent>,
    succ: Vec<Vec<Vec<usize>>>,
}

impl Frame {
    /// A frame with no edges.
    pub fn empty(agents: impl IntoIterator<Item = Agent>, size: usize) -> Self {
        let mut agents: Vec<Agent> = agents.into_iter().collect();
        agents.sort();
        agents.dedup();
        let succ = vec![vec![Vec::new(); size]; agents.len()];
        Frame { agents, succ }
    }

    pub fn agents(&self) -> &[Agent] {
        &self.agents
    }

    pub fn size(&self) -> usize {
        self.succ.first().map_or(0, Vec::len)
    }

    pub fn agent_index(&self, agent: &str) -> Option<usize> {
        self.agents.binary_search_by(|a| a.as_str().cmp(agent)).ok()
    }

    pub fn successors(&self, agent: usize, node: usize) -> &[usize] {
        &self.succ[agent][node]
    }

    pub fn has_edge(&self, agent: usize, from: usize, to: usize) -> bool {
        self.succ[agent][from].binary_search(&to).is_ok()
    }

    /// All `(from, to)` pairs of one agent, in lexicographic order.
    pub fn edges(&self, agent: usize) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.succ[agent]
            .iter()
            .enumerate()
            .flat_map(|(from, tos)| tos.iter().map(move |&to| (from, to)))
    }

    pub fn edge_count(&self, agent: usize) -> usize {
        self.succ[agent].iter().map(Vec::len).sum()
    }

    pub fn add_edge(&mut self, agent: usize, from: usize, to: usize) {
        let list = &mut self.succ[agent][from];
        if let Err(pos) = list.binary_search(&to) {
            list.insert(pos, to);
        }
    }

    pub fn make_universal(&mut self, agent: usize) {
        let n = self.size();
        for list in &mut self.succ[agent] {
            *list = (0..n).collect();
        }
    }

    pub fn make_reflexive(&mut self, agent: usize) {
        for node in 0..self.size() {
            self.add_edge(agent, node, node);
        }
    }

    pub fn same_agents(&self, other: &Frame) -> bool {
        self.agents == other.agents
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn edges_stay_sorted() {
        let mut f = Frame::empty(["b".into(), "a".into()], 3);
        assert_eq!(f.agents()[0].as_str(), "a");
        f.add_edge(0, 0, 2);
        f.add_edge(0, 0, 1);
        f.add_edge(0, 0, 2);
        assert_eq!(f.successors(0, 0), &[1, 2]);
        assert!(f.has_edge(0, 0, 1));
        assert!(!f.has_edge(1, 0, 1));
        assert_eq!(f.edges(0).collect::<Vec<_>>(), vec![(0, 1), (0, 2)]);
    }

    #[test]
    fn universal_and_reflexive() {
        let mut f = Frame::empty(["a".into()], 2);
        f.make_reflexive(0);
        assert_eq!(f.edge_count(0), 2);
        f.make_universal(0);
        assert_eq!(f.edge_count(0), 4);
    }
}
