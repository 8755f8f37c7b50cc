//! Loopless k-shortest paths (Yen) ordered by hop count, then total weight,
//! then node-id sequence.

use std::cmp::{Ordering, Reverse};
use std::collections::{BTreeMap, BTreeSet, BinaryHeap, HashSet};

use serde::{Deserialize, Serialize};

use super::{adjacency, MetricsError, Result};
use crate::graph::Graph;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct PathResult {
    pub node_sequence: Vec<String>,
    pub link_sequence: Vec<String>,
    pub length: usize,
    pub total_weight: Option<f64>,
    pub min_link_weight: Option<f64>,
}

/// Cheapest link for each traversable (from, to) step.
struct StepLinks {
    best: BTreeMap<(usize, usize), usize>,
}

impl StepLinks {
    fn new(g: &Graph) -> Self {
        let mut best: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        let better = |a: usize, b: usize| {
            let (la, lb) = (&g.links()[a], &g.links()[b]);
            let wa = la.weight.unwrap_or(0.0);
            let wb = lb.weight.unwrap_or(0.0);
            wa.total_cmp(&wb).then_with(|| la.id.cmp(&lb.id)) == Ordering::Less
        };
        for (l, &(s, t)) in g.endpoints().iter().enumerate() {
            if s == t {
                continue;
            }
            let mut keys = vec![(s, t)];
            if !g.is_directed() {
                keys.push((t, s));
            }
            for key in keys {
                match best.get(&key) {
                    Some(&cur) if !better(l, cur) => {}
                    _ => {
                        best.insert(key, l);
                    }
                }
            }
        }
        StepLinks { best }
    }

    fn link(&self, from: usize, to: usize) -> usize {
        self.best[&(from, to)]
    }
}

#[derive(Debug, Clone)]
struct Candidate<'g> {
    weight: f64,
    nodes: Vec<usize>,
    ids: Vec<&'g str>,
}

impl Candidate<'_> {
    fn hops(&self) -> usize {
        self.nodes.len() - 1
    }
}

impl PartialEq for Candidate<'_> {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Candidate<'_> {}
impl PartialOrd for Candidate<'_> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Candidate<'_> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.hops()
            .cmp(&other.hops())
            .then_with(|| self.weight.total_cmp(&other.weight))
            .then_with(|| self.ids.cmp(&other.ids))
    }
}

struct Searcher<'g> {
    g: &'g Graph,
    steps: StepLinks,
}

impl<'g> Searcher<'g> {
    fn step_weight(&self, from: usize, to: usize) -> f64 {
        self.g.links()[self.steps.link(from, to)].weight.unwrap_or(0.0)
    }

    fn candidate(&self, nodes: Vec<usize>) -> Candidate<'g> {
        let weight = nodes.windows(2).fold(0.0, |acc, w| acc + self.step_weight(w[0], w[1]));
        let ids = nodes.iter().map(|&n| self.g.nodes()[n].id.as_str()).collect();
        Candidate { weight, nodes, ids }
    }

    /// Best extension of `root` to `target` avoiding `banned` nodes and edges.
    /// Keys are full-path keys, so the result is the minimum over all
    /// extensions in the global order.
    fn best_from(
        &self,
        root: Vec<usize>,
        target: usize,
        banned_nodes: &HashSet<usize>,
        banned_edges: &HashSet<(usize, usize)>,
    ) -> Option<Candidate<'g>> {
        let adj = &adjacency(self.g).out;
        let mut settled = vec![false; self.g.nodes().len()];
        let mut heap = BinaryHeap::new();
        heap.push(Reverse(self.candidate(root)));
        while let Some(Reverse(path)) = heap.pop() {
            let end = *path.nodes.last().expect("non-empty path");
            if end == target {
                return Some(path);
            }
            if settled[end] {
                continue;
            }
            settled[end] = true;
            for &next in &adj[end] {
                if settled[next]
                    || banned_nodes.contains(&next)
                    || banned_edges.contains(&(end, next))
                    || path.nodes.contains(&next)
                {
                    continue;
                }
                let mut ext = path.clone();
                ext.weight += self.step_weight(end, next);
                ext.nodes.push(next);
                ext.ids.push(self.g.nodes()[next].id.as_str());
                heap.push(Reverse(ext));
            }
        }
        None
    }

    fn to_result(&self, c: &Candidate<'_>) -> PathResult {
        let weighted = self.g.capabilities().weighted;
        let links: Vec<usize> = c.nodes.windows(2).map(|w| self.steps.link(w[0], w[1])).collect();
        let min_w = links
            .iter()
            .map(|&l| self.g.links()[l].weight.unwrap_or(0.0))
            .min_by(f64::total_cmp);
        PathResult {
            node_sequence: c.ids.iter().map(|s| s.to_string()).collect(),
            link_sequence: links.iter().map(|&l| self.g.links()[l].id.clone()).collect(),
            length: links.len(),
            total_weight: weighted.then_some(c.weight),
            min_link_weight: if weighted { min_w } else { None },
        }
    }
}

/// Up to `k` loopless paths from `source` to `target`. An unreachable target
/// yields an empty list.
pub fn k_shortest_paths(g: &Graph, source: &str, target: &str, k: usize) -> Result<Vec<PathResult>> {
    let s = g.node_idx(source)?;
    let t = g.node_idx(target)?;
    if s == t {
        return Err(MetricsError::SameNode);
    }
    if k == 0 {
        return Err(MetricsError::InvalidArgument("k must be at least 1".into()));
    }
    let search = Searcher { g, steps: StepLinks::new(g) };
    let none = HashSet::new();
    let Some(first) = search.best_from(vec![s], t, &none, &HashSet::new()) else {
        return Ok(Vec::new());
    };

    let mut accepted = vec![first];
    let mut pending: BTreeSet<Candidate<'_>> = BTreeSet::new();
    while accepted.len() < k {
        let prev = accepted.last().expect("at least one path").clone();
        for i in 0..prev.nodes.len() - 1 {
            let root = &prev.nodes[..=i];
            let banned_edges: HashSet<(usize, usize)> = accepted
                .iter()
                .filter(|p| p.nodes.len() > i + 1 && &p.nodes[..=i] == root)
                .map(|p| (p.nodes[i], p.nodes[i + 1]))
                .collect();
            let banned_nodes: HashSet<usize> = root[..i].iter().copied().collect();
            if let Some(c) = search.best_from(root.to_vec(), t, &banned_nodes, &banned_edges) {
                if !accepted.iter().any(|a| a.nodes == c.nodes) {
                    pending.insert(c);
                }
            }
        }
        match pending.pop_first() {
            Some(next) => accepted.push(next),
            None => break,
        }
    }
    Ok(accepted.iter().map(|c| search.to_result(c)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{Link, Node};
    use crate::metrics::tests::graph;

    #[test]
    fn diamond() {
        let g = graph(&["a", "b", "c", "d"], &[("a", "b"), ("b", "d"), ("a", "c"), ("c", "d")], false);
        let paths = k_shortest_paths(&g, "a", "d", 2).unwrap();
        assert_eq!(paths.len(), 2);
        assert_eq!(paths[0].node_sequence, ["a", "b", "d"]);
        assert_eq!(paths[1].node_sequence, ["a", "c", "d"]);
        assert!(paths.iter().all(|p| p.length == 2 && p.total_weight.is_none()));
    }

    #[test]
    fn disconnected_is_empty() {
        let g = graph(&["a", "b", "c"], &[("a", "b")], false);
        assert!(k_shortest_paths(&g, "a", "c", 3).unwrap().is_empty());
        assert_eq!(k_shortest_paths(&g, "a", "a", 3).unwrap_err(), MetricsError::SameNode);
    }

    #[test]
    fn weight_breaks_hop_ties_and_parallel_links_use_cheapest() {
        let nodes = ["s", "x", "y", "t"].into_iter().map(Node::new).collect();
        let links = vec![
            Link::new("1", "s", "x").weighted(5.0),
            Link::new("2", "x", "t").weighted(5.0),
            Link::new("3", "s", "y").weighted(1.0),
            Link::new("4", "y", "t").weighted(4.0),
            Link::new("5", "y", "t").weighted(2.0),
        ];
        let g = Graph::new(nodes, links, true).unwrap();
        let paths = k_shortest_paths(&g, "s", "t", 3).unwrap();
        assert_eq!(paths.len(), 2);
        assert_eq!(paths[0].node_sequence, ["s", "y", "t"]);
        assert_eq!(paths[0].link_sequence, ["3", "5"]);
        assert_eq!(paths[0].total_weight, Some(3.0));
        assert_eq!(paths[0].min_link_weight, Some(1.0));
        assert_eq!(paths[1].total_weight, Some(10.0));
    }

    #[test]
    fn directed_paths_follow_direction() {
        let g = graph(&["a", "b", "c"], &[("a", "b"), ("c", "b")], true);
        assert!(k_shortest_paths(&g, "a", "c", 2).unwrap().is_empty());
    }
}
