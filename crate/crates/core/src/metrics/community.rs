//! Greedy agglomerative modularity maximization (Clauset-Newman-Moore style
//! fast greedy) on the simple undirected projection of the graph.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::graph::Graph;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CommunityPartition {
    /// Node id -> community index, indices contiguous from 0.
    pub assignment: BTreeMap<String, usize>,
    pub modularity: f64,
    pub algorithm: String,
}

impl CommunityPartition {
    pub fn community_count(&self) -> usize {
        self.assignment.values().max().map_or(0, |m| m + 1)
    }

    /// Members of each community, indexed by community.
    pub fn members(&self) -> Vec<Vec<String>> {
        let mut out = vec![Vec::new(); self.community_count()];
        for (id, &c) in &self.assignment {
            out[c].push(id.clone());
        }
        out
    }
}

/// Distinct unordered node pairs joined by at least one non-loop link.
fn projection(g: &Graph) -> BTreeSet<(usize, usize)> {
    g.endpoints()
        .iter()
        .filter(|(s, t)| s != t)
        .map(|&(s, t)| (s.min(t), s.max(t)))
        .collect()
}

/// Modularity of a partition on the simple undirected projection:
/// sum over communities of L_c/m - (K_c / 2m)^2. Zero when there are no links.
pub fn modularity(g: &Graph, assignment: &BTreeMap<String, usize>) -> f64 {
    let pairs = projection(g);
    let m = pairs.len() as f64;
    if pairs.is_empty() {
        return 0.0;
    }
    let comm: Vec<usize> = g.nodes().iter().map(|n| assignment[&n.id]).collect();
    let mut internal: BTreeMap<usize, f64> = BTreeMap::new();
    let mut degree: BTreeMap<usize, f64> = BTreeMap::new();
    for &(a, b) in &pairs {
        *degree.entry(comm[a]).or_default() += 1.0;
        *degree.entry(comm[b]).or_default() += 1.0;
        if comm[a] == comm[b] {
            *internal.entry(comm[a]).or_default() += 1.0;
        }
    }
    degree
        .iter()
        .map(|(c, k)| internal.get(c).copied().unwrap_or(0.0) / m - (k / (2.0 * m)).powi(2))
        .sum()
}

fn greedy(g: &Graph) -> CommunityPartition {
    let n = g.nodes().len();
    let pairs = projection(g);
    let m = pairs.len() as i128;

    // community adjacency: counts of projected edges between communities
    let mut adj: Vec<BTreeMap<usize, i128>> = vec![BTreeMap::new(); n];
    let mut k = vec![0i128; n];
    for &(a, b) in &pairs {
        *adj[a].entry(b).or_default() += 1;
        *adj[b].entry(a).or_default() += 1;
        k[a] += 1;
        k[b] += 1;
    }
    let mut comm_of: Vec<usize> = (0..n).collect();
    let mut members: Vec<Vec<usize>> = (0..n).map(|i| vec![i]).collect();

    // Q scaled by 4m^2, kept exact in integers
    let mut q: i128 = -k.iter().map(|x| x * x).sum::<i128>();
    let mut best_q = q;
    let mut best = comm_of.clone();

    loop {
        // merge gain scaled by 2m^2: 2m*c_ij - K_i*K_j; ties to the smallest (i, j)
        let mut pick: Option<(i128, usize, usize)> = None;
        for (i, row) in adj.iter().enumerate() {
            for (&j, &c) in row.range(i + 1..) {
                let gain = 2 * m * c - k[i] * k[j];
                if pick.is_none_or(|(g0, _, _)| gain > g0) {
                    pick = Some((gain, i, j));
                }
            }
        }
        let Some((gain, i, j)) = pick else { break };

        let row_j = std::mem::take(&mut adj[j]);
        for (other, c) in row_j {
            if other == i {
                continue;
            }
            *adj[i].entry(other).or_default() += c;
            let back = &mut adj[other];
            back.remove(&j);
            *back.entry(i).or_default() += c;
        }
        adj[i].remove(&j);
        k[i] += k[j];
        k[j] = 0;
        let moved = std::mem::take(&mut members[j]);
        for &node in &moved {
            comm_of[node] = i;
        }
        members[i].extend(moved);

        q += 2 * gain;
        if q > best_q {
            best_q = q;
            best = comm_of.clone();
        }
    }

    // relabel contiguously in order of first appearance
    let mut relabel: BTreeMap<usize, usize> = BTreeMap::new();
    let mut assignment = BTreeMap::new();
    for (node, &c) in best.iter().enumerate() {
        let next = relabel.len();
        let idx = *relabel.entry(c).or_insert(next);
        assignment.insert(g.nodes()[node].id.clone(), idx);
    }
    let modularity = modularity(g, &assignment);
    CommunityPartition { assignment, modularity, algorithm: "newman-fast-greedy".into() }
}

/// Community partition at the highest modularity reached by greedy merging.
/// Memoized per graph.
pub fn detect_communities(g: &Graph) -> &CommunityPartition {
    g.cache.communities.get_or_init(|| greedy(g))
}
