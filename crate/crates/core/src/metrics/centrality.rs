use std::collections::{BTreeMap, VecDeque};

use super::adjacency;
use crate::graph::Graph;

/// Hop distances from `source`, following link direction unless `undirected`.
pub fn hop_distances(g: &Graph, source: usize, undirected: bool) -> Vec<Option<usize>> {
    let adj = adjacency(g);
    let nbrs = if undirected { &adj.both } else { &adj.out };
    let mut dist = vec![None; g.nodes().len()];
    dist[source] = Some(0);
    let mut queue = VecDeque::from([source]);
    while let Some(u) = queue.pop_front() {
        let du = dist[u].expect("queued nodes have a distance");
        for &v in &nbrs[u] {
            if dist[v].is_none() {
                dist[v] = Some(du + 1);
                queue.push_back(v);
            }
        }
    }
    dist
}

/// Brandes accumulation over unweighted shortest paths.
fn brandes(g: &Graph) -> Vec<f64> {
    let adj = &adjacency(g).out;
    let n = g.nodes().len();
    let mut cb = vec![0.0; n];
    let mut sigma = vec![0.0f64; n];
    let mut dist = vec![-1i64; n];
    let mut delta = vec![0.0f64; n];
    let mut preds: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut stack = Vec::with_capacity(n);
    let mut queue = VecDeque::with_capacity(n);

    for s in 0..n {
        for v in 0..n {
            preds[v].clear();
            sigma[v] = 0.0;
            dist[v] = -1;
            delta[v] = 0.0;
        }
        sigma[s] = 1.0;
        dist[s] = 0;
        queue.push_back(s);
        while let Some(v) = queue.pop_front() {
            stack.push(v);
            for &w in &adj[v] {
                if dist[w] < 0 {
                    dist[w] = dist[v] + 1;
                    queue.push_back(w);
                }
                if dist[w] == dist[v] + 1 {
                    sigma[w] += sigma[v];
                    preds[w].push(v);
                }
            }
        }
        while let Some(w) = stack.pop() {
            for &v in &preds[w] {
                delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w]);
            }
            if w != s {
                cb[w] += delta[w];
            }
        }
    }
    if !g.is_directed() {
        for c in &mut cb {
            *c /= 2.0;
        }
    }
    cb
}

pub(crate) fn betweenness_vec(g: &Graph) -> &[f64] {
    g.cache.betweenness.get_or_init(|| brandes(g))
}

/// Unnormalized betweenness on hop-count shortest paths. Parallel links and
/// self-loops do not create extra paths.
pub fn betweenness_centrality(g: &Graph) -> BTreeMap<String, f64> {
    let b = betweenness_vec(g);
    g.nodes().iter().zip(b).map(|(n, &v)| (n.id.clone(), v)).collect()
}

pub(crate) fn closeness_vec(g: &Graph) -> &[f64] {
    g.cache.closeness.get_or_init(|| {
        (0..g.nodes().len())
            .map(|v| {
                hop_distances(g, v, false)
                    .into_iter()
                    .flatten()
                    .filter(|&d| d > 0)
                    .map(|d| 1.0 / d as f64)
                    .sum()
            })
            .collect()
    })
}

/// Harmonic closeness: sum of 1/d(v, u) over reachable u != v.
pub fn closeness_centrality(g: &Graph) -> BTreeMap<String, f64> {
    let c = closeness_vec(g);
    g.nodes().iter().zip(c).map(|(n, &v)| (n.id.clone(), v)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::tests::graph;

    #[test]
    fn path_betweenness() {
        let g = graph(&["A", "B", "C"], &[("A", "B"), ("B", "C")], false);
        let b = betweenness_centrality(&g);
        assert_eq!(b["B"], 1.0);
        assert_eq!(b["A"], 0.0);
        assert_eq!(b["C"], 0.0);
    }

    #[test]
    fn directed_path_betweenness_is_not_halved() {
        let g = graph(&["A", "B", "C"], &[("A", "B"), ("B", "C")], true);
        assert_eq!(betweenness_centrality(&g)["B"], 1.0);
    }

    #[test]
    fn two_components_have_no_intermediaries() {
        let g = graph(&["a", "b", "c", "d"], &[("a", "b"), ("c", "d")], false);
        assert!(betweenness_centrality(&g).values().all(|&v| v == 0.0));
    }

    #[test]
    fn harmonic_closeness() {
        let k3 = graph(&["a", "b", "c"], &[("a", "b"), ("b", "c"), ("c", "a")], false);
        assert_eq!(closeness_centrality(&k3)["a"], 2.0);
        let iso = graph(&["a", "b", "z"], &[("a", "b")], false);
        assert_eq!(closeness_centrality(&iso)["z"], 0.0);
        let p = graph(&["a", "b", "c"], &[("a", "b"), ("b", "c")], false);
        assert_eq!(closeness_centrality(&p)["a"], 1.5);
    }
}
