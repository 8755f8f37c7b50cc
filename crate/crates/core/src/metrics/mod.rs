//! Graph computations consumed by facts.
//!
//! All functions are pure over an immutable [`Graph`]. Expensive whole-graph
//! results (adjacency, centralities, communities) are memoized per graph in a
//! [`MetricsCache`] shared by clones of the graph.

mod centrality;
mod community;
mod paths;
mod temporal;

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Graph, GraphError, Link, SubgraphRef};

pub use centrality::{betweenness_centrality, closeness_centrality, hop_distances};
pub(crate) use centrality::{betweenness_vec, closeness_vec};
pub use community::{detect_communities, modularity, CommunityPartition};
pub use paths::{k_shortest_paths, PathResult};
pub use temporal::{temporal_slices, TimeSlice};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MetricsError {
    #[error("metric needs at least two nodes")]
    DegenerateGraph,
    #[error("unknown node {0:?}")]
    UnknownNode(String),
    #[error("the two nodes must differ")]
    SameNode,
    #[error("links carry no weights")]
    Unweighted,
    #[error("links carry no timestamps")]
    NotTemporal,
    #[error("nodes carry no coordinates")]
    NotGeographic,
    #[error("rank {rank} out of range 1..={available}")]
    RankOutOfRange { rank: usize, available: usize },
    #[error("scope is empty")]
    EmptyScope,
    #[error("subgraphs overlap")]
    OverlappingSubgraphs,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl MetricsError {
    pub fn code(&self) -> &'static str {
        match self {
            MetricsError::DegenerateGraph => "DegenerateGraph",
            MetricsError::UnknownNode(_) => "UnknownNode",
            MetricsError::SameNode => "SameNode",
            MetricsError::Unweighted => "Unweighted",
            MetricsError::NotTemporal => "NotTemporal",
            MetricsError::NotGeographic => "NotGeographic",
            MetricsError::RankOutOfRange { .. } => "RankOutOfRange",
            MetricsError::EmptyScope => "EmptyScope",
            MetricsError::OverlappingSubgraphs => "OverlappingSubgraphs",
            MetricsError::InvalidArgument(_) => "InvalidArgument",
        }
    }
}

impl From<GraphError> for MetricsError {
    fn from(e: GraphError) -> Self {
        match e {
            GraphError::UnknownNode(id) => MetricsError::UnknownNode(id),
            GraphError::EmptySelection => MetricsError::EmptyScope,
            other => MetricsError::InvalidArgument(other.to_string()),
        }
    }
}

pub type Result<T> = std::result::Result<T, MetricsError>;

#[derive(Debug, Default)]
pub(crate) struct MetricsCache {
    adjacency: OnceLock<Adjacency>,
    betweenness: OnceLock<Vec<f64>>,
    closeness: OnceLock<Vec<f64>>,
    communities: OnceLock<CommunityPartition>,
}

/// Simple adjacency: sorted, deduplicated, self-loops dropped.
#[derive(Debug)]
pub(crate) struct Adjacency {
    /// Direction-aware successors (equal to `both` for undirected graphs).
    pub out: Vec<Vec<usize>>,
    /// Neighbors ignoring direction.
    pub both: Vec<Vec<usize>>,
}

pub(crate) fn adjacency(g: &Graph) -> &Adjacency {
    g.cache.adjacency.get_or_init(|| {
        let n = g.nodes().len();
        let mut out = vec![BTreeSet::new(); n];
        let mut both = vec![BTreeSet::new(); n];
        for &(s, t) in g.endpoints() {
            if s == t {
                continue;
            }
            out[s].insert(t);
            if !g.is_directed() {
                out[t].insert(s);
            }
            both[s].insert(t);
            both[t].insert(s);
        }
        let flatten = |v: Vec<BTreeSet<usize>>| v.into_iter().map(|s| s.into_iter().collect()).collect();
        Adjacency { out: flatten(out), both: flatten(both) }
    })
}

/// Which part of the graph an aggregate runs over.
#[derive(Debug, Clone, Copy)]
pub enum Scope<'a> {
    Whole,
    Subgraph(&'a SubgraphRef),
}

/// Node and link indices covered by a scope; links are those induced by the nodes.
pub(crate) fn resolve(g: &Graph, scope: Scope<'_>) -> Result<(Vec<usize>, Vec<usize>)> {
    match scope {
        Scope::Whole => Ok(((0..g.nodes().len()).collect(), (0..g.links().len()).collect())),
        Scope::Subgraph(sg) => {
            let nodes = node_indices(g, &sg.node_ids)?;
            let links = induced_links(g, &nodes);
            Ok((nodes, links))
        }
    }
}

pub(crate) fn node_indices(g: &Graph, ids: &BTreeSet<String>) -> Result<Vec<usize>> {
    let mut v = ids.iter().map(|id| g.node_idx(id)).collect::<std::result::Result<Vec<_>, _>>()?;
    v.sort_unstable();
    Ok(v)
}

pub(crate) fn induced_links(g: &Graph, nodes: &[usize]) -> Vec<usize> {
    let mut member = vec![false; g.nodes().len()];
    for &n in nodes {
        member[n] = true;
    }
    g.endpoints()
        .iter()
        .enumerate()
        .filter(|(_, (s, t))| member[*s] && member[*t])
        .map(|(i, _)| i)
        .collect()
}

pub fn node_count(g: &Graph) -> usize {
    g.nodes().len()
}

pub fn link_count(g: &Graph) -> usize {
    g.links().len()
}

/// Density over `node_count` nodes and the given links. Distinct node pairs
/// with at least one link are counted once; self-loops are ignored.
pub(crate) fn density_of(g: &Graph, node_count: usize, links: &[usize]) -> Result<f64> {
    if node_count < 2 {
        return Err(MetricsError::DegenerateGraph);
    }
    let pairs: BTreeSet<(usize, usize)> = links
        .iter()
        .map(|&l| g.endpoints()[l])
        .filter(|(s, t)| s != t)
        .map(|(s, t)| if g.is_directed() || s < t { (s, t) } else { (t, s) })
        .collect();
    let n = node_count as f64;
    let possible = n * (n - 1.0);
    let l = pairs.len() as f64;
    Ok(if g.is_directed() { l / possible } else { 2.0 * l / possible })
}

pub fn density(g: &Graph, scope: Scope<'_>) -> Result<f64> {
    let (nodes, links) = resolve(g, scope)?;
    density_of(g, nodes.len(), &links)
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Degree {
    #[serde(rename = "in")]
    pub in_degree: usize,
    #[serde(rename = "out")]
    pub out_degree: usize,
    pub total: usize,
}

/// Per-node degrees over the links of `links`, indexed like `g.nodes()`.
pub(crate) fn degree_vec(g: &Graph, links: &[usize]) -> Vec<Degree> {
    let mut deg = vec![Degree::default(); g.nodes().len()];
    for &l in links {
        let (s, t) = g.endpoints()[l];
        deg[s].out_degree += 1;
        deg[t].in_degree += 1;
        deg[s].total += 1;
        deg[t].total += 1;
    }
    if !g.is_directed() {
        for d in &mut deg {
            d.in_degree = d.total;
            d.out_degree = d.total;
        }
    }
    deg
}

pub fn degree_centrality(g: &Graph, scope: Scope<'_>) -> Result<BTreeMap<String, Degree>> {
    let (nodes, links) = resolve(g, scope)?;
    let deg = degree_vec(g, &links);
    Ok(nodes.into_iter().map(|n| (g.nodes()[n].id.clone(), deg[n])).collect())
}

/// Orders node indices by descending score, ties by ascending id. Scores are
/// compared after rounding to 1e-9 so floating noise cannot reorder ties.
pub(crate) fn rank_nodes_by(g: &Graph, nodes: &[usize], score: impl Fn(usize) -> f64) -> Vec<usize> {
    let mut keyed: Vec<(i128, &str, usize)> = nodes
        .iter()
        .map(|&n| ((score(n) * 1e9).round() as i128, g.nodes()[n].id.as_str(), n))
        .collect();
    keyed.sort_by(|a, b| b.0.cmp(&a.0).then_with(|| a.1.cmp(b.1)));
    keyed.into_iter().map(|(_, _, n)| n).collect()
}

/// 1-based position of `node` by total degree (descending, ties by id).
pub fn connectivity_ranking(g: &Graph, node: &str) -> Result<usize> {
    let idx = g.node_idx(node)?;
    let all: Vec<usize> = (0..g.links().len()).collect();
    let deg = degree_vec(g, &all);
    let nodes: Vec<usize> = (0..g.nodes().len()).collect();
    let order = rank_nodes_by(g, &nodes, |n| deg[n].total as f64);
    Ok(order.iter().position(|&n| n == idx).expect("node ranked") + 1)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Extremum {
    Strongest,
    Weakest,
}

/// Link indices of `links` ordered by weight (descending for strongest), ties by id.
pub(crate) fn order_links(g: &Graph, links: &[usize], which: Extremum) -> Result<Vec<usize>> {
    if !g.capabilities().weighted {
        return Err(MetricsError::Unweighted);
    }
    let mut v = links.to_vec();
    let w = |l: usize| g.links()[l].weight.unwrap_or(0.0);
    v.sort_by(|&a, &b| {
        let by_weight = match which {
            Extremum::Strongest => w(b).total_cmp(&w(a)),
            Extremum::Weakest => w(a).total_cmp(&w(b)),
        };
        by_weight.then_with(|| g.links()[a].id.cmp(&g.links()[b].id))
    });
    Ok(v)
}

pub(crate) fn pick_rank<T: Copy>(ordered: &[T], rank: usize) -> Result<T> {
    if rank == 0 || rank > ordered.len() {
        return Err(MetricsError::RankOutOfRange { rank, available: ordered.len() });
    }
    Ok(ordered[rank - 1])
}

pub fn link_extremum<'g>(g: &'g Graph, scope: Scope<'_>, which: Extremum, rank: usize) -> Result<&'g Link> {
    let (_, links) = resolve(g, scope)?;
    let ordered = order_links(g, &links, which)?;
    Ok(&g.links()[pick_rank(&ordered, rank)?])
}

pub(crate) fn weight_sum(g: &Graph, links: &[usize]) -> Result<f64> {
    if !g.capabilities().weighted {
        return Err(MetricsError::Unweighted);
    }
    Ok(links.iter().map(|&l| g.links()[l].weight.unwrap_or(0.0)).sum())
}

pub fn total_link_weight(g: &Graph, scope: Scope<'_>) -> Result<f64> {
    let (_, links) = resolve(g, scope)?;
    weight_sum(g, &links)
}

pub fn average_link_weight(g: &Graph, scope: Scope<'_>) -> Result<f64> {
    let (_, links) = resolve(g, scope)?;
    let total = weight_sum(g, &links)?;
    if links.is_empty() {
        return Err(MetricsError::EmptyScope);
    }
    Ok(total / links.len() as f64)
}

fn two_nodes(g: &Graph, a: &str, b: &str) -> Result<(usize, usize)> {
    let ai = g.node_idx(a)?;
    let bi = g.node_idx(b)?;
    if ai == bi {
        return Err(MetricsError::SameNode);
    }
    Ok((ai, bi))
}

pub fn common_neighbors(g: &Graph, a: &str, b: &str) -> Result<BTreeSet<String>> {
    let (ai, bi) = two_nodes(g, a, b)?;
    let adj = adjacency(g);
    let na: BTreeSet<usize> = adj.both[ai].iter().copied().collect();
    Ok(adj.both[bi]
        .iter()
        .filter(|n| na.contains(n) && **n != ai && **n != bi)
        .map(|&n| g.nodes()[n].id.clone())
        .collect())
}

/// Links whose endpoints are exactly `a` and `b`, in either direction.
pub fn links_joining(g: &Graph, a: &str, b: &str) -> Result<Vec<usize>> {
    let (ai, bi) = two_nodes(g, a, b)?;
    Ok(g.endpoints()
        .iter()
        .enumerate()
        .filter(|(_, &(s, t))| (s == ai && t == bi) || (s == bi && t == ai))
        .map(|(i, _)| i)
        .collect())
}

/// Node indices within `radius` hops of `center`, ignoring direction.
pub(crate) fn within_hops(g: &Graph, center: usize, radius: usize) -> Vec<usize> {
    let adj = adjacency(g);
    let mut dist = vec![usize::MAX; g.nodes().len()];
    dist[center] = 0;
    let mut queue = VecDeque::from([center]);
    while let Some(u) = queue.pop_front() {
        if dist[u] == radius {
            continue;
        }
        for &v in &adj.both[u] {
            if dist[v] == usize::MAX {
                dist[v] = dist[u] + 1;
                queue.push_back(v);
            }
        }
    }
    (0..dist.len()).filter(|&n| dist[n] != usize::MAX).collect()
}

pub fn ego_network(g: &Graph, node: &str, radius: usize) -> Result<SubgraphRef> {
    let center = g.node_idx(node)?;
    let ids = within_hops(g, center, radius)
        .into_iter()
        .map(|n| g.nodes()[n].id.clone())
        .collect();
    Ok(g.induce(&ids)?)
}

pub fn links_between(g: &Graph, a: &SubgraphRef, b: &SubgraphRef) -> Result<BTreeSet<String>> {
    Ok(links_between_idx(g, a, b)?.into_iter().map(|l| g.links()[l].id.clone()).collect())
}

pub(crate) fn links_between_idx(g: &Graph, a: &SubgraphRef, b: &SubgraphRef) -> Result<Vec<usize>> {
    if a.node_ids.intersection(&b.node_ids).next().is_some() {
        return Err(MetricsError::OverlappingSubgraphs);
    }
    let n = g.nodes().len();
    let mut side = vec![0u8; n];
    for i in node_indices(g, &a.node_ids)? {
        side[i] = 1;
    }
    for i in node_indices(g, &b.node_ids)? {
        side[i] = 2;
    }
    Ok(g.endpoints()
        .iter()
        .enumerate()
        .filter(|(_, &(s, t))| matches!((side[s], side[t]), (1, 2) | (2, 1)))
        .map(|(i, _)| i)
        .collect())
}

/// Links with exactly one endpoint inside `nodes`.
pub(crate) fn boundary_links(g: &Graph, nodes: &[usize]) -> Vec<usize> {
    let mut member = vec![false; g.nodes().len()];
    for &n in nodes {
        member[n] = true;
    }
    g.endpoints()
        .iter()
        .enumerate()
        .filter(|(_, &(s, t))| member[s] != member[t])
        .map(|(i, _)| i)
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct GeoExtent {
    pub min_lat: f64,
    pub max_lat: f64,
    pub min_lon: f64,
    pub max_lon: f64,
}

pub fn geo_extent(g: &Graph) -> Result<GeoExtent> {
    if !g.capabilities().geographic {
        return Err(MetricsError::NotGeographic);
    }
    let mut it = g.nodes().iter().filter_map(|n| n.coord);
    let first = it.next().ok_or(MetricsError::NotGeographic)?;
    let init = GeoExtent { min_lat: first.lat, max_lat: first.lat, min_lon: first.lon, max_lon: first.lon };
    Ok(it.fold(init, |e, c| GeoExtent {
        min_lat: e.min_lat.min(c.lat),
        max_lat: e.max_lat.max(c.lat),
        min_lon: e.min_lon.min(c.lon),
        max_lon: e.max_lon.max(c.lon),
    }))
}

/// Great-circle distance in kilometres.
pub fn haversine_km(a: crate::graph::Coord, b: crate::graph::Coord) -> f64 {
    const R: f64 = 6371.0088;
    let (la1, la2) = (a.lat.to_radians(), b.lat.to_radians());
    let dlat = la2 - la1;
    let dlon = (b.lon - a.lon).to_radians();
    let h = (dlat / 2.0).sin().powi(2) + la1.cos() * la2.cos() * (dlon / 2.0).sin().powi(2);
    2.0 * R * h.sqrt().min(1.0).asin()
}

/// Weakly connected components as sorted node index lists, ordered by
/// descending size then smallest member.
pub(crate) fn components(g: &Graph) -> Vec<Vec<usize>> {
    let adj = adjacency(g);
    let n = g.nodes().len();
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut comp = vec![start];
        let mut queue = VecDeque::from([start]);
        while let Some(u) = queue.pop_front() {
            for &v in &adj.both[u] {
                if !seen[v] {
                    seen[v] = true;
                    comp.push(v);
                    queue.push_back(v);
                }
            }
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a[0].cmp(&b[0])));
    out
}
