//! Computation bindings. Each variant names a metric with its fixed
//! parameters and produces the values, highlights and focus of a slide.

use std::collections::{BTreeMap, BTreeSet};

use chrono::DateTime;
use serde::{Deserialize, Serialize};

use super::format::{format_real, join_and, ordinal, FactValue};
use super::{FactError, Params};
use crate::graph::Graph;
use crate::metrics::{
    self, adjacency, betweenness_vec, boundary_links, closeness_vec, components, degree_vec, density_of,
    detect_communities, haversine_km, hop_distances, induced_links, links_between_idx, order_links, pick_rank,
    rank_nodes_by, weight_sum, within_hops, Extremum, MetricsError, TimeSlice,
};
use crate::subject::{path_links, Subject, SubjectError, SubjectKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NodeMeasure {
    Degree,
    InDegree,
    OutDegree,
    Strength,
    Betweenness,
    Closeness,
}

impl NodeMeasure {
    fn integral(self) -> bool {
        matches!(self, NodeMeasure::Degree | NodeMeasure::InDegree | NodeMeasure::OutDegree)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ClusterMeasure {
    Size,
    Links,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SliceMeasure {
    Links,
    Density,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Distance {
    Longest,
    Shortest,
}

fn three() -> usize {
    3
}

fn five() -> usize {
    5
}

fn one() -> usize {
    1
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "kebab-case")]
pub enum Computation {
    // whole network
    NodeCount,
    LinkCount,
    Density,
    GeoExtent,
    GeoCenter,
    TopNodes {
        by: NodeMeasure,
        #[serde(default = "three")]
        count: usize,
    },
    NodeExtremum {
        by: NodeMeasure,
    },
    AverageNodeMeasure {
        by: NodeMeasure,
    },
    TotalWeight,
    AverageWeight,
    MedianWeight,
    WeightRange,
    LinkExtremum {
        which: Extremum,
    },
    WeightOutliers,
    DegreeOutliers,
    IsolatedNodes,
    LeafNodes,
    SelfLoops,
    ParallelLinks,
    ReciprocalLinks,
    ClusterCount,
    ClusterSizes,
    ClusterExtremum {
        by: ClusterMeasure,
    },
    Modularity,
    ComponentCount,
    LargestComponent,
    Diameter,
    AveragePathLength,
    LinkDistanceExtremum {
        which: Distance,
    },
    AverageLinkDistance,
    TimeSpan,
    SliceLinkCounts {
        #[serde(default = "five")]
        bins: usize,
    },
    SliceDensities {
        #[serde(default = "five")]
        bins: usize,
    },
    SliceExtremum {
        #[serde(default = "five")]
        bins: usize,
        by: SliceMeasure,
    },
    DensityTrend {
        #[serde(default = "five")]
        bins: usize,
    },
    ActiveNodes {
        #[serde(default = "five")]
        bins: usize,
    },
    // one node selection
    SubgraphSize,
    SubgraphLinkCount,
    SubgraphDensity,
    SubgraphNodeExtremum {
        by: NodeMeasure,
    },
    SubgraphTotalWeight,
    SubgraphAverageWeight,
    SubgraphLinkExtremum {
        which: Extremum,
    },
    ExternalLinkCount,
    ExternalLinkExtremum {
        which: Extremum,
    },
    ExternalNeighbors,
    SubgraphAverageDegree,
    SubgraphClusters,
    // two node selections
    BetweenLinkCount,
    BetweenTotalWeight,
    BetweenLinkExtremum {
        which: Extremum,
    },
    SizeComparison,
    DensityComparison,
    WeightComparison,
    // one node
    NodeDegree,
    NodeInOut,
    NodeRanking,
    NodeStrength,
    NodeBetweenness,
    NodeCloseness,
    NodeCluster,
    NodeLinkExtremum {
        which: Extremum,
    },
    NodeLocation,
    EgoSize {
        #[serde(default = "one")]
        radius: usize,
    },
    EgoLinkCount {
        #[serde(default = "one")]
        radius: usize,
    },
    EgoDensity {
        #[serde(default = "one")]
        radius: usize,
    },
    MutualConnections,
    SecondDegree,
    StrongConnections,
    EgoNodeExtremum {
        by: NodeMeasure,
    },
    // two nodes
    JoiningLinks,
    DegreeComparison,
    StrengthComparison,
    CommonNeighbors,
    HopDistance,
    SameCluster,
    PathsOverview {
        #[serde(default = "three")]
        k: usize,
    },
    PathLengths {
        #[serde(default = "three")]
        k: usize,
    },
    PathWeights {
        #[serde(default = "three")]
        k: usize,
    },
    PathMinWeights {
        #[serde(default = "three")]
        k: usize,
    },
    PathDetail {
        #[serde(default = "three")]
        k: usize,
    },
    // ordered path
    PathSummary,
    PathHopWeights,
    PathWeakestHop,
    PathNodeDetails,
    PathNeighborhood,
    PathAverageDegree,
    PathNodeExtremum {
        by: NodeMeasure,
    },
}

impl Computation {
    pub fn subject_kind(&self) -> SubjectKind {
        use Computation::*;
        match self {
            NodeCount | LinkCount | Density | GeoExtent | GeoCenter | TopNodes { .. } | NodeExtremum { .. }
            | AverageNodeMeasure { .. } | TotalWeight | AverageWeight | MedianWeight | WeightRange
            | LinkExtremum { .. } | WeightOutliers | DegreeOutliers | IsolatedNodes | LeafNodes | SelfLoops
            | ParallelLinks | ReciprocalLinks | ClusterCount | ClusterSizes | ClusterExtremum { .. } | Modularity
            | ComponentCount | LargestComponent | Diameter | AveragePathLength | LinkDistanceExtremum { .. }
            | AverageLinkDistance | TimeSpan | SliceLinkCounts { .. } | SliceDensities { .. }
            | SliceExtremum { .. } | DensityTrend { .. } | ActiveNodes { .. } => SubjectKind::None,
            SubgraphSize | SubgraphLinkCount | SubgraphDensity | SubgraphNodeExtremum { .. } | SubgraphTotalWeight
            | SubgraphAverageWeight | SubgraphLinkExtremum { .. } | ExternalLinkCount | ExternalLinkExtremum { .. }
            | ExternalNeighbors | SubgraphAverageDegree | SubgraphClusters => SubjectKind::Subgraph,
            BetweenLinkCount | BetweenTotalWeight | BetweenLinkExtremum { .. } | SizeComparison
            | DensityComparison | WeightComparison => SubjectKind::SubgraphPair,
            NodeDegree | NodeInOut | NodeRanking | NodeStrength | NodeBetweenness | NodeCloseness | NodeCluster
            | NodeLinkExtremum { .. } | NodeLocation | EgoSize { .. } | EgoLinkCount { .. } | EgoDensity { .. }
            | MutualConnections | SecondDegree | StrongConnections | EgoNodeExtremum { .. } => SubjectKind::Node,
            JoiningLinks | DegreeComparison | StrengthComparison | CommonNeighbors | HopDistance | SameCluster
            | PathsOverview { .. } | PathLengths { .. } | PathWeights { .. } | PathMinWeights { .. }
            | PathDetail { .. } => SubjectKind::NodePair,
            PathSummary | PathHopWeights | PathWeakestHop | PathNodeDetails | PathNeighborhood
            | PathAverageDegree | PathNodeExtremum { .. } => SubjectKind::Path,
        }
    }

    pub fn rankable(&self) -> bool {
        use Computation::*;
        matches!(
            self,
            NodeExtremum { .. }
                | LinkExtremum { .. }
                | ClusterExtremum { .. }
                | LinkDistanceExtremum { .. }
                | SliceExtremum { .. }
                | SubgraphNodeExtremum { .. }
                | SubgraphLinkExtremum { .. }
                | ExternalLinkExtremum { .. }
                | BetweenLinkExtremum { .. }
                | NodeLinkExtremum { .. }
                | EgoNodeExtremum { .. }
                | PathDetail { .. }
                | PathNodeExtremum { .. }
        )
    }

    fn measure(&self) -> Option<NodeMeasure> {
        use Computation::*;
        match self {
            TopNodes { by, .. }
            | NodeExtremum { by }
            | AverageNodeMeasure { by }
            | SubgraphNodeExtremum { by }
            | EgoNodeExtremum { by }
            | PathNodeExtremum { by } => Some(*by),
            _ => None,
        }
    }

    pub fn needs_weight(&self) -> bool {
        use Computation::*;
        self.measure() == Some(NodeMeasure::Strength)
            || matches!(
                self,
                TotalWeight
                    | AverageWeight
                    | MedianWeight
                    | WeightRange
                    | LinkExtremum { .. }
                    | WeightOutliers
                    | SubgraphTotalWeight
                    | SubgraphAverageWeight
                    | SubgraphLinkExtremum { .. }
                    | ExternalLinkExtremum { .. }
                    | BetweenTotalWeight
                    | BetweenLinkExtremum { .. }
                    | WeightComparison
                    | NodeStrength
                    | NodeLinkExtremum { .. }
                    | StrongConnections
                    | StrengthComparison
                    | PathWeights { .. }
                    | PathMinWeights { .. }
                    | PathHopWeights
                    | PathWeakestHop
            )
    }

    pub fn needs_direction(&self) -> bool {
        matches!(self.measure(), Some(NodeMeasure::InDegree | NodeMeasure::OutDegree))
            || matches!(self, Computation::NodeInOut | Computation::ReciprocalLinks)
    }

    pub fn needs_temporal(&self) -> bool {
        use Computation::*;
        matches!(
            self,
            TimeSpan | SliceLinkCounts { .. } | SliceDensities { .. } | SliceExtremum { .. } | DensityTrend { .. }
                | ActiveNodes { .. }
        )
    }

    pub fn needs_geographic(&self) -> bool {
        use Computation::*;
        matches!(self, GeoExtent | GeoCenter | LinkDistanceExtremum { .. } | AverageLinkDistance | NodeLocation)
    }
}

/// What a computation produced, before caption rendering.
#[derive(Debug, Default)]
pub(crate) struct Output {
    pub values: BTreeMap<String, FactValue>,
    pub nodes: BTreeSet<usize>,
    pub links: BTreeSet<usize>,
    pub focus: Subject,
    pub variant: Option<&'static str>,
}

impl Output {
    fn set(&mut self, key: &str, v: impl Into<FactValue>) -> &mut Self {
        self.values.insert(key.to_string(), v.into());
        self
    }

    fn real(&mut self, key: &str, v: f64) -> &mut Self {
        self.set(key, FactValue::Real(v))
    }

    fn mark_link(&mut self, g: &Graph, l: usize) {
        let (s, t) = g.endpoints()[l];
        self.links.insert(l);
        self.nodes.insert(s);
        self.nodes.insert(t);
    }

    /// Highlights a node set with the links it induces.
    fn mark_set(&mut self, g: &Graph, nodes: &[usize]) {
        self.nodes.extend(nodes.iter().copied());
        self.links.extend(induced_links(g, nodes));
    }

    fn mark_star(&mut self, g: &Graph, n: usize) {
        self.nodes.insert(n);
        for l in incident(g, n) {
            self.mark_link(g, l);
        }
    }
}

type R<T> = Result<T, FactError>;

fn degenerate(what: &str) -> FactError {
    FactError::DegenerateGraph(what.to_string())
}

fn label(g: &Graph, n: usize) -> String {
    g.nodes()[n].label.clone()
}

fn id(g: &Graph, n: usize) -> String {
    g.nodes()[n].id.clone()
}

fn all_nodes(g: &Graph) -> Vec<usize> {
    (0..g.nodes().len()).collect()
}

fn all_links(g: &Graph) -> Vec<usize> {
    (0..g.links().len()).collect()
}

fn incident(g: &Graph, n: usize) -> Vec<usize> {
    g.endpoints()
        .iter()
        .enumerate()
        .filter(|(_, &(s, t))| s == n || t == n)
        .map(|(l, _)| l)
        .collect()
}

fn weight(g: &Graph, l: usize) -> f64 {
    g.links()[l].weight.unwrap_or(0.0)
}

fn mean(xs: &[f64]) -> Option<f64> {
    if xs.is_empty() {
        None
    } else {
        Some(xs.iter().sum::<f64>() / xs.len() as f64)
    }
}

fn names(g: &Graph, nodes: &[usize], limit: usize) -> String {
    let mut items: Vec<String> = nodes.iter().take(limit).map(|&n| label(g, n)).collect();
    if nodes.len() > limit {
        items.push(format!("{} others", nodes.len() - limit));
    }
    join_and(&items)
}

fn numbers(xs: impl IntoIterator<Item = FactValue>) -> String {
    join_and(&xs.into_iter().map(|v| v.render()).collect::<Vec<_>>())
}

fn time_text(t: i64) -> String {
    match DateTime::from_timestamp(t, 0) {
        Some(dt) if t % 86_400 == 0 => dt.format("%Y-%m-%d").to_string(),
        Some(dt) => dt.format("%Y-%m-%d %H:%M:%S").to_string(),
        None => t.to_string(),
    }
}

fn param(params: &Params, key: &str, default: usize) -> R<usize> {
    match params.get(key) {
        None => Ok(default),
        Some(v) => v
            .as_u64()
            .filter(|&n| n >= 1)
            .map(|n| n as usize)
            .ok_or_else(|| FactError::InvalidParameter(format!("{key} must be a positive integer"))),
    }
}

fn node_subject(g: &Graph, nodes: &[usize]) -> Subject {
    let ids: BTreeSet<String> = nodes.iter().map(|&n| id(g, n)).collect();
    match g.induce(&ids) {
        Ok(sg) => Subject::Subgraph(sg),
        Err(_) => Subject::None,
    }
}

fn pair_focus(g: &Graph, l: usize) -> Subject {
    let (s, t) = g.endpoints()[l];
    if s == t {
        Subject::node(id(g, s))
    } else {
        Subject::node_pair(id(g, s), id(g, t))
    }
}

/// Per-node scores over `links` (degree and strength) or the whole graph
/// (centralities), indexed like `g.nodes()`.
fn measure(g: &Graph, by: NodeMeasure, links: &[usize]) -> R<Vec<f64>> {
    Ok(match by {
        NodeMeasure::Degree => degree_vec(g, links).iter().map(|d| d.total as f64).collect(),
        NodeMeasure::InDegree => degree_vec(g, links).iter().map(|d| d.in_degree as f64).collect(),
        NodeMeasure::OutDegree => degree_vec(g, links).iter().map(|d| d.out_degree as f64).collect(),
        NodeMeasure::Strength => {
            if !g.capabilities().weighted {
                return Err(MetricsError::Unweighted.into());
            }
            let mut s = vec![0.0; g.nodes().len()];
            for &l in links {
                let (a, b) = g.endpoints()[l];
                s[a] += weight(g, l);
                if a != b {
                    s[b] += weight(g, l);
                }
            }
            s
        }
        NodeMeasure::Betweenness => betweenness_vec(g).to_vec(),
        NodeMeasure::Closeness => closeness_vec(g).to_vec(),
    })
}

fn measure_value(by: NodeMeasure, x: f64) -> FactValue {
    if by.integral() {
        FactValue::Int(x.round() as i64)
    } else {
        FactValue::Real(x)
    }
}

fn ranked_list(g: &Graph, order: &[usize], scores: &[f64], by: NodeMeasure) -> String {
    let items: Vec<String> = order
        .iter()
        .map(|&n| format!("{} ({})", label(g, n), measure_value(by, scores[n]).render()))
        .collect();
    join_and(&items)
}

/// Picks the `rank`-th node of `nodes` by `by` and describes it.
fn node_extremum(g: &Graph, nodes: &[usize], links: &[usize], by: NodeMeasure, rank: usize) -> R<Output> {
    let scores = measure(g, by, links)?;
    let order = rank_nodes_by(g, nodes, |n| scores[n]);
    let n = pick_rank(&order, rank)?;
    let mut out = Output::default();
    out.set("node", label(g, n)).set("value", measure_value(by, scores[n]));
    out.mark_star(g, n);
    out.focus = Subject::node(id(g, n));
    Ok(out)
}

fn link_pick(g: &Graph, links: &[usize], which: Extremum, rank: usize) -> R<Output> {
    let order = order_links(g, links, which)?;
    let l = pick_rank(&order, rank)?;
    let (s, t) = g.endpoints()[l];
    let mut out = Output::default();
    out.set("source", label(g, s)).set("target", label(g, t)).real("value", weight(g, l));
    out.mark_link(g, l);
    out.focus = pair_focus(g, l);
    Ok(out)
}

fn expect_node(g: &Graph, s: &Subject) -> R<usize> {
    match s {
        Subject::Node { id } => node_idx(g, id),
        other => Err(FactError::SubjectMismatch { expected: SubjectKind::Node, found: other.kind() }),
    }
}

fn expect_pair(g: &Graph, s: &Subject) -> R<(usize, usize)> {
    match s {
        Subject::NodePair { first, second } => {
            let (a, b) = (node_idx(g, first)?, node_idx(g, second)?);
            if a == b {
                return Err(SubjectError::SameNode.into());
            }
            Ok((a, b))
        }
        other => Err(FactError::SubjectMismatch { expected: SubjectKind::NodePair, found: other.kind() }),
    }
}

fn node_idx(g: &Graph, node: &str) -> R<usize> {
    g.node_idx(node).map_err(|_| SubjectError::UnknownNode(node.to_string()).into())
}

/// Node indices of a selection (sorted) and the links they induce.
fn selection(g: &Graph, ids: &BTreeSet<String>) -> R<(Vec<usize>, Vec<usize>)> {
    if ids.is_empty() {
        return Err(SubjectError::EmptySelection.into());
    }
    let mut nodes = ids.iter().map(|i| node_idx(g, i)).collect::<R<Vec<usize>>>()?;
    nodes.sort_unstable();
    let links = induced_links(g, &nodes);
    Ok((nodes, links))
}

fn expect_subgraph(g: &Graph, s: &Subject) -> R<(Vec<usize>, Vec<usize>)> {
    match s {
        Subject::Subgraph(sg) => selection(g, &sg.node_ids),
        other => Err(FactError::SubjectMismatch { expected: SubjectKind::Subgraph, found: other.kind() }),
    }
}

type Side = (Vec<usize>, Vec<usize>);

fn expect_subgraph_pair(g: &Graph, s: &Subject) -> R<(Side, Side, Vec<usize>)> {
    match s {
        Subject::SubgraphPair { first, second } => {
            let a = selection(g, &first.node_ids)?;
            let b = selection(g, &second.node_ids)?;
            let between = links_between_idx(g, first, second)?;
            Ok((a, b, between))
        }
        other => Err(FactError::SubjectMismatch { expected: SubjectKind::SubgraphPair, found: other.kind() }),
    }
}

fn expect_path(g: &Graph, s: &Subject) -> R<(Vec<usize>, Vec<usize>)> {
    match s {
        Subject::Path { nodes } => {
            if nodes.len() < 2 {
                return Err(SubjectError::ShortPath.into());
            }
            let idx = nodes.iter().map(|n| node_idx(g, n)).collect::<R<Vec<usize>>>()?;
            let links = path_links(g, nodes)?;
            Ok((idx, links))
        }
        other => Err(FactError::SubjectMismatch { expected: SubjectKind::Path, found: other.kind() }),
    }
}

fn route(g: &Graph, nodes: &[usize]) -> String {
    nodes.iter().map(|&n| label(g, n)).collect::<Vec<_>>().join(" → ")
}

fn slices(g: &Graph, params: &Params, bins: usize) -> R<Vec<TimeSlice>> {
    let bins = param(params, "bins", bins)?;
    Ok(metrics::temporal_slices(g, bins)?)
}

fn slice_nodes(g: &Graph, slice: &TimeSlice) -> BTreeSet<usize> {
    slice
        .link_ids
        .iter()
        .flat_map(|lid| {
            let l = g.link(lid).expect("slice link exists");
            [g.node_idx(&l.source).expect("endpoint"), g.node_idx(&l.target).expect("endpoint")]
        })
        .collect()
}

/// Mean and population standard deviation.
fn spread(xs: &[f64]) -> Option<(f64, f64)> {
    let m = mean(xs)?;
    let var = xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / xs.len() as f64;
    Some((m, var.sqrt()))
}

fn distinct_neighbors(g: &Graph, n: usize) -> Vec<usize> {
    adjacency(g).both[n].clone()
}

fn communities_of(g: &Graph) -> (Vec<usize>, Vec<Vec<usize>>) {
    let p = detect_communities(g);
    let comm: Vec<usize> = g.nodes().iter().map(|n| p.assignment[&n.id]).collect();
    let mut members = vec![Vec::new(); p.community_count()];
    for (n, &c) in comm.iter().enumerate() {
        members[c].push(n);
    }
    (comm, members)
}

pub(crate) fn run(op: &Computation, g: &Graph, subject: &Subject, rank: usize, params: &Params) -> R<Output> {
    use Computation::*;
    let n_nodes = g.nodes().len();
    let n_links = g.links().len();
    let mut out = Output::default();
    match op {
        NodeCount => {
            out.set("value", n_nodes);
        }
        LinkCount => {
            out.set("value", n_links);
        }
        Density => {
            if n_links == 0 {
                return Err(metrics::MetricsError::DegenerateGraph.into());
            }
            out.real("value", density_of(g, n_nodes, &all_links(g))?);
        }
        GeoExtent => {
            let e = metrics::geo_extent(g)?;
            let lat = |n: usize| g.nodes()[n].coord.expect("geographic").lat;
            let lon = |n: usize| g.nodes()[n].coord.expect("geographic").lon;
            let all = all_nodes(g);
            let north = rank_nodes_by(g, &all, lat)[0];
            let south = rank_nodes_by(g, &all, |n| -lat(n))[0];
            let east = rank_nodes_by(g, &all, lon)[0];
            let west = rank_nodes_by(g, &all, |n| -lon(n))[0];
            out.real("minLat", e.min_lat)
                .real("maxLat", e.max_lat)
                .real("minLon", e.min_lon)
                .real("maxLon", e.max_lon)
                .set("north", label(g, north))
                .set("south", label(g, south))
                .set("east", label(g, east))
                .set("west", label(g, west));
            out.nodes.extend([north, south, east, west]);
        }
        GeoCenter => {
            metrics::geo_extent(g)?;
            let coords: Vec<_> = g.nodes().iter().map(|n| n.coord.expect("geographic")).collect();
            let lat = mean(&coords.iter().map(|c| c.lat).collect::<Vec<_>>()).ok_or_else(|| degenerate("no nodes"))?;
            let lon = mean(&coords.iter().map(|c| c.lon).collect::<Vec<_>>()).expect("non-empty");
            let center = crate::graph::Coord { lat, lon };
            let nearest = rank_nodes_by(g, &all_nodes(g), |n| -haversine_km(center, coords[n]))[0];
            out.real("lat", lat)
                .real("lon", lon)
                .set("node", label(g, nearest))
                .real("distance", haversine_km(center, coords[nearest]));
            out.nodes.insert(nearest);
            out.focus = Subject::node(id(g, nearest));
        }
        TopNodes { by, count } => {
            let count = param(params, "count", *count)?;
            if n_nodes == 0 {
                return Err(degenerate("no nodes"));
            }
            let scores = measure(g, *by, &all_links(g))?;
            let order = rank_nodes_by(g, &all_nodes(g), |n| scores[n]);
            let top = &order[..count.min(order.len())];
            out.set("list", ranked_list(g, top, &scores, *by)).set("count", top.len());
            for &n in top {
                out.mark_star(g, n);
            }
            out.focus = node_subject(g, top);
        }
        NodeExtremum { by } => {
            out = node_extremum(g, &all_nodes(g), &all_links(g), *by, rank)?;
        }
        AverageNodeMeasure { by } => {
            let scores = measure(g, *by, &all_links(g))?;
            out.real("value", mean(&scores).ok_or_else(|| degenerate("no nodes"))?);
        }
        TotalWeight => {
            out.real("value", weight_sum(g, &all_links(g))?);
        }
        AverageWeight => {
            out.real("value", metrics::average_link_weight(g, metrics::Scope::Whole)?);
        }
        MedianWeight => {
            let mut w: Vec<f64> = all_links(g).into_iter().map(|l| weight(g, l)).collect();
            if w.is_empty() {
                return Err(degenerate("no links"));
            }
            w.sort_by(f64::total_cmp);
            let mid = w.len() / 2;
            let median = if w.len() % 2 == 1 { w[mid] } else { (w[mid - 1] + w[mid]) / 2.0 };
            out.real("value", median);
        }
        WeightRange => {
            let order = order_links(g, &all_links(g), Extremum::Weakest)?;
            let (Some(&lo), Some(&hi)) = (order.first(), order.last()) else {
                return Err(degenerate("no links"));
            };
            out.real("min", weight(g, lo)).real("max", weight(g, hi));
        }
        LinkExtremum { which } => {
            out = link_pick(g, &all_links(g), *which, rank)?;
        }
        WeightOutliers => {
            let w: Vec<f64> = all_links(g).into_iter().map(|l| weight(g, l)).collect();
            let (m, sd) = spread(&w).ok_or_else(|| degenerate("no links"))?;
            let threshold = m + 2.0 * sd;
            let ordered = order_links(g, &all_links(g), Extremum::Strongest)?;
            let outliers: Vec<usize> = ordered.into_iter().filter(|&l| weight(g, l) > threshold + 1e-9).collect();
            let items: Vec<String> = outliers
                .iter()
                .take(3)
                .map(|&l| {
                    let (s, t) = g.endpoints()[l];
                    format!("{} to {} ({})", label(g, s), label(g, t), format_real(weight(g, l)))
                })
                .collect();
            out.set("count", outliers.len()).real("threshold", threshold).set("list", join_and(&items));
            for &l in &outliers {
                out.mark_link(g, l);
            }
            if outliers.is_empty() {
                out.variant = Some("none");
            }
        }
        DegreeOutliers => {
            let deg = measure(g, NodeMeasure::Degree, &all_links(g))?;
            let (m, sd) = spread(&deg).ok_or_else(|| degenerate("no nodes"))?;
            let threshold = m + 2.0 * sd;
            let order = rank_nodes_by(g, &all_nodes(g), |n| deg[n]);
            let hubs: Vec<usize> = order.into_iter().filter(|&n| deg[n] > threshold + 1e-9).collect();
            out.set("count", hubs.len())
                .real("threshold", threshold)
                .set("list", ranked_list(g, &hubs[..hubs.len().min(5)], &deg, NodeMeasure::Degree));
            for &n in &hubs {
                out.mark_star(g, n);
            }
            if hubs.is_empty() {
                out.variant = Some("none");
            }
        }
        IsolatedNodes => {
            let deg = degree_vec(g, &all_links(g));
            let lonely: Vec<usize> = rank_nodes_by(g, &all_nodes(g), |_| 0.0)
                .into_iter()
                .filter(|&n| deg[n].total == 0)
                .collect();
            out.set("count", lonely.len()).set("list", names(g, &lonely, 5));
            out.nodes.extend(lonely.iter().copied());
            if lonely.is_empty() {
                out.variant = Some("none");
            }
        }
        LeafNodes => {
            let leaves: Vec<usize> = rank_nodes_by(g, &all_nodes(g), |_| 0.0)
                .into_iter()
                .filter(|&n| distinct_neighbors(g, n).len() == 1)
                .collect();
            out.set("count", leaves.len()).set("list", names(g, &leaves, 5));
            for &n in &leaves {
                out.mark_star(g, n);
            }
            if leaves.is_empty() {
                out.variant = Some("none");
            }
        }
        SelfLoops => {
            let loops: Vec<usize> = all_links(g).into_iter().filter(|&l| g.endpoints()[l].0 == g.endpoints()[l].1).collect();
            let nodes: BTreeSet<usize> = loops.iter().map(|&l| g.endpoints()[l].0).collect();
            let nodes: Vec<usize> = rank_nodes_by(g, &nodes.into_iter().collect::<Vec<_>>(), |_| 0.0);
            out.set("count", loops.len()).set("list", names(g, &nodes, 5));
            for &l in &loops {
                out.mark_link(g, l);
            }
            if loops.is_empty() {
                out.variant = Some("none");
            }
        }
        ParallelLinks => {
            let mut groups: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
            for (l, &(s, t)) in g.endpoints().iter().enumerate() {
                let key = if g.is_directed() { (s, t) } else { (s.min(t), s.max(t)) };
                groups.entry(key).or_default().push(l);
            }
            let multi: Vec<&Vec<usize>> = groups.values().filter(|v| v.len() > 1).collect();
            let total: usize = multi.iter().map(|v| v.len()).sum();
            out.set("count", multi.len()).set("links", total);
            for v in &multi {
                for &l in v.iter() {
                    out.mark_link(g, l);
                }
            }
            if multi.is_empty() {
                out.variant = Some("none");
            }
        }
        ReciprocalLinks => {
            let ends: BTreeSet<(usize, usize)> = g.endpoints().iter().copied().filter(|(s, t)| s != t).collect();
            let connected: BTreeSet<(usize, usize)> = ends.iter().map(|&(s, t)| (s.min(t), s.max(t))).collect();
            let mutual: BTreeSet<(usize, usize)> =
                ends.iter().filter(|&&(s, t)| s < t && ends.contains(&(t, s))).copied().collect();
            if connected.is_empty() {
                return Err(degenerate("no links between distinct nodes"));
            }
            out.set("count", mutual.len())
                .real("share", 100.0 * mutual.len() as f64 / connected.len() as f64)
                .set("pairs", connected.len());
            for (l, &(s, t)) in g.endpoints().iter().enumerate() {
                if mutual.contains(&(s.min(t), s.max(t))) {
                    out.mark_link(g, l);
                }
            }
            if mutual.is_empty() {
                out.variant = Some("none");
            }
        }
        ClusterCount => {
            if n_nodes == 0 {
                return Err(degenerate("no nodes"));
            }
            let p = detect_communities(g);
            out.set("value", p.community_count()).real("modularity", p.modularity);
        }
        ClusterSizes => {
            if n_nodes == 0 {
                return Err(degenerate("no nodes"));
            }
            let (_, members) = communities_of(g);
            let mut sizes: Vec<usize> = members.iter().map(Vec::len).collect();
            sizes.sort_unstable_by(|a, b| b.cmp(a));
            out.set("count", sizes.len())
                .set("list", numbers(sizes.iter().map(|&s| FactValue::from(s))))
                .set("largest", sizes[0]);
        }
        ClusterExtremum { by } => {
            let (_, members) = communities_of(g);
            let score = |m: &Vec<usize>| match by {
                ClusterMeasure::Size => m.len(),
                ClusterMeasure::Links => induced_links(g, m).len(),
            };
            let mut order: Vec<&Vec<usize>> = members.iter().collect();
            order.sort_by(|a, b| score(b).cmp(&score(a)).then_with(|| id(g, a[0]).cmp(&id(g, b[0]))));
            let m = pick_rank(&order, rank)?;
            let deg = measure(g, NodeMeasure::Degree, &all_links(g))?;
            let hub = rank_nodes_by(g, m, |n| deg[n])[0];
            out.set("size", m.len()).set("links", induced_links(g, m).len()).set("node", label(g, hub));
            out.mark_set(g, m);
            out.focus = node_subject(g, m);
        }
        Modularity => {
            if n_nodes == 0 {
                return Err(degenerate("no nodes"));
            }
            out.real("value", detect_communities(g).modularity);
        }
        ComponentCount => {
            let comps = components(g);
            let largest = comps.first().ok_or_else(|| degenerate("no nodes"))?.len();
            out.set("value", comps.len()).set("largest", largest);
        }
        LargestComponent => {
            let comps = components(g);
            let c = comps.first().ok_or_else(|| degenerate("no nodes"))?;
            out.set("value", c.len()).real("share", 100.0 * c.len() as f64 / n_nodes as f64);
            out.mark_set(g, c);
            out.focus = node_subject(g, c);
        }
        Diameter => {
            let order = rank_nodes_by(g, &all_nodes(g), |_| 0.0);
            let mut best: Option<(usize, usize, usize)> = None;
            for &s in &order {
                let d = hop_distances(g, s, false);
                for &t in &order {
                    if let Some(dt) = d[t] {
                        if dt > 0 && best.is_none_or(|(b, _, _)| dt > b) {
                            best = Some((dt, s, t));
                        }
                    }
                }
            }
            let (d, s, t) = best.ok_or_else(|| degenerate("no pair of connected nodes"))?;
            out.set("value", d).set("source", label(g, s)).set("target", label(g, t));
            out.nodes.extend([s, t]);
            out.focus = Subject::node_pair(id(g, s), id(g, t));
        }
        AveragePathLength => {
            let mut sum = 0usize;
            let mut pairs = 0usize;
            for s in 0..n_nodes {
                for d in hop_distances(g, s, false).into_iter().flatten().filter(|&d| d > 0) {
                    sum += d;
                    pairs += 1;
                }
            }
            if pairs == 0 {
                return Err(degenerate("no pair of connected nodes"));
            }
            let pairs_reported = if g.is_directed() { pairs } else { pairs / 2 };
            out.real("value", sum as f64 / pairs as f64).set("pairs", pairs_reported);
        }
        LinkDistanceExtremum { which } => {
            metrics::geo_extent(g)?;
            let km = |l: usize| {
                let (s, t) = g.endpoints()[l];
                haversine_km(g.nodes()[s].coord.expect("geographic"), g.nodes()[t].coord.expect("geographic"))
            };
            let mut order = all_links(g);
            order.sort_by(|&a, &b| {
                let by = match which {
                    Distance::Longest => km(b).total_cmp(&km(a)),
                    Distance::Shortest => km(a).total_cmp(&km(b)),
                };
                by.then_with(|| g.links()[a].id.cmp(&g.links()[b].id))
            });
            let l = pick_rank(&order, rank)?;
            let (s, t) = g.endpoints()[l];
            out.set("source", label(g, s)).set("target", label(g, t)).real("value", km(l));
            out.mark_link(g, l);
            out.focus = pair_focus(g, l);
        }
        AverageLinkDistance => {
            metrics::geo_extent(g)?;
            let d: Vec<f64> = g
                .endpoints()
                .iter()
                .map(|&(s, t)| haversine_km(g.nodes()[s].coord.expect("geo"), g.nodes()[t].coord.expect("geo")))
                .collect();
            out.real("value", mean(&d).ok_or_else(|| degenerate("no links"))?);
        }
        TimeSpan => {
            let times: Vec<i64> = g.links().iter().filter_map(|l| l.time).collect();
            if !g.capabilities().temporal {
                return Err(MetricsError::NotTemporal.into());
            }
            let (lo, hi) = (*times.iter().min().expect("temporal"), *times.iter().max().expect("temporal"));
            out.set("start", time_text(lo)).set("end", time_text(hi)).real("days", (hi - lo) as f64 / 86_400.0);
        }
        SliceLinkCounts { bins } => {
            let sl = slices(g, params, *bins)?;
            out.set("bins", sl.len())
                .set("list", numbers(sl.iter().map(|s| FactValue::from(s.link_ids.len()))));
        }
        SliceDensities { bins } => {
            let sl = slices(g, params, *bins)?;
            out.set("bins", sl.len()).set("list", numbers(sl.iter().map(|s| FactValue::Real(s.density))));
        }
        SliceExtremum { bins, by } => {
            let sl = slices(g, params, *bins)?;
            let score = |s: &TimeSlice| match by {
                SliceMeasure::Links => s.link_ids.len() as f64,
                SliceMeasure::Density => s.density,
            };
            let mut order: Vec<&TimeSlice> = sl.iter().collect();
            order.sort_by(|a, b| {
                let (qa, qb) = ((score(a) * 1e9).round() as i128, (score(b) * 1e9).round() as i128);
                qb.cmp(&qa).then(a.index.cmp(&b.index))
            });
            let s = pick_rank(&order, rank)?;
            let value = match by {
                SliceMeasure::Links => FactValue::from(s.link_ids.len()),
                SliceMeasure::Density => FactValue::Real(s.density),
            };
            out.set("start", time_text(s.start_time))
                .set("end", time_text(s.end_time))
                .set("period", s.index + 1)
                .set("bins", sl.len())
                .set("value", value);
            for lid in &s.link_ids {
                out.mark_link(g, g.link_idx(lid).expect("slice link"));
            }
        }
        DensityTrend { bins } => {
            let sl = slices(g, params, *bins)?;
            if sl.len() < 2 {
                return Err(degenerate("a trend needs at least two periods"));
            }
            let (first, last) = (sl[0].density, sl[sl.len() - 1].density);
            let q = |x: f64| (x * 1e9).round() as i128;
            let direction = match q(last).cmp(&q(first)) {
                std::cmp::Ordering::Greater => "rose",
                std::cmp::Ordering::Less => "fell",
                std::cmp::Ordering::Equal => "stayed the same",
            };
            out.real("first", first).real("last", last).set("direction", direction).set("bins", sl.len());
        }
        ActiveNodes { bins } => {
            let sl = slices(g, params, *bins)?;
            let counts: Vec<usize> = sl.iter().map(|s| slice_nodes(g, s).len()).collect();
            out.set("bins", sl.len())
                .set("list", numbers(counts.iter().map(|&c| FactValue::from(c))))
                .set("max", counts.iter().copied().max().unwrap_or(0));
        }

        SubgraphSize => {
            let (nodes, links) = expect_subgraph(g, subject)?;
            out.set("value", nodes.len())
                .real("share", 100.0 * nodes.len() as f64 / n_nodes as f64)
                .set("links", links.len());
            out.mark_set(g, &nodes);
            out.focus = subject.clone();
        }
        SubgraphLinkCount => {
            let (nodes, links) = expect_subgraph(g, subject)?;
            out.set("value", links.len());
            out.mark_set(g, &nodes);
        }
        SubgraphDensity => {
            let (nodes, links) = expect_subgraph(g, subject)?;
            out.real("value", density_of(g, nodes.len(), &links)?);
            out.mark_set(g, &nodes);
        }
        SubgraphNodeExtremum { by } => {
            let (nodes, links) = expect_subgraph(g, subject)?;
            out = node_extremum(g, &nodes, &links, *by, rank)?;
            out.nodes.retain(|n| nodes.binary_search(n).is_ok());
            out.links.retain(|l| links.contains(l));
        }
        SubgraphTotalWeight => {
            let (nodes, links) = expect_subgraph(g, subject)?;
            out.real("value", weight_sum(g, &links)?);
            out.mark_set(g, &nodes);
        }
        SubgraphAverageWeight => {
            let (nodes, links) = expect_subgraph(g, subject)?;
            let w: Vec<f64> = links.iter().map(|&l| weight(g, l)).collect();
            out.real("value", mean(&w).ok_or_else(|| degenerate("no links in the selection"))?);
            out.mark_set(g, &nodes);
        }
        SubgraphLinkExtremum { which } => {
            let (_, links) = expect_subgraph(g, subject)?;
            out = link_pick(g, &links, *which, rank)?;
        }
        ExternalLinkCount => {
            let (nodes, _) = expect_subgraph(g, subject)?;
            let ext = boundary_links(g, &nodes);
            out.set("value", ext.len());
            for &l in &ext {
                out.mark_link(g, l);
            }
            if ext.is_empty() {
                out.variant = Some("none");
            }
        }
        ExternalLinkExtremum { which } => {
            let (nodes, _) = expect_subgraph(g, subject)?;
            out = link_pick(g, &boundary_links(g, &nodes), *which, rank)?;
        }
        ExternalNeighbors => {
            let (nodes, _) = expect_subgraph(g, subject)?;
            let inside: BTreeSet<usize> = nodes.iter().copied().collect();
            let outside: BTreeSet<usize> = nodes
                .iter()
                .flat_map(|&n| distinct_neighbors(g, n))
                .filter(|n| !inside.contains(n))
                .collect();
            let outside = rank_nodes_by(g, &outside.into_iter().collect::<Vec<_>>(), |_| 0.0);
            out.set("value", outside.len()).set("list", names(g, &outside, 5));
            out.nodes.extend(outside.iter().copied());
            if outside.is_empty() {
                out.variant = Some("none");
            }
        }
        SubgraphAverageDegree => {
            let (nodes, links) = expect_subgraph(g, subject)?;
            let deg = degree_vec(g, &links);
            out.real("value", mean(&nodes.iter().map(|&n| deg[n].total as f64).collect::<Vec<_>>()).expect("non-empty"));
            out.mark_set(g, &nodes);
        }
        SubgraphClusters => {
            let (nodes, _) = expect_subgraph(g, subject)?;
            let (comm, _) = communities_of(g);
            let touched: BTreeSet<usize> = nodes.iter().map(|&n| comm[n]).collect();
            out.set("value", touched.len()).set("total", detect_communities(g).community_count());
            out.mark_set(g, &nodes);
        }

        BetweenLinkCount => {
            let (_, _, between) = expect_subgraph_pair(g, subject)?;
            out.set("value", between.len());
            for &l in &between {
                out.mark_link(g, l);
            }
            if between.is_empty() {
                out.variant = Some("none");
            }
        }
        BetweenTotalWeight => {
            let (_, _, between) = expect_subgraph_pair(g, subject)?;
            out.real("value", weight_sum(g, &between)?);
            for &l in &between {
                out.mark_link(g, l);
            }
        }
        BetweenLinkExtremum { which } => {
            let (_, _, between) = expect_subgraph_pair(g, subject)?;
            out = link_pick(g, &between, *which, rank)?;
        }
        SizeComparison => {
            let ((a, al), (b, bl), _) = expect_subgraph_pair(g, subject)?;
            out.set("first", a.len()).set("second", b.len()).set("firstLinks", al.len()).set("secondLinks", bl.len());
            out.mark_set(g, &a);
            out.mark_set(g, &b);
        }
        DensityComparison => {
            let ((a, al), (b, bl), _) = expect_subgraph_pair(g, subject)?;
            out.real("first", density_of(g, a.len(), &al)?).real("second", density_of(g, b.len(), &bl)?);
            out.mark_set(g, &a);
            out.mark_set(g, &b);
        }
        WeightComparison => {
            let ((a, al), (b, bl), _) = expect_subgraph_pair(g, subject)?;
            out.real("first", weight_sum(g, &al)?).real("second", weight_sum(g, &bl)?);
            out.mark_set(g, &a);
            out.mark_set(g, &b);
        }

        NodeDegree => {
            let n = expect_node(g, subject)?;
            let deg = degree_vec(g, &all_links(g))[n];
            out.set("node", label(g, n)).set("value", deg.total).set("neighbors", distinct_neighbors(g, n).len());
            out.mark_star(g, n);
            out.focus = subject.clone();
        }
        NodeInOut => {
            let n = expect_node(g, subject)?;
            let deg = degree_vec(g, &all_links(g))[n];
            out.set("node", label(g, n)).set("in", deg.in_degree).set("out", deg.out_degree);
            out.mark_star(g, n);
            out.focus = subject.clone();
        }
        NodeRanking => {
            let n = expect_node(g, subject)?;
            let position = metrics::connectivity_ranking(g, &id(g, n))?;
            let deg = degree_vec(g, &all_links(g))[n];
            out.set("node", label(g, n))
                .set("position", ordinal(position))
                .set("total", n_nodes)
                .set("value", deg.total);
            out.mark_star(g, n);
            out.focus = subject.clone();
        }
        NodeStrength => {
            let n = expect_node(g, subject)?;
            let s = measure(g, NodeMeasure::Strength, &all_links(g))?;
            out.set("node", label(g, n)).real("value", s[n]);
            out.mark_star(g, n);
            out.focus = subject.clone();
        }
        NodeBetweenness | NodeCloseness => {
            let n = expect_node(g, subject)?;
            let by = if matches!(op, NodeBetweenness) { NodeMeasure::Betweenness } else { NodeMeasure::Closeness };
            let scores = measure(g, by, &all_links(g))?;
            let order = rank_nodes_by(g, &all_nodes(g), |i| scores[i]);
            let position = order.iter().position(|&i| i == n).expect("ranked") + 1;
            out.set("node", label(g, n)).real("value", scores[n]).set("position", ordinal(position)).set("total", n_nodes);
            out.nodes.insert(n);
            out.focus = subject.clone();
        }
        NodeCluster => {
            let n = expect_node(g, subject)?;
            let (comm, members) = communities_of(g);
            let m = &members[comm[n]];
            out.set("node", label(g, n))
                .set("size", m.len())
                .set("others", m.len() - 1)
                .set("clusters", members.len());
            out.mark_set(g, m);
            out.focus = node_subject(g, m);
        }
        NodeLinkExtremum { which } => {
            let n = expect_node(g, subject)?;
            let order = order_links(g, &incident(g, n), *which)?;
            let l = pick_rank(&order, rank)?;
            let (s, t) = g.endpoints()[l];
            let other = if s == n { t } else { s };
            out.set("node", label(g, n)).set("other", label(g, other)).real("value", weight(g, l));
            out.mark_link(g, l);
            out.focus = pair_focus(g, l);
        }
        NodeLocation => {
            let n = expect_node(g, subject)?;
            metrics::geo_extent(g)?;
            let here = g.nodes()[n].coord.expect("geographic");
            let others: Vec<usize> = all_nodes(g).into_iter().filter(|&m| m != n).collect();
            let dist = |m: usize| haversine_km(here, g.nodes()[m].coord.expect("geographic"));
            let nearest = *rank_nodes_by(g, &others, |m| -dist(m)).first().ok_or_else(|| degenerate("no other nodes"))?;
            out.set("node", label(g, n))
                .real("lat", here.lat)
                .real("lon", here.lon)
                .set("nearest", label(g, nearest))
                .real("distance", dist(nearest));
            out.nodes.extend([n, nearest]);
            out.focus = subject.clone();
        }
        EgoSize { radius } | EgoLinkCount { radius } | EgoDensity { radius } => {
            let n = expect_node(g, subject)?;
            let radius = param(params, "radius", *radius)?;
            let ego = within_hops(g, n, radius);
            let links = induced_links(g, &ego);
            out.set("node", label(g, n)).set("radius", radius);
            match op {
                EgoSize { .. } => {
                    out.set("value", ego.len() - 1);
                }
                EgoLinkCount { .. } => {
                    out.set("value", links.len());
                }
                _ => {
                    out.real("value", density_of(g, ego.len(), &links)?);
                }
            }
            out.mark_set(g, &ego);
            out.focus = node_subject(g, &ego);
        }
        MutualConnections => {
            let n = expect_node(g, subject)?;
            let nbrs = distinct_neighbors(g, n);
            let adj = adjacency(g);
            let mut count = 0usize;
            for (i, &a) in nbrs.iter().enumerate() {
                for &b in &nbrs[i + 1..] {
                    if adj.both[a].binary_search(&b).is_ok() {
                        count += 1;
                    }
                }
            }
            let possible = nbrs.len() * nbrs.len().saturating_sub(1) / 2;
            out.set("node", label(g, n)).set("neighbors", nbrs.len()).set("value", count).set("possible", possible);
            out.real("share", if possible == 0 { 0.0 } else { 100.0 * count as f64 / possible as f64 });
            out.nodes.insert(n);
            out.mark_set(g, &nbrs);
            if possible == 0 {
                out.variant = Some("none");
            }
            out.focus = subject.clone();
        }
        SecondDegree => {
            let n = expect_node(g, subject)?;
            let near: BTreeSet<usize> = within_hops(g, n, 1).into_iter().collect();
            let far: Vec<usize> = within_hops(g, n, 2).into_iter().filter(|m| !near.contains(m)).collect();
            let far = rank_nodes_by(g, &far, |_| 0.0);
            out.set("node", label(g, n)).set("value", far.len()).set("list", names(g, &far, 5));
            out.nodes.insert(n);
            out.nodes.extend(far.iter().copied());
            if far.is_empty() {
                out.variant = Some("none");
            }
            out.focus = subject.clone();
        }
        StrongConnections => {
            let n = expect_node(g, subject)?;
            let avg = metrics::average_link_weight(g, metrics::Scope::Whole)?;
            let strong: Vec<usize> = order_links(g, &incident(g, n), Extremum::Strongest)?
                .into_iter()
                .filter(|&l| weight(g, l) > avg + 1e-9)
                .collect();
            let mut others = Vec::new();
            for &l in &strong {
                let (s, t) = g.endpoints()[l];
                let o = if s == n { t } else { s };
                if !others.contains(&o) {
                    others.push(o);
                }
            }
            out.set("node", label(g, n))
                .set("value", strong.len())
                .real("average", avg)
                .set("list", names(g, &others, 5));
            out.nodes.insert(n);
            for &l in &strong {
                out.mark_link(g, l);
            }
            if strong.is_empty() {
                out.variant = Some("none");
            }
            out.focus = subject.clone();
        }
        EgoNodeExtremum { by } => {
            let n = expect_node(g, subject)?;
            let nbrs = distinct_neighbors(g, n);
            let picked = node_extremum(g, &nbrs, &all_links(g), *by, rank)?;
            out = picked;
            out.set("center", label(g, n));
            out.nodes.insert(n);
        }

        JoiningLinks => {
            let (a, b) = expect_pair(g, subject)?;
            let links = metrics::links_joining(g, &id(g, a), &id(g, b))?;
            out.set("first", label(g, a)).set("second", label(g, b)).set("value", links.len());
            out.nodes.extend([a, b]);
            out.links.extend(links.iter().copied());
            if links.is_empty() {
                out.variant = Some("none");
            }
            out.focus = subject.clone();
        }
        DegreeComparison => {
            let (a, b) = expect_pair(g, subject)?;
            let deg = degree_vec(g, &all_links(g));
            out.set("first", label(g, a))
                .set("second", label(g, b))
                .set("firstValue", deg[a].total)
                .set("secondValue", deg[b].total)
                .set("firstPosition", ordinal(metrics::connectivity_ranking(g, &id(g, a))?))
                .set("secondPosition", ordinal(metrics::connectivity_ranking(g, &id(g, b))?));
            out.nodes.extend([a, b]);
            out.focus = subject.clone();
        }
        StrengthComparison => {
            let (a, b) = expect_pair(g, subject)?;
            let s = measure(g, NodeMeasure::Strength, &all_links(g))?;
            out.set("first", label(g, a))
                .set("second", label(g, b))
                .real("firstValue", s[a])
                .real("secondValue", s[b]);
            out.nodes.extend([a, b]);
            out.focus = subject.clone();
        }
        CommonNeighbors => {
            let (a, b) = expect_pair(g, subject)?;
            let common = metrics::common_neighbors(g, &id(g, a), &id(g, b))?;
            let common: Vec<usize> = common.iter().map(|c| g.node_idx(c).expect("neighbor exists")).collect();
            let common = rank_nodes_by(g, &common, |_| 0.0);
            out.set("first", label(g, a))
                .set("second", label(g, b))
                .set("value", common.len())
                .set("list", names(g, &common, 5));
            out.nodes.extend([a, b]);
            for &c in &common {
                out.nodes.insert(c);
                for (l, &(s, t)) in g.endpoints().iter().enumerate() {
                    let ends = [s, t];
                    if ends.contains(&c) && (ends.contains(&a) || ends.contains(&b)) {
                        out.links.insert(l);
                    }
                }
            }
            if common.is_empty() {
                out.variant = Some("none");
            }
            out.focus = subject.clone();
        }
        HopDistance => {
            let (a, b) = expect_pair(g, subject)?;
            out.set("first", label(g, a)).set("second", label(g, b));
            out.nodes.extend([a, b]);
            match hop_distances(g, a, false)[b] {
                Some(d) => {
                    out.set("value", d);
                }
                None => out.variant = Some("none"),
            }
            out.focus = subject.clone();
        }
        SameCluster => {
            let (a, b) = expect_pair(g, subject)?;
            let (comm, members) = communities_of(g);
            out.set("first", label(g, a)).set("second", label(g, b)).set("clusters", members.len());
            out.mark_set(g, &members[comm[a]]);
            if comm[a] != comm[b] {
                out.mark_set(g, &members[comm[b]]);
                out.variant = Some("different");
            }
            out.focus = subject.clone();
        }
        PathsOverview { k } | PathLengths { k } | PathWeights { k } | PathMinWeights { k } | PathDetail { k } => {
            let (a, b) = expect_pair(g, subject)?;
            let mut k = param(params, "k", *k)?;
            if matches!(op, PathDetail { .. }) {
                k = k.max(rank);
            }
            let paths = metrics::k_shortest_paths(g, &id(g, a), &id(g, b), k)?;
            out.set("first", label(g, a)).set("second", label(g, b));
            out.nodes.extend([a, b]);
            if paths.is_empty() {
                if matches!(op, PathsOverview { .. }) {
                    out.variant = Some("none");
                    return Ok(out);
                }
                return Err(FactError::NoPath);
            }
            let mark = |out: &mut Output, p: &metrics::PathResult| {
                for n in &p.node_sequence {
                    out.nodes.insert(g.node_idx(n).expect("path node"));
                }
                for l in &p.link_sequence {
                    out.links.insert(g.link_idx(l).expect("path link"));
                }
            };
            match op {
                PathsOverview { .. } => {
                    out.set("count", paths.len()).set("shortest", paths[0].length).set("k", k);
                    for p in &paths {
                        mark(&mut out, p);
                    }
                }
                PathLengths { .. } => {
                    out.set("count", paths.len())
                        .set("list", numbers(paths.iter().map(|p| FactValue::from(p.length))));
                    for p in &paths {
                        mark(&mut out, p);
                    }
                }
                PathWeights { .. } | PathMinWeights { .. } => {
                    let pick = |p: &metrics::PathResult| {
                        if matches!(op, PathWeights { .. }) {
                            p.total_weight
                        } else {
                            p.min_link_weight
                        }
                    };
                    let vals = paths
                        .iter()
                        .map(|p| pick(p).map(FactValue::Real).ok_or(FactError::from(MetricsError::Unweighted)))
                        .collect::<R<Vec<_>>>()?;
                    out.set("count", paths.len()).set("list", numbers(vals));
                    for p in &paths {
                        mark(&mut out, p);
                    }
                }
                _ => {
                    let p = pick_rank(&paths.iter().collect::<Vec<_>>(), rank)?;
                    let seq: Vec<usize> = p.node_sequence.iter().map(|n| g.node_idx(n).expect("path node")).collect();
                    out.set("route", route(g, &seq)).set("length", p.length);
                    mark(&mut out, p);
                    out.focus = Subject::Path { nodes: p.node_sequence.clone() };
                    return Ok(out);
                }
            }
            out.focus = subject.clone();
        }

        PathSummary => {
            let (nodes, links) = expect_path(g, subject)?;
            out.set("route", route(g, &nodes)).set("hops", links.len()).set("count", nodes.len());
            out.nodes.extend(nodes.iter().copied());
            out.links.extend(links.iter().copied());
            out.focus = subject.clone();
        }
        PathHopWeights => {
            let (nodes, links) = expect_path(g, subject)?;
            let total = weight_sum(g, &links)?;
            out.real("value", total).set("list", numbers(links.iter().map(|&l| FactValue::Real(weight(g, l)))));
            out.nodes.extend(nodes.iter().copied());
            out.links.extend(links.iter().copied());
        }
        PathWeakestHop => {
            let (nodes, links) = expect_path(g, subject)?;
            weight_sum(g, &links)?;
            let (i, &l) = links
                .iter()
                .enumerate()
                .min_by(|(_, &x), (_, &y)| weight(g, x).total_cmp(&weight(g, y)))
                .expect("path has hops");
            out.set("source", label(g, nodes[i])).set("target", label(g, nodes[i + 1])).real("value", weight(g, l));
            out.nodes.extend([nodes[i], nodes[i + 1]]);
            out.links.insert(l);
            out.focus = Subject::node_pair(id(g, nodes[i]), id(g, nodes[i + 1]));
        }
        PathNodeDetails => {
            let (nodes, links) = expect_path(g, subject)?;
            let deg = degree_vec(g, &all_links(g));
            let items: Vec<String> = nodes.iter().map(|&n| format!("{} ({})", label(g, n), deg[n].total)).collect();
            out.set("list", join_and(&items)).set("count", nodes.len());
            out.nodes.extend(nodes.iter().copied());
            out.links.extend(links.iter().copied());
        }
        PathNeighborhood => {
            let (nodes, _) = expect_path(g, subject)?;
            let on: BTreeSet<usize> = nodes.iter().copied().collect();
            let around: BTreeSet<usize> =
                nodes.iter().flat_map(|&n| distinct_neighbors(g, n)).filter(|n| !on.contains(n)).collect();
            let around = rank_nodes_by(g, &around.into_iter().collect::<Vec<_>>(), |_| 0.0);
            out.set("value", around.len()).set("list", names(g, &around, 5));
            out.nodes.extend(around.iter().copied());
            out.nodes.extend(nodes.iter().copied());
            if around.is_empty() {
                out.variant = Some("none");
            }
        }
        PathAverageDegree => {
            let (nodes, links) = expect_path(g, subject)?;
            let deg = degree_vec(g, &all_links(g));
            out.real("value", mean(&nodes.iter().map(|&n| deg[n].total as f64).collect::<Vec<_>>()).expect("non-empty"));
            out.nodes.extend(nodes.iter().copied());
            out.links.extend(links.iter().copied());
        }
        PathNodeExtremum { by } => {
            let (nodes, _) = expect_path(g, subject)?;
            out = node_extremum(g, &nodes, &all_links(g), *by, rank)?;
        }
    }
    Ok(out)
}
