//! In-memory network model: nodes, links, derived capability flags and the
//! domain terminology used when captions are rendered.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::io::Read;
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::metrics::MetricsCache;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GraphError {
    #[error("malformed file: {0}")]
    MalformedFile(String),
    #[error("links reference missing nodes (rows {rows:?})")]
    DanglingEndpoint { rows: Vec<usize> },
    #[error("negative or non-finite weight on row {row}")]
    NegativeWeight { row: usize },
    #[error("missing weight on rows {rows:?} while other links are weighted")]
    MissingWeight { rows: Vec<usize> },
    #[error("duplicate node id {0:?}")]
    DuplicateNodeId(String),
    #[error("duplicate link id {0:?}")]
    DuplicateLinkId(String),
    #[error("empty node id on row {row}")]
    EmptyNodeId { row: usize },
    #[error("coordinate out of range for node {0:?}")]
    InvalidCoordinate(String),
    #[error("terminology noun must not be empty")]
    EmptyNoun,
    #[error("unknown node {0:?}")]
    UnknownNode(String),
    #[error("selection is empty")]
    EmptySelection,
}

impl GraphError {
    pub fn code(&self) -> &'static str {
        match self {
            GraphError::MalformedFile(_) => "MalformedFile",
            GraphError::DanglingEndpoint { .. } => "DanglingEndpoint",
            GraphError::NegativeWeight { .. } => "NegativeWeight",
            GraphError::MissingWeight { .. } => "MissingWeight",
            GraphError::DuplicateNodeId(_) => "DuplicateNodeId",
            GraphError::DuplicateLinkId(_) => "DuplicateLinkId",
            GraphError::EmptyNodeId { .. } => "EmptyNodeId",
            GraphError::InvalidCoordinate(_) => "InvalidCoordinate",
            GraphError::EmptyNoun => "EmptyNoun",
            GraphError::UnknownNode(_) => "UnknownNode",
            GraphError::EmptySelection => "EmptySelection",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Coord {
    pub lat: f64,
    pub lon: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Node {
    pub id: String,
    pub label: String,
    pub coord: Option<Coord>,
    pub attributes: BTreeMap<String, String>,
}

impl Node {
    pub fn new(id: impl Into<String>) -> Self {
        let id = id.into();
        Node { label: id.clone(), id, coord: None, attributes: BTreeMap::new() }
    }

    pub fn with_coord(mut self, lat: f64, lon: f64) -> Self {
        self.coord = Some(Coord { lat, lon });
        self
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Link {
    pub id: String,
    pub source: String,
    pub target: String,
    pub weight: Option<f64>,
    /// Epoch seconds.
    pub time: Option<i64>,
}

impl Link {
    pub fn new(id: impl Into<String>, source: impl Into<String>, target: impl Into<String>) -> Self {
        Link { id: id.into(), source: source.into(), target: target.into(), weight: None, time: None }
    }

    pub fn weighted(mut self, weight: f64) -> Self {
        self.weight = Some(weight);
        self
    }

    pub fn at(mut self, time: i64) -> Self {
        self.time = Some(time);
        self
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Capabilities {
    pub weighted: bool,
    pub temporal: bool,
    pub geographic: bool,
}

/// A noun with its plural form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Noun {
    pub singular: String,
    pub plural: String,
}

impl Noun {
    pub fn new(singular: &str) -> Self {
        Noun { singular: singular.to_string(), plural: pluralize(singular) }
    }

    pub fn with_plural(singular: &str, plural: &str) -> Self {
        Noun { singular: singular.to_string(), plural: plural.to_string() }
    }

    pub fn for_count(&self, count: f64) -> &str {
        if count == 1.0 {
            &self.singular
        } else {
            &self.plural
        }
    }
}

/// English plural for the simple cases: "city" -> "cities", "bus" -> "buses",
/// "number of commuters" -> "numbers of commuters".
pub fn pluralize(noun: &str) -> String {
    if let Some(pos) = noun.find(" of ") {
        let (head, tail) = noun.split_at(pos);
        return format!("{}{}", pluralize(head), tail);
    }
    let lower = noun.to_ascii_lowercase();
    let vowel_before_y = lower
        .chars()
        .rev()
        .nth(1)
        .map(|c| "aeiou".contains(c))
        .unwrap_or(true);
    if lower.ends_with('y') && !vowel_before_y {
        format!("{}ies", &noun[..noun.len() - 1])
    } else if ["s", "x", "z", "ch", "sh"].iter().any(|s| lower.ends_with(s)) {
        format!("{noun}es")
    } else {
        format!("{noun}s")
    }
}

/// Domain nouns substituted into captions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "TerminologyDoc", into = "TerminologyDoc")]
pub struct Terminology {
    pub node: Noun,
    pub link: Noun,
    pub weight: Noun,
    pub subgraph: Noun,
}

impl Default for Terminology {
    fn default() -> Self {
        Terminology {
            node: Noun::new("node"),
            link: Noun::new("link"),
            weight: Noun::new("link weight"),
            subgraph: Noun::new("subgraph"),
        }
    }
}

impl Terminology {
    pub fn validate(&self) -> Result<(), GraphError> {
        let nouns = [&self.node, &self.link, &self.weight, &self.subgraph];
        if nouns
            .iter()
            .any(|n| n.singular.trim().is_empty() || n.plural.trim().is_empty())
        {
            return Err(GraphError::EmptyNoun);
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct TerminologyDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub node_noun: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub node_plural: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub link_noun: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub link_plural: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weight_noun: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weight_plural: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subgraph_noun: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subgraph_plural: Option<String>,
}

fn noun_from(singular: Option<String>, plural: Option<String>, default: &str) -> Noun {
    let singular = singular.unwrap_or_else(|| default.to_string());
    match plural {
        Some(p) => Noun::with_plural(&singular, &p),
        None => Noun::new(&singular),
    }
}

impl TryFrom<TerminologyDoc> for Terminology {
    type Error = GraphError;

    fn try_from(doc: TerminologyDoc) -> Result<Self, Self::Error> {
        let t = Terminology {
            node: noun_from(doc.node_noun, doc.node_plural, "node"),
            link: noun_from(doc.link_noun, doc.link_plural, "link"),
            weight: noun_from(doc.weight_noun, doc.weight_plural, "link weight"),
            subgraph: noun_from(doc.subgraph_noun, doc.subgraph_plural, "subgraph"),
        };
        t.validate()?;
        Ok(t)
    }
}

impl From<Terminology> for TerminologyDoc {
    fn from(t: Terminology) -> Self {
        TerminologyDoc {
            node_noun: Some(t.node.singular),
            node_plural: Some(t.node.plural),
            link_noun: Some(t.link.singular),
            link_plural: Some(t.link.plural),
            weight_noun: Some(t.weight.singular),
            weight_plural: Some(t.weight.plural),
            subgraph_noun: Some(t.subgraph.singular),
            subgraph_plural: Some(t.subgraph.plural),
        }
    }
}

/// A node selection together with the links it induces.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SubgraphRef {
    pub node_ids: BTreeSet<String>,
    #[serde(default)]
    pub induced_link_ids: BTreeSet<String>,
}

/// Immutable network. Construct with [`Graph::new`] or one of the loaders.
#[derive(Debug, Clone)]
pub struct Graph {
    nodes: Vec<Node>,
    links: Vec<Link>,
    directed: bool,
    capabilities: Capabilities,
    terminology: Terminology,
    node_index: HashMap<String, usize>,
    link_index: HashMap<String, usize>,
    endpoints: Vec<(usize, usize)>,
    pub(crate) cache: Arc<MetricsCache>,
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.directed == other.directed
            && self.nodes == other.nodes
            && self.links == other.links
            && self.terminology == other.terminology
    }
}

impl Graph {
    pub fn new(nodes: Vec<Node>, links: Vec<Link>, directed: bool) -> Result<Graph, GraphError> {
        let mut node_index = HashMap::with_capacity(nodes.len());
        for (row, node) in nodes.iter().enumerate() {
            if node.id.is_empty() {
                return Err(GraphError::EmptyNodeId { row: row + 1 });
            }
            if let Some(c) = node.coord {
                let ok = c.lat.is_finite()
                    && c.lon.is_finite()
                    && (-90.0..=90.0).contains(&c.lat)
                    && (-180.0..=180.0).contains(&c.lon);
                if !ok {
                    return Err(GraphError::InvalidCoordinate(node.id.clone()));
                }
            }
            if node_index.insert(node.id.clone(), row).is_some() {
                return Err(GraphError::DuplicateNodeId(node.id.clone()));
            }
        }

        let mut dangling = Vec::new();
        let mut endpoints = Vec::with_capacity(links.len());
        let mut link_index = HashMap::with_capacity(links.len());
        for (row, link) in links.iter().enumerate() {
            match (node_index.get(&link.source), node_index.get(&link.target)) {
                (Some(&s), Some(&t)) => endpoints.push((s, t)),
                _ => dangling.push(row + 1),
            }
            if let Some(w) = link.weight {
                if !w.is_finite() || w < 0.0 {
                    return Err(GraphError::NegativeWeight { row: row + 1 });
                }
            }
            if link_index.insert(link.id.clone(), row).is_some() {
                return Err(GraphError::DuplicateLinkId(link.id.clone()));
            }
        }
        if !dangling.is_empty() {
            return Err(GraphError::DanglingEndpoint { rows: dangling });
        }

        let weighted_count = links.iter().filter(|l| l.weight.is_some()).count();
        if weighted_count > 0 && weighted_count < links.len() {
            let rows = links
                .iter()
                .enumerate()
                .filter(|(_, l)| l.weight.is_none())
                .map(|(i, _)| i + 1)
                .collect();
            return Err(GraphError::MissingWeight { rows });
        }

        let capabilities = Capabilities {
            weighted: !links.is_empty() && weighted_count == links.len(),
            temporal: !links.is_empty() && links.iter().all(|l| l.time.is_some()),
            geographic: !nodes.is_empty() && nodes.iter().all(|n| n.coord.is_some()),
        };

        Ok(Graph {
            nodes,
            links,
            directed,
            capabilities,
            terminology: Terminology::default(),
            node_index,
            link_index,
            endpoints,
            cache: Arc::new(MetricsCache::default()),
        })
    }

    pub fn empty(directed: bool) -> Graph {
        Graph::new(Vec::new(), Vec::new(), directed).expect("empty graph is valid")
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn links(&self) -> &[Link] {
        &self.links
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    pub fn capabilities(&self) -> Capabilities {
        self.capabilities
    }

    pub fn terminology(&self) -> &Terminology {
        &self.terminology
    }

    pub fn node(&self, id: &str) -> Option<&Node> {
        self.node_index.get(id).map(|&i| &self.nodes[i])
    }

    pub fn link(&self, id: &str) -> Option<&Link> {
        self.link_index.get(id).map(|&i| &self.links[i])
    }

    pub fn node_idx(&self, id: &str) -> Result<usize, GraphError> {
        self.node_index
            .get(id)
            .copied()
            .ok_or_else(|| GraphError::UnknownNode(id.to_string()))
    }

    pub(crate) fn link_idx(&self, id: &str) -> Option<usize> {
        self.link_index.get(id).copied()
    }

    /// Node index pairs for each link, in link order.
    pub(crate) fn endpoints(&self) -> &[(usize, usize)] {
        &self.endpoints
    }

    pub fn label_of<'a>(&'a self, id: &'a str) -> &'a str {
        self.node(id).map(|n| n.label.as_str()).unwrap_or(id)
    }

    /// Returns a copy carrying `terminology`. Structure and cached metrics are shared.
    pub fn with_terminology(&self, terminology: Terminology) -> Result<Graph, GraphError> {
        terminology.validate()?;
        let mut g = self.clone();
        g.terminology = terminology;
        Ok(g)
    }

    pub fn induce(&self, node_ids: &BTreeSet<String>) -> Result<SubgraphRef, GraphError> {
        if node_ids.is_empty() {
            return Err(GraphError::EmptySelection);
        }
        let mut members = vec![false; self.nodes.len()];
        for id in node_ids {
            members[self.node_idx(id)?] = true;
        }
        let induced_link_ids = self
            .endpoints
            .iter()
            .zip(&self.links)
            .filter(|((s, t), _)| members[*s] && members[*t])
            .map(|(_, l)| l.id.clone())
            .collect();
        Ok(SubgraphRef { node_ids: node_ids.clone(), induced_link_ids })
    }

    pub fn induce_ids<I, S>(&self, ids: I) -> Result<SubgraphRef, GraphError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        self.induce(&ids.into_iter().map(Into::into).collect())
    }

    pub fn all_node_ids(&self) -> BTreeSet<String> {
        self.nodes.iter().map(|n| n.id.clone()).collect()
    }

    pub fn to_dataset(&self) -> DatasetDoc {
        DatasetDoc {
            name: None,
            directed: self.directed,
            nodes: self
                .nodes
                .iter()
                .map(|n| NodeDoc {
                    id: n.id.clone(),
                    label: Some(n.label.clone()),
                    lat: n.coord.map(|c| c.lat),
                    lon: n.coord.map(|c| c.lon),
                    attributes: n.attributes.clone(),
                })
                .collect(),
            links: self
                .links
                .iter()
                .map(|l| LinkDoc {
                    id: Some(l.id.clone()),
                    source: l.source.clone(),
                    target: l.target.clone(),
                    weight: l.weight,
                    time: l.time.map(TimeValue::Epoch),
                })
                .collect(),
            terminology: Some(self.terminology.clone()),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_dataset()).expect("dataset serializes")
    }
}

// ---------------------------------------------------------------------------
// Loaders

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct DatasetDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default)]
    pub directed: bool,
    pub nodes: Vec<NodeDoc>,
    #[serde(default)]
    pub links: Vec<LinkDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub terminology: Option<Terminology>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NodeDoc {
    pub id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lat: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lon: Option<f64>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub attributes: BTreeMap<String, String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LinkDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub id: Option<String>,
    pub source: String,
    pub target: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weight: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub time: Option<TimeValue>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TimeValue {
    Epoch(i64),
    Text(String),
}

/// Parses an integer epoch or an ISO-8601 date / date-time into epoch seconds.
pub fn parse_time(raw: &str) -> Option<i64> {
    let raw = raw.trim();
    if let Ok(v) = raw.parse::<i64>() {
        return Some(v);
    }
    if let Ok(dt) = chrono::DateTime::parse_from_rfc3339(raw) {
        return Some(dt.timestamp());
    }
    for fmt in ["%Y-%m-%dT%H:%M:%S", "%Y-%m-%d %H:%M:%S", "%Y-%m-%dT%H:%M"] {
        if let Ok(dt) = chrono::NaiveDateTime::parse_from_str(raw, fmt) {
            return Some(dt.and_utc().timestamp());
        }
    }
    chrono::NaiveDate::parse_from_str(raw, "%Y-%m-%d")
        .ok()
        .and_then(|d| d.and_hms_opt(0, 0, 0))
        .map(|dt| dt.and_utc().timestamp())
}

fn coord_from(id: &str, lat: Option<f64>, lon: Option<f64>) -> Result<Option<Coord>, GraphError> {
    match (lat, lon) {
        (Some(lat), Some(lon)) => Ok(Some(Coord { lat, lon })),
        (None, None) => Ok(None),
        _ => Err(GraphError::MalformedFile(format!("node {id:?} has only one of lat/lon"))),
    }
}

impl DatasetDoc {
    pub fn into_graph(self) -> Result<Graph, GraphError> {
        let mut nodes = Vec::with_capacity(self.nodes.len());
        for n in self.nodes {
            let coord = coord_from(&n.id, n.lat, n.lon)?;
            nodes.push(Node {
                label: n.label.unwrap_or_else(|| n.id.clone()),
                id: n.id,
                coord,
                attributes: n.attributes,
            });
        }
        let mut links = Vec::with_capacity(self.links.len());
        for (row, l) in self.links.into_iter().enumerate() {
            let time = match l.time {
                None => None,
                Some(TimeValue::Epoch(t)) => Some(t),
                Some(TimeValue::Text(s)) => Some(parse_time(&s).ok_or_else(|| {
                    GraphError::MalformedFile(format!("link row {}: bad time {s:?}", row + 1))
                })?),
            };
            links.push(Link {
                id: l.id.unwrap_or_else(|| format!("e{row}")),
                source: l.source,
                target: l.target,
                weight: l.weight,
                time,
            });
        }
        let g = Graph::new(nodes, links, self.directed)?;
        match self.terminology {
            Some(t) => g.with_terminology(t),
            None => Ok(g),
        }
    }
}

pub fn load_json<R: Read>(reader: R) -> Result<Graph, GraphError> {
    let doc: DatasetDoc = serde_json::from_reader(reader)
        .map_err(|e| GraphError::MalformedFile(e.to_string()))?;
    doc.into_graph()
}

pub fn load_json_str(text: &str) -> Result<Graph, GraphError> {
    load_json(text.as_bytes())
}

/// Header names used when reading node and link CSV files.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct ColumnMapping {
    pub id: String,
    pub label: String,
    pub lat: String,
    pub lon: String,
    pub link_id: String,
    pub source: String,
    pub target: String,
    pub weight: String,
    pub time: String,
}

impl Default for ColumnMapping {
    fn default() -> Self {
        ColumnMapping {
            id: "id".into(),
            label: "label".into(),
            lat: "lat".into(),
            lon: "lon".into(),
            link_id: "id".into(),
            source: "source".into(),
            target: "target".into(),
            weight: "weight".into(),
            time: "time".into(),
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct LoadOptions {
    pub directed: bool,
    pub columns: ColumnMapping,
}

fn malformed(e: impl std::fmt::Display) -> GraphError {
    GraphError::MalformedFile(e.to_string())
}

fn parse_opt_f64(raw: &str, what: &str, row: usize) -> Result<Option<f64>, GraphError> {
    let raw = raw.trim();
    if raw.is_empty() {
        return Ok(None);
    }
    raw.parse::<f64>()
        .map(Some)
        .map_err(|_| GraphError::MalformedFile(format!("row {row}: bad {what} {raw:?}")))
}

/// Loads a graph from a node CSV and a link CSV, both with header rows.
pub fn load_csv<N: Read, L: Read>(nodes: N, links: L, options: &LoadOptions) -> Result<Graph, GraphError> {
    let cols = &options.columns;

    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(nodes);
    let header = rdr.headers().map_err(malformed)?.clone();
    let find = |name: &str| header.iter().position(|h| h == name);
    let id_col = find(&cols.id).ok_or_else(|| malformed(format!("node file lacks {:?} column", cols.id)))?;
    let label_col = find(&cols.label);
    let lat_col = find(&cols.lat);
    let lon_col = find(&cols.lon);
    let known = [Some(id_col), label_col, lat_col, lon_col];

    let mut node_list = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(malformed)?;
        let row = i + 1;
        let get = |c: Option<usize>| c.and_then(|c| rec.get(c)).unwrap_or("");
        let id = get(Some(id_col)).to_string();
        let lat = parse_opt_f64(get(lat_col), "lat", row)?;
        let lon = parse_opt_f64(get(lon_col), "lon", row)?;
        let label = get(label_col);
        let attributes = header
            .iter()
            .enumerate()
            .filter(|(c, _)| !known.contains(&Some(*c)))
            .map(|(c, h)| (h.to_string(), rec.get(c).unwrap_or("").to_string()))
            .collect();
        node_list.push(Node {
            label: if label.is_empty() { id.clone() } else { label.to_string() },
            coord: coord_from(&id, lat, lon)?,
            id,
            attributes,
        });
    }

    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(links);
    let header = rdr.headers().map_err(malformed)?.clone();
    let find = |name: &str| header.iter().position(|h| h == name);
    let src_col = find(&cols.source).ok_or_else(|| malformed(format!("link file lacks {:?} column", cols.source)))?;
    let dst_col = find(&cols.target).ok_or_else(|| malformed(format!("link file lacks {:?} column", cols.target)))?;
    let id_col = find(&cols.link_id);
    let weight_col = find(&cols.weight);
    let time_col = find(&cols.time);
    let known = [Some(src_col), Some(dst_col), id_col, weight_col, time_col];
    let extra: Vec<&str> = header
        .iter()
        .enumerate()
        .filter(|(c, _)| !known.contains(&Some(*c)))
        .map(|(_, h)| h)
        .collect();
    if !extra.is_empty() {
        log::warn!("ignoring extra link columns: {}", extra.join(", "));
    }

    let mut link_list = Vec::new();
    let mut missing_weight = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(malformed)?;
        let row = i + 1;
        let get = |c: Option<usize>| c.and_then(|c| rec.get(c)).unwrap_or("");
        let weight = parse_opt_f64(get(weight_col), "weight", row)?;
        if weight_col.is_some() && weight.is_none() {
            missing_weight.push(row);
        }
        let time_raw = get(time_col);
        let time = if time_raw.is_empty() {
            None
        } else {
            Some(parse_time(time_raw).ok_or_else(|| malformed(format!("row {row}: bad time {time_raw:?}")))?)
        };
        let id = get(id_col);
        link_list.push(Link {
            id: if id.is_empty() { format!("e{i}") } else { id.to_string() },
            source: get(Some(src_col)).to_string(),
            target: get(Some(dst_col)).to_string(),
            weight,
            time,
        });
    }
    if !missing_weight.is_empty() && missing_weight.len() < link_list.len() {
        return Err(GraphError::MissingWeight { rows: missing_weight });
    }

    Graph::new(node_list, link_list, options.directed)
}

/// Loads a dataset from a `.json` file, or from a directory holding
/// `nodes.csv` and `links.csv` (plus an optional `terminology.json`).
pub fn load_path(path: &Path, options: &LoadOptions) -> Result<Graph, GraphError> {
    let open = |p: &Path| {
        std::fs::File::open(p).map_err(|e| GraphError::MalformedFile(format!("{}: {e}", p.display())))
    };
    if path.is_dir() {
        let g = load_csv(open(&path.join("nodes.csv"))?, open(&path.join("links.csv"))?, options)?;
        let term = path.join("terminology.json");
        if term.exists() {
            let t: Terminology = serde_json::from_reader(open(&term)?).map_err(malformed)?;
            return g.with_terminology(t);
        }
        Ok(g)
    } else {
        load_json(std::io::BufReader::new(open(path)?))
    }
}
