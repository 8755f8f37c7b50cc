//! Fact templates, the registry that holds them, and evaluation of a template
//! against a graph and subject into a [`Slide`].

mod compute;
pub mod format;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::Graph;
use crate::metrics::MetricsError;
use crate::subject::{Subject, SubjectError, SubjectKind};

pub use compute::{ClusterMeasure, Computation, Distance, NodeMeasure, SliceMeasure};
pub use format::FactValue;

/// Extra evaluation parameters (`k`, `bins`, `radius`, `count`, ...).
pub type Params = BTreeMap<String, serde_json::Value>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Tag {
    Geography,
    Nodes,
    Links,
    Weight,
    Outliers,
    Connectivity,
    Statistics,
    Density,
    Extrema,
    Time,
    Paths,
    Clusters,
    Centrality,
    Comparison,
    Ranking,
}

impl Tag {
    pub const COUNT: usize = 15;
    pub const ALL: [Tag; Tag::COUNT] = [
        Tag::Geography,
        Tag::Nodes,
        Tag::Links,
        Tag::Weight,
        Tag::Outliers,
        Tag::Connectivity,
        Tag::Statistics,
        Tag::Density,
        Tag::Extrema,
        Tag::Time,
        Tag::Paths,
        Tag::Clusters,
        Tag::Centrality,
        Tag::Comparison,
        Tag::Ranking,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Tag::Geography => "geography",
            Tag::Nodes => "nodes",
            Tag::Links => "links",
            Tag::Weight => "weight",
            Tag::Outliers => "outliers",
            Tag::Connectivity => "connectivity",
            Tag::Statistics => "statistics",
            Tag::Density => "density",
            Tag::Extrema => "extrema",
            Tag::Time => "time",
            Tag::Paths => "paths",
            Tag::Clusters => "clusters",
            Tag::Centrality => "centrality",
            Tag::Comparison => "comparison",
            Tag::Ranking => "ranking",
        }
    }

    /// Position in [`Tag::ALL`].
    pub fn index(self) -> usize {
        Tag::ALL.iter().position(|&t| t == self).expect("tag in vocabulary")
    }

    pub fn parse_set<I, S>(names: I) -> Result<BTreeSet<Tag>, FactError>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        names.into_iter().map(|s| s.as_ref().parse()).collect()
    }
}

impl fmt::Display for Tag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Tag {
    type Err = FactError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Tag::ALL
            .iter()
            .copied()
            .find(|t| t.as_str() == s.trim())
            .ok_or_else(|| FactError::UnknownTag(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum FactScope {
    Overall,
    NodeSet,
    SingleNode,
}

impl FactScope {
    fn of(kind: SubjectKind) -> FactScope {
        match kind {
            SubjectKind::None => FactScope::Overall,
            SubjectKind::Node | SubjectKind::NodePair => FactScope::SingleNode,
            SubjectKind::Subgraph | SubjectKind::SubgraphPair | SubjectKind::Path => FactScope::NodeSet,
        }
    }
}

impl std::fmt::Display for FactScope {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            FactScope::Overall => "overall",
            FactScope::NodeSet => "nodeSet",
            FactScope::SingleNode => "singleNode",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LinkType {
    Directed,
    Undirected,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WeightType {
    Weighted,
    Unweighted,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Requirement {
    Temporal,
    Geographic,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FactError {
    #[error("fact id {0:?} is already registered")]
    DuplicateFactId(String),
    #[error("unknown tag {0:?}")]
    UnknownTag(String),
    #[error("unknown fact id {0:?}")]
    UnknownFactId(String),
    #[error("invalid fact template {id:?}: {reason}")]
    InvalidTemplate { id: String, reason: String },
    #[error("fact {fact:?} does not apply: {reason}")]
    NotApplicable { fact: String, reason: String },
    #[error("fact needs a {expected} subject, got {found}")]
    SubjectMismatch { expected: SubjectKind, found: SubjectKind },
    #[error("rank {rank} out of range 1..={available}")]
    RankOutOfRange { rank: usize, available: usize },
    #[error("nothing to report: {0}")]
    DegenerateGraph(String),
    #[error("no path between the selected nodes")]
    NoPath,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error(transparent)]
    Subject(#[from] SubjectError),
}

impl FactError {
    pub fn code(&self) -> &'static str {
        match self {
            FactError::DuplicateFactId(_) => "DuplicateFactId",
            FactError::UnknownTag(_) => "UnknownTag",
            FactError::UnknownFactId(_) => "UnknownFactId",
            FactError::InvalidTemplate { .. } => "InvalidTemplate",
            FactError::NotApplicable { .. } => "NotApplicable",
            FactError::SubjectMismatch { .. } => "SubjectMismatch",
            FactError::RankOutOfRange { .. } => "RankOutOfRange",
            FactError::DegenerateGraph(_) => "DegenerateGraph",
            FactError::NoPath => "NoPath",
            FactError::InvalidParameter(_) => "InvalidParameter",
            FactError::Subject(e) => e.code(),
        }
    }

    /// Errors that mean "this slide has nothing to show here" rather than a
    /// bad request; tours record them as skipped.
    pub fn is_skip(&self) -> bool {
        matches!(
            self,
            FactError::NotApplicable { .. }
                | FactError::DegenerateGraph(_)
                | FactError::NoPath
                | FactError::RankOutOfRange { .. }
        )
    }
}

impl From<MetricsError> for FactError {
    fn from(e: MetricsError) -> Self {
        match e {
            MetricsError::RankOutOfRange { rank, available } => FactError::RankOutOfRange { rank, available },
            MetricsError::UnknownNode(id) => FactError::Subject(SubjectError::UnknownNode(id)),
            MetricsError::SameNode => FactError::Subject(SubjectError::SameNode),
            MetricsError::OverlappingSubgraphs => FactError::Subject(SubjectError::OverlappingSubgraphs),
            MetricsError::InvalidArgument(msg) => FactError::InvalidParameter(msg),
            other => FactError::DegenerateGraph(other.to_string()),
        }
    }
}

/// A parameterized statement about a network.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", try_from = "FactTemplateDoc", into = "FactTemplateDoc")]
pub struct FactTemplate {
    pub id: String,
    pub title: String,
    pub scope: FactScope,
    pub link_type: LinkType,
    pub weight_type: WeightType,
    pub requires: BTreeSet<Requirement>,
    pub tags: Vec<Tag>,
    pub caption: String,
    /// Alternative captions selected by the computation, e.g. "none" when
    /// the measured set is empty.
    pub alt_captions: BTreeMap<String, String>,
    pub compute: Computation,
    pub rankable: bool,
    pub concept_refs: Vec<String>,
}

/// Wire form of a [`FactTemplate`]; tags stay strings until validated.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct FactTemplateDoc {
    pub id: String,
    pub title: String,
    pub scope: FactScope,
    #[serde(default = "both_links")]
    pub link_type: LinkType,
    #[serde(default = "both_weights")]
    pub weight_type: WeightType,
    #[serde(default, skip_serializing_if = "BTreeSet::is_empty")]
    pub requires: BTreeSet<Requirement>,
    pub tags: Vec<String>,
    pub caption: String,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub alt_captions: BTreeMap<String, String>,
    pub compute: Computation,
    #[serde(default)]
    pub rankable: bool,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub concept_refs: Vec<String>,
}

fn both_links() -> LinkType {
    LinkType::Both
}

fn both_weights() -> WeightType {
    WeightType::Both
}

impl TryFrom<FactTemplateDoc> for FactTemplate {
    type Error = FactError;

    fn try_from(d: FactTemplateDoc) -> Result<Self, FactError> {
        let tags = d.tags.iter().map(|t| t.parse()).collect::<Result<Vec<Tag>, _>>()?;
        let t = FactTemplate {
            id: d.id,
            title: d.title,
            scope: d.scope,
            link_type: d.link_type,
            weight_type: d.weight_type,
            requires: d.requires,
            tags,
            caption: d.caption,
            alt_captions: d.alt_captions,
            compute: d.compute,
            rankable: d.rankable,
            concept_refs: d.concept_refs,
        };
        t.check()?;
        Ok(t)
    }
}

impl From<FactTemplate> for FactTemplateDoc {
    fn from(t: FactTemplate) -> Self {
        FactTemplateDoc {
            id: t.id,
            title: t.title,
            scope: t.scope,
            link_type: t.link_type,
            weight_type: t.weight_type,
            requires: t.requires,
            tags: t.tags.iter().map(|t| t.as_str().to_string()).collect(),
            caption: t.caption,
            alt_captions: t.alt_captions,
            compute: t.compute,
            rankable: t.rankable,
            concept_refs: t.concept_refs,
        }
    }
}

impl FactTemplate {
    pub fn subject_kind(&self) -> SubjectKind {
        self.compute.subject_kind()
    }

    /// Structural checks: tag count, consistency between metadata and the
    /// computation, and well-formed placeholders.
    pub fn check(&self) -> Result<(), FactError> {
        let bad = |reason: &str| FactError::InvalidTemplate { id: self.id.clone(), reason: reason.to_string() };
        if self.id.trim().is_empty() {
            return Err(bad("empty id"));
        }
        if self.tags.is_empty() || self.tags.len() > 4 {
            return Err(bad("needs between 1 and 4 tags"));
        }
        let distinct: BTreeSet<Tag> = self.tags.iter().copied().collect();
        if distinct.len() != self.tags.len() {
            return Err(bad("repeated tag"));
        }
        if FactScope::of(self.compute.subject_kind()) != self.scope {
            return Err(bad("scope does not match the computation's subject"));
        }
        if self.rankable != self.compute.rankable() {
            return Err(bad("rankable flag does not match the computation"));
        }
        if self.compute.needs_weight() && self.weight_type != WeightType::Weighted {
            return Err(bad("computation reads weights but weightType is not weighted"));
        }
        if self.compute.needs_direction() && self.link_type != LinkType::Directed {
            return Err(bad("computation reads direction but linkType is not directed"));
        }
        if self.compute.needs_temporal() && !self.requires.contains(&Requirement::Temporal) {
            return Err(bad("computation reads times but does not require temporal"));
        }
        if self.compute.needs_geographic() && !self.requires.contains(&Requirement::Geographic) {
            return Err(bad("computation reads coordinates but does not require geographic"));
        }
        for text in [&self.title, &self.caption].into_iter().chain(self.alt_captions.values()) {
            balanced(text).map_err(|r| bad(&r))?;
        }
        Ok(())
    }

    /// Whether the fact can be shown for `g` at all.
    pub fn applicable(&self, g: &Graph) -> bool {
        self.inapplicable_reason(g).is_none()
    }

    pub fn inapplicable_reason(&self, g: &Graph) -> Option<String> {
        let caps = g.capabilities();
        match (self.link_type, g.is_directed()) {
            (LinkType::Directed, false) => return Some("needs directed links".into()),
            (LinkType::Undirected, true) => return Some("needs undirected links".into()),
            _ => {}
        }
        match (self.weight_type, caps.weighted) {
            (WeightType::Weighted, false) => return Some("needs link weights".into()),
            (WeightType::Unweighted, true) => return Some("needs unweighted links".into()),
            _ => {}
        }
        if self.requires.contains(&Requirement::Temporal) && !caps.temporal {
            return Some("needs link times".into());
        }
        if self.requires.contains(&Requirement::Geographic) && !caps.geographic {
            return Some("needs node coordinates".into());
        }
        None
    }
}

fn balanced(text: &str) -> Result<(), String> {
    let mut open = false;
    for c in text.chars() {
        match (c, open) {
            ('{', false) => open = true,
            ('}', true) => open = false,
            ('{', true) | ('}', false) => return Err(format!("unbalanced braces in {text:?}")),
            _ => {}
        }
    }
    if open {
        return Err(format!("unclosed placeholder in {text:?}"));
    }
    Ok(())
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Highlight {
    pub node_ids: BTreeSet<String>,
    pub link_ids: BTreeSet<String>,
}

/// A fact evaluated against a dataset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Slide {
    pub fact_id: String,
    pub rank: usize,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub params: Params,
    pub title: String,
    pub caption: String,
    pub highlight: Highlight,
    /// The subject the fact was evaluated for.
    pub subject: Subject,
    /// The element the slide talks about, used for pivots.
    pub focus: Subject,
    pub values: BTreeMap<String, FactValue>,
    pub tags: Vec<Tag>,
    pub concept_refs: Vec<String>,
    #[serde(default)]
    pub starred: bool,
}

impl Slide {
    /// Identity of a slide within a tour: fact, rank and parameters.
    pub fn key(&self) -> String {
        slide_key(&self.fact_id, self.rank, &self.params)
    }
}

pub fn slide_key(fact_id: &str, rank: usize, params: &Params) -> String {
    if params.is_empty() {
        format!("{fact_id}#{rank}")
    } else {
        format!("{fact_id}#{rank}{}", serde_json::to_string(params).expect("params serialize"))
    }
}

/// Evaluates `t` for `subject` at `rank`. The subject must already be
/// normalized against `g` (see [`Subject::normalize`]).
pub fn evaluate(t: &FactTemplate, g: &Graph, subject: &Subject, rank: usize, params: &Params) -> Result<Slide, FactError> {
    if let Some(reason) = t.inapplicable_reason(g) {
        return Err(FactError::NotApplicable { fact: t.id.clone(), reason });
    }
    let expected = t.subject_kind();
    if subject.kind() != expected {
        return Err(FactError::SubjectMismatch { expected, found: subject.kind() });
    }
    if rank == 0 || (!t.rankable && rank != 1) {
        return Err(FactError::RankOutOfRange { rank, available: if t.rankable { 0 } else { 1 } });
    }
    let out = compute::run(&t.compute, g, subject, rank, params)?;
    let terms = g.terminology();
    let caption_template = match out.variant {
        Some(v) => t.alt_captions.get(v).ok_or_else(|| FactError::InvalidTemplate {
            id: t.id.clone(),
            reason: format!("missing alternative caption {v:?}"),
        })?,
        None => &t.caption,
    };
    let render_err = |e: format::TemplateError| FactError::InvalidTemplate { id: t.id.clone(), reason: e.0 };
    let caption = format::render_title(caption_template, &out.values, terms, rank).map_err(render_err)?;
    let title = format::render_title(&t.title, &out.values, terms, rank).map_err(render_err)?;
    let highlight = Highlight {
        node_ids: out.nodes.iter().map(|&n| g.nodes()[n].id.clone()).collect(),
        link_ids: out.links.iter().map(|&l| g.links()[l].id.clone()).collect(),
    };
    Ok(Slide {
        fact_id: t.id.clone(),
        rank,
        params: params.clone(),
        title,
        caption,
        highlight,
        subject: subject.clone(),
        focus: out.focus,
        values: out.values,
        tags: t.tags.clone(),
        concept_refs: t.concept_refs.clone(),
        starred: false,
    })
}

/// Fact templates keyed by id.
#[derive(Debug, Clone, Default)]
pub struct FactRegistry {
    facts: BTreeMap<String, FactTemplate>,
}

const BUILTIN_FACTS: &str = include_str!("../../assets/facts.json");
const CONCEPTS: &str = include_str!("../../assets/concepts.json");

impl FactRegistry {
    pub fn new() -> Self {
        Self::default()
    }

    /// The bundled fact library.
    pub fn builtin() -> &'static FactRegistry {
        static REGISTRY: OnceLock<FactRegistry> = OnceLock::new();
        REGISTRY.get_or_init(|| {
            let mut r = FactRegistry::new();
            r.register_manifest(BUILTIN_FACTS).expect("bundled fact manifest is valid");
            r
        })
    }

    pub fn register(&mut self, t: FactTemplate) -> Result<(), FactError> {
        t.check()?;
        if self.facts.contains_key(&t.id) {
            return Err(FactError::DuplicateFactId(t.id));
        }
        self.facts.insert(t.id.clone(), t);
        Ok(())
    }

    pub fn register_doc(&mut self, doc: FactTemplateDoc) -> Result<(), FactError> {
        self.register(FactTemplate::try_from(doc)?)
    }

    /// Registers every record of a JSON array of fact templates.
    pub fn register_manifest(&mut self, json: &str) -> Result<usize, FactError> {
        let docs: Vec<FactTemplateDoc> = serde_json::from_str(json).map_err(|e| FactError::InvalidTemplate {
            id: String::new(),
            reason: e.to_string(),
        })?;
        let n = docs.len();
        for d in docs {
            self.register_doc(d)?;
        }
        Ok(n)
    }

    pub fn get(&self, id: &str) -> Result<&FactTemplate, FactError> {
        self.facts.get(id).ok_or_else(|| FactError::UnknownFactId(id.to_string()))
    }

    pub fn contains(&self, id: &str) -> bool {
        self.facts.contains_key(id)
    }

    pub fn len(&self) -> usize {
        self.facts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.facts.is_empty()
    }

    /// Templates in id order.
    pub fn iter(&self) -> impl Iterator<Item = &FactTemplate> {
        self.facts.values()
    }

    /// Applicable facts sharing at least one tag with `tags`, in id order.
    pub fn facts_by_tags(&self, tags: &BTreeSet<Tag>, g: &Graph) -> Vec<&FactTemplate> {
        self.iter()
            .filter(|t| t.tags.iter().any(|x| tags.contains(x)) && t.applicable(g))
            .collect()
    }

    /// Facts sharing at least one tag with `tags`, ignoring applicability.
    pub fn facts_with_tags(&self, tags: &BTreeSet<Tag>) -> Vec<&FactTemplate> {
        self.iter().filter(|t| t.tags.iter().any(|x| tags.contains(x))).collect()
    }
}

/// A short explanation of a concept referenced by slides.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Concept {
    pub title: String,
    pub explanation: String,
    pub formula: String,
}

pub fn concepts() -> &'static BTreeMap<String, Concept> {
    static CONCEPT_MAP: OnceLock<BTreeMap<String, Concept>> = OnceLock::new();
    CONCEPT_MAP.get_or_init(|| serde_json::from_str(CONCEPTS).expect("bundled concepts file is valid"))
}
