//! Tour templates: named, sectioned sequences of facts, their instantiation
//! against a dataset, and JSON import/export.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::facts::{evaluate, slide_key, FactError, FactRegistry, FactTemplate, Params, Slide};
use crate::graph::Graph;
use crate::subject::{Subject, SubjectError, SubjectKind};

/// Slide parameter that picks one part of a compound subject.
pub const SIDE_PARAM: &str = "side";

/// What a tour is about.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum TourScope {
    Overall,
    Subgraph,
    Node,
    NodePair,
    SubgraphPair,
    Path,
}

impl TourScope {
    pub const ALL: [TourScope; 6] = [
        TourScope::Overall,
        TourScope::Subgraph,
        TourScope::Node,
        TourScope::NodePair,
        TourScope::SubgraphPair,
        TourScope::Path,
    ];

    pub fn subject_kind(self) -> SubjectKind {
        match self {
            TourScope::Overall => SubjectKind::None,
            TourScope::Subgraph => SubjectKind::Subgraph,
            TourScope::Node => SubjectKind::Node,
            TourScope::NodePair => SubjectKind::NodePair,
            TourScope::SubgraphPair => SubjectKind::SubgraphPair,
            TourScope::Path => SubjectKind::Path,
        }
    }

    pub fn of(kind: SubjectKind) -> TourScope {
        match kind {
            SubjectKind::None => TourScope::Overall,
            SubjectKind::Subgraph => TourScope::Subgraph,
            SubjectKind::Node => TourScope::Node,
            SubjectKind::NodePair => TourScope::NodePair,
            SubjectKind::SubgraphPair => TourScope::SubgraphPair,
            SubjectKind::Path => TourScope::Path,
        }
    }

    /// Values of the `side` parameter that turn this tour's subject into a
    /// subject of `kind`. `Some(&[])` means no side is needed.
    pub fn sides_for(self, kind: SubjectKind) -> Option<&'static [&'static str]> {
        if kind == SubjectKind::None || kind == self.subject_kind() {
            return Some(&[]);
        }
        match (self, kind) {
            (TourScope::NodePair, SubjectKind::Node) => Some(&["first", "second"]),
            (TourScope::SubgraphPair, SubjectKind::Subgraph) => Some(&["first", "second"]),
            (TourScope::Path, SubjectKind::Node) => Some(&["first", "last"]),
            (TourScope::Path, SubjectKind::NodePair) => Some(&[]),
            _ => None,
        }
    }
}

impl fmt::Display for TourScope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            TourScope::Overall => "overall",
            other => return other.subject_kind().fmt(f),
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TourError {
    #[error("schema violation at {path}: {message}")]
    SchemaViolation { path: String, message: String },
    #[error("unknown fact id {0:?}")]
    UnknownFactId(String),
    #[error("fact {fact:?} cannot appear in a {scope} tour{detail}")]
    ScopeMismatch { fact: String, scope: TourScope, detail: String },
    #[error("unknown tour {0:?}")]
    UnknownTour(String),
    #[error("tour id {0:?} is already registered")]
    DuplicateTourId(String),
    #[error("a {0} tour needs a subject")]
    SubjectMissing(TourScope),
    #[error("a {expected} tour cannot take a {found} subject")]
    SubjectMismatch { expected: TourScope, found: SubjectKind },
    #[error(transparent)]
    Subject(#[from] SubjectError),
    #[error(transparent)]
    Fact(FactError),
}

impl TourError {
    pub fn code(&self) -> &'static str {
        match self {
            TourError::SchemaViolation { .. } => "SchemaViolation",
            TourError::UnknownFactId(_) => "UnknownFactId",
            TourError::ScopeMismatch { .. } => "ScopeMismatch",
            TourError::UnknownTour(_) => "UnknownTour",
            TourError::DuplicateTourId(_) => "DuplicateTourId",
            TourError::SubjectMissing(_) => "SubjectMissing",
            TourError::SubjectMismatch { .. } => "SubjectMismatch",
            TourError::Subject(e) => e.code(),
            TourError::Fact(e) => e.code(),
        }
    }

    fn schema(path: impl Into<String>, message: impl Into<String>) -> TourError {
        TourError::SchemaViolation { path: path.into(), message: message.into() }
    }
}

fn one() -> usize {
    1
}

fn is_one(r: &usize) -> bool {
    *r == 1
}

/// One slide of a template: a fact with an optional rank and parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SlideRef {
    pub fact: String,
    #[serde(default = "one", skip_serializing_if = "is_one")]
    pub rank: usize,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub params: Params,
}

impl SlideRef {
    pub fn new(fact: impl Into<String>) -> SlideRef {
        SlideRef { fact: fact.into(), rank: 1, params: Params::new() }
    }

    pub fn ranked(fact: impl Into<String>, rank: usize) -> SlideRef {
        SlideRef { rank, ..SlideRef::new(fact) }
    }

    pub fn with_param(mut self, key: &str, value: impl Into<serde_json::Value>) -> SlideRef {
        self.params.insert(key.to_string(), value.into());
        self
    }

    pub fn key(&self) -> String {
        slide_key(&self.fact, self.rank, &self.params)
    }

    fn side(&self) -> Option<&str> {
        self.params.get(SIDE_PARAM).and_then(|v| v.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TemplateSection {
    pub title: String,
    pub slides: Vec<SlideRef>,
}

/// A goal-oriented tour definition.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TourTemplate {
    pub id: String,
    pub name: String,
    pub description: String,
    pub scope: TourScope,
    pub sections: Vec<TemplateSection>,
}

impl TourTemplate {
    pub fn fact_count(&self) -> usize {
        self.sections.iter().map(|s| s.slides.len()).sum()
    }

    pub fn slide_refs(&self) -> impl Iterator<Item = (&TemplateSection, &SlideRef)> {
        self.sections.iter().flat_map(|s| s.slides.iter().map(move |r| (s, r)))
    }

    /// Checks structure, fact ids, ranks and scope compatibility.
    pub fn validate(&self, registry: &FactRegistry) -> Result<(), TourError> {
        if self.id.trim().is_empty() {
            return Err(TourError::schema("id", "must not be empty"));
        }
        if self.name.trim().is_empty() {
            return Err(TourError::schema("name", "must not be empty"));
        }
        if self.sections.is_empty() {
            return Err(TourError::schema("sections", "a tour needs at least one section"));
        }
        let mut titles = BTreeSet::new();
        let mut keys = BTreeSet::new();
        for (i, section) in self.sections.iter().enumerate() {
            let at = format!("sections[{i}]");
            if section.title.trim().is_empty() {
                return Err(TourError::schema(format!("{at}.title"), "must not be empty"));
            }
            if !titles.insert(section.title.as_str()) {
                return Err(TourError::schema(format!("{at}.title"), format!("duplicate section {:?}", section.title)));
            }
            if section.slides.is_empty() {
                return Err(TourError::schema(format!("{at}.slides"), "a section needs at least one slide"));
            }
            for (j, slide) in section.slides.iter().enumerate() {
                let at = format!("{at}.slides[{j}]");
                let fact = registry.get(&slide.fact).map_err(|_| TourError::UnknownFactId(slide.fact.clone()))?;
                if slide.rank == 0 || (!fact.rankable && slide.rank != 1) {
                    return Err(TourError::schema(format!("{at}.rank"), format!("{} cannot take rank {}", fact.id, slide.rank)));
                }
                check_side(self.scope, fact, slide)?;
                if !keys.insert(slide.key()) {
                    return Err(TourError::schema(at, format!("slide {} appears twice", slide.key())));
                }
            }
        }
        Ok(())
    }
}

fn check_side(scope: TourScope, fact: &FactTemplate, slide: &SlideRef) -> Result<(), TourError> {
    let kind = fact.subject_kind();
    let mismatch = |detail: String| TourError::ScopeMismatch { fact: fact.id.clone(), scope, detail };
    let Some(sides) = scope.sides_for(kind) else {
        return Err(mismatch(format!(" (it needs a {kind} subject)")));
    };
    match (sides.is_empty(), slide.params.get(SIDE_PARAM)) {
        (true, None) => Ok(()),
        (true, Some(_)) => Err(mismatch(" with a side parameter".to_string())),
        (false, None) => Err(mismatch(format!(" without a side parameter ({})", sides.join(" or ")))),
        (false, Some(v)) => match v.as_str() {
            Some(s) if sides.contains(&s) => Ok(()),
            _ => Err(mismatch(format!(" with side {v} ({})", sides.join(" or ")))),
        },
    }
}

/// Parses and validates a tour template document.
pub fn parse_tour_template(doc: &str, registry: &FactRegistry) -> Result<TourTemplate, TourError> {
    let de = &mut serde_json::Deserializer::from_str(doc);
    let t: TourTemplate = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        TourError::schema(if path == "." { "$".to_string() } else { path }, e.into_inner().to_string())
    })?;
    t.validate(registry)?;
    Ok(t)
}

pub fn export_tour(t: &TourTemplate) -> String {
    serde_json::to_string_pretty(t).expect("templates serialize")
}

pub fn import_tour(doc: &str, registry: &FactRegistry) -> Result<TourTemplate, TourError> {
    parse_tour_template(doc, registry)
}

const BUILTIN_TOURS: [&str; 10] = [
    include_str!("../assets/tours/network-overview.json"),
    include_str!("../assets/tours/subgraph-overview.json"),
    include_str!("../assets/tours/community-exploration.json"),
    include_str!("../assets/tours/centrality-exploration.json"),
    include_str!("../assets/tours/subgraph-comparison.json"),
    include_str!("../assets/tours/compare-two-nodes.json"),
    include_str!("../assets/tours/ego-network.json"),
    include_str!("../assets/tours/possible-paths.json"),
    include_str!("../assets/tours/follow-a-path.json"),
    include_str!("../assets/tours/temporal-exploration.json"),
];

/// The ten bundled tours, validated against the built-in fact registry.
pub fn builtin_tours() -> &'static [TourTemplate] {
    static TOURS: OnceLock<Vec<TourTemplate>> = OnceLock::new();
    TOURS.get_or_init(|| {
        BUILTIN_TOURS
            .iter()
            .map(|doc| parse_tour_template(doc, FactRegistry::builtin()).expect("bundled tour is valid"))
            .collect()
    })
}

/// Tour templates keyed by id.
#[derive(Debug, Clone, Default)]
pub struct TourCatalog {
    tours: BTreeMap<String, TourTemplate>,
}

impl TourCatalog {
    pub fn new() -> TourCatalog {
        TourCatalog::default()
    }

    pub fn with_builtins() -> TourCatalog {
        let mut c = TourCatalog::new();
        for t in builtin_tours() {
            c.tours.insert(t.id.clone(), t.clone());
        }
        c
    }

    pub fn register(&mut self, t: TourTemplate, registry: &FactRegistry) -> Result<(), TourError> {
        t.validate(registry)?;
        if self.tours.contains_key(&t.id) {
            return Err(TourError::DuplicateTourId(t.id));
        }
        self.tours.insert(t.id.clone(), t);
        Ok(())
    }

    pub fn get(&self, id: &str) -> Result<&TourTemplate, TourError> {
        self.tours.get(id).ok_or_else(|| TourError::UnknownTour(id.to_string()))
    }

    pub fn contains(&self, id: &str) -> bool {
        self.tours.contains_key(id)
    }

    pub fn iter(&self) -> impl Iterator<Item = &TourTemplate> + Clone {
        self.tours.values()
    }

    pub fn len(&self) -> usize {
        self.tours.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tours.is_empty()
    }

    /// An id derived from `base` that is not yet taken.
    pub fn fresh_id(&self, base: &str) -> String {
        (1..).map(|i| format!("{base}-{i}")).find(|id| !self.contains(id)).expect("unbounded")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct InstanceSection {
    pub title: String,
    pub slides: Vec<Slide>,
}

/// A template slide that produced nothing for this dataset.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Skipped {
    pub fact_id: String,
    pub rank: usize,
    pub section: String,
    pub code: String,
    pub reason: String,
}

/// A template evaluated against one dataset and subject.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct TourInstance {
    pub tour_id: String,
    pub name: String,
    pub description: String,
    pub scope: TourScope,
    pub subject: Subject,
    pub sections: Vec<InstanceSection>,
    pub skipped: Vec<Skipped>,
}

impl TourInstance {
    pub fn slide_count(&self) -> usize {
        self.sections.iter().map(|s| s.slides.len()).sum()
    }

    pub fn slides(&self) -> impl Iterator<Item = &Slide> {
        self.sections.iter().flat_map(|s| s.slides.iter())
    }
}

/// Checks and normalizes `subject` for a tour of `scope`.
pub fn check_subject(scope: TourScope, subject: &Subject, g: &Graph) -> Result<Subject, TourError> {
    let expected = scope.subject_kind();
    match (expected, subject.kind()) {
        (SubjectKind::None, SubjectKind::None) => return Ok(Subject::None),
        (_, SubjectKind::None) => return Err(TourError::SubjectMissing(scope)),
        (e, f) if e != f => return Err(TourError::SubjectMismatch { expected: scope, found: f }),
        _ => {}
    }
    Ok(subject.normalize(g)?)
}

/// The part of a tour subject a slide talks about.
pub fn project(subject: &Subject, kind: SubjectKind, side: Option<&str>, g: &Graph) -> Result<Subject, TourError> {
    if kind == SubjectKind::None {
        return Ok(Subject::None);
    }
    if kind == subject.kind() {
        return Ok(subject.clone());
    }
    let bad = || TourError::SubjectMismatch { expected: TourScope::of(kind), found: subject.kind() };
    let picked = match (subject, kind, side) {
        (Subject::NodePair { first, .. }, SubjectKind::Node, Some("first")) => Subject::node(first.clone()),
        (Subject::NodePair { second, .. }, SubjectKind::Node, Some("second")) => Subject::node(second.clone()),
        (Subject::SubgraphPair { first, .. }, SubjectKind::Subgraph, Some("first")) => Subject::Subgraph(first.clone()),
        (Subject::SubgraphPair { second, .. }, SubjectKind::Subgraph, Some("second")) => {
            Subject::Subgraph(second.clone())
        }
        (Subject::Path { nodes }, SubjectKind::Node, Some("first")) => Subject::node(nodes[0].clone()),
        (Subject::Path { nodes }, SubjectKind::Node, Some("last")) => Subject::node(nodes[nodes.len() - 1].clone()),
        (Subject::Path { nodes }, SubjectKind::NodePair, None) => {
            Subject::node_pair(nodes[0].clone(), nodes[nodes.len() - 1].clone())
        }
        _ => return Err(bad()),
    };
    Ok(picked.normalize(g)?)
}

/// Evaluates one slide reference for a normalized tour subject.
pub fn evaluate_ref(
    r: &SlideRef,
    registry: &FactRegistry,
    g: &Graph,
    subject: &Subject,
) -> Result<Result<Slide, FactError>, TourError> {
    let fact = registry.get(&r.fact).map_err(|_| TourError::UnknownFactId(r.fact.clone()))?;
    let sub = project(subject, fact.subject_kind(), r.side(), g)?;
    Ok(evaluate(fact, g, &sub, r.rank, &r.params))
}

/// Evaluates every slide of `t` in order. Facts with nothing to show are
/// listed in `skipped`; sections left empty are dropped.
pub fn instantiate(
    t: &TourTemplate,
    registry: &FactRegistry,
    g: &Graph,
    subject: &Subject,
) -> Result<TourInstance, TourError> {
    let subject = check_subject(t.scope, subject, g)?;
    let mut sections = Vec::new();
    let mut skipped = Vec::new();
    for section in &t.sections {
        let mut slides = Vec::new();
        for r in &section.slides {
            match evaluate_ref(r, registry, g, &subject)? {
                Ok(slide) => slides.push(slide),
                Err(e) if e.is_skip() => skipped.push(Skipped {
                    fact_id: r.fact.clone(),
                    rank: r.rank,
                    section: section.title.clone(),
                    code: e.code().to_string(),
                    reason: e.to_string(),
                }),
                Err(e) => return Err(TourError::Fact(e)),
            }
        }
        if !slides.is_empty() {
            sections.push(InstanceSection { title: section.title.clone(), slides });
        }
    }
    Ok(TourInstance {
        tour_id: t.id.clone(),
        name: t.name.clone(),
        description: t.description.clone(),
        scope: t.scope,
        subject,
        sections,
        skipped,
    })
}

/// Number of template slides whose fact applies to `g` (ignoring subject).
pub fn applicable_fact_count(t: &TourTemplate, registry: &FactRegistry, g: &Graph) -> usize {
    t.slide_refs().filter(|(_, r)| registry.get(&r.fact).is_ok_and(|f| f.applicable(g))).count()
}
