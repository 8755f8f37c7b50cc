//! What a fact or tour talks about: the whole network, a node, a pair of
//! nodes, a node selection, two selections, or an ordered path.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Graph, SubgraphRef};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(tag = "kind", rename_all = "camelCase")]
pub enum Subject {
    #[default]
    None,
    Node {
        id: String,
    },
    NodePair {
        first: String,
        second: String,
    },
    Subgraph(SubgraphRef),
    SubgraphPair {
        first: SubgraphRef,
        second: SubgraphRef,
    },
    Path {
        nodes: Vec<String>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum SubjectKind {
    None,
    Node,
    NodePair,
    Subgraph,
    SubgraphPair,
    Path,
}

impl fmt::Display for SubjectKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            SubjectKind::None => "none",
            SubjectKind::Node => "node",
            SubjectKind::NodePair => "nodePair",
            SubjectKind::Subgraph => "subgraph",
            SubjectKind::SubgraphPair => "subgraphPair",
            SubjectKind::Path => "path",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SubjectError {
    #[error("unknown node {0:?}")]
    UnknownNode(String),
    #[error("selection is empty")]
    EmptySelection,
    #[error("the two nodes must differ")]
    SameNode,
    #[error("the two selections overlap")]
    OverlappingSubgraphs,
    #[error("a path needs at least two nodes")]
    ShortPath,
    #[error("path visits {0:?} twice")]
    RepeatedPathNode(String),
    #[error("no link joins {from:?} and {to:?}")]
    DisconnectedPath { from: String, to: String },
    #[error("cannot read subject {0:?}")]
    MalformedSubject(String),
}

impl SubjectError {
    pub fn code(&self) -> &'static str {
        match self {
            SubjectError::UnknownNode(_) => "UnknownNode",
            SubjectError::EmptySelection => "EmptySelection",
            SubjectError::SameNode => "SameNode",
            SubjectError::OverlappingSubgraphs => "OverlappingSubgraphs",
            SubjectError::ShortPath | SubjectError::RepeatedPathNode(_) => "SubjectMismatch",
            SubjectError::DisconnectedPath { .. } => "DisconnectedPath",
            SubjectError::MalformedSubject(_) => "MalformedSubject",
        }
    }
}

impl Subject {
    pub fn node(id: impl Into<String>) -> Subject {
        Subject::Node { id: id.into() }
    }

    pub fn node_pair(first: impl Into<String>, second: impl Into<String>) -> Subject {
        Subject::NodePair { first: first.into(), second: second.into() }
    }

    /// Subgraph from node ids; induced links are filled in by [`Subject::normalize`].
    pub fn subgraph<I, S>(ids: I) -> Subject
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Subject::Subgraph(bare(ids))
    }

    pub fn subgraph_pair<I, J, S, T>(first: I, second: J) -> Subject
    where
        I: IntoIterator<Item = S>,
        J: IntoIterator<Item = T>,
        S: Into<String>,
        T: Into<String>,
    {
        Subject::SubgraphPair { first: bare(first), second: bare(second) }
    }

    pub fn path<I, S>(ids: I) -> Subject
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Subject::Path { nodes: ids.into_iter().map(Into::into).collect() }
    }

    pub fn kind(&self) -> SubjectKind {
        match self {
            Subject::None => SubjectKind::None,
            Subject::Node { .. } => SubjectKind::Node,
            Subject::NodePair { .. } => SubjectKind::NodePair,
            Subject::Subgraph(_) => SubjectKind::Subgraph,
            Subject::SubgraphPair { .. } => SubjectKind::SubgraphPair,
            Subject::Path { .. } => SubjectKind::Path,
        }
    }

    /// All node ids mentioned by the subject.
    pub fn node_ids(&self) -> BTreeSet<String> {
        match self {
            Subject::None => BTreeSet::new(),
            Subject::Node { id } => BTreeSet::from([id.clone()]),
            Subject::NodePair { first, second } => BTreeSet::from([first.clone(), second.clone()]),
            Subject::Subgraph(sg) => sg.node_ids.clone(),
            Subject::SubgraphPair { first, second } => first.node_ids.union(&second.node_ids).cloned().collect(),
            Subject::Path { nodes } => nodes.iter().cloned().collect(),
        }
    }

    /// Checks the subject against `g` and recomputes induced link sets.
    pub fn normalize(&self, g: &Graph) -> Result<Subject, SubjectError> {
        let known = |id: &String| {
            if g.node(id).is_some() {
                Ok(())
            } else {
                Err(SubjectError::UnknownNode(id.clone()))
            }
        };
        let induce = |sg: &SubgraphRef| -> Result<SubgraphRef, SubjectError> {
            if sg.node_ids.is_empty() {
                return Err(SubjectError::EmptySelection);
            }
            sg.node_ids.iter().try_for_each(known)?;
            Ok(g.induce(&sg.node_ids).expect("ids checked"))
        };
        Ok(match self {
            Subject::None => Subject::None,
            Subject::Node { id } => {
                known(id)?;
                self.clone()
            }
            Subject::NodePair { first, second } => {
                known(first)?;
                known(second)?;
                if first == second {
                    return Err(SubjectError::SameNode);
                }
                self.clone()
            }
            Subject::Subgraph(sg) => Subject::Subgraph(induce(sg)?),
            Subject::SubgraphPair { first, second } => {
                let (a, b) = (induce(first)?, induce(second)?);
                if a.node_ids.intersection(&b.node_ids).next().is_some() {
                    return Err(SubjectError::OverlappingSubgraphs);
                }
                Subject::SubgraphPair { first: a, second: b }
            }
            Subject::Path { nodes } => {
                if nodes.len() < 2 {
                    return Err(SubjectError::ShortPath);
                }
                let mut seen = BTreeSet::new();
                for id in nodes {
                    known(id)?;
                    if !seen.insert(id) {
                        return Err(SubjectError::RepeatedPathNode(id.clone()));
                    }
                }
                path_links(g, nodes)?;
                self.clone()
            }
        })
    }
}

fn bare<I, S>(ids: I) -> SubgraphRef
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    SubgraphRef { node_ids: ids.into_iter().map(Into::into).collect(), induced_link_ids: BTreeSet::new() }
}

/// For each consecutive pair of a path, the lightest link joining them in
/// either direction (ties by id). Fails at the first hop with no link.
pub fn path_links(g: &Graph, nodes: &[String]) -> Result<Vec<usize>, SubjectError> {
    nodes
        .windows(2)
        .map(|w| {
            let a = g.node_idx(&w[0]).map_err(|_| SubjectError::UnknownNode(w[0].clone()))?;
            let b = g.node_idx(&w[1]).map_err(|_| SubjectError::UnknownNode(w[1].clone()))?;
            let w_of = |l: usize| g.links()[l].weight.unwrap_or(0.0);
            g.endpoints()
                .iter()
                .enumerate()
                .filter(|(_, &(s, t))| (s == a && t == b) || (s == b && t == a))
                .map(|(l, _)| l)
                .min_by(|&x, &y| w_of(x).total_cmp(&w_of(y)).then_with(|| g.links()[x].id.cmp(&g.links()[y].id)))
                .ok_or_else(|| SubjectError::DisconnectedPath { from: w[0].clone(), to: w[1].clone() })
        })
        .collect()
}

/// Reads `none`, `node:ID`, `pair:A,B`, `subgraph:A,B,...`,
/// `subgraphs:A,B|C,D`, `path:A,B,...` or a JSON subject.
impl std::str::FromStr for Subject {
    type Err = SubjectError;

    fn from_str(s: &str) -> Result<Subject, SubjectError> {
        let s = s.trim();
        let bad = || SubjectError::MalformedSubject(s.to_string());
        if s.starts_with('{') {
            return serde_json::from_str(s).map_err(|_| bad());
        }
        if s == "none" {
            return Ok(Subject::None);
        }
        let (kind, rest) = s.split_once(':').ok_or_else(bad)?;
        let list = |r: &str| -> Vec<String> { r.split(',').map(|x| x.trim().to_string()).filter(|x| !x.is_empty()).collect() };
        let ids = list(rest);
        match kind {
            "node" if ids.len() == 1 => Ok(Subject::node(ids[0].clone())),
            "pair" if ids.len() == 2 => Ok(Subject::node_pair(ids[0].clone(), ids[1].clone())),
            "subgraph" if !ids.is_empty() => Ok(Subject::subgraph(ids)),
            "path" => Ok(Subject::path(ids)),
            "subgraphs" => {
                let (a, b) = rest.split_once('|').ok_or_else(bad)?;
                Ok(Subject::subgraph_pair(list(a), list(b)))
            }
            _ => Err(bad()),
        }
    }
}
