//! The interactive state of one analyst walking through tours: cursor,
//! detours, pivots, stars, tag filter and tour edits. Every successful
//! action is appended to an event log from which the session can be rebuilt.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::detour::{DetourContext, DetourError, DetourResult, Recommender, SectionRef};
use crate::facts::{FactError, FactRegistry, Slide, Tag};
use crate::graph::Graph;
use crate::subject::{Subject, SubjectKind};
use crate::tours::{check_subject, instantiate, SlideRef, TemplateSection, TourCatalog, TourError, TourScope, TourTemplate};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SessionError {
    #[error("unknown slide {0:?}")]
    UnknownSlide(String),
    #[error("slide {0:?} is hidden by the tag filter")]
    HiddenSlide(String),
    #[error("unknown section {0:?}")]
    UnknownSection(String),
    #[error("unknown tag {0:?}")]
    UnknownTag(String),
    #[error("unknown pivot suggestion {0}")]
    UnknownSuggestion(usize),
    #[error("no tour is being edited")]
    NoEdit,
    #[error("the event log must start with a start event")]
    NotStarted,
    #[error(transparent)]
    Tour(#[from] TourError),
    #[error(transparent)]
    Detour(#[from] DetourError),
}

impl SessionError {
    pub fn code(&self) -> &'static str {
        match self {
            SessionError::UnknownSlide(_) => "UnknownSlide",
            SessionError::HiddenSlide(_) => "HiddenSlide",
            SessionError::UnknownSection(_) => "UnknownSection",
            SessionError::UnknownTag(_) => "UnknownTag",
            SessionError::UnknownSuggestion(_) => "UnknownSuggestion",
            SessionError::NoEdit => "NoEdit",
            SessionError::NotStarted => "NotStarted",
            SessionError::Tour(e) => e.code(),
            SessionError::Detour(e) => e.code(),
        }
    }
}

impl From<FactError> for SessionError {
    fn from(e: FactError) -> Self {
        match e {
            FactError::UnknownTag(t) => SessionError::UnknownTag(t),
            FactError::UnknownFactId(id) => SessionError::Tour(TourError::UnknownFactId(id)),
            other => SessionError::Tour(TourError::Fact(other)),
        }
    }
}

/// Shared, read-only context a session runs against.
#[derive(Clone, Copy)]
pub struct Env<'a> {
    pub graph: &'a Graph,
    pub registry: &'a FactRegistry,
    pub catalog: &'a TourCatalog,
    pub recommender: &'a Recommender,
}

/// One change to a tour under edit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "camelCase", rename_all_fields = "camelCase")]
pub enum TourEdit {
    AddSlide { section: String, slide: SlideRef, position: Option<usize> },
    RemoveSlide { section: String, index: usize },
    MoveSlide { section: String, from: usize, to: usize },
    AddSection { title: String, position: Option<usize> },
    RemoveSection { title: String },
    Rename { name: String, description: Option<String> },
}

/// Everything an analyst can do; also the event log vocabulary.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "event", content = "params", rename_all = "camelCase", rename_all_fields = "camelCase")]
pub enum Action {
    Start { tour_id: String, subject: Subject, seed: u64 },
    Next,
    Prev,
    SkipSection,
    JumpTo { slide: String },
    ExtendSlide { slide: String },
    ExtendSection { section: String },
    Pivot { index: usize, extra: Option<Subject> },
    Back,
    Star { slide: String },
    Unstar { slide: String },
    SetTagFilter { tags: Vec<String> },
    EditTour { edits: Vec<TourEdit> },
    SaveTour { id: Option<String>, name: Option<String> },
}

impl Action {
    pub fn name(&self) -> &'static str {
        match self {
            Action::Start { .. } => "start",
            Action::Next => "next",
            Action::Prev => "prev",
            Action::SkipSection => "skipSection",
            Action::JumpTo { .. } => "jumpTo",
            Action::ExtendSlide { .. } => "extendSlide",
            Action::ExtendSection { .. } => "extendSection",
            Action::Pivot { .. } => "pivot",
            Action::Back => "back",
            Action::Star { .. } => "star",
            Action::Unstar { .. } => "unstar",
            Action::SetTagFilter { .. } => "setTagFilter",
            Action::EditTour { .. } => "editTour",
            Action::SaveTour { .. } => "saveTour",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Event {
    #[serde(flatten)]
    pub action: Action,
    pub timestamp: i64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct FrameSlide {
    pub section: String,
    pub slide: Slide,
    /// Added by a detour rather than the template.
    pub inserted: bool,
}

/// One tour on the pivot stack.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Frame {
    pub tour_id: String,
    pub tour_name: String,
    pub scope: TourScope,
    pub subject: Subject,
    pub slides: Vec<FrameSlide>,
    pub cursor: usize,
    /// Keys of slides whose rank extension has been used.
    pub extended: BTreeSet<String>,
    pub skipped: Vec<crate::tours::Skipped>,
}

impl Frame {
    fn index_of(&self, key: &str) -> Option<usize> {
        self.slides.iter().position(|s| s.slide.key() == key)
    }

    fn keys(&self) -> BTreeSet<String> {
        self.slides.iter().map(|s| s.slide.key()).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct StarredSlide {
    pub tour_id: String,
    pub slide: Slide,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct PivotSuggestion {
    pub target_tour_id: String,
    pub subject: Subject,
    pub label: String,
    /// Kind of the extra selection the target still needs, if any.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub needs: Option<SubjectKind>,
}

/// Side results of an action.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Outcome {
    pub section_boundary: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detour: Option<DetourResult>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub edited: Option<TourTemplate>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub saved: Option<TourTemplate>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct OutlineSlide {
    pub key: String,
    pub title: String,
    pub visible: bool,
    pub current: bool,
    pub starred: bool,
    pub inserted: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct OutlineSection {
    pub title: String,
    pub slides: Vec<OutlineSlide>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Session {
    pub id: String,
    pub seed: u64,
    pub tour_stack: Vec<Frame>,
    pub starred: Vec<StarredSlide>,
    pub tag_filter: BTreeSet<Tag>,
    pub detours: u64,
    pub edit_buffer: Option<TourTemplate>,
    pub saved_count: usize,
    pub events: Vec<Event>,
}

fn all_tags() -> BTreeSet<Tag> {
    Tag::ALL.into_iter().collect()
}

/// Seed for the `n`-th detour of a session.
fn detour_seed(seed: u64, n: u64) -> u64 {
    seed ^ n.wrapping_mul(0x9e37_79b9_7f4a_7c15)
}

impl Session {
    /// Starts `tour_id` for `subject`; the start is the first logged event.
    pub fn start(
        env: Env<'_>,
        id: impl Into<String>,
        tour_id: &str,
        subject: Subject,
        seed: u64,
        timestamp: i64,
    ) -> Result<Session, SessionError> {
        let mut s = Session {
            id: id.into(),
            seed,
            tour_stack: Vec::new(),
            starred: Vec::new(),
            tag_filter: all_tags(),
            detours: 0,
            edit_buffer: None,
            saved_count: 0,
            events: Vec::new(),
        };
        s.act(env, Action::Start { tour_id: tour_id.to_string(), subject, seed }, timestamp)?;
        Ok(s)
    }

    /// Rebuilds a session from its event log.
    pub fn replay(env: Env<'_>, id: impl Into<String>, events: &[Event]) -> Result<Session, SessionError> {
        let Some((first, rest)) = events.split_first() else { return Err(SessionError::NotStarted) };
        let Action::Start { tour_id, subject, seed } = &first.action else { return Err(SessionError::NotStarted) };
        let mut s = Session::start(env, id, tour_id, subject.clone(), *seed, first.timestamp)?;
        for e in rest {
            s.act(env, e.action.clone(), e.timestamp)?;
        }
        Ok(s)
    }

    /// Applies `action`; on success it is appended to the event log, on
    /// failure the session is left unchanged.
    pub fn act(&mut self, env: Env<'_>, action: Action, timestamp: i64) -> Result<Outcome, SessionError> {
        let mut next = self.clone();
        let outcome = next.apply(env, &action)?;
        next.events.push(Event { action, timestamp });
        *self = next;
        Ok(outcome)
    }

    fn apply(&mut self, env: Env<'_>, action: &Action) -> Result<Outcome, SessionError> {
        let mut out = Outcome::default();
        match action {
            Action::Start { tour_id, subject, seed } => {
                self.seed = *seed;
                self.tour_stack = vec![new_frame(env, tour_id, subject)?];
                self.settle_cursor();
            }
            Action::Next => out.section_boundary = self.step(true),
            Action::Prev => out.section_boundary = self.step(false),
            Action::SkipSection => out.section_boundary = self.skip_section(),
            Action::JumpTo { slide } => {
                let i = self.visible_index(slide)?;
                self.frame_mut().cursor = i;
            }
            Action::ExtendSlide { slide } => out.detour = Some(self.extend_slide(env, slide)?),
            Action::ExtendSection { section } => out.detour = Some(self.extend_section(env, section)?),
            Action::Pivot { index, extra } => {
                let suggestions = self.pivot_suggestions(env);
                let sug = suggestions.get(*index).ok_or(SessionError::UnknownSuggestion(*index))?;
                let subject = combine(sug, extra.as_ref())?;
                let frame = new_frame(env, &sug.target_tour_id, &subject)?;
                self.tour_stack.push(frame);
                self.settle_cursor();
            }
            Action::Back => {
                if self.tour_stack.len() > 1 {
                    self.tour_stack.pop();
                    self.settle_cursor();
                }
            }
            Action::Star { slide } => {
                let frame = self.frame();
                let i = frame.index_of(slide).ok_or_else(|| SessionError::UnknownSlide(slide.clone()))?;
                let mut snapshot = StarredSlide { tour_id: frame.tour_id.clone(), slide: frame.slides[i].slide.clone() };
                snapshot.slide.starred = true;
                if !self.starred.iter().any(|s| s.tour_id == snapshot.tour_id && s.slide.key() == *slide) {
                    self.starred.push(snapshot);
                }
            }
            Action::Unstar { slide } => {
                let tour = self.frame().tour_id.clone();
                let before = self.starred.len();
                self.starred.retain(|s| !(s.tour_id == tour && s.slide.key() == *slide));
                if self.starred.len() == before {
                    return Err(SessionError::UnknownSlide(slide.clone()));
                }
            }
            Action::SetTagFilter { tags } => {
                self.tag_filter = Tag::parse_set(tags)?;
                self.settle_cursor();
            }
            Action::EditTour { edits } => {
                let mut t = match &self.edit_buffer {
                    Some(t) => t.clone(),
                    None => env.catalog.get(&self.frame().tour_id)?.clone(),
                };
                for e in edits {
                    apply_edit(&mut t, e, env.registry)?;
                }
                out.edited = Some(t.clone());
                self.edit_buffer = Some(t);
            }
            Action::SaveTour { id, name } => {
                let mut t = self.edit_buffer.clone().ok_or(SessionError::NoEdit)?;
                self.saved_count += 1;
                t.id = match id {
                    Some(id) => id.clone(),
                    None => format!("{}-{}-{}", self.frame().tour_id, self.id, self.saved_count),
                };
                if let Some(name) = name {
                    t.name = name.clone();
                }
                t.validate(env.registry)?;
                self.edit_buffer = None;
                out.saved = Some(t);
            }
        }
        self.settle_cursor();
        Ok(out)
    }

    pub fn frame(&self) -> &Frame {
        self.tour_stack.last().expect("a started session has a tour")
    }

    fn frame_mut(&mut self) -> &mut Frame {
        self.tour_stack.last_mut().expect("a started session has a tour")
    }

    pub fn is_visible(&self, slide: &Slide) -> bool {
        slide.tags.iter().any(|t| self.tag_filter.contains(t))
    }

    /// Indices of visible slides in the current tour.
    pub fn visible(&self) -> Vec<usize> {
        let f = self.frame();
        (0..f.slides.len()).filter(|&i| self.is_visible(&f.slides[i].slide)).collect()
    }

    pub fn current(&self) -> Option<&FrameSlide> {
        let f = self.frame();
        f.slides.get(f.cursor).filter(|s| self.is_visible(&s.slide))
    }

    /// Position of the cursor among visible slides.
    pub fn position(&self) -> Option<usize> {
        let c = self.frame().cursor;
        self.visible().iter().position(|&i| i == c)
    }

    fn visible_index(&self, key: &str) -> Result<usize, SessionError> {
        let i = self.frame().index_of(key).ok_or_else(|| SessionError::UnknownSlide(key.to_string()))?;
        if !self.is_visible(&self.frame().slides[i].slide) {
            return Err(SessionError::HiddenSlide(key.to_string()));
        }
        Ok(i)
    }

    /// Moves the cursor to the nearest visible slide, preferring later ones.
    fn settle_cursor(&mut self) {
        let vis = self.visible();
        let c = self.frame().cursor;
        if let Some(&best) = vis.iter().min_by_key(|&&i| (i.abs_diff(c), i < c)) {
            self.frame_mut().cursor = best;
        }
    }

    fn move_to(&mut self, target: Option<usize>) -> bool {
        let Some(t) = target else { return false };
        let f = self.frame();
        let crossed = f.slides[t].section != f.slides[f.cursor].section;
        self.frame_mut().cursor = t;
        crossed
    }

    fn step(&mut self, forward: bool) -> bool {
        if self.current().is_none() {
            return false;
        }
        let c = self.frame().cursor;
        let vis = self.visible();
        let target = if forward { vis.iter().find(|&&i| i > c) } else { vis.iter().rev().find(|&&i| i < c) };
        self.move_to(target.copied())
    }

    fn skip_section(&mut self) -> bool {
        let Some(cur) = self.current() else { return false };
        let section = cur.section.clone();
        let c = self.frame().cursor;
        let vis = self.visible();
        let f = self.frame();
        let target = vis.iter().find(|&&i| i > c && f.slides[i].section != section).or(vis.last());
        self.move_to(target.copied())
    }

    fn detour_context<'e>(&'e self, env: Env<'e>, present: &'e BTreeSet<String>) -> DetourContext<'e> {
        DetourContext {
            registry: env.registry,
            graph: env.graph,
            subject: &self.frame().subject,
            present,
            tag_filter: &self.tag_filter,
        }
    }

    fn next_seed(&mut self) -> u64 {
        let s = detour_seed(self.seed, self.detours);
        self.detours += 1;
        s
    }

    fn extend_slide(&mut self, env: Env<'_>, key: &str) -> Result<DetourResult, SessionError> {
        let i = self.frame().index_of(key).ok_or_else(|| SessionError::UnknownSlide(key.to_string()))?;
        let seed = self.next_seed();
        let present = self.frame().keys();
        let first = !self.frame().extended.contains(key);
        let target = self.frame().slides[i].clone();
        let result = env.recommender.extend_slide(&self.detour_context(env, &present), &target.slide, first, seed);
        let f = self.frame_mut();
        f.extended.insert(key.to_string());
        let inserted = result
            .inserted_slides
            .iter()
            .map(|s| FrameSlide { section: target.section.clone(), slide: s.clone(), inserted: true });
        let n = result.inserted_slides.len();
        f.slides.splice(i + 1..i + 1, inserted);
        if f.cursor > i {
            f.cursor += n;
        }
        Ok(result)
    }

    fn extend_section(&mut self, env: Env<'_>, section: &str) -> Result<DetourResult, SessionError> {
        let end = self
            .frame()
            .slides
            .iter()
            .rposition(|s| s.section == section)
            .ok_or_else(|| SessionError::UnknownSection(section.to_string()))?;
        let seed = self.next_seed();
        let present = self.frame().keys();
        let sref = SectionRef::new(&self.frame().tour_id, section);
        let result = env.recommender.extend_section(&self.detour_context(env, &present), &sref, seed)?;
        let inserted = result
            .inserted_slides
            .iter()
            .map(|s| FrameSlide { section: section.to_string(), slide: s.clone(), inserted: true });
        let n = result.inserted_slides.len();
        let f = self.frame_mut();
        f.slides.splice(end + 1..end + 1, inserted);
        if f.cursor > end {
            f.cursor += n;
        }
        Ok(result)
    }

    /// Tours the analyst could switch to from the current slide.
    pub fn pivot_suggestions(&self, env: Env<'_>) -> Vec<PivotSuggestion> {
        let mut out = Vec::new();
        let Some(cur) = self.current() else { return out };
        let focus = &cur.slide.focus;
        if focus.kind() != SubjectKind::None {
            for t in env.catalog.iter() {
                let needs = match (t.scope.subject_kind(), focus.kind()) {
                    (a, b) if a == b => None,
                    (SubjectKind::NodePair, SubjectKind::Node) => Some(SubjectKind::Node),
                    (SubjectKind::SubgraphPair, SubjectKind::Subgraph) => Some(SubjectKind::Subgraph),
                    _ => continue,
                };
                let same = t.id == self.frame().tour_id && *focus == self.frame().subject;
                if !same {
                    out.push(PivotSuggestion {
                        target_tour_id: t.id.clone(),
                        subject: focus.clone(),
                        label: format!("{} on {}", t.name, describe(focus, env.graph)),
                        needs,
                    });
                }
            }
            out.sort_by_key(|p| p.needs.is_some());
        }
        let vis = self.visible();
        if vis.last() == Some(&self.frame().cursor) {
            for t in env.catalog.iter().filter(|t| t.scope == TourScope::Overall && t.id != self.frame().tour_id) {
                out.push(PivotSuggestion {
                    target_tour_id: t.id.clone(),
                    subject: Subject::None,
                    label: t.name.clone(),
                    needs: None,
                });
            }
        }
        out
    }

    /// Sections of the current tour with their slides in order.
    pub fn outline(&self) -> Vec<OutlineSection> {
        let f = self.frame();
        let mut out: Vec<OutlineSection> = Vec::new();
        for (i, s) in f.slides.iter().enumerate() {
            let key = s.slide.key();
            let entry = OutlineSlide {
                starred: self.starred.iter().any(|x| x.tour_id == f.tour_id && x.slide.key() == key),
                key,
                title: s.slide.title.clone(),
                visible: self.is_visible(&s.slide),
                current: i == f.cursor,
                inserted: s.inserted,
            };
            match out.last_mut() {
                Some(sec) if sec.title == s.section => sec.slides.push(entry),
                _ => out.push(OutlineSection { title: s.section.clone(), slides: vec![entry] }),
            }
        }
        out
    }

    /// Number of slides hidden by the current tag filter.
    pub fn hidden_count(&self) -> usize {
        self.frame().slides.len() - self.visible().len()
    }
}

fn describe(s: &Subject, g: &Graph) -> String {
    let label = |id: &String| g.node(id).map(|n| n.label.clone()).unwrap_or_else(|| id.clone());
    match s {
        Subject::None => "the network".to_string(),
        Subject::Node { id } => label(id),
        Subject::NodePair { first, second } => format!("{} and {}", label(first), label(second)),
        Subject::Subgraph(sg) => format!("a selection of {} nodes", sg.node_ids.len()),
        Subject::SubgraphPair { .. } => "two selections".to_string(),
        Subject::Path { nodes } => format!("a path of {} nodes", nodes.len()),
    }
}

fn combine(sug: &PivotSuggestion, extra: Option<&Subject>) -> Result<Subject, SessionError> {
    let Some(kind) = sug.needs else { return Ok(sug.subject.clone()) };
    let missing = || SessionError::Tour(TourError::SubjectMissing(TourScope::of(kind)));
    let extra = extra.ok_or_else(missing)?;
    match (&sug.subject, extra) {
        (Subject::Node { id: a }, Subject::Node { id: b }) => Ok(Subject::node_pair(a.clone(), b.clone())),
        (Subject::Subgraph(a), Subject::Subgraph(b)) => {
            Ok(Subject::SubgraphPair { first: a.clone(), second: b.clone() })
        }
        (_, other) => Err(SessionError::Tour(TourError::SubjectMismatch {
            expected: TourScope::of(kind),
            found: other.kind(),
        })),
    }
}

fn new_frame(env: Env<'_>, tour_id: &str, subject: &Subject) -> Result<Frame, SessionError> {
    let t = env.catalog.get(tour_id)?;
    let subject = check_subject(t.scope, subject, env.graph)?;
    let inst = instantiate(t, env.registry, env.graph, &subject)?;
    let slides = inst
        .sections
        .into_iter()
        .flat_map(|s| {
            let title = s.title;
            s.slides.into_iter().map(move |slide| FrameSlide { section: title.clone(), slide, inserted: false })
        })
        .collect();
    Ok(Frame {
        tour_id: inst.tour_id,
        tour_name: inst.name,
        scope: inst.scope,
        subject: inst.subject,
        slides,
        cursor: 0,
        extended: BTreeSet::new(),
        skipped: inst.skipped,
    })
}

fn section_mut<'t>(t: &'t mut TourTemplate, title: &str) -> Result<&'t mut TemplateSection, SessionError> {
    t.sections.iter_mut().find(|s| s.title == title).ok_or_else(|| SessionError::UnknownSection(title.to_string()))
}

fn out_of_range(what: &str, i: usize) -> SessionError {
    SessionError::Tour(TourError::SchemaViolation { path: what.to_string(), message: format!("index {i} out of range") })
}

/// Applies one edit; fact ids are checked, full validation happens on save.
pub fn apply_edit(t: &mut TourTemplate, edit: &TourEdit, registry: &FactRegistry) -> Result<(), SessionError> {
    match edit {
        TourEdit::AddSlide { section, slide, position } => {
            registry.get(&slide.fact)?;
            let s = section_mut(t, section)?;
            let at = position.unwrap_or(s.slides.len());
            if at > s.slides.len() {
                return Err(out_of_range("position", at));
            }
            s.slides.insert(at, slide.clone());
        }
        TourEdit::RemoveSlide { section, index } => {
            let s = section_mut(t, section)?;
            if *index >= s.slides.len() {
                return Err(out_of_range("index", *index));
            }
            s.slides.remove(*index);
        }
        TourEdit::MoveSlide { section, from, to } => {
            let s = section_mut(t, section)?;
            if *from >= s.slides.len() || *to >= s.slides.len() {
                return Err(out_of_range("from/to", (*from).max(*to)));
            }
            let r = s.slides.remove(*from);
            s.slides.insert(*to, r);
        }
        TourEdit::AddSection { title, position } => {
            if t.sections.iter().any(|s| s.title == *title) {
                return Err(SessionError::Tour(TourError::SchemaViolation {
                    path: "title".into(),
                    message: format!("duplicate section {title:?}"),
                }));
            }
            let at = position.unwrap_or(t.sections.len());
            if at > t.sections.len() {
                return Err(out_of_range("position", at));
            }
            t.sections.insert(at, TemplateSection { title: title.clone(), slides: Vec::new() });
        }
        TourEdit::RemoveSection { title } => {
            let i = t
                .sections
                .iter()
                .position(|s| s.title == *title)
                .ok_or_else(|| SessionError::UnknownSection(title.clone()))?;
            t.sections.remove(i);
        }
        TourEdit::Rename { name, description } => {
            t.name = name.clone();
            if let Some(d) = description {
                t.description = d.clone();
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn action_wire_format() {
        let e = Event { action: Action::JumpTo { slide: "overall.density#1".into() }, timestamp: 3 };
        let json = serde_json::to_value(&e).unwrap();
        assert_eq!(json, serde_json::json!({"event": "jumpTo", "params": {"slide": "overall.density#1"}, "timestamp": 3}));
        let back: Event = serde_json::from_value(json).unwrap();
        assert_eq!(back, e);
        let next: Event = serde_json::from_str(r#"{"event":"next","timestamp":1}"#).unwrap();
        assert_eq!(next.action, Action::Next);
        assert_eq!(next.action.name(), "next");
    }

    #[test]
    fn seeds_differ_per_detour() {
        assert_ne!(detour_seed(42, 0), detour_seed(42, 1));
        assert_eq!(detour_seed(42, 0), 42);
    }
}
