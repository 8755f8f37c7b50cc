//! Detours: extra slides inserted into a running tour, either further ranks
//! of a rankable fact or facts from sections with a similar tag profile.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::facts::{evaluate, FactRegistry, FactTemplate, Slide, Tag};
use crate::graph::Graph;
use crate::subject::Subject;
use crate::tours::{evaluate_ref, SlideRef, TourScope, TourTemplate, SIDE_PARAM};

/// Slides inserted per detour.
pub const DETOUR_SIZE: usize = 3;
/// Number of most similar sections pooled by a section detour.
pub const POOL_SECTIONS: usize = 3;

/// A section of a registered tour.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SectionRef {
    pub tour_id: String,
    pub section: String,
}

impl SectionRef {
    pub fn new(tour_id: impl Into<String>, section: impl Into<String>) -> SectionRef {
        SectionRef { tour_id: tour_id.into(), section: section.into() }
    }
}

impl fmt::Display for SectionRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.tour_id, self.section)
    }
}

/// TF-IDF weights of a section over the tag vocabulary.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SectionVector {
    pub section: SectionRef,
    pub weights: [f64; Tag::COUNT],
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DetourError {
    #[error("unknown section {0}")]
    UnknownSection(String),
}

impl DetourError {
    pub fn code(&self) -> &'static str {
        match self {
            DetourError::UnknownSection(_) => "UnknownSection",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum DetourSource {
    RankExtension,
    TagRecommendation,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct DetourResult {
    pub inserted_slides: Vec<Slide>,
    pub source: DetourSource,
    pub seed_used: u64,
}

/// Per-section tag counts: tf = count / total, idf = ln((1 + S) / (1 + df)) + 1.
pub fn build_section_vectors<'t>(
    templates: impl IntoIterator<Item = &'t TourTemplate>,
    registry: &FactRegistry,
) -> Vec<SectionVector> {
    let mut counts: Vec<(SectionRef, [usize; Tag::COUNT])> = Vec::new();
    for t in templates {
        for s in &t.sections {
            let mut c = [0usize; Tag::COUNT];
            for r in &s.slides {
                if let Ok(f) = registry.get(&r.fact) {
                    for tag in &f.tags {
                        c[tag.index()] += 1;
                    }
                }
            }
            counts.push((SectionRef::new(&t.id, &s.title), c));
        }
    }
    let n_sections = counts.len() as f64;
    let mut df = [0usize; Tag::COUNT];
    for (_, c) in &counts {
        for (i, &k) in c.iter().enumerate() {
            if k > 0 {
                df[i] += 1;
            }
        }
    }
    let idf: Vec<f64> = df.iter().map(|&d| ((1.0 + n_sections) / (1.0 + d as f64)).ln() + 1.0).collect();
    counts
        .into_iter()
        .map(|(section, c)| {
            let total: usize = c.iter().sum();
            let mut weights = [0.0; Tag::COUNT];
            if total > 0 {
                for i in 0..Tag::COUNT {
                    weights[i] = c[i] as f64 / total as f64 * idf[i];
                }
            }
            SectionVector { section, weights }
        })
        .collect()
}

/// Cosine similarity; 0 when either vector is zero.
pub fn cosine(a: &[f64], b: &[f64]) -> f64 {
    let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    let na = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let nb = b.iter().map(|x| x * x).sum::<f64>().sqrt();
    if na == 0.0 || nb == 0.0 {
        0.0
    } else {
        (dot / (na * nb)).clamp(0.0, 1.0)
    }
}

/// Every other section by descending similarity to `current`, ties by ref.
pub fn similar_sections(current: &SectionRef, vectors: &[SectionVector]) -> Result<Vec<(SectionRef, f64)>, DetourError> {
    let me = vectors
        .iter()
        .find(|v| &v.section == current)
        .ok_or_else(|| DetourError::UnknownSection(current.to_string()))?;
    let mut out: Vec<(SectionRef, f64)> = vectors
        .iter()
        .filter(|v| &v.section != current)
        .map(|v| (v.section.clone(), cosine(&me.weights, &v.weights)))
        .collect();
    out.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    Ok(out)
}

/// Section vectors plus the slides of every section, built from a tour set.
#[derive(Debug, Clone, Default)]
pub struct Recommender {
    vectors: Vec<SectionVector>,
    slides: BTreeMap<SectionRef, (TourScope, Vec<SlideRef>)>,
}

/// What the recommender needs to know about the running session.
pub struct DetourContext<'a> {
    pub registry: &'a FactRegistry,
    pub graph: &'a Graph,
    /// The tour subject, already normalized.
    pub subject: &'a Subject,
    /// Keys of slides already in the session.
    pub present: &'a BTreeSet<String>,
    /// Tags the analyst kept; facts with none of them are left out.
    pub tag_filter: &'a BTreeSet<Tag>,
}

impl DetourContext<'_> {
    fn accepts(&self, fact: &FactTemplate) -> bool {
        fact.applicable(self.graph) && fact.tags.iter().any(|t| self.tag_filter.contains(t))
    }

    fn evaluate_pool(&self, mut pool: Vec<SlideRef>, seed: u64) -> Vec<Slide> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        pool.shuffle(&mut rng);
        pool.iter()
            .filter_map(|r| match evaluate_ref(r, self.registry, self.graph, self.subject) {
                Ok(Ok(slide)) => Some(slide),
                _ => None,
            })
            .take(DETOUR_SIZE)
            .collect()
    }

    /// Whether a slide ref can be evaluated for the session subject without
    /// picking a side.
    fn fits_subject(&self, fact: &FactTemplate, r: &SlideRef) -> bool {
        !r.params.contains_key(SIDE_PARAM)
            && TourScope::of(self.subject.kind()).sides_for(fact.subject_kind()).is_some_and(|s| s.is_empty())
    }
}

impl Recommender {
    pub fn new<'t>(templates: impl IntoIterator<Item = &'t TourTemplate> + Clone, registry: &FactRegistry) -> Recommender {
        let vectors = build_section_vectors(templates.clone(), registry);
        let slides = templates
            .into_iter()
            .flat_map(|t| t.sections.iter().map(move |s| (SectionRef::new(&t.id, &s.title), (t.scope, s.slides.clone()))))
            .collect();
        Recommender { vectors, slides }
    }

    pub fn vectors(&self) -> &[SectionVector] {
        &self.vectors
    }

    pub fn similar(&self, current: &SectionRef) -> Result<Vec<(SectionRef, f64)>, DetourError> {
        similar_sections(current, &self.vectors)
    }

    /// The candidate pool for a section detour, before random selection.
    pub fn section_pool(&self, ctx: &DetourContext<'_>, section: &SectionRef) -> Result<Vec<SlideRef>, DetourError> {
        let mut pool = Vec::new();
        let mut seen = BTreeSet::new();
        let top = self.similar(section)?.into_iter().filter(|(_, sim)| *sim > 0.0).take(POOL_SECTIONS);
        for (other, _) in top {
            let (_, refs) = &self.slides[&other];
            for r in refs {
                let Ok(fact) = ctx.registry.get(&r.fact) else { continue };
                let key = r.key();
                if ctx.present.contains(&key) || !ctx.accepts(fact) || !ctx.fits_subject(fact, r) {
                    continue;
                }
                if seen.insert(key) {
                    pool.push(r.clone());
                }
            }
        }
        Ok(pool)
    }

    /// Up to three slides drawn from the sections most similar to `section`.
    pub fn extend_section(
        &self,
        ctx: &DetourContext<'_>,
        section: &SectionRef,
        seed: u64,
    ) -> Result<DetourResult, DetourError> {
        let pool = self.section_pool(ctx, section)?;
        Ok(DetourResult {
            inserted_slides: ctx.evaluate_pool(pool, seed),
            source: DetourSource::TagRecommendation,
            seed_used: seed,
        })
    }

    /// Candidate facts for a slide detour: facts sharing a tag with the slide.
    pub fn slide_pool(&self, ctx: &DetourContext<'_>, slide: &Slide) -> Vec<SlideRef> {
        let tags: BTreeSet<Tag> = slide.tags.iter().copied().collect();
        ctx.registry
            .iter()
            .filter(|f| f.id != slide.fact_id && f.tags.iter().any(|t| tags.contains(t)))
            .map(|f| (f, SlideRef::new(f.id.clone())))
            .filter(|(f, r)| !ctx.present.contains(&r.key()) && ctx.accepts(f) && ctx.fits_subject(f, r))
            .map(|(_, r)| r)
            .collect()
    }

    /// First press on a rankable slide adds the next two ranks; otherwise up
    /// to three facts sharing a tag with the slide.
    pub fn extend_slide(&self, ctx: &DetourContext<'_>, slide: &Slide, first_press: bool, seed: u64) -> DetourResult {
        if first_press {
            let ranks = next_ranks(ctx, slide);
            if !ranks.is_empty() {
                return DetourResult { inserted_slides: ranks, source: DetourSource::RankExtension, seed_used: seed };
            }
        }
        DetourResult {
            inserted_slides: ctx.evaluate_pool(self.slide_pool(ctx, slide), seed),
            source: DetourSource::TagRecommendation,
            seed_used: seed,
        }
    }
}

/// The two ranks after `slide`, fewer when the ranking runs out.
fn next_ranks(ctx: &DetourContext<'_>, slide: &Slide) -> Vec<Slide> {
    let Ok(fact) = ctx.registry.get(&slide.fact_id) else { return Vec::new() };
    if !fact.rankable {
        return Vec::new();
    }
    let mut out = Vec::new();
    for rank in slide.rank + 1..=slide.rank + 2 {
        let key = crate::facts::slide_key(&fact.id, rank, &slide.params);
        if ctx.present.contains(&key) {
            continue;
        }
        match evaluate(fact, ctx.graph, &slide.subject, rank, &slide.params) {
            Ok(s) => out.push(s),
            Err(_) => break,
        }
    }
    out
}
