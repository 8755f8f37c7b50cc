use std::collections::BTreeSet;

use datatours::detour::Recommender;
use datatours::facts::{FactRegistry, Tag};
use datatours::graph::Graph;
use datatours::session::{Action, Env, Frame, Session, TourEdit};
use datatours::subject::SubjectKind;
use datatours::tours::{builtin_tours, SlideRef, TourCatalog};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{random_graph, subject_for, Flags};

pub struct World {
    pub graph: Graph,
    pub catalog: TourCatalog,
    pub recommender: Recommender,
}

impl World {
    pub fn new(graph: Graph) -> World {
        let catalog = TourCatalog::with_builtins();
        let recommender = Recommender::new(catalog.iter(), FactRegistry::builtin());
        World { graph, catalog, recommender }
    }

    pub fn env(&self) -> Env<'_> {
        Env { graph: &self.graph, registry: FactRegistry::builtin(), catalog: &self.catalog, recommender: &self.recommender }
    }
}

/// A random action, valid or not, picked from what the session shows.
fn random_action(s: &Session, env: Env<'_>, g: &Graph, rng: &mut ChaCha8Rng) -> Action {
    let f = s.frame();
    let any_key = |rng: &mut ChaCha8Rng| {
        if f.slides.is_empty() || rng.gen_bool(0.05) {
            "missing#1".to_string()
        } else {
            f.slides[rng.gen_range(0..f.slides.len())].slide.key()
        }
    };
    match rng.gen_range(0..14) {
        0 | 1 => Action::Next,
        2 => Action::Prev,
        3 => Action::SkipSection,
        4 => Action::JumpTo { slide: any_key(rng) },
        5 => Action::ExtendSlide { slide: any_key(rng) },
        6 => {
            let section = f.slides.choose(rng).map(|x| x.section.clone()).unwrap_or_default();
            Action::ExtendSection { section }
        }
        7 => {
            let n = s.pivot_suggestions(env).len();
            let extra = subject_for(g, *[SubjectKind::Node, SubjectKind::Subgraph].choose(rng).unwrap(), rng);
            Action::Pivot { index: rng.gen_range(0..n + 1), extra }
        }
        8 => Action::Back,
        9 => Action::Star { slide: any_key(rng) },
        10 => {
            let slide = s.starred.choose(rng).map(|x| x.slide.key()).unwrap_or_else(|| any_key(rng));
            Action::Unstar { slide }
        }
        11 => {
            let mut tags: Vec<String> = Tag::ALL.iter().filter(|_| rng.gen_bool(0.6)).map(|t| t.to_string()).collect();
            if rng.gen_bool(0.05) {
                tags.push("bogus".into());
            }
            Action::SetTagFilter { tags }
        }
        12 => {
            let t = s.edit_buffer.clone().unwrap_or_else(|| env.catalog.get(&f.tour_id).unwrap().clone());
            let sec = t.sections.choose(rng).unwrap();
            let edit = match if sec.slides.is_empty() { 2 } else { rng.gen_range(0..3) } {
                0 => TourEdit::RemoveSlide { section: sec.title.clone(), index: rng.gen_range(0..sec.slides.len() + 1) },
                1 => TourEdit::MoveSlide {
                    section: sec.title.clone(),
                    from: rng.gen_range(0..sec.slides.len()),
                    to: rng.gen_range(0..sec.slides.len()),
                },
                _ => TourEdit::AddSlide {
                    section: sec.title.clone(),
                    slide: SlideRef::ranked("overall.node-count", 1),
                    position: Some(0),
                },
            };
            Action::EditTour { edits: vec![edit] }
        }
        _ => Action::SaveTour { id: None, name: None },
    }
}

pub fn check_invariants(s: &Session, env: Env<'_>) {
    assert!(!s.tour_stack.is_empty());
    for f in &s.tour_stack {
        let ks: Vec<String> = f.slides.iter().map(|x| x.slide.key()).collect();
        assert_eq!(ks.iter().collect::<BTreeSet<_>>().len(), ks.len(), "duplicate slides");
        for x in &f.slides {
            assert!(env.registry.get(&x.slide.fact_id).unwrap().applicable(env.graph));
        }
        if !f.slides.is_empty() {
            assert!(f.cursor < f.slides.len());
        }
    }
    if !s.visible().is_empty() {
        assert!(s.current().is_some(), "cursor on a hidden slide");
    }
}

/// Random sessions of up to 50 actions each; panics when an invariant breaks
/// or a replay differs. Returns (applied, rejected) action counts.
pub fn replay_random_sequences(count: u64) -> (usize, usize) {
    let mut rejected = 0;
    let mut applied = 0;
    for seq in 0..count {
        let mut rng = ChaCha8Rng::seed_from_u64(seq);
        let g = random_graph(seq, 8, 16, Flags::from_bits(rng.gen_range(0..16)));
        let w = World::new(g);
        let env = w.env();
        let t = builtin_tours().choose(&mut rng).unwrap();
        let Some(subject) = subject_for(&w.graph, t.scope.subject_kind(), &mut rng) else { continue };
        let Ok(mut s) = Session::start(env, format!("s{seq}"), &t.id, subject, seq, 0) else { continue };
        for step in 0..rng.gen_range(1..=50) {
            let action = random_action(&s, env, &w.graph, &mut rng);
            let before = s.clone();
            let lower: Vec<Frame> = s.tour_stack[..s.tour_stack.len() - 1].to_vec();
            match s.act(env, action.clone(), step) {
                Ok(_) => {
                    applied += 1;
                    match action {
                        Action::Pivot { .. } => assert_eq!(s.tour_stack[..s.tour_stack.len() - 2], lower[..]),
                        Action::Back if s.tour_stack.len() > 1 || lower.len() == 1 => {
                            let strip = |f: &Frame| Frame { cursor: 0, ..f.clone() };
                            let now: Vec<Frame> = s.tour_stack.iter().map(strip).collect();
                            let was: Vec<Frame> = lower.iter().map(strip).collect();
                            assert_eq!(now, was);
                        }
                        Action::Back => {}
                        _ => assert_eq!(s.tour_stack[..s.tour_stack.len() - 1], lower[..]),
                    }
                }
                Err(_) => {
                    rejected += 1;
                    assert_eq!(s, before);
                }
            }
            check_invariants(&s, env);
        }
        let replayed = Session::replay(env, s.id.clone(), &s.events).unwrap();
        assert_eq!(replayed, s, "sequence {seq}");
        let json = serde_json::to_string(&s.events).unwrap();
        let events: Vec<datatours::session::Event> = serde_json::from_str(&json).unwrap();
        assert_eq!(Session::replay(env, s.id.clone(), &events).unwrap(), s);
    }
    (applied, rejected)
}

