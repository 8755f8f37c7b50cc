#![allow(dead_code)]

pub mod fuzz;
pub mod oracles;

use datatours::graph::{Graph, Link, Node};
use datatours::subject::{Subject, SubjectKind};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, Copy)]
pub struct Flags {
    pub directed: bool,
    pub weighted: bool,
    pub temporal: bool,
    pub geographic: bool,
}

impl Flags {
    pub fn from_bits(bits: usize) -> Flags {
        Flags {
            directed: bits & 1 != 0,
            weighted: bits & 2 != 0,
            temporal: bits & 4 != 0,
            geographic: bits & 8 != 0,
        }
    }
}

const NAMES: [&str; 12] = ["kq", "ab", "zt", "mc", "ad", "pp", "b", "ca", "xy", "ee", "lo", "fr"];

/// Random graph with at most `max_nodes` nodes and `max_links` links. Node ids
/// are shuffled so id order differs from insertion order; weights are small
/// integers so ties happen.
pub fn random_graph(seed: u64, max_nodes: usize, max_links: usize, flags: Flags) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(1..=max_nodes);
    let mut names: Vec<&str> = NAMES[..max_nodes.min(NAMES.len())].to_vec();
    names.shuffle(&mut rng);
    let nodes: Vec<Node> = names[..n]
        .iter()
        .map(|&id| {
            let node = Node::new(id);
            if flags.geographic {
                node.with_coord(rng.gen_range(-60.0..60.0), rng.gen_range(-170.0..170.0))
            } else {
                node
            }
        })
        .collect();
    let m = rng.gen_range(0..=max_links);
    let links = (0..m)
        .map(|i| {
            let s = rng.gen_range(0..n);
            // self-loops are rare but present
            let t = if rng.gen_bool(0.08) { s } else { rng.gen_range(0..n) };
            let mut l = Link::new(format!("l{i:02}"), nodes[s].id.clone(), nodes[t].id.clone());
            if flags.weighted {
                l = l.weighted(rng.gen_range(1..=5) as f64);
            }
            if flags.temporal {
                l = l.at(rng.gen_range(0..20));
            }
            l
        })
        .collect();
    Graph::new(nodes, links, flags.directed).unwrap()
}

pub fn ids(items: &[&str]) -> std::collections::BTreeSet<String> {
    items.iter().map(|s| s.to_string()).collect()
}

/// A normalized subject of `kind` for `g`, or None when the graph is too small.
pub fn subject_for(g: &Graph, kind: SubjectKind, rng: &mut ChaCha8Rng) -> Option<Subject> {
    let mut ids = g.nodes().iter().map(|n| n.id.clone()).collect::<Vec<_>>();
    ids.shuffle(rng);
    let s = match kind {
        SubjectKind::None => Subject::None,
        SubjectKind::Node => Subject::node(ids.first()?.clone()),
        SubjectKind::NodePair => {
            if ids.len() < 2 {
                return None;
            }
            Subject::node_pair(ids[0].clone(), ids[1].clone())
        }
        SubjectKind::Subgraph => {
            let k = rng.gen_range(1..=ids.len().max(1));
            Subject::subgraph(ids.iter().take(k).cloned())
        }
        SubjectKind::SubgraphPair => {
            if ids.len() < 2 {
                return None;
            }
            let cut = rng.gen_range(1..ids.len());
            let end = rng.gen_range(cut + 1..=ids.len());
            Subject::subgraph_pair(ids[..cut].iter().cloned(), ids[cut..end].iter().cloned())
        }
        SubjectKind::Path => {
            // walk links in either direction without repeating nodes
            let mut path = vec![ids.first()?.clone()];
            for _ in 0..rng.gen_range(1..4) {
                let last = path.last().unwrap().clone();
                let mut next: Vec<String> = g
                    .links()
                    .iter()
                    .filter_map(|l| {
                        if l.source == last {
                            Some(l.target.clone())
                        } else if l.target == last {
                            Some(l.source.clone())
                        } else {
                            None
                        }
                    })
                    .filter(|n| !path.contains(n))
                    .collect();
                next.sort();
                next.dedup();
                match next.choose(rng) {
                    Some(n) => path.push(n.clone()),
                    None => break,
                }
            }
            if path.len() < 2 {
                return None;
            }
            Subject::path(path)
        }
    };
    Some(s.normalize(g).expect("generated subjects are valid"))
}


fn close(a: f64, b: f64) -> bool {
    (a - b).abs() < 1e-9
}

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

/// Every listed metric on `g` against its brute-force oracle.
pub fn check_metrics(g: &Graph) -> Result<(), String> {
    use datatours::metrics::{self, MetricsError, Scope};
    match (metrics::density(g, Scope::Whole), oracles::density(g)) {
        (Ok(d), Some(o)) => ensure!(close(d, o), "density {d} vs {o}"),
        (Err(MetricsError::DegenerateGraph), None) => {}
        other => return Err(format!("density {other:?}")),
    }
    let deg = metrics::degree_centrality(g, Scope::Whole).map_err(|e| e.to_string())?;
    let odeg = oracles::degrees(g);
    for (id, d) in &deg {
        ensure!((d.in_degree, d.out_degree, d.total) == odeg[id], "degree of {id}");
    }
    let (b, ob) = (metrics::betweenness_centrality(g), oracles::betweenness(g));
    let (c, oc) = (metrics::closeness_centrality(g), oracles::closeness(g));
    for id in ob.keys() {
        ensure!(close(b[id], ob[id]), "betweenness of {id}: {} vs {}", b[id], ob[id]);
        ensure!(close(c[id], oc[id]), "closeness of {id}: {} vs {}", c[id], oc[id]);
    }
    let ids: Vec<String> = g.nodes().iter().map(|n| n.id.clone()).collect();
    for a in &ids {
        ensure!(metrics::connectivity_ranking(g, a) == Ok(oracles::connectivity_rank(g, a)), "rank of {a}");
        for radius in 1..=2 {
            let got = metrics::ego_network(g, a, radius).map_err(|e| e.to_string())?;
            ensure!(got.node_ids == oracles::ego(g, a, radius), "ego of {a} radius {radius}");
        }
        for t in &ids {
            if a == t {
                continue;
            }
            ensure!(metrics::common_neighbors(g, a, t) == Ok(oracles::common_neighbors(g, a, t)), "common {a} {t}");
            let got = metrics::k_shortest_paths(g, a, t, 3).map_err(|e| e.to_string())?;
            let want = oracles::simple_paths(g, a, t);
            ensure!(got.len() == want.len().min(3), "path count {a}->{t}");
            for (p, (hops, w, seq)) in got.iter().zip(&want) {
                ensure!(&p.node_sequence == seq && p.length == *hops, "path {a}->{t}");
                ensure!(p.total_weight.is_none_or(|x| close(x, *w)), "path weight {a}->{t}");
            }
        }
    }
    let p = metrics::detect_communities(g);
    ensure!(p.assignment == oracles::greedy_partition(g), "community assignment");
    ensure!(close(p.modularity, oracles::modularity(g, &p.assignment)), "modularity");
    Ok(())
}

/// A directed commuter-style graph with exactly 11,216 links.
pub fn commuter_graph() -> Graph {
    let nodes: Vec<Node> = (0..120).map(|i| Node::new(format!("m{i:03}"))).collect();
    let links = (0..120)
        .flat_map(|i| (0..120).filter(move |&j| j != i).map(move |j| (i, j)))
        .take(11_216)
        .enumerate()
        .map(|(k, (i, j))| Link::new(format!("f{k}"), nodes[i].id.clone(), nodes[j].id.clone()))
        .collect();
    Graph::new(nodes, links, true).unwrap()
}

pub const SRI_LANKA: &str = include_str!("../fixtures/srilanka.json");

pub fn sri_lanka() -> Graph {
    datatours::graph::load_json_str(SRI_LANKA).unwrap()
}

/// Keys inserted by a seed-42 section detour for every section of every
/// overall built-in tour on `g`, one line per section.
pub fn seed_42_section_detours(g: &Graph) -> String {
    use datatours::detour::{DetourContext, Recommender, SectionRef};
    use datatours::facts::{FactRegistry, Tag};
    use datatours::tours::{builtin_tours, TourScope};
    let reg = FactRegistry::builtin();
    let rec = Recommender::new(builtin_tours(), reg);
    let all: std::collections::BTreeSet<Tag> = Tag::ALL.into_iter().collect();
    let present = std::collections::BTreeSet::new();
    let ctx = DetourContext { registry: reg, graph: g, subject: &Subject::None, present: &present, tag_filter: &all };
    let mut out = String::new();
    for t in builtin_tours().iter().filter(|t| t.scope == TourScope::Overall) {
        for s in &t.sections {
            let r = rec.extend_section(&ctx, &SectionRef::new(&t.id, &s.title), 42).unwrap();
            let keys: Vec<String> = r.inserted_slides.iter().map(|x| x.key()).collect();
            out.push_str(&format!("{} / {}: {}\n", t.id, s.title, keys.join(" ")));
        }
    }
    out
}

/// A random built-in with shuffled, trimmed and added slides; always valid.
pub fn edited_tour(seed: u64) -> datatours::tours::TourTemplate {
    use datatours::facts::FactRegistry;
    use datatours::tours::{builtin_tours, SlideRef, TemplateSection};
    use rand::seq::SliceRandom;
    use rand::Rng;
    let reg = FactRegistry::builtin();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut t = builtin_tours().choose(&mut rng).unwrap().clone();
    t.id = format!("{}-edit-{seed}", t.id);
    for s in &mut t.sections {
        s.slides.shuffle(&mut rng);
        if s.slides.len() > 1 && rng.gen_bool(0.5) {
            s.slides.remove(rng.gen_range(0..s.slides.len()));
        }
    }
    let scope = t.scope;
    let compatible: Vec<_> = reg
        .iter()
        .filter(|f| matches!(scope.sides_for(f.subject_kind()), Some(s) if s.is_empty()))
        .collect();
    let mut extra = TemplateSection { title: "Extra".into(), slides: Vec::new() };
    for _ in 0..rng.gen_range(1..4) {
        let f = compatible.choose(&mut rng).unwrap();
        let rank = if f.rankable { rng.gen_range(1..4) } else { 1 };
        let r = SlideRef::ranked(f.id.clone(), rank);
        if !t.slide_refs().any(|(_, x)| x.key() == r.key()) && !extra.slides.iter().any(|x| x.key() == r.key()) {
            extra.slides.push(r);
        }
    }
    if !extra.slides.is_empty() {
        t.sections.insert(rng.gen_range(0..=t.sections.len()), extra);
    }
    t.validate(reg).unwrap();
    t
}
