mod common;

use common::{oracles, random_graph, subject_for, Flags};
use datatours::facts::FactRegistry;
use datatours::graph::{Graph, Link, Node};
use datatours::subject::{Subject, SubjectKind};
use datatours::tours::{
    builtin_tours, export_tour, import_tour, instantiate, parse_tour_template,
    TourCatalog, TourScope, TourTemplate,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn tour(id: &str) -> &'static TourTemplate {
    builtin_tours().iter().find(|t| t.id == id).unwrap()
}

#[test]
fn every_tour_on_every_capability_combination() {
    let reg = FactRegistry::builtin();
    for bits in 0..16usize {
        for seed in 0..12u64 {
            let g = random_graph(seed * 16 + bits as u64, 9, 24, Flags::from_bits(bits));
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for t in builtin_tours() {
                let Some(subject) = subject_for(&g, t.scope.subject_kind(), &mut rng) else { continue };
                let inst = instantiate(t, reg, &g, &subject).unwrap_or_else(|e| panic!("{} bits {bits}: {e}", t.id));
                assert_eq!(inst.slide_count() + inst.skipped.len(), t.fact_count(), "{}", t.id);
                // order of surviving slides follows the template
                let template_order: Vec<String> = t.slide_refs().map(|(_, r)| r.key()).collect();
                let got: Vec<String> = inst.slides().map(|s| s.key()).collect();
                let mut it = template_order.iter();
                for key in &got {
                    assert!(it.any(|k| k == key), "{}: {key} out of order", t.id);
                }
                let titles: Vec<&str> = t.sections.iter().map(|s| s.title.as_str()).collect();
                let mut it = titles.iter();
                for s in &inst.sections {
                    assert!(!s.slides.is_empty());
                    assert!(it.any(|t| *t == s.title));
                }
                let again = instantiate(t, reg, &g, &subject).unwrap();
                assert_eq!(serde_json::to_string(&inst).unwrap(), serde_json::to_string(&again).unwrap());
            }
        }
    }
}

fn plain_graph() -> Graph {
    let nodes = ["a", "b", "c", "d"].into_iter().map(Node::new).collect();
    let links = vec![Link::new("1", "a", "b"), Link::new("2", "b", "c"), Link::new("3", "c", "a"), Link::new("4", "c", "d")];
    Graph::new(nodes, links, false).unwrap()
}

#[test]
fn overview_skips_geography_and_weights_when_absent() {
    let g = plain_graph();
    let inst = instantiate(tour("network-overview"), FactRegistry::builtin(), &g, &Subject::None).unwrap();
    let skipped: Vec<&str> = inst.skipped.iter().map(|s| s.fact_id.as_str()).collect();
    assert_eq!(
        skipped,
        ["overall.geographic-extent", "overall.total-weight", "overall.average-weight", "overall.strongest-link", "overall.weakest-link"]
    );
    assert!(inst.skipped.iter().all(|s| s.code == "NotApplicable"));
    // the link section vanishes entirely
    let titles: Vec<&str> = inst.sections.iter().map(|s| s.title.as_str()).collect();
    assert_eq!(titles, ["Overview", "Nodes and centralities"]);
    assert_eq!(inst.sections[0].slides[0].caption, "This network has 4 nodes.");
}

#[test]
fn network_overview_structure() {
    let t = tour("network-overview");
    let titles: Vec<&str> = t.sections.iter().map(|s| s.title.as_str()).collect();
    assert_eq!(titles, ["Overview", "Link information", "Nodes and centralities"]);
    let last = tour("compare-two-nodes").sections.last().unwrap();
    assert!(last.slides.iter().any(|r| r.fact == "nodes.common-neighbors"));
}

#[test]
fn ego_network_on_star_center() {
    let mut nodes: Vec<Node> = vec![Node::new("hub")];
    let mut links = Vec::new();
    for i in 0..5 {
        nodes.push(Node::new(format!("s{i}")));
        links.push(Link::new(format!("l{i}"), "hub", format!("s{i}")));
    }
    nodes.push(Node::new("far"));
    links.push(Link::new("lf", "s0", "far"));
    let g = Graph::new(nodes, links, false).unwrap();
    let inst = instantiate(tour("ego-network"), FactRegistry::builtin(), &g, &Subject::node("hub")).unwrap();
    let titles: Vec<&str> = inst.sections.iter().map(|s| s.title.as_str()).collect();
    assert_eq!(titles, ["The selected node", "Direct neighborhood", "Mutual connections", "Neighbors' neighbors"]);
    let captions: Vec<&str> = inst.slides().map(|s| s.caption.as_str()).collect();
    assert!(captions.contains(&"hub has 5 direct neighbors."), "{captions:?}");
    assert!(captions.contains(&"1 node lies exactly two steps away from hub: far."), "{captions:?}");
}

#[test]
fn possible_paths_between_disconnected_nodes() {
    let g = plain_graph();
    let g = Graph::new(
        g.nodes().iter().cloned().chain([Node::new("z")]).collect(),
        g.links().to_vec(),
        false,
    )
    .unwrap();
    assert!(oracles::simple_paths(&g, "a", "z").is_empty());
    let inst = instantiate(tour("possible-paths"), FactRegistry::builtin(), &g, &Subject::node_pair("a", "z")).unwrap();
    let first = inst.slides().next().unwrap();
    assert_eq!(first.fact_id, "paths.overview");
    assert_eq!(first.caption, "There is no path from a to z.");
    let skipped: Vec<&str> = inst.skipped.iter().map(|s| s.fact_id.as_str()).collect();
    assert!(skipped.contains(&"paths.lengths"));
    assert!(skipped.contains(&"paths.path-detail"));
    assert!(inst.sections.iter().all(|s| s.title != "Path statistics"));
}

#[test]
fn subjects_are_checked() {
    let g = plain_graph();
    let reg = FactRegistry::builtin();
    let e = instantiate(tour("ego-network"), reg, &g, &Subject::None).unwrap_err();
    assert_eq!(e.code(), "SubjectMissing");
    let e = instantiate(tour("ego-network"), reg, &g, &Subject::node_pair("a", "b")).unwrap_err();
    assert_eq!(e.code(), "SubjectMismatch");
    let e = instantiate(tour("follow-a-path"), reg, &g, &Subject::path(["a", "d"])).unwrap_err();
    assert_eq!(e.code(), "DisconnectedPath");
    let e = instantiate(tour("network-overview"), reg, &g, &Subject::node("a")).unwrap_err();
    assert_eq!(e.code(), "SubjectMismatch");
    let inst = instantiate(tour("follow-a-path"), reg, &g, &Subject::path(["a", "c", "d"])).unwrap();
    assert_eq!(inst.slides().next().unwrap().caption, "The selected path a → c → d has 2 hops across 3 nodes.");
}

#[test]
fn subgraph_comparison_reports_each_side() {
    let g = plain_graph();
    let s = Subject::subgraph_pair(["a", "b"], ["c", "d"]);
    let inst = instantiate(tour("subgraph-comparison"), FactRegistry::builtin(), &g, &s).unwrap();
    let first = inst.slides().next().unwrap();
    assert_eq!(first.caption, "The first subgraph has 2 nodes and the second has 2.");
    let nodes = &inst.sections.iter().find(|s| s.title == "Important nodes").unwrap().slides;
    assert_eq!(nodes.len(), 2);
    assert_ne!(nodes[0].subject, nodes[1].subject);
}

#[test]
fn catalog_registration() {
    let reg = FactRegistry::builtin();
    let mut cat = TourCatalog::with_builtins();
    assert_eq!(cat.len(), 10);
    let mut t = tour("network-overview").clone();
    assert_eq!(cat.register(t.clone(), reg).unwrap_err().code(), "DuplicateTourId");
    t.id = cat.fresh_id("network-overview");
    assert_eq!(t.id, "network-overview-1");
    cat.register(t, reg).unwrap();
    assert_eq!(cat.get("nope").unwrap_err().code(), "UnknownTour");
}

#[test]
fn mangled_json_is_a_schema_violation() {
    let reg = FactRegistry::builtin();
    let doc = export_tour(tour("ego-network"));
    let mangled = doc.replace("\"scope\": \"node\"", "\"scope\": \"galaxy\"");
    assert_eq!(import_tour(&mangled, reg).unwrap_err().code(), "SchemaViolation");
    let truncated = &doc[..doc.len() / 2];
    assert_eq!(import_tour(truncated, reg).unwrap_err().code(), "SchemaViolation");
}

/// A random valid edit of a built-in tour: drop, reorder and add slides.
#[test]
fn edited_tours_round_trip() {
    for seed in 0..100 {
        let t = common::edited_tour(seed);
        let back = import_tour(&export_tour(&t), FactRegistry::builtin()).unwrap();
        assert_eq!(back, t);
    }
}

proptest! {
    #[test]
    fn scope_strings_round_trip(i in 0usize..6) {
        let scope = TourScope::ALL[i];
        let json = serde_json::to_string(&scope).unwrap();
        prop_assert_eq!(serde_json::from_str::<TourScope>(&json).unwrap(), scope);
        prop_assert_eq!(json.trim_matches('"'), scope.to_string());
    }
}

#[test]
fn parse_reports_template_errors() {
    let reg = FactRegistry::builtin();
    let doc = r#"{"id":"x","name":"X","description":"","scope":"node","sections":[{"title":"A","slides":[{"fact":"node.degree"}]},{"title":"A","slides":[{"fact":"node.strength"}]}]}"#;
    assert_eq!(parse_tour_template(doc, reg).unwrap_err().code(), "SchemaViolation");
    assert_eq!(TourScope::of(SubjectKind::Path), TourScope::Path);
}
