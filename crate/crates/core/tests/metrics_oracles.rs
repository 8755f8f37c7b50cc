mod common;

use std::collections::BTreeSet;

use common::{oracles, random_graph, Flags};
use datatours::graph::{Graph, Link, Node};
use datatours::metrics::{self, Extremum, Scope};
use proptest::prelude::*;

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() < 1e-9
}

#[test]
fn density_matches_pair_enumeration() {
    for seed in 0..40 {
        let g = random_graph(seed, 8, 20, Flags::from_bits(seed as usize % 16));
        match (metrics::density(&g, Scope::Whole), oracles::density(&g)) {
            (Ok(d), Some(o)) => assert!(close(d, o), "seed {seed}: {d} vs {o}"),
            (Err(metrics::MetricsError::DegenerateGraph), None) => {}
            other => panic!("seed {seed}: {other:?}"),
        }
    }
}

#[test]
fn degrees_match_incidence_counts() {
    for seed in 0..40 {
        let g = random_graph(seed, 10, 25, Flags::from_bits(seed as usize % 16));
        let got = metrics::degree_centrality(&g, Scope::Whole).unwrap();
        let want = oracles::degrees(&g);
        for (id, d) in &got {
            assert_eq!((d.in_degree, d.out_degree, d.total), want[id], "seed {seed} node {id}");
        }
        if !g.is_directed() {
            let sum: usize = got.values().map(|d| d.total).sum();
            assert_eq!(sum, 2 * g.links().len());
        }
    }
}

#[test]
fn centralities_match_path_enumeration() {
    for seed in 0..40 {
        let g = random_graph(seed, 9, 20, Flags::from_bits(seed as usize % 16));
        let b = metrics::betweenness_centrality(&g);
        let ob = oracles::betweenness(&g);
        let c = metrics::closeness_centrality(&g);
        let oc = oracles::closeness(&g);
        for id in b.keys() {
            assert!(close(b[id], ob[id]), "seed {seed} betweenness {id}: {} vs {}", b[id], ob[id]);
            assert!(close(c[id], oc[id]), "seed {seed} closeness {id}");
        }
    }
}

#[test]
fn extremum_matches_full_sort() {
    let flags = Flags { directed: false, weighted: true, temporal: false, geographic: false };
    for seed in 0..10 {
        let g = random_graph(seed, 10, 50, flags);
        let mut sorted: Vec<&Link> = g.links().iter().collect();
        sorted.sort_by(|a, b| b.weight.unwrap().total_cmp(&a.weight.unwrap()).then(a.id.cmp(&b.id)));
        let mut seen = BTreeSet::new();
        for (i, want) in sorted.iter().enumerate() {
            let got = metrics::link_extremum(&g, Scope::Whole, Extremum::Strongest, i + 1).unwrap();
            assert_eq!(got.id, want.id);
            seen.insert(got.id.clone());
        }
        assert_eq!(seen.len(), g.links().len());
        sorted.reverse();
        // reversing breaks the id tie order, so only weights must agree
        for (i, want) in sorted.iter().enumerate() {
            let got = metrics::link_extremum(&g, Scope::Whole, Extremum::Weakest, i + 1).unwrap();
            assert_eq!(got.weight, want.weight);
        }
    }
}

#[test]
fn weight_sums_match_summation() {
    let flags = Flags { directed: true, weighted: true, temporal: false, geographic: false };
    for seed in 0..20 {
        let g = random_graph(seed, 10, 40, flags);
        let total: f64 = g.links().iter().map(|l| l.weight.unwrap()).sum();
        if g.links().is_empty() {
            continue;
        }
        assert!(close(metrics::total_link_weight(&g, Scope::Whole).unwrap(), total));
        assert!(close(
            metrics::average_link_weight(&g, Scope::Whole).unwrap(),
            total / g.links().len() as f64
        ));
    }
}

#[test]
fn ranking_neighbors_and_ego_match_oracles() {
    for seed in 0..40 {
        let g = random_graph(seed, 10, 25, Flags::from_bits(seed as usize % 16));
        let ids: Vec<String> = g.nodes().iter().map(|n| n.id.clone()).collect();
        for a in &ids {
            assert_eq!(metrics::connectivity_ranking(&g, a).unwrap(), oracles::connectivity_rank(&g, a));
            for radius in 1..=2 {
                assert_eq!(metrics::ego_network(&g, a, radius).unwrap().node_ids, oracles::ego(&g, a, radius));
            }
            for b in &ids {
                if a != b {
                    assert_eq!(metrics::common_neighbors(&g, a, b).unwrap(), oracles::common_neighbors(&g, a, b));
                }
            }
        }
    }
}

#[test]
fn k_shortest_matches_simple_path_enumeration() {
    for seed in 0..30 {
        let mut flags = Flags::from_bits(seed as usize % 16);
        flags.weighted = seed % 2 == 0;
        let g = random_graph(seed, 12, 22, flags);
        let ids: Vec<String> = g.nodes().iter().map(|n| n.id.clone()).collect();
        for s in ids.iter().take(4) {
            for t in ids.iter().rev().take(4) {
                if s == t {
                    continue;
                }
                let got = metrics::k_shortest_paths(&g, s, t, 3).unwrap();
                let want = oracles::simple_paths(&g, s, t);
                assert_eq!(got.len(), want.len().min(3), "seed {seed} {s}->{t}");
                for (p, (hops, w, seq)) in got.iter().zip(&want) {
                    assert_eq!(&p.node_sequence, seq, "seed {seed} {s}->{t}");
                    assert_eq!(p.length, *hops);
                    if g.capabilities().weighted {
                        assert!(close(p.total_weight.unwrap(), *w));
                    }
                }
            }
        }
    }
}

#[test]
fn links_between_matches_membership_scan() {
    for seed in 0..20 {
        let g = random_graph(seed, 10, 25, Flags::from_bits(seed as usize % 16));
        let ids: Vec<String> = g.nodes().iter().map(|n| n.id.clone()).collect();
        if ids.len() < 2 {
            continue;
        }
        let (left, right) = ids.split_at(ids.len() / 2);
        let a = g.induce(&left.iter().cloned().collect()).unwrap();
        let b = g.induce(&right.iter().cloned().collect()).unwrap();
        let want: BTreeSet<String> = g
            .links()
            .iter()
            .filter(|l| {
                (left.contains(&l.source) && right.contains(&l.target))
                    || (right.contains(&l.source) && left.contains(&l.target))
            })
            .map(|l| l.id.clone())
            .collect();
        assert_eq!(metrics::links_between(&g, &a, &b).unwrap(), want);
    }
}

#[test]
fn temporal_membership_matches_interval_scan() {
    let flags = Flags { directed: false, weighted: false, temporal: true, geographic: false };
    for seed in 0..20 {
        let g = random_graph(seed, 8, 25, flags);
        if g.links().is_empty() {
            continue;
        }
        let bins = 1 + seed as usize % 7;
        let slices = metrics::temporal_slices(&g, bins).unwrap();
        let min = g.links().iter().map(|l| l.time.unwrap()).min().unwrap();
        let max = g.links().iter().map(|l| l.time.unwrap()).max().unwrap();
        let mut all = BTreeSet::new();
        for l in g.links() {
            let idx = oracles::slice_of(min, max, bins, l.time.unwrap());
            assert!(slices[idx].link_ids.contains(&l.id));
        }
        for s in &slices {
            for id in &s.link_ids {
                assert!(all.insert(id.clone()), "link in two slices");
            }
        }
        assert_eq!(all.len(), g.links().len());
    }
}

#[test]
fn geo_extent_matches_min_max_scan() {
    let flags = Flags { directed: false, weighted: false, temporal: false, geographic: true };
    let g = random_graph(7, 12, 5, flags);
    let coords: Vec<_> = g.nodes().iter().map(|n| n.coord.unwrap()).collect();
    let e = metrics::geo_extent(&g).unwrap();
    assert_eq!(e.min_lat, coords.iter().map(|c| c.lat).fold(f64::INFINITY, f64::min));
    assert_eq!(e.max_lat, coords.iter().map(|c| c.lat).fold(f64::NEG_INFINITY, f64::max));
    assert_eq!(e.min_lon, coords.iter().map(|c| c.lon).fold(f64::INFINITY, f64::min));
    assert_eq!(e.max_lon, coords.iter().map(|c| c.lon).fold(f64::NEG_INFINITY, f64::max));
}

#[test]
fn bridged_triangles_match_exhaustive_partition_search() {
    let nodes = ["a", "b", "c", "d", "e", "f"].into_iter().map(Node::new).collect();
    let edges = [("a", "b"), ("b", "c"), ("c", "a"), ("d", "e"), ("e", "f"), ("f", "d"), ("c", "d")];
    let links = edges.iter().enumerate().map(|(i, (s, t))| Link::new(format!("{i}"), *s, *t)).collect();
    let g = Graph::new(nodes, links, false).unwrap();
    let (best_q, best) = oracles::best_partition(&g);
    let got = metrics::detect_communities(&g);
    assert!(close(got.modularity, best_q));
    // same grouping up to relabeling
    for x in best.keys() {
        for y in best.keys() {
            assert_eq!(best[x] == best[y], got.assignment[x] == got.assignment[y]);
        }
    }
}

#[test]
fn communities_are_consistent_and_bounded_by_optimum() {
    for seed in 0..40 {
        let g = random_graph(seed, 7, 14, Flags::from_bits(seed as usize % 16));
        let p = metrics::detect_communities(&g);
        assert_eq!(p.assignment.len(), g.nodes().len());
        assert!((p.modularity - oracles::modularity(&g, &p.assignment)).abs() < 1e-12);
        let (best_q, _) = oracles::best_partition(&g);
        assert!(p.modularity <= best_q + 1e-12);
        assert!((-0.5..=1.0).contains(&p.modularity));
        let used: BTreeSet<usize> = p.assignment.values().copied().collect();
        assert_eq!(used, (0..used.len()).collect());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn density_is_a_fraction(seed in 0u64..10_000, bits in 0usize..16) {
        let g = random_graph(seed, 10, 25, Flags::from_bits(bits));
        if let Ok(d) = metrics::density(&g, Scope::Whole) {
            prop_assert!((0.0..=1.0).contains(&d));
        }
    }

    #[test]
    fn k_shortest_output_is_sorted_simple_and_distinct(seed in 0u64..10_000, bits in 0usize..16) {
        let g = random_graph(seed, 10, 25, Flags::from_bits(bits));
        let ids: Vec<&str> = g.nodes().iter().map(|n| n.id.as_str()).collect();
        if ids.len() < 2 { return Ok(()); }
        let paths = metrics::k_shortest_paths(&g, ids[0], ids[ids.len() - 1], 4).unwrap();
        let mut seen = BTreeSet::new();
        for w in paths.windows(2) {
            let ka = (w[0].length, w[0].total_weight.unwrap_or(0.0));
            let kb = (w[1].length, w[1].total_weight.unwrap_or(0.0));
            prop_assert!(ka.0 < kb.0 || (ka.0 == kb.0 && ka.1 <= kb.1));
        }
        for p in &paths {
            prop_assert!(seen.insert(p.node_sequence.clone()));
            let distinct: BTreeSet<&String> = p.node_sequence.iter().collect();
            prop_assert_eq!(distinct.len(), p.node_sequence.len());
            prop_assert_eq!(p.length, p.link_sequence.len());
            for (i, lid) in p.link_sequence.iter().enumerate() {
                let l = g.link(lid).unwrap();
                let (a, b) = (&p.node_sequence[i], &p.node_sequence[i + 1]);
                prop_assert!((&l.source == a && &l.target == b) || (!g.is_directed() && &l.source == b && &l.target == a));
            }
        }
    }

    #[test]
    fn communities_are_deterministic(seed in 0u64..10_000) {
        let flags = Flags::from_bits(0);
        let a = random_graph(seed, 10, 25, flags);
        let b = random_graph(seed, 10, 25, flags);
        prop_assert_eq!(metrics::detect_communities(&a), metrics::detect_communities(&b));
    }
}

#[test]
fn all_metrics_match_oracles_on_200_graphs() {
    for seed in 0..200u64 {
        let g = random_graph(1000 + seed, 10, 25, Flags::from_bits(seed as usize % 16));
        if let Err(e) = common::check_metrics(&g) {
            panic!("seed {seed}: {e}");
        }
    }
}
