//! Brute-force reference computations. These only use the public node/link
//! lists and share no code with the library's metric implementations.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use datatours::graph::Graph;

fn ids(g: &Graph) -> Vec<String> {
    g.nodes().iter().map(|n| n.id.clone()).collect()
}

/// Does any non-loop link go from `a` to `b` (either way when undirected)?
fn joined(g: &Graph, a: &str, b: &str) -> bool {
    a != b
        && g.links().iter().any(|l| {
            (l.source == a && l.target == b) || (!g.is_directed() && l.source == b && l.target == a)
        })
}

fn touching(g: &Graph, a: &str, b: &str) -> bool {
    a != b
        && g.links()
            .iter()
            .any(|l| (l.source == a && l.target == b) || (l.source == b && l.target == a))
}

pub fn density(g: &Graph) -> Option<f64> {
    let v = ids(g);
    let n = v.len();
    if n < 2 {
        return None;
    }
    let mut hit = 0usize;
    let mut total = 0usize;
    for i in 0..n {
        for j in 0..n {
            if i == j || (!g.is_directed() && j < i) {
                continue;
            }
            total += 1;
            if joined(g, &v[i], &v[j]) {
                hit += 1;
            }
        }
    }
    Some(hit as f64 / total as f64)
}

/// (in, out, total) by counting link endpoints.
pub fn degrees(g: &Graph) -> BTreeMap<String, (usize, usize, usize)> {
    let mut out: BTreeMap<String, (usize, usize, usize)> = ids(g).into_iter().map(|i| (i, (0, 0, 0))).collect();
    for l in g.links() {
        out.get_mut(&l.source).unwrap().1 += 1;
        out.get_mut(&l.target).unwrap().0 += 1;
        out.get_mut(&l.source).unwrap().2 += 1;
        out.get_mut(&l.target).unwrap().2 += 1;
    }
    if !g.is_directed() {
        for v in out.values_mut() {
            *v = (v.2, v.2, v.2);
        }
    }
    out
}

fn successors(g: &Graph, v: &str) -> BTreeSet<String> {
    ids(g).into_iter().filter(|u| joined(g, v, u)).collect()
}

fn neighbors(g: &Graph, v: &str) -> BTreeSet<String> {
    ids(g).into_iter().filter(|u| touching(g, v, u)).collect()
}

/// BFS distances following direction.
pub fn distances(g: &Graph, s: &str) -> BTreeMap<String, usize> {
    let mut d = BTreeMap::from([(s.to_string(), 0usize)]);
    let mut q = VecDeque::from([s.to_string()]);
    while let Some(u) = q.pop_front() {
        for w in successors(g, &u) {
            if !d.contains_key(&w) {
                d.insert(w.clone(), d[&u] + 1);
                q.push_back(w);
            }
        }
    }
    d
}

/// Every shortest node sequence from s to t.
fn all_shortest(g: &Graph, s: &str, t: &str) -> Vec<Vec<String>> {
    let d = distances(g, s);
    let Some(&target_d) = d.get(t) else { return Vec::new() };
    let mut out = Vec::new();
    let mut stack = vec![vec![s.to_string()]];
    while let Some(path) = stack.pop() {
        let last = path.last().unwrap().clone();
        if last == t {
            out.push(path);
            continue;
        }
        if path.len() > target_d {
            continue;
        }
        for w in successors(g, &last) {
            if d.get(&w) == Some(&(d[&last] + 1)) {
                let mut p = path.clone();
                p.push(w);
                stack.push(p);
            }
        }
    }
    out
}

pub fn betweenness(g: &Graph) -> BTreeMap<String, f64> {
    let v = ids(g);
    let mut out: BTreeMap<String, f64> = v.iter().map(|i| (i.clone(), 0.0)).collect();
    for s in &v {
        for t in &v {
            if s == t {
                continue;
            }
            let paths = all_shortest(g, s, t);
            if paths.is_empty() {
                continue;
            }
            let total = paths.len() as f64;
            for w in &v {
                if w == s || w == t {
                    continue;
                }
                let through = paths.iter().filter(|p| p.contains(w)).count() as f64;
                *out.get_mut(w).unwrap() += through / total;
            }
        }
    }
    if !g.is_directed() {
        for x in out.values_mut() {
            *x /= 2.0;
        }
    }
    out
}

pub fn closeness(g: &Graph) -> BTreeMap<String, f64> {
    ids(g)
        .into_iter()
        .map(|s| {
            let c = distances(g, &s).values().filter(|&&d| d > 0).map(|&d| 1.0 / d as f64).sum();
            (s, c)
        })
        .collect()
}

pub fn common_neighbors(g: &Graph, a: &str, b: &str) -> BTreeSet<String> {
    let na = neighbors(g, a);
    neighbors(g, b)
        .intersection(&na)
        .filter(|x| *x != a && *x != b)
        .cloned()
        .collect()
}

pub fn ego(g: &Graph, center: &str, radius: usize) -> BTreeSet<String> {
    let mut d = BTreeMap::from([(center.to_string(), 0usize)]);
    let mut q = VecDeque::from([center.to_string()]);
    while let Some(u) = q.pop_front() {
        if d[&u] == radius {
            continue;
        }
        for w in neighbors(g, &u) {
            if !d.contains_key(&w) {
                d.insert(w.clone(), d[&u] + 1);
                q.push_back(w);
            }
        }
    }
    d.into_keys().collect()
}

pub fn connectivity_rank(g: &Graph, node: &str) -> usize {
    let deg = degrees(g);
    let mut v: Vec<(usize, String)> = deg.iter().map(|(k, d)| (d.2, k.clone())).collect();
    v.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
    v.iter().position(|(_, k)| k == node).unwrap() + 1
}

/// Cheapest weight of a step (0 when unweighted).
fn step_weight(g: &Graph, a: &str, b: &str) -> f64 {
    g.links()
        .iter()
        .filter(|l| (l.source == a && l.target == b) || (!g.is_directed() && l.source == b && l.target == a))
        .map(|l| l.weight.unwrap_or(0.0))
        .fold(f64::INFINITY, f64::min)
}

/// (hops, total weight, node sequence) for every simple path s -> t, sorted.
pub fn simple_paths(g: &Graph, s: &str, t: &str) -> Vec<(usize, f64, Vec<String>)> {
    let mut out = Vec::new();
    let mut stack = vec![vec![s.to_string()]];
    while let Some(path) = stack.pop() {
        let last = path.last().unwrap().clone();
        if last == t {
            let w = path.windows(2).fold(0.0, |acc, p| acc + step_weight(g, &p[0], &p[1]));
            out.push((path.len() - 1, w, path));
            continue;
        }
        for w in successors(g, &last) {
            if !path.contains(&w) {
                let mut p = path.clone();
                p.push(w);
                stack.push(p);
            }
        }
    }
    out.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.total_cmp(&b.1)).then(a.2.cmp(&b.2)));
    out
}

/// Modularity from the adjacency-matrix definition on the simple undirected
/// projection: 1/2m * sum_ij (A_ij - k_i k_j / 2m) [c_i == c_j].
pub fn modularity(g: &Graph, assignment: &BTreeMap<String, usize>) -> f64 {
    let v = ids(g);
    let a = |x: &str, y: &str| if touching(g, x, y) { 1.0 } else { 0.0 };
    let k: BTreeMap<&str, f64> = v.iter().map(|x| (x.as_str(), v.iter().map(|y| a(x, y)).sum())).collect();
    let two_m: f64 = k.values().sum();
    if two_m == 0.0 {
        return 0.0;
    }
    let mut q = 0.0;
    for x in &v {
        for y in &v {
            if assignment[x] == assignment[y] {
                q += a(x, y) - k[x.as_str()] * k[y.as_str()] / two_m;
            }
        }
    }
    q / two_m
}

/// Best modularity over every partition of the node set (Bell-number search).
pub fn best_partition(g: &Graph) -> (f64, BTreeMap<String, usize>) {
    let v = ids(g);
    let mut best = (f64::NEG_INFINITY, BTreeMap::new());
    let mut labels = vec![0usize; v.len()];
    fn rec(
        i: usize,
        max_label: usize,
        labels: &mut Vec<usize>,
        v: &[String],
        g: &Graph,
        best: &mut (f64, BTreeMap<String, usize>),
    ) {
        if i == v.len() {
            let asg: BTreeMap<String, usize> = v.iter().cloned().zip(labels.iter().copied()).collect();
            let q = modularity(g, &asg);
            if q > best.0 + 1e-12 {
                *best = (q, asg);
            }
            return;
        }
        for l in 0..=max_label {
            labels[i] = l;
            rec(i + 1, max_label.max(l + 1), labels, v, g, best);
        }
    }
    rec(0, 0, &mut labels, &v, g, &mut best);
    best
}

/// Slice index for time t with bin boundaries floor(i * span / bins).
pub fn slice_of(min: i64, max: i64, bins: usize, t: i64) -> usize {
    let span = (max + 1 - min) as i128;
    (0..bins)
        .find(|&i| {
            let start = min as i128 + (i as i128 * span) / bins as i128;
            let end = min as i128 + ((i as i128 + 1) * span) / bins as i128;
            start <= t as i128 && (t as i128) < end
        })
        .unwrap()
}

/// Greedy agglomeration by full recomputation: every step scores each pair of
/// touching communities by the exact scaled modularity 4m^2 Q of the merged
/// partition, merges the best pair (ties to the smallest lowest-member pair),
/// and the first partition with the highest score wins. Labels follow first
/// appearance in node order.
pub fn greedy_partition(g: &Graph) -> BTreeMap<String, usize> {
    let v = ids(g);
    let n = v.len();
    let adj: Vec<Vec<bool>> = v.iter().map(|a| v.iter().map(|b| touching(g, a, b)).collect()).collect();
    let m: i128 = (0..n).map(|i| (i + 1..n).filter(|&j| adj[i][j]).count() as i128).sum();
    let score = |groups: &[Vec<usize>]| -> i128 {
        groups
            .iter()
            .map(|c| {
                let internal = c.iter().map(|&a| c.iter().filter(|&&b| a < b && adj[a][b]).count() as i128).sum::<i128>();
                let k: i128 = c.iter().map(|&a| adj[a].iter().filter(|x| **x).count() as i128).sum();
                4 * m * internal - k * k
            })
            .sum()
    };
    let mut groups: Vec<Vec<usize>> = (0..n).map(|i| vec![i]).collect();
    let mut best = (score(&groups), groups.clone());
    loop {
        let mut pick: Option<(i128, usize, usize)> = None;
        for a in 0..groups.len() {
            for b in a + 1..groups.len() {
                if !groups[a].iter().any(|&x| groups[b].iter().any(|&y| adj[x][y])) {
                    continue;
                }
                let mut merged = groups.clone();
                let moved = merged.remove(b);
                merged[a].extend(moved);
                let q = score(&merged);
                if pick.is_none_or(|(q0, _, _)| q > q0) {
                    pick = Some((q, a, b));
                }
            }
        }
        let Some((q, a, b)) = pick else { break };
        let moved = groups.remove(b);
        groups[a].extend(moved);
        groups[a].sort();
        if q > best.0 {
            best = (q, groups.clone());
        }
    }
    let mut label = vec![0; n];
    for (c, members) in best.1.iter().enumerate() {
        for &x in members {
            label[x] = c;
        }
    }
    let mut relabel: BTreeMap<usize, usize> = BTreeMap::new();
    v.iter()
        .enumerate()
        .map(|(i, id)| {
            let next = relabel.len();
            (id.clone(), *relabel.entry(label[i]).or_insert(next))
        })
        .collect()
}
