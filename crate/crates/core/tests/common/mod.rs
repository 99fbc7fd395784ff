//! Independent reference implementations used as test oracles.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use coocnet::netbuild::TextNetwork;
use rand::seq::SliceRandom;
use rand::Rng;

pub fn node_name(i: usize) -> String {
    format!("v{i}")
}

/// Network on `n` nodes named `v0..`, isolated nodes included.
pub fn network_from_edges(n: usize, edges: &[(usize, usize)]) -> TextNetwork<f64> {
    let mut net = TextNetwork::new();
    for i in 0..n {
        net.add_node(&node_name(i));
    }
    for &(a, b) in edges {
        net.add_word_edge(&node_name(a), &node_name(b), coocnet::netbuild::EdgeKind::Cooccurrence, 1, 1.0)
            .unwrap();
    }
    net
}

/// Random spanning tree plus each remaining pair with probability `extra`.
pub fn random_connected_edges<R: Rng>(rng: &mut R, n: usize, extra: f64) -> Vec<(usize, usize)> {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut edges = BTreeSet::new();
    for i in 1..n {
        let parent = order[rng.gen_range(0..i)];
        let (a, b) = (order[i].min(parent), order[i].max(parent));
        edges.insert((a, b));
    }
    for a in 0..n {
        for b in a + 1..n {
            if rng.gen_bool(extra) {
                edges.insert((a, b));
            }
        }
    }
    edges.into_iter().collect()
}

pub fn adjacency(n: usize, edges: &[(usize, usize)]) -> Vec<BTreeSet<usize>> {
    let mut adj = vec![BTreeSet::new(); n];
    for &(a, b) in edges {
        adj[a].insert(b);
        adj[b].insert(a);
    }
    adj
}

/// Disparity significance by composite Simpson integration of
/// `1 - (k-1) ∫_0^π (1-x)^(k-2) dx`.
pub fn alpha_by_integration(k: usize, pi: f64) -> f64 {
    if k <= 1 {
        return 1.0;
    }
    let f = |x: f64| (1.0 - x).powi(k as i32 - 2);
    let n = 4000;
    let h = pi / n as f64;
    let mut s = f(0.0) + f(pi);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        s += w * f(i as f64 * h);
    }
    1.0 - (k as f64 - 1.0) * s * h / 3.0
}

/// Every simple path between `s` and `t`.
fn simple_paths(adj: &[BTreeSet<usize>], s: usize, t: usize) -> Vec<Vec<usize>> {
    fn dfs(adj: &[BTreeSet<usize>], t: usize, path: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let v = *path.last().unwrap();
        if v == t {
            out.push(path.clone());
            return;
        }
        for &w in &adj[v] {
            if !path.contains(&w) {
                path.push(w);
                dfs(adj, t, path, out);
                path.pop();
            }
        }
    }
    let mut out = Vec::new();
    dfs(adj, t, &mut vec![s], &mut out);
    out
}

/// (betweenness, average shortest path) per node from exhaustive path enumeration.
pub fn brute_force_paths(n: usize, edges: &[(usize, usize)]) -> Vec<(f64, f64)> {
    let adj = adjacency(n, edges);
    let mut between = vec![0.0; n];
    let mut dist_sum = vec![0.0; n];
    let mut reach = vec![0usize; n];
    for s in 0..n {
        for t in s + 1..n {
            let paths = simple_paths(&adj, s, t);
            let Some(shortest) = paths.iter().map(Vec::len).min() else {
                continue;
            };
            let best: Vec<&Vec<usize>> = paths.iter().filter(|p| p.len() == shortest).collect();
            let d = (shortest - 1) as f64;
            dist_sum[s] += d;
            dist_sum[t] += d;
            reach[s] += 1;
            reach[t] += 1;
            for v in 0..n {
                if v == s || v == t {
                    continue;
                }
                let through = best.iter().filter(|p| p.contains(&v)).count();
                between[v] += through as f64 / best.len() as f64;
            }
        }
    }
    (0..n)
        .map(|v| {
            let avg = if reach[v] == 0 { 0.0 } else { dist_sum[v] / reach[v] as f64 };
            (between[v], avg)
        })
        .collect()
}

/// exp of the entropy of the h-step random walk destination, by walk enumeration.
pub fn accessibility_by_walks(n: usize, edges: &[(usize, usize)], start: usize, h: usize) -> f64 {
    let adj = adjacency(n, edges);
    if adj[start].is_empty() {
        return 0.0;
    }
    let mut dest: BTreeMap<usize, f64> = BTreeMap::new();
    fn walk(adj: &[BTreeSet<usize>], v: usize, p: f64, left: usize, dest: &mut BTreeMap<usize, f64>) {
        if left == 0 {
            *dest.entry(v).or_default() += p;
            return;
        }
        let share = p / adj[v].len() as f64;
        for &w in &adj[v] {
            walk(adj, w, share, left - 1, dest);
        }
    }
    walk(&adj, start, 1.0, h, &mut dest);
    let entropy: f64 = dest.values().filter(|&&p| p > 0.0).map(|&p| -p * p.ln()).sum();
    entropy.exp()
}

/// Backbone concentric symmetry by enumerating every outward walk.
pub fn backbone_symmetry_by_walks(n: usize, edges: &[(usize, usize)], start: usize, h: usize) -> f64 {
    let adj = adjacency(n, edges);
    if adj[start].is_empty() {
        return 0.0;
    }
    let mut ring = vec![usize::MAX; n];
    ring[start] = 0;
    let mut q = VecDeque::from([start]);
    while let Some(v) = q.pop_front() {
        for &w in &adj[v] {
            if ring[w] == usize::MAX {
                ring[w] = ring[v] + 1;
                q.push_back(w);
            }
        }
    }
    let mut end_mass: BTreeMap<usize, f64> = BTreeMap::new();
    let mut dead_ends = BTreeSet::new();
    fn walk(
        adj: &[BTreeSet<usize>],
        ring: &[usize],
        h: usize,
        v: usize,
        p: f64,
        end_mass: &mut BTreeMap<usize, f64>,
        dead_ends: &mut BTreeSet<usize>,
    ) {
        if ring[v] == h {
            *end_mass.entry(v).or_default() += p;
            return;
        }
        let out: Vec<usize> = adj[v].iter().copied().filter(|&w| ring[w] == ring[v] + 1).collect();
        if out.is_empty() {
            dead_ends.insert(v);
            *end_mass.entry(v).or_default() += p;
            return;
        }
        for &w in &out {
            walk(adj, ring, h, w, p / out.len() as f64, end_mass, dead_ends);
        }
    }
    walk(&adj, &ring, h, start, 1.0, &mut end_mass, &mut dead_ends);
    let ring_h = ring.iter().filter(|&&r| r == h).count();
    let states = ring_h + dead_ends.len();
    if states == 0 {
        return 0.0;
    }
    let entropy: f64 = end_mass.values().filter(|&&p| p > 0.0).map(|&p| -p * p.ln()).sum();
    entropy.exp() / states as f64
}

/// Dense power iteration for a fixed number of steps; isolated nodes spread uniformly.
pub fn pagerank_dense(n: usize, edges: &[(usize, usize)], damping: f64, iterations: usize) -> Vec<f64> {
    let adj = adjacency(n, edges);
    let mut r = vec![1.0 / n as f64; n];
    for _ in 0..iterations {
        let mut next = vec![(1.0 - damping) / n as f64; n];
        for v in 0..n {
            if adj[v].is_empty() {
                for x in next.iter_mut() {
                    *x += damping * r[v] / n as f64;
                }
            } else {
                for &w in &adj[v] {
                    next[w] += damping * r[v] / adj[v].len() as f64;
                }
            }
        }
        r = next;
    }
    r
}
