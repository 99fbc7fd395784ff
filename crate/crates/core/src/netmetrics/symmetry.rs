//! Concentric symmetry from an outward random walk over BFS rings.
//!
//! Rings `0..=h` are taken from a BFS at the node. In the backbone variant
//! edges inside a ring are dropped; in the merged variant each connected
//! component of intra-ring edges collapses into one unit, and parallel links
//! between units collapse too. A walker leaves the node and at every step
//! moves uniformly to the outward neighbours of its current unit. Units
//! before ring `h` without outward neighbours absorb their mass (dead ends).
//! With `H` the entropy of the final mass over ring-`h` units and dead ends,
//! symmetry is `exp(H) / (|ring h| + dead ends)`.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use super::{check_level, node_of, MetricsError, Result};
use crate::netbuild::TextNetwork;
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SymmetryVariant {
    Backbone,
    Merged,
}

/// Concentric symmetry at level `h` ∈ {2, 3}.
pub fn symmetry<T: Scalar>(
    network: &TextNetwork<T>,
    word: &str,
    h: usize,
    variant: SymmetryVariant,
) -> Result<T> {
    check_level(h)?;
    symmetry_at_depth(network, word, h, variant)
}

struct Union {
    parent: Vec<usize>,
}

impl Union {
    fn find(&mut self, x: usize) -> usize {
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        let mut cur = x;
        while self.parent[cur] != root {
            let next = self.parent[cur];
            self.parent[cur] = root;
            cur = next;
        }
        root
    }

    fn join(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            // Smaller index as root keeps unit ids deterministic.
            let (lo, hi) = (ra.min(rb), ra.max(rb));
            self.parent[hi] = lo;
        }
    }
}

/// Symmetry for any depth ≥ 1. Isolated nodes give 0.
pub fn symmetry_at_depth<T: Scalar>(
    network: &TextNetwork<T>,
    word: &str,
    depth: usize,
    variant: SymmetryVariant,
) -> Result<T> {
    if depth == 0 {
        return Err(MetricsError::ZeroDepth);
    }
    let start = node_of(network, word)?;
    if network.degree(start) == 0 {
        return Ok(T::zero());
    }

    // Local BFS to depth h; `ring[v]` for visited nodes only.
    let mut ring: BTreeMap<usize, usize> = BTreeMap::from([(start, 0)]);
    let mut queue = VecDeque::from([start]);
    while let Some(v) = queue.pop_front() {
        let r = ring[&v];
        if r == depth {
            continue;
        }
        for &w in network.neighbors(v) {
            if let std::collections::btree_map::Entry::Vacant(e) = ring.entry(w) {
                e.insert(r + 1);
                queue.push_back(w);
            }
        }
    }

    // Map nodes to walk units.
    let local: Vec<usize> = ring.keys().copied().collect();
    let pos: BTreeMap<usize, usize> = local.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut union = Union {
        parent: (0..local.len()).collect(),
    };
    if variant == SymmetryVariant::Merged {
        for (&v, &r) in &ring {
            for &w in network.neighbors(v) {
                if ring.get(&w) == Some(&r) {
                    union.join(pos[&v], pos[&w]);
                }
            }
        }
    }
    let unit_of = |u: &mut Union, v: usize| u.find(pos[&v]);

    let mut outward: BTreeMap<usize, BTreeSet<usize>> = BTreeMap::new();
    let mut unit_ring: BTreeMap<usize, usize> = BTreeMap::new();
    for (&v, &r) in &ring {
        let uv = unit_of(&mut union, v);
        unit_ring.insert(uv, r);
        let entry = outward.entry(uv).or_default();
        if r == depth {
            continue;
        }
        for &w in network.neighbors(v) {
            if ring.get(&w) == Some(&(r + 1)) {
                entry.insert(unit_of(&mut union, w));
            }
        }
    }

    let mut mass: BTreeMap<usize, T> = BTreeMap::from([(unit_of(&mut union, start), T::one())]);
    let mut absorbed: Vec<T> = Vec::new();
    for _ in 0..depth {
        let mut next: BTreeMap<usize, T> = BTreeMap::new();
        for (&u, &p) in &mass {
            let outs = &outward[&u];
            if outs.is_empty() {
                absorbed.push(p);
                continue;
            }
            let share = p / T::of_usize(outs.len());
            for &o in outs {
                let slot = next.entry(o).or_insert_with(T::zero);
                *slot = *slot + share;
            }
        }
        mass = next;
    }
    let ring_h_units = unit_ring.values().filter(|&&r| r == depth).count();
    let states = ring_h_units + absorbed.len();
    if states == 0 {
        return Ok(T::zero());
    }
    let entropy = mass
        .values()
        .chain(absorbed.iter())
        .filter(|p| **p > T::zero())
        .fold(T::zero(), |acc, &p| acc - p * p.ln());
    Ok(entropy.exp() / T::of_usize(states))
}

#[cfg(test)]
mod tests {
    use super::*;
    use SymmetryVariant::{Backbone, Merged};

    fn net(pairs: &[(&str, &str)]) -> TextNetwork<f64> {
        TextNetwork::from_pairs(pairs.iter().copied()).unwrap()
    }

    #[test]
    fn star_hub_is_perfectly_symmetric() {
        let star = net(&[("h", "a"), ("h", "b"), ("h", "c"), ("h", "d")]);
        for v in [Backbone, Merged] {
            assert!((symmetry_at_depth(&star, "h", 1, v).unwrap() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn path_end() {
        let path = net(&[("a", "b"), ("b", "c")]);
        assert!((symmetry(&path, "a", 2, Backbone).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn uneven_branches() {
        let g = net(&[("a", "b1"), ("a", "b2"), ("b1", "c1"), ("b1", "c2"), ("b2", "c3")]);
        let expected = (1.5 * std::f64::consts::LN_2).exp() / 3.0;
        let s = symmetry(&g, "a", 2, Backbone).unwrap();
        assert!((s - expected).abs() < 1e-12);
        assert!((s - 0.94281).abs() < 1e-4);
    }

    #[test]
    fn dead_end_counts_as_state() {
        // b2 has no outward neighbour: mass 1/2 stays there, 1/2 reaches c.
        let g = net(&[("a", "b1"), ("a", "b2"), ("b1", "c")]);
        let s = symmetry(&g, "a", 2, Backbone).unwrap();
        assert!((s - 1.0).abs() < 1e-12);
    }

    #[test]
    fn merged_contracts_ring_components() {
        // Ring 1 = {b1, b2} joined by an edge; merged sees one unit leading to c1, c2, c3.
        let g = net(&[
            ("a", "b1"),
            ("a", "b2"),
            ("b1", "b2"),
            ("b1", "c1"),
            ("b1", "c2"),
            ("b2", "c3"),
        ]);
        let merged = symmetry(&g, "a", 2, Merged).unwrap();
        assert!((merged - 1.0).abs() < 1e-12);
        let backbone = symmetry(&g, "a", 2, Backbone).unwrap();
        assert!((backbone - (1.5 * std::f64::consts::LN_2).exp() / 3.0).abs() < 1e-12);
    }

    #[test]
    fn merged_ring_h_counts_units() {
        // Ring 2 = {c1, c2} joined: one unit, all mass there.
        let g = net(&[("a", "b"), ("b", "c1"), ("b", "c2"), ("c1", "c2")]);
        assert!((symmetry(&g, "a", 2, Merged).unwrap() - 1.0).abs() < 1e-12);
        assert!((symmetry(&g, "a", 2, Backbone).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn isolated_and_invalid() {
        let mut g = net(&[("a", "b")]);
        g.add_node("z");
        assert_eq!(symmetry(&g, "z", 2, Backbone), Ok(0.0));
        assert_eq!(symmetry(&g, "a", 1, Backbone), Err(MetricsError::InvalidLevel(1)));
        assert!(symmetry(&g, "nope", 2, Merged).is_err());
    }
}
