//! Seeded test-corpus graph generators.

use crate::graph::BitGraph;
use crate::rng::substream;
use rand::Rng;

/// G(n, p) with a fixed seed; edge decisions are drawn in row order.
pub fn random_graph(n: usize, p: f64, seed: u64) -> BitGraph {
    let mut rng = substream(seed, "gnp", 0);
    let mut g = BitGraph::empty(n);
    for u in 0..n {
        for v in (u + 1)..n {
            if rng.random_bool(p) {
                g.add_edge_unchecked(u, v);
            }
        }
    }
    g
}

/// The Petersen graph: outer C5, inner 5-star polygon, spokes.
pub fn petersen() -> BitGraph {
    let mut edges = Vec::new();
    for i in 0..5 {
        edges.push((i, (i + 1) % 5));
        edges.push((5 + i, 5 + (i + 2) % 5));
        edges.push((i, 5 + i));
    }
    BitGraph::build(10, &edges).expect("petersen edges are in range")
}
