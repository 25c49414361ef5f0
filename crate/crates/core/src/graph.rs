//! Simple undirected graphs on dense vertex ids `0..n-1`, adjacency stored
//! as one bitset row per vertex.

use crate::bitset::VertexSet;
use num_rational::Ratio;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("edge endpoint {vertex} out of range 0..{n}")]
    OutOfRange { vertex: usize, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("codegree is undefined for a vertex paired with itself ({0})")]
    EqualEndpoints(usize),
    #[error("density_between requires disjoint sets, but {0} is in both")]
    Overlap(usize),
    #[error("density_between requires nonempty sets")]
    EmptySide,
    #[error("adjacency is not symmetric at ({0}, {1})")]
    NotSymmetric(usize, usize),
    #[error("irreflexivity violated at vertex {0}")]
    Reflexive(usize),
    #[error("bipartition sides are not disjoint (vertex {0})")]
    SidesOverlap(usize),
    #[error("bipartition does not cover vertex {0}")]
    SidesIncomplete(usize),
    #[error("malformed graph JSON: {0}")]
    Json(String),
}

/// Simple undirected graph with bitset adjacency rows. Immutable once built.
#[derive(Clone, PartialEq, Eq)]
pub struct BitGraph {
    n: usize,
    adj: Vec<VertexSet>,
}

impl BitGraph {
    /// Builds a graph from an edge list. Duplicate edges collapse silently;
    /// out-of-range endpoints and self-loops are rejected.
    pub fn build(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut adj = vec![VertexSet::empty(n); n];
        for &(u, v) in edges {
            if u >= n {
                return Err(GraphError::OutOfRange { vertex: u, n });
            }
            if v >= n {
                return Err(GraphError::OutOfRange { vertex: v, n });
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            adj[u].insert(v);
            adj[v].insert(u);
        }
        Ok(BitGraph { n, adj })
    }

    pub fn empty(n: usize) -> Self {
        BitGraph {
            n,
            adj: vec![VertexSet::empty(n); n],
        }
    }

    pub fn complete(n: usize) -> Self {
        let mut adj = vec![VertexSet::full(n); n];
        for (v, row) in adj.iter_mut().enumerate() {
            row.remove(v);
        }
        BitGraph { n, adj }
    }

    /// Complete multipartite graph; `sizes` gives the part sizes. The Turán
    /// graph T(n,3) is `complete_multipartite(&[n/3; 3])` up to remainders.
    pub fn complete_multipartite(sizes: &[usize]) -> Self {
        let n: usize = sizes.iter().sum();
        let mut g = BitGraph::empty(n);
        let mut start = 0;
        let mut parts = Vec::new();
        for &s in sizes {
            parts.push(start..start + s);
            start += s;
        }
        for v in 0..n {
            let own = parts.iter().find(|r| r.contains(&v)).unwrap().clone();
            let mut row = VertexSet::full(n);
            for u in own {
                row.remove(u);
            }
            g.adj[v] = row;
        }
        g
    }

    pub fn cycle(n: usize) -> Self {
        let edges: Vec<(usize, usize)> = (0..n).map(|v| (v, (v + 1) % n)).collect();
        BitGraph::build(n, &edges).expect("cycle edges are in range")
    }

    /// Used by builders that validate endpoints themselves.
    pub(crate) fn add_edge_unchecked(&mut self, u: usize, v: usize) {
        debug_assert!(u != v && u < self.n && v < self.n);
        self.adj[u].insert(v);
        self.adj[v].insert(u);
    }

    #[inline(always)]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline(always)]
    pub fn neighbors(&self, v: usize) -> &VertexSet {
        &self.adj[v]
    }

    #[inline(always)]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].contains(v)
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    /// e(G); half the popcount sum.
    pub fn edge_count(&self) -> usize {
        let total: usize = self.adj.iter().map(|row| row.len()).sum();
        total / 2
    }

    pub fn min_degree(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).min().unwrap_or(0)
    }

    /// Edges as sorted pairs, in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for u in 0..self.n {
            let mut row = self.adj[u].clone();
            row.keep_above(u);
            for v in row.iter() {
                out.push((u, v));
            }
        }
        out
    }

    /// |N(u) ∩ N(v)| for distinct vertices.
    pub fn codegree(&self, u: usize, v: usize) -> Result<usize, GraphError> {
        if u == v {
            return Err(GraphError::EqualEndpoints(u));
        }
        Ok(self.adj[u].intersection_len(&self.adj[v]))
    }

    /// |N(v) ∩ S|.
    #[inline]
    pub fn cross_degree(&self, v: usize, s: &VertexSet) -> usize {
        self.adj[v].intersection_len(s)
    }

    /// Number of edges with one endpoint in `x` and the other in `y`
    /// (callers must pass disjoint sets for this to be a crossing count).
    pub fn edges_between(&self, x: &VertexSet, y: &VertexSet) -> usize {
        x.iter().map(|v| self.cross_degree(v, y)).sum()
    }

    /// Edge density between disjoint nonempty sets, as an exact rational.
    pub fn density_between(
        &self,
        x: &VertexSet,
        y: &VertexSet,
    ) -> Result<Ratio<i64>, GraphError> {
        if let Some(v) = x.intersection(y).first() {
            return Err(GraphError::Overlap(v));
        }
        let (nx, ny) = (x.len(), y.len());
        if nx == 0 || ny == 0 {
            return Err(GraphError::EmptySide);
        }
        let crossing = self.edges_between(x, y) as i64;
        Ok(Ratio::new(crossing, (nx * ny) as i64))
    }

    /// Number of edges with both endpoints in `s`.
    pub fn edges_within(&self, s: &VertexSet) -> usize {
        let total: usize = s.iter().map(|v| self.cross_degree(v, s)).sum();
        total / 2
    }

    /// Structural audit: symmetry, irreflexivity, and rows confined to the
    /// vertex range. Builders preserve these by construction; tests run the
    /// audit on every graph the toolkit produces.
    pub fn audit(&self) -> Result<(), GraphError> {
        for v in 0..self.n {
            if self.adj[v].contains(v) {
                return Err(GraphError::Reflexive(v));
            }
            debug_assert_eq!(self.adj[v].universe(), self.n);
        }
        for u in 0..self.n {
            for v in self.adj[u].iter() {
                if !self.adj[v].contains(u) {
                    return Err(GraphError::NotSymmetric(u, v));
                }
            }
        }
        Ok(())
    }

    /// Induced subgraph on `s`, plus the map from new ids to original ids.
    pub fn induced(&self, s: &VertexSet) -> (BitGraph, Vec<usize>) {
        let ids = s.to_vec();
        let mut g = BitGraph::empty(ids.len());
        for (i, &u) in ids.iter().enumerate() {
            for (j, &v) in ids.iter().enumerate().skip(i + 1) {
                if self.has_edge(u, v) {
                    g.add_edge_unchecked(i, j);
                }
            }
        }
        (g, ids)
    }
}

impl std::fmt::Debug for BitGraph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "BitGraph(n={}, e={})", self.n, self.edge_count())
    }
}

/// A two-sided split of the vertex range: disjoint, jointly exhaustive.
/// Serializes as its left side; the right side is the complement.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "SplitJson", from = "SplitJson")]
pub struct Bipartition {
    left: VertexSet,
    right: VertexSet,
}

#[derive(Serialize, Deserialize)]
struct SplitJson {
    left: VertexSet,
}

impl From<Bipartition> for SplitJson {
    fn from(b: Bipartition) -> Self {
        SplitJson { left: b.left }
    }
}

impl From<SplitJson> for Bipartition {
    fn from(j: SplitJson) -> Self {
        Bipartition::from_left(j.left)
    }
}

impl Bipartition {
    pub fn new(left: VertexSet, right: VertexSet) -> Result<Self, GraphError> {
        if let Some(v) = left.intersection(&right).first() {
            return Err(GraphError::SidesOverlap(v));
        }
        if let Some(v) = left.union(&right).complement().first() {
            return Err(GraphError::SidesIncomplete(v));
        }
        Ok(Bipartition { left, right })
    }

    /// Split where `left` is given and `right` is its complement.
    pub fn from_left(left: VertexSet) -> Self {
        let right = left.complement();
        Bipartition { left, right }
    }

    pub fn left(&self) -> &VertexSet {
        &self.left
    }

    pub fn right(&self) -> &VertexSet {
        &self.right
    }

    pub fn side_of(&self, v: usize) -> Side {
        if self.left.contains(v) {
            Side::Left
        } else {
            Side::Right
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Side {
    Left,
    Right,
}

/// Canonical graph JSON: `n`, lexicographically sorted `edges`, and an
/// optional `left` side (the right side is the complement). Field order is
/// fixed, so serialization is byte-deterministic for a given graph.
#[derive(Serialize, Deserialize)]
struct GraphJson {
    n: usize,
    edges: Vec<[usize; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    left: Option<Vec<usize>>,
}

pub fn to_json(g: &BitGraph, left: Option<&VertexSet>) -> String {
    let doc = GraphJson {
        n: g.n(),
        edges: g.edges().into_iter().map(|(u, v)| [u, v]).collect(),
        left: left.map(|s| s.to_vec()),
    };
    let mut s = serde_json::to_string(&doc).expect("graph serialization cannot fail");
    s.push('\n');
    s
}

pub fn from_json(text: &str) -> Result<(BitGraph, Option<Bipartition>), GraphError> {
    let doc: GraphJson =
        serde_json::from_str(text).map_err(|e| GraphError::Json(e.to_string()))?;
    let edges: Vec<(usize, usize)> = doc.edges.iter().map(|e| (e[0], e[1])).collect();
    let g = BitGraph::build(doc.n, &edges)?;
    let split = match doc.left {
        Some(ids) => {
            for &v in &ids {
                if v >= doc.n {
                    return Err(GraphError::OutOfRange { vertex: v, n: doc.n });
                }
            }
            Some(Bipartition::from_left(VertexSet::from_indices(doc.n, ids)))
        }
        None => None,
    };
    Ok((g, split))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::random_graph;
    use proptest::prelude::*;

    #[test]
    fn build_triangle() {
        let g = BitGraph::build(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        assert_eq!(g.edge_count(), 3);
        g.audit().unwrap();
    }

    #[test]
    fn build_empty_graph() {
        let g = BitGraph::build(4, &[]).unwrap();
        assert_eq!(g.edge_count(), 0);
    }

    #[test]
    fn duplicate_edges_collapse() {
        let g = BitGraph::build(4, &[(0, 1), (0, 1)]).unwrap();
        assert_eq!(g.edge_count(), 1);
    }

    #[test]
    fn build_rejects_bad_input() {
        assert_eq!(
            BitGraph::build(3, &[(0, 3)]),
            Err(GraphError::OutOfRange { vertex: 3, n: 3 })
        );
        assert_eq!(BitGraph::build(3, &[(1, 1)]), Err(GraphError::SelfLoop(1)));
    }

    #[test]
    fn codegree_examples() {
        // On C5 adjacent vertices share no neighbor: brute-force check on
        // every edge rather than a frozen constant.
        let c5 = BitGraph::cycle(5);
        for (u, v) in c5.edges() {
            let brute = (0..5)
                .filter(|&w| c5.has_edge(u, w) && c5.has_edge(v, w))
                .count();
            assert_eq!(brute, 0);
            assert_eq!(c5.codegree(u, v).unwrap(), brute);
        }

        let k4 = BitGraph::complete(4);
        assert_eq!(k4.codegree(0, 1).unwrap(), 2);
        assert_eq!(k4.codegree(2, 3).unwrap(), 2);

        let e = BitGraph::empty(4);
        assert_eq!(e.codegree(0, 3).unwrap(), 0);

        assert_eq!(k4.codegree(2, 2), Err(GraphError::EqualEndpoints(2)));
    }

    #[test]
    fn cross_degree_examples() {
        // K_{2,3}: left {0,1}, right {2,3,4}.
        let k23 = BitGraph::build(5, &[(0, 2), (0, 3), (0, 4), (1, 2), (1, 3), (1, 4)]).unwrap();
        let right = VertexSet::from_indices(5, [2, 3, 4]);
        assert_eq!(k23.cross_degree(0, &right), 3);

        assert_eq!(k23.cross_degree(0, &VertexSet::empty(5)), 0);

        // C5, v=0 has neighbors {1,4}; S={1,2,3} hits one of them.
        let c5 = BitGraph::cycle(5);
        let s = VertexSet::from_indices(5, [1, 2, 3]);
        assert_eq!(c5.cross_degree(0, &s), 1);
    }

    #[test]
    fn density_examples() {
        let k33 =
            BitGraph::complete_multipartite(&[3, 3]);
        let x = VertexSet::from_indices(6, 0..3);
        let y = VertexSet::from_indices(6, 3..6);
        assert_eq!(k33.density_between(&x, &y).unwrap(), Ratio::new(1, 1));

        let e = BitGraph::empty(6);
        assert_eq!(e.density_between(&x, &y).unwrap(), Ratio::new(0, 1));

        // C6 with alternating sides: all 6 edges cross.
        let c6 = BitGraph::cycle(6);
        let odd = VertexSet::from_indices(6, [1, 3, 5]);
        let even = VertexSet::from_indices(6, [0, 2, 4]);
        assert_eq!(c6.density_between(&even, &odd).unwrap(), Ratio::new(6, 9));

        let overlapping = VertexSet::from_indices(6, [0, 1]);
        assert!(matches!(
            c6.density_between(&even, &overlapping),
            Err(GraphError::Overlap(0))
        ));
        assert_eq!(
            c6.density_between(&even, &VertexSet::empty(6)),
            Err(GraphError::EmptySide)
        );
    }

    #[test]
    fn json_roundtrip_is_byte_deterministic() {
        let g = random_graph(17, 0.4, 99);
        let left = VertexSet::from_indices(17, 0..8);
        let a = to_json(&g, Some(&left));
        let b = to_json(&g, Some(&left));
        assert_eq!(a, b);
        let (g2, split) = from_json(&a).unwrap();
        assert_eq!(g, g2);
        assert_eq!(split.unwrap().left(), &left);
        // Re-serializing the parsed graph reproduces the bytes.
        let (g3, split3) = from_json(&a).unwrap();
        assert_eq!(to_json(&g3, split3.as_ref().map(|s| s.left())), a);
    }

    #[test]
    fn bipartition_validates() {
        let l = VertexSet::from_indices(4, [0, 1]);
        let r = VertexSet::from_indices(4, [2, 3]);
        assert!(Bipartition::new(l.clone(), r).is_ok());
        let bad = VertexSet::from_indices(4, [1, 2]);
        assert_eq!(
            Bipartition::new(l.clone(), bad),
            Err(GraphError::SidesOverlap(1))
        );
        let short = VertexSet::from_indices(4, [2]);
        assert_eq!(
            Bipartition::new(l, short),
            Err(GraphError::SidesIncomplete(3))
        );
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn random_graphs_pass_audit_and_codegree_cap(n in 1usize..40, seed in 0u64..500) {
            let g = random_graph(n, 0.4, seed);
            prop_assert!(g.audit().is_ok());
            for u in 0..n {
                for v in (u + 1)..n {
                    let cd = g.codegree(u, v).unwrap();
                    prop_assert!(cd <= g.degree(u).min(g.degree(v)));
                }
            }
        }

        #[test]
        fn density_times_sizes_is_crossing_count(n in 2usize..30, seed in 0u64..500) {
            let g = random_graph(n, 0.5, seed);
            let x = VertexSet::from_indices(n, (0..n).filter(|v| v % 2 == 0));
            let y = x.complement();
            prop_assume!(!x.is_empty() && !y.is_empty());
            let d = g.density_between(&x, &y).unwrap();
            let crossing = g.edges_between(&x, &y) as i64;
            prop_assert_eq!(d * Ratio::new((x.len() * y.len()) as i64, 1), Ratio::new(crossing, 1));
        }
    }
}
