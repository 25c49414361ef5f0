//! Exact verification engine: clique and triangle detection, exact maximum
//! independent set, codegree / pair-density / triangle-degree certifiers,
//! min-degree peeling, locally optimal max-cut, odd girth, and the
//! odd-girth independence floor.
//!
//! Every certifier either returns `NoWitness` or a certificate whose
//! vertices can be re-checked against the graph. Searches scan in
//! lexicographic order so witnesses are reproducible.

use crate::bitset::VertexSet;
use crate::graph::{BitGraph, Bipartition};
use num_rational::Ratio;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum CertifyError {
    #[error("edge floor m must be at least 1 (the peeling contract is vacuous at m=0)")]
    ZeroEdgeFloor,
    #[error("graph has {actual} edges, fewer than the declared floor {declared}")]
    TooFewEdges { declared: usize, actual: usize },
    #[error("declared vertex count {declared} does not match graph order {actual}")]
    OrderMismatch { declared: usize, actual: usize },
    #[error("odd girth must be an odd number >= 5, got {0}")]
    InvalidOddGirth(usize),
    #[error("pair-density check requires |x| = |y|, got {0} and {1}")]
    UnequalSides(usize, usize),
    #[error("pair-density check requires disjoint sides (vertex {0})")]
    SidesOverlap(usize),
    #[error("side size {side} is not n/t for n={n}")]
    SideNotNOverT { side: usize, n: usize },
    #[error("gamma*t must be at most 1")]
    GammaTooLarge,
    #[error("gamma must be nonnegative and t positive")]
    BadFraction,
    #[error("walk is empty")]
    EmptyWalk,
    #[error("walk vertex {vertex} at position {position} is outside the X side")]
    WalkOutsideX { position: usize, vertex: usize },
    #[error("walk step {position}: {u} and {v} are not adjacent")]
    NotAWalk { position: usize, u: usize, v: usize },
    #[error("walk vertex {vertex} violates the Y-degree floor ({degree} < required)")]
    DegreeHypothesis { vertex: usize, degree: usize },
}

// ---------------------------------------------------------------------------
// Certificates
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CertificateKind {
    K4,
    TriangleInSide,
    IndependentSet,
    DensityViolation,
    CodegreeViolation,
    LTriangleViolation,
    NoWitness,
}

/// A tagged witness. `vertices` carries the structure named by `kind`;
/// `context` echoes the parameters that triggered it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub kind: CertificateKind,
    pub vertices: Vec<usize>,
    pub context: BTreeMap<String, serde_json::Value>,
}

impl Certificate {
    pub fn no_witness() -> Self {
        Certificate {
            kind: CertificateKind::NoWitness,
            vertices: Vec::new(),
            context: BTreeMap::new(),
        }
    }

    fn new(kind: CertificateKind, mut vertices: Vec<usize>) -> Self {
        vertices.sort_unstable();
        Certificate {
            kind,
            vertices,
            context: BTreeMap::new(),
        }
    }

    pub(crate) fn with(mut self, key: &str, value: impl Into<serde_json::Value>) -> Self {
        self.context.insert(key.to_string(), value.into());
        self
    }

    pub fn is_no_witness(&self) -> bool {
        self.kind == CertificateKind::NoWitness
    }

    /// Re-checks the claimed structure against `g`: K4s must be pairwise
    /// adjacent, independent sets pairwise nonadjacent, triangles adjacent
    /// (side membership is the caller's to verify).
    pub fn validate(&self, g: &BitGraph) -> bool {
        let distinct = {
            let mut v = self.vertices.clone();
            v.sort_unstable();
            v.dedup();
            v.len() == self.vertices.len()
        };
        if !distinct || self.vertices.iter().any(|&v| v >= g.n()) {
            return false;
        }
        match self.kind {
            CertificateKind::K4 => {
                self.vertices.len() == 4 && pairwise_adjacent(g, &self.vertices)
            }
            CertificateKind::TriangleInSide => {
                self.vertices.len() == 3 && pairwise_adjacent(g, &self.vertices)
            }
            CertificateKind::IndependentSet => {
                !self.vertices.is_empty()
                    && self.vertices.iter().enumerate().all(|(i, &u)| {
                        self.vertices[i + 1..].iter().all(|&v| !g.has_edge(u, v))
                    })
            }
            // Violation traces carry the offending vertices; the inequality
            // itself is recorded in the context.
            CertificateKind::DensityViolation
            | CertificateKind::CodegreeViolation
            | CertificateKind::LTriangleViolation => true,
            CertificateKind::NoWitness => self.vertices.is_empty(),
        }
    }
}

fn pairwise_adjacent(g: &BitGraph, vs: &[usize]) -> bool {
    vs.iter()
        .enumerate()
        .all(|(i, &u)| vs[i + 1..].iter().all(|&v| g.has_edge(u, v)))
}

// ---------------------------------------------------------------------------
// Clique and triangle detection
// ---------------------------------------------------------------------------

/// Finds the lexicographically least K4, or `NoWitness`.
pub fn find_k4(g: &BitGraph) -> Certificate {
    let n = g.n();
    let mut ab = VertexSet::empty(n);
    let mut abc = VertexSet::empty(n);
    for a in 0..n {
        let mut bs = g.neighbors(a).clone();
        bs.keep_above(a);
        for b in bs.iter() {
            // Cheap rejection first: most edges have no common neighbor
            // past b.
            if !g.neighbors(a).intersects_above(g.neighbors(b), b) {
                continue;
            }
            ab.assign_intersection(g.neighbors(a), g.neighbors(b));
            ab.keep_above(b);
            for c in ab.iter() {
                abc.assign_intersection(&ab, g.neighbors(c));
                abc.keep_above(c);
                if let Some(d) = abc.first() {
                    return Certificate::new(CertificateKind::K4, vec![a, b, c, d]);
                }
            }
        }
    }
    Certificate::no_witness()
}

/// Finds the lexicographically least triangle with all three vertices in
/// `side`, or `NoWitness`.
pub fn find_triangle_in(g: &BitGraph, side: &VertexSet) -> Certificate {
    let n = g.n();
    let mut ab = VertexSet::empty(n);
    for a in side.iter() {
        let mut bs = g.neighbors(a).intersection(side);
        bs.keep_above(a);
        for b in bs.iter() {
            ab.assign_intersection(g.neighbors(a), g.neighbors(b));
            ab.intersect_with(side);
            ab.keep_above(b);
            if let Some(c) = ab.first() {
                return Certificate::new(CertificateKind::TriangleInSide, vec![a, b, c])
                    .with("side_size", side.len());
            }
        }
    }
    Certificate::no_witness()
}

// ---------------------------------------------------------------------------
// Exact maximum independent set
// ---------------------------------------------------------------------------

/// Result of the branch-and-bound search. Budget exhaustion is a value, not
/// an error: the caller gets the best set found plus a certified upper
/// bound, clearly labeled as inexact.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub enum MisOutcome {
    Exact {
        alpha: usize,
        witness: Vec<usize>,
    },
    BudgetExceeded {
        nodes_explored: u64,
        lower_bound: usize,
        best_found: Vec<usize>,
        upper_bound: usize,
    },
}

/// Greedy independent set by repeatedly taking a minimum-degree vertex of
/// the remaining graph. A lower bound for alpha; also seeds the search.
pub fn greedy_independent_set(g: &BitGraph) -> Vec<usize> {
    let mut out = Vec::new();
    let mut cand = VertexSet::full(g.n());
    while !cand.is_empty() {
        let mut best = usize::MAX;
        let mut best_deg = usize::MAX;
        for v in cand.iter() {
            let d = g.cross_degree(v, &cand);
            if d < best_deg {
                best_deg = d;
                best = v;
                if d == 0 {
                    break;
                }
            }
        }
        out.push(best);
        cand.subtract(g.neighbors(best));
        cand.remove(best);
    }
    out.sort_unstable();
    out
}

/// Greedy clique cover of the subgraph induced on `cand`; its size bounds
/// the independence number of that subgraph from above.
fn clique_cover_bound(g: &BitGraph, cand: &VertexSet) -> usize {
    let mut rest = cand.clone();
    let mut clique = VertexSet::empty(g.n());
    let mut count = 0;
    while let Some(v) = rest.first() {
        count += 1;
        rest.remove(v);
        clique.assign_intersection(&rest, g.neighbors(v));
        while let Some(u) = clique.first() {
            rest.remove(u);
            let nu = g.neighbors(u).clone();
            clique.intersect_with(&nu);
        }
    }
    count
}

struct MisSearch<'a> {
    g: &'a BitGraph,
    budget: u64,
    nodes: u64,
    best_size: usize,
    best: Vec<usize>,
    current: Vec<usize>,
}

impl MisSearch<'_> {
    /// Returns false when the node budget is exhausted. `self.current` is
    /// restored to its entry length on every normal return.
    fn run(&mut self, mut cand: VertexSet) -> bool {
        self.nodes += 1;
        if self.nodes > self.budget {
            return false;
        }
        let entry_len = self.current.len();

        // Vertices isolated within the candidate set always join.
        loop {
            let isolated = cand
                .iter()
                .find(|&v| self.g.cross_degree(v, &cand) == 0);
            match isolated {
                Some(v) => {
                    cand.remove(v);
                    self.current.push(v);
                }
                None => break,
            }
        }

        if cand.is_empty() {
            if self.current.len() > self.best_size {
                self.best_size = self.current.len();
                self.best = self.current.clone();
            }
            self.current.truncate(entry_len);
            return true;
        }

        if self.current.len() + clique_cover_bound(self.g, &cand) <= self.best_size {
            self.current.truncate(entry_len);
            return true;
        }

        // Branch on a maximum-degree vertex of the induced subgraph,
        // least index on ties.
        let mut pivot = usize::MAX;
        let mut pivot_deg = 0;
        for v in cand.iter() {
            let d = self.g.cross_degree(v, &cand);
            if pivot == usize::MAX || d > pivot_deg {
                pivot_deg = d;
                pivot = v;
            }
        }

        // Include the pivot, then exclude it.
        let mut included = cand.clone();
        included.remove(pivot);
        included.subtract(self.g.neighbors(pivot));
        self.current.push(pivot);
        if !self.run(included) {
            return false;
        }
        self.current.pop();

        cand.remove(pivot);
        let ok = self.run(cand);
        self.current.truncate(entry_len);
        ok
    }
}

/// Exact maximum independent set by branch and bound: branch on a
/// max-degree vertex, bound by a greedy clique cover, deterministic
/// lexicographic tie-breaks.
pub fn exact_mis(g: &BitGraph, budget: u64) -> MisOutcome {
    let seed = greedy_independent_set(g);
    let root = VertexSet::full(g.n());
    let root_upper = clique_cover_bound(g, &root);
    let mut search = MisSearch {
        g,
        budget,
        nodes: 0,
        best_size: seed.len().saturating_sub(1),
        best: Vec::new(),
        current: Vec::new(),
    };
    // Seeding best_size with |greedy|-1 makes the search re-derive the
    // greedy set (or better) as an explicit witness.
    let finished = search.run(root);
    if finished {
        let mut witness = search.best;
        witness.sort_unstable();
        MisOutcome::Exact {
            alpha: search.best_size,
            witness,
        }
    } else {
        let (lower, best) = if search.best_size >= seed.len() {
            let mut w = search.best;
            w.sort_unstable();
            (search.best_size, w)
        } else {
            (seed.len(), seed)
        };
        MisOutcome::BudgetExceeded {
            nodes_explored: search.nodes,
            lower_bound: lower,
            best_found: best,
            upper_bound: root_upper,
        }
    }
}

// ---------------------------------------------------------------------------
// Min-degree peeling
// ---------------------------------------------------------------------------

/// Survivor of iterated low-degree deletion, with its order and size.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PeelResult {
    pub surviving: VertexSet,
    pub n_prime: usize,
    pub e_prime: usize,
}

/// Repeatedly deletes the least-index vertex of degree at most `m/n` (in
/// the shrinking graph). For any graph with at least `m >= 1` edges the
/// survivor has more than `2m/n` vertices, at least `n'm/n` edges, and
/// minimum degree above `m/n`.
pub fn peel_min_degree(g: &BitGraph, m: usize, n: usize) -> Result<PeelResult, CertifyError> {
    if m == 0 {
        return Err(CertifyError::ZeroEdgeFloor);
    }
    if n != g.n() {
        return Err(CertifyError::OrderMismatch {
            declared: n,
            actual: g.n(),
        });
    }
    let e = g.edge_count();
    if e < m {
        return Err(CertifyError::TooFewEdges {
            declared: m,
            actual: e,
        });
    }

    let mut surviving = VertexSet::full(n);
    let mut degree: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let mut e_prime = e;
    loop {
        // degree <= m/n, compared exactly as degree * n <= m.
        let victim = surviving.iter().find(|&v| degree[v] * n <= m);
        match victim {
            Some(v) => {
                surviving.remove(v);
                e_prime -= degree[v];
                for w in g.neighbors(v).intersection(&surviving).iter() {
                    degree[w] -= 1;
                }
                degree[v] = 0;
            }
            None => break,
        }
    }
    Ok(PeelResult {
        n_prime: surviving.len(),
        e_prime,
        surviving,
    })
}

// ---------------------------------------------------------------------------
// Locally optimal max-cut
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MaxCutResult {
    pub cut: Bipartition,
    pub crossing: usize,
    pub locally_optimal: bool,
}

/// One-flip local search from a seeded random bipartition: while some
/// vertex has more neighbors on its own side than across, move the least
/// such vertex. On return no single move increases the crossing count, so
/// the crossing count is at least e(G)/2.
pub fn local_max_cut(g: &BitGraph, seed: u64) -> MaxCutResult {
    use rand::Rng;
    let mut rng = crate::rng::substream(seed, "maxcut", 0);
    let mut left = VertexSet::empty(g.n());
    for v in 0..g.n() {
        if rng.random_bool(0.5) {
            left.insert(v);
        }
    }
    local_max_cut_from(g, Bipartition::from_left(left))
}

/// The local search itself, from an explicit starting bipartition.
pub fn local_max_cut_from(g: &BitGraph, start: Bipartition) -> MaxCutResult {
    let n = g.n();
    let mut on_left: Vec<bool> = (0..n).map(|v| start.left().contains(v)).collect();
    let mut same: Vec<i64> = vec![0; n];
    let mut cross: Vec<i64> = vec![0; n];
    for v in 0..n {
        same[v] = g.cross_degree(v, if on_left[v] { start.left() } else { start.right() }) as i64;
        cross[v] = g.degree(v) as i64 - same[v];
    }

    let mut v = 0;
    while v < n {
        if same[v] > cross[v] {
            on_left[v] = !on_left[v];
            std::mem::swap(&mut same[v], &mut cross[v]);
            for w in g.neighbors(v).iter() {
                if on_left[w] == on_left[v] {
                    same[w] += 1;
                    cross[w] -= 1;
                } else {
                    same[w] -= 1;
                    cross[w] += 1;
                }
            }
            v = 0; // least-index improving vertex goes first
        } else {
            v += 1;
        }
    }

    let left = VertexSet::from_indices(n, (0..n).filter(|&v| on_left[v]));
    let crossing = (0..n).map(|v| cross[v] as usize).sum::<usize>() / 2;
    MaxCutResult {
        cut: Bipartition::from_left(left),
        crossing,
        locally_optimal: true,
    }
}

// ---------------------------------------------------------------------------
// Codegree / pair-density / triangle degree-sum certifiers
// ---------------------------------------------------------------------------

/// Scans all edges for an adjacent pair with more than `alpha` common
/// neighbors. Such a pair forces a K4 or an independent set larger than
/// `alpha`; the drill-down finds which and returns it.
pub fn check_codegree_bound(g: &BitGraph, alpha: usize) -> Certificate {
    let n = g.n();
    let mut common = VertexSet::empty(n);
    for u in 0..n {
        let mut vs = g.neighbors(u).clone();
        vs.keep_above(u);
        for v in vs.iter() {
            common.assign_intersection(g.neighbors(u), g.neighbors(v));
            let cd = common.len();
            if cd <= alpha {
                continue;
            }
            let cert = drill_common_neighborhood(g, &common, vec![u, v])
                .with("check", "codegree")
                .with("edge", vec![u, v])
                .with("alpha", alpha)
                .with("codegree", cd);
            return cert;
        }
    }
    Certificate::no_witness()
}

/// Finds an edge inside `common` (making a K4 with `base`) or reports
/// `common` itself as an independent set.
pub(crate) fn drill_common_neighborhood(
    g: &BitGraph,
    common: &VertexSet,
    base: Vec<usize>,
) -> Certificate {
    let mut wx = VertexSet::empty(g.n());
    for w in common.iter() {
        wx.assign_intersection(common, g.neighbors(w));
        wx.keep_above(w);
        if let Some(x) = wx.first() {
            let mut vs = base;
            vs.push(w);
            vs.push(x);
            return Certificate::new(CertificateKind::K4, vs);
        }
    }
    Certificate::new(CertificateKind::IndependentSet, common.to_vec())
}

/// Pair-density certifier. For disjoint sides of size `n/t` in a graph
/// whose density between them exceeds `1/2 + gamma*t`, reproduces the
/// degree-threshold argument: the heavy vertices A either span an edge
/// (drill to K4 / independent set through the shared neighborhood, which
/// exceeds `gamma*n`) or form an independent set larger than `gamma*n`.
/// All threshold comparisons are exact rationals.
pub fn check_pair_density(
    g: &BitGraph,
    x: &VertexSet,
    y: &VertexSet,
    gamma: Ratio<i64>,
    t: Ratio<i64>,
) -> Result<Certificate, CertifyError> {
    if gamma < Ratio::new(0, 1) || t <= Ratio::new(0, 1) {
        return Err(CertifyError::BadFraction);
    }
    if gamma * t > Ratio::new(1, 1) {
        return Err(CertifyError::GammaTooLarge);
    }
    if let Some(v) = x.intersection(y).first() {
        return Err(CertifyError::SidesOverlap(v));
    }
    if x.len() != y.len() {
        return Err(CertifyError::UnequalSides(x.len(), y.len()));
    }
    let n = g.n() as i64;
    let side = x.len() as i64;
    if Ratio::new(n, 1) / t != Ratio::new(side, 1) {
        return Err(CertifyError::SideNotNOverT {
            side: side as usize,
            n: n as usize,
        });
    }

    let crossing = g.edges_between(x, y) as i64;
    let density = Ratio::new(crossing, side * side);
    let threshold = Ratio::new(1, 2) + gamma * t;
    if density <= threshold {
        return Ok(Certificate::no_witness());
    }

    // Heavy vertices: y-degree above n/(2t) + gamma*n/2.
    let degree_floor =
        Ratio::new(n, 1) / (Ratio::from_integer(2) * t) + gamma * Ratio::new(n, 2);
    let heavy: Vec<usize> = x
        .iter()
        .filter(|&v| Ratio::from_integer(g.cross_degree(v, y) as i64) > degree_floor)
        .collect();

    let annotate = |c: Certificate| {
        c.with("check", "pair_density")
            .with("density", format!("{density}"))
            .with("threshold", format!("{threshold}"))
            .with("heavy_count", heavy.len())
    };

    // An edge among the heavy vertices drills down through the shared
    // y-neighborhood, which exceeds gamma*n by the degree floor.
    for (i, &a) in heavy.iter().enumerate() {
        for &b in &heavy[i + 1..] {
            if g.has_edge(a, b) {
                let mut shared = g.neighbors(a).intersection(g.neighbors(b));
                shared.intersect_with(y);
                return Ok(annotate(drill_common_neighborhood(g, &shared, vec![a, b])));
            }
        }
    }

    let gamma_n = gamma * Ratio::from_integer(n);
    if Ratio::from_integer(heavy.len() as i64) > gamma_n {
        return Ok(annotate(Certificate::new(
            CertificateKind::IndependentSet,
            heavy.clone(),
        )));
    }

    // Unreachable when the preconditions hold (the density bound forces
    // more than gamma*n heavy vertices); kept as an honest trace.
    Ok(annotate(Certificate::new(
        CertificateKind::DensityViolation,
        heavy.clone(),
    )))
}

/// Triangle degree-sum certifier: scans triangles for one whose `L`-degrees
/// sum to more than `|L| + 3*alpha`; inclusion-exclusion then forces a
/// pairwise common `L`-neighborhood above `alpha`, which drills to a K4 or
/// an independent set.
pub fn check_l_triangle(g: &BitGraph, l: &VertexSet, alpha: usize) -> Certificate {
    let n = g.n();
    let l_size = l.len();
    let ldeg: Vec<usize> = (0..n).map(|v| g.cross_degree(v, l)).collect();
    let mut ab = VertexSet::empty(n);
    for a in 0..n {
        let mut bs = g.neighbors(a).clone();
        bs.keep_above(a);
        for b in bs.iter() {
            ab.assign_intersection(g.neighbors(a), g.neighbors(b));
            ab.keep_above(b);
            for c in ab.iter() {
                let sum = ldeg[a] + ldeg[b] + ldeg[c];
                if sum <= l_size + 3 * alpha {
                    continue;
                }
                for (u, v) in [(a, b), (a, c), (b, c)] {
                    let mut shared = g.neighbors(u).intersection(g.neighbors(v));
                    shared.intersect_with(l);
                    if shared.len() > alpha {
                        return drill_common_neighborhood(g, &shared, vec![u, v])
                            .with("check", "l_triangle")
                            .with("triangle", vec![a, b, c])
                            .with("l_size", l_size)
                            .with("alpha", alpha)
                            .with("degree_sum", sum);
                    }
                }
                // Inclusion-exclusion guarantees one intersection exceeds
                // alpha; kept as an honest trace.
                return Certificate::new(CertificateKind::LTriangleViolation, vec![a, b, c])
                    .with("l_size", l_size)
                    .with("alpha", alpha)
                    .with("degree_sum", sum);
            }
        }
    }
    Certificate::no_witness()
}

// ---------------------------------------------------------------------------
// Odd girth and the independence floor it implies
// ---------------------------------------------------------------------------

/// Length of the shortest odd cycle, or `None` for bipartite graphs.
///
/// BFS layer parity from every vertex: an edge within one BFS level at
/// depth k closes an odd walk of length 2k+1, and the minimum over all
/// sources is the odd girth.
pub fn odd_girth(g: &BitGraph) -> Option<usize> {
    let n = g.n();
    let mut best: Option<usize> = None;
    for s in 0..n {
        let mut frontier = VertexSet::empty(n);
        frontier.insert(s);
        let mut visited = frontier.clone();
        let mut depth = 0usize;
        loop {
            // An edge inside the current level closes an odd walk.
            if 2 * depth + 1 < best.unwrap_or(usize::MAX) {
                let internal = frontier
                    .iter()
                    .any(|v| g.neighbors(v).intersection_len(&frontier) > 0);
                if internal {
                    best = Some(2 * depth + 1);
                }
            }
            if best == Some(3) {
                return best;
            }
            // Expanding past best/2 cannot improve the answer.
            if best.is_some_and(|b| 2 * (depth + 1) + 1 >= b) {
                break;
            }
            let mut next = VertexSet::empty(n);
            for v in frontier.iter() {
                next.union_with(g.neighbors(v));
            }
            next.subtract(&visited);
            if next.is_empty() {
                break;
            }
            visited.union_with(&next);
            frontier = next;
            depth += 1;
        }
    }
    best
}

/// Independence floor from odd girth `2k+3`: alpha >= n^(1-1/k) / 2.
pub fn shearer_bound(n: usize, odd_girth: usize) -> Result<f64, CertifyError> {
    if odd_girth < 5 || odd_girth % 2 == 0 {
        return Err(CertifyError::InvalidOddGirth(odd_girth));
    }
    let k = (odd_girth - 3) / 2;
    Ok(0.5 * (n as f64).powf(1.0 - 1.0 / k as f64))
}

// ---------------------------------------------------------------------------
// Neighborhood-intersection chain along a walk
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ChainEntry {
    /// Walk positions (0-based) of the two endpoints; `j - i = 2k - 1`.
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub intersection: usize,
    pub bound: f64,
    pub holds: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ChainReport {
    pub y_size: usize,
    pub entries: Vec<ChainEntry>,
    /// Index into `entries` of the first failing bound, if any.
    pub first_violation: Option<usize>,
}

/// For a walk `w` inside `x`, checks `|Y_i ∩ Y_{i+2k-1}| <= gamma_k |Y|`
/// for every admissible (i, k), where `Y_i` is the y-neighborhood of the
/// i-th walk vertex and `gamma_k = (10 + 40020(k-1)) gamma`. Comparisons
/// are exact; the reported bound is the rational rounded to f64.
pub fn check_intersection_chain(
    g: &BitGraph,
    x: &VertexSet,
    y: &VertexSet,
    gamma: Ratio<i64>,
    walk: &[usize],
) -> Result<ChainReport, CertifyError> {
    if walk.is_empty() {
        return Err(CertifyError::EmptyWalk);
    }
    if gamma < Ratio::new(0, 1) {
        return Err(CertifyError::BadFraction);
    }
    for (pos, &v) in walk.iter().enumerate() {
        if !x.contains(v) {
            return Err(CertifyError::WalkOutsideX {
                position: pos,
                vertex: v,
            });
        }
    }
    for (pos, pair) in walk.windows(2).enumerate() {
        if !g.has_edge(pair[0], pair[1]) {
            return Err(CertifyError::NotAWalk {
                position: pos,
                u: pair[0],
                v: pair[1],
            });
        }
    }
    let y_size = y.len();
    // Y-degree floor (1/2 - 20000*gamma)|Y|, compared exactly.
    let floor = (Ratio::new(1, 2) - Ratio::new(20000, 1) * gamma) * Ratio::new(y_size as i64, 1);
    for &v in walk {
        let d = g.cross_degree(v, y);
        if Ratio::new(d as i64, 1) < floor {
            return Err(CertifyError::DegreeHypothesis { vertex: v, degree: d });
        }
    }

    let neighborhoods: Vec<VertexSet> = walk
        .iter()
        .map(|&v| g.neighbors(v).intersection(y))
        .collect();

    let mut entries = Vec::new();
    let mut first_violation = None;
    let len = walk.len();
    for k in 1usize.. {
        let span = 2 * k - 1;
        if span >= len {
            break;
        }
        let gamma_k = Ratio::from_integer(10 + 40020 * (k as i64 - 1)) * gamma;
        let bound = gamma_k * Ratio::from_integer(y_size as i64);
        for i in 0..len - span {
            let j = i + span;
            let inter = neighborhoods[i].intersection_len(&neighborhoods[j]);
            let holds = Ratio::new(inter as i64, 1) <= bound;
            if !holds && first_violation.is_none() {
                first_violation = Some(entries.len());
            }
            entries.push(ChainEntry {
                i,
                j,
                k,
                intersection: inter,
                bound: ratio_to_f64(bound),
                holds,
            });
        }
    }
    Ok(ChainReport {
        y_size,
        entries,
        first_violation,
    })
}

pub(crate) fn ratio_to_f64(r: Ratio<i64>) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}
