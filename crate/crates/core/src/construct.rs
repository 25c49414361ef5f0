//! The sphere-threshold construction: two point families on S^{h-1}, cross
//! edges between near points and side edges between near-antipodal points.
//!
//! With `mu = epsilon/sqrt(h)` below `2 - sqrt(3)`, the distance rules
//! alone force both sides triangle-free and the whole graph K4-free, for
//! every point placement. Degree and independence behavior depend on the
//! placement and are measured, not asserted.

use crate::bitset::VertexSet;
use crate::certify::{find_k4, find_triangle_in, Certificate};
use crate::geometry::{sample_sphere_points, GeometryError, SpherePointSet};
use crate::graph::{BitGraph, Bipartition};
use crate::report::{BoundReport, FlagStatus};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Side-rule slack above which three points pairwise further than `2 - mu`
/// can fit on a sphere, breaking the triangle-free guarantee.
pub const MU_NICENESS_LIMIT: f64 = 0.26794919243112270647; // 2 - sqrt(3)

#[derive(Debug, Error, PartialEq)]
pub enum ConstructError {
    #[error("vertex count must be even, got {0}")]
    OddOrder(usize),
    #[error("vertex count must be at least 2, got {0}")]
    OrderTooSmall(usize),
    #[error("epsilon {0} outside (0, 1)")]
    EpsilonOutOfRange(f64),
    #[error("dimension must be at least 2, got {0}")]
    DimensionTooSmall(usize),
    #[error(
        "mu = epsilon/sqrt(h) = {mu} is at least 2 - sqrt(3); the side rule \
         no longer guarantees triangle-free halves"
    )]
    MuTooLarge { mu: f64 },
    #[error("sides have sizes {0} and {1}, expected equal halves")]
    UnequalHalves(usize, usize),
    #[error("point set count {points} does not match half order {half}")]
    PointCountMismatch { points: usize, half: usize },
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

/// Parameters of the construction. `mu` is derived and stored.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BEParams {
    pub n: usize,
    pub h: usize,
    pub epsilon: f64,
    pub mu: f64,
    pub seed: u64,
    /// Use one sampled point per index for both families.
    pub paired: bool,
}

impl BEParams {
    pub fn new(
        n: usize,
        h: usize,
        epsilon: f64,
        seed: u64,
        paired: bool,
    ) -> Result<Self, ConstructError> {
        if n % 2 != 0 {
            return Err(ConstructError::OddOrder(n));
        }
        if n < 2 {
            return Err(ConstructError::OrderTooSmall(n));
        }
        if h < 2 {
            return Err(ConstructError::DimensionTooSmall(h));
        }
        if !(epsilon > 0.0 && epsilon < 1.0) {
            return Err(ConstructError::EpsilonOutOfRange(epsilon));
        }
        let mu = epsilon / (h as f64).sqrt();
        if mu >= MU_NICENESS_LIMIT {
            return Err(ConstructError::MuTooLarge { mu });
        }
        Ok(BEParams {
            n,
            h,
            epsilon,
            mu,
            seed,
            paired,
        })
    }

    pub fn half(&self) -> usize {
        self.n / 2
    }
}

/// Where a graph with the nice contract came from.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub enum Provenance {
    Construction(BEParams),
    Densified { d: usize, trials: usize, seed: u64 },
    Manual,
}

/// A graph together with an equal bipartition, contracted to be K4-free
/// with triangle-free sides. The contract is checked by [`verify_nice`],
/// not by construction, so planted violations can be represented in tests.
#[derive(Clone, Debug)]
pub struct NiceGraph {
    graph: BitGraph,
    split: Bipartition,
    provenance: Provenance,
}

impl NiceGraph {
    pub fn new(
        graph: BitGraph,
        split: Bipartition,
        provenance: Provenance,
    ) -> Result<Self, ConstructError> {
        let (l, r) = (split.left().len(), split.right().len());
        if l != r {
            return Err(ConstructError::UnequalHalves(l, r));
        }
        Ok(NiceGraph {
            graph,
            split,
            provenance,
        })
    }

    pub fn graph(&self) -> &BitGraph {
        &self.graph
    }

    pub fn split(&self) -> &Bipartition {
        &self.split
    }

    pub fn x_side(&self) -> &VertexSet {
        self.split.left()
    }

    pub fn y_side(&self) -> &VertexSet {
        self.split.right()
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }
}

/// A built construction with its point sets attached.
#[derive(Clone, Debug)]
pub struct BEConstruction {
    pub nice: NiceGraph,
    pub x_points: SpherePointSet,
    pub y_points: SpherePointSet,
}

/// Applies the distance rules to explicit point families: vertices
/// `0..half` carry the x-points, `half..n` the y-points; a cross pair is
/// joined below distance `sqrt(2) - mu` and a side pair above `2 - mu`.
/// Comparisons are strict on 64-bit floats; ties have measure zero for
/// sampled points.
pub fn be_edges_from_points(
    x_points: &SpherePointSet,
    y_points: &SpherePointSet,
    mu: f64,
) -> BitGraph {
    let half = x_points.len();
    debug_assert_eq!(half, y_points.len());
    let n = 2 * half;
    // For unit vectors |p - q|^2 = 2 - 2<p,q>, so the strict distance rules
    // become strict dot-product thresholds.
    let cross_dot = {
        let t = std::f64::consts::SQRT_2 - mu;
        1.0 - t * t / 2.0
    };
    let side_dot = 1.0 - (2.0 - mu) * (2.0 - mu) / 2.0;

    // Row blocks are pure functions of the points, so the parallel split
    // cannot affect the output.
    let x_rows: Vec<(Vec<usize>, Vec<usize>)> = (0..half)
        .into_par_iter()
        .map(|i| {
            let p = x_points.point(i);
            let cross: Vec<usize> = (0..half)
                .filter(|&j| dot(p, y_points.point(j)) > cross_dot)
                .collect();
            let side: Vec<usize> = (i + 1..half)
                .filter(|&j| dot(p, x_points.point(j)) < side_dot)
                .collect();
            (cross, side)
        })
        .collect();
    let y_rows: Vec<Vec<usize>> = (0..half)
        .into_par_iter()
        .map(|i| {
            let p = y_points.point(i);
            (i + 1..half)
                .filter(|&j| dot(p, y_points.point(j)) < side_dot)
                .collect()
        })
        .collect();

    let mut g = BitGraph::empty(n);
    for (i, (cross, side)) in x_rows.iter().enumerate() {
        for &j in cross {
            g.add_edge_unchecked(i, half + j);
        }
        for &j in side {
            g.add_edge_unchecked(i, j);
        }
    }
    for (i, side) in y_rows.iter().enumerate() {
        for &j in side {
            g.add_edge_unchecked(half + i, half + j);
        }
    }
    g
}

/// Four-lane dot product; independent accumulators keep the loop
/// vectorizable without reassociating a single serial sum.
#[inline]
fn dot(p: &[f64], q: &[f64]) -> f64 {
    let mut acc = [0.0f64; 4];
    let pc = p.chunks_exact(4);
    let qc = q.chunks_exact(4);
    let (pr, qr) = (pc.remainder(), qc.remainder());
    for (a, b) in pc.zip(qc) {
        acc[0] += a[0] * b[0];
        acc[1] += a[1] * b[1];
        acc[2] += a[2] * b[2];
        acc[3] += a[3] * b[3];
    }
    for (a, b) in pr.iter().zip(qr) {
        acc[0] += a * b;
    }
    (acc[0] + acc[1]) + (acc[2] + acc[3])
}

/// Builds the construction for `params`: samples the two point families
/// (one shared family in paired mode) and applies the distance rules.
/// Deterministic per seed.
pub fn build_be_graph(params: &BEParams) -> Result<BEConstruction, ConstructError> {
    let half = params.half();
    let x_seed = crate::rng::derive_seed(params.seed, "be-points-x");
    let x_points = sample_sphere_points(params.h, half, x_seed)?;
    let y_points = if params.paired {
        x_points.clone()
    } else {
        let y_seed = crate::rng::derive_seed(params.seed, "be-points-y");
        sample_sphere_points(params.h, half, y_seed)?
    };
    let graph = be_edges_from_points(&x_points, &y_points, params.mu);
    let split = Bipartition::from_left(VertexSet::from_indices(params.n, 0..half));
    let nice = NiceGraph::new(graph, split, Provenance::Construction(*params))?;
    Ok(BEConstruction {
        nice,
        x_points,
        y_points,
    })
}

/// Checks the nice contract: triangle-free sides, then K4-freeness.
/// Returns the offending witness if either fails.
pub fn verify_nice(g: &NiceGraph) -> Option<Certificate> {
    let left = find_triangle_in(g.graph(), g.x_side());
    if !left.is_no_witness() {
        return Some(left.with("side", "x"));
    }
    let right = find_triangle_in(g.graph(), g.y_side());
    if !right.is_no_witness() {
        return Some(right.with("side", "y"));
    }
    let k4 = find_k4(g.graph());
    if !k4.is_no_witness() {
        return Some(k4);
    }
    None
}

/// The construction's stated guarantees as closed forms: independence at
/// most `2n exp(-eps sqrt(h)/4)` and minimum degree at least
/// `(1/4 - 2 eps) n`, in the regime `n >= (C sqrt(h)/eps)^h` whose
/// universal constant C is never instantiated.
pub fn be_theoretical_bounds(params: &BEParams) -> BoundReport {
    let (n, h, eps) = (params.n as f64, params.h as f64, params.epsilon);
    let mut report = BoundReport::default();
    report.push_item(
        "independence_bound",
        "2*n*exp(-epsilon*sqrt(h)/4)",
        [("n", n), ("h", h), ("epsilon", eps)],
        2.0 * n * (-eps * h.sqrt() / 4.0).exp(),
    );
    report.push_item(
        "min_degree_bound",
        "(1/4 - 2*epsilon)*n",
        [("n", n), ("epsilon", eps)],
        (0.25 - 2.0 * eps) * n,
    );
    report.push_flag(
        "order_regime",
        FlagStatus::Unknown,
        "guarantees assume n >= (C*sqrt(h)/epsilon)^h for an unspecified universal C",
    );
    report
}
