//! The hybrid splice: pick layer sets U1 ⊂ X, U2 ⊂ Y of size d, delete all
//! side edges touching them, and wire U1 complete to Y and U2 complete to
//! X \ U1. The result is again K4-free with triangle-free sides, gains
//! exactly `d*n - d^2` edges over the surviving core, and its independence
//! number grows by at most d.

use crate::bitset::VertexSet;
use crate::certify::{exact_mis, MisOutcome};
use crate::construct::{verify_nice, NiceGraph, Provenance};
use crate::graph::BitGraph;
use crate::rng::substream;
use num_rational::Ratio;
use rand::seq::index::sample;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum DensifyError {
    #[error("layer size d={d} exceeds half order {half}")]
    LayerTooLarge { d: usize, half: usize },
    #[error("trial count must be at least 1")]
    NoTrials,
    #[error("input graph fails the nice contract: {0}")]
    NotNice(String),
    #[error("order must be even and at least 6, got {0}")]
    BadOrder(usize),
    #[error("delta={0} outside the hypothesis range")]
    DeltaOutOfRange(f64),
    #[error("a={0} outside the hypothesis range")]
    FractionOutOfRange(f64),
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct DensifyParams {
    pub d: usize,
    pub trials: usize,
    pub seed: u64,
}

/// What the splice did: the chosen layer sets, the surviving-core edge
/// count, and the averaging floor it is measured against.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DensifyRecord {
    pub u1: VertexSet,
    pub u2: VertexSet,
    pub e_before: usize,
    pub e_after: usize,
    pub e_g0: usize,
    /// `(1-2d/n)^2 * e_before + d*n - d^2 - n`, rounded to f64.
    pub lemma_rhs: f64,
    /// Whether the chosen sets meet the floor `(1-2d/n)^2 e(G) - n`
    /// that random selection guarantees in expectation.
    pub meets_averaging_floor: bool,
}

/// Picks layer sets maximizing the surviving-core edge count `e(G0)`:
/// multi-start random candidates, then first-improvement single-vertex
/// swaps, ties broken lexicographically. Exact selection is NP-hard; the
/// downstream claims only need the averaging floor, which is checked
/// separately.
pub fn choose_layer_sets(
    g: &NiceGraph,
    p: &DensifyParams,
) -> Result<(VertexSet, VertexSet, usize), DensifyError> {
    let n = g.graph().n();
    let half = n / 2;
    if p.d > half {
        return Err(DensifyError::LayerTooLarge { d: p.d, half });
    }
    if p.trials == 0 {
        return Err(DensifyError::NoTrials);
    }
    let e = g.graph().edge_count();
    if p.d == 0 {
        return Ok((VertexSet::empty(n), VertexSet::empty(n), e));
    }

    let x: Vec<usize> = g.x_side().to_vec();
    let y: Vec<usize> = g.y_side().to_vec();

    // Trial 0 is the deterministic prefix candidate (so full ties resolve
    // to lexicographic order); the rest are independent substreams. The
    // reduction by (score, lex) does not depend on scheduling.
    let candidates: Vec<(usize, Vec<usize>, Vec<usize>)> = (0..=p.trials)
        .into_par_iter()
        .map(|t| {
            let (mut u1, mut u2): (Vec<usize>, Vec<usize>) = if t == 0 {
                (x[..p.d].to_vec(), y[..p.d].to_vec())
            } else {
                let mut rng = substream(p.seed, "densify-trial", t as u64);
                (
                    sample(&mut rng, half, p.d).iter().map(|i| x[i]).collect(),
                    sample(&mut rng, half, p.d).iter().map(|i| y[i]).collect(),
                )
            };
            hill_climb(g.graph(), &mut u1, &mut u2, &x, &y);
            u1.sort_unstable();
            u2.sort_unstable();
            let score = surviving_edges(g.graph(), &u1, &u2);
            (score, u1, u2)
        })
        .collect();

    let best = candidates
        .into_iter()
        .min_by(|a, b| {
            b.0.cmp(&a.0)
                .then_with(|| a.1.cmp(&b.1))
                .then_with(|| a.2.cmp(&b.2))
        })
        .expect("at least one trial");
    Ok((
        VertexSet::from_indices(n, best.1),
        VertexSet::from_indices(n, best.2),
        best.0,
    ))
}

/// e(G0): edges of `g` avoiding `u1 ∪ u2` entirely.
fn surviving_edges(g: &BitGraph, u1: &[usize], u2: &[usize]) -> usize {
    let mut keep = VertexSet::full(g.n());
    for &v in u1.iter().chain(u2) {
        keep.remove(v);
    }
    g.edges_within(&keep)
}

/// First-improvement swaps of one chosen vertex for one unchosen vertex of
/// the same side, maximizing kept edges.
///
/// The number of edges touching U = U1 ∪ U2 is `Σ_{v∈U} deg(v) - e(U,U)`;
/// swapping u out for u' changes it by
/// `(deg(u') - |N(u') ∩ (U\{u})|) - (deg(u) - |N(u) ∩ (U\{u})|)`,
/// and both terms are counted against the full two-sided set.
fn hill_climb(
    g: &BitGraph,
    u1: &mut [usize],
    u2: &mut [usize],
    x_side: &[usize],
    y_side: &[usize],
) {
    let n = g.n();
    let mut in_set = VertexSet::empty(n);
    for &v in u1.iter().chain(u2.iter()) {
        in_set.insert(v);
    }
    loop {
        let mut improved = false;
        for (chosen, side) in [(&mut *u1, x_side), (&mut *u2, y_side)] {
            'outer: for i in 0..chosen.len() {
                let u = chosen[i];
                let loss_u = g.degree(u) as i64 - g.cross_degree(u, &in_set) as i64;
                for &cand in side {
                    if in_set.contains(cand) {
                        continue;
                    }
                    let gain_cand = g.degree(cand) as i64
                        - g.cross_degree(cand, &in_set) as i64
                        + i64::from(g.has_edge(cand, u));
                    if gain_cand < loss_u {
                        in_set.remove(u);
                        in_set.insert(cand);
                        chosen[i] = cand;
                        improved = true;
                        break 'outer;
                    }
                }
            }
        }
        if !improved {
            break;
        }
    }
}

/// Applies the splice. The input must satisfy the nice contract; the
/// output satisfies it again (any K4 through a layer vertex would force a
/// triangle inside the opposite side).
pub fn densify(
    g: &NiceGraph,
    p: &DensifyParams,
) -> Result<(NiceGraph, DensifyRecord), DensifyError> {
    if let Some(cert) = verify_nice(g) {
        return Err(DensifyError::NotNice(format!("{:?}", cert.kind)));
    }
    let (u1, u2, e_g0) = choose_layer_sets(g, p)?;

    let n = g.graph().n();
    let e_before = g.graph().edge_count();
    let x = g.x_side();
    let y = g.y_side();

    let mut out = BitGraph::empty(n);
    // Surviving originals: drop side edges touching the layer sets. Cross
    // edges always survive (they are re-added below anyway when they touch
    // a layer).
    for (a, b) in g.graph().edges() {
        let both_x = x.contains(a) && x.contains(b);
        let both_y = y.contains(a) && y.contains(b);
        if both_x && (u1.contains(a) || u1.contains(b)) {
            continue;
        }
        if both_y && (u2.contains(a) || u2.contains(b)) {
            continue;
        }
        out.add_edge_unchecked(a, b);
    }
    for u in u1.iter() {
        for v in y.iter() {
            out.add_edge_unchecked(u, v);
        }
    }
    for u in u2.iter() {
        for v in x.iter() {
            out.add_edge_unchecked(u, v);
        }
    }

    let e_after = out.edge_count();
    debug_assert_eq!(e_after, e_g0 + p.d * n - p.d * p.d);

    let floor = averaging_floor_holds(e_g0, e_before, n, p.d);
    let rhs = hybrid_edge_floor(e_before as u64, n as u64, p.d as u64)
        .map(ratio_to_f64_i128)
        .unwrap_or(f64::NAN);
    let record = DensifyRecord {
        u1,
        u2,
        e_before,
        e_after,
        e_g0,
        lemma_rhs: rhs,
        meets_averaging_floor: floor,
    };
    let nice = NiceGraph::new(
        out,
        g.split().clone(),
        Provenance::Densified {
            d: p.d,
            trials: p.trials,
            seed: p.seed,
        },
    )
    .expect("split is unchanged");
    Ok((nice, record))
}

/// Exact check of `e_g0 >= (1 - 2d/n)^2 * e - n`.
pub fn averaging_floor_holds(e_g0: usize, e: usize, n: usize, d: usize) -> bool {
    let (e_g0, e, n, d) = (e_g0 as i128, e as i128, n as i128, d as i128);
    e_g0 * n * n >= (n - 2 * d) * (n - 2 * d) * e - n * n * n
}

/// Exact rational value of `(1 - 2d/n)^2 * s + d*n - d^2 - n`, the edge
/// floor a depth-d splice guarantees from a base with `s` edges.
pub fn hybrid_edge_floor(s: u64, n: u64, d: u64) -> Result<Ratio<i128>, DensifyError> {
    if n < 6 || n % 2 != 0 {
        return Err(DensifyError::BadOrder(n as usize));
    }
    if d > n / 2 {
        return Err(DensifyError::LayerTooLarge {
            d: d as usize,
            half: (n / 2) as usize,
        });
    }
    let (s, n, d) = (s as i128, n as i128, d as i128);
    let scaled = Ratio::new((n - 2 * d) * (n - 2 * d) * s, n * n);
    Ok(scaled + Ratio::from_integer(d * n - d * d - n))
}

/// Margin report for reaching density n^2/8 by a depth-2δn splice.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct ReachReport {
    /// `1 + 48δ^2 - 8/n - 128δ^3`; at least 1 exactly when the splice
    /// reaches n^2/8.
    pub margin_factor: f64,
    pub value: f64,
    pub holds: bool,
}

/// Evaluates `(n^2/8)(1 + 48δ^2 - 8/n - 128δ^3)` under the hypotheses
/// `n >= 6` even and `n^{-1/2} <= δ <= 1/4`.
pub fn reach_eighth_margin(n: u64, delta: f64) -> Result<ReachReport, DensifyError> {
    if n < 6 || n % 2 != 0 {
        return Err(DensifyError::BadOrder(n as usize));
    }
    let nf = n as f64;
    if !(delta >= nf.sqrt().recip() && delta <= 0.25) {
        return Err(DensifyError::DeltaOutOfRange(delta));
    }
    let margin_factor = 1.0 + 48.0 * delta * delta - 8.0 / nf - 128.0 * delta.powi(3);
    Ok(ReachReport {
        margin_factor,
        value: nf * nf / 8.0 * margin_factor,
        holds: margin_factor >= 1.0,
    })
}

/// Evaluates `(n^2/8)(1 + 4a - 4a^2 - 8δ)` under the hypotheses `n >= 6`
/// even and `1/(δn) <= a <= 1/2`.
pub fn above_eighth_floor(n: u64, delta: f64, a: f64) -> Result<f64, DensifyError> {
    if n < 6 || n % 2 != 0 {
        return Err(DensifyError::BadOrder(n as usize));
    }
    if !(delta > 0.0) {
        return Err(DensifyError::DeltaOutOfRange(delta));
    }
    let nf = n as f64;
    if !(a >= (delta * nf).recip() && a <= 0.5) {
        return Err(DensifyError::FractionOutOfRange(a));
    }
    Ok(nf * nf / 8.0 * (1.0 + 4.0 * a - 4.0 * a * a - 8.0 * delta))
}

/// Exact MIS of both graphs, for the small-order independence-control
/// check `alpha(G') <= alpha(G) + d`.
pub fn mis_pair(g: &NiceGraph, g_prime: &NiceGraph, budget: u64) -> Option<(usize, usize)> {
    match (exact_mis(g.graph(), budget), exact_mis(g_prime.graph(), budget)) {
        (
            MisOutcome::Exact { alpha: a, .. },
            MisOutcome::Exact { alpha: b, .. },
        ) => Some((a, b)),
        _ => None,
    }
}

fn ratio_to_f64_i128(r: Ratio<i128>) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::{build_be_graph, BEParams};
    use crate::graph::Bipartition;

    fn manual_nice(n: usize, edges: &[(usize, usize)]) -> NiceGraph {
        let g = BitGraph::build(n, edges).unwrap();
        let split = Bipartition::from_left(VertexSet::from_indices(n, 0..n / 2));
        NiceGraph::new(g, split, Provenance::Manual).unwrap()
    }

    #[test]
    fn zero_layer_is_identity() {
        let g = manual_nice(6, &[(0, 3), (1, 4)]);
        let p = DensifyParams { d: 0, trials: 4, seed: 1 };
        let (out, rec) = densify(&g, &p).unwrap();
        assert_eq!(out.graph(), g.graph());
        assert_eq!(rec.e_after, rec.e_before);
        assert_eq!(rec.e_g0, 2);
    }

    #[test]
    fn empty_graph_gains_dn_minus_d_squared() {
        let g = manual_nice(6, &[]);
        let p = DensifyParams { d: 1, trials: 4, seed: 1 };
        let (out, rec) = densify(&g, &p).unwrap();
        assert_eq!(rec.e_after, 5); // 1*6 - 1
        assert_eq!(out.graph().edge_count(), 5);
        assert!(verify_nice(&out).is_none());
    }

    #[test]
    fn isolated_vertex_is_weakly_optimal_layer() {
        // X = {0,1} with 0 isolated; deleting 0 keeps every edge.
        let g = manual_nice(4, &[(1, 2), (1, 3)]);
        let p = DensifyParams { d: 1, trials: 8, seed: 2 };
        let (u1, u2, e_g0) = choose_layer_sets(&g, &p).unwrap();
        assert_eq!(u1.to_vec(), vec![0]);
        // Both Y choices lose one cross edge; lexicographic tie-break.
        assert_eq!(u2.to_vec(), vec![2]);
        assert_eq!(e_g0, 1);
    }

    #[test]
    fn complete_bipartite_ties_break_lexicographically() {
        let g = manual_nice(8, &{
            let mut e = Vec::new();
            for u in 0..4 {
                for v in 4..8 {
                    e.push((u, v));
                }
            }
            e
        });
        let p = DensifyParams { d: 2, trials: 6, seed: 9 };
        let (u1, u2, e_g0) = choose_layer_sets(&g, &p).unwrap();
        assert_eq!(u1.to_vec(), vec![0, 1]);
        assert_eq!(u2.to_vec(), vec![4, 5]);
        // Kept edges: the 2x2 block avoiding both layers.
        assert_eq!(e_g0, 4);
    }

    #[test]
    fn splice_structure_and_edge_identity_on_be_inputs() {
        for seed in 0..6 {
            let params = BEParams::new(36, 8, 0.3, seed, false).unwrap();
            let base = build_be_graph(&params).unwrap().nice;
            let p = DensifyParams { d: 4, trials: 8, seed };
            let (out, rec) = densify(&base, &p).unwrap();
            let n = out.graph().n();

            // Edge identity, recounted from scratch.
            assert_eq!(rec.e_after, out.graph().edge_count());
            assert_eq!(rec.e_after, rec.e_g0 + p.d * n - p.d * p.d);
            assert_eq!(
                rec.e_g0,
                surviving_edges(
                    base.graph(),
                    &rec.u1.to_vec(),
                    &rec.u2.to_vec()
                )
            );

            // Monotone splice scans.
            for u in rec.u1.iter() {
                for v in out.y_side().iter() {
                    assert!(out.graph().has_edge(u, v));
                }
                for v in out.x_side().iter() {
                    assert!(!out.graph().has_edge(u, v), "edge inside X touches U1");
                }
            }
            for u in rec.u2.iter() {
                for v in out.x_side().iter().filter(|v| !rec.u1.contains(*v)) {
                    assert!(out.graph().has_edge(u, v));
                }
            }
            for v in out.y_side().iter() {
                if !rec.u2.contains(v) {
                    continue;
                }
                for w in out.y_side().iter() {
                    assert!(!out.graph().has_edge(v, w));
                }
            }

            // Contract holds again, and the averaging floor was met.
            assert!(verify_nice(&out).is_none(), "seed {seed}");
            assert!(rec.meets_averaging_floor, "seed {seed}");

            // Independence grows by at most d.
            let (before, after) = mis_pair(&base, &out, 10_000_000).unwrap();
            assert!(after <= before + p.d, "seed {seed}: {after} > {before}+{}", p.d);
        }
    }

    #[test]
    fn densify_rejects_bad_inputs() {
        let g = manual_nice(6, &[(0, 1), (1, 2), (0, 2)]); // triangle in X
        let p = DensifyParams { d: 1, trials: 2, seed: 0 };
        assert!(matches!(densify(&g, &p), Err(DensifyError::NotNice(_))));

        let ok = manual_nice(6, &[]);
        let p = DensifyParams { d: 4, trials: 2, seed: 0 };
        assert!(matches!(
            densify(&ok, &p),
            Err(DensifyError::LayerTooLarge { d: 4, half: 3 })
        ));
    }

    #[test]
    fn hybrid_floor_examples() {
        let v = hybrid_edge_floor(1250, 100, 10).unwrap();
        assert_eq!(v, Ratio::from_integer(1600));

        // d = 0 collapses to s - n.
        assert_eq!(
            hybrid_edge_floor(1250, 100, 0).unwrap(),
            Ratio::from_integer(1150)
        );
        // d = n/2 collapses to n^2/4 - n.
        assert_eq!(
            hybrid_edge_floor(1250, 100, 50).unwrap(),
            Ratio::from_integer(2400)
        );
        assert!(hybrid_edge_floor(10, 7, 1).is_err());
        assert!(hybrid_edge_floor(10, 100, 51).is_err());
    }

    #[test]
    fn reach_margin_examples() {
        let r = reach_eighth_margin(10_000, 0.25).unwrap();
        assert!((r.margin_factor - 1.9992).abs() < 1e-12);
        assert!(r.holds);

        let r = reach_eighth_margin(10_000, 0.01).unwrap();
        let expect = 1.0 + 0.0048 - 0.0008 - 0.000128;
        assert!((r.margin_factor - expect).abs() < 1e-12);
        assert!(r.holds);

        // Hypothesis boundary delta = n^{-1/2}.
        let delta = (10_000f64).sqrt().recip();
        let r = reach_eighth_margin(10_000, delta).unwrap();
        assert!(r.holds);

        assert!(reach_eighth_margin(10_000, 0.26).is_err());
        assert!(reach_eighth_margin(10_000, 1e-9).is_err());
        assert!(reach_eighth_margin(7, 0.1).is_err());
    }

    #[test]
    fn above_floor_examples() {
        // a = 1/2 collapses to (n^2/8)(2 - 8*delta).
        let n = 10_000u64;
        let nf = n as f64;
        let v = above_eighth_floor(n, 1e-3, 0.5).unwrap();
        assert!((v - nf * nf / 8.0 * (2.0 - 8e-3)).abs() < 1e-3);

        let v = above_eighth_floor(n, 1e-3, 0.1).unwrap();
        assert!((v - nf * nf / 8.0 * 1.352).abs() < 1e-3);

        // Hypothesis boundary a = 1/(delta*n).
        let a = (1e-3 * nf).recip();
        assert!(above_eighth_floor(n, 1e-3, a).is_ok());
        assert!(above_eighth_floor(n, 1e-3, 0.51).is_err());
        assert!(above_eighth_floor(n, 0.0, 0.1).is_err());
    }
}
