//! Dependent random choice, thresholded at just over half the sample:
//! sample a multiset T from B, keep the A-vertices adjacent to at least
//! (1/2 + eps)|T| of it, prune pairs with small common B-neighborhood, and
//! read off either a K4 or a large independent set. Plus the exact
//! binomial-tail machinery behind the dispersion and concentration bounds.

use crate::bitset::VertexSet;
use crate::certify::{drill_common_neighborhood, local_max_cut, peel_min_degree, Certificate};
use crate::graph::BitGraph;
use crate::rng::substream;
use num_rational::Ratio;
use rand::Rng;
use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum DrcError {
    #[error("A and B must be disjoint (vertex {0})")]
    Overlap(usize),
    #[error("A and B must be nonempty")]
    EmptySide,
    #[error("sample size t must be at least 1")]
    EmptySample,
    #[error("epsilon {0} outside (0, 1/2)")]
    EpsilonOutOfRange(f64),
    #[error("probability {0} outside [0, 1]")]
    BadProbability(f64),
    #[error("1/2 - C*epsilon = {0} is not a probability; the tail is degenerate")]
    DegenerateProbability(f64),
    #[error("graph has {e} edges, below the n^2/8 floor ({floor})")]
    EdgeFloorViolated { e: usize, floor: f64 },
    #[error(transparent)]
    Certify(#[from] crate::certify::CertifyError),
}

/// Parameters of one sampling round. `k_constant` is the derived
/// `4C^2 + 20C + 16`.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct DrcParams {
    pub t: usize,
    pub epsilon: f64,
    pub gamma: f64,
    pub cee: f64,
    pub k_constant: f64,
    pub seed: u64,
}

impl DrcParams {
    pub fn new(
        t: usize,
        epsilon: f64,
        gamma: f64,
        cee: f64,
        seed: u64,
    ) -> Result<Self, DrcError> {
        if t == 0 {
            return Err(DrcError::EmptySample);
        }
        if !(epsilon > 0.0 && epsilon < 0.5) {
            return Err(DrcError::EpsilonOutOfRange(epsilon));
        }
        Ok(DrcParams {
            t,
            epsilon,
            gamma,
            cee,
            k_constant: 4.0 * cee * cee + 20.0 * cee + 16.0,
            seed,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum DrcKind {
    IndependentSet,
    K4,
    Fail,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DrcStats {
    pub u0_size: usize,
    pub pruned_pairs: usize,
    pub u_size: usize,
    /// The kept set after pruning.
    pub u: Vec<usize>,
    /// The sampled multiset, in draw order.
    pub sample: Vec<usize>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DrcOutcome {
    pub kind: DrcKind,
    pub witness: Option<Certificate>,
    pub stats: DrcStats,
}

/// One seeded sampling round over a disjoint pair (A, B).
pub fn drc_round(
    g: &BitGraph,
    a: &VertexSet,
    b: &VertexSet,
    p: &DrcParams,
) -> Result<DrcOutcome, DrcError> {
    if let Some(v) = a.intersection(b).first() {
        return Err(DrcError::Overlap(v));
    }
    if a.is_empty() || b.is_empty() {
        return Err(DrcError::EmptySide);
    }

    let b_list = b.to_vec();
    let mut rng = substream(p.seed, "drc-sample", 0);
    let mut multiplicity = vec![0usize; g.n()];
    let mut sample = Vec::with_capacity(p.t);
    for _ in 0..p.t {
        let v = b_list[rng.random_range(0..b_list.len())];
        multiplicity[v] += 1;
        sample.push(v);
    }

    // U0: vertices of A with at least (1/2 + eps) t sampled neighbors,
    // counted with multiplicity.
    let needed = snap_ceil((0.5 + p.epsilon) * p.t as f64);
    let u0: Vec<usize> = a
        .iter()
        .filter(|&u| {
            let hits: usize = g
                .neighbors(u)
                .intersection(b)
                .iter()
                .map(|w| multiplicity[w])
                .sum();
            hits as u64 >= needed
        })
        .collect();

    // Prune: scanning pairs lexicographically, drop the larger endpoint of
    // any pair with common B-neighborhood at most eps|B|.
    let eps_b = p.epsilon * b.len() as f64;
    let mut alive = vec![true; u0.len()];
    let mut pruned_pairs = 0usize;
    for i in 0..u0.len() {
        if !alive[i] {
            continue;
        }
        for j in i + 1..u0.len() {
            if !alive[j] {
                continue;
            }
            let mut common = g.neighbors(u0[i]).intersection(g.neighbors(u0[j]));
            common.intersect_with(b);
            if (common.len() as f64) <= eps_b {
                alive[j] = false;
                pruned_pairs += 1;
            }
        }
    }
    let u: Vec<usize> = u0
        .iter()
        .zip(&alive)
        .filter(|(_, &keep)| keep)
        .map(|(&v, _)| v)
        .collect();

    let stats = DrcStats {
        u0_size: u0.len(),
        pruned_pairs,
        u_size: u.len(),
        u: u.clone(),
        sample,
    };

    // An edge in U has a large common B-neighborhood by the pruning rule;
    // drill it to a K4 or take the neighborhood as an independent set.
    for (i, &x) in u.iter().enumerate() {
        for &y in &u[i + 1..] {
            if g.has_edge(x, y) {
                let mut shared = g.neighbors(x).intersection(g.neighbors(y));
                shared.intersect_with(b);
                let cert = drill_common_neighborhood(g, &shared, vec![x, y])
                    .with("check", "drc")
                    .with("edge", vec![x, y]);
                let kind = match cert.kind {
                    crate::certify::CertificateKind::K4 => DrcKind::K4,
                    _ => DrcKind::IndependentSet,
                };
                return Ok(DrcOutcome {
                    kind,
                    witness: Some(cert),
                    stats,
                });
            }
        }
    }

    if u.len() as f64 > p.gamma * g.n() as f64 {
        let cert = Certificate {
            kind: crate::certify::CertificateKind::IndependentSet,
            vertices: u,
            context: Default::default(),
        }
        .with("check", "drc")
        .with("gamma", p.gamma);
        return Ok(DrcOutcome {
            kind: DrcKind::IndependentSet,
            witness: Some(cert),
            stats,
        });
    }

    Ok(DrcOutcome {
        kind: DrcKind::Fail,
        witness: None,
        stats,
    })
}

/// Outcome of the peel + local-max-cut + degree-prune pipeline that stands
/// in for the regularity route to a near-half-density pair.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub enum PairOutcome {
    Found { a: VertexSet, b: VertexSet },
    Fail { a_size: usize, b_size: usize },
}

/// Searches for disjoint (A, B) where every A-vertex has B-degree at least
/// `(1/2 - 20000*gamma)|B|`, with |A| >= n/16 and |B| >= n/10. Requires
/// the n^2/8 edge floor. May fail where the underlying statement
/// guarantees existence; failures are reported, never papered over.
pub fn find_half_density_pair(
    g: &BitGraph,
    gamma: Ratio<i64>,
    seed: u64,
) -> Result<PairOutcome, DrcError> {
    let n = g.n();
    let e = g.edge_count();
    if 8 * e < n * n {
        return Err(DrcError::EdgeFloorViolated {
            e,
            floor: (n * n) as f64 / 8.0,
        });
    }

    let peel = peel_min_degree(g, e, n)?;
    let (sub, ids) = g.induced(&peel.surviving);
    let cut = local_max_cut(&sub, crate::rng::derive_seed(seed, "half-pair-cut"));
    let (l_local, r_local) = if cut.cut.left().len() >= cut.cut.right().len() {
        (cut.cut.left(), cut.cut.right())
    } else {
        (cut.cut.right(), cut.cut.left())
    };
    let l = VertexSet::from_indices(n, l_local.iter().map(|i| ids[i]));
    let r = VertexSet::from_indices(n, r_local.iter().map(|i| ids[i]));

    // Keep the L-vertices meeting the R-degree floor, compared exactly.
    let floor = (Ratio::new(1, 2) - Ratio::from_integer(20000) * gamma)
        * Ratio::from_integer(r.len() as i64);
    let a = VertexSet::from_indices(
        n,
        l.iter()
            .filter(|&v| Ratio::from_integer(g.cross_degree(v, &r) as i64) >= floor),
    );

    if 16 * a.len() >= n && 10 * r.len() >= n {
        Ok(PairOutcome::Found { a, b: r })
    } else {
        Ok(PairOutcome::Fail {
            a_size: a.len(),
            b_size: r.len(),
        })
    }
}

// ---------------------------------------------------------------------------
// Exact binomial tails in log space
// ---------------------------------------------------------------------------

/// Smallest integer >= x, absorbing the relative rounding error of f64
/// products (so thresholds like 0.51 * 10^4 land on 5100, not 5101).
pub fn snap_ceil(x: f64) -> u64 {
    let tol = 1e-9 * x.abs();
    (x - tol).ceil().max(0.0) as u64
}

/// ln P[Bin(n, p) >= m], by log-space summation of the defining terms.
/// Relative accuracy of the probability is ~1e-12, far below underflow
/// range (the log value stays finite where the probability itself would
/// denormalize).
pub fn binomial_tail_ln(n: u64, p: f64, m: u64) -> Result<f64, DrcError> {
    if !(0.0..=1.0).contains(&p) || p.is_nan() {
        return Err(DrcError::BadProbability(p));
    }
    if m == 0 {
        return Ok(0.0);
    }
    if m > n {
        return Ok(f64::NEG_INFINITY);
    }
    if p == 0.0 {
        return Ok(f64::NEG_INFINITY); // m >= 1
    }
    if p == 1.0 {
        return Ok(0.0);
    }

    let (ln_p, ln_q) = (p.ln(), (1.0 - p).ln());
    let ln_n_fact = ln_gamma(n as f64 + 1.0);
    let ln_term = |i: u64| -> f64 {
        ln_n_fact - ln_gamma(i as f64 + 1.0) - ln_gamma((n - i) as f64 + 1.0)
            + i as f64 * ln_p
            + (n - i) as f64 * ln_q
    };

    let mode = ((n + 1) as f64 * p).floor() as u64;
    let peak = ln_term(m.max(mode.min(n)));
    let mut scaled_sum = 0.0f64;
    for i in m..=n {
        let t = ln_term(i) - peak;
        scaled_sum += t.exp();
        // Terms decay geometrically past the mode; the cut tail is below
        // 1e-18 of the total.
        if i > mode && t < -64.0 {
            break;
        }
    }
    Ok(peak + scaled_sum.ln())
}

/// Exact P[Bin(n, p) >= m], through the log-space sum.
pub fn dispersion_probability(n: u64, p: f64, m: u64) -> Result<f64, DrcError> {
    Ok(binomial_tail_ln(n, p, m)?.exp())
}

/// Both sides of the dispersion inequality
/// `P[Bin(n, 1/2 - C eps) >= (1/2 + eps) n] > (eps sqrt(n) / 2) e^{-n eps^2 K}`
/// with `K = 4C^2 + 20C + 16`. Comparison happens on the log scale, where
/// neither side can underflow.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct DispersionReport {
    pub lhs: f64,
    pub rhs: f64,
    pub ln_lhs: f64,
    pub ln_rhs: f64,
    pub threshold: u64,
    pub k_constant: f64,
    pub holds: bool,
}

pub fn check_dispersion_bound(
    cee: f64,
    epsilon: f64,
    n: u64,
) -> Result<DispersionReport, DrcError> {
    let p = 0.5 - cee * epsilon;
    if p <= 0.0 {
        return Err(DrcError::DegenerateProbability(p));
    }
    let threshold = snap_ceil((0.5 + epsilon) * n as f64);
    let k_constant = 4.0 * cee * cee + 20.0 * cee + 16.0;
    let ln_lhs = binomial_tail_ln(n, p, threshold)?;
    let ln_rhs = (epsilon * (n as f64).sqrt() / 2.0).ln() - n as f64 * epsilon * epsilon * k_constant;
    Ok(DispersionReport {
        lhs: ln_lhs.exp(),
        rhs: ln_rhs.exp(),
        ln_lhs,
        ln_rhs,
        threshold,
        k_constant,
        holds: ln_lhs > ln_rhs,
    })
}

/// The closed-form pruning bound `e^{-t eps / 3}` on
/// `P[Bin(t, eps) >= 2 eps t]`.
pub fn chernoff_prune_bound(t: u64, epsilon: f64) -> f64 {
    (-(t as f64) * epsilon / 3.0).exp()
}

/// Companion check comparing the exact tail against the closed form, on
/// the log scale.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct ChernoffReport {
    pub exact: f64,
    pub bound: f64,
    pub ln_exact: f64,
    pub ln_bound: f64,
    pub threshold: u64,
    pub holds: bool,
}

pub fn check_chernoff_prune(t: u64, epsilon: f64) -> Result<ChernoffReport, DrcError> {
    let threshold = snap_ceil(2.0 * epsilon * t as f64);
    let ln_exact = binomial_tail_ln(t, epsilon, threshold)?;
    let ln_bound = -(t as f64) * epsilon / 3.0;
    Ok(ChernoffReport {
        exact: ln_exact.exp(),
        bound: ln_bound.exp(),
        ln_exact,
        ln_bound,
        threshold,
        holds: ln_exact <= ln_bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::random_graph;
    use crate::graph::BitGraph;
    use statrs::distribution::DiscreteCDF;

    fn params(t: usize, epsilon: f64, gamma: f64, seed: u64) -> DrcParams {
        DrcParams::new(t, epsilon, gamma, 1.0, seed).unwrap()
    }

    #[test]
    fn complete_bipartite_yields_full_side() {
        let g = BitGraph::complete_multipartite(&[20, 20]);
        let a = VertexSet::from_indices(40, 0..20);
        let b = a.complement();
        for seed in 0..5 {
            let out = drc_round(&g, &a, &b, &params(16, 0.1, 0.05, seed)).unwrap();
            assert_eq!(out.kind, DrcKind::IndependentSet);
            let w = out.witness.unwrap();
            assert_eq!(w.vertices.len(), 20);
            assert!(w.validate(&g));
            assert_eq!(out.stats.u0_size, 20);
            assert_eq!(out.stats.pruned_pairs, 0);
        }
    }

    #[test]
    fn complete_graph_yields_k4() {
        let g = BitGraph::complete(30);
        let a = VertexSet::from_indices(30, 0..15);
        let b = a.complement();
        for seed in 0..5 {
            let out = drc_round(&g, &a, &b, &params(16, 0.1, 0.05, seed)).unwrap();
            assert_eq!(out.kind, DrcKind::K4);
            let w = out.witness.unwrap();
            assert!(w.validate(&g));
        }
    }

    #[test]
    fn surviving_pairs_have_large_common_neighborhoods() {
        for seed in 0..10 {
            let g = random_graph(60, 0.5, seed);
            let a = VertexSet::from_indices(60, 0..30);
            let b = a.complement();
            let p = params(24, 0.1, 0.02, seed);
            let out = drc_round(&g, &a, &b, &p).unwrap();
            let eps_b = p.epsilon * b.len() as f64;
            for (i, &x) in out.stats.u.iter().enumerate() {
                for &y in &out.stats.u[i + 1..] {
                    let mut common = g.neighbors(x).intersection(g.neighbors(y));
                    common.intersect_with(&b);
                    assert!(common.len() as f64 > eps_b, "seed {seed}: pair ({x},{y})");
                }
            }
            if let Some(w) = &out.witness {
                assert!(w.validate(&g));
            }
        }
    }

    #[test]
    fn drc_rejects_bad_sides() {
        let g = BitGraph::complete(8);
        let a = VertexSet::from_indices(8, 0..5);
        let b = VertexSet::from_indices(8, 4..8);
        assert_eq!(
            drc_round(&g, &a, &b, &params(4, 0.1, 0.1, 0)).unwrap_err(),
            DrcError::Overlap(4)
        );
        assert_eq!(
            drc_round(&g, &VertexSet::empty(8), &b, &params(4, 0.1, 0.1, 0)).unwrap_err(),
            DrcError::EmptySide
        );
        assert!(DrcParams::new(0, 0.1, 0.1, 1.0, 0).is_err());
        assert!(DrcParams::new(4, 0.5, 0.1, 1.0, 0).is_err());
    }

    #[test]
    fn half_density_pair_on_complete_bipartite() {
        let g = BitGraph::complete_multipartite(&[30, 30]);
        match find_half_density_pair(&g, Ratio::new(1, 1000), 7).unwrap() {
            PairOutcome::Found { a, b } => {
                assert!(16 * a.len() >= 60);
                assert!(10 * b.len() >= 60);
                for v in a.iter() {
                    assert!(2 * g.cross_degree(v, &b) >= b.len());
                }
            }
            PairOutcome::Fail { .. } => panic!("complete bipartite must produce a pair"),
        }
    }

    #[test]
    fn half_density_pair_on_turan_graph() {
        let g = BitGraph::complete_multipartite(&[20, 20, 20]);
        match find_half_density_pair(&g, Ratio::new(1, 1000), 3).unwrap() {
            PairOutcome::Found { a, b } => {
                let floor = (Ratio::new(1, 2) - Ratio::new(20, 1))
                    * Ratio::from_integer(b.len() as i64);
                for v in a.iter() {
                    assert!(
                        Ratio::from_integer(g.cross_degree(v, &b) as i64) >= floor
                    );
                }
            }
            PairOutcome::Fail { .. } => panic!("turan graph must produce a pair"),
        }
    }

    #[test]
    fn half_density_pair_requires_edge_floor() {
        let g = random_graph(40, 0.1, 1);
        assert!(matches!(
            find_half_density_pair(&g, Ratio::new(1, 100), 0),
            Err(DrcError::EdgeFloorViolated { .. })
        ));
    }

    // ---- binomial tails ---------------------------------------------------

    #[test]
    fn tail_matches_direct_enumeration_small() {
        // P[Bin(4, 1/2) >= 2] = 11/16 by counting all 16 outcomes.
        let mut hits = 0;
        for outcome in 0u32..16 {
            if outcome.count_ones() >= 2 {
                hits += 1;
            }
        }
        assert_eq!(hits, 11);
        let p = dispersion_probability(4, 0.5, 2).unwrap();
        assert!((p - 11.0 / 16.0).abs() < 1e-12);
    }

    #[test]
    fn tail_degenerate_cases() {
        assert_eq!(dispersion_probability(100, 0.0, 1).unwrap(), 0.0);
        assert_eq!(dispersion_probability(100, 1.0, 100).unwrap(), 1.0);
        assert_eq!(dispersion_probability(100, 0.3, 0).unwrap(), 1.0);
        assert_eq!(dispersion_probability(10, 0.5, 11).unwrap(), 0.0);
        assert!(dispersion_probability(10, 1.5, 2).is_err());
    }

    #[test]
    fn tail_matches_incomplete_beta_route() {
        // statrs computes the CDF through the regularized incomplete beta
        // function -- an independent algorithm.
        for (n, p, m) in [
            (500u64, 0.3, 180u64),
            (500, 0.5, 250),
            (1000, 0.45, 500),
            (100, 0.9, 95),
        ] {
            let ours = dispersion_probability(n, p, m).unwrap();
            let reference = statrs::distribution::Binomial::new(p, n).unwrap().sf(m - 1);
            assert!(
                (ours - reference).abs() <= 1e-10 * reference.max(1e-300),
                "n={n} p={p} m={m}: {ours} vs {reference}"
            );
        }
    }

    #[test]
    fn snap_ceil_lands_on_intended_integers() {
        assert_eq!(snap_ceil(0.51 * 10_000.0), 5100);
        assert_eq!(snap_ceil(2.0 * 0.1 * 300.0), 60);
        assert_eq!(snap_ceil(5100.4), 5101);
        assert_eq!(snap_ceil(0.0), 0);
        // Genuinely-above-zero thresholds still round up.
        assert_eq!(snap_ceil(2e-10), 1);
    }

    #[test]
    fn dispersion_bound_examples() {
        let r = check_dispersion_bound(1.0, 0.01, 10_000).unwrap();
        assert_eq!(r.threshold, 5100);
        assert!(r.holds, "ln_lhs={} ln_rhs={}", r.ln_lhs, r.ln_rhs);
        // rhs = 0.5 * e^{-40} here.
        assert!((r.ln_rhs - (0.5f64.ln() - 40.0)).abs() < 1e-9);

        let r = check_dispersion_bound(2.0, 0.005, 10_000).unwrap();
        assert!(r.holds);

        assert!(matches!(
            check_dispersion_bound(60.0, 0.01, 1000),
            Err(DrcError::DegenerateProbability(_))
        ));
    }

    #[test]
    fn chernoff_companion_examples() {
        let r = check_chernoff_prune(300, 0.1).unwrap();
        assert_eq!(r.threshold, 60);
        assert!((r.ln_bound - (-10.0)).abs() < 1e-12);
        assert!(r.holds, "exact={} bound={}", r.exact, r.bound);

        let r = check_chernoff_prune(30, 0.3).unwrap();
        assert!((r.ln_bound - (-3.0)).abs() < 1e-12);
        assert!(r.holds);

        // epsilon -> 0 makes the bound vacuous but still valid.
        let r = check_chernoff_prune(100, 1e-12).unwrap();
        assert!((r.bound - 1.0).abs() < 1e-9);
        assert!(r.holds);
    }
}
