//! Uniform point sets on the unit sphere in R^h and spherical-cap measure
//! numerics.
//!
//! The normalized measure of a cap is reduced to a one-dimensional slice
//! integral in the polar angle and evaluated by adaptive Simpson
//! quadrature. The integrand `sin(phi)^(h-2)` is evaluated in log space and
//! rescaled by its maximum on the interval, so high dimensions neither
//! underflow nor lose relative accuracy.

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use std::f64::consts::{PI, SQRT_2};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum GeometryError {
    #[error("ambient dimension must be at least 2, got {0}")]
    DimensionTooSmall(usize),
    #[error("cap lower bound requires dimension at least 5, got {0}")]
    DimensionBelowHypothesis(usize),
    #[error("point count must be at least 1")]
    EmptySample,
    #[error("chord radius {0} outside [0, 2]")]
    ChordOutOfRange(f64),
    #[error("cap slack mu={0} outside [0, 1)")]
    MuOutOfRange(f64),
    #[error("epsilon {0} outside (0, 1)")]
    EpsilonOutOfRange(f64),
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
}

/// `count` unit vectors in R^h, sampled i.i.d. uniformly per seed.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(into = "PointSetJson", try_from = "PointSetJson")]
pub struct SpherePointSet {
    h: usize,
    seed: u64,
    count: usize,
    coords: Vec<f64>,
}

/// JSON form: `h`, `seed`, `points` as arrays of full-precision floats.
#[derive(Serialize, Deserialize)]
struct PointSetJson {
    h: usize,
    seed: u64,
    points: Vec<Vec<f64>>,
}

impl From<SpherePointSet> for PointSetJson {
    fn from(s: SpherePointSet) -> Self {
        let points = (0..s.count).map(|i| s.point(i).to_vec()).collect();
        PointSetJson {
            h: s.h,
            seed: s.seed,
            points,
        }
    }
}

impl TryFrom<PointSetJson> for SpherePointSet {
    type Error = String;

    fn try_from(j: PointSetJson) -> Result<Self, String> {
        let mut coords = Vec::with_capacity(j.points.len() * j.h);
        for p in &j.points {
            if p.len() != j.h {
                return Err(format!("point of dimension {} in h={} set", p.len(), j.h));
            }
            coords.extend_from_slice(p);
        }
        Ok(SpherePointSet {
            h: j.h,
            seed: j.seed,
            count: j.points.len(),
            coords,
        })
    }
}

impl SpherePointSet {
    pub fn h(&self) -> usize {
        self.h
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn len(&self) -> usize {
        self.count
    }

    pub fn is_empty(&self) -> bool {
        self.count == 0
    }

    #[inline(always)]
    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.h..(i + 1) * self.h]
    }
}

/// Samples `count` i.i.d. uniform points on S^{h-1} by normalizing Gaussian
/// vectors. Deterministic per seed.
pub fn sample_sphere_points(
    h: usize,
    count: usize,
    seed: u64,
) -> Result<SpherePointSet, GeometryError> {
    if h < 2 {
        return Err(GeometryError::DimensionTooSmall(h));
    }
    if count == 0 {
        return Err(GeometryError::EmptySample);
    }
    let mut rng = crate::rng::substream(seed, "sphere-points", 0);
    let mut coords = Vec::with_capacity(h * count);
    for _ in 0..count {
        let start = coords.len();
        loop {
            coords.truncate(start);
            let mut norm_sq = 0.0;
            for _ in 0..h {
                let x: f64 = rng.sample(StandardNormal);
                norm_sq += x * x;
                coords.push(x);
            }
            // A Gaussian vector of negligible norm cannot be normalized;
            // redraw (probability ~0).
            if norm_sq > 1e-24 {
                let inv = norm_sq.sqrt().recip();
                for c in &mut coords[start..] {
                    *c *= inv;
                }
                break;
            }
        }
    }
    Ok(SpherePointSet {
        h,
        seed,
        count,
        coords,
    })
}

/// Euclidean distance between two vectors of equal dimension.
pub fn distance(p: &[f64], q: &[f64]) -> Result<f64, GeometryError> {
    if p.len() != q.len() {
        return Err(GeometryError::DimensionMismatch(p.len(), q.len()));
    }
    let s: f64 = p.iter().zip(q).map(|(a, b)| (a - b) * (a - b)).sum();
    Ok(s.sqrt())
}

/// Distance slack parameters for the sphere construction: `mu = epsilon /
/// sqrt(h)` exactly as computed.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct CapQuery {
    pub h: usize,
    pub epsilon: f64,
    pub mu: f64,
}

impl CapQuery {
    pub fn new(h: usize, epsilon: f64) -> Result<Self, GeometryError> {
        if h < 2 {
            return Err(GeometryError::DimensionTooSmall(h));
        }
        if !(epsilon > 0.0 && epsilon < 1.0) {
            return Err(GeometryError::EpsilonOutOfRange(epsilon));
        }
        let mu = epsilon / (h as f64).sqrt();
        Ok(CapQuery { h, epsilon, mu })
    }

    /// Height of the slicing hyperplane for the cap of chord radius
    /// `sqrt(2) - mu`: equals `mu*sqrt(2) - mu^2/2`.
    pub fn cap_height(&self) -> f64 {
        1.0 - (SQRT_2 - self.mu) * (SQRT_2 - self.mu) / 2.0
    }
}

/// Normalized surface measure of the spherical cap
/// `{x in S^{h-1} : |x - pole| <= chord_radius}`.
///
/// Reduces to `∫_0^θ sin^{h-2} / ∫_0^π sin^{h-2}` with
/// `cos θ = 1 - chord²/2`; each slice integral is evaluated adaptively to
/// relative accuracy well below 1e-9.
pub fn cap_measure(h: usize, chord_radius: f64) -> Result<f64, GeometryError> {
    if h < 2 {
        return Err(GeometryError::DimensionTooSmall(h));
    }
    if !(0.0..=2.0).contains(&chord_radius) || chord_radius.is_nan() {
        return Err(GeometryError::ChordOutOfRange(chord_radius));
    }
    if chord_radius == 0.0 {
        return Ok(0.0);
    }
    if chord_radius == 2.0 {
        return Ok(1.0);
    }
    let cos_theta = (1.0 - chord_radius * chord_radius / 2.0).clamp(-1.0, 1.0);
    let theta = cos_theta.acos();
    let exponent = (h - 2) as f64;
    let ln_num = ln_slice_integral(exponent, 0.0, theta);
    let ln_den = ln_slice_integral(exponent, 0.0, PI);
    Ok((ln_num - ln_den).exp().min(1.0))
}

/// log of `∫_a^b sin(phi)^k dphi`, computed by rescaling the integrand by
/// its maximum on the interval so the quadrature runs on values in [0, 1].
fn ln_slice_integral(k: f64, a: f64, b: f64) -> f64 {
    debug_assert!(a < b);
    // sin is unimodal on [0, pi] with its peak at pi/2.
    let peak = (PI / 2.0).clamp(a, b);
    let ln_max = ln_sin_pow(k, peak);
    let f = |phi: f64| (ln_sin_pow(k, phi) - ln_max).exp();
    let coarse = composite_simpson(&f, a, b, 128);
    let tol = (coarse.abs() * 1e-12).max(1e-306);
    let refined = adaptive_simpson(&f, a, b, tol);
    ln_max + refined.ln()
}

#[inline]
fn ln_sin_pow(k: f64, phi: f64) -> f64 {
    if k == 0.0 {
        return 0.0;
    }
    let s = phi.sin();
    if s <= 0.0 {
        f64::NEG_INFINITY
    } else {
        k * s.ln()
    }
}

fn composite_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, intervals: usize) -> f64 {
    debug_assert!(intervals % 2 == 0);
    let h = (b - a) / intervals as f64;
    let mut acc = f(a) + f(b);
    for i in 1..intervals {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * f(a + i as f64 * h);
    }
    acc * h / 3.0
}

fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    let m = 0.5 * (a + b);
    let (fa, fm, fb) = (f(a), f(m), f(b));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson_step(f, a, b, fa, fm, fb, whole, tol, 48)
}

#[allow(clippy::too_many_arguments)]
fn simpson_step(
    f: &dyn Fn(f64) -> f64,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let (flm, frm) = (f(lm), f(rm));
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    simpson_step(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1)
        + simpson_step(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
}

/// Outcome of comparing a computed cap measure against a closed-form bound.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct CapBoundReport {
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

/// Checks that the cap of chord radius `sqrt(2) - mu` has measure at least
/// `1/2 - sqrt(2)*epsilon`. The bound's hypothesis needs dimension >= 5.
pub fn check_cap_lower_bound(q: &CapQuery) -> Result<CapBoundReport, GeometryError> {
    if q.h < 5 {
        return Err(GeometryError::DimensionBelowHypothesis(q.h));
    }
    let lhs = cap_measure(q.h, SQRT_2 - q.mu)?;
    let rhs = 0.5 - SQRT_2 * q.epsilon;
    Ok(CapBoundReport {
        lhs,
        rhs,
        holds: lhs >= rhs,
    })
}

/// Chord radius (pole to rim) of the cap whose diameter (rim to rim) is
/// `diam`, for caps no larger than a hemisphere.
pub fn chord_radius_for_diameter(diam: f64) -> f64 {
    let half = diam / 2.0;
    let height = (1.0 - half * half).max(0.0).sqrt();
    (2.0 - 2.0 * height).sqrt()
}

/// Checks that any cap of diameter `2 - mu` has measure at most
/// `2 exp(-mu h / 2)`.
pub fn check_cap_upper_bound(h: usize, mu: f64) -> Result<CapBoundReport, GeometryError> {
    if !(0.0..1.0).contains(&mu) {
        return Err(GeometryError::MuOutOfRange(mu));
    }
    let lhs = cap_measure(h, chord_radius_for_diameter(2.0 - mu))?;
    let rhs = 2.0 * (-mu * h as f64 / 2.0).exp();
    Ok(CapBoundReport {
        lhs,
        rhs,
        holds: lhs <= rhs,
    })
}
