//! The hyperboloid model of m-dimensional hyperbolic space.
//!
//! Points live on the upper sheet of `<u,u> = -1` in R^{m+1} under the
//! Minkowski bilinear form, with `cosh d(u,v) = -<u,v>`. This module covers
//! points, tangent vectors, distances, unit-speed geodesics, isotropic
//! tangent sampling, uniform sampling in balls, the first law of cosines,
//! and the radius of a ball guaranteed to contain a two-ball intersection.

mod sampling;

pub use sampling::{sample_ball_point, sample_radius, BallSampler};

use crate::error::{Error, Result};
use crate::logspace::lsinh;
use rand::Rng;
use rand_distr::StandardNormal;
use std::f64::consts::PI;

/// Minkowski bilinear form `-u_{m+1} v_{m+1} + sum_i u_i v_i`.
///
/// Both vectors must have equal length >= 3 (model dimension m >= 2).
pub fn minkowski_form(u: &[f64], v: &[f64]) -> Result<f64> {
    if u.len() != v.len() {
        return Err(Error::Dimension(format!(
            "vector lengths differ: {} vs {}",
            u.len(),
            v.len()
        )));
    }
    if u.len() < 3 {
        return Err(Error::Dimension(format!(
            "need length >= 3 (m >= 2), got {}",
            u.len()
        )));
    }
    Ok(mink(u, v))
}

#[inline]
pub(crate) fn mink(u: &[f64], v: &[f64]) -> f64 {
    let last = u.len() - 1;
    let mut s = 0.0;
    for i in 0..last {
        s += u[i] * v[i];
    }
    s - u[last] * v[last]
}

/// A point on the upper hyperboloid sheet in R^{m+1}.
///
/// Every constructor re-projects onto the sheet (divides by sqrt(-<x,x>)),
/// so `<p,p> = -1` holds to roundoff even after long geodesic arithmetic.
#[derive(Clone, Debug, PartialEq)]
pub struct HPoint {
    coords: Vec<f64>,
}

impl HPoint {
    /// Builds a point from model coordinates, validating the sheet invariants.
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.len() < 3 {
            return Err(Error::Dimension(format!(
                "need m >= 2 (length >= 3), got length {}",
                coords.len()
            )));
        }
        if !coords.iter().all(|c| c.is_finite()) {
            return Err(Error::Domain("non-finite coordinate".into()));
        }
        if *coords.last().unwrap() <= 0.0 {
            return Err(Error::Domain(
                "last coordinate must be > 0 (upper sheet)".into(),
            ));
        }
        let q = -mink(&coords, &coords);
        if !(q > 0.0) {
            return Err(Error::Domain(format!(
                "coordinates are not timelike: <x,x> = {}",
                -q
            )));
        }
        Ok(Self::renormalized(coords))
    }

    /// The origin (0, ..., 0, 1) of the m-dimensional model.
    pub fn origin(m: usize) -> Self {
        assert!(m >= 2, "model dimension must be >= 2, got {m}");
        let mut coords = vec![0.0; m + 1];
        coords[m] = 1.0;
        HPoint { coords }
    }

    pub(crate) fn renormalized(mut coords: Vec<f64>) -> Self {
        let q = -mink(&coords, &coords);
        debug_assert!(q > 0.0);
        let scale = q.sqrt();
        for c in coords.iter_mut() {
            *c /= scale;
        }
        HPoint { coords }
    }

    /// Model dimension m (one less than the coordinate length).
    pub fn dim(&self) -> usize {
        self.coords.len() - 1
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }
}

/// A unit tangent vector attached to a base point:
/// `<base, v> = 0` and `<v, v> = 1`.
#[derive(Clone, Debug)]
pub struct TangentVec {
    coords: Vec<f64>,
    base: HPoint,
}

impl TangentVec {
    /// Projects `coords` onto the tangent space of `base` and normalizes.
    ///
    /// Rejects inputs that are grossly non-tangent (|<base,v>| beyond 1e-6
    /// after scaling) or that project to (numerically) nothing.
    pub fn new(base: HPoint, mut coords: Vec<f64>) -> Result<Self> {
        if coords.len() != base.coords.len() {
            return Err(Error::Dimension(format!(
                "tangent length {} != point length {}",
                coords.len(),
                base.coords.len()
            )));
        }
        let norm2 = mink(&coords, &coords);
        if !(norm2 > 0.0) {
            return Err(Error::Domain(
                "tangent candidate is not spacelike".into(),
            ));
        }
        let scale = norm2.sqrt();
        let alignment = mink(&coords, base.coords()) / scale;
        if alignment.abs() > 1e-6 {
            return Err(Error::Domain(format!(
                "vector is not tangent to base: <base, v>/|v| = {alignment}"
            )));
        }
        // Two projection passes wipe out the residual <base, v> component.
        for _ in 0..2 {
            let c = mink(&coords, base.coords());
            for (w, b) in coords.iter_mut().zip(base.coords()) {
                *w += c * b;
            }
        }
        let norm2 = mink(&coords, &coords);
        if !(norm2 > 1e-24) {
            return Err(Error::Domain("tangent projects to zero".into()));
        }
        let inv = norm2.sqrt().recip();
        for w in coords.iter_mut() {
            *w *= inv;
        }
        Ok(TangentVec { coords, base })
    }

    pub(crate) fn from_frame_parts(base: HPoint, coords: Vec<f64>) -> Self {
        TangentVec { coords, base }
    }

    pub fn base(&self) -> &HPoint {
        &self.base
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }
}

/// Hyperbolic distance `arccosh(max(1, -<p,q>))`.
///
/// The clamp at 1 absorbs roundoff for nearby points; the result is
/// symmetric and zero exactly when the clamped form hits 1.
pub fn distance(p: &HPoint, q: &HPoint) -> Result<f64> {
    if p.coords.len() != q.coords.len() {
        return Err(Error::Dimension(format!(
            "point dimensions differ: {} vs {}",
            p.dim(),
            q.dim()
        )));
    }
    Ok(dist_unchecked(p, q))
}

#[inline]
pub(crate) fn dist_unchecked(p: &HPoint, q: &HPoint) -> f64 {
    let c = -mink(&p.coords, &q.coords);
    c.max(1.0).acosh()
}

/// Unit-speed geodesic: `cosh(t) base + sinh(t) dir`, re-projected to the
/// sheet. Requires `t >= 0` and `dir` tangent at `base`.
pub fn geodesic_point(base: &HPoint, dir: &TangentVec, t: f64) -> Result<HPoint> {
    if !(t >= 0.0) {
        return Err(Error::Domain(format!("geodesic parameter t = {t} < 0")));
    }
    if dir.coords.len() != base.coords.len() {
        return Err(Error::Dimension(
            "direction dimension does not match base".into(),
        ));
    }
    let align = mink(dir.coords(), base.coords());
    if align.abs() > 1e-6 {
        return Err(Error::Domain(format!(
            "direction is not based at this point: <base, dir> = {align}"
        )));
    }
    let (ch, sh) = (t.cosh(), t.sinh());
    let coords: Vec<f64> = base
        .coords
        .iter()
        .zip(dir.coords())
        .map(|(b, d)| ch * b + sh * d)
        .collect();
    Ok(HPoint::renormalized(coords))
}

/// Unit tangent at `from` pointing toward `to`: the normalized
/// Minkowski-orthogonal component of `to` along `from`.
///
/// `geodesic_point(from, direction_to(from, to), distance(from, to))`
/// recovers `to` exactly.
pub fn direction_to(from: &HPoint, to: &HPoint) -> Result<TangentVec> {
    if from.coords.len() != to.coords.len() {
        return Err(Error::Dimension("point dimensions differ".into()));
    }
    let c = mink(to.coords(), from.coords());
    // w = to + <to, from> from has <w, w> = sinh^2 d(from, to).
    let coords: Vec<f64> = to
        .coords
        .iter()
        .zip(from.coords())
        .map(|(t, f)| t + c * f)
        .collect();
    let norm2 = mink(&coords, &coords);
    if !(norm2 > 0.0) {
        return Err(Error::Domain(
            "cannot take a direction between coincident points".into(),
        ));
    }
    let inv = norm2.sqrt().recip();
    Ok(TangentVec {
        coords: coords.into_iter().map(|w| w * inv).collect(),
        base: from.clone(),
    })
}

/// A Minkowski-orthonormal basis of the tangent space at one point.
///
/// Built once per base point by Gram-Schmidt with column pivoting; sampling
/// a direction is then O(m^2). Used by the ball samplers, which draw many
/// directions at the same center.
pub struct TangentFrame {
    base: HPoint,
    vecs: Vec<Vec<f64>>,
}

impl TangentFrame {
    pub fn new(base: &HPoint) -> Self {
        let n = base.coords.len();
        // Candidates e_k projected off the base span the tangent space.
        let mut cands: Vec<Vec<f64>> = (0..n)
            .map(|k| {
                let mut v = vec![0.0; n];
                v[k] = 1.0;
                v
            })
            .collect();
        let mut vecs: Vec<Vec<f64>> = Vec::with_capacity(n - 1);
        while vecs.len() < n - 1 {
            // Orthogonalize every remaining candidate, then pick the one
            // with the largest residual norm (full pivoting).
            let mut best: Option<(usize, f64)> = None;
            for (idx, cand) in cands.iter_mut().enumerate() {
                for _ in 0..2 {
                    let c = mink(cand, base.coords());
                    for (w, b) in cand.iter_mut().zip(base.coords()) {
                        *w += c * b;
                    }
                    for f in &vecs {
                        let c = mink(cand, f);
                        for (w, fv) in cand.iter_mut().zip(f) {
                            *w -= c * fv;
                        }
                    }
                }
                let norm2 = mink(cand, cand);
                if best.is_none_or(|(_, b)| norm2 > b) {
                    best = Some((idx, norm2));
                }
            }
            let (idx, norm2) = best.expect("candidate list cannot be empty");
            assert!(
                norm2 > 1e-20,
                "tangent frame degenerated at base {:?}",
                base.coords
            );
            let mut v = cands.swap_remove(idx);
            let inv = norm2.sqrt().recip();
            for w in v.iter_mut() {
                *w *= inv;
            }
            vecs.push(v);
        }
        TangentFrame {
            base: base.clone(),
            vecs,
        }
    }

    pub fn base(&self) -> &HPoint {
        &self.base
    }

    /// An isotropic unit tangent: iid standard normal coefficients over the
    /// orthonormal frame, normalized. Invariant under the stabilizer of the
    /// base point.
    pub fn sample_direction<R: Rng + ?Sized>(&self, rng: &mut R) -> TangentVec {
        let n = self.base.coords.len();
        loop {
            let mut v = vec![0.0; n];
            let mut norm2 = 0.0;
            for f in &self.vecs {
                let g: f64 = rng.sample(StandardNormal);
                norm2 += g * g;
                for (w, fv) in v.iter_mut().zip(f) {
                    *w += g * fv;
                }
            }
            if norm2 > 1e-12 {
                // Normalize with the actual Minkowski norm to absorb any
                // frame roundoff.
                let exact = mink(&v, &v);
                let inv = exact.sqrt().recip();
                for w in v.iter_mut() {
                    *w *= inv;
                }
                return TangentVec::from_frame_parts(self.base.clone(), v);
            }
        }
    }
}

/// Isotropic unit tangent vector at `base`.
pub fn random_tangent<R: Rng + ?Sized>(base: &HPoint, rng: &mut R) -> TangentVec {
    TangentFrame::new(base).sample_direction(rng)
}

/// Angle opposite side `c` in a hyperbolic triangle with sides `a`, `b`, `c`
/// (the first law of cosines, solved for the angle).
///
/// Evaluated through the half-angle form
/// `tan^2(g/2) = sinh(s-a) sinh(s-b) / (sinh(s) sinh(s-c))`, `s` the
/// semi-perimeter, with the sinh factors on log scale. That form is
/// cancellation-free where the textbook `arccos` ratio loses all precision
/// (angles near 0 or pi with large sides) and never overflows.
pub fn law_of_cosines_angle(a: f64, b: f64, c: f64) -> Result<f64> {
    if !(a > 0.0 && b > 0.0) {
        return Err(Error::Domain(format!("sides a, b must be > 0, got {a}, {b}")));
    }
    if !c.is_finite() || c < 0.0 {
        return Err(Error::Domain(format!("side c must be finite and >= 0, got {c}")));
    }
    if c > a + b || c < (a - b).abs() {
        return Err(Error::Domain(format!(
            "triangle inequality violated: |a-b| <= c <= a+b needs {} <= {c} <= {}",
            (a - b).abs(),
            a + b
        )));
    }
    let s = 0.5 * (a + b + c);
    let sa = (0.5 * (b + c - a)).max(0.0);
    let sb = (0.5 * (a + c - b)).max(0.0);
    let sc = (0.5 * (a + b - c)).max(0.0);
    let log_tan2 = lsinh(sa) + lsinh(sb) - lsinh(s) - lsinh(sc);
    if log_tan2 == f64::NEG_INFINITY {
        return Ok(0.0);
    }
    if log_tan2 == f64::INFINITY {
        return Ok(PI);
    }
    Ok(2.0 * (0.5 * log_tan2).exp().atan())
}

/// Radius of a ball centered at the geodesic midpoint that contains the
/// intersection of two radius-`r` balls whose centers are `tau` apart:
/// `sinh^2(sigma) = sinh^2(r) - cosh^2(r) tanh^2(tau/2)`.
///
/// Strictly decreasing in `tau`, with `sigma < r`, `sigma -> r` as
/// `tau -> 0` and `sigma -> 0` as `tau -> 2r`.
pub fn sigma_intersection(tau: f64, r: f64) -> Result<f64> {
    if !(tau > 0.0) {
        return Err(Error::Domain(format!("tau must be > 0, got {tau}")));
    }
    if tau >= 2.0 * r {
        return Err(Error::EmptyIntersection { tau, two_r: 2.0 * r });
    }
    // sinh^2 sigma = sinh^2 r (1 - w^2), w = coth(r) tanh(tau/2) in (0, 1).
    let w = (0.5 * tau).tanh() / r.tanh();
    let factor = ((1.0 - w) * (1.0 + w)).max(0.0);
    if factor == 0.0 {
        return Ok(0.0);
    }
    let ls = lsinh(r) + 0.5 * factor.ln();
    if ls > 350.0 {
        // asinh(x) = ln(2x) + O(x^-2) for huge x; exp would overflow first.
        Ok(ls + std::f64::consts::LN_2)
    } else {
        Ok(ls.exp().asinh())
    }
}

#[cfg(test)]
mod tests;
