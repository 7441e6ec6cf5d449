//! Log-space hyperbolic ball volumes.
//!
//! The volume of an r-ball in m-dimensional hyperbolic space is
//! `vol(S^{m-1}) * integral_0^r sinh^{m-1}(eta) d eta`. For the parameter
//! regimes this crate targets (m up to 10^6 and beyond) the integral spans
//! tens of millions of nats, so everything here is computed and returned on
//! log scale and never overflows.
//!
//! The integral is evaluated by adaptive Simpson quadrature with log-sum-exp
//! accumulation, after two standard reductions that keep the work bounded
//! for any m:
//!  * the region below eta = 1 is integrated in u = ln(eta) (the integrand
//!    decays like e^{m u} there, so the substitution makes it smooth), and
//!  * each region is truncated where the integrand has fallen 62 nats below
//!    its maximum; the discarded tail is below e^-60 of the total, far under
//!    the quadrature tolerance.

use crate::error::{Error, Result};
use crate::logspace::{log_add_exp, lsinh, LogReal};
use std::f64::consts::{LN_2, PI};
use statrs::function::gamma::ln_gamma;

const QUAD_REL_TOL: f64 = 1e-11;
const TAIL_NATS: f64 = 62.0;

/// Surface measure of the unit (m-1)-sphere: `2 pi^{m/2} / Gamma(m/2)`.
pub fn log_sphere_surface(m: u32) -> LogReal {
    assert!(m >= 2, "need m >= 2, got {m}");
    let half_m = m as f64 / 2.0;
    LogReal::from_ln(LN_2 + half_m * PI.ln() - ln_gamma(half_m))
}

/// Volume of an r-ball in H^m, as a log-scale magnitude.
pub fn log_ball_volume(m: u32, r: f64) -> Result<LogReal> {
    if m < 2 {
        return Err(Error::Dimension(format!("need m >= 2, got {m}")));
    }
    if !(r > 0.0) {
        return Err(Error::Domain(format!("ball radius must be > 0, got {r}")));
    }
    Ok(log_sphere_surface(m) * LogReal::from_ln(log_sinh_integral(m, r)))
}

/// Large-radius closed form
/// `e^{(m-1)r} / ((m-1) 2^{m-1}) * vol(S^{m-1})`,
/// accurate up to a relative error of order `m e^{-r}`.
pub fn log_ball_volume_asymptotic(m: u32, r: f64) -> LogReal {
    assert!(m >= 3, "asymptotic form needs m >= 3, got {m}");
    assert!(r > 0.0, "need r > 0, got {r}");
    let k = (m - 1) as f64;
    LogReal::from_ln(k * r - k.ln() - k * LN_2 + log_sphere_surface(m).ln())
}

/// `ln( vol(B_r) / vol(B_R) )` for 0 < r < R.
///
/// Always lies between `m (lsinh r - lsinh R)` and `(m-1)(lsinh r - lsinh R)`.
pub fn log_volume_ratio(m: u32, r: f64, r_big: f64) -> Result<f64> {
    if m < 2 {
        return Err(Error::Dimension(format!("need m >= 2, got {m}")));
    }
    if !(r > 0.0 && r < r_big) {
        return Err(Error::Domain(format!(
            "need 0 < r < R, got r = {r}, R = {r_big}"
        )));
    }
    // The sphere-surface factor cancels exactly.
    Ok(log_sinh_integral(m, r) - log_sinh_integral(m, r_big))
}

/// ln of `integral_0^r sinh^{m-1}(eta) d eta`.
pub(crate) fn log_sinh_integral(m: u32, r: f64) -> f64 {
    debug_assert!(m >= 2 && r > 0.0);
    let k = (m - 1) as f64;

    // Region A: eta in (0, min(r, 1)], integrated in u = ln(eta).
    // The transformed log-integrand k*lsinh(e^u) + u climbs with slope
    // >= k + 1, so a window of 62/(k+1) nats below the right end carries
    // everything but an e^-60 sliver.
    let a_hi = r.min(1.0);
    let u_hi = a_hi.ln();
    let u_lo = u_hi - TAIL_NATS / (k + 1.0);
    let phi = |u: f64| k * lsinh(u.exp()) + u;
    let mut acc = log_adaptive_simpson(&phi, u_lo, u_hi, QUAD_REL_TOL);

    // Region B: eta in [1, r], direct; slope of the log-integrand is
    // k*coth(eta) >= k, so the same 62-nat window applies.
    if r > 1.0 {
        let g = |eta: f64| k * lsinh(eta);
        let b_lo = (r - TAIL_NATS / k).max(1.0);
        acc = log_add_exp(acc, log_adaptive_simpson(&g, b_lo, r, QUAD_REL_TOL));
    }
    acc
}

/// ln of the Simpson estimate of `integral_a^b exp(g)`.
fn log_simpson_estimate(a: f64, b: f64, ga: f64, gm: f64, gb: f64) -> f64 {
    let nodes = log_add_exp(log_add_exp(ga, gm + 2.0 * LN_2), gb);
    nodes + ((b - a) / 6.0).ln()
}

/// Adaptive Simpson quadrature of `exp(g)` on [a, b], entirely in log space,
/// converging each segment to the given relative tolerance.
pub(crate) fn log_adaptive_simpson(g: &impl Fn(f64) -> f64, a: f64, b: f64, rel_tol: f64) -> f64 {
    assert!(b > a, "empty quadrature interval [{a}, {b}]");
    let mid = 0.5 * (a + b);
    let (ga, gm, gb) = (g(a), g(mid), g(b));
    let whole = log_simpson_estimate(a, b, ga, gm, gb);
    refine(g, a, b, ga, gm, gb, whole, rel_tol, 64)
}

#[allow(clippy::too_many_arguments)]
fn refine(
    g: &impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    ga: f64,
    gm: f64,
    gb: f64,
    whole: f64,
    rel_tol: f64,
    depth: u32,
) -> f64 {
    let mid = 0.5 * (a + b);
    let lm = 0.5 * (a + mid);
    let rm = 0.5 * (mid + b);
    let (glm, grm) = (g(lm), g(rm));
    let left = log_simpson_estimate(a, mid, ga, glm, gm);
    let right = log_simpson_estimate(mid, b, gm, grm, gb);
    let halves = log_add_exp(left, right);
    if whole == f64::NEG_INFINITY && halves == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    if depth == 0 {
        return halves;
    }
    let diff = whole - halves;
    // Standard Simpson refinement criterion |S1 - S2| <= 15 tol |S2|,
    // expressed in log space.
    if diff.is_finite() && diff.exp_m1().abs() <= 15.0 * rel_tol {
        return halves;
    }
    let l = refine(g, a, mid, ga, glm, gm, left, rel_tol, depth - 1);
    let r = refine(g, mid, b, gm, grm, gb, right, rel_tol, depth - 1);
    log_add_exp(l, r)
}
