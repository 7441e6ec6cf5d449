//! The packing-bound parameter system for H^m.
//!
//! For a packing radius R in dimension m, a threshold function gamma(x)
//! (increasing on (0, R]) has a unique root tau once m is large enough.
//! tau splits center pairs into "close" (rare under the Poisson intensity
//! used by the construction) and "far" (whose 2R-ball intersections are
//! provably small). From tau come the degree parameter
//! `Delta = vol(B_2R) / (m^4 vol(B_tau))` and the intensity
//! `lambda = Delta / vol(B_2R)`, and from those the lower bound
//! `(1 - eps) m ln(sqrt(m) cosh 2R) * vol(B_R)/vol(B_2R)`
//! that improves the trivial covering bound by the logarithmic factor.
//!
//! Everything is on log scale; dimensions up to 10^6 and beyond are fine.

use crate::error::{Error, Result};
use crate::hypgeo::{law_of_cosines_angle, sigma_intersection};
use crate::logspace::{lcosh, lsinh};
use crate::volumes::{log_ball_volume, log_volume_ratio};
use serde::Serialize;
use std::f64::consts::PI;
use std::io::BufRead;

/// ln of the trivial covering bound `vol(B_R) / vol(B_2R)`: a maximal
/// packing's doubled balls cover everything.
pub fn trivial_lower_bound_log(m: u32, r: f64) -> Result<f64> {
    if m < 2 {
        return Err(Error::Dimension(format!("need m >= 2, got {m}")));
    }
    if !(r > 0.0) {
        return Err(Error::Domain(format!("need R > 0, got {r}")));
    }
    log_volume_ratio(m, r, 2.0 * r)
}

/// The threshold function whose root defines tau.
///
/// For R < m:
///   `m tanh^2(x/2) - 50 tanh^2(2R) (ln m + ln ln(sinh 2R / sinh x))`,
/// with the sinh ratio computed as a difference of `lsinh` values.
///
/// For R >= m the comparison `cosh^2(x/2)` vs `m ln cosh(2R)` is evaluated
/// as a difference of logs, `2 lcosh(x/2) - ln(m ln cosh 2R)`, because
/// cosh^2(x/2) overflows when x is of the order of R >= m. Only the sign
/// matters to the root solve, and the log transform preserves it.
pub fn gamma_fn(x: f64, m: u32, r: f64) -> Result<f64> {
    if !(x > 0.0 && x <= r) {
        return Err(Error::Domain(format!(
            "gamma is defined on (0, R]; got x = {x}, R = {r}"
        )));
    }
    let mf = m as f64;
    if r < mf {
        let inner = lsinh(2.0 * r) - lsinh(x);
        // For x <= R the ratio sinh(2R)/sinh(x) is at least 2, so the
        // double logarithm is always defined.
        assert!(
            inner > 0.0,
            "double-log argument must be positive (x = {x}, R = {r})"
        );
        let th = (0.5 * x).tanh();
        let t2r = (2.0 * r).tanh();
        Ok(mf * th * th - 50.0 * t2r * t2r * (mf.ln() + inner.ln()))
    } else {
        let lhs = 2.0 * lcosh(0.5 * x);
        let rhs = mf.ln() + lcosh(2.0 * r).ln();
        Ok(lhs - rhs)
    }
}

/// A bracketed root of [`gamma_fn`]: `gamma(lo) < 0 <= gamma(hi)` with
/// `hi - lo` below the solver's width target.
#[derive(Clone, Copy, Debug)]
pub struct TauRoot {
    pub tau: f64,
    pub lo: f64,
    pub hi: f64,
}

/// Solves `gamma(tau) = 0` on (0, R].
///
/// Brackets the root by the geometric sweep `x = R 2^{-k}` and bisects to a
/// width below `1e-13 * R`. If `gamma(R) <= 0` the dimension is below the
/// implicit floor for this radius and a no-root error carrying the boundary
/// value is returned.
pub fn solve_tau(m: u32, r: f64) -> Result<TauRoot> {
    if m < 2 {
        return Err(Error::Dimension(format!("need m >= 2, got {m}")));
    }
    if !(r > 0.0) {
        return Err(Error::Domain(format!("need R > 0, got {r}")));
    }
    let gamma_at_r = gamma_fn(r, m, r)?;
    if gamma_at_r <= 0.0 {
        return Err(Error::NoRoot { r, gamma_at_r });
    }
    let mut hi = r;
    let mut lo = None;
    for k in 1..=200 {
        let x = r * 2.0f64.powi(-k);
        if gamma_fn(x, m, r)? < 0.0 {
            lo = Some(x);
            break;
        }
        hi = x;
    }
    let mut lo = lo.ok_or(Error::NoSignChange {
        checked_down_to: r * 2.0f64.powi(-200),
    })?;
    let width = 1e-13 * r;
    while hi - lo >= width {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break; // f64 resolution exhausted
        }
        if gamma_fn(mid, m, r)? < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(TauRoot {
        tau: 0.5 * (lo + hi),
        lo,
        hi,
    })
}

/// `ln Delta` with `Delta = vol(B_2R) / (m^4 vol(B_tau))`.
pub fn log_delta_param(m: u32, r: f64, tau: f64) -> Result<f64> {
    if !(tau > 0.0 && tau < 2.0 * r) {
        return Err(Error::Domain(format!(
            "need 0 < tau < 2R, got tau = {tau}, R = {r}"
        )));
    }
    Ok(-4.0 * (m as f64).ln() - log_volume_ratio(m, tau, 2.0 * r)?)
}

/// `ln lambda` with `lambda = Delta / vol(B_2R)`.
pub fn log_lambda(m: u32, r: f64, tau: f64) -> Result<f64> {
    Ok(log_delta_param(m, r, tau)? - log_ball_volume(m, 2.0 * r)?.ln())
}

/// ln of the improvement factor `(1 - eps) m ln(sqrt(m) cosh 2R)` that the
/// main bound applies on top of the trivial one.
pub fn improvement_factor_log(m: u32, r: f64, epsilon: f64) -> f64 {
    let mf = m as f64;
    (1.0 - epsilon).ln() + mf.ln() + (0.5 * mf.ln() + lcosh(2.0 * r)).ln()
}

/// ln of the main lower bound
/// `(1 - eps) m ln(sqrt(m) cosh 2R) vol(B_R)/vol(B_2R)`.
///
/// This is a formula value: its validity as a packing-density bound needs
/// the dimension to exceed an epsilon-dependent floor, which is why rows
/// without a tau root are flagged downstream.
pub fn main_bound_log(m: u32, r: f64, epsilon: f64) -> Result<f64> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::Domain(format!(
            "epsilon must be in (0, 1), got {epsilon}"
        )));
    }
    Ok(improvement_factor_log(m, r, epsilon) + trivial_lower_bound_log(m, r)?)
}

/// The multiplicative window accepted by [`check_claim_basic`].
pub const CLAIM_RATIO_WINDOW: f64 = 20.0;

/// Report for the sinh-ratio claim: for R < m,
/// `sinh(2R)/sinh(tau)` tracks `cosh(2R) sqrt(m / ln m)` up to a constant.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct SinhRatioReport {
    /// ln of q = (sinh 2R / sinh tau) / (cosh 2R sqrt(m / ln m)).
    pub log_q: f64,
    /// Whether q lies in [1/20, 20].
    pub in_window: bool,
}

pub fn check_claim_basic(m: u32, r: f64, tau: f64) -> Result<SinhRatioReport> {
    let mf = m as f64;
    if !(r < mf) {
        return Err(Error::Domain(format!(
            "the sinh-ratio claim needs R < m, got R = {r}, m = {m}"
        )));
    }
    if !(tau > 0.0 && tau <= r) {
        return Err(Error::Domain(format!("need tau in (0, R], got {tau}")));
    }
    let log_q =
        (lsinh(2.0 * r) - lsinh(tau)) - (lcosh(2.0 * r) + 0.5 * (mf.ln() - mf.ln().ln()));
    Ok(SinhRatioReport {
        log_q,
        in_window: log_q.abs() <= CLAIM_RATIO_WINDOW.ln(),
    })
}

/// Log-margin of the covolume claim: for centers at distance >= tau,
/// `lambda vol(B_2R(x) cap B_2R(y)) <= Delta (ln Delta)^{-15}`.
///
/// Evaluates the proof's chain `ln lambda + ln vol(B_sigma)` with
/// `sigma = sigma_intersection(tau, 2R)` and returns
/// `[ln Delta - 15 ln ln Delta]` minus that chain; a positive value
/// certifies the claim numerically at (m, R).
pub fn check_covolume_claim(m: u32, r: f64, tau: f64) -> Result<f64> {
    let sigma = sigma_intersection(tau, 2.0 * r)?;
    let ln_delta = log_delta_param(m, r, tau)?;
    if ln_delta <= 1.0 {
        return Err(Error::Domain(format!(
            "covolume margin needs ln Delta > 1, got {ln_delta}"
        )));
    }
    if sigma == 0.0 {
        // The intersection has vanishing volume; the claim is vacuous.
        return Ok(f64::INFINITY);
    }
    let chain = log_lambda(m, r, tau)? + log_ball_volume(m, sigma)?.ln();
    Ok(ln_delta - 15.0 * ln_delta.ln() - chain)
}

/// Upper bound on the density of radius-R disk packings of the hyperbolic
/// plane: the fraction of a regular triangle of side 2R covered by the
/// three radius-R disks at its corners,
/// `3 alpha (cosh R - 1) / (pi - 3 alpha)` with `alpha` the triangle angle.
///
/// Tends to `pi / sqrt(12)` as R -> 0 (the flat hexagonal value) and to
/// `3 / pi` as R -> infinity.
pub fn local_density_bound_m2(r: f64) -> Result<f64> {
    if !(r > 0.0) {
        return Err(Error::Domain(format!("need R > 0, got {r}")));
    }
    let side = 2.0 * r;
    let alpha = law_of_cosines_angle(side, side, side)?;
    let denom = PI - 3.0 * alpha;
    assert!(denom > 0.0, "degenerate triangle angle at R = {r}");
    // cosh R - 1 = 2 sinh^2(R/2), exact near zero.
    let coshm1 = 2.0 * (0.5 * r).sinh().powi(2);
    Ok(3.0 * alpha * coshm1 / denom)
}

/// One row of a spherical-code table: a minimum angle `theta` and the log
/// of the maximum code size at that angle.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct SphericalCodeRow {
    pub theta: f64,
    pub log_size: f64,
}

/// ln of the spherical-code packing upper bound
/// `min_theta sin^{m-1}(theta/2) A(m, theta)` over the supplied rows.
///
/// Code sizes are caller-supplied; this crate does not compute them.
pub fn cohn_zhao_bound_log(m: u32, codes: &[SphericalCodeRow]) -> Result<f64> {
    if m < 2 {
        return Err(Error::Dimension(format!("need m >= 2, got {m}")));
    }
    if codes.is_empty() {
        return Err(Error::Domain("empty spherical-code table".into()));
    }
    let mut best = f64::INFINITY;
    for row in codes {
        if !(row.theta >= PI / 3.0 - 1e-12 && row.theta <= PI + 1e-12) {
            return Err(Error::Domain(format!(
                "theta must lie in [pi/3, pi], got {}",
                row.theta
            )));
        }
        let v = (m as f64 - 1.0) * (0.5 * row.theta).sin().ln() + row.log_size;
        best = best.min(v);
    }
    Ok(best)
}

/// Reads a spherical-code table from CSV with header `theta,log_A`.
pub fn read_code_table<R: BufRead>(reader: R) -> Result<Vec<SphericalCodeRow>> {
    let mut rows = Vec::new();
    let mut lines = reader.lines().enumerate();
    let header = lines
        .next()
        .ok_or_else(|| Error::Domain("empty code table".into()))?
        .1
        .map_err(|e| Error::Domain(format!("cannot read code table: {e}")))?;
    if header.trim() != "theta,log_A" {
        return Err(Error::Domain(format!(
            "code table header must be `theta,log_A`, got `{}`",
            header.trim()
        )));
    }
    for (lineno, line) in lines {
        let line = line.map_err(|e| Error::Domain(format!("cannot read code table: {e}")))?;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let mut parts = line.split(',');
        let (theta, log_size) = match (parts.next(), parts.next(), parts.next()) {
            (Some(t), Some(a), None) => {
                let parse = |s: &str, what: &str| {
                    s.trim().parse::<f64>().map_err(|_| {
                        Error::Domain(format!(
                            "line {}: cannot parse {what} `{}`",
                            lineno + 1,
                            s.trim()
                        ))
                    })
                };
                (parse(t, "theta")?, parse(a, "log_A")?)
            }
            _ => {
                return Err(Error::Domain(format!(
                    "line {}: expected two comma-separated fields",
                    lineno + 1
                )))
            }
        };
        rows.push(SphericalCodeRow { theta, log_size });
    }
    if rows.is_empty() {
        return Err(Error::Domain("code table has no data rows".into()));
    }
    Ok(rows)
}

/// One (m, R) record of every computed bound and parameter.
///
/// `log_main` is always the formula value; rows whose tau solve failed are
/// flagged `no-root` in `notes` (the dimension is below the floor at which
/// the improvement factor is justified).
#[derive(Clone, Debug, Serialize)]
pub struct BoundsRow {
    pub m: u32,
    #[serde(rename = "R")]
    pub r: f64,
    pub epsilon: f64,
    pub log_l: f64,
    pub log_main: f64,
    pub tau: Option<f64>,
    pub log_delta: Option<f64>,
    pub log_lambda: Option<f64>,
    pub notes: String,
}

/// Computes a full row for one grid cell. A failed tau solve is a
/// first-class outcome (tau and the derived columns absent), not an error.
pub fn bounds_row(m: u32, r: f64, epsilon: f64) -> Result<BoundsRow> {
    let log_l = trivial_lower_bound_log(m, r)?;
    let log_main = main_bound_log(m, r, epsilon)?;
    match solve_tau(m, r) {
        Ok(root) => Ok(BoundsRow {
            m,
            r,
            epsilon,
            log_l,
            log_main,
            tau: Some(root.tau),
            log_delta: Some(log_delta_param(m, r, root.tau)?),
            log_lambda: Some(log_lambda(m, r, root.tau)?),
            notes: String::new(),
        }),
        Err(Error::NoRoot { .. }) | Err(Error::NoSignChange { .. }) => Ok(BoundsRow {
            m,
            r,
            epsilon,
            log_l,
            log_main,
            tau: None,
            log_delta: None,
            log_lambda: None,
            notes: "no-root".into(),
        }),
        Err(e) => Err(e),
    }
}
