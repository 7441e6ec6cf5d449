//! Uniform sampling in hyperbolic balls.
//!
//! A uniform point in B_r(center) is an isotropic direction plus a radius
//! drawn from the density proportional to sinh^{m-1}(eta) on [0, r]. The
//! radial draw inverts a precomputed log-space CDF table (4096 cells per
//! (m, r_max) pair, adaptive Simpson per cell, cached process-wide); the
//! final inversion bisects inside one cell against a local quadrature, so
//! the sampled law matches the target CDF to ~1e-8 rather than to the
//! table resolution.
//!
//! Sampling is intended for desk-scale dimensions (m <= 64); the bound
//! formulas elsewhere stay in log space and take any m.

use super::{HPoint, TangentFrame};
use crate::error::{Error, Result};
use crate::logspace::{log_add_exp, lsinh};
use crate::volumes::log_adaptive_simpson;
use rand::Rng;
use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

const TABLE_CELLS: usize = 4096;
const CELL_TOL: f64 = 1e-10;

pub(crate) struct RadiusCdfTable {
    m: u32,
    r_max: f64,
    /// ln of the cumulative integral of sinh^{m-1} at each grid node;
    /// log_cum[0] = -inf, log_cum[TABLE_CELLS] = ln of the full integral.
    log_cum: Vec<f64>,
}

impl RadiusCdfTable {
    fn build(m: u32, r_max: f64) -> Self {
        let k = (m - 1) as f64;
        let g = |eta: f64| k * lsinh(eta);
        let h = r_max / TABLE_CELLS as f64;
        let mut log_cum = Vec::with_capacity(TABLE_CELLS + 1);
        log_cum.push(f64::NEG_INFINITY);
        let mut acc = f64::NEG_INFINITY;
        for i in 0..TABLE_CELLS {
            let a = i as f64 * h;
            let b = if i + 1 == TABLE_CELLS { r_max } else { (i + 1) as f64 * h };
            let cell = log_adaptive_simpson(&g, a, b, CELL_TOL);
            acc = log_add_exp(acc, cell);
            log_cum.push(acc);
        }
        RadiusCdfTable { m, r_max, log_cum }
    }

    /// CDF value at eta (for goodness-of-fit tests).
    #[cfg_attr(not(test), allow(dead_code))]
    pub(crate) fn cdf(&self, eta: f64) -> f64 {
        if eta <= 0.0 {
            return 0.0;
        }
        if eta >= self.r_max {
            return 1.0;
        }
        (self.log_integral_to(eta) - self.log_total()).exp()
    }

    fn log_total(&self) -> f64 {
        *self.log_cum.last().unwrap()
    }

    fn log_integral_to(&self, eta: f64) -> f64 {
        let h = self.r_max / TABLE_CELLS as f64;
        let i = ((eta / h) as usize).min(TABLE_CELLS - 1);
        let a = i as f64 * h;
        let k = (self.m - 1) as f64;
        let g = |x: f64| k * lsinh(x);
        log_add_exp(self.log_cum[i], log_composite_simpson(&g, a, eta))
    }

    /// Inverse CDF: the radius whose cumulative log-integral equals
    /// ln(u) + ln(total). Bisects within the bracketing table cell.
    fn invert(&self, u: f64) -> f64 {
        debug_assert!((0.0..1.0).contains(&u));
        if u == 0.0 {
            return 0.0;
        }
        let target = self.log_total() + u.ln();
        // First cell whose cumulative value reaches the target.
        let idx = self.log_cum.partition_point(|&c| c < target);
        if idx == 0 {
            return 0.0;
        }
        let cell = (idx - 1).min(TABLE_CELLS - 1);
        let h = self.r_max / TABLE_CELLS as f64;
        let mut lo = cell as f64 * h;
        let mut hi = if cell + 1 == TABLE_CELLS { self.r_max } else { lo + h };
        let base = self.log_cum[cell];
        let k = (self.m - 1) as f64;
        let g = |x: f64| k * lsinh(x);
        let cell_lo = lo;
        for _ in 0..40 {
            let mid = 0.5 * (lo + hi);
            let val = log_add_exp(base, log_composite_simpson(&g, cell_lo, mid));
            if val < target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }
}

/// Fixed 2-panel composite Simpson of exp(g) on [a, b], in log space.
/// Used only inside a single table cell, where the integrand is tame
/// (the log-slope per cell stays below ~0.7 across the supported m range).
fn log_composite_simpson(g: &impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    if b <= a {
        return f64::NEG_INFINITY;
    }
    let n = 4; // 2 Simpson panels
    let h = (b - a) / n as f64;
    let mut acc = f64::NEG_INFINITY;
    for j in 0..=n {
        let x = if j == n { b } else { a + j as f64 * h };
        let w = if j == 0 || j == n {
            1.0f64
        } else if j % 2 == 1 {
            4.0
        } else {
            2.0
        };
        acc = log_add_exp(acc, g(x) + w.ln());
    }
    acc + (h / 3.0).ln()
}

type TableCache = Mutex<HashMap<(u32, u64), Arc<RadiusCdfTable>>>;

fn table_cache() -> &'static TableCache {
    static CACHE: OnceLock<TableCache> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

pub(crate) fn table_for(m: u32, r_max: f64) -> Arc<RadiusCdfTable> {
    let key = (m, r_max.to_bits());
    let mut cache = table_cache().lock().expect("CDF table cache poisoned");
    cache
        .entry(key)
        .or_insert_with(|| Arc::new(RadiusCdfTable::build(m, r_max)))
        .clone()
}

/// Draws a radius from the density proportional to sinh^{m-1} on [0, r_max].
pub fn sample_radius<R: Rng + ?Sized>(m: u32, r_max: f64, rng: &mut R) -> f64 {
    assert!(m >= 2, "sample_radius needs m >= 2, got {m}");
    assert!(r_max > 0.0, "sample_radius needs r_max > 0, got {r_max}");
    let table = table_for(m, r_max);
    table.invert(rng.gen::<f64>())
}

/// Uniform sampling in a fixed ball: the tangent frame and the radial CDF
/// table are resolved once, so drawing many points at the same center is
/// cheap.
pub struct BallSampler {
    frame: TangentFrame,
    table: Arc<RadiusCdfTable>,
    radius: f64,
}

impl BallSampler {
    pub fn new(center: &HPoint, r: f64) -> Result<Self> {
        if !(r > 0.0) {
            return Err(Error::Domain(format!("ball radius must be > 0, got {r}")));
        }
        Ok(BallSampler {
            frame: TangentFrame::new(center),
            table: table_for(center.dim() as u32, r),
            radius: r,
        })
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> HPoint {
        let dir = self.frame.sample_direction(rng);
        let t = self.table.invert(rng.gen::<f64>());
        // t <= radius by construction, so this cannot fail.
        super::geodesic_point(self.frame.base(), &dir, t).expect("in-ball geodesic")
    }
}

/// One uniform point (w.r.t. hyperbolic measure) in B_r(center).
pub fn sample_ball_point<R: Rng + ?Sized>(center: &HPoint, r: f64, rng: &mut R) -> HPoint {
    let sampler = BallSampler::new(center, r).expect("valid ball radius");
    sampler.sample(rng)
}
