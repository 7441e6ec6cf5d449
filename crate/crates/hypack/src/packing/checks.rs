//! Empirical checks of the two probabilistic tools behind the pruning
//! analysis: the Mecke identity for Poisson processes and the Poisson
//! upper-tail bound.

use crate::error::{Error, Result};
use crate::hypgeo::{dist_unchecked, BallSampler, HPoint};
use crate::volumes::log_ball_volume;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rand_distr::Distribution;
use serde::Serialize;

/// Outcome of the Mecke identity check.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct MeckeReport {
    /// Mean over runs of |{x in X cap core : no other point within s}|.
    pub empirical_mean: f64,
    /// `lambda vol(core) exp(-lambda vol(B_s))`.
    pub analytic: f64,
    /// Standard error of the empirical mean.
    pub std_error: f64,
    pub n_runs: u32,
    pub within_3se: bool,
}

/// Compares the empirical count of s-isolated core points of a Poisson
/// process on B_L against the exact Mecke/Palm value
/// `lambda vol(B_{L-2R}) exp(-lambda vol(B_s))`.
///
/// Requires `s <= 2R` so the isolation ball of every core point stays
/// inside the sampled region (no censoring, the analytic value is exact).
pub fn mecke_check(
    m: u32,
    r: f64,
    lambda: f64,
    s: f64,
    l: f64,
    n_runs: u32,
    seed: u64,
) -> Result<MeckeReport> {
    if !(r > 0.0 && s > 0.0 && lambda >= 0.0) {
        return Err(Error::Config("need R > 0, s > 0, lambda >= 0".into()));
    }
    if !(l > 2.0 * r) {
        return Err(Error::Config(format!(
            "core region empty: need L > 2R, got L = {l}, R = {r}"
        )));
    }
    if s > 2.0 * r {
        return Err(Error::Config(format!(
            "need s <= 2R so isolation balls stay inside the region, got s = {s}"
        )));
    }
    if n_runs == 0 {
        return Err(Error::Config("need at least one run".into()));
    }
    let core_r = l - 2.0 * r;
    let vol_core = log_ball_volume(m, core_r)?.ln().exp();
    let vol_s = log_ball_volume(m, s)?.ln().exp();
    let vol_l = log_ball_volume(m, l)?.ln().exp();
    let analytic = lambda * vol_core * (-lambda * vol_s).exp();

    let origin = HPoint::origin(m as usize);
    let sampler = BallSampler::new(&origin, l)?;
    let mean_count = lambda * vol_l;
    let mut counts = Vec::with_capacity(n_runs as usize);
    for run in 0..n_runs {
        let mut rng = ChaCha12Rng::seed_from_u64(seed);
        rng.set_stream(run as u64);
        let n = if mean_count > 0.0 {
            rand_distr::Poisson::new(mean_count)
                .map_err(|e| Error::Config(format!("invalid Poisson mean: {e}")))?
                .sample(&mut rng) as usize
        } else {
            0
        };
        let pts: Vec<HPoint> = (0..n).map(|_| sampler.sample(&mut rng)).collect();
        let mut count = 0u64;
        for (i, x) in pts.iter().enumerate() {
            if dist_unchecked(x, &origin) > core_r {
                continue;
            }
            let isolated = pts
                .iter()
                .enumerate()
                .all(|(j, y)| j == i || dist_unchecked(x, y) > s);
            if isolated {
                count += 1;
            }
        }
        counts.push(count as f64);
    }
    let n = counts.len() as f64;
    let empirical_mean = counts.iter().sum::<f64>() / n;
    let variance = counts
        .iter()
        .map(|c| (c - empirical_mean).powi(2))
        .sum::<f64>()
        / (n - 1.0).max(1.0);
    let std_error = (variance / n).sqrt();
    let within_3se = (empirical_mean - analytic).abs() <= 3.0 * std_error.max(1e-12);
    Ok(MeckeReport {
        empirical_mean,
        analytic,
        std_error,
        n_runs,
        within_3se,
    })
}

/// Outcome of the Poisson tail-bound check.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct PoissonTailReport {
    /// Empirical frequency of `Z - mean >= t * mean`.
    pub empirical: f64,
    /// `exp(-min(t, t^2) * mean / 3)`.
    pub bound: f64,
    /// Binomial standard error of the frequency.
    pub std_error: f64,
    pub n_draws: u64,
    pub ok: bool,
}

/// Draws `n_draws` Poisson(mean) variates and checks that the exceedance
/// frequency of `Z - EZ >= t EZ` stays below
/// `exp(-min(t, t^2) EZ / 3)` plus three standard errors.
pub fn poisson_tail_check(mean: f64, t: f64, n_draws: u64, seed: u64) -> Result<PoissonTailReport> {
    if !(mean > 0.0 && t > 0.0) {
        return Err(Error::Config(format!(
            "need mean > 0 and t > 0, got {mean}, {t}"
        )));
    }
    if n_draws == 0 {
        return Err(Error::Config("need at least one draw".into()));
    }
    let dist = rand_distr::Poisson::new(mean)
        .map_err(|e| Error::Config(format!("invalid Poisson mean: {e}")))?;
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let threshold = t * mean;
    let mut exceed = 0u64;
    for _ in 0..n_draws {
        let z: f64 = dist.sample(&mut rng);
        if z - mean >= threshold {
            exceed += 1;
        }
    }
    let empirical = exceed as f64 / n_draws as f64;
    let bound = (-t.min(t * t) * mean / 3.0).exp();
    let std_error = (empirical * (1.0 - empirical) / n_draws as f64).sqrt();
    let ok = empirical <= bound + 3.0 * std_error;
    Ok(PoissonTailReport {
        empirical,
        bound,
        std_error,
        n_draws,
        ok,
    })
}
