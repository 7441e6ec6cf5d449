//! Sample -> prune -> independent set -> density estimate.

use super::graph::{build_graph, independent_set, prune_bad};
use super::{ResolvedConfig, MAX_EXPECTED_POINTS};
use crate::error::{Error, Result};
use crate::hypgeo::{dist_unchecked, BallSampler, HPoint};
use crate::volumes::log_ball_volume;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rand_distr::Distribution;
use serde::{Deserialize, Serialize};
use std::io::Write;

/// Everything a run produces, minus the raw points (exportable separately).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PackingResult {
    pub n_initial: usize,
    pub n_survivors: usize,
    /// Indices (into the sampled point sequence) of the final packing.
    pub kept: Vec<u32>,
    pub pruned_degree: Vec<u32>,
    pub pruned_codegree: Vec<u32>,
    /// Max degree of the survivor graph handed to the greedy stage.
    pub max_degree_survivors: usize,
    /// Greedy reference size `n_survivors * ln(cap) / cap` at the resolved
    /// degree cap (what the bounded-codegree theorem predicts at scale).
    pub alpha_lower_ref: f64,
    /// Monte Carlo fraction of the core region within R of a kept point.
    pub density_core: f64,
    pub density_std_error: f64,
    /// Exact re-check: all kept pairs strictly further than 2R apart.
    pub packing_valid: bool,
    /// Thresholds the pruning pass actually used.
    pub degree_cap: f64,
    pub codegree_cap: f64,
}

/// Poisson point process with intensity `lambda` (times the hyperbolic
/// measure) on B_L(origin): a Poisson count with mean `lambda vol(B_L)`,
/// then that many independent uniform points.
///
/// Refuses (resource error) when the expected count exceeds 1e7. The check
/// happens on log scale, before anything can overflow.
pub fn sample_poisson<R: Rng + ?Sized>(cfg: &ResolvedConfig, rng: &mut R) -> Result<Vec<HPoint>> {
    if cfg.lambda == 0.0 {
        return Ok(Vec::new());
    }
    let ln_expected = cfg.lambda.ln() + log_ball_volume(cfg.m, cfg.l)?.ln();
    if ln_expected > MAX_EXPECTED_POINTS.ln() {
        return Err(Error::Resource(format!(
            "expected point count exp({ln_expected:.3}) exceeds {MAX_EXPECTED_POINTS:e}; \
             reduce lambda, L, or m"
        )));
    }
    let expected = ln_expected.exp();
    let n = if expected > 0.0 {
        rand_distr::Poisson::new(expected)
            .map_err(|e| Error::Config(format!("invalid Poisson mean {expected}: {e}")))?
            .sample(rng) as usize
    } else {
        0
    };
    let origin = HPoint::origin(cfg.m as usize);
    let sampler = BallSampler::new(&origin, cfg.l)?;
    Ok((0..n).map(|_| sampler.sample(rng)).collect())
}

/// Monte Carlo estimate of the fraction of the core region B_{L-2R} lying
/// within distance R of some kept point. Returns (fraction, standard error).
pub fn estimate_density<R: Rng + ?Sized>(
    kept: &[HPoint],
    cfg: &ResolvedConfig,
    rng: &mut R,
) -> Result<(f64, f64)> {
    let core_r = cfg.core_radius();
    if !(core_r > 0.0) {
        return Err(Error::Config(format!(
            "core region is empty: L - 2R = {core_r}"
        )));
    }
    let origin = HPoint::origin(cfg.m as usize);
    let sampler = BallSampler::new(&origin, core_r)?;
    let n = cfg.mc_samples;
    let mut hits = 0u64;
    for _ in 0..n {
        let x = sampler.sample(rng);
        if kept.iter().any(|p| dist_unchecked(p, &x) <= cfg.r) {
            hits += 1;
        }
    }
    let p = hits as f64 / n as f64;
    let se = (p * (1.0 - p) / n as f64).sqrt();
    Ok((p, se))
}

/// Exact packing re-check: every pair of kept points strictly further than
/// 2R apart.
pub fn verify_packing(points: &[HPoint], kept: &[u32], r: f64) -> bool {
    for (a, &i) in kept.iter().enumerate() {
        for &j in &kept[a + 1..] {
            if dist_unchecked(&points[i as usize], &points[j as usize]) <= 2.0 * r {
                return false;
            }
        }
    }
    true
}

/// Runs the full construction for one seeded configuration.
///
/// Deterministic per config: the Poisson stage and the density estimate use
/// separate streams of a counter-based generator seeded from `cfg.seed`.
pub fn run_pipeline(cfg: &super::SimConfig) -> Result<PackingResult> {
    let resolved = cfg.resolve()?;
    let mut rng = ChaCha12Rng::seed_from_u64(resolved.seed);
    rng.set_stream(0);
    let points = sample_poisson(&resolved, &mut rng)?;
    let n_initial = points.len();
    let graph = build_graph(points, resolved.r)?;
    let prune = prune_bad(&graph, resolved.degree_cap, resolved.codegree_cap);
    let survivor_graph = graph.induced(&prune.survivors);
    let kept_local = independent_set(&survivor_graph);
    let mut kept: Vec<u32> = kept_local
        .iter()
        .map(|&i| prune.survivors[i as usize])
        .collect();
    kept.sort_unstable();

    let packing_valid = verify_packing(graph.points(), &kept, resolved.r);
    debug_assert!(packing_valid, "independent set failed the packing re-check");

    let kept_points: Vec<HPoint> = kept
        .iter()
        .map(|&i| graph.points()[i as usize].clone())
        .collect();
    let mut density_rng = ChaCha12Rng::seed_from_u64(resolved.seed);
    density_rng.set_stream(1);
    let (density_core, density_std_error) =
        estimate_density(&kept_points, &resolved, &mut density_rng)?;

    let alpha_lower_ref = if resolved.degree_cap.is_finite() && resolved.degree_cap > 1.0 {
        prune.survivors.len() as f64 * resolved.degree_cap.ln() / resolved.degree_cap
    } else {
        0.0
    };

    Ok(PackingResult {
        n_initial,
        n_survivors: prune.survivors.len(),
        kept,
        pruned_degree: prune.pruned_degree,
        pruned_codegree: prune.pruned_codegree,
        max_degree_survivors: survivor_graph.max_degree(),
        alpha_lower_ref,
        density_core,
        density_std_error,
        packing_valid,
        degree_cap: resolved.degree_cap,
        codegree_cap: resolved.codegree_cap,
    })
}

/// Writes the sampled points as CSV with header
/// `idx,x1,...,xm,xm1,kept,pruned_reason`.
pub fn write_points_csv<W: Write>(
    w: &mut W,
    points: &[HPoint],
    result: &PackingResult,
) -> std::io::Result<()> {
    let m = points.first().map_or(0, HPoint::dim);
    let mut header = String::from("idx");
    for i in 1..=m {
        header.push_str(&format!(",x{i}"));
    }
    header.push_str(",xm1,kept,pruned_reason\n");
    w.write_all(header.as_bytes())?;
    let kept: std::collections::HashSet<u32> = result.kept.iter().copied().collect();
    let by_degree: std::collections::HashSet<u32> =
        result.pruned_degree.iter().copied().collect();
    let by_codegree: std::collections::HashSet<u32> =
        result.pruned_codegree.iter().copied().collect();
    for (idx, p) in points.iter().enumerate() {
        let mut line = idx.to_string();
        for c in p.coords() {
            line.push(',');
            line.push_str(&c.to_string());
        }
        let idx = idx as u32;
        let reason = if by_degree.contains(&idx) {
            "degree"
        } else if by_codegree.contains(&idx) {
            "codegree"
        } else {
            ""
        };
        line.push_str(&format!(",{},{}\n", u8::from(kept.contains(&idx)), reason));
        w.write_all(line.as_bytes())?;
    }
    Ok(())
}
