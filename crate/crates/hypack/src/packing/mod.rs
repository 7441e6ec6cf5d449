//! Desk-scale realization of the random packing construction.
//!
//! Pipeline: a Poisson point process in a bounded ball B_L of H^m, a
//! proximity graph joining points within 2R, a single pruning pass that
//! removes points with too many 2R-neighbors or a partner sharing too many
//! common 2R-ball members, and a minimum-degree greedy independent set.
//! The survivors form an R-packing whose density is estimated by Monte
//! Carlo over the core region B_{L-2R} (measuring only there avoids
//! censoring from unobserved points outside B_L).
//!
//! Also here: empirical checks of the Mecke identity and of the Poisson
//! upper-tail bound used by the pruning analysis.

mod checks;
mod graph;
mod pipeline;


pub use checks::{mecke_check, poisson_tail_check, MeckeReport, PoissonTailReport};
pub use graph::{build_graph, independent_set, prune_bad, GeometricGraph, PruneOutcome};
pub use pipeline::{
    estimate_density, run_pipeline, sample_poisson, verify_packing, write_points_csv,
    PackingResult,
};

use crate::error::{Error, Result};
use crate::volumes::log_ball_volume;
use serde::{Deserialize, Serialize};

/// Expected-point-count guard for the Poisson sampler.
pub const MAX_EXPECTED_POINTS: f64 = 1e7;

/// How the Poisson intensity of a run is specified.
#[derive(Clone, Copy, Debug, Serialize, Deserialize, PartialEq)]
pub enum Intensity {
    /// The intensity itself (points per unit volume).
    Explicit(f64),
    /// A target expected 2R-ball count `D`; the intensity is then
    /// `D / vol(B_2R)`, mirroring the shape `lambda = Delta / vol(B_2R)`
    /// of the parameter system at desk scale.
    TargetDegree(f64),
}

/// Full parameterization of one simulation run.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SimConfig {
    /// Model dimension, 2..=64 (sampling support range).
    pub m: u32,
    /// Packing radius R.
    pub r: f64,
    /// Region radius L; must exceed 4R so the core B_{L-2R} is nonempty
    /// and boundary-safe for the codegree counts.
    pub l: f64,
    pub intensity: Intensity,
    pub seed: u64,
    /// Degree prune threshold; defaults to `D + D^{2/3}` where `D` is the
    /// target expected degree.
    pub degree_cap: Option<f64>,
    /// Codegree prune threshold; defaults to `D (ln D)^{-10}`. Note that
    /// the default is below 1 for any desk-scale `D` (it only exceeds 1
    /// for astronomically large degrees), in which case the condition
    /// removes every point sharing any 2R-ball member with a partner; pass
    /// an explicit cap for non-degenerate desk-scale runs.
    pub codegree_cap: Option<f64>,
    /// Monte Carlo sample count for the core density estimate.
    pub mc_samples: u32,
}

impl SimConfig {
    /// Validates the invariants and resolves intensity and caps.
    pub fn resolve(&self) -> Result<ResolvedConfig> {
        if !(2..=64).contains(&self.m) {
            return Err(Error::Config(format!(
                "m must be in [2, 64] for sampling, got {}",
                self.m
            )));
        }
        if !(self.r > 0.0) {
            return Err(Error::Config(format!("R must be > 0, got {}", self.r)));
        }
        if !(self.l > 4.0 * self.r) {
            return Err(Error::Config(format!(
                "L must exceed 4R (core region + codegree safety), got L = {}, R = {}",
                self.l, self.r
            )));
        }
        let log_ball_2r = log_ball_volume(self.m, 2.0 * self.r)?.ln();
        let (lambda, delta_sim) = match self.intensity {
            Intensity::Explicit(l) => {
                if !(l >= 0.0) {
                    return Err(Error::Config(format!("lambda must be >= 0, got {l}")));
                }
                (l, l * log_ball_2r.exp())
            }
            Intensity::TargetDegree(d) => {
                if !(d > std::f64::consts::E) {
                    return Err(Error::Config(format!(
                        "target degree must exceed e so ln(degree) > 1, got {d}"
                    )));
                }
                ((d.ln() - log_ball_2r).exp(), d)
            }
        };
        let needs_default_caps = self.degree_cap.is_none() || self.codegree_cap.is_none();
        if needs_default_caps && lambda > 0.0 && !(delta_sim > std::f64::consts::E) {
            return Err(Error::Config(format!(
                "default prune caps need an expected degree > e, got {delta_sim}; \
                 set degree_cap/codegree_cap explicitly"
            )));
        }
        let (degree_cap, codegree_cap) = if lambda == 0.0 {
            // No points: caps are irrelevant.
            (
                self.degree_cap.unwrap_or(f64::INFINITY),
                self.codegree_cap.unwrap_or(f64::INFINITY),
            )
        } else {
            (
                self.degree_cap
                    .unwrap_or(delta_sim + delta_sim.powf(2.0 / 3.0)),
                self.codegree_cap
                    .unwrap_or(delta_sim * delta_sim.ln().powi(-10)),
            )
        };
        if !(degree_cap > 0.0 && codegree_cap > 0.0) {
            return Err(Error::Config(
                "prune caps must be positive".into(),
            ));
        }
        if self.mc_samples == 0 {
            return Err(Error::Config("mc_samples must be > 0".into()));
        }
        Ok(ResolvedConfig {
            m: self.m,
            r: self.r,
            l: self.l,
            lambda,
            delta_sim,
            seed: self.seed,
            degree_cap,
            codegree_cap,
            mc_samples: self.mc_samples,
        })
    }
}

/// A validated configuration with intensity and caps resolved to numbers.
#[derive(Clone, Debug, Serialize)]
pub struct ResolvedConfig {
    pub m: u32,
    pub r: f64,
    pub l: f64,
    pub lambda: f64,
    /// Expected 2R-ball count implied by the intensity.
    pub delta_sim: f64,
    pub seed: u64,
    pub degree_cap: f64,
    pub codegree_cap: f64,
    pub mc_samples: u32,
}

impl ResolvedConfig {
    /// Radius of the core measurement region B_{L-2R}.
    pub fn core_radius(&self) -> f64 {
        self.l - 2.0 * self.r
    }
}
