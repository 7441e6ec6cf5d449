//! The verification batteries behind `hypack verify`.
//!
//! Each check reports a signed margin: the distance to its pass boundary,
//! positive inside. Checks run on a worker pool; report order is fixed by
//! construction order, never by completion order. All randomness derives
//! from the user seed, so reports are reproducible.

use crate::{CliError, CliResult};
use hypack::bounds::{
    bounds_row, check_claim_basic, check_covolume_claim, gamma_fn, improvement_factor_log,
    local_density_bound_m2, log_delta_param, solve_tau, trivial_lower_bound_log,
};
use hypack::hypgeo::{
    direction_to, distance, geodesic_point, law_of_cosines_angle, random_tangent,
    sample_ball_point, sigma_intersection, BallSampler, HPoint,
};
use hypack::logspace::lsinh;
use hypack::packing::{
    mecke_check, poisson_tail_check, run_pipeline, sample_poisson, Intensity, SimConfig,
};
use hypack::volumes::{
    log_ball_volume, log_ball_volume_asymptotic, log_sphere_surface, log_volume_ratio,
};
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::PI;

#[derive(Serialize, Clone)]
pub struct Check {
    pub name: String,
    /// Signed distance to the pass boundary; >= 0 passes.
    pub margin: f64,
    /// The threshold the margin is measured against.
    pub tolerance: f64,
    pub pass: bool,
    pub detail: String,
}

impl Check {
    fn new(name: &str, margin: f64, tolerance: f64, detail: String) -> Self {
        Check {
            name: name.to_string(),
            margin,
            tolerance,
            pass: margin >= 0.0,
            detail,
        }
    }
}

pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

type CheckFn = Box<dyn Fn(u64) -> Check + Send + Sync>;

fn run_checks(checks: Vec<(&'static str, CheckFn)>, seed: u64) -> Report {
    let checks: Vec<Check> = checks
        .par_iter()
        .enumerate()
        .map(|(i, (_, f))| f(seed.wrapping_add(1000 * i as u64)))
        .collect();
    Report { checks }
}

pub fn run_suite(suite: &str, seed: u64) -> CliResult<Report> {
    match suite {
        "geometry" => Ok(run_checks(geometry_checks(), seed)),
        "volumes" => Ok(run_checks(volumes_checks(), seed)),
        "claims" => Ok(run_checks(claims_checks(), seed)),
        "poisson" => Ok(run_checks(poisson_checks(), seed)),
        other => Err(CliError::Usage(format!("unknown suite `{other}`"))),
    }
}

fn rng(seed: u64) -> ChaCha12Rng {
    ChaCha12Rng::seed_from_u64(seed)
}

fn boxed(f: impl Fn(u64) -> Check + Send + Sync + 'static) -> CheckFn {
    Box::new(f)
}

// ---------------------------------------------------------------- geometry

fn geometry_checks() -> Vec<(&'static str, CheckFn)> {
    vec![
        ("hyperbolic-identities", boxed(|_| {
            // tanh x < 1, 2 sinh x <= sinh 2x, tanh 2x <= 2 tanh x on a
            // log-spaced grid; margins normalized by the right-hand sides.
            let mut worst = f64::INFINITY;
            let n = 240;
            for i in 0..=n {
                let x = 1e-6 * (30.0f64 / 1e-6).powf(i as f64 / n as f64);
                if x < 17.0 {
                    worst = worst.min((1.0 - x.tanh()) / 1.0);
                }
                worst = worst.min(((2.0 * x).sinh() - 2.0 * x.sinh()) / (2.0 * x).sinh());
                worst = worst.min((2.0 * x.tanh() - (2.0 * x).tanh()) / (2.0 * x.tanh()));
            }
            Check::new("hyperbolic-identities", worst, 0.0,
                "min normalized slack of the three inequalities on x in [1e-6, 30]".into())
        })),
        ("angle-doubling", boxed(|_| {
            let tol = 1e-10;
            let mut worst: f64 = 0.0;
            let n = 240;
            for i in 0..=n {
                let x = 1e-6 * (30.0f64 / 1e-6).powf(i as f64 / n as f64);
                let c = (2.0 * x).cosh();
                let s = (2.0 * x).sinh();
                worst = worst.max(((2.0 * x.cosh().powi(2) - 1.0) - c).abs() / c);
                worst = worst.max(((2.0 * x.sinh() * x.cosh()) - s).abs() / s.max(1e-300));
            }
            Check::new("angle-doubling", tol - worst, tol,
                format!("worst relative error {worst:.2e}"))
        })),
        ("metric-symmetry", boxed(|seed| {
            let mut rng = rng(seed ^ 0xa11ce);
            let mut worst: f64 = 0.0;
            for m in [2usize, 3, 6] {
                let sampler = BallSampler::new(&HPoint::origin(m), 2.0).unwrap();
                for _ in 0..300 {
                    let p = sampler.sample(&mut rng);
                    let q = sampler.sample(&mut rng);
                    worst = worst
                        .max((distance(&p, &q).unwrap() - distance(&q, &p).unwrap()).abs());
                }
            }
            Check::new("metric-symmetry", 1e-12 - worst, 1e-12,
                format!("worst |d(p,q) - d(q,p)| = {worst:.2e}"))
        })),
        ("triangle-inequality", boxed(|seed| {
            let mut rng = rng(seed ^ 0x7a1);
            let mut worst = f64::INFINITY;
            for m in [2usize, 3, 6] {
                let sampler = BallSampler::new(&HPoint::origin(m), 2.0).unwrap();
                for _ in 0..400 {
                    let p = sampler.sample(&mut rng);
                    let q = sampler.sample(&mut rng);
                    let r = sampler.sample(&mut rng);
                    let slack = distance(&p, &q).unwrap() + distance(&q, &r).unwrap()
                        - distance(&p, &r).unwrap();
                    worst = worst.min(slack);
                }
            }
            Check::new("triangle-inequality", worst + 1e-8, 1e-8,
                format!("worst slack {worst:.2e} (allowed >= -1e-8)"))
        })),
        ("geodesic-roundtrip", boxed(|seed| {
            let mut rng = rng(seed ^ 0x9e0);
            let mut worst: f64 = 0.0;
            for m in [2usize, 4, 8] {
                let base = HPoint::origin(m);
                for i in 0..100 {
                    let t = 0.05 + 3.0 * (i as f64 / 99.0);
                    let dir = random_tangent(&base, &mut rng);
                    let p = geodesic_point(&base, &dir, t).unwrap();
                    worst = worst.max((distance(&base, &p).unwrap() - t).abs());
                }
            }
            Check::new("geodesic-roundtrip", 1e-9 - worst, 1e-9,
                format!("worst |d - t| = {worst:.2e}"))
        })),
        ("intersection-containment", boxed(|seed| {
            let mut rng = rng(seed ^ 0xc0411);
            let mut min_slack = f64::INFINITY;
            let mut filtered = 0u64;
            for case in 0..8u32 {
                let m = 2 + (case % 7) as usize;
                let r = 0.5 + 0.4 * f64::from(case);
                let tau = (0.1 + 0.08 * f64::from(case)) * 2.0 * r;
                let x = sample_ball_point(&HPoint::origin(m), 1.0, &mut rng);
                let u = geodesic_point(&x, &random_tangent(&x, &mut rng), tau).unwrap();
                let mid =
                    geodesic_point(&x, &direction_to(&x, &u).unwrap(), tau / 2.0).unwrap();
                let sigma = sigma_intersection(tau, r).unwrap();
                let sampler = BallSampler::new(&x, r).unwrap();
                for _ in 0..20_000 {
                    let y = sampler.sample(&mut rng);
                    if distance(&y, &u).unwrap() <= r {
                        filtered += 1;
                        min_slack =
                            min_slack.min(sigma + 1e-7 - distance(&y, &mid).unwrap());
                    }
                }
            }
            Check::new("intersection-containment", min_slack, 0.0,
                format!("{filtered} filtered samples, min slack to sigma+1e-7 = {min_slack:.2e}"))
        })),
        ("law-of-cosines-anchors", boxed(|_| {
            let mut worst: f64 = 0.0;
            let (a, b) = (1.3, 0.8);
            worst = worst.max((law_of_cosines_angle(a, b, a + b).unwrap() - PI).abs());
            worst = worst.max(law_of_cosines_angle(a, b, a - b).unwrap());
            let eq = law_of_cosines_angle(1.0, 1.0, 1.0).unwrap();
            worst = worst.max((eq - (1.0f64.cosh() / (1.0f64.cosh() + 1.0)).acos()).abs());
            Check::new("law-of-cosines-anchors", 1e-9 - worst, 1e-9,
                format!("worst anchor error {worst:.2e}"))
        })),
        ("sigma-intersection-anchor", boxed(|_| {
            let direct = (2f64.sinh().powi(2)
                - 2f64.cosh().powi(2) * 0.5f64.tanh().powi(2))
            .sqrt()
            .asinh();
            let err = (sigma_intersection(1.0, 2.0).unwrap() - direct).abs();
            let mut monotone = true;
            let mut prev = f64::INFINITY;
            for i in 1..60 {
                let tau = 2.0 * 1.7 * i as f64 / 60.0;
                let s = sigma_intersection(tau, 1.7).unwrap();
                monotone &= s < prev && s < 1.7;
                prev = s;
            }
            let margin = if monotone { 1e-10 - err } else { -1.0 };
            Check::new("sigma-intersection-anchor", margin, 1e-10,
                format!("anchor error {err:.2e}, strictly decreasing: {monotone}"))
        })),
    ]
}

// ----------------------------------------------------------------- volumes

fn volumes_checks() -> Vec<(&'static str, CheckFn)> {
    vec![
        ("closed-form-m2", boxed(|_| {
            let mut worst: f64 = 0.0;
            let mut r = 0.01;
            while r <= 30.0 {
                let q = log_ball_volume(2, r).unwrap().ln();
                let exact = (2.0 * PI).ln() + (2.0 * (0.5 * r).sinh().powi(2)).ln();
                worst = worst.max((q - exact).abs());
                r *= 1.37;
            }
            Check::new("closed-form-m2", 1e-9 - worst, 1e-9,
                format!("worst |log diff| = {worst:.2e} vs 2 pi (cosh r - 1)"))
        })),
        ("closed-form-m3", boxed(|_| {
            let mut worst: f64 = 0.0;
            let mut r = 0.01;
            while r <= 30.0 {
                let q = log_ball_volume(3, r).unwrap().ln();
                let exact = PI.ln() + ((2.0 * r).sinh() - 2.0 * r).ln();
                worst = worst.max((q - exact).abs());
                r *= 1.37;
            }
            Check::new("closed-form-m3", 1e-9 - worst, 1e-9,
                format!("worst |log diff| = {worst:.2e} vs pi (sinh 2r - 2r)"))
        })),
        ("asymptotic-m3-r30", boxed(|_| {
            let diff = (log_ball_volume(3, 30.0).unwrap().ln()
                - log_ball_volume_asymptotic(3, 30.0).ln())
            .abs();
            Check::new("asymptotic-m3-r30", 1e-6 - diff, 1e-6,
                format!("|exact - asymptotic| = {diff:.2e}"))
        })),
        ("asymptotic-window-m10-r20", boxed(|_| {
            let diff = (log_ball_volume(10, 20.0).unwrap().ln()
                - log_ball_volume_asymptotic(10, 20.0).ln())
            .abs();
            let window = (10.0 * 10.0 * (-20.0f64).exp()).ln_1p();
            Check::new("asymptotic-window-m10-r20", window - diff, window,
                format!("|diff| = {diff:.2e} vs ln(1 + 10 m e^-r) = {window:.2e}"))
        })),
        ("ratio-sandwich", boxed(|_| {
            let radii: Vec<f64> = (1..=20).map(|i| i as f64 * 0.25).collect();
            let mut worst = f64::INFINITY;
            for &m in &[2u32, 5, 10, 20, 50] {
                let logs: Vec<f64> = radii
                    .iter()
                    .map(|&r| log_ball_volume(m, r).unwrap().ln())
                    .collect();
                for i in 0..radii.len() {
                    for j in (i + 1)..radii.len() {
                        let ratio = logs[i] - logs[j];
                        let gap = lsinh(radii[i]) - lsinh(radii[j]);
                        worst = worst
                            .min(ratio - m as f64 * gap)
                            .min((m as f64 - 1.0) * gap - ratio);
                    }
                }
            }
            Check::new("ratio-sandwich", worst + 1e-9, 1e-9,
                format!("worst sandwich slack {worst:.2e} (allowed >= -1e-9)"))
        })),
        ("lr-asymptotic", boxed(|_| {
            let mut margin = f64::INFINITY;
            for &m in &[100u32, 1000, 10_000] {
                let r = (m as f64).ln() + 5.0;
                let dev =
                    (log_volume_ratio(m, r, 2.0 * r).unwrap() + r * (m as f64 - 1.0)).abs();
                let window = (50.0 * m as f64 * (-r).exp()).ln_1p();
                margin = margin.min(window - dev);
            }
            Check::new("lr-asymptotic", margin, 0.0,
                format!("min window margin {margin:.3}"))
        })),
        ("sphere-surface-anchors", boxed(|_| {
            let mut worst: f64 = 0.0;
            worst = worst.max((log_sphere_surface(2).ln() - (2.0 * PI).ln()).abs());
            worst = worst.max((log_sphere_surface(3).ln() - (4.0 * PI).ln()).abs());
            worst = worst
                .max((log_sphere_surface(10).ln() - (2.0 * PI.powi(5) / 24.0).ln()).abs());
            Check::new("sphere-surface-anchors", 1e-9 - worst, 1e-9,
                format!("worst anchor error {worst:.2e}"))
        })),
        ("flat-limit", boxed(|_| {
            let mut worst: f64 = 0.0;
            let r = 1e-4;
            for m in 2..=6u32 {
                let hyp = log_ball_volume(m, r).unwrap().ln();
                let euc = (m as f64 / 2.0) * PI.ln()
                    - ln_gamma_half_int(m as f64 / 2.0 + 1.0)
                    + m as f64 * r.ln();
                worst = worst.max((hyp - euc).abs());
            }
            Check::new("flat-limit", 1e-6 - worst, 1e-6,
                format!("worst |log hyperbolic - log euclidean| = {worst:.2e} at r = 1e-4"))
        })),
    ]
}

// Exact ln Gamma at the half-integers the flat-limit check touches,
// keeping the CLI free of a special-functions dependency.
fn ln_gamma_half_int(x: f64) -> f64 {
    // x is m/2 + 1 for m in 2..=6, i.e. {2, 2.5, 3, 3.5, 4}.
    let half = (PI.sqrt()).ln();
    match (2.0 * x) as u32 {
        4 => 0.0,                                  // Gamma(2) = 1
        5 => half + (3.0f64 / 4.0).ln(),           // Gamma(2.5) = 3 sqrt(pi)/4
        6 => 2.0f64.ln(),                          // Gamma(3) = 2
        7 => half + (15.0f64 / 8.0).ln(),          // Gamma(3.5) = 15 sqrt(pi)/8
        8 => 6.0f64.ln(),                          // Gamma(4) = 6
        _ => unreachable!("flat-limit check only uses m in 2..=6"),
    }
}

// ------------------------------------------------------------------ claims

fn claims_checks() -> Vec<(&'static str, CheckFn)> {
    const GRID_M: [u32; 3] = [10_000, 100_000, 1_000_000];
    const GRID_R: [f64; 3] = [0.1, 1.0, 10.0];
    vec![
        ("tau-bracket", boxed(|_| {
            let mut margin = f64::INFINITY;
            for &m in &GRID_M {
                for &r in &GRID_R {
                    match solve_tau(m, r) {
                        Ok(root) => {
                            let width_frac = (root.hi - root.lo) / (1e-13 * r);
                            let sign_ok = gamma_fn(root.lo, m, r).unwrap() < 0.0
                                && gamma_fn(root.hi, m, r).unwrap() > 0.0;
                            margin = margin.min(1.0 - width_frac);
                            if !sign_ok {
                                margin = -1.0;
                            }
                        }
                        Err(_) => margin = -1.0,
                    }
                }
            }
            Check::new("tau-bracket", margin, 0.0,
                "bracket width below 1e-13 R with a sign change, 9 cells".into())
        })),
        ("sinh-ratio-window", boxed(|_| {
            let mut worst: f64 = 0.0;
            for &m in &GRID_M {
                for &r in &GRID_R {
                    let tau = solve_tau(m, r).unwrap().tau;
                    worst = worst
                        .max(check_claim_basic(m, r, tau).unwrap().log_q.abs());
                }
            }
            let tol = 20.0f64.ln();
            Check::new("sinh-ratio-window", tol - worst, tol,
                format!("worst |ln q| = {worst:.3} vs ln 20 = {tol:.3}"))
        })),
        ("covolume-margin", boxed(|_| {
            let mut min_margin = f64::INFINITY;
            for &m in &[10_000u32, 100_000] {
                for &r in &GRID_R {
                    let tau = solve_tau(m, r).unwrap().tau;
                    min_margin = min_margin.min(check_covolume_claim(m, r, tau).unwrap());
                }
            }
            Check::new("covolume-margin", min_margin, 0.0,
                format!("min log-margin {min_margin:.2} over m in {{1e4, 1e5}} x R in {{0.1, 1, 10}}"))
        })),
        ("covolume-margin-growth", boxed(|_| {
            let m1 = check_covolume_claim(10_000, 1.0, solve_tau(10_000, 1.0).unwrap().tau)
                .unwrap();
            let m2 =
                check_covolume_claim(100_000, 1.0, solve_tau(100_000, 1.0).unwrap().tau)
                    .unwrap();
            Check::new("covolume-margin-growth", m2 - m1, 0.0,
                format!("margin grows {m1:.2} -> {m2:.2} as m: 1e4 -> 1e5 at R = 1"))
        })),
        ("delta-monotone-in-m", boxed(|_| {
            let mut prev = f64::NEG_INFINITY;
            let mut min_step = f64::INFINITY;
            for &m in &GRID_M {
                let tau = solve_tau(m, 1.0).unwrap().tau;
                let ld = log_delta_param(m, 1.0, tau).unwrap();
                min_step = min_step.min(ld - prev);
                prev = ld;
            }
            Check::new("delta-monotone-in-m", min_step, 0.0,
                format!("ln Delta strictly increasing at R = 1; ends at {prev:.3e}"))
        })),
        ("improvement-factor-identity", boxed(|_| {
            let mut worst: f64 = 0.0;
            for &m in &GRID_M {
                for &r in &GRID_R {
                    let row = bounds_row(m, r, 0.1).unwrap();
                    if row.tau.is_some() {
                        worst = worst.max(
                            (row.log_main - row.log_l - improvement_factor_log(m, r, 0.1))
                                .abs(),
                        );
                    }
                }
            }
            Check::new("improvement-factor-identity", 1e-9 - worst, 1e-9,
                format!("worst |gap - ln factor| = {worst:.2e}"))
        })),
        ("trivial-bound-anchors", boxed(|_| {
            // Normalized margin: the plane anchor within 1e-6 and the
            // large-m deviation within ln(1.01), each scaled to 1.
            let lin = trivial_lower_bound_log(2, 1.0).unwrap().exp();
            let expected = (1.0f64.cosh() - 1.0) / (2.0f64.cosh() - 1.0);
            let anchor_err = (lin - expected).abs();
            let dev = (trivial_lower_bound_log(10_000, 15.0).unwrap() + 15.0 * 9999.0).abs();
            let margin = (1.0 - anchor_err / 1e-6).min(1.0 - dev / 1.01f64.ln());
            Check::new("trivial-bound-anchors", margin, 0.0,
                format!("plane anchor {lin:.6}, large-m deviation {dev:.2e}"))
        })),
        ("local-density-bound", boxed(|_| {
            let flat = local_density_bound_m2(1e-4).unwrap();
            let horo = local_density_bound_m2(20.0).unwrap();
            let mut worst = (flat - PI / 12f64.sqrt()).abs().max((horo - 3.0 / PI).abs());
            let mut prev = 0.0;
            for i in 1..=100 {
                let r = i as f64 * 0.1;
                let v = local_density_bound_m2(r).unwrap();
                if v <= prev || v <= 0.0 || v >= 1.0 {
                    worst = 1.0;
                }
                prev = v;
            }
            Check::new("local-density-bound", 1e-3 - worst, 1e-3,
                format!("limit errors: flat {:.2e}, horocyclic {:.2e}; increasing on (0, 10]",
                    (flat - PI / 12f64.sqrt()).abs(), (horo - 3.0 / PI).abs()))
        })),
    ]
}

// ----------------------------------------------------------------- poisson

fn poisson_checks() -> Vec<(&'static str, CheckFn)> {
    vec![
        ("mecke-identity", boxed(|seed| {
            let rep = mecke_check(2, 0.5, 2.0, 0.5, 3.0, 600, seed).unwrap();
            let window = 3.0 * rep.std_error;
            let dev = (rep.empirical_mean - rep.analytic).abs();
            Check::new("mecke-identity", window - dev, window,
                format!("empirical {:.4} vs analytic {:.4} (se {:.4})",
                    rep.empirical_mean, rep.analytic, rep.std_error))
        })),
        ("poisson-tail-bounds", boxed(|seed| {
            let mut margin = f64::INFINITY;
            let mut details = Vec::new();
            for (i, &(mean, t)) in [(5.0f64, 0.5f64), (20.0, 1.0), (50.0, 2.0)]
                .iter()
                .enumerate()
            {
                let rep = poisson_tail_check(mean, t, 200_000, seed + i as u64).unwrap();
                margin = margin.min(rep.bound + 3.0 * rep.std_error - rep.empirical);
                details.push(format!("({mean},{t}): {:.2e} <= {:.2e}", rep.empirical, rep.bound));
            }
            Check::new("poisson-tail-bounds", margin, 0.0, details.join("; "))
        })),
        ("poisson-mean-count", boxed(|seed| {
            let cfg = SimConfig {
                m: 2,
                r: 0.5,
                l: 3.0,
                intensity: Intensity::TargetDegree(20.0),
                seed,
                degree_cap: None,
                codegree_cap: None,
                mc_samples: 1,
            };
            let resolved = cfg.resolve().unwrap();
            let expected = resolved.lambda * 2.0 * PI * (3.0f64.cosh() - 1.0);
            let runs = 200u64;
            let mut total = 0usize;
            for k in 0..runs {
                let mut rng = rng(seed.wrapping_add(k));
                total += sample_poisson(&resolved, &mut rng).unwrap().len();
            }
            let mean = total as f64 / runs as f64;
            let se = (expected / runs as f64).sqrt();
            Check::new("poisson-mean-count", 3.0 * se - (mean - expected).abs(), 3.0 * se,
                format!("mean {mean:.2} vs lambda vol(B_L) = {expected:.2}"))
        })),
        ("pipeline-validity", boxed(|seed| {
            let mut ok = true;
            let mut nonempty = 0u32;
            for k in 0..6u64 {
                let cfg = SimConfig {
                    m: 2 + (k % 2) as u32,
                    r: 0.4,
                    l: 1.9,
                    intensity: Intensity::TargetDegree(15.0),
                    seed: seed.wrapping_add(k),
                    degree_cap: None,
                    // Alternate the degenerate formula default and a
                    // desk-scale cap.
                    codegree_cap: if k % 2 == 0 { None } else { Some(15.0) },
                    mc_samples: 1000,
                };
                let result = run_pipeline(&cfg).unwrap();
                ok &= result.packing_valid;
                ok &= result.kept.len() as f64
                    >= result.n_survivors as f64
                        / (result.max_degree_survivors as f64 + 1.0);
                ok &= result.kept.is_empty() || result.density_core >= 0.0;
                if !result.kept.is_empty() {
                    nonempty += 1;
                }
            }
            Check::new("pipeline-validity", if ok { 1.0 } else { -1.0 }, 0.0,
                format!("6 runs valid, {nonempty} nonempty packings"))
        })),
        ("pipeline-determinism", boxed(|seed| {
            let cfg = SimConfig {
                m: 2,
                r: 0.5,
                l: 2.6,
                intensity: Intensity::TargetDegree(12.0),
                seed,
                degree_cap: None,
                codegree_cap: Some(12.0),
                mc_samples: 500,
            };
            let a = serde_json::to_string(&run_pipeline(&cfg).unwrap()).unwrap();
            let b = serde_json::to_string(&run_pipeline(&cfg).unwrap()).unwrap();
            Check::new("pipeline-determinism", if a == b { 1.0 } else { -1.0 }, 0.0,
                "two identical configs produce byte-identical results".into())
        })),
    ]
}
